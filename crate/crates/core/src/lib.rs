//! Finite-dimensional quantum f-divergences, Petz-type recovery maps, and
//! numerically certified recoverability inequalities.
//!
//! | module | contents |
//! |---|---|
//! | [`qmat`] | Hermitian linear algebra, density operators, random instances |
//! | [`quad`] | Gauss–Kronrod and Gauss–Legendre quadrature |
//! | [`fclass`] | anti-monotone function catalog and integral representations |
//! | [`divergence`] | standard f-divergences, Rényi families, fidelities |
//! | [`optdiv`] | optimized f-divergences (closed form and iterative) |
//! | [`recovery`] | subalgebras, channels, Petz / rotated / universal maps |
//! | [`bounds`] | lemma vectors, generic bounds, theorem certificates |
//! | [`harness`] | campaigns, state files, replay, CLI plumbing |

pub mod bounds;
pub mod divergence;
pub mod error;
pub mod fclass;
pub mod harness;
pub mod optdiv;
pub mod qmat;
pub mod quad;
pub mod recovery;

pub use error::{Error, Result};
