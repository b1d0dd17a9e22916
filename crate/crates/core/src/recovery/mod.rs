//! Subalgebras with their trace-preserving conditional expectations, quantum
//! channels in Kraus form, and Petz-type recovery maps.
//!
//! Every finite-dimensional *-subalgebra is, up to a unitary `W`, a direct sum
//! `⊕_k M_{n_k} ⊗ I_{m_k}`. The conditional expectation onto it zeroes the
//! off-diagonal blocks and replaces each diagonal block `X_k` by
//! `tr_{m_k}(X_k) ⊗ I_{m_k}/m_k`. Tensor factors and pinchings are stored in
//! their own form and mapped to this block form on construction.

mod channel;
mod petz;

pub use channel::{choi_matrix, min_choi_eigenvalue, QuantumChannel};
pub use petz::{
    petz_channel, petz_subalg, rho_preserving_expectation, rotated_petz_channel,
    rotated_petz_subalg, universal_petz_channel, universal_petz_subalg, ChannelPetz, PetzMap,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    frobenius, identity, random_unitary, CMat, DensityOperator, HermitianMatrix, MatrixRecord,
    Subsystem, C64,
};

/// Tolerance on the conditional-expectation invariants.
pub const SUBALGEBRA_TOL: f64 = 1e-10;

/// One summand `M_n ⊗ I_m` of a block decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub dim: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubalgebraKind {
    TensorFactor {
        d_a: usize,
        d_b: usize,
        keep: Subsystem,
    },
    Pinching {
        projectors: Vec<MatrixRecord>,
    },
    Block {
        blocks: Vec<Block>,
        basis: Option<MatrixRecord>,
    },
}

/// A *-subalgebra `N ⊆ M_d` with its conditional expectation.
#[derive(Clone, Debug, PartialEq)]
pub struct SubalgebraSpec {
    kind: SubalgebraKind,
    dim: usize,
    basis: CMat,
    blocks: Vec<Block>,
}

impl Serialize for SubalgebraSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.kind.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubalgebraSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let kind = SubalgebraKind::deserialize(d)?;
        SubalgebraSpec::new(kind).map_err(serde::de::Error::custom)
    }
}

fn range_basis(p: &CMat) -> Result<Vec<nalgebra::DVector<C64>>> {
    let dec = HermitianMatrix::new(p.clone())?.eig()?;
    Ok(dec
        .eigenvalues()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.5)
        .map(|(k, _)| dec.eigenvectors().column(k).into_owned())
        .collect())
}

impl SubalgebraSpec {
    pub fn new(kind: SubalgebraKind) -> Result<Self> {
        let (dim, basis, blocks) = match &kind {
            SubalgebraKind::TensorFactor { d_a, d_b, keep } => {
                let (d_a, d_b) = (*d_a, *d_b);
                if d_a == 0 || d_b == 0 {
                    return Err(Error::InvalidSubalgebra("empty tensor factor".into()));
                }
                let d = d_a * d_b;
                match keep {
                    Subsystem::A => (
                        d,
                        identity(d),
                        vec![Block {
                            dim: d_a,
                            multiplicity: d_b,
                        }],
                    ),
                    Subsystem::B => {
                        // column (b, a) of the basis is |a⟩ ⊗ |b⟩
                        let mut w = CMat::zeros(d, d);
                        for a in 0..d_a {
                            for b in 0..d_b {
                                w[(a * d_b + b, b * d_a + a)] = C64::new(1.0, 0.0);
                            }
                        }
                        (
                            d,
                            w,
                            vec![Block {
                                dim: d_b,
                                multiplicity: d_a,
                            }],
                        )
                    }
                }
            }
            SubalgebraKind::Pinching { projectors } => {
                if projectors.is_empty() {
                    return Err(Error::InvalidSubalgebra("no projectors".into()));
                }
                let ps: Vec<CMat> = projectors
                    .iter()
                    .map(CMat::try_from)
                    .collect::<Result<_>>()?;
                let d = ps[0].nrows();
                let mut sum = CMat::zeros(d, d);
                let mut cols = Vec::new();
                let mut blocks = Vec::new();
                for p in &ps {
                    if p.nrows() != d || p.ncols() != d {
                        return Err(Error::DimensionMismatch {
                            expected: d,
                            found: p.nrows(),
                        });
                    }
                    if frobenius(&(p * p - p)) > SUBALGEBRA_TOL * d as f64 {
                        return Err(Error::InvalidSubalgebra("projector is not idempotent".into()));
                    }
                    sum += p;
                    let r = range_basis(p)?;
                    if r.is_empty() {
                        return Err(Error::InvalidSubalgebra("zero projector".into()));
                    }
                    blocks.push(Block {
                        dim: r.len(),
                        multiplicity: 1,
                    });
                    cols.extend(r);
                }
                if frobenius(&(sum - identity(d))) > SUBALGEBRA_TOL * d as f64 || cols.len() != d {
                    return Err(Error::InvalidSubalgebra(
                        "projectors do not resolve the identity".into(),
                    ));
                }
                (d, CMat::from_columns(&cols), blocks)
            }
            SubalgebraKind::Block { blocks, basis } => {
                let d: usize = blocks.iter().map(|b| b.dim * b.multiplicity).sum();
                if d == 0 || blocks.iter().any(|b| b.dim == 0 || b.multiplicity == 0) {
                    return Err(Error::InvalidSubalgebra("empty block".into()));
                }
                let w = match basis {
                    Some(r) => CMat::try_from(r)?,
                    None => identity(d),
                };
                if w.nrows() != d || w.ncols() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: w.nrows(),
                    });
                }
                if frobenius(&(w.adjoint() * &w - identity(d))) > SUBALGEBRA_TOL * d as f64 {
                    return Err(Error::InvalidSubalgebra("basis is not unitary".into()));
                }
                (d, w, blocks.clone())
            }
        };
        let spec = Self {
            kind,
            dim,
            basis,
            blocks,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn tensor_factor(d_a: usize, d_b: usize, keep: Subsystem) -> Result<Self> {
        Self::new(SubalgebraKind::TensorFactor { d_a, d_b, keep })
    }

    pub fn pinching(projectors: &[CMat]) -> Result<Self> {
        Self::new(SubalgebraKind::Pinching {
            projectors: projectors.iter().map(MatrixRecord::from).collect(),
        })
    }

    /// Pinching onto the computational basis (the diagonal subalgebra).
    pub fn diagonal(d: usize) -> Result<Self> {
        let ps: Vec<CMat> = (0..d)
            .map(|k| {
                let mut p = CMat::zeros(d, d);
                p[(k, k)] = C64::new(1.0, 0.0);
                p
            })
            .collect();
        Self::pinching(&ps)
    }

    pub fn block(blocks: Vec<Block>, basis: Option<&CMat>) -> Result<Self> {
        Self::new(SubalgebraKind::Block {
            blocks,
            basis: basis.map(MatrixRecord::from),
        })
    }

    /// Pinching in a Haar-random basis with a random partition into at least
    /// two nonempty blocks (`d ≥ 2`).
    pub fn random_pinching<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidSubalgebra("pinching needs d ≥ 2".into()));
        }
        let u = random_unitary(d, rng);
        let parts = rng.random_range(2..=d);
        let mut sizes = vec![1usize; parts];
        for _ in parts..d {
            let k = rng.random_range(0..parts);
            sizes[k] += 1;
        }
        let mut projectors = Vec::with_capacity(parts);
        let mut start = 0;
        for size in sizes {
            let cols = u.columns(start, size);
            projectors.push(&cols * cols.adjoint());
            start += size;
        }
        Self::pinching(&projectors)
    }

    pub fn kind(&self) -> &SubalgebraKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// The conditional expectation `E(X)`.
    pub fn expect(&self, x: &CMat) -> Result<CMat> {
        if x.nrows() != self.dim || x.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.nrows(),
            });
        }
        let y = self.basis.adjoint() * x * &self.basis;
        let mut out = CMat::zeros(self.dim, self.dim);
        let mut off = 0;
        for b in &self.blocks {
            let (n, m) = (b.dim, b.multiplicity);
            let inv_m = C64::new(1.0 / m as f64, 0.0);
            for i in 0..n {
                for j in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..m {
                        acc += y[(off + i * m + k, off + j * m + k)];
                    }
                    let v = acc * inv_m;
                    for k in 0..m {
                        out[(off + i * m + k, off + j * m + k)] = v;
                    }
                }
            }
            off += n * m;
        }
        Ok(&self.basis * out * self.basis.adjoint())
    }

    pub fn conditional_expectation(&self, x: &HermitianMatrix) -> Result<HermitianMatrix> {
        Ok(HermitianMatrix::from_hermitian(self.expect(x.matrix())?))
    }

    /// `ρ_N = E(ρ)` as a density operator.
    pub fn restrict(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        DensityOperator::new(self.conditional_expectation(rho.matrix())?)
    }

    /// `‖E(X) - X‖_F`.
    pub fn membership_residual(&self, x: &CMat) -> Result<f64> {
        Ok(frobenius(&(self.expect(x)? - x)))
    }

    /// Superoperator matrix of `E` in the matrix-unit basis (column-major vec).
    fn superoperator(&self) -> Result<CMat> {
        let d = self.dim;
        let mut s = CMat::zeros(d * d, d * d);
        for j in 0..d {
            for i in 0..d {
                let mut e = CMat::zeros(d, d);
                e[(i, j)] = C64::new(1.0, 0.0);
                let img = self.expect(&e)?;
                let col = j * d + i;
                for (row, v) in img.iter().enumerate() {
                    s[(row, col)] = *v;
                }
            }
        }
        Ok(s)
    }

    /// Checks that `E` is unital, trace-preserving, idempotent and HS self-adjoint.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        let tol = SUBALGEBRA_TOL * d as f64;
        if frobenius(&(self.expect(&identity(d))? - identity(d))) > tol {
            return Err(Error::InvalidSubalgebra("not unital".into()));
        }
        let s = self.superoperator()?;
        if frobenius(&(&s * &s - &s)) > tol * d as f64 {
            return Err(Error::InvalidSubalgebra("not idempotent".into()));
        }
        if frobenius(&(s.adjoint() - &s)) > tol * d as f64 {
            return Err(Error::InvalidSubalgebra("not self-adjoint".into()));
        }
        // trace preservation: the row functional vec(I)^* is fixed by S
        for col in 0..d * d {
            let tr_img: C64 = (0..d).map(|k| s[(k * d + k, col)]).sum();
            let tr_in = if col % (d + 1) == 0 { 1.0 } else { 0.0 };
            if (tr_img - C64::new(tr_in, 0.0)).norm() > tol {
                return Err(Error::InvalidSubalgebra("not trace preserving".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{kron, random_density, rng_from_seed};

    #[test]
    fn tensor_factor_expectation_of_product() {
        let ra = random_density(2, 2, 1).unwrap();
        let rb = random_density(3, 3, 2).unwrap();
        let n = SubalgebraSpec::tensor_factor(2, 3, Subsystem::A).unwrap();
        let e = n.expect(&kron(ra.mat(), rb.mat())).unwrap();
        let expect = kron(ra.mat(), &(identity(3) / C64::new(3.0, 0.0)));
        assert!(frobenius(&(e - expect)) < 1e-14);
        let nb = SubalgebraSpec::tensor_factor(2, 3, Subsystem::B).unwrap();
        let e = nb.expect(&kron(ra.mat(), rb.mat())).unwrap();
        let expect = kron(&(identity(2) / C64::new(2.0, 0.0)), rb.mat());
        assert!(frobenius(&(e - expect)) < 1e-14);
    }

    #[test]
    fn elements_of_n_are_fixed() {
        let mut rng = rng_from_seed(4);
        let n = SubalgebraSpec::random_pinching(4, &mut rng).unwrap();
        let x = crate::qmat::random_hermitian(4, &mut rng);
        let ex = n.expect(x.matrix()).unwrap();
        assert!(n.membership_residual(&ex).unwrap() < 1e-12);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut p = CMat::zeros(2, 2);
        p[(0, 0)] = C64::new(1.0, 0.0);
        assert!(SubalgebraSpec::pinching(&[p.clone()]).is_err());
        assert!(SubalgebraSpec::pinching(&[p.clone() * C64::new(2.0, 0.0), p]).is_err());
        assert!(SubalgebraSpec::block(vec![Block { dim: 0, multiplicity: 1 }], None).is_err());
        assert!(SubalgebraSpec::tensor_factor(0, 2, Subsystem::A).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let n = SubalgebraSpec::diagonal(3).unwrap();
        assert!(matches!(
            n.expect(&identity(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn block_form_round_trips_through_json() {
        let u = random_unitary(5, &mut rng_from_seed(8));
        let n = SubalgebraSpec::block(
            vec![
                Block { dim: 1, multiplicity: 1 },
                Block { dim: 2, multiplicity: 2 },
            ],
            Some(&u),
        )
        .unwrap();
        let json = serde_json::to_string(&n).unwrap();
        let back: SubalgebraSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(n, back);
    }
}
