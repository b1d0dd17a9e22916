//! Seeded random instances: Ginibre densities, Haar unitaries, GUE matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{hermitize, CMat, DensityOperator, HermitianMatrix, C64};
use crate::error::{Error, Result};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        entries.push(C64::new(re, im));
    }
    CMat::from_vec(rows, cols, entries)
}

/// `G G^* / tr(G G^*)` for a `dim x rank` complex Gaussian `G`, before clipping.
pub fn ginibre_density_matrix<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> Result<HermitianMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidRank { rank, dim });
    }
    let g = gaussian_matrix(dim, rank, rng);
    let w = &g * g.adjoint();
    let tr: f64 = w.diagonal().iter().map(|z| z.re).sum();
    Ok(HermitianMatrix::from_hermitian(w / C64::new(tr, 0.0)))
}

pub fn random_density_with<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    DensityOperator::new(ginibre_density_matrix(dim, rank, rng)?)
}

/// Ginibre-induced random density operator, deterministic per seed.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityOperator> {
    random_density_with(dim, rank, &mut rng_from_seed(seed))
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let qr = gaussian_matrix(dim, dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// `d_out x d_in` isometry (`V^* V = I`), the first columns of a Haar unitary.
pub fn random_isometry<R: Rng + ?Sized>(d_in: usize, d_out: usize, rng: &mut R) -> Result<CMat> {
    if d_in > d_out {
        return Err(Error::DimensionMismatch {
            expected: d_in,
            found: d_out,
        });
    }
    let u = random_unitary(d_out, rng);
    Ok(u.columns(0, d_in).into_owned())
}

/// GUE-distributed Hermitian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    HermitianMatrix::from_hermitian(hermitize(&gaussian_matrix(dim, dim, rng)))
}
