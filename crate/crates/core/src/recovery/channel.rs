//! Quantum channels in Kraus form.

use rand::Rng;

use crate::error::{Error, Result};
use crate::qmat::{
    frobenius, identity, random_isometry, CMat, DensityOperator, HermitianMatrix, Subsystem, C64,
};

/// Trace-preservation tolerance on `Σ K^* K - I`.
pub const CHANNEL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    kraus: Vec<CMat>,
    d_in: usize,
    d_out: usize,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let (d_out, d_in) = (first.nrows(), first.ncols());
        let mut sum = CMat::zeros(d_in, d_in);
        for k in &kraus {
            if k.nrows() != d_out || k.ncols() != d_in {
                return Err(Error::InvalidChannel("Kraus shapes differ".into()));
            }
            sum += k.adjoint() * k;
        }
        let dev = frobenius(&(sum - identity(d_in)));
        if dev > CHANNEL_TOL {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving (deviation {dev:e})"
            )));
        }
        Ok(Self { kraus, d_in, d_out })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![identity(d)],
            d_in: d,
            d_out: d,
        }
    }

    /// Partial trace over one factor of `C^{d_a} ⊗ C^{d_b}`.
    pub fn partial_trace(d_a: usize, d_b: usize, keep: Subsystem) -> Result<Self> {
        let (kept, traced) = match keep {
            Subsystem::A => (d_a, d_b),
            Subsystem::B => (d_b, d_a),
        };
        let mut kraus = Vec::with_capacity(traced);
        for t in 0..traced {
            let mut k = CMat::zeros(kept, d_a * d_b);
            for q in 0..kept {
                let col = match keep {
                    Subsystem::A => q * d_b + t,
                    Subsystem::B => t * d_b + q,
                };
                k[(q, col)] = C64::new(1.0, 0.0);
            }
            kraus.push(k);
        }
        Self::new(kraus)
    }

    /// Random channel from a Haar isometry `C^{d_in} → C^{d_out} ⊗ C^{n_kraus}`.
    pub fn random<R: Rng + ?Sized>(d_in: usize, d_out: usize, n_kraus: usize, rng: &mut R) -> Result<Self> {
        if d_out * n_kraus < d_in {
            return Err(Error::InvalidChannel(
                "environment too small for an isometry".into(),
            ));
        }
        let v = random_isometry(d_in, d_out * n_kraus, rng)?;
        let kraus = (0..n_kraus)
            .map(|k| v.rows(k * d_out, d_out).into_owned())
            .collect();
        Self::new(kraus)
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    fn check_in(&self, x: &CMat) -> Result<()> {
        if x.nrows() != self.d_in || x.ncols() != self.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: x.nrows(),
            });
        }
        Ok(())
    }

    /// `Φ(x) = Σ K x K^*`.
    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        self.check_in(x)?;
        let mut out = CMat::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        Ok(out)
    }

    pub fn apply_state(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        DensityOperator::new(HermitianMatrix::from_hermitian(self.apply(rho.mat())?))
    }

    /// `Φ^*(y) = Σ K^* y K`.
    pub fn adjoint(&self, y: &CMat) -> Result<CMat> {
        if y.nrows() != self.d_out || y.ncols() != self.d_out {
            return Err(Error::DimensionMismatch {
                expected: self.d_out,
                found: y.nrows(),
            });
        }
        let mut out = CMat::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            out += k.adjoint() * y * k;
        }
        Ok(out)
    }

    pub fn choi(&self) -> CMat {
        choi_matrix(self.d_in, |x| self.apply(x).expect("input dimension matches"))
    }
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)` of a linear map on `d_in x d_in` matrices.
pub fn choi_matrix(d_in: usize, map: impl Fn(&CMat) -> CMat) -> CMat {
    let mut blocks: Vec<Vec<CMat>> = Vec::with_capacity(d_in);
    let mut d_out = 0;
    for i in 0..d_in {
        let mut row = Vec::with_capacity(d_in);
        for j in 0..d_in {
            let mut e = CMat::zeros(d_in, d_in);
            e[(i, j)] = C64::new(1.0, 0.0);
            let img = map(&e);
            d_out = img.nrows();
            row.push(img);
        }
        blocks.push(row);
    }
    let mut c = CMat::zeros(d_in * d_out, d_in * d_out);
    for i in 0..d_in {
        for j in 0..d_in {
            c.view_mut((i * d_out, j * d_out), (d_out, d_out))
                .copy_from(&blocks[i][j]);
        }
    }
    c
}

/// Smallest eigenvalue of a Choi matrix (complete positivity when `≥ 0`).
pub fn min_choi_eigenvalue(choi: &CMat) -> Result<f64> {
    let dec = HermitianMatrix::from_hermitian(choi.clone()).eig()?;
    Ok(dec.eigenvalues().first().copied().unwrap_or(0.0))
}
