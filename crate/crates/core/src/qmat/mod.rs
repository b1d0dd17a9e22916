//! Dense complex Hermitian linear algebra.
//!
//! Spectral decompositions are deterministic: eigenvalues come out ascending
//! and each eigenvector is rotated so that its largest-modulus component is
//! real and positive. Density operators are made faithful by clipping
//! eigenvalues below `1e-12 * lambda_max` up to that floor and renormalizing.

mod random;

pub use random::{
    ginibre_density_matrix, random_density, random_density_with, random_hermitian,
    random_isometry, random_unitary, rng_from_seed,
};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

/// Relative Hermiticity tolerance on the max-entry deviation `|A - A^*|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative floor applied to density spectra (times the largest eigenvalue).
pub const FAITHFUL_FLOOR_REL: f64 = 1e-12;
/// Tolerance on the trace of a density operator.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted in a density operator before clipping.
pub const NEGATIVITY_TOL: f64 = 1e-12;

const EIG_MAX_ITER: usize = 10_000;

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `(m + m^*) / 2`.
pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Max-entry deviation `|m - m^*|`.
pub fn hermiticity_deviation(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Frobenius norm.
pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Complex trace.
pub fn trace(m: &CMat) -> C64 {
    m.diagonal().iter().sum()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

fn ensure_finite(m: &CMat, what: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

fn ensure_square(m: &CMat) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// A validated Hermitian matrix. The stored entries are exactly Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    m: CMat,
}

impl HermitianMatrix {
    /// Validates Hermiticity within `1e-12 * max(1, |A|_max)` and symmetrizes.
    pub fn new(m: CMat) -> Result<Self> {
        ensure_square(&m)?;
        ensure_finite(&m, "Hermitian matrix entries")?;
        let deviation = hermiticity_deviation(&m);
        if deviation > HERMITIAN_TOL * max_abs(&m).max(1.0) {
            return Err(Error::NonHermitianInput { deviation });
        }
        Ok(Self { m: hermitize(&m) })
    }

    /// Symmetrizes without validation; for results of algebra known to be Hermitian.
    pub(crate) fn from_hermitian(m: CMat) -> Self {
        Self { m: hermitize(&m) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMat::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Self { m }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn into_matrix(self) -> CMat {
        self.m
    }

    pub fn trace(&self) -> f64 {
        trace(&self.m).re
    }

    pub fn eig(&self) -> Result<SpectralDecomposition> {
        eig_hermitian(self)
    }
}

/// Eigenvalues in ascending order with unitary eigenvector columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMat,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMat {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(g(λ)) U^*` for a complex-valued scalar function.
    pub fn apply_complex(&self, g: impl Fn(f64) -> C64) -> CMat {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let gj = g(l);
            for i in 0..u.nrows() {
                scaled[(i, j)] *= gj;
            }
        }
        scaled * u.adjoint()
    }

    /// `U diag(g(λ)) U^*` for a real scalar function; the result is Hermitian.
    pub fn apply(&self, g: impl Fn(f64) -> f64) -> CMat {
        hermitize(&self.apply_complex(|l| C64::new(g(l), 0.0)))
    }

    pub fn reconstruct(&self) -> CMat {
        self.apply(|l| l)
    }

    fn with_eigenvalues(&self, eigenvalues: Vec<f64>) -> Self {
        Self {
            eigenvalues,
            eigenvectors: self.eigenvectors.clone(),
        }
    }
}

/// Deterministic Hermitian eigendecomposition.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: vec![],
            eigenvectors: CMat::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(a.m.clone(), f64::EPSILON, EIG_MAX_ITER)
        .ok_or_else(|| Error::ConvergenceFailure("symmetric QR iteration stalled".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let mut eigenvalues = Vec::with_capacity(n);
    let mut u = CMat::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        eigenvalues.push(eig.eigenvalues[src]);
        let col = eig.eigenvectors.column(src);
        let mut best = 0;
        let mut best_abs = -1.0;
        for i in 0..n {
            let a = col[i].norm();
            if a > best_abs {
                best_abs = a;
                best = i;
            }
        }
        let phase = if best_abs > 0.0 {
            col[best].conj() / best_abs
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            u[(i, k)] = col[i] * phase;
        }
        u[(best, k)] = C64::new(u[(best, k)].norm(), 0.0);
    }
    let dec = SpectralDecomposition {
        eigenvalues,
        eigenvectors: u,
    };
    let scale = frobenius(&a.m);
    let recon_err = frobenius(&(dec.reconstruct() - &a.m));
    let unit_err = frobenius(&(dec.eigenvectors.adjoint() * &dec.eigenvectors - identity(n)));
    if recon_err > 1e-10 * n as f64 * scale.max(f64::MIN_POSITIVE) || unit_err > 1e-10 * n as f64
    {
        return Err(Error::ConvergenceFailure(format!(
            "post-check failed: reconstruction {recon_err:e}, unitarity {unit_err:e}"
        )));
    }
    Ok(dec)
}

/// `U g(Λ) U^*` for a positive semidefinite matrix.
pub fn matrix_function(a: &HermitianMatrix, g: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let dec = eig_hermitian(a)?;
    apply_checked(&dec, g)
}

fn apply_checked(dec: &SpectralDecomposition, g: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let values: Vec<f64> = dec.eigenvalues.iter().map(|&l| g(l)).collect();
    if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::DomainError(format!(
            "function not finite at eigenvalue {:e}",
            dec.eigenvalues[pos]
        )));
    }
    Ok(HermitianMatrix {
        m: dec.with_eigenvalues(values).reconstruct(),
    })
}

/// `λ^z = exp(z ln λ)`, with `0^z = 0` for `Re z > 0` and `λ^0 = 1`.
fn complex_scalar_power(l: f64, z: C64) -> C64 {
    if z == C64::new(0.0, 0.0) {
        C64::new(1.0, 0.0)
    } else if l <= 0.0 {
        C64::new(0.0, 0.0)
    } else {
        (z * l.ln()).exp()
    }
}

/// Schatten p-norm (quasi-norm for `p < 1`); `p = f64::INFINITY` gives the operator norm.
pub fn schatten_norm(a: &CMat, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::ParamOutOfRange(format!("Schatten index {p} must be > 0")));
    }
    ensure_finite(a, "Schatten norm input")?;
    let sv = a.clone().singular_values();
    Ok(lp_of(sv.iter().copied(), p))
}

/// `(Σ x_i^p)^{1/p}` of nonnegative values, scaled for stability.
pub(crate) fn lp_of(values: impl Iterator<Item = f64> + Clone, p: f64) -> f64 {
    let m = values.clone().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return m;
    }
    let s: f64 = values.map(|v| (v.abs() / m).powf(p)).sum();
    m * s.powf(1.0 / p)
}

/// Trace norm of a Hermitian matrix via its eigenvalues.
pub fn trace_norm_hermitian(m: &CMat) -> Result<f64> {
    let h = HermitianMatrix::from_hermitian(m.clone());
    let dec = eig_hermitian(&h)?;
    Ok(dec.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// `‖ρ - σ‖₁`, in `[0, 2]`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    trace_norm_hermitian(&(rho.matrix().matrix() - sigma.matrix().matrix()))
}

/// Which tensor factor to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of an operator on `C^{d_a} ⊗ C^{d_b}`.
pub fn partial_trace_op(x: &CMat, d_a: usize, d_b: usize, keep: Subsystem) -> Result<CMat> {
    let n = ensure_square(x)?;
    if n != d_a * d_b {
        return Err(Error::DimensionMismatch {
            expected: d_a * d_b,
            found: n,
        });
    }
    Ok(match keep {
        Subsystem::A => CMat::from_fn(d_a, d_a, |a, a2| {
            (0..d_b).map(|b| x[(a * d_b + b, a2 * d_b + b)]).sum()
        }),
        Subsystem::B => CMat::from_fn(d_b, d_b, |b, b2| {
            (0..d_a).map(|a| x[(a * d_b + b, a * d_b + b2)]).sum()
        }),
    })
}

pub fn partial_trace(
    x: &HermitianMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<HermitianMatrix> {
    partial_trace_op(x.matrix(), dims.0, dims.1, keep).map(HermitianMatrix::from_hermitian)
}

/// Positive unit-trace matrix with a cached spectral decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: HermitianMatrix,
    spectrum: SpectralDecomposition,
    faithful_floor: f64,
}

impl DensityOperator {
    /// Validates and clips with the default relative floor.
    pub fn new(m: HermitianMatrix) -> Result<Self> {
        Self::with_floor(m, FAITHFUL_FLOOR_REL)
    }

    /// Validates and clips with a custom relative floor; `0` disables clipping.
    pub fn with_floor(m: HermitianMatrix, rel_floor: f64) -> Result<Self> {
        if !(rel_floor >= 0.0) {
            return Err(Error::ParamOutOfRange(format!("floor {rel_floor}")));
        }
        let tr = m.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        let spectrum = eig_hermitian(&m)?;
        let lmax = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
        let lmin = spectrum.eigenvalues.first().copied().unwrap_or(0.0);
        if lmin < -NEGATIVITY_TOL * lmax.max(1.0) {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {lmin:e}")));
        }
        let floor = rel_floor * lmax;
        let needs_clip = spectrum.eigenvalues.iter().any(|&l| l < floor);
        let clipped: Vec<f64> = spectrum.eigenvalues.iter().map(|&l| l.max(floor)).collect();
        let total: f64 = clipped.iter().sum();
        let eigenvalues: Vec<f64> = clipped.iter().map(|l| l / total).collect();
        let spectrum = spectrum.with_eigenvalues(eigenvalues);
        let matrix = if needs_clip {
            HermitianMatrix::from_hermitian(spectrum.reconstruct())
        } else if (total - 1.0).abs() <= 64.0 * f64::EPSILON {
            // Already normalized to roundoff; keep the input bits so that
            // serialized instances reload identically.
            m
        } else {
            HermitianMatrix {
                m: m.m.map(|z| z / total),
            }
        };
        Ok(Self {
            matrix,
            spectrum,
            faithful_floor: floor / total,
        })
    }

    pub fn from_matrix(m: CMat) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub fn from_diagonal(p: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(p))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let p = vec![1.0 / dim as f64; dim];
        Self::from_diagonal(&p).expect("maximally mixed state is valid")
    }

    /// Pure state `|ψ⟩⟨ψ|` without clipping (not faithful for `dim > 1`).
    pub fn pure_unclipped(psi: &[C64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        let n = v.norm();
        let v = v / C64::new(n, 0.0);
        Self::with_floor(HermitianMatrix::new(&v * v.adjoint())?, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn mat(&self) -> &CMat {
        &self.matrix.m
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn faithful_floor(&self) -> f64 {
        self.faithful_floor
    }

    pub fn is_faithful(&self) -> bool {
        self.spectrum.eigenvalues.first().is_some_and(|&l| l > 0.0)
    }

    pub(crate) fn require_faithful(&self, what: &str) -> Result<()> {
        if self.is_faithful() {
            Ok(())
        } else {
            Err(Error::NonFaithful(format!("{what} has a kernel")))
        }
    }

    /// `U g(Λ) U^*` with a domain check.
    pub fn function(&self, g: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
        apply_checked(&self.spectrum, g)
    }

    /// Real power `ρ^p`.
    pub fn power(&self, p: f64) -> Result<CMat> {
        complex_power(self, C64::new(p, 0.0))
    }

    pub fn sqrt(&self) -> CMat {
        self.spectrum.apply(|l| l.max(0.0).sqrt())
    }

    pub fn inv_sqrt(&self) -> Result<CMat> {
        self.power(-0.5)
    }

    pub fn ln(&self) -> Result<CMat> {
        self.function(f64::ln).map(HermitianMatrix::into_matrix)
    }

    /// Unitary conjugation `U ρ U^*`.
    pub fn conjugate(&self, u: &CMat) -> Result<Self> {
        Self::new(HermitianMatrix::from_hermitian(u * self.mat() * u.adjoint()))
    }
}

/// `U Λ^z U^*` with `λ^z = exp(z ln λ)`.
pub fn complex_power(a: &DensityOperator, z: C64) -> Result<CMat> {
    if z.re < 0.0 {
        let lmin = a.eigenvalues().first().copied().unwrap_or(0.0);
        if lmin <= 0.0 || lmin < a.faithful_floor * (1.0 - 1e-12) {
            return Err(Error::SingularMatrix(format!(
                "negative power of eigenvalue {lmin:e}"
            )));
        }
    }
    Ok(a.spectrum.apply_complex(|l| complex_scalar_power(l, z)))
}

/// Element of Hilbert–Schmidt space with the trace inner product.
#[derive(Clone, Debug, PartialEq)]
pub struct HSVector {
    m: CMat,
}

impl HSVector {
    pub fn new(m: CMat) -> Result<Self> {
        ensure_finite(&m, "Hilbert-Schmidt vector")?;
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn into_matrix(self) -> CMat {
        self.m
    }

    /// `tr(x^* y)`, antilinear in the first slot.
    pub fn inner(&self, other: &HSVector) -> C64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.m)
    }

    pub fn sub(&self, other: &HSVector) -> HSVector {
        HSVector {
            m: &self.m - &other.m,
        }
    }
}

pub fn hs_inner(x: &HSVector, y: &HSVector) -> C64 {
    x.inner(y)
}

/// JSON form of a complex matrix: declared shape plus row-major `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&CMat> for MatrixRecord {
    fn from(m: &CMat) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                entries.push([m[(i, j)].re, m[(i, j)].im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }
}

impl TryFrom<&MatrixRecord> for CMat {
    type Error = Error;

    fn try_from(r: &MatrixRecord) -> Result<CMat> {
        if r.entries.len() != r.rows * r.cols {
            return Err(Error::Parse(format!(
                "matrix declares {}x{} but has {} entries",
                r.rows,
                r.cols,
                r.entries.len()
            )));
        }
        let m = CMat::from_fn(r.rows, r.cols, |i, j| {
            let [re, im] = r.entries[i * r.cols + j];
            C64::new(re, im)
        });
        ensure_finite(&m, "matrix record")?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_eigendecomposition() {
        let dec = eig_hermitian(&HermitianMatrix::identity(2)).unwrap();
        assert_eq!(dec.eigenvalues(), &[1.0, 1.0]);
        assert!(frobenius(&(dec.reconstruct() - identity(2))) <= 2e-10);
    }

    #[test]
    fn diagonal_eigenvalues_ascending() {
        let dec = eig_hermitian(&HermitianMatrix::from_real_diagonal(&[0.7, 0.3])).unwrap();
        assert!((dec.eigenvalues()[0] - 0.3).abs() < 1e-15);
        assert!((dec.eigenvalues()[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn eigenvector_phase_convention() {
        let mut rng = rng_from_seed(3);
        let h = random_hermitian(4, &mut rng);
        let dec = eig_hermitian(&h).unwrap();
        for col in dec.eigenvectors().column_iter() {
            let (idx, _) = col
                .iter()
                .enumerate()
                .fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
            assert_eq!(col[idx].im, 0.0);
            assert!(col[idx].re > 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = identity(2);
        m[(0, 1)] = c(0.5);
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NonHermitianInput { .. })
        ));
    }

    #[test]
    fn matrix_function_square_of_half_identity() {
        let rho = DensityOperator::maximally_mixed(2);
        let sq = rho.function(|x| x * x).unwrap();
        assert!(frobenius(&(sq.matrix() - identity(2) * c(0.25))) < 1e-15);
    }

    #[test]
    fn matrix_function_sqrt_of_diagonal() {
        let a = HermitianMatrix::from_real_diagonal(&[0.25, 0.75]);
        let r = matrix_function(&a, f64::sqrt).unwrap();
        assert!((r.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((r.matrix()[(1, 1)].re - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn log_at_zero_is_domain_error() {
        let a = HermitianMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert!(matches!(matrix_function(&a, f64::ln), Err(Error::DomainError(_))));
    }

    #[test]
    fn complex_power_zero_is_identity() {
        let rho = random_density(3, 3, 1).unwrap();
        let p = complex_power(&rho, C64::new(0.0, 0.0)).unwrap();
        assert!(frobenius(&(p - identity(3))) < 1e-14);
    }

    #[test]
    fn imaginary_power_is_unitary() {
        let rho = random_density(4, 4, 2).unwrap();
        let u = complex_power(&rho, C64::new(0.0, 0.8)).unwrap();
        assert!(frobenius(&(u.adjoint() * &u - identity(4))) <= 1e-10 * 4.0);
    }

    #[test]
    fn negative_power_of_singular_state_fails() {
        let rho = DensityOperator::with_floor(HermitianMatrix::from_real_diagonal(&[0.0, 1.0]), 0.0)
            .unwrap();
        assert!(matches!(
            complex_power(&rho, C64::new(-0.5, 0.0)),
            Err(Error::SingularMatrix(_))
        ));
    }

    #[test]
    fn schatten_trivial_cases() {
        assert!((schatten_norm(&identity(3), 1.0).unwrap() - 3.0).abs() < 1e-14);
        let m = HermitianMatrix::from_real_diagonal(&[3.0, -4.0]).into_matrix();
        assert!((schatten_norm(&m, f64::INFINITY).unwrap() - 4.0).abs() < 1e-14);
        assert!(schatten_norm(&m, 0.0).is_err());
    }

    #[test]
    fn trace_distance_trivial_cases() {
        let rho = random_density(3, 3, 5).unwrap();
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-15);
        let a = DensityOperator::with_floor(HermitianMatrix::from_real_diagonal(&[1.0, 0.0]), 0.0)
            .unwrap();
        let b = DensityOperator::with_floor(HermitianMatrix::from_real_diagonal(&[0.0, 1.0]), 0.0)
            .unwrap();
        assert!((trace_distance(&a, &b).unwrap() - 2.0).abs() < 1e-15);
        let c3 = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            trace_distance(&a, &c3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product() {
        let ra = random_density(2, 2, 10).unwrap();
        let rb = random_density(3, 3, 11).unwrap();
        let prod = kron(ra.mat(), rb.mat());
        let a = partial_trace_op(&prod, 2, 3, Subsystem::A).unwrap();
        let b = partial_trace_op(&prod, 2, 3, Subsystem::B).unwrap();
        assert!(frobenius(&(a - ra.mat())) < 1e-14);
        assert!(frobenius(&(b - rb.mat())) < 1e-14);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityOperator::pure_unclipped(&[c(s), c(0.0), c(0.0), c(s)]).unwrap();
        let a = partial_trace(bell.matrix(), (2, 2), Subsystem::A).unwrap();
        assert!(frobenius(&(a.into_matrix() - identity(2) * c(0.5))) < 1e-15);
    }

    #[test]
    fn density_clipping_raises_floor() {
        let rho = DensityOperator::from_diagonal(&[0.0, 1.0]).unwrap();
        assert!(rho.is_faithful());
        assert!(rho.eigenvalues()[0] >= rho.faithful_floor() * (1.0 - 1e-15));
        assert!((rho.matrix().trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_rejects_bad_trace_and_negativity() {
        assert!(DensityOperator::from_diagonal(&[0.3, 0.3]).is_err());
        assert!(DensityOperator::from_diagonal(&[-0.1, 1.1]).is_err());
    }

    #[test]
    fn degenerate_input_gives_basis_independent_functions() {
        let mm = DensityOperator::maximally_mixed(4);
        let u = random_unitary(4, &mut rng_from_seed(9));
        let rotated = mm.conjugate(&u).unwrap();
        let a = rotated.power(-0.5).unwrap();
        assert!(frobenius(&(a - identity(4) * c(2.0))) < 1e-12);
    }

    #[test]
    fn hs_inner_is_trace_pairing() {
        let x = HSVector::new(HermitianMatrix::from_real_diagonal(&[1.0, 2.0]).into_matrix()).unwrap();
        assert!((x.inner(&x).re - 5.0).abs() < 1e-15);
        assert!((x.norm() - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn random_density_is_deterministic_and_valid() {
        let a = random_density(3, 3, 42).unwrap();
        let b = random_density(3, 3, 42).unwrap();
        assert_eq!(a, b);
        let q = random_density(2, 2, 7).unwrap();
        assert!((q.matrix().trace() - 1.0).abs() < 1e-12);
        assert!(q.eigenvalues()[0] > 0.0);
        assert!(matches!(random_density(3, 4, 1), Err(Error::InvalidRank { .. })));
        assert!(matches!(random_density(3, 0, 1), Err(Error::InvalidRank { .. })));
    }
}
