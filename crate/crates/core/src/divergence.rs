//! Standard f-divergences through the spectrum of the relative modular
//! operator `Δ(σ,ρ): X ↦ σ X ρ^{-1}`, plus closed-form Rényi families and
//! fidelities.
//!
//! With `σ = Σ s_i |s_i⟩⟨s_i|` and `ρ = Σ r_j |r_j⟩⟨r_j|`, the vectors
//! `|s_i⟩⟨r_j|` diagonalize `Δ(σ,ρ)` with eigenvalue `s_i/r_j`, so
//! `Q_f(ρ‖σ) = Σ_ij f(s_i/r_j) |⟨s_i|ρ^{1/2}|r_j⟩|²`. All logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fclass::{make_neg_log, FFunction};
use crate::qmat::{
    frobenius, lp_of, trace, CMat, DensityOperator, HermitianMatrix, C64,
};

/// Eigenvalue/weight table of a relative modular operator acting on a vector.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeModularSpectrum {
    ratios: Vec<f64>,
    weights: Vec<f64>,
}

impl RelativeModularSpectrum {
    /// Table of `Δ(σ,ω)` against the vector `|h⟩`: ratios `s_i/w_j`, weights
    /// `|⟨s_i|h|w_j⟩|²`.
    pub fn with_vector(sigma: &DensityOperator, omega: &DensityOperator, h: &CMat) -> Result<Self> {
        same_dim(sigma, omega)?;
        if h.nrows() != sigma.dim() || h.ncols() != omega.dim() {
            return Err(Error::DimensionMismatch {
                expected: sigma.dim(),
                found: h.nrows(),
            });
        }
        sigma.require_faithful("sigma")?;
        omega.require_faithful("omega")?;
        let m = sigma.spectrum().eigenvectors().adjoint() * h * omega.spectrum().eigenvectors();
        Ok(Self::from_overlaps(sigma.eigenvalues(), omega.eigenvalues(), |i, j| {
            m[(i, j)].norm_sqr()
        }))
    }

    fn from_overlaps(s: &[f64], w: &[f64], weight: impl Fn(usize, usize) -> f64) -> Self {
        let mut ratios = Vec::with_capacity(s.len() * w.len());
        let mut weights = Vec::with_capacity(s.len() * w.len());
        for (i, si) in s.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                ratios.push(si / wj);
                weights.push(weight(i, j));
            }
        }
        Self { ratios, weights }
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ g(ratio) weight`.
    pub fn expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.ratios
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| if w == 0.0 { 0.0 } else { g(r) * w })
            .sum()
    }
}

fn same_dim(a: &DensityOperator, b: &DensityOperator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Spectrum of `Δ(σ,ρ)` against `|ρ^{1/2}⟩`; weight `(i,j)` is `r_j |⟨s_i|r_j⟩|²`.
pub fn relative_modular_spectrum(
    sigma: &DensityOperator,
    rho: &DensityOperator,
) -> Result<RelativeModularSpectrum> {
    same_dim(sigma, rho)?;
    sigma.require_faithful("sigma")?;
    rho.require_faithful("rho")?;
    let overlap = sigma.spectrum().eigenvectors().adjoint() * rho.spectrum().eigenvectors();
    let r = rho.eigenvalues();
    Ok(RelativeModularSpectrum::from_overlaps(
        sigma.eigenvalues(),
        r,
        |i, j| r[j] * overlap[(i, j)].norm_sqr(),
    ))
}

/// `Q_f(ρ‖σ) = ⟨ρ^{1/2}| f(Δ(σ,ρ)) |ρ^{1/2}⟩`.
pub fn standard_f_divergence(rho: &DensityOperator, sigma: &DensityOperator, f: &FFunction) -> Result<f64> {
    Ok(relative_modular_spectrum(sigma, rho)?.expectation(|x| f.eval(x)))
}

/// `Q_λ(ρ‖σ) = ⟨ρ^{1/2}| (λ + Δ(σ,ρ))^{-1} |ρ^{1/2}⟩`.
pub fn q_lambda(rho: &DensityOperator, sigma: &DensityOperator, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::NegativeLambda(lambda));
    }
    Ok(relative_modular_spectrum(sigma, rho)?.expectation(|x| 1.0 / (lambda + x)))
}

/// Real part of `tr(a b)`, computed without forming the product.
pub(crate) fn trace_product(a: &CMat, b: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s.re
}

/// Umegaki relative entropy `tr(ρ ln ρ - ρ ln σ)`.
pub fn umegaki(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    sigma.require_faithful("sigma")?;
    let ent: f64 = rho
        .eigenvalues()
        .iter()
        .map(|&r| if r > 0.0 { r * r.ln() } else { 0.0 })
        .sum();
    Ok(ent - trace_product(rho.mat(), &sigma.ln()?))
}

/// `Q_{-log}` through the spectral table (equals [`umegaki`]).
pub fn umegaki_spectral(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    standard_f_divergence(rho, sigma, &make_neg_log())
}

/// `tr(ρ^{1-s} σ^s)` for any real `s`.
pub fn petz_renyi_quasi(rho: &DensityOperator, sigma: &DensityOperator, s: f64) -> Result<f64> {
    same_dim(rho, sigma)?;
    if !s.is_finite() {
        return Err(Error::ParamOutOfRange(format!("order {s}")));
    }
    if s < 0.0 {
        sigma.require_faithful("sigma")?;
    }
    if s > 1.0 {
        rho.require_faithful("rho")?;
    }
    Ok(trace_product(&rho.power(1.0 - s)?, &sigma.power(s)?))
}

/// `Q_{x²}(ρ‖σ) = tr(ρ^{-1} σ²)`.
pub fn q_x2(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    petz_renyi_quasi(rho, sigma, 2.0)
}

/// `Q_{x^{-1}}(ρ‖σ) = tr(ρ² σ^{-1})`.
pub fn q_xinv(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    petz_renyi_quasi(rho, sigma, -1.0)
}

/// Petz–Rényi divergence `ln tr(ρ^α σ^{1-α}) / (α - 1)` for `α ∈ (0,1) ∪ (1,∞)`.
pub fn petz_renyi(rho: &DensityOperator, sigma: &DensityOperator, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) || alpha == 1.0 {
        return Err(Error::ParamOutOfRange(format!("Petz-Renyi order {alpha}")));
    }
    Ok(petz_renyi_quasi(rho, sigma, 1.0 - alpha)?.ln() / (alpha - 1.0))
}

fn check_sandwiched_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 0.5) || alpha == 1.0 || alpha.is_nan() {
        return Err(Error::ParamOutOfRange(format!(
            "sandwiched order {alpha} outside [1/2,1)∪(1,∞]"
        )));
    }
    Ok(())
}

/// `-1/α'` with `α' = α/(α-1)`, i.e. `(1-α)/α`; `-1` at `α = ∞`.
pub fn neg_inv_conjugate(alpha: f64) -> f64 {
    if alpha.is_infinite() {
        -1.0
    } else {
        (1.0 - alpha) / alpha
    }
}

/// Hölder conjugate `α' = α/(α-1)`; `1` at `α = ∞`.
pub fn holder_conjugate(alpha: f64) -> f64 {
    if alpha.is_infinite() {
        1.0
    } else {
        alpha / (alpha - 1.0)
    }
}

/// `A = ρ^{1/2} σ^{-1/α'} ρ^{1/2}`.
pub(crate) fn sandwich_operator(rho: &DensityOperator, sigma: &DensityOperator, alpha: f64) -> Result<HermitianMatrix> {
    same_dim(rho, sigma)?;
    let p = neg_inv_conjugate(alpha);
    if p < 0.0 {
        sigma.require_faithful("sigma")?;
    }
    let rs = rho.sqrt();
    Ok(HermitianMatrix::from_hermitian(&rs * sigma.power(p)? * &rs))
}

fn psd_eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(a.eig()?.eigenvalues().iter().map(|&l| l.max(0.0)).collect())
}

/// Sandwiched quasi-entropy `Q̃_α = ‖ρ^{1/2} σ^{-1/α'} ρ^{1/2}‖_α`, `α ∈ [1/2,1)∪(1,∞]`.
pub fn sandwiched_quasi(rho: &DensityOperator, sigma: &DensityOperator, alpha: f64) -> Result<f64> {
    check_sandwiched_alpha(alpha)?;
    let ev = psd_eigenvalues(&sandwich_operator(rho, sigma, alpha)?)?;
    Ok(lp_of(ev.iter().copied(), alpha))
}

/// `Q̃_∞ = ‖ρ^{1/2} σ^{-1} ρ^{1/2}‖_∞ = inf{λ : ρ ≤ λσ}`.
pub fn max_quasi(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    sandwiched_quasi(rho, sigma, f64::INFINITY)
}

/// Sandwiched Rényi divergence `(α/(α-1)) ln ‖σ^{(1-α)/(2α)} ρ σ^{(1-α)/(2α)}‖_α`.
pub fn sandwiched(rho: &DensityOperator, sigma: &DensityOperator, alpha: f64) -> Result<f64> {
    check_sandwiched_alpha(alpha)?;
    same_dim(rho, sigma)?;
    let p = 0.5 * neg_inv_conjugate(alpha);
    if p < 0.0 {
        sigma.require_faithful("sigma")?;
    }
    let sp = sigma.power(p)?;
    let b = HermitianMatrix::from_hermitian(&sp * rho.mat() * &sp);
    let norm = lp_of(psd_eigenvalues(&b)?.into_iter(), alpha);
    Ok(holder_conjugate(alpha) * norm.ln())
}

/// Max-relative entropy `ln Q̃_∞`.
pub fn max_relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(max_quasi(rho, sigma)?.ln())
}

/// Holevo fidelity `tr(ρ^{1/2} σ^{1/2})²`.
pub fn holevo_fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    let t = trace_product(&rho.sqrt(), &sigma.sqrt()).max(0.0);
    Ok(t * t)
}

/// Uhlmann fidelity `‖ρ^{1/2} σ ρ^{1/2}‖_{1/2} = (tr|ρ^{1/2} σ^{1/2}|)²`.
pub fn uhlmann_fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    let rs = rho.sqrt();
    let a = HermitianMatrix::from_hermitian(&rs * sigma.mat() * &rs);
    let root: f64 = psd_eigenvalues(&a)?.iter().map(|l| l.sqrt()).sum();
    Ok(root * root)
}

/// A named entry of the divergence catalog, for data-processing sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DivergenceKind {
    /// `Q_{-log}` from the spectral table.
    QNegLog,
    /// `Q_{x^s}`.
    QPower(f64),
    Umegaki,
    PetzRenyi(f64),
    Sandwiched(f64),
    HolevoFidelity,
    UhlmannFidelity,
}

impl DivergenceKind {
    pub fn evaluate(&self, rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
        match *self {
            Self::QNegLog => umegaki_spectral(rho, sigma),
            Self::QPower(s) => petz_renyi_quasi(rho, sigma, s),
            Self::Umegaki => umegaki(rho, sigma),
            Self::PetzRenyi(a) => petz_renyi(rho, sigma, a),
            Self::Sandwiched(a) => sandwiched(rho, sigma, a),
            Self::HolevoFidelity => holevo_fidelity(rho, sigma),
            Self::UhlmannFidelity => uhlmann_fidelity(rho, sigma),
        }
    }

    /// `+1` if the quantity decreases under channels, `-1` if it increases.
    pub fn dpi_sign(&self) -> f64 {
        match *self {
            Self::QPower(s) if s > 0.0 && s < 1.0 => -1.0,
            Self::HolevoFidelity | Self::UhlmannFidelity => -1.0,
            _ => 1.0,
        }
    }

    /// `sign · (value before − value after)`; nonnegative when monotonicity holds.
    pub fn dpi_margin(
        &self,
        before: (&DensityOperator, &DensityOperator),
        after: (&DensityOperator, &DensityOperator),
    ) -> Result<f64> {
        let v0 = self.evaluate(before.0, before.1)?;
        let v1 = self.evaluate(after.0, after.1)?;
        Ok(self.dpi_sign() * (v0 - v1))
    }

    pub fn label(&self) -> String {
        match *self {
            Self::QNegLog => "Q_neglog".into(),
            Self::QPower(s) => format!("Q_power({s})"),
            Self::Umegaki => "D".into(),
            Self::PetzRenyi(a) => format!("D_petz({a})"),
            Self::Sandwiched(a) => format!("D_sandwiched({a})"),
            Self::HolevoFidelity => "F_holevo".into(),
            Self::UhlmannFidelity => "F_uhlmann".into(),
        }
    }
}

/// The catalog swept by the data-processing acceptance check.
pub fn dpi_catalog() -> Vec<DivergenceKind> {
    use DivergenceKind::*;
    vec![
        QNegLog,
        QPower(-0.5),
        QPower(-0.3),
        QPower(0.3),
        QPower(0.5),
        Umegaki,
        PetzRenyi(0.6),
        PetzRenyi(1.5),
        Sandwiched(0.75),
        Sandwiched(2.0),
        Sandwiched(3.0),
        HolevoFidelity,
        UhlmannFidelity,
    ]
}

/// `‖h‖₂` helper re-exported for callers that build vectors by hand.
pub fn hs_norm(h: &CMat) -> f64 {
    frobenius(h)
}

/// `tr(x)` real part.
pub fn real_trace(x: &CMat) -> f64 {
    trace(x).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fclass::make_power;
    use crate::qmat::random_density;

    #[test]
    fn self_divergences_vanish() {
        let rho = random_density(3, 3, 1).unwrap();
        assert!(umegaki(&rho, &rho).unwrap().abs() < 1e-13);
        assert!(umegaki_spectral(&rho, &rho).unwrap().abs() < 1e-13);
        assert!((petz_renyi_quasi(&rho, &rho, 0.3).unwrap() - 1.0).abs() < 1e-13);
        assert!((q_x2(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
        assert!(petz_renyi(&rho, &rho, 1.5).unwrap().abs() < 1e-13);
        for a in [0.5, 0.75, 2.0, f64::INFINITY] {
            assert!((sandwiched_quasi(&rho, &rho, a).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(sandwiched(&rho, &rho, 2.0).unwrap().abs() < 1e-12);
        assert!((uhlmann_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
        assert!((holevo_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_of_identical_states() {
        let rho = random_density(3, 3, 2).unwrap();
        let spec = relative_modular_spectrum(&rho, &rho).unwrap();
        assert!((spec.total_weight() - 1.0).abs() < 1e-12);
        let mm = DensityOperator::maximally_mixed(3);
        let spec = relative_modular_spectrum(&mm, &mm).unwrap();
        assert!(spec.ratios().iter().all(|&r| (r - 1.0).abs() < 1e-15));
        assert!((spec.total_weight() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn q_lambda_trivial_and_negative() {
        let mm = DensityOperator::maximally_mixed(2);
        assert!((q_lambda(&mm, &mm, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(q_lambda(&mm, &mm, -1.0), Err(Error::NegativeLambda(_))));
    }

    #[test]
    fn q_lambda_decreasing() {
        let rho = random_density(3, 3, 3).unwrap();
        let sigma = random_density(3, 3, 4).unwrap();
        let vals: Vec<f64> = (0..20)
            .map(|k| q_lambda(&rho, &sigma, 0.1 * k as f64).unwrap())
            .collect();
        assert!(vals.windows(2).all(|p| p[1] <= p[0]));
    }

    #[test]
    fn order_checks() {
        let rho = random_density(2, 2, 5).unwrap();
        assert!(sandwiched_quasi(&rho, &rho, 0.4).is_err());
        assert!(sandwiched_quasi(&rho, &rho, 1.0).is_err());
        assert!(petz_renyi(&rho, &rho, 1.0).is_err());
        assert!(petz_renyi(&rho, &rho, 0.0).is_err());
    }

    #[test]
    fn orthogonal_pure_states_have_zero_fidelity() {
        let a = DensityOperator::with_floor(HermitianMatrix::from_real_diagonal(&[1.0, 0.0]), 0.0)
            .unwrap();
        let b = DensityOperator::with_floor(HermitianMatrix::from_real_diagonal(&[0.0, 1.0]), 0.0)
            .unwrap();
        assert!(uhlmann_fidelity(&a, &b).unwrap() < 1e-15);
        assert!(holevo_fidelity(&a, &b).unwrap() < 1e-15);
    }

    #[test]
    fn standard_divergence_uses_catalog_eval() {
        let rho = random_density(2, 2, 6).unwrap();
        let sigma = random_density(2, 2, 7).unwrap();
        let f = make_power(-0.5).unwrap();
        let q = standard_f_divergence(&rho, &sigma, &f).unwrap();
        let direct = petz_renyi_quasi(&rho, &sigma, -0.5).unwrap();
        assert!((q - direct).abs() < 1e-12);
    }
}
