//! Residuals of conditions that are all equivalent to sufficiency of `N`.
//!
//! Each residual is non-negative and vanishes exactly when `N` is sufficient
//! for `{ρ, σ}`. On a sufficient instance all of them sit at roundoff; on a
//! non-sufficient one all of them are bounded away from zero.

use serde::{Deserialize, Serialize};

use super::vectors::LemmaSetup;
use crate::divergence::{sandwiched, standard_f_divergence, umegaki};
use crate::error::Result;
use crate::fclass::{make_inverse_shift, make_neg_log, make_power, FFunction};
use crate::optdiv::holder_extremizer;
use crate::qmat::{trace_norm_hermitian, DensityOperator};
use crate::recovery::SubalgebraSpec;

/// Sandwiched orders sampled by the suite.
pub const SANDWICHED_ORDERS: [f64; 2] = [0.75, 2.0];
/// Rotation parameters sampled for the rotated maps.
pub const ROTATIONS: [f64; 3] = [-1.0, 0.0, 1.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `D(ρ‖σ) = D(ρ_N‖σ_N)`.
    RelativeEntropy,
    /// `D̃_α` preserved for sampled `α`.
    Sandwiched,
    /// `Q̃` of `x^{-1/2}` preserved.
    OptimizedInverseSqrt,
    /// `Q_f` preserved for a sample of anti-monotone `f`.
    StandardFamily,
    /// `R_ρ^t(σ_N) = σ` for sampled `t`.
    RotatedForward,
    /// `R_σ^t(ρ_N) = ρ` for sampled `t`.
    RotatedReverse,
    /// The Petz map of `σ` recovers both states.
    PetzRecovers,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceResidual {
    pub condition: Condition,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub residuals: Vec<EquivalenceResidual>,
    pub tolerance: f64,
}

impl EquivalenceReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn min_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.residual).fold(f64::INFINITY, f64::min)
    }

    /// Every condition holds to within the tolerance.
    pub fn all_hold(&self) -> bool {
        self.max_residual() <= self.tolerance
    }

    /// Every condition fails by more than the tolerance.
    pub fn all_fail(&self) -> bool {
        self.min_residual() > self.tolerance
    }

    /// The conditions agree with each other.
    pub fn consistent(&self) -> bool {
        self.all_hold() || self.all_fail()
    }
}

/// Anti-monotone members of the operator-convex catalog used by the suite.
pub fn standard_sample() -> Vec<FFunction> {
    vec![
        make_neg_log(),
        make_power(-0.3).expect("valid exponent"),
        make_power(-0.7).expect("valid exponent"),
        make_inverse_shift(1.0).expect("valid shift"),
    ]
}

fn max_of(it: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    it.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

pub fn equivalence_suite(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    n: &SubalgebraSpec,
    tolerance: f64,
) -> Result<EquivalenceReport> {
    let setup = LemmaSetup::new(rho, sigma, n)?;
    let (rn, sn) = (setup.rho_n(), setup.sigma_n());
    let diff = |g: &dyn Fn(&DensityOperator, &DensityOperator) -> Result<f64>| -> Result<f64> {
        Ok((g(rho, sigma)? - g(rn, sn)?).abs())
    };

    let re = diff(&umegaki)?;
    let sand = max_of(SANDWICHED_ORDERS.map(|a| diff(&|r, s| sandwiched(r, s, a))))?;
    let opt = diff(&|r, s| Ok(holder_extremizer(r, s, 2.0)?.value))?;
    let family = max_of(standard_sample().iter().map(|f| diff(&|r, s| standard_f_divergence(r, s, f))))?;
    let fwd = max_of(ROTATIONS.map(|t| setup.forward_error(t)))?;
    let rev = max_of(ROTATIONS.map(|t| setup.reverse_error(t)))?;
    let petz = setup.petz_sigma();
    let witness = trace_norm_hermitian(&(rho.mat() - petz.apply(rn.mat())?))?
        + trace_norm_hermitian(&(sigma.mat() - petz.apply(sn.mat())?))?;

    let residuals = [
        (Condition::RelativeEntropy, re),
        (Condition::Sandwiched, sand),
        (Condition::OptimizedInverseSqrt, opt),
        (Condition::StandardFamily, family),
        (Condition::RotatedForward, fwd),
        (Condition::RotatedReverse, rev),
        (Condition::PetzRecovers, witness),
    ]
    .into_iter()
    .map(|(condition, residual)| EquivalenceResidual { condition, residual })
    .collect();
    Ok(EquivalenceReport { residuals, tolerance })
}
