//! Recovery-error bounds with free integral split points `S < T`.
//!
//! All three shapes share the prefactor `2cosh(πt)/π`:
//!
//! | direction | bound on the recovery error |
//! |---|---|
//! | `SigmaSide` | `4√S + √(c(T-S)) √ΔQ_f + 4 √(Q_{x²}/T)` on `‖σ - R_ρ^t(σ_N)‖₁` |
//! | `RhoSideStandard` | `4√(S Q_{x^{-1}}) + √(c ln(T/S)) √ΔQ_f + 4/√T` on `‖ρ - R_σ^t(ρ_N)‖₁` |
//! | `RhoSideOptimized` | as above with `ΔQ̃_f` and `Q̃_{x^{-1}} = ‖ρ^{1/2}σ^{-1}ρ^{1/2}‖_∞` |

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::vectors::LemmaSetup;
use crate::divergence::{max_quasi, q_x2, q_xinv, standard_f_divergence};
use crate::error::{Error, Result};
use crate::fclass::{c_bound, FFunction, MonotoneKind};
use crate::optdiv::{closed_form_value, optimized_f_divergence, OptimizerConfig};
use crate::qmat::DensityOperator;
use crate::recovery::SubalgebraSpec;

/// Divergence differences below this are treated as data-processing violations.
pub const NEGATIVE_DIFFERENCE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundDirection {
    SigmaSide,
    RhoSideStandard,
    RhoSideOptimized,
}

/// A bound on a recovery error together with the measured error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryBound {
    pub bound: f64,
    pub measured: f64,
    /// `ΔQ_f` or `ΔQ̃_f` of the anti-monotone member of `{f, -f}`.
    pub difference: f64,
    pub c_constant: f64,
}

impl RecoveryBound {
    pub fn holds(&self, tol: f64) -> bool {
        self.measured <= self.bound + tol
    }
}

fn sign(f: &FFunction) -> f64 {
    match f.monotone_kind() {
        MonotoneKind::AntiMonotone => 1.0,
        MonotoneKind::Monotone => -1.0,
    }
}

/// `Q̃` of the anti-monotone member of `{f, -f}`: closed form when known,
/// otherwise the iterative optimizer.
pub fn optimized_value(rho: &DensityOperator, sigma: &DensityOperator, f: &FFunction) -> Result<f64> {
    match closed_form_value(rho, sigma, f)? {
        Some(v) => Ok(v),
        None => Ok(optimized_f_divergence(rho, sigma, f, &OptimizerConfig::default())?.value),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn generic_recovery_bound(
    direction: BoundDirection,
    rho: &DensityOperator,
    sigma: &DensityOperator,
    n: &SubalgebraSpec,
    f: &FFunction,
    s_lo: f64,
    t_hi: f64,
    t: f64,
) -> Result<RecoveryBound> {
    if !t_hi.is_finite() {
        return Err(Error::ParamOutOfRange("T must be finite".into()));
    }
    let c = c_bound(f, s_lo, t_hi)?;
    let setup = LemmaSetup::new(rho, sigma, n)?;
    let (rn, sn) = (setup.rho_n(), setup.sigma_n());
    let raw = match direction {
        BoundDirection::SigmaSide | BoundDirection::RhoSideStandard => {
            sign(f) * (standard_f_divergence(rho, sigma, f)? - standard_f_divergence(rn, sn, f)?)
        }
        BoundDirection::RhoSideOptimized => optimized_value(rho, sigma, f)? - optimized_value(rn, sn, f)?,
    };
    if raw < -NEGATIVE_DIFFERENCE_TOL {
        return Err(Error::NegativeDifference(raw));
    }
    let diff = raw.max(0.0);
    let pre = 2.0 * (PI * t).cosh() / PI;
    let (bound, measured) = match direction {
        BoundDirection::SigmaSide => {
            let terms = 4.0 * s_lo.sqrt()
                + (c * (t_hi - s_lo)).sqrt() * diff.sqrt()
                + 4.0 * (q_x2(rho, sigma)? / t_hi).sqrt();
            (pre * terms, setup.forward_error(t)?)
        }
        BoundDirection::RhoSideStandard | BoundDirection::RhoSideOptimized => {
            if s_lo <= 0.0 {
                return Err(Error::ParamOutOfRange(
                    "the ρ-side bounds need S > 0".into(),
                ));
            }
            let q_inv = match direction {
                BoundDirection::RhoSideStandard => q_xinv(rho, sigma)?,
                _ => max_quasi(rho, sigma)?,
            };
            let terms = 4.0 * (s_lo * q_inv).sqrt()
                + (c * (t_hi / s_lo).ln()).sqrt() * diff.sqrt()
                + 4.0 / t_hi.sqrt();
            (pre * terms, setup.reverse_error(t)?)
        }
    };
    Ok(RecoveryBound {
        bound,
        measured,
        difference: diff,
        c_constant: c,
    })
}
