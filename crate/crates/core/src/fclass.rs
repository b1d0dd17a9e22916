//! Catalog of operator anti-monotone and monotone functions with their
//! integral representations.
//!
//! An anti-monotone `f` on `(0, ∞)` is stored through
//!
//! `f(x) = a + b x + ∫_0^∞ (1/(λ+x) - λ/(λ²+1)) dν(λ)`
//!
//! with `dν = nu_density(λ) dλ + Σ mass δ_loc`. The monotone power `x^s`,
//! `s ∈ (0,1)`, keeps its own form `(sin πs/π) ∫ λ^s (1/λ - 1/(λ+x)) dλ`, and
//! the monotone `x` is the purely linear case.
//!
//! | kind | f(x) | a | ν | regular |
//! |---|---|---|---|---|
//! | `NegLog` | `-ln x` | 0 | `dλ` | yes |
//! | `Power(s)`, `s<0` | `x^s` | `cos(π|s|/2)` | `(sin π|s|/π) λ^s dλ` | yes |
//! | `Power(s)`, `s>0` | `x^s` | (monotone form) | `(sin πs/π) λ^s dλ` | yes |
//! | `InverseShift(λ₀)` | `1/(λ₀+x)` | `λ₀/(λ₀²+1)` | `δ_{λ₀}` | no |
//! | `Linear` | `x` | (monotone form, `b = 1`) | none | no |

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate_half_line, QuadTolerance};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum FKind {
    NegLog,
    Power(f64),
    InverseShift(f64),
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonotoneKind {
    AntiMonotone,
    Monotone,
}

/// A catalog function together with its representing measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FFunction {
    kind: FKind,
}

pub fn make_neg_log() -> FFunction {
    FFunction {
        kind: FKind::NegLog,
    }
}

/// `x^s` for `s ∈ (-1, 0) ∪ (0, 1)`.
pub fn make_power(s: f64) -> Result<FFunction> {
    if !(s > -1.0 && s < 1.0) || s == 0.0 {
        return Err(Error::ParamOutOfRange(format!(
            "power exponent {s} outside (-1,0)∪(0,1)"
        )));
    }
    Ok(FFunction {
        kind: FKind::Power(s),
    })
}

/// `(λ₀ + x)^{-1}` for `λ₀ ≥ 0`.
pub fn make_inverse_shift(lambda0: f64) -> Result<FFunction> {
    if !(lambda0 >= 0.0 && lambda0.is_finite()) {
        return Err(Error::ParamOutOfRange(format!("shift {lambda0} must be ≥ 0")));
    }
    Ok(FFunction {
        kind: FKind::InverseShift(lambda0),
    })
}

/// The monotone function `x`; its optimized divergence is the negative Uhlmann fidelity.
pub fn make_linear() -> FFunction {
    FFunction {
        kind: FKind::Linear,
    }
}

impl FFunction {
    pub fn kind(&self) -> FKind {
        self.kind
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            FKind::NegLog => -x.ln(),
            FKind::Power(s) => x.powf(s),
            FKind::InverseShift(l0) => 1.0 / (l0 + x),
            FKind::Linear => x,
        }
    }

    /// `f` itself when anti-monotone, `-f` when monotone.
    pub fn anti_monotone_eval(&self, x: f64) -> f64 {
        match self.monotone_kind() {
            MonotoneKind::AntiMonotone => self.eval(x),
            MonotoneKind::Monotone => -self.eval(x),
        }
    }

    pub fn monotone_kind(&self) -> MonotoneKind {
        match self.kind {
            FKind::Power(s) if s > 0.0 => MonotoneKind::Monotone,
            FKind::Linear => MonotoneKind::Monotone,
            _ => MonotoneKind::AntiMonotone,
        }
    }

    pub fn affine_a(&self) -> f64 {
        match self.kind {
            FKind::NegLog => 0.0,
            FKind::Power(s) if s < 0.0 => (FRAC_PI_2 * s.abs()).cos(),
            FKind::Power(_) => 0.0,
            FKind::InverseShift(l0) => l0 / (l0 * l0 + 1.0),
            FKind::Linear => 0.0,
        }
    }

    pub fn linear_b(&self) -> f64 {
        match self.kind {
            FKind::Linear => 1.0,
            _ => 0.0,
        }
    }

    /// Density of the absolutely continuous part of the representing measure.
    pub fn nu_density(&self, lambda: f64) -> f64 {
        match self.kind {
            FKind::NegLog => 1.0,
            FKind::Power(s) => (PI * s.abs()).sin() / PI * lambda.powf(s),
            FKind::InverseShift(_) | FKind::Linear => 0.0,
        }
    }

    /// Point masses `(location, mass)`.
    pub fn nu_atoms(&self) -> Vec<(f64, f64)> {
        match self.kind {
            FKind::InverseShift(l0) => vec![(l0, 1.0)],
            _ => vec![],
        }
    }

    pub fn is_regular(&self) -> bool {
        matches!(self.kind, FKind::NegLog | FKind::Power(_))
    }

    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            FKind::Power(s) => Some(s),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            FKind::NegLog => "neg_log".into(),
            FKind::Power(s) => format!("power({s})"),
            FKind::InverseShift(l0) => format!("inverse_shift({l0})"),
            FKind::Linear => "linear".into(),
        }
    }

    /// Rebuilds `f(x)` from the stored representation by adaptive quadrature.
    pub fn reconstruct(&self, x: f64) -> Result<f64> {
        let tol = QuadTolerance::absolute(1e-9);
        let atoms: f64 = self
            .nu_atoms()
            .iter()
            .map(|&(l, m)| m * (1.0 / (l + x) - l / (l * l + 1.0)))
            .sum();
        let base = self.affine_a() + self.linear_b() * x + atoms;
        let integral = match self.kind {
            FKind::InverseShift(_) | FKind::Linear => 0.0,
            FKind::Power(s) if s > 0.0 => {
                integrate_half_line(|l| self.nu_density(l) * x / (l * (l + x)), tol)?.value
            }
            _ => {
                integrate_half_line(
                    |l| self.nu_density(l) * (1.0 / (l + x) - l / (l * l + 1.0)),
                    tol,
                )?
                .value
            }
        };
        Ok(base + integral)
    }
}

fn check_interval(s_lo: f64, t_hi: f64) -> Result<()> {
    if !(s_lo >= 0.0 && s_lo < t_hi) {
        return Err(Error::ParamOutOfRange(format!(
            "need 0 ≤ S < T, got S={s_lo}, T={t_hi}"
        )));
    }
    Ok(())
}

/// A constant `c(S,T)` with `dλ ≤ c(S,T) dν(λ)` on `(S,T)`.
pub fn c_bound(f: &FFunction, s_lo: f64, t_hi: f64) -> Result<f64> {
    check_interval(s_lo, t_hi)?;
    match f.kind {
        FKind::NegLog => Ok(1.0),
        FKind::Power(s) if s > 0.0 => {
            if s_lo <= 0.0 {
                return Err(Error::NotRegular(format!(
                    "x^{s} needs S > 0 for a finite c(S,T)"
                )));
            }
            Ok(PI / (PI * s).sin() * s_lo.powf(-s))
        }
        FKind::Power(s) => {
            if t_hi.is_infinite() {
                return Err(Error::NotRegular(format!(
                    "x^{s} needs T < ∞ for a finite c(S,T)"
                )));
            }
            Ok(PI / (PI * s.abs()).sin() * t_hi.powf(s.abs()))
        }
        FKind::InverseShift(_) | FKind::Linear => Err(Error::NotRegular(f.label())),
    }
}

/// `sup 1/nu_density` over `n` log-spaced points of `[S, T]` (finite `S > 0`, `T`).
pub fn c_bound_grid(f: &FFunction, s_lo: f64, t_hi: f64, n: usize) -> Result<f64> {
    check_interval(s_lo, t_hi)?;
    if !f.is_regular() {
        return Err(Error::NotRegular(f.label()));
    }
    if s_lo <= 0.0 || t_hi.is_infinite() || n < 2 {
        return Err(Error::ParamOutOfRange(
            "grid bound needs 0 < S < T < ∞ and n ≥ 2".into(),
        ));
    }
    let (la, lb) = (s_lo.ln(), t_hi.ln());
    let mut sup: f64 = 0.0;
    for k in 0..n {
        let l = (la + (lb - la) * k as f64 / (n - 1) as f64).exp();
        let d = f.nu_density(l);
        if !(d > 0.0) {
            return Err(Error::NotRegular(format!("density vanishes at {l:e}")));
        }
        sup = sup.max(1.0 / d);
    }
    Ok(sup)
}
