//! One evaluator per recoverability theorem.
//!
//! Each certificate records a divergence difference (`lhs`), the explicit
//! remainder evaluated at the measured recovery error (`rhs`), and
//! `margin = lhs - rhs`. Forward theorems measure `‖σ - R_ρ^t(σ_N)‖₁`, reverse
//! theorems measure `‖ρ - R_σ^t(ρ_N)‖₁`; `_U` variants use the universal map.
//!
//! | id | difference | remainder |
//! |---|---|---|
//! | `RE_FWD` | `ΔD` | `(π/(8cosh πt))⁴ Q_{x²}^{-1} e⁴` |
//! | `PRQ_FWD` | `|ΔQ_s|` | `K(s,Q_{x²}) (π e/((4+2|s|)cosh πt))^{4+2|s|}` |
//! | `PRE_FWD` | `ΔD_α`, `s = 1-α` | logarithmic form of `PRQ_FWD` |
//! | `RE_REV` | `ΔD` | `(K(Q_{x^{-1}},ε) π e/(2cosh πt))^{1/(1/2-ε)}` |
//! | `PRQ_REV` | `|ΔQ_s|` | `(K(s,Q_{x^{-1}},ε) π e/(2cosh πt))^{1/((1-|s|)/2-ε)}` |
//! | `PRE_REV` | `ΔD_α` | logarithmic form of `PRQ_REV` |
//! | `SANDQ` | `|ΔQ̃_α|` | `(K(α,Q̃_∞,ε) π e/(2cosh πt))^{1/((1-1/|α'|)/2-ε)}` |
//! | `SANDE` | `ΔD̃_α` | logarithmic form of `SANDQ` |
//! | `HOLEVO_REM` | `√F_H(ρ_N,σ_N) - √F_H(ρ,σ)` | `(128π Q_{x²})^{-1} (π e/(5cosh πt))⁵` |

use std::cell::{OnceCell, RefCell};
use std::collections::BTreeMap;
use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::instance::Instance;
use super::vectors::LemmaSetup;
use crate::divergence::{
    holder_conjugate, max_quasi, petz_renyi, petz_renyi_quasi, q_x2, q_xinv,
    sandwiched, umegaki,
};
use crate::error::{Error, Result};
use crate::optdiv::holder_extremizer;
use crate::qmat::{trace_norm_hermitian, DensityOperator};
use crate::quad::BetaRule;
use crate::recovery::SubalgebraSpec;

/// Default absolute tolerance on the margin.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// `|lhs|` at or below this marks an exactly saturated instance.
pub const SATURATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TheoremId {
    ReFwd,
    PrqFwd,
    PreFwd,
    ReRev,
    PrqRev,
    PreRev,
    Sandq,
    Sande,
    ReFwdU,
    ReRevU,
    PrqFwdU,
    PrqRevU,
    SandqU,
    HolevoRem,
}

/// Which order parameter a theorem takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamFamily {
    /// Rotation only.
    Plain,
    /// Quasi-entropy order `s ∈ (-1,0) ∪ (0,1)`.
    Quasi,
    /// Petz order `α ∈ (0,1) ∪ (1,2)`.
    Petz,
    /// Sandwiched order `α ∈ (1/2,1) ∪ (1,∞)`.
    Sandwiched,
}

impl TheoremId {
    pub const ALL: [TheoremId; 14] = [
        Self::ReFwd,
        Self::PrqFwd,
        Self::PreFwd,
        Self::ReRev,
        Self::PrqRev,
        Self::PreRev,
        Self::Sandq,
        Self::Sande,
        Self::ReFwdU,
        Self::ReRevU,
        Self::PrqFwdU,
        Self::PrqRevU,
        Self::SandqU,
        Self::HolevoRem,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ReFwd => "RE_FWD",
            Self::PrqFwd => "PRQ_FWD",
            Self::PreFwd => "PRE_FWD",
            Self::ReRev => "RE_REV",
            Self::PrqRev => "PRQ_REV",
            Self::PreRev => "PRE_REV",
            Self::Sandq => "SANDQ",
            Self::Sande => "SANDE",
            Self::ReFwdU => "RE_FWD_U",
            Self::ReRevU => "RE_REV_U",
            Self::PrqFwdU => "PRQ_FWD_U",
            Self::PrqRevU => "PRQ_REV_U",
            Self::SandqU => "SANDQ_U",
            Self::HolevoRem => "HOLEVO_REM",
        }
    }

    /// Uses the universal recovery map, so the rotation is integrated out.
    pub fn is_universal(&self) -> bool {
        matches!(
            self,
            Self::ReFwdU | Self::ReRevU | Self::PrqFwdU | Self::PrqRevU | Self::SandqU
        )
    }

    /// Measures `‖ρ - R_σ(ρ_N)‖₁` rather than `‖σ - R_ρ(σ_N)‖₁`.
    pub fn is_reverse(&self) -> bool {
        matches!(
            self,
            Self::ReRev
                | Self::PrqRev
                | Self::PreRev
                | Self::Sandq
                | Self::Sande
                | Self::ReRevU
                | Self::PrqRevU
                | Self::SandqU
        )
    }

    pub fn family(&self) -> ParamFamily {
        match self {
            Self::ReFwd | Self::ReRev | Self::ReFwdU | Self::ReRevU | Self::HolevoRem => ParamFamily::Plain,
            Self::PrqFwd | Self::PrqRev | Self::PrqFwdU | Self::PrqRevU => ParamFamily::Quasi,
            Self::PreFwd | Self::PreRev => ParamFamily::Petz,
            Self::Sandq | Self::Sande | Self::SandqU => ParamFamily::Sandwiched,
        }
    }

    pub fn uses_epsilon(&self) -> bool {
        self.is_reverse()
    }

    /// Certificates whose difference comes from the optimized divergence.
    pub fn is_optimized(&self) -> bool {
        self.family() == ParamFamily::Sandwiched
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == up)
            .ok_or_else(|| Error::Config(format!("unknown theorem id `{s}`")))
    }
}

/// Parameters of one certificate. `S` and `T` are outputs: the split points
/// the corresponding proof selects for this instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub theorem_id: TheoremId,
    pub t: f64,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(rename = "S", default)]
    pub split_s: Option<f64>,
    #[serde(rename = "T", default)]
    pub split_t: Option<f64>,
}

impl BoundParams {
    pub fn new(theorem_id: TheoremId, t: f64) -> Self {
        Self {
            theorem_id,
            t,
            s: None,
            alpha: None,
            epsilon: None,
            split_s: None,
            split_t: None,
        }
    }

    pub fn with_s(mut self, s: f64) -> Self {
        self.s = Some(s);
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    /// Validates the order parameter, resolves the quasi-entropy order used by
    /// the proof and returns the admissible `ε` interval when one applies.
    fn resolve(&self) -> Result<(Option<f64>, Option<(f64, f64)>)> {
        let id = self.theorem_id;
        if !self.t.is_finite() {
            return Err(Error::ParamOutOfRange(format!("t = {} is not finite", self.t)));
        }
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::ParamOutOfRange(format!("{id} needs `{name}`")))
        };
        let (order, hi) = match id.family() {
            ParamFamily::Plain => (None, 0.5),
            ParamFamily::Quasi => {
                let s = need(self.s, "s")?;
                if !(s > -1.0 && s < 1.0 && s != 0.0) {
                    return Err(Error::ParamOutOfRange(format!("s = {s} outside (-1,0)∪(0,1)")));
                }
                (Some(s), (1.0 - s.abs()) / 2.0)
            }
            ParamFamily::Petz => {
                let a = need(self.alpha, "alpha")?;
                if !(a > 0.0 && a < 2.0 && a != 1.0) {
                    return Err(Error::ParamOutOfRange(format!("α = {a} outside (0,1)∪(1,2)")));
                }
                (Some(1.0 - a), if a < 1.0 { a / 2.0 } else { (2.0 - a) / 2.0 })
            }
            ParamFamily::Sandwiched => {
                let a = need(self.alpha, "alpha")?;
                if !(a > 0.5 && a.is_finite() && a != 1.0) {
                    return Err(Error::ParamOutOfRange(format!(
                        "α = {a} outside (1/2,1)∪(1,∞); the endpoints are not covered"
                    )));
                }
                (Some(a), (1.0 - 1.0 / holder_conjugate(a).abs()) / 2.0)
            }
        };
        let interval = id.uses_epsilon().then_some((0.0, hi));
        if let (Some((lo, hi)), Some(eps)) = (interval, self.epsilon) {
            if !(eps > lo && eps < hi) {
                return Err(Error::ParamOutOfRange(format!(
                    "ε = {eps} outside ({lo}, {hi}) for {id}"
                )));
            }
        }
        Ok((order, interval))
    }

    /// `(0, sup)` interval for `ε`, if the theorem takes one.
    pub fn epsilon_interval(&self) -> Result<Option<(f64, f64)>> {
        Ok(self.resolve()?.1)
    }
}

/// A recorded evaluation of one theorem instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub theorem_id: TheoremId,
    pub params: BoundParams,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub recovery_error: f64,
    pub aux: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub instance_fingerprint: String,
}

/// Per-instance cache shared by all certificates of one `(ρ, σ, N)`.
pub struct CertificateContext {
    instance: Instance,
    setup: LemmaSetup,
    fingerprint: String,
    rule: BetaRule,
    cache: RefCell<BTreeMap<String, f64>>,
    universal_fwd: OnceCell<f64>,
    universal_rev: OnceCell<f64>,
}

fn pos_pow(x: f64, p: f64) -> f64 {
    x.max(0.0).powf(p)
}

/// Split points minimizing `aS^{1/2} + bS^{-s/2}(T-S)^{1/2} + c(T-S)^{-1/2}` for
/// `s > 0`, or `bT^{(|s|+1)/2} + cT^{-1/2}` with `S = 0` for `s < 0`.
fn quasi_split(s: f64, diff: f64, qx2: f64) -> (Option<f64>, Option<f64>) {
    let b = (PI / (PI * s.abs()).sin()).sqrt() * diff.abs().sqrt();
    let c = 4.0 * qx2.sqrt();
    if b <= 0.0 {
        return (Some(0.0), None);
    }
    if s > 0.0 {
        let a = 4.0;
        let k = c * b * s * s / (a * a);
        let lo = k.powf(2.0 / (s + 2.0));
        (Some(lo), Some(lo + k.powf(s / (s + 2.0)) * c / b))
    } else {
        let m = s.abs();
        (Some(0.0), Some((c / (b * (m + 1.0))).powf(2.0 / (m + 2.0))))
    }
}

/// `S = δ`, `T = 1/δ` with `δ = min(difference, 1)`.
fn delta_split(diff: f64) -> (f64, Option<f64>, Option<f64>) {
    let delta = diff.abs().min(1.0);
    if delta > 0.0 {
        (delta, Some(delta), Some(1.0 / delta))
    } else {
        (delta, None, None)
    }
}

/// `K(s, Q_{x²})` for the forward quasi-entropy bounds.
pub fn k_forward_quasi(s: f64, qx2: f64) -> f64 {
    let m = s.abs();
    if s < 0.0 {
        (PI * m).sin() / PI * ((m + 1.0).powi(2) / (16.0 * qx2)).powf(m + 1.0)
    } else {
        (PI * s).sin() / (PI * qx2) * s.powf(2.0 * s) / 16f64.powf(s + 1.0)
    }
}

/// `(4√Q_{x^{-1}} + 4 + (εe)^{-1/2})^{-1}`.
pub fn k_reverse_entropy(qxinv: f64, eps: f64) -> f64 {
    1.0 / (4.0 * qxinv.sqrt() + 4.0 + (eps * E).powf(-0.5))
}

/// `(4√q + (π/(eε sin(π|s|)))^{1/2} + 4)^{-1}`; with `q = Q_{x^{-1}}` for the
/// Petz family and `q = Q̃_∞`, `s = 1/α'` for the sandwiched family.
pub fn k_reverse_quasi(s: f64, q: f64, eps: f64) -> f64 {
    1.0 / (4.0 * q.sqrt() + (PI / (E * eps * (PI * s.abs()).sin())).sqrt() + 4.0)
}

impl CertificateContext {
    pub fn new(instance: Instance) -> Result<Self> {
        let setup = LemmaSetup::new(&instance.rho, &instance.sigma, &instance.subalgebra)?;
        Ok(Self {
            fingerprint: instance.fingerprint(),
            instance,
            setup,
            rule: BetaRule::default(),
            cache: RefCell::new(BTreeMap::new()),
            universal_fwd: OnceCell::new(),
            universal_rev: OnceCell::new(),
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn setup(&self) -> &LemmaSetup {
        &self.setup
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    fn cached(&self, key: String, f: impl FnOnce() -> Result<f64>) -> Result<f64> {
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(*v);
        }
        let v = f()?;
        self.cache.borrow_mut().insert(key, v);
        Ok(v)
    }

    fn pair(&self, on_n: bool) -> (&DensityOperator, &DensityOperator) {
        if on_n {
            (self.setup.rho_n(), self.setup.sigma_n())
        } else {
            (&self.instance.rho, &self.instance.sigma)
        }
    }

    fn value(
        &self,
        name: &str,
        param: f64,
        on_n: bool,
        f: impl Fn(&DensityOperator, &DensityOperator) -> Result<f64>,
    ) -> Result<f64> {
        let key = format!("{name}|{:016x}|{on_n}", param.to_bits());
        self.cached(key, || {
            let (r, s) = self.pair(on_n);
            f(r, s)
        })
    }

    fn q_x2(&self) -> Result<f64> {
        self.value("qx2", 0.0, false, q_x2)
    }

    fn q_xinv(&self) -> Result<f64> {
        self.value("qxinv", 0.0, false, q_xinv)
    }

    fn q_inf(&self) -> Result<f64> {
        self.value("qinf", 0.0, false, max_quasi)
    }

    /// `(on M, on N)` of a named quantity.
    fn both(
        &self,
        name: &str,
        param: f64,
        f: impl Fn(&DensityOperator, &DensityOperator) -> Result<f64> + Copy,
    ) -> Result<(f64, f64)> {
        Ok((self.value(name, param, false, f)?, self.value(name, param, true, f)?))
    }

    /// `(Q̃_α on M, on N, combined optimizer gap)` through the Hölder extremizer.
    fn sandwiched_quasi(&self, alpha: f64) -> Result<(f64, f64, f64)> {
        let mut out = [0.0; 2];
        let mut gap = 0.0;
        for (k, on_n) in [false, true].into_iter().enumerate() {
            let v = self.value("sandq", alpha, on_n, |r, s| Ok(holder_extremizer(r, s, alpha)?.value.abs()))?;
            gap += self.value("sandq_gap", alpha, on_n, |r, s| Ok(holder_extremizer(r, s, alpha)?.gap_estimate))?;
            out[k] = v;
        }
        Ok((out[0], out[1], gap))
    }

    /// `‖σ - R_ρ^t(σ_N)‖₁` or `‖ρ - R_σ^t(ρ_N)‖₁`.
    pub fn recovery_error(&self, reverse: bool, t: f64) -> Result<f64> {
        let key = format!("err|{reverse}|{:016x}", t.to_bits());
        self.cached(key, || {
            if reverse {
                self.setup.reverse_error(t)
            } else {
                self.setup.forward_error(t)
            }
        })
    }

    /// Recovery error of the universal map in the given direction.
    pub fn universal_error(&self, reverse: bool) -> Result<f64> {
        let cell = if reverse { &self.universal_rev } else { &self.universal_fwd };
        if let Some(v) = cell.get() {
            return Ok(*v);
        }
        let s = &self.setup;
        let v = if reverse {
            let r = s.petz_sigma().universal(s.rho_n().mat(), &self.rule)?;
            trace_norm_hermitian(&(s.rho().mat() - r))?
        } else {
            let r = s.petz_rho().universal(s.sigma_n().mat(), &self.rule)?;
            trace_norm_hermitian(&(s.sigma().mat() - r))?
        };
        Ok(*cell.get_or_init(|| v))
    }

    pub fn certificate(&self, params: &BoundParams) -> Result<BoundCertificate> {
        self.certificate_with_tolerance(params, DEFAULT_TOLERANCE)
    }

    pub fn certificate_with_tolerance(&self, params: &BoundParams, tolerance: f64) -> Result<BoundCertificate> {
        let id = params.theorem_id;
        let (order, interval) = params.resolve()?;
        let mut p = *params;
        if let (Some((lo, hi)), None) = (interval, p.epsilon) {
            p.epsilon = Some(0.5 * (lo + hi));
        }
        if id.is_universal() {
            p.t = 0.0;
        }
        let t = p.t;
        let cosh = (PI * t).cosh();
        let err = if id.is_universal() {
            self.universal_error(id.is_reverse())?
        } else {
            self.recovery_error(id.is_reverse(), t)?
        };
        let mut aux = BTreeMap::new();
        aux.insert("cosh_pi_t".to_string(), cosh);
        let mut tol = tolerance;
        let eps = p.epsilon.unwrap_or(0.0);

        let (lhs, rhs) = match id {
            TheoremId::ReFwd | TheoremId::ReFwdU => {
                let (d, dn) = self.both("D", 0.0, umegaki)?;
                let q = self.q_x2()?;
                let lhs = d - dn;
                aux.insert("Q_x2".into(), q);
                aux.insert("D".into(), d);
                aux.insert("D_N".into(), dn);
                p.split_s = Some(0.0);
                p.split_t = (lhs > 0.0).then(|| 4.0 * q.sqrt() / lhs.sqrt());
                let rhs = if id == TheoremId::ReFwd {
                    pos_pow(PI / (8.0 * cosh), 4.0) / q * err.powi(4)
                } else {
                    err.powi(4) / (256.0 * q)
                };
                (lhs, rhs)
            }
            TheoremId::PrqFwd | TheoremId::PrqFwdU | TheoremId::HolevoRem => {
                let s = if id == TheoremId::HolevoRem { 0.5 } else { order.expect("quasi order") };
                let (qm, qn) = self.both("Qs", s, |r, g| petz_renyi_quasi(r, g, s))?;
                let q = self.q_x2()?;
                let k = k_forward_quasi(s, q);
                let m = s.abs();
                aux.insert("Q_x2".into(), q);
                aux.insert("Q_s".into(), qm);
                aux.insert("Q_s_N".into(), qn);
                aux.insert("K".into(), k);
                (p.split_s, p.split_t) = quasi_split(s, qm - qn, q);
                match id {
                    TheoremId::HolevoRem => {
                        let rhs = (PI / 5.0 * err / cosh).powi(5) / (128.0 * PI * q);
                        (qn - qm, rhs)
                    }
                    TheoremId::PrqFwd => {
                        let rhs = k * pos_pow(PI * err / ((4.0 + 2.0 * m) * cosh), 4.0 + 2.0 * m);
                        ((qm - qn).abs(), rhs)
                    }
                    _ => {
                        let rhs = k * pos_pow(err / (2.0 + m), 4.0 + 2.0 * m);
                        ((qm - qn).abs(), rhs)
                    }
                }
            }
            TheoremId::PreFwd => {
                let alpha = p.alpha.expect("validated");
                let s = 1.0 - alpha;
                let (da, dan) = self.both("Dpetz", alpha, |r, g| petz_renyi(r, g, alpha))?;
                let (qm, qn) = self.both("Qs", s, |r, g| petz_renyi_quasi(r, g, s))?;
                let q = self.q_x2()?;
                let k = k_forward_quasi(s, q);
                aux.insert("Q_x2".into(), q);
                aux.insert("K".into(), k);
                aux.insert("D_alpha".into(), da);
                aux.insert("D_alpha_N".into(), dan);
                (p.split_s, p.split_t) = quasi_split(s, qm - qn, q);
                let rhs = if alpha < 1.0 {
                    let inner = k * pos_pow(PI * err / (2.0 * (3.0 - alpha) * cosh), 2.0 * (3.0 - alpha));
                    inner.ln_1p() / (1.0 - alpha)
                } else {
                    let qi = self.q_xinv()?;
                    aux.insert("Q_xinv".into(), qi);
                    let inner = k / qi.powf(alpha - 1.0)
                        * pos_pow(PI * err / (2.0 * (alpha + 1.0) * cosh), 2.0 * (alpha + 1.0));
                    inner.ln_1p() / (alpha - 1.0)
                };
                (da - dan, rhs)
            }
            TheoremId::ReRev | TheoremId::ReRevU => {
                let (d, dn) = self.both("D", 0.0, umegaki)?;
                let qi = self.q_xinv()?;
                let k = k_reverse_entropy(qi, eps);
                let expo = 1.0 / (0.5 - eps);
                let lhs = d - dn;
                aux.insert("Q_xinv".into(), qi);
                aux.insert("K".into(), k);
                aux.insert("exponent".into(), expo);
                aux.insert("D".into(), d);
                aux.insert("D_N".into(), dn);
                let (delta, ss, tt) = delta_split(lhs);
                (p.split_s, p.split_t) = (ss, tt);
                aux.insert("delta".into(), delta);
                let base = if id == TheoremId::ReRev { k * PI / (2.0 * cosh) * err } else { k * err };
                (lhs, pos_pow(base, expo))
            }
            TheoremId::PrqRev | TheoremId::PrqRevU => {
                let s = order.expect("quasi order");
                let (qm, qn) = self.both("Qs", s, |r, g| petz_renyi_quasi(r, g, s))?;
                let qi = self.q_xinv()?;
                let k = k_reverse_quasi(s, qi, eps);
                let expo = 1.0 / ((1.0 - s.abs()) / 2.0 - eps);
                let lhs = (qm - qn).abs();
                aux.insert("Q_xinv".into(), qi);
                aux.insert("K".into(), k);
                aux.insert("exponent".into(), expo);
                aux.insert("Q_s".into(), qm);
                aux.insert("Q_s_N".into(), qn);
                let (delta, ss, tt) = delta_split(lhs);
                (p.split_s, p.split_t) = (ss, tt);
                aux.insert("delta".into(), delta);
                let base = if id == TheoremId::PrqRev { k * PI / (2.0 * cosh) * err } else { k * err };
                (lhs, pos_pow(base, expo))
            }
            TheoremId::PreRev => {
                let alpha = p.alpha.expect("validated");
                let s = 1.0 - alpha;
                let (da, dan) = self.both("Dpetz", alpha, |r, g| petz_renyi(r, g, alpha))?;
                let (qm, qn) = self.both("Qs", s, |r, g| petz_renyi_quasi(r, g, s))?;
                let qi = self.q_xinv()?;
                let k = k_reverse_quasi(s, qi, eps);
                aux.insert("Q_xinv".into(), qi);
                aux.insert("K".into(), k);
                aux.insert("D_alpha".into(), da);
                aux.insert("D_alpha_N".into(), dan);
                let (delta, ss, tt) = delta_split(qm - qn);
                (p.split_s, p.split_t) = (ss, tt);
                aux.insert("delta".into(), delta);
                let rhs = if alpha < 1.0 {
                    let expo = 1.0 / (alpha / 2.0 - eps);
                    aux.insert("exponent".into(), expo);
                    pos_pow(k * PI / (2.0 * cosh) * err, expo).ln_1p() / (1.0 - alpha)
                } else {
                    let expo = 1.0 / ((2.0 - alpha) / 2.0 - eps);
                    aux.insert("exponent".into(), expo);
                    let inner = pos_pow(k * PI / (2.0 * (alpha + 1.0) * cosh) * err, expo) / qi.powf(alpha - 1.0);
                    inner.ln_1p() / (alpha - 1.0)
                };
                (da - dan, rhs)
            }
            TheoremId::Sandq | TheoremId::SandqU | TheoremId::Sande => {
                let alpha = order.expect("sandwiched order");
                let ap = holder_conjugate(alpha);
                let (qm, qn, gap) = self.sandwiched_quasi(alpha)?;
                let qinf = self.q_inf()?;
                let k = k_reverse_quasi(1.0 / ap, qinf, eps);
                let expo = 1.0 / ((1.0 - 1.0 / ap.abs()) / 2.0 - eps);
                aux.insert("Q_inf".into(), qinf);
                aux.insert("K".into(), k);
                aux.insert("exponent".into(), expo);
                aux.insert("Q_alpha".into(), qm);
                aux.insert("Q_alpha_N".into(), qn);
                aux.insert("optimizer_gap".into(), gap);
                tol += gap;
                let (delta, ss, tt) = delta_split(qm - qn);
                (p.split_s, p.split_t) = (ss, tt);
                aux.insert("delta".into(), delta);
                match id {
                    TheoremId::Sandq => ((qm - qn).abs(), pos_pow(k * PI / (2.0 * cosh) * err, expo)),
                    TheoremId::SandqU => ((qm - qn).abs(), pos_pow(0.5 * k * err, expo)),
                    _ => {
                        let (dm, dn) = self.both("Dsand", alpha, |r, g| sandwiched(r, g, alpha))?;
                        aux.insert("D_alpha".into(), dm);
                        aux.insert("D_alpha_N".into(), dn);
                        let inner = pos_pow(k * PI / (2.0 * cosh) * err, expo);
                        let rhs = if alpha < 1.0 {
                            ap.abs() * inner.ln_1p()
                        } else {
                            ap * (inner / qinf.powf(1.0 / ap)).ln_1p()
                        };
                        (dm - dn, rhs)
                    }
                }
            }
        };

        if !(lhs.is_finite() && rhs.is_finite() && rhs >= 0.0) {
            return Err(Error::NonFinite(format!("{id}: lhs {lhs}, rhs {rhs}")));
        }
        aux.insert("saturated".into(), if lhs.abs() <= SATURATION_TOL { 1.0 } else { 0.0 });
        let margin = lhs - rhs;
        Ok(BoundCertificate {
            theorem_id: id,
            params: p,
            lhs,
            rhs,
            margin,
            recovery_error: err,
            aux,
            tolerance: tol,
            passed: margin >= -tol,
            instance_fingerprint: self.fingerprint.clone(),
        })
    }
}

/// One-shot certificate for `(ρ, σ, N)`.
pub fn certificate(
    theorem_id: TheoremId,
    rho: &DensityOperator,
    sigma: &DensityOperator,
    n: &SubalgebraSpec,
    params: &BoundParams,
) -> Result<BoundCertificate> {
    let instance = Instance::new(rho.clone(), sigma.clone(), n.clone())?;
    let mut p = *params;
    p.theorem_id = theorem_id;
    CertificateContext::new(instance)?.certificate(&p)
}
