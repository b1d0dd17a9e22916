//! Lemma vectors in Hilbert–Schmidt space and their trace-norm bridges.
//!
//! Vectors are `d x d` matrices with inner product `tr(x^* y)`. The isometry
//! `V_ρ: L₂(N) → L₂(M)` is `x ↦ x ρ_N^{-1/2} ρ^{1/2}`. The relative modular
//! operator of the subalgebra is evaluated on ambient matrices, which is exact
//! because `L₂(N)` is invariant under `Δ(σ_N, ρ_N)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fclass::{FFunction, MonotoneKind};
use crate::qmat::{
    complex_power, frobenius, identity, trace_norm_hermitian, CMat, DensityOperator, HSVector,
    HermitianMatrix, C64,
};
use crate::quad::{integrate_half_line_vec, QuadTolerance};
use crate::recovery::{PetzMap, SubalgebraSpec};
use crate::divergence::standard_f_divergence;

/// Isometry tolerance on `U^* U - I` for [`lemma_key_residual`].
pub const ISOMETRY_TOL: f64 = 1e-10;

fn cp(a: &DensityOperator, re: f64, im: f64) -> Result<CMat> {
    complex_power(a, C64::new(re, im))
}

/// `g(Δ(σ,ω))|x⟩` evaluated in the product eigenbasis.
fn modular_apply(sigma: &DensityOperator, omega: &DensityOperator, x: &CMat, g: impl Fn(f64) -> f64) -> CMat {
    let us = sigma.spectrum().eigenvectors();
    let uw = omega.spectrum().eigenvectors();
    let mut m = us.adjoint() * x * uw;
    for (i, s) in sigma.eigenvalues().iter().enumerate() {
        for (j, w) in omega.eigenvalues().iter().enumerate() {
            m[(i, j)] *= g(s / w);
        }
    }
    us * m * uw.adjoint()
}

/// `⟨x| g(Δ(σ,ω)) |x⟩`.
fn modular_form(sigma: &DensityOperator, omega: &DensityOperator, x: &CMat, g: impl Fn(f64) -> f64) -> f64 {
    let m = sigma.spectrum().eigenvectors().adjoint() * x * omega.spectrum().eigenvectors();
    let mut acc = 0.0;
    for (i, s) in sigma.eigenvalues().iter().enumerate() {
        for (j, w) in omega.eigenvalues().iter().enumerate() {
            acc += m[(i, j)].norm_sqr() * g(s / w);
        }
    }
    acc
}

/// `V_ρ|x⟩ = |x ρ_N^{-1/2} ρ^{1/2}⟩`.
pub fn hs_isometry_v(rho: &DensityOperator, n: &SubalgebraSpec, x_n: &HSVector) -> Result<HSVector> {
    rho.require_faithful("rho")?;
    let rho_n = n.restrict(rho)?;
    if x_n.matrix().nrows() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: x_n.matrix().nrows(),
        });
    }
    HSVector::new(x_n.matrix() * rho_n.inv_sqrt()? * rho.sqrt())
}

/// Both sides of the operator-convexity identity for `x ↦ x^{-1}` under an isometry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyResidual {
    /// `⟨h|U^* A^{-1} U|h⟩ - ⟨h|(U^* A U)^{-1}|h⟩`.
    pub lhs_gap: f64,
    /// `⟨v|A|v⟩` with `v = A^{-1} U h - U (U^* A U)^{-1} h`.
    pub quadratic: f64,
}

fn pd_inverse(a: &CMat) -> Result<CMat> {
    let dec = HermitianMatrix::new(a.clone())?.eig()?;
    let ev = dec.eigenvalues();
    let top = ev.last().copied().unwrap_or(0.0).abs().max(f64::MIN_POSITIVE);
    if ev.first().is_none_or(|&l| l <= top * f64::EPSILON) {
        return Err(Error::SingularA);
    }
    Ok(dec.apply(|l| 1.0 / l))
}

pub fn lemma_key_residual(u: &CMat, a: &CMat, h: &[C64]) -> Result<KeyResidual> {
    let (n, m) = (u.nrows(), u.ncols());
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.nrows(),
        });
    }
    if h.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: h.len(),
        });
    }
    let dev = frobenius(&(u.adjoint() * u - identity(m)));
    if dev > ISOMETRY_TOL {
        return Err(Error::DomainError(format!("U is not an isometry (deviation {dev:e})")));
    }
    let a_inv = pd_inverse(a)?;
    let b_inv = pd_inverse(&(u.adjoint() * a * u))?;
    let h = CMat::from_column_slice(m, 1, h);
    let uh = u * &h;
    let lhs_gap = (uh.adjoint() * &a_inv * &uh)[(0, 0)].re - (h.adjoint() * &b_inv * &h)[(0, 0)].re;
    let v = &a_inv * &uh - u * &b_inv * &h;
    let quadratic = (v.adjoint() * a * &v)[(0, 0)].re;
    Ok(KeyResidual { lhs_gap, quadratic })
}

/// Shared state for the lemma vectors of one instance `(ρ, σ, N)`.
#[derive(Clone, Debug)]
pub struct LemmaSetup {
    rho: DensityOperator,
    sigma: DensityOperator,
    rho_n: DensityOperator,
    sigma_n: DensityOperator,
    rho_sqrt: CMat,
    rho_n_sqrt: CMat,
    /// `ρ_N^{-1/2} ρ^{1/2}`, the right factor of `V_ρ`.
    v_tail: CMat,
    petz_rho: PetzMap,
    petz_sigma: PetzMap,
}

impl LemmaSetup {
    pub fn new(rho: &DensityOperator, sigma: &DensityOperator, n: &SubalgebraSpec) -> Result<Self> {
        rho.require_faithful("rho")?;
        sigma.require_faithful("sigma")?;
        if rho.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: sigma.dim(),
            });
        }
        let petz_rho = PetzMap::new(rho, n)?;
        let petz_sigma = PetzMap::new(sigma, n)?;
        let rho_n = petz_rho.rho_n().clone();
        let sigma_n = petz_sigma.rho_n().clone();
        let rho_sqrt = rho.sqrt();
        Ok(Self {
            v_tail: rho_n.inv_sqrt()? * &rho_sqrt,
            rho_n_sqrt: rho_n.sqrt(),
            rho_sqrt,
            rho: rho.clone(),
            sigma: sigma.clone(),
            rho_n,
            sigma_n,
            petz_rho,
            petz_sigma,
        })
    }

    pub fn rho(&self) -> &DensityOperator {
        &self.rho
    }

    pub fn sigma(&self) -> &DensityOperator {
        &self.sigma
    }

    pub fn rho_n(&self) -> &DensityOperator {
        &self.rho_n
    }

    pub fn sigma_n(&self) -> &DensityOperator {
        &self.sigma_n
    }

    /// Petz maps of `ρ` (forward direction) and `σ` (reverse direction).
    pub fn petz_rho(&self) -> &PetzMap {
        &self.petz_rho
    }

    pub fn petz_sigma(&self) -> &PetzMap {
        &self.petz_sigma
    }

    pub fn apply_v(&self, x: &CMat) -> CMat {
        x * &self.v_tail
    }

    /// `w_λ = (Δ_M+λ)^{-1}|ρ^{1/2}⟩ - V_ρ (Δ_N+λ)^{-1}|ρ_N^{1/2}⟩`.
    pub fn w_lambda(&self, lambda: f64) -> Result<CMat> {
        if !(lambda >= 0.0) {
            return Err(Error::NegativeLambda(lambda));
        }
        // For large λ the 1/λ parts of both resolvents cancel exactly since
        // V ρ_N^{1/2} = ρ^{1/2}; dropping them avoids an O(ε/λ) roundoff tail.
        let g = |x: f64| {
            if lambda >= 1.0 {
                -x / (lambda * (x + lambda))
            } else {
                1.0 / (x + lambda)
            }
        };
        let m = modular_apply(&self.sigma, &self.rho, &self.rho_sqrt, g);
        let n = modular_apply(&self.sigma_n, &self.rho_n, &self.rho_n_sqrt, g);
        Ok(m - self.apply_v(&n))
    }

    /// `F(λ) = ⟨w_λ|(Δ_M + λ)|w_λ⟩` together with `w_λ`.
    pub fn f_lambda(&self, lambda: f64) -> Result<(f64, CMat)> {
        let w = self.w_lambda(lambda)?;
        Ok((modular_form(&self.sigma, &self.rho, &w, |x| x + lambda), w))
    }

    /// `|σ^{1/2+it} ρ^{-it}⟩ - |σ_N^{1/2+it} ρ_N^{-1/2-it} ρ^{1/2}⟩`.
    pub fn w_t(&self, t: f64) -> Result<CMat> {
        let a = cp(&self.sigma, 0.5, t)? * cp(&self.rho, 0.0, -t)?;
        let b = cp(&self.sigma_n, 0.5, t)? * cp(&self.rho_n, -0.5, -t)? * &self.rho_sqrt;
        Ok(a - b)
    }

    /// `|ρ^{1/2}⟩ - |σ^{1/2+it} σ_N^{-1/2-it} ρ_N^{1/2+it} ρ^{-it}⟩`.
    pub fn v_t(&self, t: f64) -> Result<CMat> {
        let y = cp(&self.sigma, 0.5, t)?
            * cp(&self.sigma_n, -0.5, -t)?
            * cp(&self.rho_n, 0.5, t)?
            * cp(&self.rho, 0.0, -t)?;
        Ok(&self.rho_sqrt - y)
    }

    /// `|ρ^{1/2}⟩ - |σ^{1/2+it} σ_N^{-1/2-it} ρ_N^{1/2} ω_N^{1/2+it} ρ_N^{-1/2} ρ^{1/2} R_ρ(ω_N)^{-1/2-it}⟩`.
    pub fn u_t(&self, omega_n: &DensityOperator, t: f64) -> Result<CMat> {
        omega_n.require_faithful("omega_N")?;
        let r_omega = DensityOperator::new(HermitianMatrix::from_hermitian(
            self.petz_rho.apply(omega_n.mat())?,
        ))?;
        let y = cp(&self.sigma, 0.5, t)?
            * cp(&self.sigma_n, -0.5, -t)?
            * &self.rho_n_sqrt
            * cp(omega_n, 0.5, t)?
            * self.rho_n.inv_sqrt()?
            * &self.rho_sqrt
            * cp(&r_omega, -0.5, -t)?;
        Ok(&self.rho_sqrt - y)
    }

    /// `‖σ - R_ρ^t(σ_N)‖₁`.
    pub fn forward_error(&self, t: f64) -> Result<f64> {
        trace_norm_hermitian(&(self.sigma.mat() - self.petz_rho.rotated(t, self.sigma_n.mat())?))
    }

    /// `‖ρ - R_σ^t(ρ_N)‖₁`.
    pub fn reverse_error(&self, t: f64) -> Result<f64> {
        trace_norm_hermitian(&(self.rho.mat() - self.petz_sigma.rotated(t, self.rho_n.mat())?))
    }

    /// `-(cosh(πt)/π) ∫_0^∞ λ^{1/2+it} w_λ dλ` by adaptive quadrature.
    pub fn w_t_quadrature(&self, t: f64, tol: f64) -> Result<CMat> {
        let d = self.rho.dim();
        let res = integrate_half_line_vec(
            |l| {
                let w = self.w_lambda(l).expect("λ > 0 inside the quadrature");
                let z = C64::new(0.5, t) * l.ln();
                let scaled = w * z.exp();
                scaled.iter().flat_map(|c| [c.re, c.im]).collect()
            },
            2 * d * d,
            QuadTolerance::absolute(tol),
        )?;
        let pre = -(std::f64::consts::PI * t).cosh() / std::f64::consts::PI;
        let entries: Vec<C64> = res
            .value
            .chunks(2)
            .map(|c| C64::new(pre * c[0], pre * c[1]))
            .collect();
        Ok(CMat::from_column_slice(d, d, &entries))
    }

    /// `(∫_0^∞ F(λ) dν(λ), Q_g(ρ‖σ) - Q_g(ρ_N‖σ_N))` with `g` the anti-monotone
    /// member of `{f, -f}`; the two agree by the integral representation.
    pub fn f_integral(&self, f: &FFunction, tol: f64) -> Result<(f64, f64)> {
        if !f.is_regular() && f.nu_atoms().is_empty() {
            return Err(Error::NotRegular(f.label()));
        }
        let cont = integrate_half_line_vec(
            |l| {
                let (fl, _) = self.f_lambda(l).expect("λ > 0 inside the quadrature");
                vec![fl * f.nu_density(l)]
            },
            1,
            QuadTolerance::absolute(tol),
        )?
        .value[0];
        let mut atoms = 0.0;
        for (l, m) in f.nu_atoms() {
            atoms += m * self.f_lambda(l)?.0;
        }
        let sign = match f.monotone_kind() {
            MonotoneKind::AntiMonotone => 1.0,
            MonotoneKind::Monotone => -1.0,
        };
        let diff = sign
            * (standard_f_divergence(&self.rho, &self.sigma, f)?
                - standard_f_divergence(&self.rho_n, &self.sigma_n, f)?);
        Ok((cont + atoms, diff))
    }
}

pub fn f_lambda(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    n: &SubalgebraSpec,
    lambda: f64,
) -> Result<(f64, HSVector)> {
    let (f, w) = LemmaSetup::new(rho, sigma, n)?.f_lambda(lambda)?;
    Ok((f, HSVector::new(w)?))
}

pub fn w_t_vector(rho: &DensityOperator, sigma: &DensityOperator, n: &SubalgebraSpec, t: f64) -> Result<HSVector> {
    HSVector::new(LemmaSetup::new(rho, sigma, n)?.w_t(t)?)
}

pub fn v_t_vector(rho: &DensityOperator, sigma: &DensityOperator, n: &SubalgebraSpec, t: f64) -> Result<HSVector> {
    HSVector::new(LemmaSetup::new(rho, sigma, n)?.v_t(t)?)
}

pub fn u_t_vector(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    n: &SubalgebraSpec,
    omega_n: &DensityOperator,
    t: f64,
) -> Result<HSVector> {
    HSVector::new(LemmaSetup::new(rho, sigma, n)?.u_t(omega_n, t)?)
}

/// Which lemma vector a bridge check refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BridgeKind {
    /// `‖σ - R_ρ^t(σ_N)‖₁ ≤ 2‖w_t‖₂`.
    W,
    /// `‖ρ - R_σ^{-t}(ρ_N)‖₁ ≤ 2‖v_t‖₂`.
    V,
    /// `‖ρ - R_σ^{-t}(ρ_N)‖₁ ≤ 2‖u_t‖₂`.
    U,
}

/// One trace-norm bridge evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BridgeCheck {
    pub kind: BridgeKind,
    pub t: f64,
    pub vector_norm: f64,
    pub trace_distance: f64,
    /// `2‖vector‖₂ - trace_distance`.
    pub slack: f64,
}

impl BridgeCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }
}

impl LemmaSetup {
    /// All three bridges at rotation `t`, with `ω_N` for the optimized vector.
    pub fn bridges(&self, omega_n: &DensityOperator, t: f64) -> Result<[BridgeCheck; 3]> {
        let make = |kind, v: CMat, dist: f64| {
            let vector_norm = frobenius(&v);
            BridgeCheck {
                kind,
                t,
                vector_norm,
                trace_distance: dist,
                slack: 2.0 * vector_norm - dist,
            }
        };
        let rev = self.reverse_error(-t)?;
        Ok([
            make(BridgeKind::W, self.w_t(t)?, self.forward_error(t)?),
            make(BridgeKind::V, self.v_t(t)?, rev),
            make(BridgeKind::U, self.u_t(omega_n, t)?, rev),
        ])
    }
}
