//! Optimized f-divergences
//! `Q̃_f(ρ‖σ) = sup_ω ⟨ρ^{1/2}| f(Δ(σ,ω)) |ρ^{1/2}⟩` over faithful states `ω`.
//!
//! For `f = x^{-1/α'}` the supremum is the Schatten norm
//! `‖ρ^{1/2} σ^{-1/α'} ρ^{1/2}‖_α`, attained at `ω = A^α / tr(A^α)`. For a
//! monotone `f` the optimizer works with `-f`, so the reported value is
//! `Q̃_{-f}`; with `f = x^γ`, `γ ∈ (0,1)` this is `-‖A‖_α` for `α = 1/(1+γ)`.
//!
//! The iterative optimizer parameterizes `ω = H²/tr(H²)` over Hermitian `H`,
//! estimates gradients by central differences on a Hilbert–Schmidt orthonormal
//! basis, and takes quasi-Newton (BFGS) steps with backtracking.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::divergence::{sandwich_operator, uhlmann_fidelity, umegaki, RelativeModularSpectrum};
use crate::error::{Error, Result};
use crate::fclass::{make_power, FFunction, FKind, MonotoneKind};
use crate::qmat::{lp_of, CMat, DensityOperator, HermitianMatrix, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationResult {
    pub value: f64,
    pub optimizer_state: DensityOperator,
    pub iterations: usize,
    pub converged: bool,
    /// Distance to a closed-form value when one exists, otherwise the size of
    /// the last accepted improvement.
    pub gap_estimate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitPolicy {
    /// Hölder extremizer for power functions, maximally mixed otherwise.
    Auto,
    MaximallyMixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    pub fd_step: f64,
    pub rel_tolerance: f64,
    pub patience: usize,
    pub init: InitPolicy,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            fd_step: 1e-5,
            rel_tolerance: 1e-9,
            patience: 5,
            init: InitPolicy::Auto,
        }
    }
}

/// `⟨ρ^{1/2}| f(Δ(σ,ω)) |ρ^{1/2}⟩`.
pub fn opt_objective(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    omega: &DensityOperator,
    f: &FFunction,
) -> Result<f64> {
    rho.require_faithful("rho")?;
    let spec = RelativeModularSpectrum::with_vector(sigma, omega, &rho.sqrt())?;
    Ok(spec.expectation(|x| f.eval(x)))
}

/// The order `α` whose Hölder extremizer solves the power `x^p`: `α = 1/(1+p)`.
pub fn alpha_for_power(p: f64) -> f64 {
    1.0 / (1.0 + p)
}

fn holder_state(a: &HermitianMatrix, alpha: f64) -> Result<DensityOperator> {
    let dec = a.eig()?;
    let w: Vec<f64> = dec.eigenvalues().iter().map(|&l| l.max(0.0).powf(alpha)).collect();
    let total: f64 = w.iter().sum();
    let m = dec.apply(|l| l.max(0.0).powf(alpha) / total);
    DensityOperator::new(HermitianMatrix::from_hermitian(m))
}

fn holder_core(rho: &DensityOperator, sigma: &DensityOperator, alpha: f64) -> Result<(f64, DensityOperator)> {
    let a = sandwich_operator(rho, sigma, alpha)?;
    let ev: Vec<f64> = a.eig()?.eigenvalues().iter().map(|&l| l.max(0.0)).collect();
    let norm = lp_of(ev.into_iter(), alpha);
    let value = if alpha > 1.0 { norm } else { -norm };
    Ok((value, holder_state(&a, alpha)?))
}

/// Closed-form optimum for `f = x^{-1/α'}`, `α ∈ (1/2,1) ∪ (1,∞)`.
pub fn holder_extremizer(rho: &DensityOperator, sigma: &DensityOperator, alpha: f64) -> Result<OptimizationResult> {
    if !(alpha > 0.5 && alpha.is_finite()) || alpha == 1.0 {
        return Err(Error::ParamOutOfRange(format!(
            "Hölder order {alpha} outside (1/2,1)∪(1,∞)"
        )));
    }
    rho.require_faithful("rho")?;
    sigma.require_faithful("sigma")?;
    let (value, state) = holder_core(rho, sigma, alpha)?;
    let f = make_power((1.0 - alpha) / alpha)?;
    let at_state = signed_objective(rho, sigma, &state, &f)?;
    Ok(OptimizationResult {
        value,
        optimizer_state: state,
        iterations: 0,
        converged: true,
        gap_estimate: (value - at_state).abs(),
    })
}

fn signed_objective(rho: &DensityOperator, sigma: &DensityOperator, omega: &DensityOperator, f: &FFunction) -> Result<f64> {
    let v = opt_objective(rho, sigma, omega, f)?;
    Ok(match f.monotone_kind() {
        MonotoneKind::AntiMonotone => v,
        MonotoneKind::Monotone => -v,
    })
}

/// Closed-form `Q̃` (of `-f` when `f` is monotone), when one is known.
pub fn closed_form_value(rho: &DensityOperator, sigma: &DensityOperator, f: &FFunction) -> Result<Option<f64>> {
    Ok(match f.kind() {
        FKind::Power(p) => Some(holder_core(rho, sigma, alpha_for_power(p))?.0),
        FKind::Linear => Some(-uhlmann_fidelity(rho, sigma)?),
        FKind::NegLog => Some(umegaki(rho, sigma)?),
        FKind::InverseShift(_) => None,
    })
}

/// Orthonormal basis of the real vector space of `d x d` Hermitian matrices.
fn hermitian_basis(d: usize) -> Vec<CMat> {
    let mut basis = Vec::with_capacity(d * d);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for k in 0..d {
        let mut m = CMat::zeros(d, d);
        m[(k, k)] = C64::new(1.0, 0.0);
        basis.push(m);
    }
    for k in 0..d {
        for l in k + 1..d {
            let mut m = CMat::zeros(d, d);
            m[(k, l)] = C64::new(r, 0.0);
            m[(l, k)] = C64::new(r, 0.0);
            basis.push(m);
            let mut m = CMat::zeros(d, d);
            m[(k, l)] = C64::new(0.0, r);
            m[(l, k)] = C64::new(0.0, -r);
            basis.push(m);
        }
    }
    basis
}

struct Objective<'a> {
    f: &'a FFunction,
    /// `U_σ^* ρ^{1/2}`.
    left: CMat,
    s: Vec<f64>,
    basis: Vec<CMat>,
}

impl Objective<'_> {
    fn h_of(&self, x: &DVector<f64>) -> CMat {
        let d = self.s.len();
        let mut h = CMat::zeros(d, d);
        for (xi, b) in x.iter().zip(&self.basis) {
            h += b * C64::new(*xi, 0.0);
        }
        h
    }

    fn coords_of(&self, h: &CMat) -> DVector<f64> {
        DVector::from_iterator(
            self.basis.len(),
            self.basis.iter().map(|b| crate::divergence::trace_product(b, h)),
        )
    }

    fn omega(&self, x: &DVector<f64>) -> Result<DensityOperator> {
        let h = self.h_of(x);
        let h2 = &h * &h;
        let tr: f64 = h2.diagonal().iter().map(|z| z.re).sum();
        if !(tr > 0.0) {
            return Err(Error::DomainError("H vanished".into()));
        }
        DensityOperator::new(HermitianMatrix::from_hermitian(h2 / C64::new(tr, 0.0)))
    }

    fn value_at(&self, omega: &DensityOperator) -> f64 {
        let m = &self.left * omega.spectrum().eigenvectors();
        let w = omega.eigenvalues();
        let mut acc = 0.0;
        for (i, si) in self.s.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                let weight = m[(i, j)].norm_sqr();
                if weight != 0.0 {
                    acc += weight * self.f.anti_monotone_eval(si / wj);
                }
            }
        }
        acc
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        match self.omega(x) {
            Ok(w) => {
                let v = self.value_at(&w);
                if v.is_nan() {
                    f64::NEG_INFINITY
                } else {
                    v
                }
            }
            Err(_) => f64::NEG_INFINITY,
        }
    }

    fn gradient(&self, x: &DVector<f64>, h: f64) -> DVector<f64> {
        let step = h * x.norm();
        DVector::from_iterator(
            x.len(),
            (0..x.len()).map(|k| {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += step;
                xm[k] -= step;
                (self.value(&xp) - self.value(&xm)) / (2.0 * step)
            }),
        )
    }
}

/// Iterative maximization of the objective over faithful states.
pub fn optimized_f_divergence(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    f: &FFunction,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult> {
    rho.require_faithful("rho")?;
    sigma.require_faithful("sigma")?;
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let d = rho.dim();
    let obj = Objective {
        f,
        left: sigma.spectrum().eigenvectors().adjoint() * rho.sqrt(),
        s: sigma.eigenvalues().to_vec(),
        basis: hermitian_basis(d),
    };
    let init_state = match (cfg.init, f.kind()) {
        (InitPolicy::Auto, FKind::Power(p)) => holder_core(rho, sigma, alpha_for_power(p))?.1,
        (InitPolicy::Auto, FKind::Linear) => holder_core(rho, sigma, 0.5)?.1,
        _ => DensityOperator::maximally_mixed(d),
    };
    let mut x = obj.coords_of(&init_state.sqrt());
    let mut g_val = obj.value(&x);
    let mut grad = obj.gradient(&x, cfg.fd_step);
    let n = x.len();
    let mut hinv = DMatrix::<f64>::identity(n, n);
    let mut quiet_steps = 0;
    let mut iterations = 0;
    let mut converged = false;
    let mut last_improvement = 0.0;
    while iterations < cfg.max_iterations {
        iterations += 1;
        // ascent direction for the maximization
        let mut dir = &hinv * &grad;
        if dir.dot(&grad) <= 0.0 {
            hinv = DMatrix::identity(n, n);
            dir = grad.clone();
        }
        let slope = dir.dot(&grad);
        if !(slope > 0.0) {
            converged = true;
            break;
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let xn = &x + &dir * step;
            let vn = obj.value(&xn);
            if vn >= g_val + 1e-4 * step * slope {
                accepted = Some((xn, vn));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, vn)) = accepted else {
            if hinv != DMatrix::identity(n, n) {
                hinv = DMatrix::identity(n, n);
                continue;
            }
            converged = true;
            break;
        };
        let gn = obj.gradient(&xn, cfg.fd_step);
        let s = &xn - &x;
        // curvature of the minimized function -g
        let y = &grad - &gn;
        let sy = s.dot(&y);
        if sy > 1e-16 * s.norm() * y.norm() && sy > 0.0 {
            if iterations == 1 {
                hinv *= sy / y.dot(&y);
            }
            let rho_k = 1.0 / sy;
            let hy = &hinv * &y;
            let yhy = y.dot(&hy);
            hinv += (&s * s.transpose()) * ((1.0 + rho_k * yhy) * rho_k)
                - (&hy * s.transpose() + &s * hy.transpose()) * rho_k;
        }
        let improvement = vn - g_val;
        last_improvement = improvement;
        let rel = improvement / g_val.abs().max(f64::MIN_POSITIVE);
        x = xn;
        g_val = vn;
        grad = gn;
        if rel < cfg.rel_tolerance {
            quiet_steps += 1;
            if quiet_steps >= cfg.patience {
                converged = true;
                break;
            }
        } else {
            quiet_steps = 0;
        }
    }
    let state = obj.omega(&x)?;
    let gap_estimate = match closed_form_value(rho, sigma, f)? {
        Some(c) => (c - g_val).abs(),
        None => last_improvement.abs(),
    };
    Ok(OptimizationResult {
        value: g_val,
        optimizer_state: state,
        iterations,
        converged,
        gap_estimate,
    })
}
