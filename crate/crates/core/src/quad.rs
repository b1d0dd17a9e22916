//! Numerical quadrature: adaptive Gauss–Kronrod (7/15) for scalar and vector
//! integrands, an exp-sinh rule for the half line, Gauss–Legendre rules, and the discretized probability measure
//! `dβ(t) = (π/2)(cosh(πt) + 1)^{-1} dt` used by the universal recovery map.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule for adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl QuadTolerance {
    pub fn absolute(abs: f64) -> Self {
        Self {
            abs,
            rel: 0.0,
            max_intervals: 20_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuadResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: f64,
}

fn gk15<F: FnMut(f64) -> Vec<f64>>(f: &mut F, a: f64, b: f64, n: usize) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = vec![0.0; n];
    let mut gauss = vec![0.0; n];
    let mut add = |x: f64, wk: f64, wg: Option<f64>, f: &mut F| -> Result<()> {
        let v = f(x);
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        for k in 0..n {
            if !v[k].is_finite() {
                return Err(Error::NonFinite(format!("integrand at {x:e}")));
            }
            kron[k] += wk * v[k];
            if let Some(w) = wg {
                gauss[k] += w * v[k];
            }
        }
        Ok(())
    };
    add(c, WGK[7], Some(WG[3]), f)?;
    for j in 0..7 {
        let dx = h * XGK[j];
        let wg = if j % 2 == 1 { Some(WG[j / 2]) } else { None };
        add(c - dx, WGK[j], wg, f)?;
        add(c + dx, WGK[j], wg, f)?;
    }
    let mut error: f64 = 0.0;
    for k in 0..n {
        kron[k] *= h;
        gauss[k] *= h;
        error = error.max((kron[k] - gauss[k]).abs());
    }
    Ok(Segment {
        a,
        b,
        value: kron,
        error,
    })
}

/// Globally adaptive Gauss–Kronrod integration of a vector-valued integrand
/// with `n` components over the finite interval `[a, b]`. The error norm is
/// the largest component error.
pub fn integrate_vec<F: FnMut(f64) -> Vec<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    n: usize,
    tol: QuadTolerance,
) -> Result<QuadResult<Vec<f64>>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::ParamOutOfRange("integration limits must be finite".into()));
    }
    let mut segments = vec![gk15(&mut f, a, b, n)?];
    let mut evaluations = 15;
    loop {
        let mut total = vec![0.0; n];
        let mut err = 0.0;
        let mut worst = 0;
        for (i, s) in segments.iter().enumerate() {
            for k in 0..n {
                total[k] += s.value[k];
            }
            err += s.error;
            if s.error > segments[worst].error {
                worst = i;
            }
        }
        let scale = total.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if err <= tol.abs.max(tol.rel * scale) {
            return Ok(QuadResult {
                value: total,
                error_estimate: err,
                evaluations,
            });
        }
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if segments.len() + 2 > tol.max_intervals || mid <= s.a || mid >= s.b {
            return Err(Error::ConvergenceFailure(format!(
                "adaptive quadrature stalled with error estimate {err:e}"
            )));
        }
        segments.push(gk15(&mut f, s.a, mid, n)?);
        segments.push(gk15(&mut f, mid, s.b, n)?);
        evaluations += 30;
    }
}

pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: QuadTolerance,
) -> Result<QuadResult<f64>> {
    let r = integrate_vec(|x| vec![f(x)], a, b, 1, tol)?;
    Ok(QuadResult {
        value: r.value[0],
        error_estimate: r.error_estimate,
        evaluations: r.evaluations,
    })
}

/// `∫_0^∞ f(λ) dλ` by the exp-sinh rule `λ = exp((π/2) sinh τ)`: a trapezoid
/// sum in `τ` whose step is halved until successive levels agree. Algebraic
/// singularities at either end decay double-exponentially in `τ`.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(
    mut f: F,
    tol: QuadTolerance,
) -> Result<QuadResult<f64>> {
    const TAU_MAX: f64 = 6.0;
    const MAX_LEVELS: usize = 12;
    let mut term = |tau: f64| -> Result<f64> {
        let lam = (FRAC_PI_2 * tau.sinh()).exp();
        if lam == 0.0 || !lam.is_finite() {
            return Ok(0.0);
        }
        let v = f(lam) * lam * FRAC_PI_2 * tau.cosh();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("integrand at {lam:e}")))
        }
    };
    let mut h = 0.5;
    let n0 = (TAU_MAX / h) as i64;
    let mut sum = 0.0;
    for k in -n0..=n0 {
        sum += term(k as f64 * h)?;
    }
    let mut evaluations = (2 * n0 + 1) as usize;
    let mut value = sum * h;
    for _ in 0..MAX_LEVELS {
        // New nodes sit at the odd multiples of h/2.
        let n = (TAU_MAX / h) as i64;
        for k in -n..n {
            sum += term((k as f64 + 0.5) * h)?;
        }
        evaluations += (2 * n) as usize;
        h *= 0.5;
        let next = sum * h;
        let err = (next - value).abs();
        value = next;
        if err <= tol.abs.max(tol.rel * value.abs()) {
            return Ok(QuadResult {
                value,
                error_estimate: err,
                evaluations,
            });
        }
    }
    Err(Error::ConvergenceFailure(format!(
        "exp-sinh quadrature did not converge, last value {value:e}"
    )))
}

/// `∫_0^∞ f(λ) dλ` split as `(0, 1]` plus `(1, ∞)` mapped by `λ → 1/λ`.
pub fn integrate_half_line_vec<F: FnMut(f64) -> Vec<f64>>(
    mut f: F,
    n: usize,
    tol: QuadTolerance,
) -> Result<QuadResult<Vec<f64>>> {
    let half = QuadTolerance {
        abs: 0.5 * tol.abs,
        ..tol
    };
    let lower = integrate_vec(&mut f, 0.0, 1.0, n, half)?;
    let upper = integrate_vec(
        |u| {
            let v = f(1.0 / u);
            v.into_iter().map(|x| x / u / u).collect()
        },
        0.0,
        1.0,
        n,
        half,
    )?;
    Ok(QuadResult {
        value: lower
            .value
            .iter()
            .zip(&upper.value)
            .map(|(a, b)| a + b)
            .collect(),
        error_estimate: lower.error_estimate + upper.error_estimate,
        evaluations: lower.evaluations + upper.evaluations,
    })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Density of the universal-map measure, `(π/2)(cosh(πt) + 1)^{-1}`.
pub fn beta_density(t: f64) -> f64 {
    FRAC_PI_2 / ((PI * t).cosh() + 1.0)
}

/// Exact mass of `dβ` on `[-T, T]`, `tanh(πT/2)`.
pub fn beta_truncated_mass(t_max: f64) -> f64 {
    (FRAC_PI_2 * t_max).tanh()
}

/// Composite Gauss–Legendre discretization of `dβ` on `[-t_max, t_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaRule {
    pub t_max: f64,
    pub nodes_per_panel: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Widest panel for which one 201-node rule resolves `dβ` to roundoff.
pub const BETA_PANEL_WIDTH: f64 = 24.0;
pub const BETA_T_MAX: f64 = 12.0;
pub const BETA_NODES: usize = 201;

impl BetaRule {
    /// Splits `[-t_max, t_max]` into the fewest equal panels no wider than
    /// [`BETA_PANEL_WIDTH`] and applies an `n`-node Gauss–Legendre rule on each.
    pub fn new(t_max: f64, nodes_per_panel: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) || nodes_per_panel == 0 {
            return Err(Error::ParamOutOfRange(format!(
                "beta rule needs t_max > 0 and nodes > 0 (got {t_max}, {nodes_per_panel})"
            )));
        }
        let panels = ((2.0 * t_max) / BETA_PANEL_WIDTH).ceil().max(1.0) as usize;
        let width = 2.0 * t_max / panels as f64;
        let (x, w) = gauss_legendre(nodes_per_panel);
        let mut nodes = Vec::with_capacity(panels * nodes_per_panel);
        let mut weights = Vec::with_capacity(panels * nodes_per_panel);
        for p in 0..panels {
            let lo = -t_max + p as f64 * width;
            let c = lo + 0.5 * width;
            for (xi, wi) in x.iter().zip(&w) {
                let t = c + 0.5 * width * xi;
                nodes.push(t);
                weights.push(0.5 * width * wi * beta_density(t));
            }
        }
        Ok(Self {
            t_max,
            nodes_per_panel,
            nodes,
            weights,
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

impl Default for BetaRule {
    fn default() -> Self {
        Self::new(BETA_T_MAX, BETA_NODES).expect("default beta rule")
    }
}
