//! Independent reference implementations used as test oracles.
//!
//! Everything here is built directly on nalgebra, without going through the
//! library's eigensolver, matrix functions or spectral tables.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qrecov::qmat::{random_density, DensityOperator, Subsystem};
use qrecov::recovery::SubalgebraSpec;

pub type C = Complex64;
pub type M = DMatrix<C>;

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn hermitize(m: &M) -> M {
    (m + m.adjoint()) * c(0.5)
}

/// Eigenvalues (unsorted) and eigenvectors of a Hermitian matrix.
pub fn herm_eig(m: &M) -> (Vec<f64>, M) {
    let e = nalgebra::SymmetricEigen::new(hermitize(m));
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

/// `g(m)` for Hermitian `m`, complex-valued `g`.
pub fn mfun_c(m: &M, g: impl Fn(f64) -> C) -> M {
    let (l, u) = herm_eig(m);
    let d = M::from_diagonal(&DVector::from_iterator(l.len(), l.iter().map(|&x| g(x))));
    &u * d * u.adjoint()
}

pub fn mfun(m: &M, g: impl Fn(f64) -> f64) -> M {
    mfun_c(m, |x| c(g(x)))
}

pub fn mpow(m: &M, p: f64) -> M {
    mfun(m, |x| x.powf(p))
}

/// `m^{a + ib}` for positive definite `m`.
pub fn cpow(m: &M, a: f64, b: f64) -> M {
    mfun_c(m, |x| (C::new(a, b) * x.ln()).exp())
}

pub fn min_eig(m: &M) -> f64 {
    herm_eig(m).0.into_iter().fold(f64::INFINITY, f64::min)
}

pub fn mlog(m: &M) -> M {
    mfun(m, f64::ln)
}

pub fn tr(m: &M) -> C {
    m.trace()
}

pub fn svals(m: &M) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

pub fn trace_norm(m: &M) -> f64 {
    svals(m).iter().sum()
}

pub fn frob(m: &M) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn kron(a: &M, b: &M) -> M {
    a.kronecker(b)
}

pub fn eye(d: usize) -> M {
    M::identity(d, d)
}

/// Column-major vectorization.
pub fn vec_of(m: &M) -> DVector<C> {
    DVector::from_iterator(m.len(), m.iter().copied())
}

pub fn unvec(v: &DVector<C>, d: usize) -> M {
    M::from_column_slice(d, d, v.as_slice())
}

/// `d² x d²` matrix of `X ↦ σ X ρ^{-1}`: `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.
pub fn modular_superop(sigma: &M, rho: &M) -> M {
    let rinv = rho.clone().try_inverse().expect("invertible");
    kron(&rinv.transpose(), sigma)
}

/// `⟨ρ^{1/2}| f(Δ(σ,ρ)) |ρ^{1/2}⟩` by diagonalizing the superoperator.
pub fn q_f_superop(rho: &M, sigma: &M, f: impl Fn(f64) -> f64) -> f64 {
    let l = hermitize(&modular_superop(sigma, rho));
    let (ev, u) = herm_eig(&l);
    let v = vec_of(&mpow(rho, 0.5));
    let coeff = u.adjoint() * v;
    ev.iter().zip(coeff.iter()).map(|(&x, a)| f(x) * a.norm_sqr()).sum()
}

/// Loop-based partial trace of a `(d_a d_b)`-square matrix.
pub fn ptrace(x: &M, d_a: usize, d_b: usize, keep_a: bool) -> M {
    if keep_a {
        M::from_fn(d_a, d_a, |i, j| (0..d_b).map(|k| x[(i * d_b + k, j * d_b + k)]).sum())
    } else {
        M::from_fn(d_b, d_b, |i, j| (0..d_a).map(|k| x[(k * d_b + i, k * d_b + j)]).sum())
    }
}

/// Conditional expectation onto `M_{d_a} ⊗ I` (or `I ⊗ M_{d_b}`) by explicit
/// partial trace and re-embedding.
pub fn tensor_expect(x: &M, d_a: usize, d_b: usize, keep_a: bool) -> M {
    if keep_a {
        kron(&ptrace(x, d_a, d_b, true), &(eye(d_b) * c(1.0 / d_b as f64)))
    } else {
        kron(&(eye(d_a) * c(1.0 / d_a as f64)), &ptrace(x, d_a, d_b, false))
    }
}

/// `ρ^{1/2-it} ρ_N^{-1/2+it} x ρ_N^{-1/2-it} ρ^{1/2+it}`.
pub fn rotated_petz(rho: &M, rho_n: &M, t: f64, x: &M) -> M {
    let k = cpow(rho, 0.5, -t) * cpow(rho_n, -0.5, t);
    &k * x * k.adjoint()
}

pub fn umegaki(rho: &M, sigma: &M) -> f64 {
    tr(&(rho * (mlog(rho) - mlog(sigma)))).re
}

/// `tr(ρ^{-1} σ²)`.
pub fn q_x2(rho: &M, sigma: &M) -> f64 {
    tr(&(rho.clone().try_inverse().unwrap() * sigma * sigma)).re
}

/// `tr(ρ² σ^{-1})`.
pub fn q_xinv(rho: &M, sigma: &M) -> f64 {
    tr(&(rho * rho * sigma.clone().try_inverse().unwrap())).re
}

/// `‖ρ^{1/2} σ^{-1/α'} ρ^{1/2}‖_α` from singular values.
pub fn sandwiched_q(rho: &M, sigma: &M, alpha: f64) -> f64 {
    let p = if alpha.is_infinite() { -1.0 } else { (1.0 - alpha) / alpha };
    let rs = mpow(rho, 0.5);
    let a = &rs * mpow(sigma, p) * &rs;
    let s = svals(&a);
    if alpha.is_infinite() {
        return s.iter().copied().fold(0.0, f64::max);
    }
    s.iter().map(|x| x.powf(alpha)).sum::<f64>().powf(1.0 / alpha)
}

pub fn uhlmann(rho: &M, sigma: &M) -> f64 {
    let n = trace_norm(&(mpow(rho, 0.5) * mpow(sigma, 0.5)));
    n * n
}

pub fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| a * (a / b).ln()).sum()
}

pub fn classical_renyi(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    p.iter().zip(q).map(|(a, b)| a.powf(alpha) * b.powf(1.0 - alpha)).sum::<f64>().ln() / (alpha - 1.0)
}

pub fn classical_fidelity(p: &[f64], q: &[f64]) -> f64 {
    let s: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
    s * s
}

pub fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

/// A random faithful `d_a ⊗ d_b` instance with a tensor-factor subalgebra.
pub struct TensorInstance {
    pub rho: DensityOperator,
    pub sigma: DensityOperator,
    pub n: SubalgebraSpec,
    pub d_a: usize,
    pub d_b: usize,
    pub keep_a: bool,
}

impl TensorInstance {
    pub fn random(d_a: usize, d_b: usize, keep_a: bool, seed: u64) -> Self {
        let d = d_a * d_b;
        let keep = if keep_a { Subsystem::A } else { Subsystem::B };
        Self {
            rho: random_density(d, d, seed).unwrap(),
            sigma: random_density(d, d, seed.wrapping_mul(7919).wrapping_add(1)).unwrap(),
            n: SubalgebraSpec::tensor_factor(d_a, d_b, keep).unwrap(),
            d_a,
            d_b,
            keep_a,
        }
    }

    /// `ρ_A ⊗ τ`, `σ_A ⊗ τ` with `N` the first factor.
    pub fn product(d_a: usize, d_b: usize, seed: u64) -> Self {
        let a1 = random_density(d_a, d_a, seed).unwrap();
        let a2 = random_density(d_a, d_a, seed + 1).unwrap();
        let tau = random_density(d_b, d_b, seed + 2).unwrap();
        Self {
            rho: DensityOperator::from_matrix(kron(a1.mat(), tau.mat())).unwrap(),
            sigma: DensityOperator::from_matrix(kron(a2.mat(), tau.mat())).unwrap(),
            n: SubalgebraSpec::tensor_factor(d_a, d_b, Subsystem::A).unwrap(),
            d_a,
            d_b,
            keep_a: true,
        }
    }

    pub fn rho_m(&self) -> M {
        self.rho.mat().clone()
    }

    pub fn sigma_m(&self) -> M {
        self.sigma.mat().clone()
    }

    pub fn rho_n_m(&self) -> M {
        tensor_expect(self.rho.mat(), self.d_a, self.d_b, self.keep_a)
    }

    pub fn sigma_n_m(&self) -> M {
        tensor_expect(self.sigma.mat(), self.d_a, self.d_b, self.keep_a)
    }
}

pub fn dm(m: M) -> DensityOperator {
    DensityOperator::from_matrix(m).unwrap()
}

/// `∫_0^∞ f(λ) dλ` by the exp-sinh rule `λ = exp((π/2) sinh τ)` with a
/// trapezoid in `τ`; robust to algebraic endpoint singularities.
pub fn exp_sinh(f: impl Fn(f64) -> f64) -> f64 {
    let h = 1.0 / 256.0;
    let n = (5.5 / h) as i64;
    let mut acc = 0.0;
    for k in -n..=n {
        let tau = k as f64 * h;
        let lam = (std::f64::consts::FRAC_PI_2 * tau.sinh()).exp();
        let jac = lam * std::f64::consts::FRAC_PI_2 * tau.cosh();
        let v = f(lam) * jac;
        if v.is_finite() {
            acc += v;
        }
    }
    acc * h
}
