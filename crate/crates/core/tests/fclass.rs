mod common;

use std::f64::consts::PI;

use common::*;
use qrecov::fclass::{c_bound, c_bound_grid, make_inverse_shift, make_linear, make_neg_log, make_power, FFunction, MonotoneKind};
use qrecov::Error;

fn catalog() -> Vec<FFunction> {
    let mut v = vec![make_neg_log(), make_inverse_shift(0.0).unwrap(), make_inverse_shift(1.0).unwrap()];
    for s in [-0.7, -0.5, -0.3, 0.3, 0.5, 0.7] {
        v.push(make_power(s).unwrap());
    }
    v
}

/// `a + bx + ∫ (1/(λ+x) - λ/(λ²+1)) dν` (or the monotone form for `x^s`,
/// `s > 0`) evaluated with the exp-sinh oracle.
fn oracle_reconstruct(f: &FFunction, x: f64) -> f64 {
    let atoms: f64 = f.nu_atoms().iter().map(|&(l, m)| m * (1.0 / (l + x) - l / (l * l + 1.0))).sum();
    let cont = match f.power_exponent() {
        Some(s) if s > 0.0 => exp_sinh(|l| f.nu_density(l) * x / (l * (l + x))),
        _ if f.is_regular() => exp_sinh(|l| f.nu_density(l) * (1.0 / (l + x) - l / (l * l + 1.0))),
        _ => 0.0,
    };
    f.affine_a() + f.linear_b() * x + atoms + cont
}

#[test]
fn neg_log_examples() {
    let f = make_neg_log();
    assert_eq!(f.eval(1.0), 0.0);
    assert_eq!(c_bound(&f, 0.1, 10.0).unwrap(), 1.0);
    for (s, t) in [(0.0, 1.0), (0.5, 3.0), (2.0, 1e6)] {
        assert_eq!(c_bound(&f, s, t).unwrap(), 1.0);
    }
    assert!(approx(oracle_reconstruct(&f, 2.0), -(2.0f64).ln(), 1e-7));
    assert!(approx(f.reconstruct(2.0).unwrap(), -(2.0f64).ln(), 1e-7));
}

#[test]
fn power_examples() {
    assert!(approx(make_power(0.5).unwrap().eval(4.0), 2.0, 1e-15));
    // x^{-1/2} at x = 1 from (sin(π/2)/π) ∫ λ^{-1/2}/(λ+1) dλ.
    let direct = exp_sinh(|l| (PI / 2.0).sin() / PI * l.powf(-0.5) / (l + 1.0));
    assert!(approx(direct, 1.0, 1e-7));
    let f = make_power(-0.5).unwrap();
    assert!(approx(f.reconstruct(1.0).unwrap(), 1.0, 1e-7));
    let want = PI / (0.3 * PI).sin() * 0.5f64.powf(-0.3);
    assert!(rel_close(c_bound(&make_power(0.3).unwrap(), 0.5, 2.0).unwrap(), want, 1e-14));
    let want = PI / (0.4 * PI).sin() * 5f64.powf(0.4);
    assert!(rel_close(c_bound(&make_power(-0.4).unwrap(), 0.0, 5.0).unwrap(), want, 1e-14));
}

#[test]
fn c_bound_matches_grid_supremum() {
    for f in [make_neg_log(), make_power(-0.4).unwrap(), make_power(0.6).unwrap()] {
        let closed = c_bound(&f, 0.2, 7.0).unwrap();
        let grid = c_bound_grid(&f, 0.2, 7.0, 2001).unwrap();
        assert!(rel_close(closed, grid, 1e-12), "{}", f.label());
    }
}

#[test]
fn inverse_shift_examples() {
    assert!(approx(make_inverse_shift(0.0).unwrap().eval(2.0), 0.5, 1e-15));
    let f = make_inverse_shift(1.0).unwrap();
    assert!(approx(f.eval(1.0), 0.5, 1e-15));
    assert!(!f.is_regular());
    assert!(matches!(c_bound(&f, 0.1, 1.0), Err(Error::NotRegular(_))));
    assert!(matches!(c_bound(&make_linear(), 0.1, 1.0), Err(Error::NotRegular(_))));
}

#[test]
fn invalid_constructions() {
    for s in [0.0, 1.0, -1.0, 1.5, f64::NAN] {
        assert!(make_power(s).is_err(), "{s}");
    }
    assert!(make_inverse_shift(-0.1).is_err());
    assert!(c_bound(&make_neg_log(), 2.0, 1.0).is_err());
}

#[test]
fn representation_consistency_for_catalog() {
    for f in catalog() {
        for x in [0.1, 1.0, 10.0] {
            let want = f.eval(x);
            let tol = 1e-7 * want.abs().max(1.0);
            let r = f.reconstruct(x).unwrap();
            assert!(approx(r, want, tol), "{} at {x}: {r} vs {want}", f.label());
            let o = oracle_reconstruct(&f, x);
            assert!(approx(o, want, tol), "oracle {} at {x}: {o} vs {want}", f.label());
        }
    }
}

#[test]
fn regular_flag_matches_measure() {
    for f in catalog() {
        let density_positive = [1e-3, 0.5, 1.0, 40.0].iter().all(|&l| f.nu_density(l) > 0.0);
        assert_eq!(f.is_regular(), f.nu_atoms().is_empty() && density_positive, "{}", f.label());
    }
}

#[test]
fn anti_monotonicity_spot_check() {
    for f in catalog().into_iter().chain([make_linear()]) {
        let g = |x: f64| f.anti_monotone_eval(x);
        for (x, y) in [(0.1, 1.0), (1.0, 10.0), (0.1, 10.0)] {
            assert!(g(x) >= g(y), "{}", f.label());
        }
        if f.monotone_kind() == MonotoneKind::AntiMonotone {
            assert_eq!(f.eval(0.3), f.anti_monotone_eval(0.3));
        }
    }
}
