mod common;

use common::*;
use qrecov::qmat::{random_density, random_hermitian, rng_from_seed, DensityOperator, HermitianMatrix, Subsystem};
use qrecov::quad::{beta_truncated_mass, BetaRule};
use qrecov::recovery::{
    choi_matrix, min_choi_eigenvalue, petz_channel, petz_subalg, rho_preserving_expectation, rotated_petz_channel,
    rotated_petz_subalg, universal_petz_channel, universal_petz_subalg, Block, ChannelPetz, PetzMap,
    QuantumChannel, SubalgebraSpec,
};

fn h(m: M) -> HermitianMatrix {
    HermitianMatrix::new(hermitize(&m)).unwrap()
}

fn matrix_units(d: usize) -> Vec<M> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut e = M::zeros(d, d);
            e[(i, j)] = c(1.0);
            out.push(e);
        }
    }
    out
}

fn specs() -> Vec<SubalgebraSpec> {
    let mut rng = rng_from_seed(4);
    let u = qrecov::qmat::random_unitary(4, &mut rng);
    vec![
        SubalgebraSpec::tensor_factor(2, 2, Subsystem::A).unwrap(),
        SubalgebraSpec::tensor_factor(2, 2, Subsystem::B).unwrap(),
        SubalgebraSpec::diagonal(4).unwrap(),
        SubalgebraSpec::random_pinching(4, &mut rng).unwrap(),
        SubalgebraSpec::block(vec![Block { dim: 1, multiplicity: 2 }, Block { dim: 2, multiplicity: 1 }], Some(&u))
            .unwrap(),
    ]
}

#[test]
fn conditional_expectation_axioms() {
    let units = matrix_units(4);
    for n in specs() {
        n.validate().unwrap();
        for e in &units {
            let ex = n.expect(e).unwrap();
            assert!(approx(tr(&ex).re, tr(e).re, 1e-10) && tr(&ex).im.abs() < 1e-10);
            assert!(frob(&(n.expect(&ex).unwrap() - &ex)) < 1e-10);
            assert!(n.membership_residual(&ex).unwrap() < 1e-10);
            for f in &units {
                let lhs = tr(&(n.expect(e).unwrap().adjoint() * f));
                let rhs = tr(&(e.adjoint() * n.expect(f).unwrap()));
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
        assert!(frob(&(n.expect(&eye(4)).unwrap() - eye(4))) < 1e-10);
    }
}

#[test]
fn conditional_expectation_examples() {
    let a = random_density(2, 2, 1).unwrap();
    let b = random_density(3, 3, 2).unwrap();
    let n = SubalgebraSpec::tensor_factor(2, 3, Subsystem::A).unwrap();
    let got = n.conditional_expectation(&h(kron(a.mat(), b.mat()))).unwrap();
    assert!(frob(&(got.matrix() - kron(a.mat(), &(eye(3) * c(1.0 / 3.0))))) < 1e-14);

    let mut rng = rng_from_seed(3);
    let x = random_hermitian(4, &mut rng);
    let got = SubalgebraSpec::diagonal(4).unwrap().conditional_expectation(&x).unwrap();
    let want = M::from_fn(4, 4, |i, j| if i == j { x.matrix()[(i, i)] } else { c(0.0) });
    assert!(frob(&(got.matrix() - want)) < 1e-14);

    for keep_a in [true, false] {
        let inst = TensorInstance::random(2, 3, keep_a, 9);
        let got = inst.n.expect(inst.rho.mat()).unwrap();
        assert!(frob(&(got - inst.rho_n_m())) < 1e-13);
    }
}

#[test]
fn petz_examples() {
    let inst = TensorInstance::random(2, 2, true, 5);
    let rho_n = h(inst.rho_n_m());
    let back = petz_subalg(&inst.rho, &inst.n, &rho_n).unwrap();
    assert!(frob(&(back.matrix() - inst.rho_m())) < 1e-9);

    // Against the maximally mixed state the map is the embedding of N, rescaled by d_N.
    let mix = DensityOperator::maximally_mixed(4);
    let x = h(inst.sigma_n_m());
    let got = petz_subalg(&mix, &inst.n, &x).unwrap();
    assert!(frob(&(got.matrix() - x.matrix())) < 1e-12);

    let got = petz_subalg(&inst.rho, &inst.n, &h(inst.sigma_n_m())).unwrap();
    let want = rotated_petz(&inst.rho_m(), &inst.rho_n_m(), 0.0, &inst.sigma_n_m());
    assert!(frob(&(got.matrix() - want)) < 1e-10);
}

#[test]
fn rotated_petz_examples() {
    let inst = TensorInstance::random(2, 3, false, 6);
    let x = h(inst.sigma_n_m());
    let plain = petz_subalg(&inst.rho, &inst.n, &x).unwrap();
    let r0 = rotated_petz_subalg(&inst.rho, &inst.n, 0.0, &x).unwrap();
    assert!(frob(&(r0.matrix() - plain.matrix())) < 1e-10);

    let mix = DensityOperator::maximally_mixed(6);
    let base = rotated_petz_subalg(&mix, &inst.n, 0.0, &x).unwrap();
    for t in [-2.0, -0.5, 0.7, 3.0] {
        let r = rotated_petz_subalg(&inst.rho, &inst.n, t, &h(inst.rho_n_m())).unwrap();
        assert!(frob(&(r.matrix() - inst.rho_m())) < 1e-9);

        let r = rotated_petz_subalg(&inst.rho, &inst.n, t, &x).unwrap();
        let want = rotated_petz(&inst.rho_m(), &inst.rho_n_m(), t, &inst.sigma_n_m());
        assert!(frob(&(r.matrix() - want)) < 1e-10);
        assert!(approx(r.trace(), 1.0, 1e-9));

        let m = rotated_petz_subalg(&mix, &inst.n, t, &x).unwrap();
        assert!(frob(&(m.matrix() - base.matrix())) < 1e-12);
    }
}

#[test]
fn beta_rule_is_a_probability_measure() {
    let wide = BetaRule::new(40.0, 201).unwrap();
    assert!(approx(wide.weights.iter().sum::<f64>(), 1.0, 1e-10));
    let rule = BetaRule::default();
    assert!(approx(rule.weights.iter().sum::<f64>(), beta_truncated_mass(12.0), 1e-10));
    // Independent check of the density: trapezoid on a fine grid.
    let n = 200_000;
    let step = 80.0 / n as f64;
    let mass: f64 = (0..=n)
        .map(|k| {
            let t = -40.0 + k as f64 * step;
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            w * std::f64::consts::FRAC_PI_2 / ((std::f64::consts::PI * t).cosh() + 1.0)
        })
        .sum::<f64>()
        * step;
    assert!(approx(mass, 1.0, 1e-9));
}

#[test]
fn universal_map_examples() {
    let rule = BetaRule::default();
    let inst = TensorInstance::random(2, 2, true, 7);
    let back = universal_petz_subalg(&inst.rho, &inst.n, &h(inst.rho_n_m()), &rule).unwrap();
    assert!(frob(&(back.matrix() - inst.rho_m())) < 1e-8);
    let r = universal_petz_subalg(&inst.rho, &inst.n, &h(inst.sigma_n_m()), &rule).unwrap();
    assert!(approx(r.trace(), 1.0, 1e-8));

    let prod = TensorInstance::product(2, 2, 8);
    let r = universal_petz_subalg(&prod.rho, &prod.n, &h(prod.sigma_n_m()), &rule).unwrap();
    assert!(frob(&(r.matrix() - prod.sigma_m())) < 1e-8);
}

#[test]
fn channel_petz_examples() {
    let mut rng = rng_from_seed(11);
    let sigma = random_density(3, 3, 12).unwrap();
    let rho = random_density(3, 3, 13).unwrap();
    let id = QuantumChannel::identity(3);
    let r = petz_channel(&id, &sigma, rho.matrix()).unwrap();
    assert!(frob(&(r.matrix() - rho.mat())) < 1e-10);

    // Partial trace as a Kraus channel against the subalgebra route.
    let inst = TensorInstance::random(2, 3, true, 14);
    let ptr = QuantumChannel::partial_trace(2, 3, Subsystem::A).unwrap();
    let x_a = ptrace(&inst.rho_m(), 2, 3, true);
    let via_channel = petz_channel(&ptr, &inst.sigma, &h(x_a.clone())).unwrap();
    let via_subalg = petz_subalg(&inst.sigma, &inst.n, &h(kron(&x_a, &(eye(3) * c(1.0 / 3.0))))).unwrap();
    assert!(frob(&(via_channel.matrix() - via_subalg.matrix())) < 1e-10);

    let rule = BetaRule::default();
    for seed in 0..5 {
        let phi = QuantumChannel::random(3, 2, 3, &mut rng).unwrap();
        let s = random_density(3, 3, 100 + seed).unwrap();
        let out = h(phi.apply(s.mat()).unwrap());
        let r = petz_channel(&phi, &s, &out).unwrap();
        assert!(frob(&(r.matrix() - s.mat())) < 1e-9);
        for t in [-1.0, 0.4] {
            let r = rotated_petz_channel(&phi, &s, t, &out).unwrap();
            assert!(frob(&(r.matrix() - s.mat())) < 1e-9);
        }
        let u = universal_petz_channel(&phi, &s, &out, &rule).unwrap();
        assert!(frob(&(u.matrix() - s.mat())) < 1e-8);
    }
}

#[test]
fn petz_map_is_dual_to_rho_preserving_expectation() {
    let mut rng = rng_from_seed(21);
    for n in specs() {
        let rho = random_density(4, 4, 22).unwrap();
        let map = PetzMap::new(&rho, &n).unwrap();
        for _ in 0..4 {
            let x = random_hermitian(4, &mut rng).into_matrix();
            let y = n.expect(&random_hermitian(4, &mut rng).into_matrix()).unwrap();
            let lhs = tr(&(rho_preserving_expectation(&rho, &n, &x).unwrap() * &y));
            let rhs = tr(&(&x * map.apply(&y).unwrap()));
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }
}

#[test]
fn recovery_maps_are_completely_positive() {
    let rule = BetaRule::default();
    for n in specs() {
        let rho = random_density(4, 4, 31).unwrap();
        let map = PetzMap::new(&rho, &n).unwrap();
        for t in [0.0, 0.8] {
            let choi = choi_matrix(4, |x| map.rotated(t, &n.expect(x).unwrap()).unwrap());
            assert!(min_choi_eigenvalue(&choi).unwrap() >= -1e-9);
            assert!(min_eig(&choi) >= -1e-9);
        }
        let choi = choi_matrix(4, |x| map.universal(&n.expect(x).unwrap(), &rule).unwrap());
        assert!(min_eig(&choi) >= -1e-9);
    }
    let mut rng = rng_from_seed(32);
    let phi = QuantumChannel::random(3, 2, 2, &mut rng).unwrap();
    let cp = ChannelPetz::new(&phi, &random_density(3, 3, 33).unwrap()).unwrap();
    let choi = choi_matrix(2, |x| cp.rotated(0.3, x).unwrap());
    assert!(min_eig(&choi) >= -1e-9);
    assert!(min_eig(&phi.choi()) >= -1e-10);
}

#[test]
fn channels_preserve_trace() {
    let mut rng = rng_from_seed(41);
    let phi = QuantumChannel::random(4, 3, 5, &mut rng).unwrap();
    let sum = phi.kraus().iter().fold(M::zeros(4, 4), |acc, k| acc + k.adjoint() * k);
    assert!(frob(&(sum - eye(4))) < 1e-10);
    let rho = random_density(4, 4, 42).unwrap();
    assert!(approx(tr(&phi.apply(rho.mat()).unwrap()).re, 1.0, 1e-10));
    let y = random_hermitian(3, &mut rng).into_matrix();
    let lhs = tr(&(phi.apply(rho.mat()).unwrap() * &y));
    let rhs = tr(&(rho.mat() * phi.adjoint(&y).unwrap()));
    assert!((lhs - rhs).norm() < 1e-10);
    assert!(QuantumChannel::new(vec![eye(2) * c(0.5)]).is_err());
}
