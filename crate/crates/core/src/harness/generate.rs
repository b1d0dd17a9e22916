//! Seeded random instances: generic, near-degenerate and exactly recoverable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::DimSpec;
use crate::bounds::Instance;
use crate::error::Result;
use crate::qmat::{kron, random_density_with, CMat, DensityOperator, Subsystem, C64, FAITHFUL_FLOOR_REL};
use crate::recovery::SubalgebraSpec;

/// Multiple of the faithfulness floor given to the smallest eigenvalue of a
/// near-degenerate state.
pub const NEAR_DEGENERATE_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    Generic,
    NearDegenerate,
    ExactRecovery,
}

impl std::str::FromStr for InstanceKind {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "generic" => Ok(Self::Generic),
            "near-degenerate" | "near_degenerate" => Ok(Self::NearDegenerate),
            "exact-recovery" | "exact_recovery" => Ok(Self::ExactRecovery),
            _ => Err(crate::error::Error::Config(format!("unknown instance kind `{s}`"))),
        }
    }
}

/// The random stream of trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_subalgebra<R: Rng + ?Sized>(dims: DimSpec, rng: &mut R) -> Result<SubalgebraSpec> {
    match dims {
        DimSpec::Tensor { d_a, d_b } => {
            let keep = if rng.random_bool(0.5) { Subsystem::A } else { Subsystem::B };
            SubalgebraSpec::tensor_factor(d_a, d_b, keep)
        }
        DimSpec::Plain { d } => SubalgebraSpec::random_pinching(d, rng),
    }
}

/// Replaces the smallest eigenvalue by `NEAR_DEGENERATE_FACTOR` times the
/// faithfulness floor and renormalizes.
fn squeeze_smallest(state: &DensityOperator) -> Result<DensityOperator> {
    let lams = state.eigenvalues();
    let lmax = lams.last().copied().unwrap_or(1.0);
    let small = NEAR_DEGENERATE_FACTOR * FAITHFUL_FLOOR_REL * lmax;
    let mut new: Vec<f64> = lams.to_vec();
    new[0] = small;
    let total: f64 = new.iter().sum();
    let u = state.spectrum().eigenvectors();
    let diag = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        new.len(),
        new.iter().map(|l| C64::new(l / total, 0.0)),
    ));
    DensityOperator::from_matrix(u * diag * u.adjoint())
}

/// A pair that `N` is sufficient for: a shared factor on the discarded side
/// of a tensor product, or two states inside a pinching subalgebra.
fn sufficient_pair<R: Rng + ?Sized>(
    dims: DimSpec,
    n: &SubalgebraSpec,
    rng: &mut R,
) -> Result<(DensityOperator, DensityOperator)> {
    match (dims, n.kind()) {
        (DimSpec::Tensor { d_a, d_b }, crate::recovery::SubalgebraKind::TensorFactor { keep, .. }) => {
            let (dk, dd) = match keep {
                Subsystem::A => (d_a, d_b),
                Subsystem::B => (d_b, d_a),
            };
            let (k1, k2) = (random_density_with(dk, dk, rng)?, random_density_with(dk, dk, rng)?);
            let shared = random_density_with(dd, dd, rng)?;
            let pair = |k: &DensityOperator| match keep {
                Subsystem::A => kron(k.mat(), shared.mat()),
                Subsystem::B => kron(shared.mat(), k.mat()),
            };
            Ok((DensityOperator::from_matrix(pair(&k1))?, DensityOperator::from_matrix(pair(&k2))?))
        }
        _ => {
            let d = n.dim();
            let (r, s) = (random_density_with(d, d, rng)?, random_density_with(d, d, rng)?);
            Ok((n.restrict(&r)?, n.restrict(&s)?))
        }
    }
}

/// Draws one instance: 70% generic, 20% near-degenerate, 10% exactly recoverable.
pub fn generate_instance<R: Rng + ?Sized>(dims: DimSpec, rng: &mut R) -> Result<(InstanceKind, Instance)> {
    let u: f64 = rng.random();
    let kind = if u < 0.7 {
        InstanceKind::Generic
    } else if u < 0.9 {
        InstanceKind::NearDegenerate
    } else {
        InstanceKind::ExactRecovery
    };
    Ok((kind, instance_of_kind(dims, kind, rng)?))
}

/// Draws a random subalgebra for `dims` and a state pair of the given kind.
pub fn instance_of_kind<R: Rng + ?Sized>(dims: DimSpec, kind: InstanceKind, rng: &mut R) -> Result<Instance> {
    let d = dims.total();
    let n = random_subalgebra(dims, rng)?;
    let (rho, sigma) = match kind {
        InstanceKind::Generic => (random_density_with(d, d, rng)?, random_density_with(d, d, rng)?),
        InstanceKind::NearDegenerate => {
            let (r, s) = (random_density_with(d, d, rng)?, random_density_with(d, d, rng)?);
            if rng.random_bool(0.5) {
                (squeeze_smallest(&r)?, s)
            } else {
                (r, squeeze_smallest(&s)?)
            }
        }
        InstanceKind::ExactRecovery => sufficient_pair(dims, &n, rng)?,
    };
    Instance::new(rho, sigma, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::umegaki;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let dims = DimSpec::Tensor { d_a: 2, d_b: 2 };
        let a = generate_instance(dims, &mut trial_rng(5, 3)).unwrap();
        let b = generate_instance(dims, &mut trial_rng(5, 3)).unwrap();
        let c = generate_instance(dims, &mut trial_rng(5, 4)).unwrap();
        assert_eq!(a.1.fingerprint(), b.1.fingerprint());
        assert_ne!(a.1.fingerprint(), c.1.fingerprint());
    }

    #[test]
    fn exact_recovery_pairs_have_no_entropy_loss() {
        for dims in [DimSpec::Tensor { d_a: 2, d_b: 3 }, DimSpec::Plain { d: 4 }] {
            let mut rng = trial_rng(1, 0);
            let n = random_subalgebra(dims, &mut rng).unwrap();
            let (r, s) = sufficient_pair(dims, &n, &mut rng).unwrap();
            let loss = umegaki(&r, &s).unwrap() - umegaki(&n.restrict(&r).unwrap(), &n.restrict(&s).unwrap()).unwrap();
            assert!(loss.abs() < 1e-10, "{dims}: {loss}");
        }
    }

    #[test]
    fn near_degenerate_state_stays_faithful() {
        let mut rng = trial_rng(2, 0);
        let r = random_density_with(4, 4, &mut rng).unwrap();
        let q = squeeze_smallest(&r).unwrap();
        assert!(q.is_faithful());
        let ratio = q.eigenvalues()[0] / q.eigenvalues()[3];
        assert!(ratio < 20.0 * FAITHFUL_FLOOR_REL && ratio > FAITHFUL_FLOOR_REL);
    }

    #[test]
    fn kind_mix_is_roughly_seventy_twenty_ten() {
        let mut counts = [0usize; 3];
        for trial in 0..1000 {
            let (k, _) = generate_instance(DimSpec::Plain { d: 2 }, &mut trial_rng(9, trial)).unwrap();
            counts[k as usize] += 1;
        }
        assert!((630..770).contains(&counts[0]), "{counts:?}");
        assert!((150..250).contains(&counts[1]), "{counts:?}");
        assert!((60..140).contains(&counts[2]), "{counts:?}");
    }
}
