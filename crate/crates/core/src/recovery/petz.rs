//! Petz, rotated Petz and universal recovery maps.
//!
//! For a subalgebra with `ρ_N = E(ρ)`:
//! `R_ρ^t(x) = ρ^{1/2-it} ρ_N^{-1/2+it} x ρ_N^{-1/2-it} ρ^{1/2+it}` and
//! `R_ρ^u(x) = ∫ R_ρ^{t/2}(x) dβ(t)`. For a channel `Φ` and reference `σ`:
//! `R_{Φ,σ}(x) = σ^{1/2} Φ^*(Φ(σ)^{-1/2} x Φ(σ)^{-1/2}) σ^{1/2}` and
//! `R^t_{Φ,σ}(x) = σ^{-it} R_{Φ,σ}(Φ(σ)^{it} x Φ(σ)^{-it}) σ^{it}`.

use super::{QuantumChannel, SubalgebraSpec};
use crate::error::{Error, Result};
use crate::qmat::{complex_power, CMat, DensityOperator, HermitianMatrix, C64};
use crate::quad::BetaRule;

fn cp(a: &DensityOperator, re: f64, im: f64) -> Result<CMat> {
    complex_power(a, C64::new(re, im))
}

/// Petz-family recovery maps of a state `ρ` relative to a subalgebra.
#[derive(Clone, Debug)]
pub struct PetzMap {
    rho: DensityOperator,
    rho_n: DensityOperator,
}

impl PetzMap {
    pub fn new(rho: &DensityOperator, n: &SubalgebraSpec) -> Result<Self> {
        rho.require_faithful("rho")?;
        if rho.dim() != n.dim() {
            return Err(Error::DimensionMismatch {
                expected: n.dim(),
                found: rho.dim(),
            });
        }
        Ok(Self {
            rho: rho.clone(),
            rho_n: n.restrict(rho)?,
        })
    }

    pub fn rho(&self) -> &DensityOperator {
        &self.rho
    }

    pub fn rho_n(&self) -> &DensityOperator {
        &self.rho_n
    }

    /// `K_t = ρ^{1/2-it} ρ_N^{-1/2+it}`, so that `R^t(x) = K_t x K_t^*`.
    pub fn kraus(&self, t: f64) -> Result<CMat> {
        Ok(cp(&self.rho, 0.5, -t)? * cp(&self.rho_n, -0.5, t)?)
    }

    fn check(&self, x: &CMat) -> Result<()> {
        if x.nrows() != self.rho.dim() || x.ncols() != self.rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.rho.dim(),
                found: x.nrows(),
            });
        }
        Ok(())
    }

    pub fn rotated(&self, t: f64, x: &CMat) -> Result<CMat> {
        self.check(x)?;
        let k = self.kraus(t)?;
        Ok(&k * x * k.adjoint())
    }

    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        self.rotated(0.0, x)
    }

    pub fn universal(&self, x: &CMat, rule: &BetaRule) -> Result<CMat> {
        self.check(x)?;
        let d = self.rho.dim();
        let mut acc = CMat::zeros(d, d);
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            acc += self.rotated(0.5 * t, x)? * C64::new(*w, 0.0);
        }
        Ok(acc)
    }
}

pub fn petz_subalg(rho: &DensityOperator, n: &SubalgebraSpec, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::from_hermitian(PetzMap::new(rho, n)?.apply(x.matrix())?))
}

pub fn rotated_petz_subalg(
    rho: &DensityOperator,
    n: &SubalgebraSpec,
    t: f64,
    x: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::from_hermitian(PetzMap::new(rho, n)?.rotated(t, x.matrix())?))
}

pub fn universal_petz_subalg(
    rho: &DensityOperator,
    n: &SubalgebraSpec,
    x: &HermitianMatrix,
    rule: &BetaRule,
) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::from_hermitian(PetzMap::new(rho, n)?.universal(x.matrix(), rule)?))
}

/// The `ρ`-preserving conditional expectation `ρ_N^{-1/2} E(ρ^{1/2} x ρ^{1/2}) ρ_N^{-1/2}`,
/// the trace-dual of the Petz map.
pub fn rho_preserving_expectation(rho: &DensityOperator, n: &SubalgebraSpec, x: &CMat) -> Result<CMat> {
    let rho_n = n.restrict(rho)?;
    let rs = rho.sqrt();
    let inv = rho_n.inv_sqrt()?;
    Ok(&inv * n.expect(&(&rs * x * &rs))? * &inv)
}

/// Petz-family recovery maps of a channel relative to a reference state `σ`.
#[derive(Clone, Debug)]
pub struct ChannelPetz {
    channel: QuantumChannel,
    sigma: DensityOperator,
    phi_sigma: DensityOperator,
}

impl ChannelPetz {
    pub fn new(channel: &QuantumChannel, sigma: &DensityOperator) -> Result<Self> {
        sigma.require_faithful("sigma")?;
        let phi_sigma = channel.apply_state(sigma)?;
        if !phi_sigma.is_faithful() {
            return Err(Error::NonFaithful("channel output Φ(σ)".into()));
        }
        Ok(Self {
            channel: channel.clone(),
            sigma: sigma.clone(),
            phi_sigma,
        })
    }

    pub fn phi_sigma(&self) -> &DensityOperator {
        &self.phi_sigma
    }

    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        let inv = self.phi_sigma.inv_sqrt()?;
        let s = self.sigma.sqrt();
        Ok(&s * self.channel.adjoint(&(&inv * x * &inv))? * &s)
    }

    pub fn rotated(&self, t: f64, x: &CMat) -> Result<CMat> {
        let inner = cp(&self.phi_sigma, 0.0, t)? * x * cp(&self.phi_sigma, 0.0, -t)?;
        Ok(cp(&self.sigma, 0.0, -t)? * self.apply(&inner)? * cp(&self.sigma, 0.0, t)?)
    }

    pub fn universal(&self, x: &CMat, rule: &BetaRule) -> Result<CMat> {
        let d = self.sigma.dim();
        let mut acc = CMat::zeros(d, d);
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            acc += self.rotated(0.5 * t, x)? * C64::new(*w, 0.0);
        }
        Ok(acc)
    }
}

pub fn petz_channel(channel: &QuantumChannel, sigma: &DensityOperator, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::from_hermitian(ChannelPetz::new(channel, sigma)?.apply(x.matrix())?))
}

pub fn rotated_petz_channel(
    channel: &QuantumChannel,
    sigma: &DensityOperator,
    t: f64,
    x: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::from_hermitian(ChannelPetz::new(channel, sigma)?.rotated(t, x.matrix())?))
}

pub fn universal_petz_channel(
    channel: &QuantumChannel,
    sigma: &DensityOperator,
    x: &HermitianMatrix,
    rule: &BetaRule,
) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::from_hermitian(ChannelPetz::new(channel, sigma)?.universal(x.matrix(), rule)?))
}
