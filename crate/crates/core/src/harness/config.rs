//! Campaign configuration and dimension specs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundParams, ParamFamily, TheoremId, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};

/// Largest total Hilbert-space dimension accepted by default.
pub const DEFAULT_MAX_DIM: usize = 8;
/// Fractions of the admissible `ε` interval used by [`EpsilonPolicy::Grid`].
pub const EPSILON_GRID_FRACTIONS: [f64; 3] = [0.25, 0.5, 0.75];

/// `d_A ⊗ d_B` with a tensor-factor subalgebra, or plain `d` with a random pinching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DimSpec {
    Tensor { d_a: usize, d_b: usize },
    Plain { d: usize },
}

impl DimSpec {
    pub fn total(&self) -> usize {
        match *self {
            Self::Tensor { d_a, d_b } => d_a * d_b,
            Self::Plain { d } => d,
        }
    }
}

impl fmt::Display for DimSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Tensor { d_a, d_b } => write!(f, "{d_a}x{d_b}"),
            Self::Plain { d } => write!(f, "{d}"),
        }
    }
}

impl FromStr for DimSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse dimension `{s}` (expected `d` or `dAxdB`)"));
        let num = |p: &str| p.trim().parse::<usize>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(['x', 'X', '⊗']).collect();
        let spec = match parts.as_slice() {
            [d] => Self::Plain { d: num(d)? },
            [a, b] => Self::Tensor { d_a: num(a)?, d_b: num(b)? },
            _ => return Err(bad()),
        };
        let ok = match spec {
            Self::Plain { d } => d >= 2,
            Self::Tensor { d_a, d_b } => d_a >= 1 && d_b >= 1 && d_a * d_b >= 2,
        };
        if ok {
            Ok(spec)
        } else {
            Err(Error::Config(format!("dimension `{s}` is too small")))
        }
    }
}

impl TryFrom<String> for DimSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DimSpec> for String {
    fn from(d: DimSpec) -> Self {
        d.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonPolicy {
    /// Midpoint of each theorem's admissible interval.
    Midpoint,
    /// Quarter points of the admissible interval.
    Grid,
}

impl FromStr for EpsilonPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "midpoint" => Ok(Self::Midpoint),
            "grid" => Ok(Self::Grid),
            _ => Err(Error::Config(format!("unknown epsilon policy `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub dims: Vec<DimSpec>,
    pub trials: usize,
    pub seed: u64,
    pub theorem_ids: Vec<TheoremId>,
    pub t_grid: Vec<f64>,
    /// Quasi-entropy orders; Petz–Rényi theorems use `α = 1 - s`.
    pub s_grid: Vec<f64>,
    /// Sandwiched orders.
    pub alpha_grid: Vec<f64>,
    pub epsilon_policy: EpsilonPolicy,
    pub tolerance: f64,
    #[serde(default)]
    pub tolerance_overrides: BTreeMap<TheoremId, f64>,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_max_dim() -> usize {
    DEFAULT_MAX_DIM
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            dims: vec![DimSpec::Tensor { d_a: 2, d_b: 2 }, DimSpec::Tensor { d_a: 2, d_b: 3 }],
            trials: 200,
            seed: 0,
            theorem_ids: TheoremId::ALL.to_vec(),
            t_grid: vec![0.0, 0.5, -0.5, 1.0, -1.0],
            s_grid: vec![0.3, -0.3, 0.5, -0.5],
            alpha_grid: vec![0.6, 0.75, 2.0, 3.0],
            epsilon_policy: EpsilonPolicy::Midpoint,
            tolerance: DEFAULT_TOLERANCE,
            tolerance_overrides: BTreeMap::new(),
            max_dim: DEFAULT_MAX_DIM,
            output_path: None,
            format: OutputFormat::Json,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        if self.trials == 0 {
            return cfg("trials must be at least 1".into());
        }
        for (name, empty) in [
            ("dims", self.dims.is_empty()),
            ("theorem_ids", self.theorem_ids.is_empty()),
            ("t_grid", self.t_grid.is_empty()),
            ("s_grid", self.s_grid.is_empty()),
            ("alpha_grid", self.alpha_grid.is_empty()),
        ] {
            if empty {
                return cfg(format!("{name} must be nonempty"));
            }
        }
        if let Some(d) = self.dims.iter().find(|d| d.total() > self.max_dim) {
            return cfg(format!("dimension {d} exceeds the guard {}", self.max_dim));
        }
        let tols = std::iter::once(&self.tolerance).chain(self.tolerance_overrides.values());
        if let Some(t) = tols.into_iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return cfg(format!("tolerance {t} must be finite and non-negative"));
        }
        if let Some(t) = self.t_grid.iter().find(|t| !t.is_finite()) {
            return cfg(format!("t = {t} is not finite"));
        }
        for id in &self.theorem_ids {
            for p in self.params_for(*id)? {
                p.epsilon_interval().map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        Ok(())
    }

    pub fn tolerance_for(&self, id: TheoremId) -> f64 {
        self.tolerance_overrides.get(&id).copied().unwrap_or(self.tolerance)
    }

    /// Parameter sets evaluated for `id` on every instance.
    pub fn params_for(&self, id: TheoremId) -> Result<Vec<BoundParams>> {
        let ts: &[f64] = if id.is_universal() { &[0.0] } else { &self.t_grid };
        let mut out = Vec::new();
        for &t in ts {
            let base = BoundParams::new(id, t);
            let ordered: Vec<BoundParams> = match id.family() {
                ParamFamily::Plain => vec![base],
                ParamFamily::Quasi => self.s_grid.iter().map(|&s| base.with_s(s)).collect(),
                ParamFamily::Petz => self.s_grid.iter().map(|&s| base.with_alpha(1.0 - s)).collect(),
                ParamFamily::Sandwiched => self.alpha_grid.iter().map(|&a| base.with_alpha(a)).collect(),
            };
            for p in ordered {
                match (self.epsilon_policy, id.uses_epsilon()) {
                    (EpsilonPolicy::Grid, true) => {
                        let (lo, hi) = p
                            .epsilon_interval()
                            .map_err(|e| Error::Config(e.to_string()))?
                            .expect("reverse theorems take ε");
                        out.extend(EPSILON_GRID_FRACTIONS.iter().map(|f| p.with_epsilon(lo + f * (hi - lo))));
                    }
                    _ => out.push(p),
                }
            }
        }
        Ok(out)
    }

    /// Certificates evaluated per trial.
    pub fn records_per_trial(&self) -> Result<usize> {
        let mut n = 0;
        for id in &self.theorem_ids {
            n += self.params_for(*id)?.len();
        }
        Ok(n)
    }
}
