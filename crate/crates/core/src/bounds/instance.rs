//! A state pair with a subalgebra, serializable for replay.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::qmat::{CMat, DensityOperator, MatrixRecord};
use crate::recovery::SubalgebraSpec;

/// Hex characters kept from the SHA-256 digest.
const FINGERPRINT_LEN: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRecord", into = "InstanceRecord")]
pub struct Instance {
    pub rho: DensityOperator,
    pub sigma: DensityOperator,
    pub subalgebra: SubalgebraSpec,
}

/// Wire form: declared dimension plus row-major `[re, im]` entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub dim: usize,
    pub rho: MatrixRecord,
    pub sigma: MatrixRecord,
    pub subalgebra: SubalgebraSpec,
}

impl Instance {
    pub fn new(rho: DensityOperator, sigma: DensityOperator, subalgebra: SubalgebraSpec) -> Result<Self> {
        for d in [rho.dim(), sigma.dim()] {
            if d != subalgebra.dim() {
                return Err(Error::DimensionMismatch {
                    expected: subalgebra.dim(),
                    found: d,
                });
            }
        }
        Ok(Self { rho, sigma, subalgebra })
    }

    pub fn dim(&self) -> usize {
        self.subalgebra.dim()
    }

    /// Truncated SHA-256 of the canonical JSON encoding.
    pub fn fingerprint(&self) -> String {
        let bytes = serde_json::to_vec(&InstanceRecord::from(self.clone()))
            .expect("instance records always serialize");
        let mut h = hex::encode(Sha256::digest(&bytes));
        h.truncate(FINGERPRINT_LEN);
        h
    }
}

impl From<Instance> for InstanceRecord {
    fn from(i: Instance) -> Self {
        Self {
            dim: i.dim(),
            rho: MatrixRecord::from(i.rho.mat()),
            sigma: MatrixRecord::from(i.sigma.mat()),
            subalgebra: i.subalgebra,
        }
    }
}

impl TryFrom<InstanceRecord> for Instance {
    type Error = Error;

    fn try_from(r: InstanceRecord) -> Result<Self> {
        let load = |m: &MatrixRecord, name: &str| -> Result<DensityOperator> {
            if m.rows != r.dim || m.cols != r.dim {
                return Err(Error::Parse(format!(
                    "{name} is {}x{}, declared dimension {}",
                    m.rows, m.cols, r.dim
                )));
            }
            DensityOperator::from_matrix(CMat::try_from(m)?)
        };
        Self::new(load(&r.rho, "rho")?, load(&r.sigma, "sigma")?, r.subalgebra)
    }
}
