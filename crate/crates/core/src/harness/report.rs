//! Campaign records, summaries and their JSON / CSV persistence.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{CampaignConfig, OutputFormat};
use super::generate::InstanceKind;
use crate::bounds::{BoundCertificate, BoundParams, BridgeCheck, Instance, TheoremId};
use crate::error::{Error, Result};

/// One certificate with the trial that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub trial: u64,
    pub dims: String,
    pub kind: InstanceKind,
    pub certificate: BoundCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BridgeRecord {
    pub trial: u64,
    pub instance_fingerprint: String,
    pub check: BridgeCheck,
}

/// A certificate that could not be evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialError {
    pub trial: u64,
    pub params: Option<BoundParams>,
    pub message: String,
}

/// Everything needed to recompute one certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayCase {
    pub instance: Instance,
    pub params: BoundParams,
    /// Tolerance before any optimizer-gap widening.
    pub base_tolerance: f64,
    #[serde(default)]
    pub recorded_margin: Option<f64>,
}

/// Failed certificates and evaluation errors, with their instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub trial: u64,
    pub case: ReplayCase,
    /// `None` when evaluation itself errored.
    pub certificate: Option<BoundCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremSummary {
    pub theorem_id: TheoremId,
    pub records: usize,
    pub passed: usize,
    pub saturated: usize,
    pub min_margin: Option<f64>,
    pub worst_fingerprint: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BridgeSummary {
    pub checks: usize,
    pub violations: usize,
    pub min_slack: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub total_records: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub per_theorem: Vec<TheoremSummary>,
    pub bridges: BridgeSummary,
    pub all_passed: bool,
}

impl CampaignSummary {
    pub fn build(
        theorem_ids: &[TheoremId],
        records: &[CertificateRecord],
        bridges: &[BridgeRecord],
        errors: usize,
        bridge_tol: f64,
    ) -> Self {
        let per_theorem: Vec<TheoremSummary> = theorem_ids
            .iter()
            .map(|&id| {
                let mine: Vec<&BoundCertificate> =
                    records.iter().map(|r| &r.certificate).filter(|c| c.theorem_id == id).collect();
                let worst = mine.iter().min_by(|a, b| a.margin.total_cmp(&b.margin));
                TheoremSummary {
                    theorem_id: id,
                    records: mine.len(),
                    passed: mine.iter().filter(|c| c.passed).count(),
                    saturated: mine.iter().filter(|c| c.aux.get("saturated") == Some(&1.0)).count(),
                    min_margin: worst.map(|c| c.margin),
                    worst_fingerprint: worst.map(|c| c.instance_fingerprint.clone()),
                }
            })
            .collect();
        let passed = records.iter().filter(|r| r.certificate.passed).count();
        let violations = bridges.iter().filter(|b| !b.check.holds(bridge_tol)).count();
        let bridges = BridgeSummary {
            checks: bridges.len(),
            violations,
            min_slack: bridges.iter().map(|b| b.check.slack).min_by(f64::total_cmp),
        };
        let failed = records.len() - passed;
        Self {
            total_records: records.len(),
            passed,
            failed,
            errors,
            per_theorem,
            all_passed: failed == 0 && errors == 0 && violations == 0,
            bridges,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub summary: CampaignSummary,
    pub records: Vec<CertificateRecord>,
    pub bridges: Vec<BridgeRecord>,
    pub failures: Vec<FailureRecord>,
    pub errors: Vec<TrialError>,
    pub wall_time_seconds: f64,
}

/// Flat CSV row of one certificate.
#[derive(Serialize)]
struct CsvRow<'a> {
    trial: u64,
    dims: &'a str,
    kind: InstanceKind,
    theorem_id: TheoremId,
    t: f64,
    s: Option<f64>,
    alpha: Option<f64>,
    epsilon: Option<f64>,
    split_s: Option<f64>,
    split_t: Option<f64>,
    lhs: f64,
    rhs: f64,
    margin: f64,
    recovery_error: f64,
    tolerance: f64,
    passed: bool,
    instance_fingerprint: &'a str,
}

impl CampaignReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// JSON of the certificate records alone; identical across worker counts.
    pub fn records_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.records)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            let c = &r.certificate;
            w.serialize(CsvRow {
                trial: r.trial,
                dims: &r.dims,
                kind: r.kind,
                theorem_id: c.theorem_id,
                t: c.params.t,
                s: c.params.s,
                alpha: c.params.alpha,
                epsilon: c.params.epsilon,
                split_s: c.params.split_s,
                split_t: c.params.split_t,
                lhs: c.lhs,
                rhs: c.rhs,
                margin: c.margin,
                recovery_error: c.recovery_error,
                tolerance: c.tolerance,
                passed: c.passed,
                instance_fingerprint: &c.instance_fingerprint,
            })
            .map_err(|e| Error::Config(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Config(format!("csv: {e}")))
    }

    /// Writes the report to `path` and one replay file per failure into
    /// `<path>.failures/`. Returns the replay file paths.
    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        let body = match format {
            OutputFormat::Json => self.to_json()?,
            OutputFormat::Csv => self.to_csv()?,
        };
        fs::write(path, body)?;
        let mut written = Vec::new();
        if self.failures.is_empty() {
            return Ok(written);
        }
        let mut dir = path.as_os_str().to_owned();
        dir.push(".failures");
        let dir = PathBuf::from(dir);
        fs::create_dir_all(&dir)?;
        for (k, f) in self.failures.iter().enumerate() {
            let name = format!(
                "{:04}_{}_{}.json",
                k,
                f.case.params.theorem_id,
                f.case.instance.fingerprint()
            );
            let p = dir.join(name);
            fs::write(&p, serde_json::to_string_pretty(&f.case)?)?;
            written.push(p);
        }
        Ok(written)
    }
}
