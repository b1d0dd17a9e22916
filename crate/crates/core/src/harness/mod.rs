//! Campaign runner, state files and replay.
//!
//! A campaign draws one instance per trial from a ChaCha8 stream keyed by
//! `(seed, trial)`, evaluates every configured certificate on it and checks the
//! trace-norm bridges. Trials run in parallel; results are merged in trial
//! order, so reports do not depend on the worker count.

mod config;
mod generate;
mod report;

use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

pub use config::{CampaignConfig, DimSpec, EpsilonPolicy, OutputFormat, DEFAULT_MAX_DIM, EPSILON_GRID_FRACTIONS};
pub use generate::{generate_instance, instance_of_kind, trial_rng, InstanceKind, NEAR_DEGENERATE_FACTOR};
pub use report::{
    BridgeRecord, BridgeSummary, CampaignReport, CampaignSummary, CertificateRecord, FailureRecord, ReplayCase,
    TheoremSummary, TrialError,
};

use crate::bounds::{BoundCertificate, BoundParams, CertificateContext, Instance, TheoremId};
use crate::error::{Error, Result};
use crate::optdiv::holder_extremizer;

/// Tolerance on `2‖vector‖₂ ≥ trace distance`.
pub const BRIDGE_TOLERANCE: f64 = 1e-9;
/// Sandwiched order whose Hölder extremizer supplies `ω_N` for the `u` bridge.
pub const BRIDGE_HOLDER_ORDER: f64 = 2.0;
/// Environment variable naming the default output directory of the CLI.
pub const OUT_DIR_ENV: &str = "QRECOV_OUT_DIR";

#[derive(Default)]
struct TrialOutcome {
    records: Vec<CertificateRecord>,
    bridges: Vec<BridgeRecord>,
    failures: Vec<FailureRecord>,
    errors: Vec<TrialError>,
}

/// Instance of trial `trial` under `cfg`.
pub fn trial_instance(cfg: &CampaignConfig, trial: u64) -> Result<(InstanceKind, Instance)> {
    let dims = cfg.dims[(trial % cfg.dims.len() as u64) as usize];
    generate_instance(dims, &mut trial_rng(cfg.seed, trial))
}

fn run_trial(cfg: &CampaignConfig, plan: &[BoundParams], t_grid: &[f64], trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let err = |params: Option<BoundParams>, e: Error| TrialError {
        trial,
        params,
        message: e.to_string(),
    };
    let (kind, instance) = match trial_instance(cfg, trial) {
        Ok(v) => v,
        Err(e) => {
            out.errors.push(err(None, e));
            return out;
        }
    };
    let ctx = match CertificateContext::new(instance.clone()) {
        Ok(c) => c,
        Err(e) => {
            out.errors.push(err(None, e));
            return out;
        }
    };
    let dims = cfg.dims[(trial % cfg.dims.len() as u64) as usize].to_string();
    let case = |params: BoundParams, certificate: Option<BoundCertificate>| FailureRecord {
        trial,
        case: ReplayCase {
            instance: instance.clone(),
            params,
            base_tolerance: cfg.tolerance_for(params.theorem_id),
            recorded_margin: certificate.as_ref().map(|c| c.margin),
        },
        certificate,
    };
    for p in plan {
        match ctx.certificate_with_tolerance(p, cfg.tolerance_for(p.theorem_id)) {
            Ok(c) => {
                if !c.passed {
                    out.failures.push(case(*p, Some(c.clone())));
                }
                out.records.push(CertificateRecord {
                    trial,
                    dims: dims.clone(),
                    kind,
                    certificate: c,
                });
            }
            Err(e) => {
                out.errors.push(err(Some(*p), e));
                out.failures.push(case(*p, None));
            }
        }
    }
    let setup = ctx.setup();
    let bridges = holder_extremizer(setup.rho_n(), setup.sigma_n(), BRIDGE_HOLDER_ORDER).and_then(|opt| {
        t_grid
            .iter()
            .map(|&t| setup.bridges(&opt.optimizer_state, t))
            .collect::<Result<Vec<_>>>()
    });
    match bridges {
        Ok(all) => out.bridges.extend(all.into_iter().flatten().map(|check| BridgeRecord {
            trial,
            instance_fingerprint: ctx.fingerprint().to_string(),
            check,
        })),
        Err(e) => out.errors.push(err(None, e)),
    }
    out
}

/// Runs a campaign on the global rayon pool.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    run_campaign_with_workers(cfg, 0)
}

/// Runs a campaign on `workers` threads (`0` = rayon default).
pub fn run_campaign_with_workers(cfg: &CampaignConfig, workers: usize) -> Result<CampaignReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut plan = Vec::new();
    for id in &cfg.theorem_ids {
        plan.extend(cfg.params_for(*id)?);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outcomes: Vec<TrialOutcome> = pool.install(|| {
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(|trial| run_trial(cfg, &plan, &cfg.t_grid, trial))
            .collect()
    });
    let mut report = CampaignReport {
        config: cfg.clone(),
        summary: CampaignSummary::build(&[], &[], &[], 0, BRIDGE_TOLERANCE),
        records: Vec::new(),
        bridges: Vec::new(),
        failures: Vec::new(),
        errors: Vec::new(),
        wall_time_seconds: 0.0,
    };
    for o in outcomes {
        report.records.extend(o.records);
        report.bridges.extend(o.bridges);
        report.failures.extend(o.failures);
        report.errors.extend(o.errors);
    }
    report.summary = CampaignSummary::build(
        &cfg.theorem_ids,
        &report.records,
        &report.bridges,
        report.errors.len(),
        BRIDGE_TOLERANCE,
    );
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Loads a state file: an [`Instance`] in its JSON wire form.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_replay_case(path: &Path) -> Result<ReplayCase> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Recomputes a certificate from a replay case, optionally at another `t`.
pub fn replay_case(case: &ReplayCase, t_override: Option<f64>) -> Result<BoundCertificate> {
    let mut params = case.params;
    params.split_s = None;
    params.split_t = None;
    if let Some(t) = t_override {
        params.t = t;
    }
    CertificateContext::new(case.instance.clone())?.certificate_with_tolerance(&params, case.base_tolerance)
}

/// Replays a file written by [`CampaignReport::write`].
pub fn replay(path: &Path, t_override: Option<f64>) -> Result<BoundCertificate> {
    replay_case(&load_replay_case(path)?, t_override)
}

/// Replay case for a recorded certificate of a campaign.
pub fn replay_case_for(cfg: &CampaignConfig, record: &CertificateRecord) -> Result<ReplayCase> {
    let (_, instance) = trial_instance(cfg, record.trial)?;
    let c = &record.certificate;
    Ok(ReplayCase {
        instance,
        params: c.params,
        base_tolerance: cfg.tolerance_for(c.theorem_id),
        recorded_margin: Some(c.margin),
    })
}

/// Theorem ids from a comma-separated list; `all` selects every id.
pub fn parse_theorem_list(s: &str) -> Result<Vec<TheoremId>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(TheoremId::ALL.to_vec());
    }
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}
