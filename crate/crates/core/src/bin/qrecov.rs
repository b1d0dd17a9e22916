//! Command-line front end: one-shot computations, single-instance
//! certification, campaigns and replay.
//!
//! Exit codes: 0 when everything passes, 1 when any certificate or bridge
//! fails, 2 on usage, configuration, parse or I/O errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qrecov::bounds::{equivalence_suite, BoundParams, CertificateContext, Instance, TheoremId, DEFAULT_TOLERANCE};
use qrecov::divergence::{
    holevo_fidelity, max_quasi, max_relative_entropy, petz_renyi, petz_renyi_quasi, q_x2, q_xinv, sandwiched,
    uhlmann_fidelity, umegaki,
};
use qrecov::harness::{
    instance_of_kind, load_instance, parse_theorem_list, replay, run_campaign_with_workers, trial_rng, CampaignConfig,
    DimSpec, EpsilonPolicy, InstanceKind, OutputFormat, OUT_DIR_ENV,
};
use qrecov::optdiv::holder_extremizer;
use qrecov::{Error, Result};

#[derive(Parser)]
#[command(name = "qrecov", version, about = "Quantum f-divergences, Petz recovery and recoverability certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one divergence, recovery residual or certificate.
    Compute(ComputeArgs),
    /// Evaluate a certificate sweep on a single instance.
    Certify(CertifyArgs),
    /// Run a seeded campaign over random instances.
    Campaign(CampaignArgs),
    /// Recompute a certificate from a replay file.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// State file (JSON instance record).
    #[arg(long, conflicts_with_all = ["seed", "dims"])]
    states: Option<PathBuf>,
    /// Seed for a generated instance.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dimension of a generated instance: `d` or `dAxdB`.
    #[arg(long, default_value = "2x2")]
    dims: String,
    /// Kind of generated instance: generic, near-degenerate or exact-recovery.
    #[arg(long, default_value = "generic")]
    kind: String,
}

impl InstanceArgs {
    fn load(&self) -> Result<Instance> {
        match &self.states {
            Some(p) => load_instance(p),
            None => {
                let dims: DimSpec = self.dims.parse()?;
                let kind: InstanceKind = self.kind.parse()?;
                instance_of_kind(dims, kind, &mut trial_rng(self.seed, 0))
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DivergenceName {
    Umegaki,
    PetzRenyi,
    PetzQuasi,
    Sandwiched,
    SandwichedQuasi,
    MaxRelative,
    HolevoFidelity,
    UhlmannFidelity,
    QX2,
    QXinv,
    MaxQuasi,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecoveryName {
    Forward,
    Reverse,
    ForwardUniversal,
    ReverseUniversal,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, group = "what")]
    divergence: Option<DivergenceName>,
    /// Theorem id of a certificate.
    #[arg(long, group = "what")]
    certificate: Option<String>,
    /// Recovery trace-distance residual.
    #[arg(long, group = "what")]
    recovery: Option<RecoveryName>,
    /// Residuals of the sufficiency equivalences.
    #[arg(long, group = "what")]
    equivalence: bool,
    /// Evaluate the divergence on the restricted pair `(ρ_N, σ_N)`.
    #[arg(long)]
    restricted: bool,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args)]
struct GridArgs {
    /// Comma-separated theorem ids, or `all`.
    #[arg(long, default_value = "all")]
    theorems: String,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0.5,-0.5,1,-1")]
    t_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0.3,-0.3,0.5,-0.5")]
    s_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.6,0.75,2,3")]
    alpha_grid: Vec<f64>,
    /// `midpoint` or `grid`.
    #[arg(long, default_value = "midpoint")]
    epsilon: String,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

impl GridArgs {
    fn config(&self) -> Result<CampaignConfig> {
        Ok(CampaignConfig {
            theorem_ids: parse_theorem_list(&self.theorems)?,
            t_grid: self.t_grid.clone(),
            s_grid: self.s_grid.clone(),
            alpha_grid: self.alpha_grid.clone(),
            epsilon_policy: self.epsilon.parse::<EpsilonPolicy>()?,
            tolerance: self.tolerance,
            format: self.format.into(),
            ..Default::default()
        })
    }
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct CampaignArgs {
    /// Comma-separated dimensions: `d` or `dAxdB`.
    #[arg(long, value_delimiter = ',', default_value = "2x2,2x3")]
    dims: Vec<String>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    grid: GridArgs,
    /// Report path; defaults to `$QRECOV_OUT_DIR/campaign-<seed>.<ext>` when the variable is set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct ReplayArgs {
    /// Replay file written next to a campaign report.
    file: PathBuf,
    /// Recompute at a different rotation parameter.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
}

enum Outcome {
    Pass,
    Fail,
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn need(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("--{name} is required")))
}

fn compute(a: &ComputeArgs) -> Result<Outcome> {
    let instance = a.instance.load()?;
    let ctx = CertificateContext::new(instance)?;
    if let Some(name) = a.divergence {
        let setup = ctx.setup();
        let (r, s) = if a.restricted {
            (setup.rho_n(), setup.sigma_n())
        } else {
            (setup.rho(), setup.sigma())
        };
        let v = match name {
            DivergenceName::Umegaki => umegaki(r, s)?,
            DivergenceName::PetzRenyi => petz_renyi(r, s, need(a.alpha, "alpha")?)?,
            DivergenceName::PetzQuasi => petz_renyi_quasi(r, s, need(a.s, "s")?)?,
            DivergenceName::Sandwiched => sandwiched(r, s, need(a.alpha, "alpha")?)?,
            DivergenceName::SandwichedQuasi => holder_extremizer(r, s, need(a.alpha, "alpha")?)?.value,
            DivergenceName::MaxRelative => max_relative_entropy(r, s)?,
            DivergenceName::HolevoFidelity => holevo_fidelity(r, s)?,
            DivergenceName::UhlmannFidelity => uhlmann_fidelity(r, s)?,
            DivergenceName::QX2 => q_x2(r, s)?,
            DivergenceName::QXinv => q_xinv(r, s)?,
            DivergenceName::MaxQuasi => max_quasi(r, s)?,
        };
        println!("{v:.17e}");
        return Ok(Outcome::Pass);
    }
    if let Some(id) = &a.certificate {
        let id: TheoremId = id.parse()?;
        let mut p = BoundParams::new(id, a.t);
        (p.s, p.alpha, p.epsilon) = (a.s, a.alpha, a.epsilon);
        let cert = ctx.certificate_with_tolerance(&p, a.tolerance)?;
        print_json(&cert)?;
        return Ok(if cert.passed { Outcome::Pass } else { Outcome::Fail });
    }
    if let Some(rec) = a.recovery {
        let v = match rec {
            RecoveryName::Forward => ctx.recovery_error(false, a.t)?,
            RecoveryName::Reverse => ctx.recovery_error(true, a.t)?,
            RecoveryName::ForwardUniversal => ctx.universal_error(false)?,
            RecoveryName::ReverseUniversal => ctx.universal_error(true)?,
        };
        println!("{v:.17e}");
        return Ok(Outcome::Pass);
    }
    if a.equivalence {
        let i = ctx.instance();
        print_json(&equivalence_suite(&i.rho, &i.sigma, &i.subalgebra, a.tolerance)?)?;
        return Ok(Outcome::Pass);
    }
    Err(Error::Config(
        "one of --divergence, --certificate, --recovery or --equivalence is required".into(),
    ))
}

fn certify(a: &CertifyArgs) -> Result<Outcome> {
    let cfg = a.grid.config()?;
    cfg.validate()?;
    let ctx = CertificateContext::new(a.instance.load()?)?;
    let mut certs = Vec::new();
    for id in &cfg.theorem_ids {
        for p in cfg.params_for(*id)? {
            certs.push(ctx.certificate_with_tolerance(&p, cfg.tolerance_for(*id))?);
        }
    }
    let all = certs.iter().all(|c| c.passed);
    match cfg.format {
        OutputFormat::Json => print_json(&certs)?,
        OutputFormat::Csv => {
            println!("theorem_id,t,s,alpha,epsilon,lhs,rhs,margin,passed");
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            for c in &certs {
                let p = &c.params;
                println!(
                    "{},{},{},{},{},{:e},{:e},{:e},{}",
                    c.theorem_id,
                    p.t,
                    opt(p.s),
                    opt(p.alpha),
                    opt(p.epsilon),
                    c.lhs,
                    c.rhs,
                    c.margin,
                    c.passed
                );
            }
        }
    }
    Ok(if all { Outcome::Pass } else { Outcome::Fail })
}

fn default_out(seed: u64, format: OutputFormat) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_ENV)?;
    let ext = match format {
        OutputFormat::Json => "json",
        OutputFormat::Csv => "csv",
    };
    Some(Path::new(&dir).join(format!("campaign-{seed}.{ext}")))
}

fn campaign(a: &CampaignArgs) -> Result<Outcome> {
    let mut cfg = a.grid.config()?;
    cfg.dims = a.dims.iter().map(|d| d.parse()).collect::<Result<_>>()?;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.output_path = a.out.clone().or_else(|| default_out(a.seed, cfg.format));
    let report = run_campaign_with_workers(&cfg, a.workers)?;
    let s = &report.summary;
    for t in &s.per_theorem {
        let min = t.min_margin.map(|m| format!("{m:.3e}")).unwrap_or_else(|| "-".into());
        eprintln!("{:<12} {:>6}/{:<6} min margin {min}", t.theorem_id, t.passed, t.records);
    }
    eprintln!(
        "bridges {}/{} hold; {} errors; {:.1}s",
        s.bridges.checks - s.bridges.violations,
        s.bridges.checks,
        s.errors,
        report.wall_time_seconds
    );
    match &cfg.output_path {
        Some(path) => {
            let replays = report.write(path, cfg.format)?;
            eprintln!("report written to {}", path.display());
            for r in replays {
                eprintln!("replay file {}", r.display());
            }
        }
        None => print_json(&report.summary)?,
    }
    Ok(if s.all_passed { Outcome::Pass } else { Outcome::Fail })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Certify(a) => certify(a),
        Command::Campaign(a) => campaign(a),
        Command::Replay(a) => {
            let cert = replay(&a.file, a.t)?;
            print_json(&cert)?;
            Ok(if cert.passed { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
