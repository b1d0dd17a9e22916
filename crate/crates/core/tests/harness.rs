use qrecov::bounds::TheoremId;
use qrecov::harness::{
    load_instance, replay, replay_case, replay_case_for, run_campaign, run_campaign_with_workers, CampaignConfig,
    CampaignReport, DimSpec, OutputFormat, ReplayCase,
};
use qrecov::Error;

fn small() -> CampaignConfig {
    CampaignConfig {
        trials: 6,
        seed: 2024,
        theorem_ids: vec![TheoremId::ReFwd, TheoremId::ReRev, TheoremId::PrqFwd, TheoremId::SandqU],
        t_grid: vec![0.0, 0.5],
        s_grid: vec![0.3],
        alpha_grid: vec![2.0],
        ..Default::default()
    }
}

#[test]
fn zero_trials_is_a_config_error() {
    let cfg = CampaignConfig { trials: 0, ..small() };
    assert!(matches!(run_campaign(&cfg), Err(Error::Config(_))));
    let cfg = CampaignConfig { dims: vec![DimSpec::Plain { d: 9 }], ..small() };
    assert!(matches!(run_campaign(&cfg), Err(Error::Config(_))));
}

#[test]
fn campaigns_are_reproducible() {
    let cfg = small();
    let a = run_campaign_with_workers(&cfg, 1).unwrap();
    let b = run_campaign_with_workers(&cfg, 1).unwrap();
    let c = run_campaign_with_workers(&cfg, 3).unwrap();
    assert_eq!(a.records_json().unwrap(), b.records_json().unwrap());
    assert_eq!(a.records_json().unwrap(), c.records_json().unwrap());

    let other = run_campaign(&CampaignConfig { seed: 2025, ..cfg }).unwrap();
    assert_ne!(a.records_json().unwrap(), other.records_json().unwrap());
}

#[test]
fn record_count_and_summary() {
    let cfg = small();
    let r = run_campaign(&cfg).unwrap();
    assert_eq!(r.records.len(), cfg.trials * cfg.records_per_trial().unwrap());
    assert_eq!(r.summary.total_records, r.records.len());
    assert_eq!(r.summary.passed + r.summary.failed, r.records.len());
    assert!(r.summary.all_passed, "{:?}", r.summary);
    assert!(r.failures.is_empty() && r.errors.is_empty());
    assert_eq!(r.summary.bridges.violations, 0);
    assert!(r.summary.bridges.checks > 0);
    let per: usize = r.summary.per_theorem.iter().map(|t| t.records).sum();
    assert_eq!(per, r.records.len());
    // Universal theorems are evaluated at t = 0 only.
    assert!(r
        .records
        .iter()
        .filter(|x| x.certificate.theorem_id == TheoremId::SandqU)
        .all(|x| x.certificate.params.t == 0.0));
}

#[test]
fn json_round_trip_is_stable() {
    let r = run_campaign(&small()).unwrap();
    let s = r.to_json().unwrap();
    let back = CampaignReport::from_json(&s).unwrap();
    assert_eq!(back.to_json().unwrap(), s);
    assert!(matches!(CampaignReport::from_json("{\"config\": 3}"), Err(Error::Parse(_))));
}

#[test]
fn csv_has_one_row_per_record() {
    let r = run_campaign(&small()).unwrap();
    let csv = r.to_csv().unwrap();
    assert_eq!(csv.lines().count(), r.records.len() + 1);
    assert!(csv.lines().next().unwrap().contains("theorem_id"));
}

#[test]
fn write_produces_files() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_campaign(&small()).unwrap();
    let json = dir.path().join("nested/report.json");
    let csv = dir.path().join("report.csv");
    assert!(r.write(&json, OutputFormat::Json).unwrap().is_empty());
    assert!(r.write(&csv, OutputFormat::Csv).unwrap().is_empty());
    let back = CampaignReport::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(back.records.len(), r.records.len());
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), r.to_csv().unwrap());
}

#[test]
fn replay_reproduces_recorded_margins() {
    let cfg = small();
    let r = run_campaign(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for (k, rec) in r.records.iter().enumerate().step_by(7) {
        let case = replay_case_for(&cfg, rec).unwrap();
        let path = dir.path().join(format!("case{k}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&case).unwrap()).unwrap();
        let c = replay(&path, None).unwrap();
        assert!((c.margin - rec.certificate.margin).abs() <= 1e-12, "{} vs {}", c.margin, rec.certificate.margin);
        assert_eq!(c.passed, rec.certificate.passed);
        assert_eq!(c.instance_fingerprint, rec.certificate.instance_fingerprint);
    }
}

#[test]
fn replay_t_override() {
    let cfg = small();
    let r = run_campaign(&cfg).unwrap();
    let rec = r
        .records
        .iter()
        .find(|x| x.certificate.theorem_id == TheoremId::ReFwd)
        .unwrap();
    let case: ReplayCase = replay_case_for(&cfg, rec).unwrap();
    let c = replay_case(&case, Some(1.25)).unwrap();
    assert_eq!(c.params.t, 1.25);
    assert!(c.passed);
}

#[test]
fn corrupted_files_are_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert!(matches!(replay(&bad, None), Err(Error::Parse(_))));
    assert!(matches!(load_instance(&bad), Err(Error::Parse(_))));

    // Declared dimension disagrees with the matrix shape.
    let cfg = small();
    let r = run_campaign(&cfg).unwrap();
    let case = replay_case_for(&cfg, &r.records[0]).unwrap();
    let mut v = serde_json::to_value(&case.instance).unwrap();
    v["dim"] = serde_json::json!(3);
    let p = dir.path().join("dim.json");
    std::fs::write(&p, v.to_string()).unwrap();
    assert!(matches!(load_instance(&p), Err(Error::Parse(_))));

    assert!(matches!(load_instance(&dir.path().join("missing.json")), Err(Error::Io(_))));
}

#[test]
fn plain_dimension_campaign() {
    let cfg = CampaignConfig {
        dims: vec![DimSpec::Plain { d: 3 }, DimSpec::Plain { d: 4 }],
        trials: 4,
        ..small()
    };
    let r = run_campaign(&cfg).unwrap();
    assert!(r.summary.all_passed, "{:?}", r.summary);
    assert!(r.records.iter().any(|x| x.dims == "3"));
    assert!(r.records.iter().any(|x| x.dims == "4"));
}
