use std::path::PathBuf;

use fuzzgate_core::bundled_cascade;
use fuzzgate_core::energy::EnergyMode;
use fuzzgate_core::report::{render_table, write_reports, Summary};
use fuzzgate_core::telemetry::{
    compare, load_telemetry, run_fuzzy, run_traditional, ColumnMapping, FailsafePolicy, LoadPolicy,
};

fn run(dir: &std::path::Path) -> (Summary, String) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata/fixture_50.csv");
    let t = load_telemetry(&path, &ColumnMapping::default(), LoadPolicy::Strict).unwrap();
    let c = bundled_cascade();
    let mode = EnergyMode::reference();
    let trad = run_traditional(&t, &mode);
    let fuzzy = run_fuzzy(&t, &c, &mode, FailsafePolicy::Send).unwrap();
    let cmp = compare(&trad, &fuzzy).unwrap();
    let summary = Summary::new(&trad, &fuzzy, &cmp, &mode, &c, FailsafePolicy::Send);
    write_reports(dir, &summary, &fuzzy, &cmp, &c).unwrap();
    (summary, render_table(&cmp))
}

#[test]
fn summary_is_self_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let (s, _) = run(dir.path());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    let per = json["per_packet_joules"].as_f64().unwrap();
    let tn = json["traditional"]["transmissions"].as_u64().unwrap() as f64;
    let fnn = json["fuzzy"]["transmissions"].as_u64().unwrap() as f64;
    assert_eq!(tn, 50.0);
    assert!((json["traditional"]["joules"].as_f64().unwrap() - tn * per).abs() < 1e-9);
    assert!((json["fuzzy"]["joules"].as_f64().unwrap() - fnn * per).abs() < 1e-9);
    let reduction = (1.0 - fnn / tn) * 100.0;
    assert!((json["reduction_percent"].as_f64().unwrap() - reduction).abs() < 1e-9);
    assert_eq!(json["energy_mode"]["mode"], "calibrated");
    assert_eq!(s.records_loaded, 50);
}

#[test]
fn decisions_and_cumulative_files() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path());
    let mut rdr = csv::Reader::from_path(dir.path().join("decisions.csv")).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "apparent_temperature"));
    let label = headers.iter().position(|h| h == "label").unwrap();
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| matches!(&r[label], "send" | "not_send")));

    let mut rdr = csv::Reader::from_path(dir.path().join("cumulative.csv")).unwrap();
    let rows: Vec<(f64, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[1].parse().unwrap(), r[2].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1));
}

#[test]
fn two_runs_write_identical_summaries() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (_, ta) = run(a.path());
    let (_, tb) = run(b.path());
    for f in ["summary.json", "decisions.csv", "cumulative.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
    assert_eq!(ta, tb);
    assert!(ta.contains("Traditional") && ta.contains("Energy saved"));
}
