use std::collections::BTreeMap;
use std::path::Path;

use qwgrow::config::{Emit, ExperimentSpec};
use qwgrow::experiment::{
    read_csv, run_experiment, summary_header, trial_seed, trials_header, Stat, SUMMARY_METRICS,
};
use qwgrow::trace::trace_from_json;
use qwgrow_core::walk::Propagator;

fn spec(dir: &Path) -> ExperimentSpec {
    let mut s = ExperimentSpec::new(1, vec![0.01, 0.5], 30);
    s.trials = 4;
    s.base_seed = 17;
    s.out_dir = dir.to_path_buf();
    s.emit = Emit::ALL.into_iter().collect();
    s.propagator = Propagator::Chebyshev;
    s
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn expected_files() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(dir.path())).unwrap();
    let names: Vec<String> = files(dir.path()).into_keys().collect();
    for n in [
        "trials.csv",
        "summary.csv",
        "spec.json",
        "hist_tau=0.01.csv",
        "hist_tau=0.5.csv",
        "spectrum_tau=0.5.csv",
        "trajectory_tau=0.01_trial=3.csv",
        "trace_tau=0.5_trial=0.json",
    ] {
        assert!(names.iter().any(|x| x == n), "missing {n} in {names:?}");
    }
    assert_eq!(names.len(), 3 + 2 * 2 + 2 * 4 * 2);
    let spec_doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("spec.json")).unwrap()).unwrap();
    assert_eq!(spec_doc["version"], qwgrow::VERSION);
    assert_eq!(spec_doc["tau_values"], serde_json::json!([0.01, 0.5]));
}

#[test]
fn byte_identical_across_runs_and_workers() {
    let (a, b, c) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_experiment(&spec(a.path())).unwrap();
    run_experiment(&spec(b.path())).unwrap();
    let mut parallel = spec(c.path());
    parallel.workers = 3;
    run_experiment(&parallel).unwrap();
    let (fa, fb, mut fc) = (files(a.path()), files(b.path()), files(c.path()));
    assert_eq!(fa, fb);
    let mut fa = fa;
    fa.remove("spec.json");
    fc.remove("spec.json");
    assert_eq!(fa, fc);
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn opt(s: &str) -> Option<f64> {
    if s.is_empty() {
        None
    } else {
        Some(s.parse().unwrap())
    }
}

#[test]
fn summary_reproducible_from_trial_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = spec(dir.path());
    s.trials = 7;
    run_experiment(&s).unwrap();
    let (th, trows) = read_csv(&dir.path().join("trials.csv")).unwrap();
    let (sh, srows) = read_csv(&dir.path().join("summary.csv")).unwrap();
    assert_eq!(th.join(","), trials_header());
    assert_eq!(sh.join(","), summary_header());
    assert_eq!(trows.len(), 14);
    for srow in &srows {
        let tau: f64 = srow[0].parse().unwrap();
        let rows: Vec<_> = trows.iter().filter(|r| r[0].parse::<f64>().unwrap() == tau).collect();
        assert_eq!(srow[1].parse::<usize>().unwrap(), rows.len());
        for m in SUMMARY_METRICS {
            let vals: Vec<f64> = rows.iter().filter_map(|r| opt(&r[column(&th, m)])).collect();
            let st = Stat::of(&vals);
            assert_eq!(srow[column(&sh, &format!("{m}_n"))].parse::<usize>().unwrap(), st.n);
            if st.n > 0 {
                let mean = opt(&srow[column(&sh, &format!("{m}_mean"))]).unwrap();
                let std = opt(&srow[column(&sh, &format!("{m}_std"))]).unwrap();
                assert!((mean - st.mean).abs() <= 1e-12 * st.mean.abs().max(1.0), "{m}");
                assert!((std - st.std).abs() <= 1e-12 * st.std.abs().max(1.0), "{m}");
            }
        }
    }
    for (i, r) in trows.iter().enumerate() {
        let (tau_index, trial) = (i / 7, i % 7);
        assert_eq!(r[1].parse::<usize>().unwrap(), trial);
        assert_eq!(r[2].parse::<u64>().unwrap(), trial_seed(17, tau_index, trial));
        assert_eq!(r[column(&th, "nodes")], "31");
        assert_eq!(r[column(&th, "edges")], "30");
    }
}

#[test]
fn every_csv_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(dir.path())).unwrap();
    for (name, _) in files(dir.path()) {
        if !name.ends_with(".csv") {
            continue;
        }
        let (header, rows) = read_csv(&dir.path().join(&name)).unwrap();
        assert!(!rows.is_empty(), "{name}");
        for row in rows {
            for (h, v) in header.iter().zip(&row) {
                if !v.is_empty() {
                    assert!(v.parse::<f64>().is_ok(), "{name}: {h}={v:?}");
                }
            }
        }
        if name.starts_with("hist_") {
            let (_, rows) = read_csv(&dir.path().join(&name)).unwrap();
            let total: f64 = rows.iter().map(|r| r[1].parse::<f64>().unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        if name.starts_with("trajectory_") {
            assert_eq!(header, ["step", "lambda_1", "lambda_2", "lambda_3"]);
            assert_eq!(read_csv(&dir.path().join(&name)).unwrap().1.len(), 30);
        }
    }
}

#[test]
fn traces_replay_to_trial_graphs() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(dir.path())).unwrap();
    let text = std::fs::read_to_string(dir.path().join("trace_tau=0.5_trial=2.json")).unwrap();
    let trace = trace_from_json(&text).unwrap();
    assert_eq!(trace.config.seed, trial_seed(17, 1, 2));
    assert_eq!(trace.config.propagator, Propagator::Chebyshev);
    assert!(trace.final_graph.is_tree());
}

#[test]
fn leaf_fraction_falls_with_tau() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = ExperimentSpec::new(1, vec![0.001, 10.0], 60);
    s.trials = 15;
    s.out_dir = dir.path().to_path_buf();
    s.propagator = Propagator::Chebyshev;
    let summary = run_experiment(&s).unwrap();
    let lf = |i: usize| summary.per_tau[i].stat("leaf_fraction").unwrap().mean;
    assert!(lf(0) > lf(1), "{} vs {}", lf(0), lf(1));
}

#[test]
fn invalid_spec_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let mut s = spec(&out);
    s.tau_values = vec![0.1, -1.0];
    assert!(run_experiment(&s).is_err());
    assert!(!out.exists());
}
