//! Tau sweeps: many independent growth runs per tau, their metrics and the
//! aggregate summary.
//!
//! Trial `i` at tau index `j` is seeded with `split_seed(base_seed, [j, i])`,
//! so results do not depend on the worker count or scheduling. Trials run on
//! a rayon pool; all files are written by the calling thread afterwards.
//!
//! Files in `out_dir`:
//!
//! | file | columns |
//! |------|---------|
//! | `trials.csv` | `tau,trial,seed,` metrics columns `,star_count,mean_star_size` |
//! | `summary.csv` | `tau,trials`, then `<m>_n,<m>_mean,<m>_std` per metric |
//! | `hist_tau=<v>.csv` | `k,d_k`, bin-wise mean of the trial histograms |
//! | `spectrum_tau=<v>.csv` | `trial,index,eigenvalue` |
//! | `trajectory_tau=<v>_trial=<i>.csv` | `step,lambda_1..lambda_m` |
//! | `trace_tau=<v>_trial=<i>.json` | see [`crate::trace`] |
//! | `spec.json` | sweep parameters and the library version |
//!
//! `star_count` and `mean_star_size` are empty for multi-walker runs, and
//! `std` is the sample standard deviation (0 for a single value).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use qwgrow_core::rng::split_seed;
use qwgrow_core::star::{detect_stars, spectrum_trajectory};
use qwgrow_core::{grow, GrowthTrace, MetricsReport, RunConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Emit, ExperimentSpec};
use crate::report::{metrics_fields, METRICS_COLUMNS};
use crate::trace::trace_to_json;
use crate::{Error, Result, VERSION};

/// One finished run.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    /// Position of `tau` in the sweep.
    pub tau_index: usize,
    /// Mean collapse time.
    pub tau: f64,
    /// Trial number within this tau.
    pub trial: usize,
    /// Seed of the run.
    pub seed: u64,
    /// Metrics of the final graph.
    pub metrics: MetricsReport,
    /// Star sizes, for single-walker runs.
    pub stars: Option<Vec<usize>>,
    /// Top eigenvalues after every step, when trajectories are emitted.
    pub trajectory: Option<Vec<Vec<f64>>>,
    /// Full trace, when traces are emitted.
    pub trace: Option<GrowthTrace>,
}

impl TrialRecord {
    /// Number of detected stars.
    pub fn star_count(&self) -> Option<usize> {
        self.stars.as_ref().map(Vec::len)
    }

    /// Mean detected star size; `None` without stars.
    pub fn mean_star_size(&self) -> Option<f64> {
        let s = self.stars.as_ref()?;
        if s.is_empty() {
            return None;
        }
        Some(s.iter().sum::<usize>() as f64 / s.len() as f64)
    }
}

/// Count, mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    /// Number of values.
    pub n: usize,
    /// Mean, NaN when `n == 0`.
    pub mean: f64,
    /// Sample standard deviation, 0 when `n < 2`.
    pub std: f64,
}

impl Stat {
    /// Two-pass statistics in input order.
    pub fn of(values: &[f64]) -> Stat {
        let n = values.len();
        if n == 0 {
            return Stat { n, mean: f64::NAN, std: f64::NAN };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1) as f64).sqrt()
        };
        Stat { n, mean, std }
    }

    /// Standard error of the mean.
    pub fn sem(&self) -> f64 {
        self.std / (self.n as f64).sqrt()
    }
}

/// Aggregates for one tau.
#[derive(Debug, Clone, PartialEq)]
pub struct TauSummary {
    /// Mean collapse time.
    pub tau: f64,
    /// Trials aggregated.
    pub trials: usize,
    /// Scalar metrics in [`SUMMARY_METRICS`] order.
    pub stats: Vec<Stat>,
    /// Bin-wise mean degree histogram.
    pub histogram: Vec<(usize, f64)>,
}

impl TauSummary {
    /// Statistics of a metric by name.
    pub fn stat(&self, metric: &str) -> Option<Stat> {
        SUMMARY_METRICS.iter().position(|m| *m == metric).map(|i| self.stats[i])
    }
}

/// Scalar metrics aggregated in `summary.csv`.
pub const SUMMARY_METRICS: [&str; 9] = [
    "nodes",
    "edges",
    "diameter",
    "leaf_fraction",
    "avg_clustering",
    "alpha",
    "alpha_r2",
    "star_count",
    "mean_star_size",
];

/// Per-tau aggregates of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    /// In sweep order.
    pub per_tau: Vec<TauSummary>,
}

/// Seed of one trial.
pub fn trial_seed(base_seed: u64, tau_index: usize, trial: usize) -> u64 {
    split_seed(base_seed, &[tau_index as u64, trial as u64])
}

/// Runs every trial of `spec` without touching the filesystem. Records come
/// back ordered by tau index, then trial.
pub fn run_trials(spec: &ExperimentSpec) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    let jobs: Vec<(usize, f64, usize)> = spec
        .tau_values
        .iter()
        .enumerate()
        .flat_map(|(j, &tau)| (0..spec.trials).map(move |i| (j, tau, i)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| jobs.par_iter().map(|&(j, tau, i)| run_trial(spec, j, tau, i)).collect())
}

fn run_trial(spec: &ExperimentSpec, tau_index: usize, tau: f64, trial: usize) -> Result<TrialRecord> {
    let seed = trial_seed(spec.base_seed, tau_index, trial);
    let config =
        RunConfig::new(spec.walkers, tau, spec.steps, seed).with_propagator(spec.propagator);
    let trace = grow(&config)?;
    let metrics = MetricsReport::compute(&trace.final_graph, spec.emits(Emit::Spectra))?;
    let stars = if spec.walkers == 1 { Some(detect_stars(&trace.final_graph)?) } else { None };
    let trajectory = if spec.emits(Emit::Trajectories) {
        Some(spectrum_trajectory(&trace, spec.top_m)?)
    } else {
        None
    };
    Ok(TrialRecord {
        tau_index,
        tau,
        trial,
        seed,
        metrics,
        stars,
        trajectory,
        trace: spec.emits(Emit::Traces).then_some(trace),
    })
}

/// Scalar metric values of one trial in [`SUMMARY_METRICS`] order.
pub fn scalar_metrics(r: &TrialRecord) -> [Option<f64>; 9] {
    let m = &r.metrics;
    [
        Some(m.nodes as f64),
        Some(m.edges as f64),
        Some(m.diameter as f64),
        Some(m.leaf_fraction),
        Some(m.avg_clustering),
        m.power_law.map(|f| f.alpha),
        m.power_law.map(|f| f.r_squared),
        r.star_count().map(|c| c as f64),
        r.mean_star_size(),
    ]
}

/// Aggregates records produced by [`run_trials`].
pub fn summarize(spec: &ExperimentSpec, records: &[TrialRecord]) -> EnsembleSummary {
    let per_tau = spec
        .tau_values
        .iter()
        .enumerate()
        .map(|(j, &tau)| {
            let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.tau_index == j).collect();
            let stats = (0..SUMMARY_METRICS.len())
                .map(|c| {
                    let vals: Vec<f64> = rows.iter().filter_map(|r| scalar_metrics(r)[c]).collect();
                    Stat::of(&vals)
                })
                .collect();
            let mut bins: BTreeMap<usize, f64> = BTreeMap::new();
            for r in &rows {
                for (k, d) in r.metrics.degree_histogram.fractions() {
                    *bins.entry(k).or_insert(0.0) += d;
                }
            }
            let histogram = bins.into_iter().map(|(k, s)| (k, s / rows.len() as f64)).collect();
            TauSummary { tau, trials: rows.len(), stats, histogram }
        })
        .collect();
    EnsembleSummary { per_tau }
}

/// Runs the sweep and writes its files into `spec.out_dir`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<EnsembleSummary> {
    spec.validate()?;
    let dir = &spec.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let records = run_trials(spec)?;
    let summary = summarize(spec, &records);

    write(dir.join("trials.csv"), &trials_csv(&records))?;
    write(dir.join("summary.csv"), &summary_csv(&summary))?;
    for (j, s) in summary.per_tau.iter().enumerate() {
        let tau = s.tau;
        let rows = records.iter().filter(|r| r.tau_index == j);
        if spec.emits(Emit::Histograms) {
            write(dir.join(format!("hist_tau={tau}.csv")), &crate::report::histogram_csv(&s.histogram))?;
        }
        if spec.emits(Emit::Spectra) {
            let mut out = String::from("trial,index,eigenvalue\n");
            for r in rows.clone() {
                for (i, v) in r.metrics.spectrum.iter().flatten().enumerate() {
                    let _ = writeln!(out, "{},{i},{v}", r.trial);
                }
            }
            write(dir.join(format!("spectrum_tau={tau}.csv")), &out)?;
        }
        for r in rows {
            if let Some(traj) = &r.trajectory {
                write(
                    dir.join(format!("trajectory_tau={tau}_trial={}.csv", r.trial)),
                    &trajectory_csv(traj, spec.top_m),
                )?;
            }
            if let Some(trace) = &r.trace {
                write(dir.join(format!("trace_tau={tau}_trial={}.json", r.trial)), &trace_to_json(trace))?;
            }
        }
    }
    write(dir.join("spec.json"), &spec_json(spec))?;
    Ok(summary)
}

/// Header of `trials.csv`.
pub fn trials_header() -> String {
    let mut cols = vec!["tau", "trial", "seed"];
    cols.extend(METRICS_COLUMNS);
    cols.extend(["star_count", "mean_star_size"]);
    cols.join(",")
}

/// `trials.csv` contents.
pub fn trials_csv(records: &[TrialRecord]) -> String {
    let mut out = trials_header();
    out.push('\n');
    for r in records {
        let mut fields = vec![r.tau.to_string(), r.trial.to_string(), r.seed.to_string()];
        fields.extend(metrics_fields(&r.metrics));
        fields.push(r.star_count().map(|c| c.to_string()).unwrap_or_default());
        fields.push(r.mean_star_size().map(|m| m.to_string()).unwrap_or_default());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Header of `summary.csv`.
pub fn summary_header() -> String {
    let mut cols = vec!["tau".to_string(), "trials".to_string()];
    for m in SUMMARY_METRICS {
        cols.extend([format!("{m}_n"), format!("{m}_mean"), format!("{m}_std")]);
    }
    cols.join(",")
}

/// `summary.csv` contents.
pub fn summary_csv(summary: &EnsembleSummary) -> String {
    let num = |v: f64| if v.is_nan() { String::new() } else { v.to_string() };
    let mut out = summary_header();
    out.push('\n');
    for s in &summary.per_tau {
        let mut fields = vec![s.tau.to_string(), s.trials.to_string()];
        for st in &s.stats {
            fields.extend([st.n.to_string(), num(st.mean), num(st.std)]);
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn trajectory_csv(traj: &[Vec<f64>], top_m: usize) -> String {
    let mut out = String::from("step");
    for i in 1..=top_m {
        let _ = write!(out, ",lambda_{i}");
    }
    out.push('\n');
    for (step, row) in traj.iter().enumerate() {
        let _ = write!(out, "{step}");
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct SpecDoc<'a> {
    version: &'static str,
    walkers: usize,
    tau_values: &'a [f64],
    steps: usize,
    trials: usize,
    base_seed: u64,
    emit: Vec<&'static str>,
    workers: usize,
    propagator: &'static str,
    top_m: usize,
    policy: &'static str,
    initial_graph: &'static str,
}

/// `spec.json` contents. The output directory itself is not recorded, so a
/// run can be moved or repeated elsewhere without changing its files.
pub fn spec_json(spec: &ExperimentSpec) -> String {
    let doc = SpecDoc {
        version: VERSION,
        walkers: spec.walkers,
        tau_values: &spec.tau_values,
        steps: spec.steps,
        trials: spec.trials,
        base_seed: spec.base_seed,
        emit: spec.emit.iter().map(|e| e.name()).collect(),
        workers: spec.workers,
        propagator: spec.propagator.name(),
        top_m: spec.top_m,
        policy: qwgrow_core::CollapsePolicy::default().name(),
        initial_graph: "single-node",
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("spec serializes");
    s.push('\n');
    s
}

fn write(path: PathBuf, contents: &str) -> Result<()> {
    std::fs::write(&path, contents).map_err(|e| Error::io(path, e))
}

/// Reads a CSV written by this module into its header and rows of raw
/// fields.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Invalid(format!("{}: empty file", path.display())))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Vec<String> = line.split(',').map(str::to_string).collect();
        if row.len() != header.len() {
            return Err(Error::Invalid(format!(
                "{}: line {} has {} fields, header has {}",
                path.display(),
                i + 2,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stat_examples() {
        let s = Stat::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(Stat::of(&[7.0]).std, 0.0);
        assert!(Stat::of(&[]).mean.is_nan());
    }

    #[test]
    fn seeds_differ() {
        let a = trial_seed(0, 0, 0);
        assert_ne!(a, trial_seed(0, 0, 1));
        assert_ne!(a, trial_seed(0, 1, 0));
        assert_ne!(a, trial_seed(1, 0, 0));
        assert_eq!(a, trial_seed(0, 0, 0));
    }
}
