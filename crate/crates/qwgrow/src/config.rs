//! Experiment configuration.
//!
//! One `key = value` per line, `#` starts a comment. Lists are comma
//! separated, optionally wrapped in brackets.
//!
//! ```text
//! walkers    = 1
//! tau_values = [0.001, 0.01, 0.05, 0.1, 0.5, 10]
//! steps      = 100
//! trials     = 50          # default 20
//! base_seed  = 42          # default 0
//! out_dir    = runs/fig3   # default "qwgrow-out"
//! emit       = metrics, histograms   # default metrics
//! workers    = 4           # default 1
//! propagator = chebyshev   # default spectral
//! top_m      = 3           # eigenvalues per trajectory row, default 3
//! ```
//!
//! `walkers`, `tau_values` and `steps` are required. Unknown and repeated
//! keys are errors.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qwgrow_core::walk::Propagator;
use crate::{Error, ParseError, Result};

/// Optional per-run outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Emit {
    /// `trials.csv` and `summary.csv`, always written.
    Metrics,
    /// `hist_tau=<v>.csv`.
    Histograms,
    /// `trace_tau=<v>_trial=<i>.json`.
    Traces,
    /// `spectrum_tau=<v>.csv`.
    Spectra,
    /// `trajectory_tau=<v>_trial=<i>.csv`.
    Trajectories,
}

impl Emit {
    /// Every variant.
    pub const ALL: [Emit; 5] =
        [Emit::Metrics, Emit::Histograms, Emit::Traces, Emit::Spectra, Emit::Trajectories];

    /// Config spelling.
    pub fn name(self) -> &'static str {
        match self {
            Emit::Metrics => "metrics",
            Emit::Histograms => "histograms",
            Emit::Traces => "traces",
            Emit::Spectra => "spectra",
            Emit::Trajectories => "trajectories",
        }
    }
}

impl FromStr for Emit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Emit::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown emit target {s:?}"))
    }
}

impl fmt::Display for Emit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated tau sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Walkers per run.
    pub walkers: usize,
    /// Mean collapse times, in sweep order.
    pub tau_values: Vec<f64>,
    /// Growth steps per run.
    pub steps: usize,
    /// Runs per tau.
    pub trials: usize,
    /// Root of the seed tree.
    pub base_seed: u64,
    /// Output directory.
    pub out_dir: PathBuf,
    /// Outputs to write.
    pub emit: BTreeSet<Emit>,
    /// Worker threads.
    pub workers: usize,
    /// Evolution backend.
    pub propagator: Propagator,
    /// Eigenvalues per trajectory row.
    pub top_m: usize,
}

impl ExperimentSpec {
    /// Spec with every optional key at its default.
    pub fn new(walkers: usize, tau_values: Vec<f64>, steps: usize) -> Self {
        ExperimentSpec {
            walkers,
            tau_values,
            steps,
            trials: 20,
            base_seed: 0,
            out_dir: PathBuf::from("qwgrow-out"),
            emit: BTreeSet::from([Emit::Metrics]),
            workers: 1,
            propagator: Propagator::default(),
            top_m: 3,
        }
    }

    /// Whether `e` is requested.
    pub fn emits(&self, e: Emit) -> bool {
        self.emit.contains(&e)
    }

    /// Checks ranges.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        if self.walkers == 0 {
            return bad("walkers must be at least 1".into());
        }
        if self.steps == 0 {
            return bad("steps must be at least 1".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        if self.top_m == 0 {
            return bad("top_m must be at least 1".into());
        }
        if self.tau_values.is_empty() {
            return bad("tau_values must not be empty".into());
        }
        for &t in &self.tau_values {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("tau values must be positive and finite, got {t}"));
            }
        }
        let mut seen = BTreeSet::new();
        for &t in &self.tau_values {
            if !seen.insert(t.to_bits()) {
                return bad(format!("tau value {t} listed twice"));
            }
        }
        Ok(())
    }
}

/// Parses and validates a config file.
pub fn parse_config(text: &str) -> Result<ExperimentSpec> {
    let mut walkers = None;
    let mut tau_values = None;
    let mut steps = None;
    let mut spec = ExperimentSpec::new(0, Vec::new(), 0);
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| Error::from(ParseError::new(line_no, 0, m));
        let (key, value) =
            line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(err(format!("key {key:?} given twice")));
        }
        if value.is_empty() {
            return Err(err(format!("key {key:?} has no value")));
        }
        match key {
            "walkers" => walkers = Some(scalar(value, key).map_err(err)?),
            "tau_values" => tau_values = Some(list(value, key).map_err(err)?),
            "steps" => steps = Some(scalar(value, key).map_err(err)?),
            "trials" => spec.trials = scalar(value, key).map_err(err)?,
            "base_seed" => spec.base_seed = scalar(value, key).map_err(err)?,
            "out_dir" => spec.out_dir = PathBuf::from(value),
            "emit" => {
                spec.emit = list::<Emit>(value, key).map_err(err)?.into_iter().collect();
                spec.emit.insert(Emit::Metrics);
            }
            "workers" => spec.workers = scalar(value, key).map_err(err)?,
            "propagator" => {
                spec.propagator = Propagator::from_name(value)
                    .ok_or_else(|| err(format!("unknown propagator {value:?}")))?
            }
            "top_m" => spec.top_m = scalar(value, key).map_err(err)?,
            _ => return Err(err(format!("unknown key {key:?}"))),
        }
    }
    let missing = |k: &str| Error::Invalid(format!("missing required key {k:?}"));
    spec.walkers = walkers.ok_or_else(|| missing("walkers"))?;
    spec.tau_values = tau_values.ok_or_else(|| missing("tau_values"))?;
    spec.steps = steps.ok_or_else(|| missing("steps"))?;
    spec.validate()?;
    Ok(spec)
}

fn scalar<T: FromStr>(value: &str, key: &str) -> std::result::Result<T, String> {
    value.parse().map_err(|_| format!("invalid value {value:?} for {key:?}"))
}

fn list<T: FromStr>(value: &str, key: &str) -> std::result::Result<Vec<T>, String> {
    let inner = match (value.starts_with('['), value.ends_with(']')) {
        (true, true) => &value[1..value.len() - 1],
        (false, false) => value,
        _ => return Err(format!("unbalanced brackets in {key:?}")),
    };
    if inner.trim().is_empty() {
        return Err(format!("empty list for {key:?}"));
    }
    inner
        .split(',')
        .map(|item| {
            let item = item.trim();
            if item.is_empty() {
                return Err(format!("empty item in list {key:?}"));
            }
            item.parse().map_err(|_| format!("invalid item {item:?} in {key:?}"))
        })
        .collect()
}
