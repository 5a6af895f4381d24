//! Text renderings of metrics, star tables and recurrence reports.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! value parses back to the identical `f64`. Absent values are empty fields.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use qwgrow_core::star::{self, RecurrenceReport};
use qwgrow_core::{IntPolynomial, MetricsReport};
use serde::Serialize;

use crate::Result;

/// Column order of a metrics row.
pub const METRICS_COLUMNS: [&str; 7] =
    ["nodes", "edges", "diameter", "leaf_fraction", "avg_clustering", "alpha", "alpha_r2"];

/// Fields of one metrics row, in [`METRICS_COLUMNS`] order.
pub fn metrics_fields(m: &MetricsReport) -> Vec<String> {
    let (alpha, r2) = match m.power_law {
        Some(f) => (f.alpha.to_string(), f.r_squared.to_string()),
        None => (String::new(), String::new()),
    };
    vec![
        m.nodes.to_string(),
        m.edges.to_string(),
        m.diameter.to_string(),
        m.leaf_fraction.to_string(),
        m.avg_clustering.to_string(),
        alpha,
        r2,
    ]
}

/// Header plus one row.
pub fn metrics_csv(m: &MetricsReport) -> String {
    format!("{}\n{}\n", METRICS_COLUMNS.join(","), metrics_fields(m).join(","))
}

/// `k,d_k` rows.
pub fn histogram_csv(points: &[(usize, f64)]) -> String {
    let mut out = String::from("k,d_k\n");
    for (k, d) in points {
        let _ = writeln!(out, "{k},{d}");
    }
    out
}

/// `index,eigenvalue` rows, ascending eigenvalues.
pub fn spectrum_csv(values: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{i},{v}");
    }
    out
}

/// `key=value` lines printed by `qwgrow analyze`.
pub fn analyze_text(m: &MetricsReport) -> String {
    let f = metrics_fields(m);
    let mut out = String::new();
    for (k, v) in METRICS_COLUMNS.iter().zip(&f) {
        let v = if v.is_empty() { "NA" } else { v.as_str() };
        let _ = writeln!(out, "{k}={v}");
    }
    out
}

/// `k,p_center,p_out` for `k = 1..=max_k`, then the expected star size as
/// trailing comment lines.
pub fn stars_table(tau: f64, max_k: usize) -> Result<String> {
    let est = star::expected_star_size(tau, star::DEFAULT_TRUNCATION)?;
    let mut out = String::from("k,p_center,p_out\n");
    for k in 1..=max_k {
        let _ = writeln!(out, "{k},{},{}", star::p_center(k, tau), star::p_out(k, tau));
    }
    let _ = writeln!(out, "# expected_star_size={}", est.value);
    let _ = writeln!(out, "# error_estimate={}", est.error_estimate);
    let _ = writeln!(out, "# terms={}", est.terms);
    Ok(out)
}

/// JSON shape of a recurrence comparison. Coefficients are ascending in
/// degree; those that do not fit in `i64` are decimal strings.
#[derive(Debug, Serialize)]
pub struct RecurrenceDoc {
    /// Leaf counts.
    pub chain: Vec<usize>,
    /// `node-count` or `leaf-count`.
    pub convention: &'static str,
    /// Agreement up to a global sign.
    #[serde(rename = "match")]
    pub matches: bool,
    /// `recurrence - s * exact`.
    pub residual_coefficients: Vec<serde_json::Value>,
    /// Exact `det(A - x I)`.
    pub exact_coefficients: Vec<serde_json::Value>,
    /// Recurrence value.
    pub recurrence_coefficients: Vec<serde_json::Value>,
    /// Human-readable exact polynomial.
    pub exact: String,
    /// Human-readable recurrence polynomial.
    pub recurrence: String,
}

fn coefficient_values(p: &IntPolynomial) -> Vec<serde_json::Value> {
    p.coefficients().iter().map(big_value).collect()
}

fn big_value(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => v.into(),
        None => c.to_string().into(),
    }
}

impl From<&RecurrenceReport> for RecurrenceDoc {
    fn from(r: &RecurrenceReport) -> Self {
        RecurrenceDoc {
            chain: r.chain.clone(),
            convention: r.convention.name(),
            matches: r.matches,
            residual_coefficients: coefficient_values(&r.residual),
            exact_coefficients: coefficient_values(&r.exact),
            recurrence_coefficients: coefficient_values(&r.recurrence),
            exact: r.exact.to_string(),
            recurrence: r.recurrence.to_string(),
        }
    }
}
