//! Graph observables: degree distribution, power-law fit, diameter, leaf
//! fraction, clustering and adjacency spectrum.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::graph::Graph;
use crate::linalg::SymmetricEigen;
use crate::{Error, Result};

/// Fraction of nodes per degree.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeHistogram {
    counts: BTreeMap<usize, usize>,
    node_count: usize,
}

impl DegreeHistogram {
    /// Builds a histogram from raw counts per degree.
    pub fn from_counts(counts: BTreeMap<usize, usize>) -> Self {
        let node_count = counts.values().sum();
        DegreeHistogram { counts, node_count }
    }

    /// Number of nodes the histogram was computed from.
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of nodes with each degree.
    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    /// `d(k)` for one degree.
    pub fn fraction(&self, k: usize) -> f64 {
        self.counts.get(&k).map_or(0.0, |&c| c as f64 / self.node_count as f64)
    }

    /// `(k, d(k))` pairs for every degree that occurs, ascending in `k`.
    pub fn fractions(&self) -> Vec<(usize, f64)> {
        self.counts.iter().map(|(&k, &c)| (k, c as f64 / self.node_count as f64)).collect()
    }

    /// Mean degree.
    pub fn mean_degree(&self) -> f64 {
        let total: usize = self.counts.iter().map(|(k, c)| k * c).sum();
        total as f64 / self.node_count as f64
    }
}

/// Counts node degrees.
pub fn degree_distribution(g: &Graph) -> DegreeHistogram {
    let mut counts = BTreeMap::new();
    for v in 0..g.node_count() {
        *counts.entry(g.degree(v)).or_insert(0) += 1;
    }
    DegreeHistogram::from_counts(counts)
}

/// Least-squares line through `(ln k, ln d(k))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    /// Exponent in `d(k) ~ k^(-alpha)`.
    pub alpha: f64,
    /// Intercept `ln C` of the fitted line.
    pub intercept: f64,
    /// Coefficient of determination in log-log space.
    pub r_squared: f64,
    /// Number of bins used.
    pub support: usize,
}

/// Fits `d(k) = C k^(-alpha)` by ordinary least squares on the nonzero
/// bins with `k >= 1`.
pub fn fit_power_law_points(points: &[(usize, f64)]) -> Result<PowerLawFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(k, d)| k >= 1 && d > 0.0)
        .map(|&(k, d)| (libm::log(k as f64), libm::log(d)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientSupport(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(PowerLawFit { alpha: -slope, intercept, r_squared, support: pts.len() })
}

/// [`fit_power_law_points`] on a degree histogram.
pub fn fit_power_law(h: &DegreeHistogram) -> Result<PowerLawFit> {
    fit_power_law_points(&h.fractions())
}

/// Largest shortest-path distance over node pairs, by one BFS per node.
pub fn diameter(g: &Graph) -> Result<usize> {
    let mut best = 0;
    for v in 0..g.node_count() {
        let dist = g.bfs_distances(v);
        for &d in &dist {
            if d == usize::MAX {
                return Err(Error::Disconnected);
            }
            best = best.max(d);
        }
    }
    Ok(best)
}

/// Fraction of nodes with exactly one neighbor.
pub fn leaf_fraction(g: &Graph) -> f64 {
    let leaves = (0..g.node_count()).filter(|&v| g.degree(v) == 1).count();
    leaves as f64 / g.node_count() as f64
}

/// Local clustering coefficients and their mean.
///
/// `C_i = 2 e_i / (n_i (n_i - 1))` with `e_i` the number of edges among the
/// `n_i` neighbors of `i`; nodes of degree 0 or 1 get `C_i = 0`.
pub fn clustering(g: &Graph) -> (Vec<f64>, f64) {
    let local: Vec<f64> = (0..g.node_count())
        .map(|i| {
            let nb = g.neighbors(i);
            let d = nb.len();
            if d < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for (a, &j) in nb.iter().enumerate() {
                for &k in &nb[a + 1..] {
                    if g.has_edge(j, k) {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (d * (d - 1)) as f64
        })
        .collect();
    let avg = local.iter().sum::<f64>() / local.len() as f64;
    (local, avg)
}

/// Adjacency eigenvalues, ascending.
pub fn spectrum(g: &Graph) -> Result<Vec<f64>> {
    Ok(SymmetricEigen::of_graph(g)?.values)
}

/// All observables of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    /// Node count.
    pub nodes: usize,
    /// Edge count.
    pub edges: usize,
    /// Degree histogram.
    pub degree_histogram: DegreeHistogram,
    /// Diameter.
    pub diameter: usize,
    /// Fraction of degree-one nodes.
    pub leaf_fraction: f64,
    /// Mean local clustering.
    pub avg_clustering: f64,
    /// Power-law fit, absent with fewer than three degrees.
    pub power_law: Option<PowerLawFit>,
    /// Ascending spectrum, when requested.
    pub spectrum: Option<Vec<f64>>,
}

impl MetricsReport {
    /// Computes every metric; the spectrum only when `with_spectrum`.
    pub fn compute(g: &Graph, with_spectrum: bool) -> Result<Self> {
        let degree_histogram = degree_distribution(g);
        let power_law = fit_power_law(&degree_histogram).ok();
        Ok(MetricsReport {
            nodes: g.node_count(),
            edges: g.edge_count(),
            diameter: diameter(g)?,
            leaf_fraction: leaf_fraction(g),
            avg_clustering: clustering(g).1,
            power_law,
            spectrum: if with_spectrum { Some(spectrum(g)?) } else { None },
            degree_histogram,
        })
    }
}
