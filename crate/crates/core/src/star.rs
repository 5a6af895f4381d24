//! Closed-form results for walkers trapped on star graphs.
//!
//! Star size convention: a star is described by its leaf count `l` and has
//! `l + 1` nodes. Its adjacency spectrum is `{+sqrt(l), -sqrt(l)}` plus `l - 1`
//! zeros, so a walker started at the center returns there with probability
//! `cos^2(sqrt(l) t)`.
//!
//! The survival product `p_center(k, tau)` approximates the chance that a
//! walker keeps collapsing on the center of a growing star during its first
//! `k` steps, replacing each random collapse time by its mean.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::graph::Graph;
use crate::growth::{replay_with, GrowthTrace};
use crate::linalg::SymmetricEigen;
use crate::poly::{self, IntPolynomial};
use crate::{Error, Result};

/// Probability of finding a walker on the center of an `l`-leaf star after
/// time `t`, having started there.
pub fn star_return_probability(leaves: usize, t: f64) -> f64 {
    assert!(leaves >= 1, "a star needs at least one leaf");
    let c = libm::cos(libm::sqrt(leaves as f64) * t);
    c * c
}

/// `prod_{n=1..k} cos^2(sqrt(n) tau)`.
pub fn p_center(k: usize, tau: f64) -> f64 {
    (1..=k).map(|n| star_return_probability(n, tau)).product()
}

/// `sin^2(sqrt(k) tau) prod_{n=1..k-1} cos^2(sqrt(n) tau)`.
pub fn p_out(k: usize, tau: f64) -> f64 {
    assert!(k >= 1, "escape index starts at 1");
    let s = libm::sin(libm::sqrt(k as f64) * tau);
    s * s * p_center(k - 1, tau)
}

/// `[p_out(1, tau), ..., p_out(k_max, tau)]` in one pass.
pub fn p_out_series(k_max: usize, tau: f64) -> Vec<f64> {
    let mut survive = 1.0;
    (1..=k_max)
        .map(|k| {
            let x = libm::sqrt(k as f64) * tau;
            let s = libm::sin(x);
            let c = libm::cos(x);
            let out = s * s * survive;
            survive *= c * c;
            out
        })
        .collect()
}

/// Truncated mean star size with an estimate of the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarSizeEstimate {
    /// `sum_{k <= terms} k p_out(k, tau)`.
    pub value: f64,
    /// Tail beyond the truncation, `sum_{k > terms} k p_out(k, tau)`,
    /// evaluated by continuing the series until it underflows.
    pub error_estimate: f64,
    /// Number of summed terms.
    pub terms: usize,
}

/// Default survival cutoff for [`expected_star_size`].
pub const DEFAULT_TRUNCATION: f64 = 1e-12;

/// Mean star size `sum_k k p_out(k, tau)`, summed until the survival
/// `p_center(k, tau)` drops below `truncation_eps`.
///
/// The sum behaves like `c / tau` with `c = sqrt(pi / 2)` for small `tau`.
pub fn expected_star_size(tau: f64, truncation_eps: f64) -> Result<StarSizeEstimate> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidTau(tau));
    }
    if !(truncation_eps.is_finite() && truncation_eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "truncation must be positive, got {truncation_eps}"
        )));
    }
    const MAX_TERMS: usize = 100_000_000;
    let mut survive = 1.0;
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut k = 0;
    while survive >= truncation_eps {
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::InvalidArgument(format!(
                "survival did not fall below {truncation_eps} within {MAX_TERMS} terms at tau={tau}"
            )));
        }
        let x = libm::sqrt(k as f64) * tau;
        let s = libm::sin(x);
        let c = libm::cos(x);
        // Kahan summation of k * p_out(k).
        let y = k as f64 * s * s * survive - comp;
        let t = value + y;
        comp = (t - value) - y;
        value = t;
        survive *= c * c;
    }
    let terms = k;
    let mut tail = 0.0;
    while survive > f64::MIN_POSITIVE && k < terms.saturating_mul(10).max(1000) {
        k += 1;
        let x = libm::sqrt(k as f64) * tau;
        let s = libm::sin(x);
        let c = libm::cos(x);
        tail += k as f64 * s * s * survive;
        survive *= c * c;
    }
    Ok(StarSizeEstimate { value, error_estimate: tail, terms })
}

/// Adjacency spectrum of the `l`-leaf star, ascending.
pub fn star_spectrum(leaves: usize) -> Vec<f64> {
    assert!(leaves >= 1, "a star needs at least one leaf");
    let r = libm::sqrt(leaves as f64);
    let mut out = vec![0.0; leaves + 1];
    out[0] = -r;
    out[leaves] = r;
    out
}

/// A sequence of stars, each centered on a leaf of the previous one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarChain {
    leaf_counts: Vec<usize>,
}

impl StarChain {
    /// Chain with the given positive leaf counts.
    pub fn new(leaf_counts: Vec<usize>) -> Result<Self> {
        if leaf_counts.is_empty() {
            return Err(Error::InvalidChain("a chain needs at least one star".into()));
        }
        if let Some(i) = leaf_counts.iter().position(|&l| l == 0) {
            return Err(Error::InvalidChain(format!("star {i} has no leaves")));
        }
        Ok(StarChain { leaf_counts })
    }

    /// Leaf count of each star.
    pub fn leaf_counts(&self) -> &[usize] {
        &self.leaf_counts
    }

    /// `1 + sum of leaf counts`.
    pub fn node_count(&self) -> usize {
        1 + self.leaf_counts.iter().sum::<usize>()
    }
}

/// Builds the chain graph: star 1 is centered on node 0; the center of star
/// `i + 1` is the highest-numbered leaf of star `i` and carries `l_{i+1}`
/// additional leaves.
pub fn star_chain_graph(chain: &StarChain) -> Graph {
    let mut g = Graph::single_node();
    let mut center = 0;
    for &l in chain.leaf_counts() {
        let mut last = center;
        for _ in 0..l {
            last = g.attach_node(&[center.into()]).expect("center exists").0;
        }
        center = last;
    }
    g
}

/// Exact `det(A - x I)` of a graph's adjacency matrix.
pub fn charpoly_exact(g: &Graph) -> Result<IntPolynomial> {
    poly::charpoly(g)
}

/// Parameterization used when evaluating the multi-star recurrence
/// `chi_{n_1..n_k} = -n_k x^{n_k - 1} chi_{n_1..n_{k-1} - 1} + x^{n_k} chi_{n_1..n_{k-1}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecurrenceConvention {
    /// `n_1` counts the first star's nodes (`l_1 + 1`), `n_i` for `i >= 2`
    /// counts the nodes star `i` adds (`l_i`). Base case
    /// `chi_n = -x^{n-2} (x^2 - n)` taken literally, with `chi_1 = -x`.
    NodeCount,
    /// `n_i = l_i` throughout, base case `x^{l-1} (x^2 - l)` (the monic
    /// `det(x I - A)` of the `l`-leaf star) and `x` for `l = 0`.
    LeafCount,
}

impl RecurrenceConvention {
    /// Stable name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            RecurrenceConvention::NodeCount => "node-count",
            RecurrenceConvention::LeafCount => "leaf-count",
        }
    }

    fn base(self, n: usize) -> IntPolynomial {
        let x = IntPolynomial::monomial(1, 1);
        match (self, n) {
            (RecurrenceConvention::NodeCount, 0 | 1) => x.neg(),
            (RecurrenceConvention::NodeCount, n) => {
                IntPolynomial::from_i64(&[-(n as i64), 0, 1]).shift(n - 2).neg()
            }
            (RecurrenceConvention::LeafCount, 0) => x,
            (RecurrenceConvention::LeafCount, l) => {
                IntPolynomial::from_i64(&[-(l as i64), 0, 1]).shift(l - 1)
            }
        }
    }

    fn parameters(self, chain: &StarChain) -> Vec<usize> {
        let mut p = chain.leaf_counts().to_vec();
        if self == RecurrenceConvention::NodeCount {
            p[0] += 1;
        }
        p
    }
}

fn recurrence(params: &[usize], conv: RecurrenceConvention) -> IntPolynomial {
    match params {
        [] => IntPolynomial::constant(1),
        [n] => conv.base(*n),
        [prev @ .., nk] => {
            let nk = *nk;
            let mut reduced = prev.to_vec();
            let last = reduced.len() - 1;
            reduced[last] -= 1;
            if reduced[last] == 0 && last > 0 {
                reduced.pop();
            }
            let a = recurrence(&reduced, conv).shift(nk - 1).scale(&BigInt::from(-(nk as i64)));
            let b = recurrence(prev, conv).shift(nk);
            a.add(&b)
        }
    }
}

/// Evaluates the multi-star recurrence for `chain` under `conv`.
pub fn charpoly_recurrence(chain: &StarChain, conv: RecurrenceConvention) -> IntPolynomial {
    recurrence(&conv.parameters(chain), conv)
}

/// Outcome of checking the recurrence against the exact determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceReport {
    /// Leaf counts of the chain.
    pub chain: Vec<usize>,
    /// Convention used.
    pub convention: RecurrenceConvention,
    /// Exact `det(A - x I)` of [`star_chain_graph`].
    pub exact: IntPolynomial,
    /// Recurrence value.
    pub recurrence: IntPolynomial,
    /// Agreement up to a global sign.
    pub matches: bool,
    /// `recurrence - s * exact`, with `s = ±1` aligning the leading coefficients.
    pub residual: IntPolynomial,
}

/// Compares the recurrence with [`charpoly_exact`] on the chain graph.
pub fn compare_recurrence(chain: &StarChain, conv: RecurrenceConvention) -> Result<RecurrenceReport> {
    let exact = charpoly_exact(&star_chain_graph(chain))?;
    let rec = charpoly_recurrence(chain, conv);
    let aligned = if rec.leading().is_negative() != exact.leading().is_negative() {
        exact.neg()
    } else {
        exact.clone()
    };
    let residual = rec.sub(&aligned);
    Ok(RecurrenceReport {
        chain: chain.leaf_counts().to_vec(),
        convention: conv,
        matches: residual.is_zero(),
        exact,
        recurrence: rec,
        residual,
    })
}

/// Star sizes in a tree: every non-leaf node is a center and its size is its
/// degree. Sorted descending. The two-node tree counts as one star of size 1.
pub fn detect_stars(tree: &Graph) -> Result<Vec<usize>> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    if tree.node_count() == 2 {
        return Ok(vec![1]);
    }
    let mut sizes: Vec<usize> =
        (0..tree.node_count()).map(|v| tree.degree(v)).filter(|&d| d >= 2).collect();
    debug_assert!(tree.node_count() < 3 || sizes.iter().sum::<usize>() >= tree.edge_count());
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sizes)
}

/// For every step of `trace`, the `top_m` largest absolute adjacency
/// eigenvalues after that step, descending, zero-padded.
pub fn spectrum_trajectory(trace: &GrowthTrace, top_m: usize) -> Result<Vec<Vec<f64>>> {
    if top_m == 0 {
        return Err(Error::InvalidArgument("top_m must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(trace.events.len());
    let mut failure = None;
    replay_with(trace, |_, g| {
        if failure.is_some() {
            return;
        }
        match SymmetricEigen::of_graph(g) {
            Ok(eig) => out.push(top_abs(&eig.values, top_m)),
            Err(e) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn top_abs(values: &[f64], m: usize) -> Vec<f64> {
    let mut abs: Vec<f64> = values.iter().map(|v| libm::fabs(*v)).collect();
    abs.sort_by(|a, b| b.total_cmp(a));
    abs.resize(m.max(abs.len()), 0.0);
    abs.truncate(m);
    abs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::{CollapseEvent, RunConfig};
    use crate::NodeId;

    #[test]
    fn return_probability_examples() {
        assert!((star_return_probability(3, 0.5) - 0.4198).abs() < 1e-4);
        assert_eq!(star_return_probability(7, 0.0), 1.0);
        assert!((star_return_probability(4, core::f64::consts::FRAC_PI_2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn center_and_escape_first_terms() {
        let tau: f64 = 0.3;
        assert!((p_center(1, tau) - tau.cos().powi(2)).abs() < 1e-15);
        assert!((p_out(1, tau) - tau.sin().powi(2)).abs() < 1e-15);
        assert_eq!(p_center(0, tau), 1.0);
    }

    #[test]
    fn small_tau_expansion() {
        let tau: f64 = 1e-4;
        for k in [1usize, 5, 20, 100] {
            let half_sum = (k * (k + 1)) as f64 / 2.0;
            let approx = 1.0 - tau * tau * half_sum;
            // Next term is (tau^2 half_sum)^2 / 2 plus smaller pieces.
            let bound = (tau * tau * half_sum).powi(2) + 1e-15;
            assert!((p_center(k, tau) - approx).abs() <= bound, "k={k}");
        }
    }

    #[test]
    fn center_decreases() {
        for &tau in &[0.01, 0.1, 0.5] {
            for k in 1..200 {
                assert!(p_center(k + 1, tau) <= p_center(k, tau));
            }
        }
    }

    #[test]
    fn series_matches_pointwise() {
        let s = p_out_series(50, 0.2);
        for (i, v) in s.iter().enumerate() {
            assert!((v - p_out(i + 1, 0.2)).abs() < 1e-15);
        }
    }

    #[test]
    fn expected_size_errors_and_floor() {
        assert!(expected_star_size(0.0, 1e-12).is_err());
        assert!(expected_star_size(1.0, 0.0).is_err());
        let e = expected_star_size(1.0, DEFAULT_TRUNCATION).unwrap();
        assert!(e.value >= 1.0);
        assert!(e.value >= p_out(1, 1.0));
    }

    #[test]
    fn spectrum_shapes() {
        assert_eq!(star_spectrum(1), [-1.0, 1.0]);
        assert_eq!(star_spectrum(9), [-3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0]);
    }

    #[test]
    fn chain_graphs() {
        let one = StarChain::new(vec![3]).unwrap();
        assert_eq!(star_chain_graph(&one), Graph::star(3));
        let path = StarChain::new(vec![1, 1]).unwrap();
        assert_eq!(star_chain_graph(&path), Graph::path(3).unwrap());
        let three = StarChain::new(vec![3, 3, 3]).unwrap();
        let g = star_chain_graph(&three);
        assert_eq!(g.node_count(), 10);
        assert!(g.is_tree());
        assert_eq!((0..10).filter(|&v| g.degree(v) >= 3).count(), 3);
        assert!(StarChain::new(vec![]).is_err());
        assert!(StarChain::new(vec![2, 0]).is_err());
    }

    #[test]
    fn single_star_recurrence_is_base_case() {
        let chain = StarChain::new(vec![3]).unwrap();
        let leaf = charpoly_recurrence(&chain, RecurrenceConvention::LeafCount);
        assert_eq!(leaf, IntPolynomial::from_i64(&[0, 0, -3, 0, 1]));
        let node = charpoly_recurrence(&chain, RecurrenceConvention::NodeCount);
        assert_eq!(node, IntPolynomial::from_i64(&[0, 0, 4, 0, -1]));
    }

    #[test]
    fn path_recurrence_reports() {
        let chain = StarChain::new(vec![1, 1]).unwrap();
        let exact = charpoly_exact(&star_chain_graph(&chain)).unwrap();
        assert_eq!(exact, IntPolynomial::from_i64(&[0, 2, 0, -1]));
        let leaf = compare_recurrence(&chain, RecurrenceConvention::LeafCount).unwrap();
        assert!(leaf.matches);
        let node = compare_recurrence(&chain, RecurrenceConvention::NodeCount).unwrap();
        assert!(!node.matches);
        assert_eq!(node.residual, IntPolynomial::from_i64(&[0, 1]));
    }

    #[test]
    fn detect_star_sizes() {
        assert_eq!(detect_stars(&Graph::star(6)).unwrap(), [6]);
        assert_eq!(detect_stars(&Graph::star(1)).unwrap(), [1]);
        assert_eq!(detect_stars(&Graph::path(5).unwrap()).unwrap(), [2, 2, 2]);
        assert_eq!(detect_stars(&Graph::cycle(4).unwrap()), Err(Error::NotATree));
    }

    fn trace_from(measured: &[usize]) -> GrowthTrace {
        let mut g = Graph::single_node();
        let events = measured
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let new_node = g.attach_node(&[NodeId(m)]).unwrap();
                CollapseEvent { step: i, sampled_t: 0.0, measured_nodes: vec![NodeId(m)], new_node }
            })
            .collect();
        let mut config = RunConfig::new(1, 1.0, measured.len(), 0);
        config.initial_graph = Graph::single_node();
        GrowthTrace { config, events, final_graph: g }
    }

    #[test]
    fn pure_star_trajectory() {
        let trace = trace_from(&[0; 30]);
        let traj = spectrum_trajectory(&trace, 2).unwrap();
        for (i, row) in traj.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((row[0] - n.sqrt()).abs() < 1e-8);
        }
        // One node after the first step pads with zeros.
        assert_eq!(spectrum_trajectory(&trace, 5).unwrap()[0][2..], [0.0, 0.0, 0.0]);
        assert!(spectrum_trajectory(&trace, 0).is_err());
    }
}
