//! Continuous-time quantum walk on a graph: evolution, measurement, collapse.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_core::RngCore;

use crate::graph::{Graph, NodeId};
use crate::linalg::{chebyshev_propagate, SymmetricEigen};
use crate::rng::RandomStream;
use crate::{Error, Result};

/// Tolerance on `| ||psi|| - 1 |` accepted by [`measure`].
pub const MEASURE_NORM_TOLERANCE: f64 = 1e-6;

/// Complex amplitudes of a walker over the nodes of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    amplitudes: Vec<Complex64>,
}

impl WalkerState {
    /// Walker localized on `v` in a graph with `node_count` nodes.
    pub fn basis(node_count: usize, v: NodeId) -> Result<Self> {
        if v.0 >= node_count {
            return Err(Error::NodeOutOfRange { node: v.0, node_count });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); node_count];
        amplitudes[v.0] = Complex64::new(1.0, 0.0);
        Ok(WalkerState { amplitudes })
    }

    /// Equal-weight superposition over `node_count` nodes.
    pub fn uniform(node_count: usize) -> Self {
        let a = 1.0 / libm::sqrt(node_count as f64);
        WalkerState { amplitudes: vec![Complex64::new(a, 0.0); node_count] }
    }

    /// Wraps raw amplitudes; callers are responsible for normalization.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        WalkerState { amplitudes }
    }

    /// Amplitudes, one per node.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Number of nodes the state lives on.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    /// True for the zero-dimensional state.
    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Position distribution `|a_v|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amplitudes.iter().map(|a| a.norm_sqr()).sum())
    }
}

/// How `exp(-i A t)` is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Propagator {
    /// Full dense eigendecomposition of `A`, exact up to round-off.
    #[default]
    Spectral,
    /// Chebyshev series of the sparse adjacency, `O(edges * rho t)` per state.
    Chebyshev,
}

impl Propagator {
    /// Stable lowercase name used in files and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Propagator::Spectral => "spectral",
            Propagator::Chebyshev => "chebyshev",
        }
    }

    /// Inverse of [`Propagator::name`].
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "spectral" => Some(Propagator::Spectral),
            "chebyshev" => Some(Propagator::Chebyshev),
            _ => None,
        }
    }

    /// Prepares the propagator for repeated use on one graph.
    pub fn prepare(self, g: &Graph) -> Result<Evolver<'_>> {
        Ok(match self {
            Propagator::Spectral => Evolver::Spectral(SymmetricEigen::of_graph(g)?),
            Propagator::Chebyshev => Evolver::Chebyshev(g),
        })
    }
}

/// A propagator bound to a fixed graph; shares the decomposition across walkers.
#[derive(Debug)]
pub enum Evolver<'g> {
    /// Precomputed eigendecomposition.
    Spectral(SymmetricEigen),
    /// Sparse Chebyshev expansion over the borrowed graph.
    Chebyshev(&'g Graph),
}

impl Evolver<'_> {
    fn dim(&self) -> usize {
        match self {
            Evolver::Spectral(e) => e.dim(),
            Evolver::Chebyshev(g) => g.node_count(),
        }
    }

    /// `U(t) psi`.
    pub fn apply(&self, psi: &WalkerState, t: f64) -> Result<WalkerState> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch { state: psi.len(), graph: self.dim() });
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidTime(t));
        }
        if t == 0.0 {
            return Ok(psi.clone());
        }
        let amplitudes = match self {
            Evolver::Spectral(e) => e.propagate(&psi.amplitudes, t),
            Evolver::Chebyshev(g) => chebyshev_propagate(g, &psi.amplitudes, t),
        };
        Ok(WalkerState { amplitudes })
    }
}

/// Evolves `psi` for time `t` under `H = A_G` using the eigendecomposition
/// `A = Q diag(lambda) Q^T`, so `U(t) = Q exp(-i diag(lambda) t) Q^T`.
pub fn evolve(g: &Graph, psi: &WalkerState, t: f64) -> Result<WalkerState> {
    evolve_with(Propagator::Spectral, g, psi, t)
}

/// [`evolve`] with an explicit propagator.
pub fn evolve_with(
    propagator: Propagator,
    g: &Graph,
    psi: &WalkerState,
    t: f64,
) -> Result<WalkerState> {
    if psi.len() != g.node_count() {
        return Err(Error::DimensionMismatch { state: psi.len(), graph: g.node_count() });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidTime(t));
    }
    if t == 0.0 {
        return Ok(psi.clone());
    }
    propagator.prepare(g)?.apply(psi, t)
}

/// Samples a node with probability `|a_v|^2` using exactly one draw.
///
/// The probabilities are renormalized by their sum before cumulative-sum
/// inversion, absorbing round-off in the state's norm.
pub fn measure<R: RngCore>(psi: &WalkerState, rng: &mut RandomStream<R>) -> Result<NodeId> {
    let probs = psi.probabilities();
    let total: f64 = probs.iter().sum();
    let deviation = libm::fabs(libm::sqrt(total) - 1.0);
    if deviation.is_nan() || deviation > MEASURE_NORM_TOLERANCE {
        return Err(Error::NotNormalized(deviation));
    }
    let target = rng.uniform() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (v, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = v;
        }
        acc += p;
        if target < acc {
            return Ok(NodeId(v));
        }
    }
    Ok(NodeId(last_nonzero))
}

/// Projects onto node `v` in a graph of `node_count` nodes.
///
/// `node_count` is the size after growth, so the freshly attached node gets
/// amplitude zero.
pub fn collapse_to(node_count: usize, v: NodeId) -> Result<WalkerState> {
    WalkerState::basis(node_count, v)
}

/// A non-negative waiting time before collapse.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CollapseTime(pub f64);

impl CollapseTime {
    /// Time value.
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Draws `t ~ Exp(mean = tau)` as `-tau ln(u)` with `u` uniform in `(0, 1]`.
pub fn sample_collapse_time<R: RngCore>(
    tau: f64,
    rng: &mut RandomStream<R>,
) -> Result<CollapseTime> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidTau(tau));
    }
    let u = rng.uniform_open_closed();
    // -0.0 when u == 1; normalize the sign.
    Ok(CollapseTime(libm::fabs(-tau * libm::log(u))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Scripted;

    fn star4() -> Graph {
        Graph::star(3)
    }

    #[test]
    fn worked_example_distribution() {
        let psi = WalkerState::basis(4, NodeId(0)).unwrap();
        let p = evolve(&star4(), &psi, 0.5).unwrap().probabilities();
        // Center: cos^2(sqrt(3) / 2); the three leaves share the rest equally.
        let x = libm::sqrt(3.0) * 0.5;
        let center = libm::cos(x) * libm::cos(x);
        let leaf = libm::sin(x) * libm::sin(x) / 3.0;
        assert!((p[0] - center).abs() < 1e-12, "{p:?}");
        for &q in &p[1..] {
            assert!((q - leaf).abs() < 1e-12, "{p:?}");
        }
        assert!((p[0] - 0.42).abs() < 0.005);
        assert!((p[2] - 0.19).abs() < 0.005 && (p[3] - 0.19).abs() < 0.005);
    }

    #[test]
    fn zero_time_is_identity() {
        let psi = WalkerState::uniform(4);
        assert_eq!(evolve(&star4(), &psi, 0.0).unwrap(), psi);
    }

    #[test]
    fn two_node_path_oscillates() {
        let g = Graph::path(2).unwrap();
        let psi = WalkerState::basis(2, NodeId(0)).unwrap();
        for &t in &[0.1, 0.7, 1.3, 2.9, 10.0] {
            let p = evolve(&g, &psi, t).unwrap().probabilities();
            let c = libm::cos(t);
            assert!((p[0] - c * c).abs() < 1e-9);
        }
    }

    #[test]
    fn evolve_errors() {
        let psi = WalkerState::basis(3, NodeId(0)).unwrap();
        assert!(matches!(
            evolve(&star4(), &psi, 1.0),
            Err(Error::DimensionMismatch { state: 3, graph: 4 })
        ));
        let psi = WalkerState::basis(4, NodeId(0)).unwrap();
        assert!(matches!(
            evolve(&star4(), &psi, f64::NAN),
            Err(Error::InvalidTime(t)) if t.is_nan()
        ));
        assert!(evolve(&star4(), &psi, -1.0).is_err());
        assert!(evolve(&star4(), &psi, f64::INFINITY).is_err());
    }

    #[test]
    fn measure_basis_state() {
        let psi = WalkerState::basis(5, NodeId(3)).unwrap();
        let mut rng = RandomStream::from_seed(1);
        for _ in 0..100 {
            assert_eq!(measure(&psi, &mut rng).unwrap(), NodeId(3));
        }
        assert_eq!(rng.draws(), 100);
    }

    #[test]
    fn measure_rejects_unnormalized() {
        let psi = WalkerState::from_amplitudes(vec![Complex64::new(0.5, 0.0); 2]);
        let mut rng = RandomStream::from_seed(1);
        assert!(matches!(measure(&psi, &mut rng), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn measure_inverts_cumulative_sum() {
        let amps = [0.42f64, 0.20, 0.19, 0.19].map(|p| Complex64::new(libm::sqrt(p), 0.0));
        let psi = WalkerState::from_amplitudes(amps.to_vec());
        let cases = [(0.0, 0), (0.41, 0), (0.43, 1), (0.61, 1), (0.63, 2), (0.99, 3)];
        for (u, v) in cases {
            let mut rng = RandomStream::new(Scripted::new(vec![Scripted::raw_for_uniform(u)]));
            assert_eq!(measure(&psi, &mut rng).unwrap(), NodeId(v), "u={u}");
        }
    }

    #[test]
    fn collapse_extends_dimension() {
        let psi = collapse_to(5, NodeId(1)).unwrap();
        assert_eq!(psi.len(), 5);
        assert_eq!(psi.probabilities(), [0.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(collapse_to(5, NodeId(5)).is_err());
        let mut rng = RandomStream::from_seed(3);
        assert_eq!(measure(&psi, &mut rng).unwrap(), NodeId(1));
    }

    #[test]
    fn collapse_time_checks() {
        let mut rng = RandomStream::from_seed(9);
        assert_eq!(sample_collapse_time(0.0, &mut rng), Err(Error::InvalidTau(0.0)));
        assert!(sample_collapse_time(-1.0, &mut rng).is_err());
        assert!(sample_collapse_time(f64::INFINITY, &mut rng).is_err());
        assert_eq!(rng.draws(), 0);
        for _ in 0..1000 {
            assert!(sample_collapse_time(2.0, &mut rng).unwrap().value() >= 0.0);
        }
    }

    #[test]
    fn chebyshev_backend_agrees() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let psi = WalkerState::basis(5, NodeId(1)).unwrap();
        for &t in &[0.3, 5.0, 60.0] {
            let a = evolve(&g, &psi, t).unwrap();
            let b = evolve_with(Propagator::Chebyshev, &g, &psi, t).unwrap();
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                assert!((x - y).norm() < 1e-10);
            }
        }
    }
}
