//! Growth loops driven by collapsing walkers.
//!
//! Each step draws one collapse time shared by all walkers, evolves every
//! walker independently for that time, measures each of them, attaches one
//! new node to the distinct measured nodes and collapses the walkers. With a
//! single walker the result is always a tree.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::graph::{Graph, NodeId};
use crate::rng::RandomStream;
use crate::walk::{self, Propagator, WalkerState};
use crate::{Error, Result};

/// Where each walker restarts after a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CollapsePolicy {
    /// Each walker restarts on the node it was measured on.
    #[default]
    MeasuredNode,
    /// Every walker restarts on the freshly attached node.
    NewNode,
}

impl CollapsePolicy {
    /// Stable lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            CollapsePolicy::MeasuredNode => "measured-node",
            CollapsePolicy::NewNode => "new-node",
        }
    }

    /// Inverse of [`CollapsePolicy::name`].
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "measured-node" => Some(CollapsePolicy::MeasuredNode),
            "new-node" => Some(CollapsePolicy::NewNode),
            _ => None,
        }
    }
}

/// Parameters of one growth run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Number of walkers `k >= 1`.
    pub walkers: usize,
    /// Mean collapse time.
    pub tau: f64,
    /// Number of growth steps.
    pub steps: usize,
    /// Seed of the run's random stream.
    pub seed: u64,
    /// Graph the run starts from.
    pub initial_graph: Graph,
    /// Starting node of each walker.
    pub initial_positions: Vec<NodeId>,
    /// Restart rule after a step.
    pub policy: CollapsePolicy,
    /// Backend for `exp(-i A t)`.
    pub propagator: Propagator,
}

impl RunConfig {
    /// Run from the single-node graph with every walker on node 0.
    pub fn new(walkers: usize, tau: f64, steps: usize, seed: u64) -> Self {
        RunConfig {
            walkers,
            tau,
            steps,
            seed,
            initial_graph: Graph::single_node(),
            initial_positions: vec![NodeId(0); walkers],
            policy: CollapsePolicy::default(),
            propagator: Propagator::default(),
        }
    }

    /// Replaces the propagator.
    pub fn with_propagator(mut self, propagator: Propagator) -> Self {
        self.propagator = propagator;
        self
    }

    /// Checks the invariants of the configuration.
    pub fn validate(&self) -> Result<()> {
        if self.walkers == 0 {
            return Err(Error::InvalidConfig("walkers must be at least 1".into()));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidTau(self.tau));
        }
        if self.steps == 0 {
            return Err(Error::InvalidConfig("steps must be at least 1".into()));
        }
        if self.initial_positions.len() != self.walkers {
            return Err(Error::InvalidConfig(format!(
                "{} initial positions given for {} walkers",
                self.initial_positions.len(),
                self.walkers
            )));
        }
        for &p in &self.initial_positions {
            self.initial_graph.check_node(p)?;
        }
        Ok(())
    }
}

/// Record of one growth step.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseEvent {
    /// Zero-based step index.
    pub step: usize,
    /// Sampled evolution time.
    pub sampled_t: f64,
    /// Measured node of each walker, in walker order.
    pub measured_nodes: Vec<NodeId>,
    /// Node attached during this step.
    pub new_node: NodeId,
}

/// Complete record of a run; replaying the events reproduces the final graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTrace {
    /// Configuration of the run.
    pub config: RunConfig,
    /// Events in step order.
    pub events: Vec<CollapseEvent>,
    /// Graph after the last step.
    pub final_graph: Graph,
}

/// Options of a single step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepOptions {
    /// Backend for `exp(-i A t)`.
    pub propagator: Propagator,
    /// Restart rule.
    pub policy: CollapsePolicy,
}

/// Runs one growth iteration in place and returns its event.
///
/// Consumes exactly `1 + walkers.len()` draws: the collapse time, then one
/// measurement per walker in order.
pub fn step<R: RngCore>(
    graph: &mut Graph,
    walkers: &mut [WalkerState],
    tau: f64,
    rng: &mut RandomStream<R>,
    options: StepOptions,
    step_index: usize,
) -> Result<CollapseEvent> {
    if walkers.is_empty() {
        return Err(Error::InvalidConfig("at least one walker is required".into()));
    }
    let n = graph.node_count();
    for w in walkers.iter() {
        if w.len() != n {
            return Err(Error::DimensionMismatch { state: w.len(), graph: n });
        }
    }
    let t = walk::sample_collapse_time(tau, rng)?.value();
    let mut measured = Vec::with_capacity(walkers.len());
    {
        let evolver = options.propagator.prepare(graph)?;
        for w in walkers.iter() {
            let evolved = evolver.apply(w, t)?;
            measured.push(walk::measure(&evolved, rng)?);
        }
    }
    let new_node = graph.attach_node(&measured)?;
    let size = graph.node_count();
    for (w, &v) in walkers.iter_mut().zip(&measured) {
        let target = match options.policy {
            CollapsePolicy::MeasuredNode => v,
            CollapsePolicy::NewNode => new_node,
        };
        *w = walk::collapse_to(size, target)?;
    }
    Ok(CollapseEvent { step: step_index, sampled_t: t, measured_nodes: measured, new_node })
}

/// Runs `config.steps` iterations from the configured initial condition with
/// the default random stream seeded by `config.seed`.
pub fn grow(config: &RunConfig) -> Result<GrowthTrace> {
    let mut rng = RandomStream::from_seed(config.seed);
    grow_with(config, &mut rng)
}

/// [`grow`] with a caller-supplied random stream.
pub fn grow_with<R: RngCore>(config: &RunConfig, rng: &mut RandomStream<R>) -> Result<GrowthTrace> {
    config.validate()?;
    let mut graph = config.initial_graph.clone();
    let mut walkers = config
        .initial_positions
        .iter()
        .map(|&p| WalkerState::basis(graph.node_count(), p))
        .collect::<Result<Vec<_>>>()?;
    let options = StepOptions { propagator: config.propagator, policy: config.policy };
    let mut events = Vec::with_capacity(config.steps);
    for i in 0..config.steps {
        events.push(step(&mut graph, &mut walkers, config.tau, rng, options, i)?);
    }
    Ok(GrowthTrace { config: config.clone(), events, final_graph: graph })
}

/// Applies the events of `trace` to its initial graph, yielding the graph
/// after each step through `visit`.
pub fn replay_with<F: FnMut(&CollapseEvent, &Graph)>(
    trace: &GrowthTrace,
    mut visit: F,
) -> Result<Graph> {
    let mut g = trace.config.initial_graph.clone();
    for (i, ev) in trace.events.iter().enumerate() {
        let fail = |reason| Error::Replay { step: i, reason };
        if ev.measured_nodes.is_empty() {
            return Err(fail("event has no measured nodes".into()));
        }
        if ev.measured_nodes.len() != trace.config.walkers {
            return Err(fail(format!(
                "{} measured nodes for {} walkers",
                ev.measured_nodes.len(),
                trace.config.walkers
            )));
        }
        if let Some(bad) = ev.measured_nodes.iter().find(|v| v.0 >= g.node_count()) {
            return Err(fail(format!(
                "measured node {} does not exist in a graph of {} nodes",
                bad,
                g.node_count()
            )));
        }
        if ev.new_node.0 != g.node_count() {
            return Err(fail(format!(
                "new node {} does not match the next index {}",
                ev.new_node,
                g.node_count()
            )));
        }
        g.attach_node(&ev.measured_nodes).map_err(|e| fail(format!("{e}")))?;
        visit(ev, &g);
    }
    Ok(g)
}

/// Reconstructs the final graph of `trace` without any randomness.
pub fn replay(trace: &GrowthTrace) -> Result<Graph> {
    replay_with(trace, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Scripted;

    #[test]
    fn forced_step_reproduces_example() {
        let mut g = Graph::star(3);
        let mut walkers = vec![WalkerState::basis(4, NodeId(0)).unwrap()];
        // tau = 1: u = exp(-0.5) gives t = 0.5. Node 1 covers [0.42, 0.62).
        let draws = vec![
            Scripted::raw_for_open_closed(libm::exp(-0.5)),
            Scripted::raw_for_uniform(0.5),
        ];
        let mut rng = RandomStream::new(Scripted::new(draws));
        let ev = step(&mut g, &mut walkers, 1.0, &mut rng, StepOptions::default(), 0).unwrap();
        assert!((ev.sampled_t - 0.5).abs() < 1e-12);
        assert_eq!(ev.measured_nodes, [NodeId(1)]);
        assert_eq!(ev.new_node, NodeId(4));
        assert_eq!(g, Graph::new(5, &[(0, 1), (0, 2), (0, 3), (1, 4)]).unwrap());
        assert_eq!(walkers[0].probabilities(), [0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(rng.draws(), 2);
    }

    #[test]
    fn coincident_walkers_single_edge() {
        let mut g = Graph::star(3);
        let mut walkers = vec![WalkerState::basis(4, NodeId(2)).unwrap(); 2];
        // u = 1 gives t = 0, so both walkers stay on node 2.
        let mut rng = RandomStream::new(Scripted::new(vec![
            Scripted::raw_for_open_closed(1.0),
            Scripted::raw_for_uniform(0.3),
            Scripted::raw_for_uniform(0.8),
        ]));
        let ev = step(&mut g, &mut walkers, 1.0, &mut rng, StepOptions::default(), 0).unwrap();
        assert_eq!(ev.sampled_t, 0.0);
        assert_eq!(ev.measured_nodes, [NodeId(2), NodeId(2)]);
        assert_eq!(g.degree(4), 1);
        assert_eq!(rng.draws(), 3);
    }

    #[test]
    fn new_node_amplitude_zero() {
        let mut g = Graph::path(3).unwrap();
        let mut walkers = vec![
            WalkerState::basis(3, NodeId(0)).unwrap(),
            WalkerState::basis(3, NodeId(2)).unwrap(),
        ];
        let mut rng = RandomStream::from_seed(5);
        for i in 0..10 {
            let ev = step(&mut g, &mut walkers, 0.7, &mut rng, StepOptions::default(), i).unwrap();
            for w in &walkers {
                assert_eq!(w.amplitudes()[ev.new_node.0].norm(), 0.0);
            }
        }
    }

    #[test]
    fn new_node_policy() {
        let mut g = Graph::path(3).unwrap();
        let mut walkers = vec![WalkerState::basis(3, NodeId(1)).unwrap(); 2];
        let mut rng = RandomStream::from_seed(5);
        let opts = StepOptions { policy: CollapsePolicy::NewNode, ..Default::default() };
        let ev = step(&mut g, &mut walkers, 0.7, &mut rng, opts, 0).unwrap();
        for w in &walkers {
            assert_eq!(w.probabilities()[ev.new_node.0], 1.0);
        }
    }

    #[test]
    fn single_walker_tree() {
        let trace = grow(&RunConfig::new(1, 0.3, 100, 11)).unwrap();
        let g = &trace.final_graph;
        assert_eq!(g.node_count(), 101);
        assert_eq!(g.edge_count(), 100);
        assert!(g.is_tree());
        assert_eq!(replay(&trace).unwrap(), *g);
    }

    #[test]
    fn draw_accounting() {
        let cfg = RunConfig::new(3, 0.5, 25, 2);
        let mut rng = RandomStream::from_seed(cfg.seed);
        grow_with(&cfg, &mut rng).unwrap();
        assert_eq!(rng.draws(), 25 * (1 + 3));
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::new(0, 1.0, 5, 0).validate().is_err());
        assert!(RunConfig::new(1, 0.0, 5, 0).validate().is_err());
        assert!(RunConfig::new(1, 1.0, 0, 0).validate().is_err());
        let mut c = RunConfig::new(2, 1.0, 5, 0);
        c.initial_positions = vec![NodeId(0), NodeId(1)];
        assert!(c.validate().is_err());
    }

    #[test]
    fn replay_hand_built() {
        let cfg = RunConfig::new(1, 1.0, 2, 0);
        let ev = |step, m, new| CollapseEvent {
            step,
            sampled_t: 0.1,
            measured_nodes: vec![NodeId(m)],
            new_node: NodeId(new),
        };
        let path = GrowthTrace {
            config: cfg.clone(),
            events: vec![ev(0, 0, 1), ev(1, 1, 2)],
            final_graph: Graph::path(3).unwrap(),
        };
        assert_eq!(replay(&path).unwrap(), Graph::path(3).unwrap());
        let star = GrowthTrace { events: vec![ev(0, 0, 1), ev(1, 0, 2)], ..path.clone() };
        assert_eq!(replay(&star).unwrap(), Graph::star(2));
        let bad = GrowthTrace { events: vec![ev(0, 0, 1), ev(1, 5, 2)], ..path };
        assert!(matches!(replay(&bad), Err(Error::Replay { step: 1, .. })));
    }
}
