//! Growth traces as JSON.
//!
//! ```json
//! {
//!   "config": {"walkers": 1, "tau": 0.5, "steps": 2, "seed": 7,
//!              "policy": "measured-node", "propagator": "spectral",
//!              "initial_nodes": 1, "initial_edges": [], "initial_positions": [0]},
//!   "events": [{"step": 0, "t": 0.31, "measured": [0], "new_node": 1}, ...],
//!   "final_edges": [[0, 1], [0, 2]]
//! }
//! ```
//!
//! Field order is fixed. Reading a trace replays it and rejects documents
//! whose `final_edges` disagree with the events.

use qwgrow_core::growth::replay;
use qwgrow_core::walk::Propagator;
use qwgrow_core::{CollapseEvent, CollapsePolicy, Graph, GrowthTrace, NodeId, RunConfig};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceDoc {
    config: ConfigDoc,
    events: Vec<EventDoc>,
    final_edges: Vec<[usize; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    walkers: usize,
    tau: f64,
    steps: usize,
    seed: u64,
    policy: String,
    propagator: String,
    initial_nodes: usize,
    initial_edges: Vec<[usize; 2]>,
    initial_positions: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventDoc {
    step: usize,
    t: f64,
    measured: Vec<usize>,
    new_node: usize,
}

fn edge_pairs(g: &Graph) -> Vec<[usize; 2]> {
    g.edges().map(|(u, v)| [u, v]).collect()
}

fn to_doc(trace: &GrowthTrace) -> TraceDoc {
    let c = &trace.config;
    TraceDoc {
        config: ConfigDoc {
            walkers: c.walkers,
            tau: c.tau,
            steps: c.steps,
            seed: c.seed,
            policy: c.policy.name().into(),
            propagator: c.propagator.name().into(),
            initial_nodes: c.initial_graph.node_count(),
            initial_edges: edge_pairs(&c.initial_graph),
            initial_positions: c.initial_positions.iter().map(|p| p.index()).collect(),
        },
        events: trace
            .events
            .iter()
            .map(|e| EventDoc {
                step: e.step,
                t: e.sampled_t,
                measured: e.measured_nodes.iter().map(|n| n.index()).collect(),
                new_node: e.new_node.index(),
            })
            .collect(),
        final_edges: edge_pairs(&trace.final_graph),
    }
}

/// Compact JSON, one line, trailing newline.
pub fn trace_to_json(trace: &GrowthTrace) -> String {
    let mut s = serde_json::to_string(&to_doc(trace)).expect("trace serializes");
    s.push('\n');
    s
}

/// Indented JSON.
pub fn trace_to_json_pretty(trace: &GrowthTrace) -> String {
    let mut s = serde_json::to_string_pretty(&to_doc(trace)).expect("trace serializes");
    s.push('\n');
    s
}

/// Parses and replays a trace document.
pub fn trace_from_json(text: &str) -> Result<GrowthTrace> {
    let doc: TraceDoc = serde_json::from_str(text)?;
    let c = doc.config;
    let pairs = |edges: &[[usize; 2]]| edges.iter().map(|e| (e[0], e[1])).collect::<Vec<_>>();
    let initial_graph = Graph::new(c.initial_nodes, &pairs(&c.initial_edges))?;
    let policy = CollapsePolicy::from_name(&c.policy)
        .ok_or_else(|| Error::Invalid(format!("unknown policy {:?}", c.policy)))?;
    let propagator = Propagator::from_name(&c.propagator)
        .ok_or_else(|| Error::Invalid(format!("unknown propagator {:?}", c.propagator)))?;
    let config = RunConfig {
        walkers: c.walkers,
        tau: c.tau,
        steps: c.steps,
        seed: c.seed,
        initial_positions: c.initial_positions.into_iter().map(NodeId).collect(),
        initial_graph,
        policy,
        propagator,
    };
    config.validate()?;
    let final_nodes = config.initial_graph.node_count() + doc.events.len();
    let final_graph = Graph::new(final_nodes, &pairs(&doc.final_edges))?;
    let events = doc
        .events
        .into_iter()
        .map(|e| CollapseEvent {
            step: e.step,
            sampled_t: e.t,
            measured_nodes: e.measured.into_iter().map(NodeId).collect(),
            new_node: NodeId(e.new_node),
        })
        .collect();
    let trace = GrowthTrace { config, events, final_graph };
    let rebuilt = replay(&trace)?;
    if rebuilt != trace.final_graph {
        return Err(Error::Invalid("final_edges disagree with the replayed events".into()));
    }
    Ok(trace)
}
