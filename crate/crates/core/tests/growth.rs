use qwgrow_core::growth::{grow, replay, CollapsePolicy};
use qwgrow_core::walk::Propagator;
use qwgrow_core::{Error, NodeId, RunConfig};

#[test]
fn single_walker_grows_trees() {
    for (i, tau) in [0.001, 0.05, 0.5, 2.0, 10.0].into_iter().enumerate() {
        for seed in 0..8 {
            let trace = grow(&RunConfig::new(1, tau, 100, 100 * i as u64 + seed)).unwrap();
            let g = &trace.final_graph;
            assert_eq!((g.node_count(), g.edge_count()), (101, 100));
            assert!(g.is_tree());
        }
    }
}

#[test]
fn multi_walker_edge_bounds() {
    for k in 2..=4 {
        let trace = grow(&RunConfig::new(k, 0.2, 60, k as u64)).unwrap();
        let g = &trace.final_graph;
        assert!(g.is_connected());
        assert!((60..=60 * k).contains(&g.edge_count()));
        for ev in &trace.events {
            assert_eq!(ev.measured_nodes.len(), k);
        }
    }
}

#[test]
fn deterministic_and_replayable() {
    for policy in [CollapsePolicy::MeasuredNode, CollapsePolicy::NewNode] {
        let mut cfg = RunConfig::new(2, 0.4, 50, 31);
        cfg.policy = policy;
        let a = grow(&cfg).unwrap();
        let b = grow(&cfg).unwrap();
        assert_eq!(a.events, b.events);
        assert_eq!(a.final_graph, b.final_graph);
        assert_eq!(replay(&a).unwrap(), a.final_graph);
        let cheb = grow(&cfg.clone().with_propagator(Propagator::Chebyshev)).unwrap();
        assert_eq!(cheb.events.iter().map(|e| &e.measured_nodes).collect::<Vec<_>>(),
                   a.events.iter().map(|e| &e.measured_nodes).collect::<Vec<_>>());
    }
}

#[test]
fn events_are_consistent() {
    let trace = grow(&RunConfig::new(1, 0.7, 40, 4)).unwrap();
    for (i, ev) in trace.events.iter().enumerate() {
        assert_eq!(ev.step, i);
        assert_eq!(ev.new_node, NodeId(i + 1));
        assert!(ev.sampled_t >= 0.0);
        assert!(ev.measured_nodes[0].index() <= i);
    }
}

#[test]
fn corrupted_trace_rejected() {
    let mut trace = grow(&RunConfig::new(1, 0.7, 10, 4)).unwrap();
    trace.events[3].measured_nodes[0] = NodeId(50);
    assert!(matches!(replay(&trace), Err(Error::Replay { step: 3, .. })));
}

#[test]
fn invalid_configs_rejected() {
    assert!(grow(&RunConfig::new(0, 0.5, 10, 0)).is_err());
    assert!(grow(&RunConfig::new(1, 0.0, 10, 0)).is_err());
    assert!(grow(&RunConfig::new(1, f64::NAN, 10, 0)).is_err());
    let mut cfg = RunConfig::new(2, 0.5, 10, 0);
    cfg.initial_positions = vec![NodeId(0), NodeId(3)];
    assert!(grow(&cfg).is_err());
}
