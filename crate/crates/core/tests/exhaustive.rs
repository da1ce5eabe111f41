use std::collections::BTreeSet;

use trisect::explorer::{bfs_layers, nodes_up_to, verify_properties, ExploreOptions, MoveGraphNode};
use trisect::moves::{apply_stabilization, legal_moves};

#[test]
fn verify_up_to_24() {
    let report = verify_properties(24, &ExploreOptions { relabel_quotient: false, threads: 4 });
    for p in &report.properties {
        assert!(p.pass, "{} failed: {:?}", p.property, p.counterexamples);
    }
    assert_eq!(report.slack, 12);
    assert_eq!(report, verify_properties(24, &ExploreOptions::default()));
}

#[test]
fn labeled_moves_project_onto_graph_edges() {
    for n in nodes_up_to(16) {
        let s = n.to_state("x");
        let labeled: BTreeSet<_> = legal_moves(&s)
            .iter()
            .map(|m| MoveGraphNode::from_state(&apply_stabilization(&s, m).unwrap()))
            .collect();
        let graph: BTreeSet<_> = n.successors().into_iter().map(|(_, m)| m).collect();
        assert_eq!(labeled, graph, "{n}");
    }
}

#[test]
fn layers_are_level_sets_of_sum_h() {
    let layers = bfs_layers(MoveGraphNode::new(0, 0, 1, 2), 20, &ExploreOptions::default());
    assert_eq!(layers.len(), 16);
    assert!(layers.iter().all(|l| !l.is_empty()));
    for (k, layer) in layers.iter().enumerate() {
        assert!(layer.iter().all(|n| n.sum_h() == 5 + k as u32));
    }
}
