#![allow(dead_code)]

use gmcp_core::{Graph, Instance, NodeId};
use proptest::prelude::*;

pub fn node(number: usize) -> NodeId {
    NodeId::from_number(number).unwrap()
}

/// Builds an instance from 1-based arc tuples, source 1 and sink n.
pub fn build(n: usize, arcs: &[(usize, usize, f64, f64)]) -> Instance {
    let mut g = Graph::new(n);
    for &(t, h, u, p) in arcs {
        g.add_arc(node(t), node(h), u, p).unwrap();
    }
    Instance::new(g, node(1), node(n)).unwrap()
}

/// Capacities mixing small integers (to provoke ties) with arbitrary reals.
pub fn capacity() -> impl Strategy<Value = f64> {
    prop_oneof![(0u32..6).prop_map(f64::from), 0.0f64..100.0, Just(1e12),]
}

pub fn loss() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(0.5), Just(0.25), 0.01f64..=1.0]
}

/// Random multigraph on 2..=max_n nodes; parallel arcs and cycles allowed.
pub fn instance(max_n: usize, max_m: usize) -> impl Strategy<Value = Instance> {
    (2..=max_n).prop_flat_map(move |n| {
        let arc =
            (1..=n, 1..=n, capacity(), loss()).prop_filter("no self-loops", |(t, h, _, _)| t != h);
        prop::collection::vec(arc, 0..=max_m).prop_map(move |arcs| build(n, &arcs))
    })
}

/// A simple chain 1 -> 2 -> ... with the given arc attributes.
pub fn chain(arcs: &[(f64, f64)]) -> Instance {
    let tuples: Vec<_> = arcs
        .iter()
        .enumerate()
        .map(|(i, &(u, p))| (i + 1, i + 2, u, p))
        .collect();
    build(arcs.len() + 1, &tuples)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}
