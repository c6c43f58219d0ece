//! Label-setting solver.
//!
//! `d(j)` is the largest flow known to reach `j` along a single path, with
//! `d(s)` unbounded. The node with the largest unvisited label is made
//! permanent and its arcs are relaxed with
//! `d(j) <- p_ij * min(u_ij, d(i))` whenever that is strictly larger. With
//! every loss factor at most one, labels only shrink along a path, so the
//! same argument as for Dijkstra's algorithm makes extracted labels final.
//!
//! Two extraction strategies are provided: a linear scan over all nodes
//! (`O(n^2)` overall) and a binary heap with lazy deletion
//! (`O(m log n)`). Both break ties toward the lowest node id and produce the
//! same labels, predecessors and paths.

use std::collections::BinaryHeap;

use crate::error::{PathError, SolveError};
use crate::eval::FlowValue;
use crate::graph::{ArcId, Instance, NodeId, Path, Solution, Status};
use crate::heap::Entry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LabelOptions {
    /// Stop as soon as the sink is extracted. Labels of other nodes may then
    /// be provisional.
    pub early_exit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pred {
    pub arc: ArcId,
    pub from: NodeId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelState {
    pub source: NodeId,
    pub d: Vec<FlowValue>,
    pub pred: Vec<Option<Pred>>,
    pub visited: Vec<bool>,
    /// Nodes in extraction order.
    pub order: Vec<NodeId>,
}

impl LabelState {
    fn new(instance: &Instance) -> Self {
        let n = instance.node_count();
        let mut d = vec![FlowValue::ZERO; n];
        d[instance.source.index()] = FlowValue::UNBOUNDED;
        LabelState {
            source: instance.source,
            d,
            pred: vec![None; n],
            visited: vec![false; n],
            order: Vec::new(),
        }
    }

    pub fn label(&self, node: NodeId) -> FlowValue {
        self.d[node.index()]
    }

    /// Makes `i` permanent and relaxes its outgoing arcs, reporting every
    /// improved label to `improved`.
    fn settle(
        &mut self,
        instance: &Instance,
        i: NodeId,
        mut improved: impl FnMut(NodeId, FlowValue),
    ) {
        self.visited[i.index()] = true;
        self.order.push(i);
        let di = self.d[i.index()];
        let g = &instance.graph;
        for &a in g.out_arcs(i) {
            let arc = g.arc(a);
            let j = arc.head.index();
            if self.visited[j] {
                continue;
            }
            let offer = di.through(arc.capacity, arc.loss);
            if self.d[j] < offer {
                self.d[j] = offer;
                self.pred[j] = Some(Pred { arc: a, from: i });
                improved(arc.head, offer);
            }
        }
    }
}

/// Runs the array-scan variant and returns the final labels. Each step scans
/// the list of reached, unsettled nodes for the largest label.
pub fn label_array(instance: &Instance, opts: LabelOptions) -> Result<LabelState, SolveError> {
    instance.check_solvable()?;
    let mut st = LabelState::new(instance);
    let mut listed = vec![false; instance.node_count()];
    let mut frontier = vec![instance.source];
    listed[instance.source.index()] = true;
    loop {
        let mut best: Option<usize> = None;
        for (k, &j) in frontier.iter().enumerate() {
            let dj = st.d[j.index()];
            let better = best.is_none_or(|b| {
                let db = st.d[frontier[b].index()];
                dj > db || (dj == db && j < frontier[b])
            });
            if better {
                best = Some(k);
            }
        }
        let Some(k) = best else { break };
        let i = frontier.swap_remove(k);
        st.settle(instance, i, |j, _| {
            if !listed[j.index()] {
                listed[j.index()] = true;
                frontier.push(j);
            }
        });
        if opts.early_exit && i == instance.sink {
            break;
        }
    }
    Ok(st)
}

/// Runs the heap variant and returns the final labels.
pub fn label_heap(instance: &Instance, opts: LabelOptions) -> Result<LabelState, SolveError> {
    instance.check_solvable()?;
    let mut st = LabelState::new(instance);
    let mut heap = BinaryHeap::new();
    heap.push(Entry {
        label: FlowValue::UNBOUNDED,
        node: instance.source,
    });
    while let Some(Entry { label, node: i }) = heap.pop() {
        if st.visited[i.index()] || label != st.d[i.index()] {
            continue;
        }
        st.settle(instance, i, |node, label| heap.push(Entry { label, node }));
        if opts.early_exit && i == instance.sink {
            break;
        }
    }
    Ok(st)
}

pub fn solve_alg2_array(instance: &Instance) -> Result<Solution, SolveError> {
    label_array(instance, LabelOptions::default()).map(|st| solution_from(instance, &st))
}

pub fn solve_alg2_heap(instance: &Instance) -> Result<Solution, SolveError> {
    label_heap(instance, LabelOptions::default()).map(|st| solution_from(instance, &st))
}

/// Builds the solution for the instance's sink from final labels.
pub fn solution_from(instance: &Instance, labels: &LabelState) -> Solution {
    let iterations = labels.order.len();
    match reconstruct_path(labels, instance.sink) {
        Ok(path) => Solution {
            path,
            value: labels.label(instance.sink).get(),
            iterations,
            status: Status::Optimal,
        },
        Err(_) => Solution::no_path(iterations),
    }
}

/// Follows predecessor arcs back from `sink`. Gives up after `n` steps so a
/// corrupted predecessor cycle cannot loop forever.
pub fn reconstruct_path(labels: &LabelState, sink: NodeId) -> Result<Path, PathError> {
    if labels.label(sink) <= FlowValue::ZERO {
        return Err(PathError::NoPath);
    }
    let limit = labels.d.len();
    let mut arcs = Vec::new();
    let mut at = sink;
    while at != labels.source {
        if arcs.len() >= limit {
            return Err(PathError::PredecessorCycle { steps: limit });
        }
        let Pred { arc, from } = labels.pred[at.index()].ok_or(PathError::NoPath)?;
        arcs.push(arc);
        at = from;
    }
    arcs.reverse();
    Ok(Path::new(arcs))
}

pub const DEFAULT_OPTIMALITY_TOL: f64 = 1e-12;

/// Arcs violating `d(j) >= p_ij * min(u_ij, d(i)) - tol`. An empty result
/// certifies the labels.
pub fn check_optimality(instance: &Instance, labels: &LabelState, tol: f64) -> Vec<ArcId> {
    instance
        .graph
        .arcs()
        .iter()
        .filter(|a| {
            let offer = labels.label(a.tail).through(a.capacity, a.loss).get();
            labels.label(a.head).get() < offer - tol
        })
        .map(|a| a.id)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn node(i: usize) -> NodeId {
        NodeId::from_number(i).unwrap()
    }

    fn build(n: usize, arcs: &[(usize, usize, f64, f64)]) -> Instance {
        let mut g = Graph::new(n);
        for &(t, h, u, p) in arcs {
            g.add_arc(node(t), node(h), u, p).unwrap();
        }
        Instance::new(g, node(1), node(n)).unwrap()
    }

    fn diamond() -> Instance {
        build(
            4,
            &[
                (1, 2, 10.0, 0.9),
                (2, 4, 100.0, 0.9),
                (1, 3, 100.0, 0.5),
                (3, 4, 100.0, 1.0),
            ],
        )
    }

    fn both(inst: &Instance) -> Solution {
        let a = solve_alg2_array(inst).unwrap();
        let h = solve_alg2_heap(inst).unwrap();
        assert_eq!(a, h);
        a
    }

    fn ids(path: &Path) -> Vec<usize> {
        path.arcs.iter().map(|a| a.number()).collect()
    }

    #[test]
    fn single_arc() {
        let sol = both(&build(2, &[(1, 2, 10.0, 0.5)]));
        assert_eq!(sol.value, 5.0);
        assert_eq!(ids(&sol.path), vec![1]);
    }

    #[test]
    fn diamond_prefers_lossless_branch() {
        let sol = both(&diamond());
        assert_eq!(sol.value, 50.0);
        assert_eq!(ids(&sol.path), vec![3, 4]);
        assert_eq!(sol.iterations, 4);
    }

    #[test]
    fn chain_labels() {
        let inst = build(3, &[(1, 2, 100.0, 1.0), (2, 3, 1.0, 1.0)]);
        let st = label_array(&inst, LabelOptions::default()).unwrap();
        assert_eq!(st.label(node(2)).get(), 100.0);
        assert_eq!(st.label(node(3)).get(), 1.0);
        assert_eq!(both(&inst).value, 1.0);
    }

    #[test]
    fn unreachable_sink() {
        let inst = build(3, &[(1, 2, 1.0, 1.0)]);
        let sol = both(&inst);
        assert_eq!(sol.status, Status::NoPath);
        assert_eq!(sol.value, 0.0);
        assert!(sol.path.is_empty());
    }

    #[test]
    fn ties_keep_first_predecessor() {
        // two parallel arcs offering the same amount
        let inst = build(2, &[(1, 2, 4.0, 0.5), (1, 2, 2.0, 1.0)]);
        assert_eq!(ids(&both(&inst).path), vec![1]);
    }

    #[test]
    fn extracted_labels_do_not_increase() {
        let st = label_heap(&diamond(), LabelOptions::default()).unwrap();
        let seq: Vec<_> = st.order.iter().map(|&v| st.label(v)).collect();
        assert!(seq.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn early_exit_still_finds_sink_value() {
        let inst = diamond();
        for st in [
            label_array(&inst, LabelOptions { early_exit: true }).unwrap(),
            label_heap(&inst, LabelOptions { early_exit: true }).unwrap(),
        ] {
            assert_eq!(st.label(inst.sink).get(), 50.0);
            assert_eq!(*st.order.last().unwrap(), inst.sink);
        }
    }

    #[test]
    fn optimality_checker() {
        let inst = build(2, &[(1, 2, 10.0, 0.5)]);
        let mut st = label_array(&inst, LabelOptions::default()).unwrap();
        assert!(check_optimality(&inst, &st, DEFAULT_OPTIMALITY_TOL).is_empty());
        st.d[1] = FlowValue::new(4.0);
        assert_eq!(
            check_optimality(&inst, &st, DEFAULT_OPTIMALITY_TOL),
            vec![ArcId::from_index(0)]
        );

        let empty = Instance::new(Graph::new(2), node(1), node(2)).unwrap();
        let st = label_array(&empty, LabelOptions::default()).unwrap();
        assert!(check_optimality(&empty, &st, DEFAULT_OPTIMALITY_TOL).is_empty());
    }

    #[test]
    fn reconstruction() {
        let inst = diamond();
        let st = label_array(&inst, LabelOptions::default()).unwrap();
        assert_eq!(ids(&reconstruct_path(&st, inst.sink).unwrap()), vec![3, 4]);

        let mut bad = st.clone();
        // 4 <- 3 <- 4 ...
        bad.pred[2] = Some(Pred {
            arc: ArcId::from_index(3),
            from: node(4),
        });
        assert_eq!(
            reconstruct_path(&bad, inst.sink),
            Err(PathError::PredecessorCycle { steps: 4 })
        );

        let inst = build(3, &[(1, 2, 1.0, 1.0)]);
        let st = label_array(&inst, LabelOptions::default()).unwrap();
        assert_eq!(reconstruct_path(&st, inst.sink), Err(PathError::NoPath));
    }
}
