//! Iterative solver built on repeated maximum-reliability searches.
//!
//! Each round finds the source-sink path maximizing the product of effective
//! arc weights: `u * p` for arcs leaving the source, `p` for all others. The
//! product is the flow the path would deliver if its first arc were the
//! bottleneck. When some later arc saturates first, that arc is removed and
//! replaced by an artificial source arc into its head whose weight is the
//! flow actually arriving there. The loop ends once the first arc of the
//! found path is its last saturated arc, at which point the assumed and the
//! actual values coincide.
//!
//! Searches multiply weights directly instead of summing `-ln` lengths; the
//! two orders are the same and products keep the reported value identical to
//! [`crate::deliverable_flow`] of the returned path.

use std::collections::BinaryHeap;

use crate::error::SolveError;
use crate::eval::{self, FlowValue};
use crate::graph::{ArcId, Graph, Instance, NodeId, Path, Solution, Status};
use crate::heap::Entry;

/// Replacement for a removed saturated arc, running from the source to the
/// removed arc's head.
#[derive(Debug, Clone, PartialEq)]
pub struct ArtificialArc {
    pub head: NodeId,
    /// Capacity and loss of the arc it replaces.
    pub capacity: f64,
    pub loss: f64,
    /// Flow arriving at `head` through the replaced arc with unlimited
    /// upstream supply. Used as the search weight.
    pub factor: f64,
    /// Original arcs from the source through the replaced arc.
    pub prefix: Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WorkingArc {
    Original(ArcId),
    Artificial(usize),
}

/// A path in the working network together with its assumed value, the
/// product of its effective weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkingPath {
    pub arcs: Vec<WorkingArc>,
    pub assumed: FlowValue,
}

/// Mutable overlay over an instance: removed arcs and artificial arcs.
#[derive(Debug, Clone)]
pub struct WorkingNetwork<'a> {
    base: &'a Instance,
    removed: Vec<bool>,
    artificials: Vec<ArtificialArc>,
    best_into: Vec<Option<usize>>,
}

impl<'a> WorkingNetwork<'a> {
    pub fn new(base: &'a Instance) -> Self {
        WorkingNetwork {
            base,
            removed: vec![false; base.arc_count()],
            artificials: Vec::new(),
            best_into: vec![None; base.node_count()],
        }
    }

    pub fn base(&self) -> &'a Instance {
        self.base
    }

    pub fn is_removed(&self, arc: ArcId) -> bool {
        self.removed[arc.index()]
    }

    pub fn removed_count(&self) -> usize {
        self.removed.iter().filter(|&&r| r).count()
    }

    pub fn artificials(&self) -> &[ArtificialArc] {
        &self.artificials
    }

    fn graph(&self) -> &'a Graph {
        &self.base.graph
    }

    pub fn remove(&mut self, arc: ArcId) {
        self.removed[arc.index()] = true;
    }

    /// Adds an artificial arc unless one into the same head already carries
    /// at least the same factor, or the factor is zero. Returns whether the
    /// arc was added.
    pub fn add_artificial(&mut self, arc: ArtificialArc) -> bool {
        if arc.factor <= 0.0 {
            return false;
        }
        let head = arc.head.index();
        if let Some(i) = self.best_into[head] {
            if self.artificials[i].factor >= arc.factor {
                return false;
            }
        }
        self.best_into[head] = Some(self.artificials.len());
        self.artificials.push(arc);
        true
    }

    /// Capacity and loss of a working arc.
    pub fn capacity_loss(&self, arc: WorkingArc) -> (f64, f64) {
        match arc {
            WorkingArc::Original(id) => {
                let a = self.graph().arc(id);
                (a.capacity, a.loss)
            }
            WorkingArc::Artificial(i) => {
                let a = &self.artificials[i];
                (a.capacity, a.loss)
            }
        }
    }

    pub fn head(&self, arc: WorkingArc) -> NodeId {
        match arc {
            WorkingArc::Original(id) => self.graph().arc(id).head,
            WorkingArc::Artificial(i) => self.artificials[i].head,
        }
    }

    pub fn tail(&self, arc: WorkingArc) -> NodeId {
        match arc {
            WorkingArc::Original(id) => self.graph().arc(id).tail,
            WorkingArc::Artificial(_) => self.base.source,
        }
    }

    /// Search weight of an arc leaving the source.
    fn source_weight(&self, arc: WorkingArc) -> FlowValue {
        match arc {
            WorkingArc::Original(_) => {
                let (u, p) = self.capacity_loss(arc);
                FlowValue::UNBOUNDED.through(u, p)
            }
            WorkingArc::Artificial(i) => FlowValue::new(self.artificials[i].factor),
        }
    }

    /// Active arcs leaving the source, originals first.
    fn source_arcs(&self) -> impl Iterator<Item = WorkingArc> + '_ {
        let s = self.base.source;
        self.graph()
            .out_arcs(s)
            .iter()
            .filter(|a| !self.is_removed(**a))
            .map(|&a| WorkingArc::Original(a))
            .chain((0..self.artificials.len()).map(WorkingArc::Artificial))
    }

    /// `-ln` of every active arc's effective weight, the additive lengths a
    /// shortest-path formulation would use. Arcs of zero weight are left out.
    pub fn log_lengths(&self) -> Vec<(WorkingArc, f64)> {
        let s = self.base.source;
        let mut out: Vec<(WorkingArc, f64)> = self
            .source_arcs()
            .map(|a| (a, self.source_weight(a).get()))
            .collect();
        for a in self.graph().arcs() {
            if a.tail != s && !self.is_removed(a.id) {
                out.push((WorkingArc::Original(a.id), a.loss));
            }
        }
        out.retain(|&(_, w)| w > 0.0);
        out.into_iter().map(|(a, w)| (a, -w.ln())).collect()
    }

    /// Path maximizing the product of effective weights, or `None` when the
    /// sink cannot be reached over arcs of positive weight.
    pub fn max_reliability_path(&self) -> Option<WorkingPath> {
        let g = self.graph();
        let n = g.node_count();
        let (s, t) = (self.base.source, self.base.sink);
        let mut label = vec![FlowValue::ZERO; n];
        let mut pred: Vec<Option<WorkingArc>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();

        done[s.index()] = true;
        for arc in self.source_arcs() {
            let w = self.source_weight(arc);
            let j = self.head(arc).index();
            if w > label[j] {
                label[j] = w;
                pred[j] = Some(arc);
                heap.push(Entry {
                    label: w,
                    node: NodeId::from_index(j),
                });
            }
        }

        while let Some(Entry { label: l, node: i }) = heap.pop() {
            if done[i.index()] || l != label[i.index()] {
                continue;
            }
            done[i.index()] = true;
            if i == t {
                break;
            }
            for &a in g.out_arcs(i) {
                if self.is_removed(a) {
                    continue;
                }
                let arc = g.arc(a);
                let j = arc.head.index();
                if done[j] {
                    continue;
                }
                let w = FlowValue::new(l.get() * arc.loss);
                if w > label[j] {
                    label[j] = w;
                    pred[j] = Some(WorkingArc::Original(a));
                    heap.push(Entry {
                        label: w,
                        node: arc.head,
                    });
                }
            }
        }

        if !done[t.index()] {
            return None;
        }
        let mut arcs = Vec::new();
        let mut at = t;
        while at != s {
            let arc = pred[at.index()].expect("settled node has a predecessor");
            arcs.push(arc);
            at = self.tail(arc);
        }
        arcs.reverse();
        Some(WorkingPath {
            arcs,
            assumed: label[t.index()],
        })
    }

    /// Replaces a leading artificial arc by its stored prefix.
    pub fn expand(&self, path: &WorkingPath) -> Vec<ArcId> {
        let mut out = Vec::with_capacity(path.arcs.len());
        for &arc in &path.arcs {
            match arc {
                WorkingArc::Original(id) => out.push(id),
                WorkingArc::Artificial(i) => {
                    out.extend_from_slice(&self.artificials[i].prefix.arcs)
                }
            }
        }
        out
    }
}

/// Per-round diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Round {
    pub assumed: FlowValue,
    pub actual: FlowValue,
    /// 1-based position of the last saturated arc in the working path.
    pub saturated_index: usize,
    pub path_len: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub rounds: Vec<Round>,
    pub removed: usize,
    pub artificials: usize,
}

pub fn solve_alg1(instance: &Instance) -> Result<Solution, SolveError> {
    solve_alg1_traced(instance).map(|(sol, _)| sol)
}

/// Runs the iterative solver and also returns per-round diagnostics.
///
/// `Solution::iterations` counts rounds whose search found a path, which is
/// at most the number of arcs: every round but the last removes a distinct
/// arc that does not leave the source.
pub fn solve_alg1_traced(instance: &Instance) -> Result<(Solution, Trace), SolveError> {
    instance.check_solvable()?;
    let mut net = WorkingNetwork::new(instance);
    let mut rounds = Vec::new();

    let solution = loop {
        let Some(path) = net.max_reliability_path() else {
            break Solution::no_path(rounds.len());
        };
        let mut flow = FlowValue::UNBOUNDED;
        let mut sat = (0, FlowValue::ZERO);
        for (pos, &arc) in path.arcs.iter().enumerate() {
            let (u, p) = net.capacity_loss(arc);
            let saturated = flow.saturates(u);
            flow = flow.through(u, p);
            if saturated {
                sat = (pos + 1, flow);
            }
        }
        let (sat_index, flow_at_head) = sat;
        rounds.push(Round {
            assumed: path.assumed,
            actual: flow,
            saturated_index: sat_index,
            path_len: path.arcs.len(),
        });

        let expanded = net.expand(&path);
        if sat_index == 1 {
            break finish(instance, expanded, rounds.len());
        }
        // Past the first position every arc is original.

        let WorkingArc::Original(removed) = path.arcs[sat_index - 1] else {
            unreachable!("artificial arc at position {sat_index}");
        };
        let suffix = path.arcs.len() - sat_index;
        let mut prefix = expanded;
        prefix.truncate(prefix.len() - suffix);
        let prefix = Path::new(erase_loops(&instance.graph, instance.source, prefix));
        let arc = instance.graph.arc(removed);
        net.remove(removed);
        net.add_artificial(ArtificialArc {
            head: arc.head,
            capacity: arc.capacity,
            loss: arc.loss,
            factor: flow_at_head.get(),
            prefix,
        });
    };

    let trace = Trace {
        rounds,
        removed: net.removed_count(),
        artificials: net.artificials().len(),
    };
    Ok((solution, trace))
}

fn finish(instance: &Instance, walk: Vec<ArcId>, iterations: usize) -> Solution {
    let path = Path::new(erase_loops(&instance.graph, instance.source, walk));
    let value = eval::deliverable_flow(instance, &path)
        .expect("solver paths are valid")
        .delivered
        .get();
    if value > 0.0 {
        Solution {
            path,
            value,
            iterations,
            status: Status::Optimal,
        }
    } else {
        Solution::no_path(iterations)
    }
}

/// Cuts every cycle out of a walk starting at `start`.
///
/// A stored prefix and the rest of the final path can meet at a node when
/// several paths tie. Dropping the cycle never lowers the delivered flow,
/// since flow only shrinks along arcs with loss at most one.
pub fn erase_loops(graph: &Graph, start: NodeId, walk: Vec<ArcId>) -> Vec<ArcId> {
    let mut position = vec![usize::MAX; graph.node_count()];
    position[start.index()] = 0;
    let mut nodes = vec![start];
    let mut arcs: Vec<ArcId> = Vec::with_capacity(walk.len());
    for a in walk {
        let head = graph.arc(a).head;
        let seen = position[head.index()];
        if seen != usize::MAX {
            for dropped in nodes.drain(seen + 1..) {
                position[dropped.index()] = usize::MAX;
            }
            arcs.truncate(seen);
        } else {
            position[head.index()] = nodes.len();
            nodes.push(head);
            arcs.push(a);
        }
    }
    arcs
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn ids(path: &Path) -> Vec<usize> {
        path.arcs.iter().map(|a| a.number()).collect()
    }

    // s=1, a=2, b=3, t=4
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

    #[test]
    fn search_picks_larger_product() {
        let inst = diamond();
        let net = WorkingNetwork::new(&inst);
        let p = net.max_reliability_path().unwrap();
        let arcs: Vec<_> = net.expand(&p).iter().map(|a| a.number()).collect();
        assert_eq!(arcs, vec![3, 4]);
        assert_eq!(p.assumed.get(), 50.0);
    }

    #[test]
    fn search_single_arc_and_unreachable() {
        let inst = build(2, &[(1, 2, 10.0, 0.5)]);
        let p = WorkingNetwork::new(&inst).max_reliability_path().unwrap();
        assert_eq!(p.assumed.get(), 5.0);
        let inst = build(3, &[(1, 2, 10.0, 0.5), (3, 2, 1.0, 1.0)]);
        assert!(WorkingNetwork::new(&inst).max_reliability_path().is_none());
    }

    #[test]
    fn chain_takes_two_rounds() {
        let inst = build(3, &[(1, 2, 100.0, 1.0), (2, 3, 1.0, 1.0)]);
        let (sol, trace) = solve_alg1_traced(&inst).unwrap();
        assert_eq!(sol.value, 1.0);
        assert_eq!(ids(&sol.path), vec![1, 2]);
        assert_eq!(sol.iterations, 2);
        assert_eq!(trace.rounds[0].assumed.get(), 100.0);
        assert_eq!(trace.rounds[0].saturated_index, 2);
        assert_eq!(trace.removed, 1);
        assert_eq!(trace.artificials, 1);
    }

    #[test]
    fn diamond_one_round() {
        let sol = solve_alg1(&diamond()).unwrap();
        assert_eq!(sol.value, 50.0);
        assert_eq!(ids(&sol.path), vec![3, 4]);
        assert_eq!(sol.iterations, 1);
    }

    #[test]
    fn single_arc() {
        let sol = solve_alg1(&build(2, &[(1, 2, 10.0, 0.5)])).unwrap();
        assert_eq!(
            (sol.value, sol.iterations, sol.status),
            (5.0, 1, Status::Optimal)
        );
    }

    #[test]
    fn unreachable_sink() {
        let sol = solve_alg1(&build(3, &[(1, 2, 1.0, 1.0)])).unwrap();
        assert_eq!(sol, Solution::no_path(0));
    }

    #[test]
    fn zero_capacity_everywhere_is_no_path() {
        let sol = solve_alg1(&build(3, &[(1, 2, 5.0, 1.0), (2, 3, 0.0, 1.0)])).unwrap();
        assert_eq!(sol.status, Status::NoPath);
        assert_eq!(sol.value, 0.0);
        let sol = solve_alg1(&build(2, &[(1, 2, 0.0, 1.0)])).unwrap();
        assert_eq!(sol.status, Status::NoPath);
    }

    #[test]
    fn rejects_gain_arcs() {
        let err = solve_alg1(&build(2, &[(1, 2, 1.0, 1.5)])).unwrap_err();
        assert!(matches!(err, SolveError::LossOutOfRange { arc: 1, .. }));
    }

    #[test]
    fn log_lengths_follow_effective_weights() {
        let inst = diamond();
        let net = WorkingNetwork::new(&inst);
        let lens = net.log_lengths();
        let get = |n: usize| {
            lens.iter()
                .find(|(a, _)| *a == WorkingArc::Original(ArcId::from_number(n).unwrap()))
                .unwrap()
                .1
        };
        assert!((get(1) - -(9.0f64).ln()).abs() < 1e-15);
        assert!((get(2) - -(0.9f64).ln()).abs() < 1e-15);
        assert_eq!(get(4), 0.0);
    }

    #[test]
    fn dominated_artificial_is_skipped() {
        let inst = diamond();
        let mut net = WorkingNetwork::new(&inst);
        let art = |factor| ArtificialArc {
            head: node(4),
            capacity: 1.0,
            loss: 1.0,
            factor,
            prefix: Path::empty(),
        };
        assert!(net.add_artificial(art(3.0)));
        assert!(!net.add_artificial(art(2.0)));
        assert!(!net.add_artificial(art(0.0)));
        assert!(net.add_artificial(art(4.0)));
        assert_eq!(net.artificials().len(), 2);
    }

    #[test]
    fn loop_erasure() {
        // 1->2->3->2->4 becomes 1->2->4
        let inst = build(
            4,
            &[
                (1, 2, 1.0, 1.0),
                (2, 3, 1.0, 1.0),
                (3, 2, 1.0, 1.0),
                (2, 4, 1.0, 1.0),
            ],
        );
        let walk: Vec<ArcId> = (0..4).map(ArcId::from_index).collect();
        let out = erase_loops(&inst.graph, node(1), walk);
        assert_eq!(out, vec![ArcId::from_index(0), ArcId::from_index(3)]);
    }
}
