//! Path evaluation: deliverable flow, bottleneck and reliability.
//!
//! All solvers compute flow along a path with the same forward recurrence
//! `f <- loss * min(capacity, f)` starting from an unbounded supply, so a
//! solver's reported value and [`deliverable_flow`] of its path agree bit for
//! bit.

use std::cmp::Ordering;
use std::fmt;

use crate::error::PathError;
use crate::graph::{Arc, Graph, Instance, Path};

/// Nonnegative flow amount, or the unbounded supply at the source. Negative
/// zero is stored as zero so the total order matches numeric comparison.
#[derive(Debug, Clone, Copy)]
pub struct FlowValue(f64);

impl FlowValue {
    pub const ZERO: FlowValue = FlowValue(0.0);
    pub const UNBOUNDED: FlowValue = FlowValue(f64::INFINITY);

    pub fn new(value: f64) -> Self {
        debug_assert!(value >= 0.0, "flow values are nonnegative, got {value}");
        FlowValue(value + 0.0)
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_unbounded(self) -> bool {
        self.0 == f64::INFINITY
    }

    /// Flow arriving at the head of an arc when `self` is available at its
    /// tail.
    #[inline]
    pub fn through(self, capacity: f64, loss: f64) -> FlowValue {
        FlowValue(loss * capacity.min(self.0) + 0.0)
    }

    /// Whether an arc of this capacity is the binding constraint when `self`
    /// is available at its tail.
    #[inline]
    pub fn saturates(self, capacity: f64) -> bool {
        capacity <= self.0
    }
}

impl PartialEq for FlowValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for FlowValue {}

impl PartialOrd for FlowValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FlowValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for FlowValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unbounded() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationReport {
    pub delivered: FlowValue,
    /// 1-based position of the last saturated arc.
    pub saturated_index: usize,
}

/// Evaluates a sequence of `(capacity, loss)` pairs. Returns `None` when the
/// sequence is empty.
///
/// The delivered amount equals the minimum over positions `j` of
/// `u_j * p_j * ... * p_k`. Ties go to the largest position, i.e. the
/// saturated arc nearest the end.
pub fn saturation<I>(arcs: I) -> Option<SaturationReport>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut flow = FlowValue::UNBOUNDED;
    let mut saturated_index = 0;
    for (pos, (capacity, loss)) in arcs.into_iter().enumerate() {
        if flow.saturates(capacity) {
            saturated_index = pos + 1;
        }
        flow = flow.through(capacity, loss);
    }
    (saturated_index > 0).then_some(SaturationReport {
        delivered: flow,
        saturated_index,
    })
}

/// Checks that `path` is a nonempty chain of known arcs.
pub fn check_path(graph: &Graph, path: &Path) -> Result<(), PathError> {
    let mut prev: Option<&Arc> = None;
    for &id in &path.arcs {
        let arc = graph
            .get_arc(id)
            .ok_or(PathError::UnknownArc(id.number()))?;
        if let Some(p) = prev.filter(|p| p.head != arc.tail) {
            return Err(PathError::Broken {
                prev: p.id.number(),
                next: arc.id.number(),
            });
        }
        prev = Some(arc);
    }
    match prev {
        Some(_) => Ok(()),
        None => Err(PathError::Empty),
    }
}

/// Like [`check_path`], and additionally requires the path to run from the
/// instance's source to its sink.
pub fn check_st_path(instance: &Instance, path: &Path) -> Result<(), PathError> {
    check_path(&instance.graph, path)?;
    let g = &instance.graph;
    let first = g.arc(path.arcs[0]).tail;
    let last = g.arc(*path.arcs.last().unwrap()).head;
    if first != instance.source {
        return Err(PathError::WrongStart {
            expected: instance.source.number(),
            found: first.number(),
        });
    }
    if last != instance.sink {
        return Err(PathError::WrongEnd {
            expected: instance.sink.number(),
            found: last.number(),
        });
    }
    Ok(())
}

/// Maximum flow that reaches the end of `path`, and the last arc it saturates.
pub fn deliverable_flow(instance: &Instance, path: &Path) -> Result<SaturationReport, PathError> {
    let g = &instance.graph;
    check_path(g, path)?;
    Ok(saturation(path.arcs.iter().map(|&a| {
        let arc = g.arc(a);
        (arc.capacity, arc.loss)
    }))
    .expect("checked path is nonempty"))
}

/// Smallest capacity on the path (the loss-free objective).
pub fn path_bottleneck(instance: &Instance, path: &Path) -> Result<FlowValue, PathError> {
    let g = &instance.graph;
    check_path(g, path)?;
    Ok(path
        .arcs
        .iter()
        .map(|&a| FlowValue::new(g.arc(a).capacity))
        .min()
        .expect("checked path is nonempty"))
}

/// Product of loss factors along the path (the capacity-free objective).
pub fn path_reliability(instance: &Instance, path: &Path) -> Result<f64, PathError> {
    let g = &instance.graph;
    check_path(g, path)?;
    Ok(path.arcs.iter().map(|&a| g.arc(a).loss).product())
}

/// Replaces each capacity by `min(u, u / p)`, so that neither the flow
/// entering nor the flow leaving an arc with `p > 1` exceeds `u`.
///
/// Arcs with `p <= 1` are untouched. The returned graph is marked as
/// normalized and further calls leave it unchanged.
pub fn normalize_capacities(graph: &Graph) -> Graph {
    let mut out = graph.clone();
    if graph.is_normalized() {
        return out;
    }
    for arc in out.arcs_mut() {
        if arc.loss > 1.0 {
            arc.capacity = arc.capacity.min(arc.capacity / arc.loss);
        }
    }
    out.mark_normalized();
    out
}
