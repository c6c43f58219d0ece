//! Directed multigraph with capacitated, lossy arcs.
//!
//! Nodes and arcs are stored 0-based internally. Every textual surface
//! (instance files, LP export, CLI output) uses the 1-based numbers returned
//! by [`NodeId::number`] and [`ArcId::number`].

use std::fmt;

use crate::error::{GraphError, SolveError};

/// A node of a [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn from_index(index: usize) -> Self {
        NodeId(index as u32)
    }

    /// Builds a node id from its 1-based file number. Returns `None` for 0.
    pub fn from_number(number: usize) -> Option<Self> {
        number.checked_sub(1).map(Self::from_index)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// 1-based number used in all I/O.
    #[inline]
    pub fn number(self) -> usize {
        self.index() + 1
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Stable arc identifier. Arcs are numbered in insertion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(u32);

impl ArcId {
    pub fn from_index(index: usize) -> Self {
        ArcId(index as u32)
    }

    pub fn from_number(number: usize) -> Option<Self> {
        number.checked_sub(1).map(Self::from_index)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn number(self) -> usize {
        self.index() + 1
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub id: ArcId,
    pub tail: NodeId,
    pub head: NodeId,
    /// Maximum flow that may enter the arc.
    pub capacity: f64,
    /// Fraction of the entering flow that reaches the head.
    pub loss: f64,
    /// Always `false` for arcs of a [`Graph`]; kept so that solver overlays
    /// can describe their own arcs with the same type.
    pub artificial: bool,
}

/// Directed multigraph. Parallel arcs are allowed and told apart by id.
#[derive(Debug, Clone)]
pub struct Graph {
    arcs: Vec<Arc>,
    out: Vec<Vec<ArcId>>,
    // Set by capacity normalization, which must run at most once.
    normalized: bool,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.arcs == other.arcs && self.out == other.out
    }
}

impl Graph {
    pub fn new(node_count: usize) -> Self {
        Graph {
            arcs: Vec::new(),
            out: vec![Vec::new(); node_count],
            normalized: false,
        }
    }

    /// Appends an arc and returns its id.
    ///
    /// Only structural problems are rejected here. Capacity and loss values
    /// are checked by [`crate::validate`] and by the file parser.
    pub fn add_arc(
        &mut self,
        tail: NodeId,
        head: NodeId,
        capacity: f64,
        loss: f64,
    ) -> Result<ArcId, GraphError> {
        for node in [tail, head] {
            if node.index() >= self.node_count() {
                return Err(GraphError::NodeOutOfRange {
                    node: node.number(),
                    n: self.node_count(),
                });
            }
        }
        if tail == head {
            return Err(GraphError::SelfLoop {
                node: tail.number(),
            });
        }
        let id = ArcId::from_index(self.arcs.len());
        self.arcs.push(Arc {
            id,
            tail,
            head,
            capacity,
            loss,
            artificial: false,
        });
        self.out[tail.index()].push(id);
        Ok(id)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    #[inline]
    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id.index()]
    }

    pub fn get_arc(&self, id: ArcId) -> Option<&Arc> {
        self.arcs.get(id.index())
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Outgoing arcs of `node`, in increasing id order.
    #[inline]
    pub fn out_arcs(&self, node: NodeId) -> &[ArcId] {
        &self.out[node.index()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count()).map(NodeId::from_index)
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node.index() < self.node_count()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub(crate) fn mark_normalized(&mut self) {
        self.normalized = true;
    }

    pub(crate) fn arcs_mut(&mut self) -> impl Iterator<Item = &mut Arc> {
        self.arcs.iter_mut()
    }

    /// Copy of the graph with every capacity multiplied by `factor`.
    pub fn scale_capacities(&self, factor: f64) -> Graph {
        let mut scaled = self.clone();
        for arc in scaled.arcs_mut() {
            arc.capacity *= factor;
        }
        scaled
    }
}

/// A graph together with its designated source and sink.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: Graph,
    pub source: NodeId,
    pub sink: NodeId,
}

impl Instance {
    pub fn new(graph: Graph, source: NodeId, sink: NodeId) -> Result<Self, GraphError> {
        for node in [source, sink] {
            if !graph.contains(node) {
                return Err(GraphError::NodeOutOfRange {
                    node: node.number(),
                    n: graph.node_count(),
                });
            }
        }
        if source == sink {
            return Err(GraphError::SourceIsSink {
                node: source.number(),
            });
        }
        Ok(Instance {
            graph,
            source,
            sink,
        })
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn arc_count(&self) -> usize {
        self.graph.arc_count()
    }

    /// Solver precondition: every loss factor in `(0, 1]` and every capacity
    /// a finite nonnegative number.
    pub fn check_solvable(&self) -> Result<(), SolveError> {
        for a in self.graph.arcs() {
            if !(a.loss > 0.0 && a.loss <= 1.0) {
                return Err(SolveError::LossOutOfRange {
                    arc: a.id.number(),
                    loss: a.loss,
                });
            }
            if !(a.capacity >= 0.0 && a.capacity.is_finite()) {
                return Err(SolveError::InvalidCapacity {
                    arc: a.id.number(),
                    capacity: a.capacity,
                });
            }
        }
        Ok(())
    }

    /// Copy with normalized capacities, plus the number of arcs that changed.
    pub fn normalized(&self) -> (Instance, usize) {
        let changed = self.graph.arcs().iter().filter(|a| a.loss > 1.0).count();
        let graph = crate::eval::normalize_capacities(&self.graph);
        (
            Instance {
                graph,
                source: self.source,
                sink: self.sink,
            },
            changed,
        )
    }

    pub fn with_graph(&self, graph: Graph) -> Instance {
        Instance {
            graph,
            source: self.source,
            sink: self.sink,
        }
    }
}

/// Ordered arc sequence. Paths always name arcs by id, never by endpoint pair.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Path {
    pub arcs: Vec<ArcId>,
}

impl Path {
    pub fn new(arcs: Vec<ArcId>) -> Self {
        Path { arcs }
    }

    pub fn empty() -> Self {
        Path::default()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Node sequence visited by the path; empty for an empty path.
    pub fn nodes(&self, graph: &Graph) -> Vec<NodeId> {
        let mut nodes = Vec::with_capacity(self.arcs.len() + 1);
        if let Some(&first) = self.arcs.first() {
            nodes.push(graph.arc(first).tail);
        }
        nodes.extend(self.arcs.iter().map(|&a| graph.arc(a).head));
        nodes
    }
}

impl FromIterator<ArcId> for Path {
    fn from_iter<I: IntoIterator<Item = ArcId>>(iter: I) -> Self {
        Path::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    NoPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Original arc ids only.
    pub path: Path,
    /// Flow delivered at the sink.
    pub value: f64,
    /// Outer loops for the iterative solver, extracted nodes for the
    /// label-setting solvers.
    pub iterations: usize,
    pub status: Status,
}

impl Solution {
    pub fn no_path(iterations: usize) -> Self {
        Solution {
            path: Path::empty(),
            value: 0.0,
            iterations,
            status: Status::NoPath,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(i: usize) -> NodeId {
        NodeId::from_number(i).unwrap()
    }

    #[test]
    fn ids_are_one_based_in_io() {
        assert_eq!(n(1).index(), 0);
        assert_eq!(n(3).to_string(), "3");
        assert_eq!(ArcId::from_index(0).to_string(), "1");
        assert!(NodeId::from_number(0).is_none());
    }

    #[test]
    fn parallel_arcs_keep_distinct_ids() {
        let mut g = Graph::new(2);
        let a = g.add_arc(n(1), n(2), 1.0, 1.0).unwrap();
        let b = g.add_arc(n(1), n(2), 2.0, 0.5).unwrap();
        assert_ne!(a, b);
        assert_eq!(g.out_arcs(n(1)), &[a, b]);
        assert_eq!(g.arc(b).capacity, 2.0);
    }

    #[test]
    fn adjacency_matches_tails() {
        let mut g = Graph::new(4);
        for (t, h) in [(1, 2), (2, 3), (1, 3), (3, 4), (4, 1), (1, 2)] {
            g.add_arc(n(t), n(h), 1.0, 1.0).unwrap();
        }
        for v in g.nodes() {
            let expect: Vec<ArcId> = g
                .arcs()
                .iter()
                .filter(|a| a.tail == v)
                .map(|a| a.id)
                .collect();
            assert_eq!(g.out_arcs(v), expect.as_slice());
        }
    }

    #[test]
    fn structural_errors() {
        let mut g = Graph::new(2);
        assert_eq!(
            g.add_arc(n(1), n(1), 1.0, 1.0),
            Err(GraphError::SelfLoop { node: 1 })
        );
        assert_eq!(
            g.add_arc(n(1), n(3), 1.0, 1.0),
            Err(GraphError::NodeOutOfRange { node: 3, n: 2 })
        );
        assert!(matches!(
            Instance::new(g.clone(), n(2), n(2)),
            Err(GraphError::SourceIsSink { .. })
        ));
        assert!(Instance::new(g, n(1), n(5)).is_err());
    }

    #[test]
    fn path_node_sequence() {
        let mut g = Graph::new(3);
        let a = g.add_arc(n(1), n(2), 1.0, 1.0).unwrap();
        let b = g.add_arc(n(2), n(3), 1.0, 1.0).unwrap();
        let p = Path::new(vec![a, b]);
        assert_eq!(p.nodes(&g), vec![n(1), n(2), n(3)]);
        assert!(Path::empty().nodes(&g).is_empty());
    }
}
