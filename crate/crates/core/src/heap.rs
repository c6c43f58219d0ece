use std::cmp::Ordering;

use crate::eval::FlowValue;
use crate::graph::NodeId;

/// Max-heap entry for label-setting searches: larger label first, lower node
/// id first among equal labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Entry {
    pub label: FlowValue,
    pub node: NodeId,
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.label
            .cmp(&other.label)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BinaryHeap;

    #[test]
    fn pops_largest_then_lowest_id() {
        let e = |l: f64, n: usize| Entry {
            label: FlowValue::new(l),
            node: NodeId::from_index(n),
        };
        let mut h = BinaryHeap::from(vec![e(1.0, 3), e(2.0, 5), e(2.0, 1), e(0.5, 0)]);
        let order: Vec<_> = std::iter::from_fn(|| h.pop())
            .map(|x| x.node.index())
            .collect();
        assert_eq!(order, vec![1, 5, 3, 0]);
    }
}
