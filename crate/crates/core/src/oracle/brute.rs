use crate::error::OracleError;
use crate::eval::FlowValue;
use crate::graph::{ArcId, Instance, NodeId, Path, Solution, Status};

pub const DEFAULT_NODE_CAP: usize = 14;

/// Calls `visit` with the arcs of every simple source-sink path, in
/// lexicographic order of arc ids. Refuses instances above `node_cap` nodes.
pub fn for_each_st_path<F>(
    instance: &Instance,
    node_cap: usize,
    mut visit: F,
) -> Result<(), OracleError>
where
    F: FnMut(&[ArcId]),
{
    let n = instance.node_count();
    if n > node_cap {
        return Err(OracleError::TooLarge { n, cap: node_cap });
    }
    let mut on_path = vec![false; n];
    let mut stack = Vec::with_capacity(n);
    on_path[instance.source.index()] = true;
    dfs(
        instance,
        instance.source,
        &mut on_path,
        &mut stack,
        &mut visit,
    );
    Ok(())
}

fn dfs<F: FnMut(&[ArcId])>(
    instance: &Instance,
    at: NodeId,
    on_path: &mut [bool],
    stack: &mut Vec<ArcId>,
    visit: &mut F,
) {
    if at == instance.sink {
        visit(stack);
        return;
    }
    for &a in instance.graph.out_arcs(at) {
        let head = instance.graph.arc(a).head;
        if on_path[head.index()] {
            continue;
        }
        on_path[head.index()] = true;
        stack.push(a);
        dfs(instance, head, on_path, stack, visit);
        stack.pop();
        on_path[head.index()] = false;
    }
}

pub fn brute_force(instance: &Instance) -> Result<Solution, OracleError> {
    brute_force_capped(instance, DEFAULT_NODE_CAP)
}

/// Best simple path by exhaustive enumeration. Ties keep the
/// lexicographically smallest arc sequence. `iterations` reports the number
/// of paths examined.
pub fn brute_force_capped(instance: &Instance, node_cap: usize) -> Result<Solution, OracleError> {
    let g = &instance.graph;
    let mut best: Option<(f64, Vec<ArcId>)> = None;
    let mut count = 0;
    for_each_st_path(instance, node_cap, |arcs| {
        count += 1;
        let value = arcs
            .iter()
            .fold(FlowValue::UNBOUNDED, |f, &a| {
                let arc = g.arc(a);
                f.through(arc.capacity, arc.loss)
            })
            .get();
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, arcs.to_vec()));
        }
    })?;
    Ok(match best {
        Some((value, arcs)) if value > 0.0 => Solution {
            path: Path::new(arcs),
            value,
            iterations: count,
            status: Status::Optimal,
        },
        _ => Solution::no_path(count),
    })
}
