//! Solvers for the generalized maximum capacity path problem: on a directed
//! network whose arcs have a capacity `u` and a loss factor `p` in `(0, 1]`,
//! find the single source-sink path that delivers the most flow. Pushing
//! `x <= u` units into an arc delivers `p * x` at its head.
//!
//! * [`solve_alg1`]: repeated maximum-reliability searches with saturated-arc
//!   replacement.
//! * [`solve_alg2_array`] / [`solve_alg2_heap`]: a single label-setting pass.
//! * [`oracle`]: exhaustive enumeration and the mixed zero-one model, used to
//!   check the solvers.
//! * [`netgen`]: seeded random instances.

pub mod error;
pub mod eval;
pub mod format;
pub mod graph;
mod heap;
pub mod iterative;
pub mod labeling;
pub mod netgen;
pub mod oracle;

pub use error::{
    GenError, GraphError, OracleError, ParseError, ParseErrorKind, PathError, SolveError,
};
pub use eval::{
    deliverable_flow, normalize_capacities, path_bottleneck, path_reliability, FlowValue,
    SaturationReport,
};
pub use format::{parse_instance, serialize_instance, validate, Severity, Violation};
pub use graph::{Arc, ArcId, Graph, Instance, NodeId, Path, Solution, Status};
pub use iterative::{solve_alg1, solve_alg1_traced, WorkingNetwork};
pub use labeling::{
    check_optimality, label_array, label_heap, reconstruct_path, solve_alg2_array, solve_alg2_heap,
    LabelOptions, LabelState,
};
pub use netgen::{generate, grid_presets, GenConfig};

/// The three solver implementations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Alg1,
    Alg2Array,
    Alg2Heap,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Alg1, Algorithm::Alg2Array, Algorithm::Alg2Heap];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg2Array => "alg2-array",
            Algorithm::Alg2Heap => "alg2-heap",
        }
    }

    pub fn solve(self, instance: &Instance) -> Result<Solution, SolveError> {
        match self {
            Algorithm::Alg1 => solve_alg1(instance),
            Algorithm::Alg2Array => solve_alg2_array(instance),
            Algorithm::Alg2Heap => solve_alg2_heap(instance),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                format!("unknown algorithm `{s}` (expected alg1, alg2-array or alg2-heap)")
            })
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
