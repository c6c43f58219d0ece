//! Ground truth for the solvers: exhaustive path enumeration and the
//! mixed zero-one model with a feasibility checker.

mod brute;
mod milp;

pub use brute::{brute_force, brute_force_capped, for_each_st_path, DEFAULT_NODE_CAP};
pub use milp::{
    check_feasible, export_milp, FeasibilityReport, LpModel, Row, RowCheck, Sense, Var,
    FEASIBILITY_TOL,
};
