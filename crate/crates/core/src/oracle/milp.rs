//! Mixed zero-one model of the problem and a feasibility checker for it.
//!
//! Variables: `x_a` is the flow entering arc `a` (its head receives
//! `p_a * x_a`), `y_a` selects the arc, `vs`/`vt` are the flow leaving the
//! source and reaching the sink. The model maximizes `vt` subject to
//!
//! * flow balance at every node: out-flow minus lossy in-flow equals `vs` at
//!   the source, `-vt` at the sink and zero elsewhere;
//! * at most one selected out-arc per node other than the sink;
//! * `0 <= x_a <= u_a * y_a`.

use std::fmt::{self, Write as _};

use crate::error::PathError;
use crate::eval::{check_st_path, deliverable_flow};
use crate::graph::{ArcId, Instance, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X(ArcId),
    Y(ArcId),
    Vs,
    Vt,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(a) => write!(f, "x_{a}"),
            Var::Y(a) => write!(f, "y_{a}"),
            Var::Vs => f.write_str("vs"),
            Var::Vt => f.write_str("vt"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Eq,
    Le,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(f64, Var)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn activity(&self, value: impl Fn(Var) -> f64) -> f64 {
        self.terms.iter().map(|&(c, v)| c * value(v)).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub header: String,
    pub objective: Var,
    pub rows: Vec<Row>,
    pub binaries: Vec<Var>,
}

impl LpModel {
    pub fn build(instance: &Instance) -> Self {
        let g = &instance.graph;
        let n = g.node_count();
        let mut incoming: Vec<Vec<ArcId>> = vec![Vec::new(); n];
        for a in g.arcs() {
            incoming[a.head.index()].push(a.id);
        }

        let mut rows = Vec::new();
        for v in g.nodes() {
            let mut terms: Vec<(f64, Var)> =
                g.out_arcs(v).iter().map(|&a| (1.0, Var::X(a))).collect();
            terms.extend(
                incoming[v.index()]
                    .iter()
                    .map(|&a| (-g.arc(a).loss, Var::X(a))),
            );
            if v == instance.source {
                terms.push((-1.0, Var::Vs));
            }
            if v == instance.sink {
                terms.push((1.0, Var::Vt));
            }
            if !terms.is_empty() {
                rows.push(Row {
                    name: format!("bal_{v}"),
                    terms,
                    sense: Sense::Eq,
                    rhs: 0.0,
                });
            }
        }
        for v in g.nodes().filter(|&v| v != instance.sink) {
            let out = g.out_arcs(v);
            if !out.is_empty() {
                rows.push(Row {
                    name: format!("deg_{v}"),
                    terms: out.iter().map(|&a| (1.0, Var::Y(a))).collect(),
                    sense: Sense::Le,
                    rhs: 1.0,
                });
            }
        }
        for a in g.arcs() {
            rows.push(Row {
                name: format!("cap_{}", a.id),
                terms: vec![(1.0, Var::X(a.id)), (-a.capacity, Var::Y(a.id))],
                sense: Sense::Le,
                rhs: 0.0,
            });
        }

        LpModel {
            header: format!(
                "gmcp model: n {} m {} s {} t {}",
                n,
                g.arc_count(),
                instance.source,
                instance.sink
            ),
            objective: Var::Vt,
            rows,
            binaries: g.arcs().iter().map(|a| Var::Y(a.id)).collect(),
        }
    }

    /// CPLEX LP text. Output is a pure function of the instance.
    pub fn to_lp(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "\\ {}", self.header);
        let _ = writeln!(s, "Maximize\n obj: {}", self.objective);
        s.push_str("Subject To\n");
        for row in &self.rows {
            let _ = write!(s, " {}:", row.name);
            for (k, &(c, v)) in row.terms.iter().enumerate() {
                let sign = if c.is_sign_negative() { "-" } else { "+" };
                let mag = c.abs();
                if k > 0 || c.is_sign_negative() {
                    let _ = write!(s, " {sign}");
                }
                if mag == 1.0 {
                    let _ = write!(s, " {v}");
                } else {
                    let _ = write!(s, " {mag} {v}");
                }
            }
            let op = match row.sense {
                Sense::Eq => "=",
                Sense::Le => "<=",
            };
            let _ = writeln!(s, " {op} {}", row.rhs);
        }
        if !self.binaries.is_empty() {
            s.push_str("Binary\n");
            for v in &self.binaries {
                let _ = writeln!(s, " {v}");
            }
        }
        s.push_str("End\n");
        s
    }
}

pub fn export_milp(instance: &Instance) -> String {
    LpModel::build(instance).to_lp()
}

pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RowCheck {
    pub name: String,
    pub activity: f64,
    pub rhs: f64,
    pub sense: Sense,
    /// Amount by which the row is violated; zero when satisfied.
    pub residual: f64,
}

/// Model-variable assignment induced by a solution, with every row's
/// residual.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub x: Vec<f64>,
    pub y: Vec<u8>,
    pub vs: f64,
    pub vt: f64,
    pub rows: Vec<RowCheck>,
    pub objective: f64,
    pub claimed_value: f64,
    pub tol: f64,
}

impl FeasibilityReport {
    pub fn violations(&self) -> Vec<&RowCheck> {
        self.rows.iter().filter(|r| r.residual > self.tol).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn objective_matches(&self) -> bool {
        (self.objective - self.claimed_value).abs() <= self.tol
    }

    pub fn is_feasible(&self) -> bool {
        self.violations().is_empty() && self.objective_matches()
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "objective {} claimed {}",
            self.objective, self.claimed_value
        )?;
        for r in &self.rows {
            writeln!(f, "{} {} {} {}", r.name, r.activity, r.rhs, r.residual)?;
        }
        write!(
            f,
            "{}",
            if self.is_feasible() {
                "FEASIBLE"
            } else {
                "INFEASIBLE"
            }
        )
    }
}

/// Builds `x, y, vs, vt` from the solution's path and checks every model row.
///
/// `y` marks the path arcs. `x` pushes the largest amount the path carries:
/// the last saturated arc gets exactly its capacity, flow downstream of it is
/// propagated forward and flow upstream is back-computed by dividing out
/// loss factors. `vt` is the solution's claimed value, so an inflated value
/// shows up as an unbalanced sink row.
pub fn check_feasible(
    instance: &Instance,
    solution: &Solution,
) -> Result<FeasibilityReport, PathError> {
    let g = &instance.graph;
    let m = g.arc_count();
    let mut x = vec![0.0; m];
    let mut y = vec![0u8; m];
    let arcs = &solution.path.arcs;

    if !arcs.is_empty() {
        check_st_path(instance, &solution.path)?;
        let sat = deliverable_flow(instance, &solution.path)?.saturated_index - 1;
        let mut flow = vec![0.0; arcs.len()];
        flow[sat] = g.arc(arcs[sat]).capacity;
        for k in sat + 1..arcs.len() {
            flow[k] = g.arc(arcs[k - 1]).loss * flow[k - 1];
        }
        for k in (0..sat).rev() {
            flow[k] = flow[k + 1] / g.arc(arcs[k]).loss;
        }
        for (k, &a) in arcs.iter().enumerate() {
            x[a.index()] = flow[k];
            y[a.index()] = 1;
        }
    }
    let vs = arcs.first().map_or(0.0, |a| x[a.index()]);
    let vt = solution.value;

    let value = |v: Var| match v {
        Var::X(a) => x[a.index()],
        Var::Y(a) => f64::from(y[a.index()]),
        Var::Vs => vs,
        Var::Vt => vt,
    };
    let model = LpModel::build(instance);
    let mut rows: Vec<RowCheck> = model
        .rows
        .iter()
        .map(|row| {
            let activity = row.activity(value);
            let residual = match row.sense {
                Sense::Eq => (activity - row.rhs).abs(),
                Sense::Le => (activity - row.rhs).max(0.0),
            };
            RowCheck {
                name: row.name.clone(),
                activity,
                rhs: row.rhs,
                sense: row.sense,
                residual,
            }
        })
        .collect();
    for (name, v) in [("lb_vs", vs), ("lb_vt", vt)]
        .into_iter()
        .chain(g.arcs().iter().map(|a| ("lb_x", x[a.id.index()])))
    {
        if v < 0.0 {
            rows.push(RowCheck {
                name: name.into(),
                activity: v,
                rhs: 0.0,
                sense: Sense::Le,
                residual: -v,
            });
        }
    }

    Ok(FeasibilityReport {
        objective: value(model.objective),
        x,
        y,
        vs,
        vt,
        rows,
        claimed_value: solution.value,
        tol: FEASIBILITY_TOL,
    })
}
