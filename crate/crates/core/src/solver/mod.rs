//! Exact small-scale solvers: dense simplex, integer box enumeration with a
//! branch-and-bound fallback, and LPs over the convex hull of point sets.

mod hull;
mod ip;
mod lp;

pub use hull::conv_hull_lp;
pub use ip::{
    box_volume, enumerate_feasible, enumerate_feasible_with_cap, ip_solve, ip_solve_with, IpOptions, IpProblem,
    DEFAULT_ENUMERATION_CAP,
};
pub(crate) use ip::{for_each_box_point, point_satisfies};
pub use lp::{lp_solve, LpProblem, Relation, Row, SolveOutcome, FEAS_TOL, OPT_TOL};
