//! Single-objective integer programs over finite integer boxes.
//!
//! Boxes under the enumeration cap are scanned exhaustively in
//! lexicographic order. Larger boxes may be handed to an LP-bounded
//! best-first branch-and-bound when [`IpOptions::branch_and_bound`] is set.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{MoipError, Result};
use crate::pareto::Sense;
use crate::solver::lp::{lp_solve, LpProblem, Relation, Row, SolveOutcome};

/// Default cap on the number of box points scanned by enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

/// Tolerance used when testing an integer point against a row.
pub(crate) const INT_ROW_TOL: f64 = 1e-9;

/// `max objective · x` subject to `rows`, `lo ≤ x ≤ hi`, `x` integer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IpProblem {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl IpProblem {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn volume(&self) -> u128 {
        box_volume(&self.lo, &self.hi)
    }

    pub fn is_feasible(&self, x: &[i64]) -> bool {
        point_satisfies(&self.rows, x)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        MoipError::check_dim(n, self.lo.len())?;
        MoipError::check_dim(n, self.hi.len())?;
        for r in &self.rows {
            MoipError::check_dim(n, r.coeffs.len())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IpOptions {
    pub enumeration_cap: u128,
    /// Fall back to branch-and-bound when the box exceeds the cap.
    pub branch_and_bound: bool,
    pub node_limit: usize,
}

impl Default for IpOptions {
    fn default() -> Self {
        IpOptions { enumeration_cap: DEFAULT_ENUMERATION_CAP, branch_and_bound: false, node_limit: 1_000_000 }
    }
}

/// Number of integer points in the box; zero if any interval is empty.
pub fn box_volume(lo: &[i64], hi: &[i64]) -> u128 {
    lo.iter()
        .zip(hi)
        .map(|(&l, &h)| if h < l { 0 } else { (h as i128 - l as i128 + 1) as u128 })
        .fold(1u128, |acc, w| acc.saturating_mul(w))
}

pub(crate) fn point_satisfies(rows: &[Row], x: &[i64]) -> bool {
    rows.iter().all(|r| {
        let lhs: f64 = r.coeffs.iter().zip(x).map(|(a, &v)| a * v as f64).sum();
        let slack = INT_ROW_TOL * (1.0 + r.rhs.abs());
        match r.relation {
            Relation::Le => lhs <= r.rhs + slack,
            Relation::Ge => lhs >= r.rhs - slack,
            Relation::Eq => (lhs - r.rhs).abs() <= slack,
        }
    })
}

/// Visits every integer point of the box in ascending lexicographic order
/// (first coordinate most significant).
pub(crate) fn for_each_box_point<F>(lo: &[i64], hi: &[i64], cap: u128, mut visit: F) -> Result<()>
where
    F: FnMut(&[i64]),
{
    let volume = box_volume(lo, hi);
    if volume > cap {
        return Err(MoipError::EnumerationCapExceeded { volume, cap });
    }
    if volume == 0 {
        return Ok(());
    }
    let n = lo.len();
    let mut x = lo.to_vec();
    loop {
        visit(&x);
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(());
            }
            j -= 1;
            if x[j] < hi[j] {
                x[j] += 1;
                break;
            }
            x[j] = lo[j];
        }
    }
}

/// All integer box points satisfying the rows, in lexicographic order.
pub fn enumerate_feasible(p: &IpProblem) -> Result<Vec<Vec<i64>>> {
    enumerate_feasible_with_cap(p, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_feasible_with_cap(p: &IpProblem, cap: u128) -> Result<Vec<Vec<i64>>> {
    p.validate()?;
    let mut out = Vec::new();
    for_each_box_point(&p.lo, &p.hi, cap, |x| {
        if point_satisfies(&p.rows, x) {
            out.push(x.to_vec());
        }
    })?;
    Ok(out)
}

pub fn ip_solve(p: &IpProblem) -> Result<SolveOutcome> {
    ip_solve_with(p, &IpOptions::default())
}

/// Exact optimum; ties go to the lexicographically smallest solution when
/// enumerating.
pub fn ip_solve_with(p: &IpProblem, opts: &IpOptions) -> Result<SolveOutcome> {
    p.validate()?;
    let volume = p.volume();
    if volume > opts.enumeration_cap {
        if opts.branch_and_bound {
            return branch_and_bound(p, opts.node_limit);
        }
        return Err(MoipError::EnumerationCapExceeded { volume, cap: opts.enumeration_cap });
    }
    let mut best: Option<(f64, Vec<i64>)> = None;
    for_each_box_point(&p.lo, &p.hi, opts.enumeration_cap, |x| {
        if !point_satisfies(&p.rows, x) {
            return;
        }
        let v: f64 = p.objective.iter().zip(x).map(|(c, &xi)| c * xi as f64).sum();
        let better = match &best {
            None => true,
            Some((bv, _)) => v > bv + 1e-9 * (1.0 + bv.abs()),
        };
        if better {
            best = Some((v, x.to_vec()));
        }
    })?;
    Ok(match best {
        None => SolveOutcome::Infeasible,
        Some((value, x)) => SolveOutcome::Optimal { value, solution: x.into_iter().map(|v| v as f64).collect() },
    })
}

struct Node {
    bound: f64,
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound)
    }
}

fn relaxation(p: &IpProblem, lo: &[i64], hi: &[i64]) -> Result<SolveOutcome> {
    let lp = LpProblem {
        objective: p.objective.clone(),
        sense: Sense::Max,
        rows: p.rows.clone(),
        bounds: lo.iter().zip(hi).map(|(&l, &h)| (l as f64, h as f64)).collect(),
    };
    lp_solve(&lp)
}

fn branch_and_bound(p: &IpProblem, node_limit: usize) -> Result<SolveOutcome> {
    let mut heap = BinaryHeap::new();
    let mut incumbent: Option<(f64, Vec<i64>)> = None;
    let root = relaxation(p, &p.lo, &p.hi)?;
    match root {
        SolveOutcome::Infeasible => return Ok(SolveOutcome::Infeasible),
        SolveOutcome::Unbounded => return Ok(SolveOutcome::Unbounded),
        SolveOutcome::Optimal { value, .. } => heap.push(Node { bound: value, lo: p.lo.clone(), hi: p.hi.clone() }),
    }
    let mut nodes = 0usize;
    while let Some(node) = heap.pop() {
        if let Some((iv, _)) = &incumbent {
            if node.bound <= iv + 1e-9 * (1.0 + iv.abs()) {
                break;
            }
        }
        nodes += 1;
        if nodes > node_limit {
            return Err(MoipError::Numerical(format!("branch-and-bound exceeded {node_limit} nodes")));
        }
        let SolveOutcome::Optimal { value, solution } = relaxation(p, &node.lo, &node.hi)? else {
            continue;
        };
        let frac = solution
            .iter()
            .enumerate()
            .map(|(j, v)| (j, (v - v.round()).abs()))
            .filter(|(_, f)| *f > 1e-6)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        match frac {
            None => {
                let x: Vec<i64> = solution.iter().map(|v| v.round() as i64).collect();
                if point_satisfies(&p.rows, &x) {
                    let v: f64 = p.objective.iter().zip(&x).map(|(c, &xi)| c * xi as f64).sum();
                    if incumbent.as_ref().is_none_or(|(iv, _)| v > *iv) {
                        incumbent = Some((v, x));
                    }
                }
            }
            Some((j, _)) => {
                let split = solution[j].floor() as i64;
                let mut hi = node.hi.clone();
                hi[j] = split;
                if hi[j] >= node.lo[j] {
                    heap.push(Node { bound: value, lo: node.lo.clone(), hi });
                }
                let mut lo = node.lo.clone();
                lo[j] = split + 1;
                if lo[j] <= node.hi[j] {
                    heap.push(Node { bound: value, lo, hi: node.hi });
                }
            }
        }
    }
    Ok(match incumbent {
        None => SolveOutcome::Infeasible,
        Some((value, x)) => SolveOutcome::Optimal { value, solution: x.into_iter().map(|v| v as f64).collect() },
    })
}
