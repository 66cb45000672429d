//! Dense two-phase tableau simplex for small linear programs.
//!
//! Pivoting starts with Dantzig's rule and falls back to Bland's rule after
//! a bounded number of pivots, so the method terminates on degenerate input.

use serde::{Deserialize, Serialize};

use crate::error::{MoipError, Result};
use crate::pareto::Sense;

/// Feasibility tolerance reported with every solve.
pub const FEAS_TOL: f64 = 1e-7;
/// Optimality (reduced cost) tolerance.
pub const OPT_TOL: f64 = 1e-9;

const PIVOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// One linear constraint `coeffs · x (relation) rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Row { coeffs, relation, rhs }
    }

    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        Row::new(coeffs, Relation::Le, rhs)
    }

    pub fn ge(coeffs: Vec<f64>, rhs: f64) -> Self {
        Row::new(coeffs, Relation::Ge, rhs)
    }

    pub fn eq(coeffs: Vec<f64>, rhs: f64) -> Self {
        Row::new(coeffs, Relation::Eq, rhs)
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    /// Violation of the row at `x` (zero when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }

    pub fn satisfied(&self, x: &[f64], tol: f64) -> bool {
        self.violation(x) <= tol * (1.0 + self.rhs.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub sense: Sense,
    pub rows: Vec<Row>,
    /// Per-variable `[lo, hi]`; infinities allowed.
    pub bounds: Vec<(f64, f64)>,
}

impl LpProblem {
    /// Problem over `x ≥ 0` with no rows.
    pub fn new(objective: Vec<f64>, sense: Sense) -> Self {
        let n = objective.len();
        LpProblem { objective, sense, rows: Vec::new(), bounds: vec![(0.0, f64::INFINITY); n] }
    }

    pub fn with_row(mut self, row: Row) -> Self {
        self.rows.push(row);
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        MoipError::check_dim(n, self.bounds.len())?;
        for r in &self.rows {
            MoipError::check_dim(n, r.coeffs.len())?;
            if !r.rhs.is_finite() || r.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(MoipError::Precondition("non-finite row data".into()));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(MoipError::Precondition("non-finite objective".into()));
        }
        for &(lo, hi) in &self.bounds {
            if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(MoipError::Precondition(format!("invalid variable bounds [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SolveOutcome {
    Optimal { value: f64, solution: Vec<f64> },
    Unbounded,
    Infeasible,
}

impl SolveOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            SolveOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn solution(&self) -> Option<&[f64]> {
        match self {
            SolveOutcome::Optimal { solution, .. } => Some(solution),
            _ => None,
        }
    }
}

/// `x_j = offset + Σ sign · z_col` over the nonnegative working columns.
struct VarMap {
    offset: f64,
    cols: Vec<(usize, f64)>,
}

/// Solves `p` to optimality, or reports infeasibility / unboundedness.
pub fn lp_solve(p: &LpProblem) -> Result<SolveOutcome> {
    p.validate()?;
    let n = p.num_vars();

    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut extra_rows: Vec<(usize, f64)> = Vec::new();
    for &(lo, hi) in &p.bounds {
        if lo > hi {
            return Ok(SolveOutcome::Infeasible);
        }
        if lo.is_finite() {
            let c = ncols;
            ncols += 1;
            if hi.is_finite() {
                extra_rows.push((c, hi - lo));
            }
            maps.push(VarMap { offset: lo, cols: vec![(c, 1.0)] });
        } else if hi.is_finite() {
            let c = ncols;
            ncols += 1;
            maps.push(VarMap { offset: hi, cols: vec![(c, -1.0)] });
        } else {
            maps.push(VarMap { offset: 0.0, cols: vec![(ncols, 1.0), (ncols + 1, -1.0)] });
            ncols += 2;
        }
    }

    // Rows over working columns, rhs made nonnegative.
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    for r in &p.rows {
        let mut a = vec![0.0; ncols];
        let mut rhs = r.rhs;
        for (j, &coef) in r.coeffs.iter().enumerate() {
            if coef == 0.0 {
                continue;
            }
            rhs -= coef * maps[j].offset;
            for &(c, s) in &maps[j].cols {
                a[c] += coef * s;
            }
        }
        rows.push((a, r.relation, rhs));
    }
    for (c, ub) in extra_rows {
        let mut a = vec![0.0; ncols];
        a[c] = 1.0;
        rows.push((a, Relation::Le, ub));
    }
    for row in &mut rows {
        if row.2 < 0.0 {
            row.0.iter_mut().for_each(|v| *v = -*v);
            row.2 = -row.2;
            row.1 = match row.1 {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let sign = match p.sense {
        Sense::Max => 1.0,
        Sense::Min => -1.0,
    };
    let mut cost = vec![0.0; ncols];
    let mut const_term = 0.0;
    for (j, m) in maps.iter().enumerate() {
        const_term += p.objective[j] * m.offset;
        for &(c, s) in &m.cols {
            cost[c] += sign * p.objective[j] * s;
        }
    }

    let z = match Tableau::build(&rows, ncols).solve(&cost)? {
        Phase::Infeasible => return Ok(SolveOutcome::Infeasible),
        Phase::Unbounded => return Ok(SolveOutcome::Unbounded),
        Phase::Optimal(z) => z,
    };

    let x: Vec<f64> = maps.iter().map(|m| m.offset + m.cols.iter().map(|&(c, s)| s * z[c]).sum::<f64>()).collect();
    for r in &p.rows {
        if !r.satisfied(&x, FEAS_TOL) {
            return Err(MoipError::Numerical(format!("simplex solution violates a row by {:e}", r.violation(&x))));
        }
    }
    for (v, &(lo, hi)) in x.iter().zip(&p.bounds) {
        if *v < lo - FEAS_TOL * (1.0 + lo.abs()) || *v > hi + FEAS_TOL * (1.0 + hi.abs()) {
            return Err(MoipError::Numerical("simplex solution violates a variable bound".into()));
        }
    }
    let value: f64 = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    debug_assert!((value - (const_term + sign * cost_dot(&cost, &z))).abs() < 1e-6 * (1.0 + value.abs()));
    Ok(SolveOutcome::Optimal { value, solution: x })
}

fn cost_dot(cost: &[f64], z: &[f64]) -> f64 {
    cost.iter().zip(z).map(|(c, v)| c * v).sum()
}

enum Phase {
    Optimal(Vec<f64>),
    Unbounded,
    Infeasible,
}

struct Tableau {
    m: usize,
    /// structural + slack/surplus + artificial columns
    width: usize,
    nstruct: usize,
    first_artificial: usize,
    data: Vec<f64>, // m rows of (width + 1), rhs last
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn build(rows: &[(Vec<f64>, Relation, f64)], nstruct: usize) -> Self {
        let m = rows.len();
        let nslack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let nart = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let first_artificial = nstruct + nslack;
        let width = first_artificial + nart;
        let stride = width + 1;
        let mut data = vec![0.0; m * stride];
        let mut basis = vec![0; m];
        let (mut s, mut a) = (nstruct, first_artificial);
        for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
            let row = &mut data[i * stride..(i + 1) * stride];
            row[..nstruct].copy_from_slice(coeffs);
            row[width] = *rhs;
            match rel {
                Relation::Le => {
                    row[s] = 1.0;
                    basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -1.0;
                    s += 1;
                    row[a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
            }
        }
        Tableau { m, width, nstruct, first_artificial, data, basis, pivots: 0 }
    }

    fn stride(&self) -> usize {
        self.width + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.stride() + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width)
    }

    fn pivot(&mut self, r: usize, c: usize, zrow: &mut [f64]) {
        let stride = self.stride();
        let p = self.data[r * stride + c];
        for v in &mut self.data[r * stride..(r + 1) * stride] {
            *v /= p;
        }
        let prow: Vec<f64> = self.data[r * stride..(r + 1) * stride].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.data[i * stride + c];
            if f != 0.0 {
                let row = &mut self.data[i * stride..(i + 1) * stride];
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        let f = zrow[c];
        if f != 0.0 {
            for (v, pv) in zrow.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            zrow[c] = 0.0;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Maximizes over the tableau with objective row `zrow` (entries are
    /// `-reduced cost`, last entry the current value). Columns at or past
    /// `col_limit` never enter.
    fn optimize(&mut self, zrow: &mut [f64], col_limit: usize) -> Result<bool> {
        let scale = self.m + self.width;
        let bland_after = 20 * scale + 50;
        let max_pivots = self.pivots + 200 * scale + 5_000;
        loop {
            let use_bland = self.pivots >= bland_after;
            let mut enter = None;
            let mut best = -OPT_TOL;
            for (j, &rc) in zrow.iter().enumerate().take(col_limit) {
                if rc < -OPT_TOL {
                    if use_bland {
                        enter = Some(j);
                        break;
                    }
                    if rc < best {
                        best = rc;
                        enter = Some(j);
                    }
                }
            }
            let Some(c) = enter else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12 || (ratio <= lr + 1e-12 && self.basis[i] < self.basis[li]) {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, c, zrow);
            if self.pivots > max_pivots {
                return Err(MoipError::Numerical(format!("simplex exceeded {max_pivots} pivots")));
            }
        }
    }

    fn solve(mut self, cost: &[f64]) -> Result<Phase> {
        let stride = self.stride();
        // Phase 1: maximize -Σ artificials.
        if self.first_artificial < self.width {
            let mut zrow = vec![0.0; stride];
            zrow[self.first_artificial..self.width].fill(1.0);
            for i in 0..self.m {
                if self.basis[i] >= self.first_artificial {
                    for (z, d) in zrow.iter_mut().zip(&self.data[i * stride..(i + 1) * stride]) {
                        *z -= d;
                    }
                }
            }
            self.optimize(&mut zrow, self.first_artificial)?;
            let infeas: f64 =
                (0..self.m).filter(|&i| self.basis[i] >= self.first_artificial).map(|i| self.rhs(i)).sum();
            let scale = 1.0 + (0..self.m).map(|i| self.rhs(i).abs()).fold(0.0, f64::max);
            if infeas > FEAS_TOL * scale {
                return Ok(Phase::Infeasible);
            }
            // Drive zero-level artificials out of the basis; drop redundant rows.
            let mut i = 0;
            while i < self.m {
                if self.basis[i] >= self.first_artificial {
                    let col = (0..self.first_artificial).find(|&j| self.at(i, j).abs() > 1e-9);
                    match col {
                        Some(c) => {
                            let mut dummy = vec![0.0; stride];
                            self.pivot(i, c, &mut dummy);
                        }
                        None => {
                            self.data.drain(i * stride..(i + 1) * stride);
                            self.basis.remove(i);
                            self.m -= 1;
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }

        // Phase 2.
        let mut zrow = vec![0.0; stride];
        for (j, &c) in cost.iter().enumerate() {
            zrow[j] = -c;
        }
        for i in 0..self.m {
            let b = self.basis[i];
            let f = zrow[b];
            if f != 0.0 {
                for (z, d) in zrow.iter_mut().zip(&self.data[i * stride..(i + 1) * stride]) {
                    *z -= f * d;
                }
            }
        }
        if !self.optimize(&mut zrow, self.first_artificial)? {
            return Ok(Phase::Unbounded);
        }
        let mut z = vec![0.0; self.nstruct];
        for i in 0..self.m {
            if self.basis[i] < self.nstruct {
                z[self.basis[i]] = self.rhs(i).max(0.0);
            }
        }
        Ok(Phase::Optimal(z))
    }
}
