//! Continuous, convex-hull and Lagrangian relaxations, the grid
//! approximation of the Lagrangian dual, and the LDLP bound.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::remove_collinear;
use crate::error::{MoipError, Result};
use crate::model::{check_positive, supported_frontier, MoipInstance};
use crate::pareto::{max_filter, sort_lex, Antichain, Archive, ExtendedSet, ObjVec, Sense};
use crate::solver::{conv_hull_lp, lp_solve, LpProblem, Row, SolveOutcome};

/// Threshold on `h₂(d) − h₁(d)` reported as a violation of the
/// convex-hull intersection property.
pub const FR_LAG_GAP_TOL: f64 = 1e-6;

/// Nonnegative `k × m1` multiplier matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierMatrix {
    k: usize,
    m1: usize,
    data: Vec<f64>,
}

impl MultiplierMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        let m1 = rows.first().map_or(0, Vec::len);
        for r in &rows {
            MoipError::check_dim(m1, r.len())?;
        }
        Self::from_flat(k, m1, rows.into_iter().flatten().collect())
    }

    /// Row-major values: `Λ[i][l] = values[i * m1 + l]`.
    pub fn from_flat(k: usize, m1: usize, values: Vec<f64>) -> Result<Self> {
        MoipError::check_dim(k * m1, values.len())?;
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(MoipError::Precondition(format!("multipliers must be finite and nonnegative, got {v}")));
        }
        Ok(MultiplierMatrix { k, m1, data: values })
    }

    pub fn zeros(k: usize, m1: usize) -> Self {
        MultiplierMatrix { k, m1, data: vec![0.0; k * m1] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, l: usize) -> f64 {
        self.data[i * self.m1 + l]
    }

    /// `Λ r`.
    pub fn apply(&self, r: &[f64]) -> Vec<f64> {
        (0..self.k).map(|i| self.data[i * self.m1..(i + 1) * self.m1].iter().zip(r).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Uniform grid over `[0, λ_max]` on each of the `k · m1` multiplier axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierGrid {
    pub k: usize,
    pub m1: usize,
    pub lambda_max: f64,
    pub count: usize,
}

impl MultiplierGrid {
    pub fn new(k: usize, m1: usize, lambda_max: f64, count: usize) -> Result<Self> {
        if count == 0 || !(lambda_max > 0.0 && lambda_max.is_finite()) {
            return Err(MoipError::Precondition("grid needs a positive bound and at least one point per axis".into()));
        }
        let grid = MultiplierGrid { k, m1, lambda_max, count };
        if grid.len_u128() > u32::MAX as u128 {
            return Err(MoipError::Precondition("multiplier grid too large".into()));
        }
        Ok(grid)
    }

    pub fn for_instance(inst: &MoipInstance, lambda_max: f64, count: usize) -> Result<Self> {
        Self::new(inst.k(), inst.dualized().len(), lambda_max, count)
    }

    pub fn axes(&self) -> usize {
        self.k * self.m1
    }

    fn len_u128(&self) -> u128 {
        (self.count as u128).pow(self.axes() as u32)
    }

    pub fn len(&self) -> usize {
        self.len_u128() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn axis_value(&self, i: usize) -> f64 {
        if self.count == 1 {
            0.0
        } else {
            self.lambda_max * i as f64 / (self.count - 1) as f64
        }
    }

    /// Grid point `index`, with the last axis varying fastest.
    pub fn get(&self, mut index: usize) -> MultiplierMatrix {
        let mut data = vec![0.0; self.axes()];
        for slot in data.iter_mut().rev() {
            *slot = self.axis_value(index % self.count);
            index /= self.count;
        }
        MultiplierMatrix { k: self.k, m1: self.m1, data }
    }

    pub fn iter(&self) -> impl Iterator<Item = MultiplierMatrix> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }
}

/// A point of `Q` kept as a candidate for the Lagrangian maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub x: Vec<i64>,
    pub y: ObjVec,
    /// `A¹x`.
    pub activity: Vec<f64>,
}

/// The relaxed region `Q` enumerated once and reduced for repeated
/// Lagrangian evaluations.
///
/// Points with the same dualized-row activity `A¹x` receive the same shift
/// under every `Λ`, so within each activity class only the points with
/// nondominated `Cx` can appear in a relaxation's maximum.
#[derive(Debug, Clone)]
pub struct LagrangianContext {
    k: usize,
    b1: Vec<f64>,
    candidates: Vec<Candidate>,
    q_size: usize,
}

fn bits_key(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| (x + 0.0).to_bits()).collect()
}

/// Activity `A¹x` shared by a group of points, with their `Max` archive.
type ActivityGroup = (Vec<f64>, Archive<Vec<i64>>);

impl LagrangianContext {
    pub fn new(inst: &MoipInstance) -> Result<Self> {
        let a1: Vec<&[f64]> = inst.dualized().iter().map(|&i| inst.a()[i].as_slice()).collect();
        let mut groups: BTreeMap<Vec<u64>, ActivityGroup> = BTreeMap::new();
        let mut q_size = 0;
        inst.for_each_q_point(|x| {
            q_size += 1;
            let act: Vec<f64> = a1.iter().map(|row| row.iter().zip(x).map(|(a, &v)| a * v as f64).sum()).collect();
            groups
                .entry(bits_key(&act))
                .or_insert_with(|| (act, Archive::new(Sense::Max)))
                .1
                .insert(inst.objective_of(x), x.to_vec());
        })?;
        let candidates = groups
            .into_values()
            .flat_map(|(act, archive)| {
                archive.into_sorted_entries().into_iter().map(move |(y, x)| Candidate { x, y, activity: act.clone() })
            })
            .collect();
        Ok(LagrangianContext {
            k: inst.k(),
            b1: inst.dualized().iter().map(|&i| inst.b()[i]).collect(),
            candidates,
            q_size,
        })
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    /// `|Q|` before reduction.
    pub fn q_size(&self) -> usize {
        self.q_size
    }

    pub fn is_q_empty(&self) -> bool {
        self.q_size == 0
    }

    fn check(&self, lambda: &MultiplierMatrix) -> Result<()> {
        MoipError::check_dim(self.k, lambda.k())?;
        MoipError::check_dim(self.b1.len(), lambda.m1())
    }

    fn shifted(&self, c: &Candidate, lambda: &MultiplierMatrix) -> ObjVec {
        let slack: Vec<f64> = self.b1.iter().zip(&c.activity).map(|(b, a)| b - a).collect();
        let shift = lambda.apply(&slack);
        ObjVec::from(c.y.iter().zip(shift).map(|(y, s)| y + s).collect::<Vec<f64>>())
    }

    /// `Max{Cx + Λ(b¹ − A¹x) : x ∈ Q}` with one preimage per point.
    pub fn relaxation_entries(&self, lambda: &MultiplierMatrix) -> Result<Vec<(ObjVec, Vec<i64>)>> {
        self.check(lambda)?;
        let mut archive = Archive::new(Sense::Max);
        for c in &self.candidates {
            archive.insert(self.shifted(c, lambda), c.x.clone());
        }
        Ok(archive.into_sorted_entries())
    }

    pub fn relaxation(&self, lambda: &MultiplierMatrix) -> Result<ExtendedSet> {
        let pts: Vec<ObjVec> = self.relaxation_entries(lambda)?.into_iter().map(|(y, _)| y).collect();
        max_filter(&pts)
    }

    /// `max_{x∈Q} μᵀ(Cx + Λ(b¹ − A¹x))`, or `-∞` for empty `Q`.
    pub fn relaxation_value(&self, lambda: &MultiplierMatrix, mu: &[f64]) -> Result<f64> {
        self.check(lambda)?;
        MoipError::check_dim(self.k, mu.len())?;
        Ok(self.candidates.iter().map(|c| self.shifted(c, lambda).dot(mu)).fold(f64::NEG_INFINITY, f64::max))
    }

    /// `Min(⋃ Max(Y_LR(Λ)))` over the given multipliers.
    pub fn dual_approx_list(&self, lambdas: &[MultiplierMatrix]) -> Result<ExtendedSet> {
        self.dual_approx_by(lambdas.len(), |i| lambdas[i].clone())
    }

    pub fn dual_approx(&self, grid: &MultiplierGrid) -> Result<ExtendedSet> {
        self.dual_approx_by(grid.len(), |i| grid.get(i))
    }

    /// Evaluates the relaxations in fixed-size chunks in parallel and merges
    /// the partial minima in index order, so the result does not depend on
    /// scheduling. Points within tolerance of a stored point are dropped by
    /// the archive before filtering.
    fn dual_approx_by<F>(&self, len: usize, lambda_at: F) -> Result<ExtendedSet>
    where
        F: Fn(usize) -> MultiplierMatrix + Sync,
    {
        const CHUNK: usize = 256;
        if len == 0 {
            return Err(MoipError::EmptyInput("multiplier set".into()));
        }
        if self.is_q_empty() {
            return Ok(ExtendedSet::MinusInf);
        }
        let partial: Vec<Archive<()>> = (0..len.div_ceil(CHUNK))
            .into_par_iter()
            .map(|chunk| -> Result<Archive<()>> {
                let mut archive = Archive::new(Sense::Min);
                for i in chunk * CHUNK..((chunk + 1) * CHUNK).min(len) {
                    for (y, _) in self.relaxation_entries(&lambda_at(i))? {
                        archive.insert(y, ());
                    }
                }
                Ok(archive)
            })
            .collect::<Result<_>>()?;
        let mut merged = Archive::new(Sense::Min);
        for part in partial {
            for (y, ()) in part.into_sorted_entries() {
                merged.insert(y, ());
            }
        }
        Ok(merged.into_extended())
    }

    /// `max μᵀCx` over `conv(Q) ∩ {A¹x ≤ b¹}`; `-∞` when that set is empty.
    pub fn scalarized_dual_value(&self, inst: &MoipInstance, mu: &[f64]) -> Result<f64> {
        MoipError::check_dim(self.k, mu.len())?;
        check_positive(mu)?;
        let pts = self.candidate_points()?;
        match conv_hull_lp(&pts, &inst.weighted_objective(mu), &inst.dualized_rows())? {
            SolveOutcome::Optimal { value, .. } => Ok(value),
            SolveOutcome::Infeasible => Ok(f64::NEG_INFINITY),
            SolveOutcome::Unbounded => Err(MoipError::Numerical("bounded hull LP reported unbounded".into())),
        }
    }

    fn candidate_points(&self) -> Result<Vec<Vec<i64>>> {
        if self.candidates.is_empty() {
            return Err(MoipError::EmptyInput("relaxed region Q".into()));
        }
        Ok(self.candidates.iter().map(|c| c.x.clone()).collect())
    }
}

/// `Max(Y_LR(Λ))`.
pub fn lagrangian_relaxation(inst: &MoipInstance, lambda: &MultiplierMatrix) -> Result<ExtendedSet> {
    LagrangianContext::new(inst)?.relaxation(lambda)
}

/// Grid approximation `Min(⋃_{Λ∈grid} Max(Y_LR(Λ)))` of the Lagrangian dual.
pub fn dual_approx(inst: &MoipInstance, grid: &MultiplierGrid) -> Result<ExtendedSet> {
    LagrangianContext::new(inst)?.dual_approx(grid)
}

/// The scalarized Lagrangian dual value for weight `μ > 0`, computed as
/// `max μᵀCx` over `conv(Q) ∩ {A¹x ≤ b¹}`.
pub fn scalarized_dual_value(inst: &MoipInstance, mu: &[f64]) -> Result<f64> {
    LagrangianContext::new(inst)?.scalarized_dual_value(inst, mu)
}

enum LpPoint {
    Point(ObjVec),
    Unbounded,
    Infeasible,
}

impl LpPoint {
    fn from_outcome(out: SolveOutcome, image: impl Fn(&[f64]) -> ObjVec) -> Self {
        match out {
            SolveOutcome::Optimal { solution, .. } => LpPoint::Point(image(&solution)),
            SolveOutcome::Unbounded => LpPoint::Unbounded,
            SolveOutcome::Infeasible => LpPoint::Infeasible,
        }
    }
}

/// Extreme nondominated points of a biobjective LP given a weighted oracle.
/// `maximize(w, floor)` maximizes `wᵀy`, optionally with `y_i ≥ v`.
fn lp_frontier<F>(maximize: F) -> Result<ExtendedSet>
where
    F: Fn(&[f64], Option<(usize, f64)>) -> Result<LpPoint>,
{
    let lexmax = |axis: usize| -> Result<LpPoint> {
        let mut w = [0.0; 2];
        w[axis] = 1.0;
        let first = match maximize(&w, None)? {
            LpPoint::Point(y) => y,
            other => return Ok(other),
        };
        let v = first[axis];
        let mut w2 = [0.0; 2];
        w2[1 - axis] = 1.0;
        match maximize(&w2, Some((axis, v)))? {
            LpPoint::Point(y) => Ok(LpPoint::Point(y)),
            // The floor row can only fail numerically; fall back to the first stage.
            _ => Ok(LpPoint::Point(first)),
        }
    };
    let p = match lexmax(0)? {
        LpPoint::Point(y) => y,
        LpPoint::Unbounded => return Ok(ExtendedSet::PlusInf),
        LpPoint::Infeasible => return Ok(ExtendedSet::MinusInf),
    };
    let LpPoint::Point(q) = lexmax(1)? else {
        return Err(MoipError::Numerical("frontier extremes disagree on feasibility".into()));
    };
    let mut found = vec![p.clone(), q.clone()];
    let mut stack = vec![(p, q)];
    while let Some((p, q)) = stack.pop() {
        if found.len() > 100_000 {
            return Err(MoipError::Numerical("frontier search did not terminate".into()));
        }
        let mu = [q[1] - p[1], p[0] - q[0]];
        if mu[0] <= 1e-12 || mu[1] <= 1e-12 {
            continue;
        }
        let LpPoint::Point(y) = maximize(&mu, None)? else {
            return Err(MoipError::Numerical("weighted LP lost feasibility".into()));
        };
        let base = p.dot(&mu);
        if y.dot(&mu) > base + 1e-7 * (1.0 + base.abs()) {
            found.push(y.clone());
            stack.push((p, y.clone()));
            stack.push((y, q));
        }
    }
    let mut pts = max_filter(&found)?.points().to_vec();
    sort_lex(&mut pts);
    Ok(ExtendedSet::Finite(Antichain::new(remove_collinear(pts))?))
}

fn require_biobjective(inst: &MoipInstance) -> Result<()> {
    if inst.k() != 2 {
        return Err(MoipError::UnsupportedDimension(inst.k()));
    }
    Ok(())
}

/// Vertices of the continuous relaxation's nondominated frontier.
pub fn molp_relaxation_frontier(inst: &MoipInstance) -> Result<ExtendedSet> {
    require_biobjective(inst)?;
    let rows = inst.all_rows();
    let bounds: Vec<(f64, f64)> = inst.boxes().map(|(l, h)| (l as f64, h as f64)).collect();
    lp_frontier(|w, floor| {
        let mut lp = LpProblem::new(inst.weighted_objective(w), Sense::Max);
        lp.rows = rows.clone();
        lp.bounds = bounds.clone();
        if let Some((i, v)) = floor {
            lp.rows.push(Row::ge(inst.c()[i].clone(), v));
        }
        Ok(LpPoint::from_outcome(lp_solve(&lp)?, |x| inst.objective_of_f64(x)))
    })
}

/// Supported nondominated points, the vertices of the convex-hull
/// relaxation's frontier (collinear supported points included).
pub fn ch_relaxation_frontier(inst: &MoipInstance) -> Result<ExtendedSet> {
    let f = supported_frontier(inst)?;
    max_filter(&f.points())
}

/// Vertices of the frontier of `max Cx` over `conv(Q) ∩ {A¹x ≤ b¹}`.
pub fn ldlp_bound(inst: &MoipInstance) -> Result<ExtendedSet> {
    require_biobjective(inst)?;
    let ctx = LagrangianContext::new(inst)?;
    if ctx.is_q_empty() {
        return Ok(ExtendedSet::MinusInf);
    }
    let pts = ctx.candidate_points()?;
    let dualized = inst.dualized_rows();
    lp_frontier(|w, floor| {
        let mut rows = dualized.clone();
        if let Some((i, v)) = floor {
            rows.push(Row::ge(inst.c()[i].clone(), v));
        }
        let out = conv_hull_lp(&pts, &inst.weighted_objective(w), &rows)?;
        Ok(LpPoint::from_outcome(out, |x| inst.objective_of_f64(x)))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FrLagOutcome {
    Violated { direction: Vec<f64>, gap: f64 },
    NotFalsified,
}

/// Compares the support functions of `conv(Q ∩ {A¹x ≤ b¹})` and
/// `conv(Q) ∩ {A¹x ≤ b¹}` along each direction and reports the first gap
/// above [`FR_LAG_GAP_TOL`]. A sampling falsifier: `NotFalsified` proves nothing.
pub fn check_fr_lag(inst: &MoipInstance, directions: &[Vec<f64>]) -> Result<FrLagOutcome> {
    let x = inst.feasible_points()?;
    if x.is_empty() {
        return Err(MoipError::EmptyInput("feasible region".into()));
    }
    let q = inst.q_points()?;
    let dualized = inst.dualized_rows();
    for d in directions {
        MoipError::check_dim(inst.n(), d.len())?;
        let h1 = x
            .iter()
            .map(|p| d.iter().zip(p).map(|(a, &v)| a * v as f64).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        let h2 = conv_hull_lp(&q, d, &dualized)?
            .value()
            .ok_or_else(|| MoipError::Numerical("hull LP failed on a nonempty region".into()))?;
        if h2 - h1 > FR_LAG_GAP_TOL {
            return Ok(FrLagOutcome::Violated { direction: d.clone(), gap: h2 - h1 });
        }
    }
    Ok(FrLagOutcome::NotFalsified)
}
