//! Multiobjective integer program instances, nondominated-set enumeration,
//! weighted-sum scalarization and the supported frontier for two objectives.

use serde::{Deserialize, Serialize};

use crate::error::{MoipError, Result};
use crate::pareto::{Archive, ExtendedSet, ObjVec, Sense};
use crate::solver::{
    enumerate_feasible_with_cap, for_each_box_point, lp_solve, point_satisfies, IpProblem, LpProblem, Row,
    SolveOutcome, DEFAULT_ENUMERATION_CAP,
};

/// Extreme-weight offset used by the dichotomic search in place of zero.
pub const EPS_HAT: f64 = 1e-4;
/// Lower bound on each weight component in the supportedness LP.
pub const EPS_MU: f64 = 1e-6;

/// `max Cx` subject to `Ax ≤ b` and integer boxes, with a subset of rows
/// marked for dualization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoipInstance {
    c: Vec<Vec<f64>>,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    dualized: Vec<usize>,
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl MoipInstance {
    /// `c` is `k × n`, `a` is `m × n`; `dualized` holds zero-based row
    /// indices; `boxes` are inclusive integer intervals.
    pub fn new(
        c: Vec<Vec<f64>>,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        dualized: Vec<usize>,
        boxes: Vec<(i64, i64)>,
    ) -> Result<Self> {
        let n = boxes.len();
        if c.is_empty() || n == 0 {
            return Err(MoipError::Precondition("an instance needs at least one objective and one variable".into()));
        }
        for row in c.iter().chain(&a) {
            MoipError::check_dim(n, row.len())?;
            if row.iter().any(|v| !v.is_finite()) {
                return Err(MoipError::Precondition("non-finite matrix entry".into()));
            }
        }
        MoipError::check_dim(a.len(), b.len())?;
        if b.iter().any(|v| !v.is_finite()) {
            return Err(MoipError::Precondition("non-finite right-hand side".into()));
        }
        let mut dualized = dualized;
        dualized.sort_unstable();
        dualized.dedup();
        if let Some(&i) = dualized.iter().find(|&&i| i >= a.len()) {
            return Err(MoipError::Precondition(format!("dualized row {i} out of range for {} rows", a.len())));
        }
        if let Some(j) = boxes.iter().position(|&(l, h)| l > h) {
            return Err(MoipError::Precondition(format!("empty box for variable {j}")));
        }
        let (lo, hi) = boxes.into_iter().unzip();
        Ok(MoipInstance { c, a, b, dualized, lo, hi })
    }

    pub fn k(&self) -> usize {
        self.c.len()
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn c(&self) -> &[Vec<f64>] {
        &self.c
    }

    pub fn a(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn dualized(&self) -> &[usize] {
        &self.dualized
    }

    pub fn is_dualized(&self, row: usize) -> bool {
        self.dualized.binary_search(&row).is_ok()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn boxes(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.lo.iter().copied().zip(self.hi.iter().copied())
    }

    /// Same instance with right-hand side `b`.
    pub fn with_rhs(&self, b: Vec<f64>) -> Result<Self> {
        MoipError::check_dim(self.m(), b.len())?;
        if b.iter().any(|v| !v.is_finite()) {
            return Err(MoipError::Precondition("non-finite right-hand side".into()));
        }
        Ok(MoipInstance { b, ..self.clone() })
    }

    /// Same instance with every row kept (nothing dualized).
    pub fn without_dualization(&self) -> Self {
        MoipInstance { dualized: Vec::new(), ..self.clone() }
    }

    /// `Cx`.
    pub fn objective_of(&self, x: &[i64]) -> ObjVec {
        ObjVec::from(self.c.iter().map(|row| row.iter().zip(x).map(|(c, &v)| c * v as f64).sum()).collect::<Vec<f64>>())
    }

    /// `Cx` for a continuous point.
    pub fn objective_of_f64(&self, x: &[f64]) -> ObjVec {
        ObjVec::from(self.c.iter().map(|row| row.iter().zip(x).map(|(c, v)| c * v).sum()).collect::<Vec<f64>>())
    }

    pub fn row(&self, i: usize) -> Row {
        Row::le(self.a[i].clone(), self.b[i])
    }

    pub fn all_rows(&self) -> Vec<Row> {
        (0..self.m()).map(|i| self.row(i)).collect()
    }

    /// Rows `A²x ≤ b²` defining `Q`.
    pub fn kept_rows(&self) -> Vec<Row> {
        (0..self.m()).filter(|&i| !self.is_dualized(i)).map(|i| self.row(i)).collect()
    }

    /// Rows `A¹x ≤ b¹`.
    pub fn dualized_rows(&self) -> Vec<Row> {
        self.dualized.iter().map(|&i| self.row(i)).collect()
    }

    pub fn is_feasible(&self, x: &[i64]) -> bool {
        x.len() == self.n()
            && x.iter().zip(self.boxes()).all(|(&v, (l, h))| l <= v && v <= h)
            && point_satisfies(&self.all_rows(), x)
    }

    /// The feasible region `X`, lexicographically ordered.
    pub fn feasible_points(&self) -> Result<Vec<Vec<i64>>> {
        enumerate_feasible_with_cap(&self.box_problem(self.all_rows()), DEFAULT_ENUMERATION_CAP)
    }

    /// The relaxed region `Q` (kept rows and boxes only).
    pub fn q_points(&self) -> Result<Vec<Vec<i64>>> {
        enumerate_feasible_with_cap(&self.box_problem(self.kept_rows()), DEFAULT_ENUMERATION_CAP)
    }

    /// Visits every point of `Q` without materializing the set.
    pub fn for_each_q_point<F: FnMut(&[i64])>(&self, mut visit: F) -> Result<()> {
        let kept = self.kept_rows();
        for_each_box_point(&self.lo, &self.hi, DEFAULT_ENUMERATION_CAP, |x| {
            if point_satisfies(&kept, x) {
                visit(x)
            }
        })
    }

    fn box_problem(&self, rows: Vec<Row>) -> IpProblem {
        IpProblem { objective: vec![0.0; self.n()], rows, lo: self.lo.clone(), hi: self.hi.clone() }
    }

    /// `μᵀC`.
    pub fn weighted_objective(&self, mu: &[f64]) -> Vec<f64> {
        (0..self.n()).map(|j| self.c.iter().zip(mu).map(|(row, w)| w * row[j]).sum()).collect()
    }
}

/// Nondominated objective values with one preimage each (the
/// lexicographically smallest), sorted lexicographically.
pub fn efficient_points(inst: &MoipInstance) -> Result<Vec<(ObjVec, Vec<i64>)>> {
    let mut archive = Archive::new(Sense::Max);
    let rows = inst.all_rows();
    for_each_box_point(inst.lo(), inst.hi(), DEFAULT_ENUMERATION_CAP, |x| {
        if point_satisfies(&rows, x) {
            archive.insert(inst.objective_of(x), x.to_vec());
        }
    })?;
    Ok(archive.into_sorted_entries())
}

/// `Max{Cx : x ∈ X}`, or `-M∞` when `X` is empty.
pub fn nondominated_set(inst: &MoipInstance) -> Result<ExtendedSet> {
    let mut archive = Archive::new(Sense::Max);
    let rows = inst.all_rows();
    for_each_box_point(inst.lo(), inst.hi(), DEFAULT_ENUMERATION_CAP, |x| {
        if point_satisfies(&rows, x) {
            archive.insert(inst.objective_of(x), ());
        }
    })?;
    Ok(archive.into_extended())
}

pub(crate) fn check_positive(mu: &[f64]) -> Result<()> {
    match mu.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
        Some(index) => Err(MoipError::NonPositiveWeight { index, value: mu[index] }),
        None => Ok(()),
    }
}

/// `max μᵀCx` over the instance's rows and boxes.
pub fn scalarize(inst: &MoipInstance, mu: &[f64]) -> Result<IpProblem> {
    MoipError::check_dim(inst.k(), mu.len())?;
    check_positive(mu)?;
    Ok(IpProblem {
        objective: inst.weighted_objective(mu),
        rows: inst.all_rows(),
        lo: inst.lo().to_vec(),
        hi: inst.hi().to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierEntry {
    pub x: Vec<i64>,
    pub y: ObjVec,
    /// A strictly positive weight for which `x` is optimal.
    pub mu: ObjVec,
}

/// Supported nondominated points ordered by ascending first objective,
/// together with every weight the search evaluated and its optimal value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportedFrontier {
    pub entries: Vec<FrontierEntry>,
    pub weights: Vec<(ObjVec, f64)>,
}

impl SupportedFrontier {
    /// True for an infeasible instance.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn points(&self) -> Vec<ObjVec> {
        self.entries.iter().map(|e| e.y.clone()).collect()
    }
}

fn tie_tol(v: f64) -> f64 {
    1e-9 * (1.0 + v.abs())
}

struct Dichotomic<'a> {
    nd: &'a [(ObjVec, Vec<i64>)],
    found: Vec<Option<ObjVec>>,
    weights: Vec<(ObjVec, f64)>,
}

impl Dichotomic<'_> {
    /// Optimal value for `mu` and the indices of every optimum.
    fn argmax_all(&self, mu: &[f64]) -> (f64, Vec<usize>) {
        let vals: Vec<f64> = self.nd.iter().map(|(y, _)| y.dot(mu)).collect();
        let best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let ties = (0..vals.len()).filter(|&i| vals[i] >= best - tie_tol(best)).collect();
        (best, ties)
    }

    fn mark(&mut self, idx: &[usize], mu: &ObjVec) {
        for &i in idx {
            self.found[i].get_or_insert_with(|| mu.clone());
        }
    }

    /// Points between `p` (larger first objective) and `q` (larger second).
    fn recurse(&mut self, p: usize, q: usize, depth: usize) -> Result<()> {
        if depth > 10_000 {
            return Err(MoipError::Numerical("dichotomic search did not terminate".into()));
        }
        let (yp, yq) = (&self.nd[p].0, &self.nd[q].0);
        let mu = ObjVec::from(vec![yq[1] - yp[1], yp[0] - yq[0]]);
        let base = yp.dot(&mu);
        let (best, ties) = self.argmax_all(&mu);
        self.weights.push((mu.clone(), best));
        self.mark(&ties, &mu);
        if best <= base + tie_tol(base) {
            return Ok(());
        }
        let nd = self.nd;
        let right = *ties.iter().max_by(|&&a, &&b| nd[a].0[0].total_cmp(&nd[b].0[0])).unwrap();
        let left = *ties.iter().max_by(|&&a, &&b| nd[a].0[1].total_cmp(&nd[b].0[1])).unwrap();
        self.recurse(p, right, depth + 1)?;
        self.recurse(left, q, depth + 1)
    }
}

/// Weight `(1, δ)` certifying the lexicographic maximum at `top` as the
/// unique optimum, with `δ ≤ EPS_HAT`. `axis` selects the leading objective.
fn extreme_weight(nd: &[(ObjVec, Vec<i64>)], top: usize, axis: usize) -> ObjVec {
    let other = 1 - axis;
    let yt = &nd[top].0;
    let mut delta = EPS_HAT;
    for (y, _) in nd {
        let (gain, loss) = (y[other] - yt[other], yt[axis] - y[axis]);
        if gain > 0.0 && loss > 0.0 {
            delta = delta.min(0.5 * loss / gain);
        }
    }
    let mut mu = vec![0.0; 2];
    mu[axis] = 1.0;
    mu[other] = delta;
    ObjVec::from(mu)
}

/// Supported nondominated points of a biobjective instance by dichotomic
/// weighted-sum search over the enumerated nondominated set.
///
/// The two ends are the lexicographic maxima, certified by weights
/// `(1, δ)` and `(δ, 1)` with `δ = EPS_HAT` unless a smaller value is needed
/// for strict optimality. Every tie at an evaluated weight is collected, so
/// points interior to a hull segment are included.
pub fn supported_frontier(inst: &MoipInstance) -> Result<SupportedFrontier> {
    if inst.k() != 2 {
        return Err(MoipError::UnsupportedDimension(inst.k()));
    }
    let nd = efficient_points(inst)?;
    supported_from_efficient(nd)
}

pub(crate) fn supported_from_efficient(nd: Vec<(ObjVec, Vec<i64>)>) -> Result<SupportedFrontier> {
    if nd.is_empty() {
        return Ok(SupportedFrontier { entries: Vec::new(), weights: Vec::new() });
    }
    // `nd` is lexicographically sorted, so the last point has the largest
    // first objective and the first point the largest second objective.
    let (p, q) = (nd.len() - 1, 0);
    let mut search = Dichotomic { nd: &nd, found: vec![None; nd.len()], weights: Vec::new() };
    for (top, axis) in [(p, 0), (q, 1)] {
        let mu = extreme_weight(&nd, top, axis);
        let (best, _) = search.argmax_all(&mu);
        search.weights.push((mu.clone(), best));
        search.mark(&[top], &mu);
    }
    if p != q {
        search.recurse(p, q, 0)?;
    }
    let weights = search.weights;
    let entries = search
        .found
        .into_iter()
        .zip(&nd)
        .filter_map(|(mu, (y, x))| mu.map(|mu| FrontierEntry { x: x.clone(), y: y.clone(), mu }))
        .collect();
    Ok(SupportedFrontier { entries, weights })
}

/// Whether some weight `μ ≥ EPS_MU`, `Σμ = 1`, makes `x` optimal, decided by
/// an LP over the enumerated nondominated objective values.
pub fn is_supported(inst: &MoipInstance, x: &[i64]) -> Result<bool> {
    MoipError::check_dim(inst.n(), x.len())?;
    if !inst.is_feasible(x) {
        return Err(MoipError::Precondition("point is not feasible".into()));
    }
    let y = inst.objective_of(x);
    let nd = nondominated_set(inst)?;
    let k = inst.k();
    let mut lp = LpProblem::new(vec![0.0; k], Sense::Max).with_row(Row::eq(vec![1.0; k], 1.0));
    lp.bounds = vec![(EPS_MU, f64::INFINITY); k];
    for other in nd.points() {
        let diff: Vec<f64> = y.iter().zip(other.iter()).map(|(a, b)| a - b).collect();
        lp.rows.push(Row::ge(diff, 0.0));
    }
    Ok(matches!(lp_solve(&lp)?, SolveOutcome::Optimal { .. }))
}

/// Componentwise maxima of `Cx` over the feasible region.
pub fn ideal_point(inst: &MoipInstance) -> Result<ObjVec> {
    extreme_point(inst, f64::max)
}

/// Componentwise minima over the nondominated points.
pub fn nadir_point(inst: &MoipInstance) -> Result<ObjVec> {
    extreme_point(inst, f64::min)
}

fn extreme_point(inst: &MoipInstance, pick: fn(f64, f64) -> f64) -> Result<ObjVec> {
    // The coordinatewise maximum over X equals that over Max(X).
    let nd = nondominated_set(inst)?;
    let pts = nd.points();
    let Some(first) = pts.first() else {
        return Err(MoipError::Infeasible("instance has no feasible point".into()));
    };
    let mut out = first.coords().to_vec();
    for p in &pts[1..] {
        for (o, v) in out.iter_mut().zip(p.iter()) {
            *o = pick(*o, *v);
        }
    }
    Ok(ObjVec::from(out))
}
