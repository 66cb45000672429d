//! Vector orders, nondominance filters and the Pareto set-ordering on the
//! extended family of antichains (finite antichains plus `±M∞`).
//!
//! All comparisons use the absolute tolerance [`EPS_DOM`]. Two coordinates
//! closer than the tolerance are treated as equal.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{MoipError, Result};

/// Absolute tolerance for equality and domination tests.
pub const EPS_DOM: f64 = 1e-9;

/// A point in objective space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjVec(Vec<f64>);

impl ObjVec {
    /// Builds a vector, rejecting empty input and non-finite components.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_finite()) {
            return Err(MoipError::InvalidVector);
        }
        Ok(ObjVec(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &ObjVec) -> ObjVec {
        ObjVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Equality within [`EPS_DOM`] in every coordinate.
    pub fn approx_eq(&self, other: &ObjVec) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| (a - b).abs() <= EPS_DOM)
    }

    /// `self ≦ other` componentwise, within tolerance.
    pub fn weakly_below(&self, other: &ObjVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a <= b + EPS_DOM)
    }

    /// `self ≤ other`: weakly below and not equal.
    pub fn dominated_by(&self, other: &ObjVec) -> bool {
        self.weakly_below(other) && !self.approx_eq(other)
    }

    fn lex_cmp(&self, other: &ObjVec) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.partial_cmp(b).unwrap_or(Ordering::Equal) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl Deref for ObjVec {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ObjVec {
    fn from(v: Vec<f64>) -> Self {
        debug_assert!(!v.is_empty() && v.iter().all(|c| c.is_finite()));
        ObjVec(v)
    }
}

impl<const N: usize> From<[f64; N]> for ObjVec {
    fn from(v: [f64; N]) -> Self {
        ObjVec::from(v.to_vec())
    }
}

impl fmt::Display for ObjVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Outcome of comparing two vectors under `<`, `≤` and `≦`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// `x < y` in every coordinate.
    Lt,
    /// `x ≤ y` but not `x < y`.
    LeqMixed,
    Eq,
    Incomparable,
    /// `x > y` in every coordinate.
    Gt,
    /// `x ≥ y` but not `x > y`.
    GeqMixed,
}

/// Classifies the pair `(x, y)`.
pub fn vec_leq(x: &[f64], y: &[f64]) -> Result<Comparison> {
    MoipError::check_dim(x.len(), y.len())?;
    let mut all_lt = true;
    let mut all_gt = true;
    let mut all_le = true;
    let mut all_ge = true;
    for (a, b) in x.iter().zip(y) {
        let d = b - a;
        all_lt &= d > EPS_DOM;
        all_gt &= d < -EPS_DOM;
        all_le &= d >= -EPS_DOM;
        all_ge &= d <= EPS_DOM;
    }
    Ok(match (all_le, all_ge) {
        (true, true) => Comparison::Eq,
        (true, false) if all_lt => Comparison::Lt,
        (true, false) => Comparison::LeqMixed,
        (false, true) if all_gt => Comparison::Gt,
        (false, true) => Comparison::GeqMixed,
        (false, false) => Comparison::Incomparable,
    })
}

/// Optimization sense; selects which of `±M∞` an empty set maps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Max,
    Min,
}

/// A nonempty finite antichain stored in ascending lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Antichain {
    points: Vec<ObjVec>,
}

impl Antichain {
    /// Validates that `points` is nonempty, of uniform dimension and mutually incomparable.
    pub fn new(points: Vec<ObjVec>) -> Result<Self> {
        if points.is_empty() {
            return Err(MoipError::EmptyInput("antichain".into()));
        }
        check_uniform_dim(&points)?;
        if !is_antichain(&points)? {
            return Err(MoipError::Precondition("points contain a comparable pair".into()));
        }
        Ok(Self::from_sorted(points))
    }

    fn from_sorted(mut points: Vec<ObjVec>) -> Self {
        points.sort_by(|a, b| a.lex_cmp(b));
        Antichain { points }
    }

    pub fn points(&self) -> &[ObjVec] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn into_points(self) -> Vec<ObjVec> {
        self.points
    }

    /// Membership within [`EPS_DOM`].
    pub fn contains(&self, p: &ObjVec) -> bool {
        self.points.iter().any(|q| q.approx_eq(p))
    }
}

/// Element of the extended family: a finite antichain or one of `±M∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExtendedSet {
    Finite(Antichain),
    PlusInf,
    MinusInf,
}

impl ExtendedSet {
    pub fn points(&self) -> &[ObjVec] {
        match self {
            ExtendedSet::Finite(a) => a.points(),
            _ => &[],
        }
    }

    pub fn as_finite(&self) -> Option<&Antichain> {
        match self {
            ExtendedSet::Finite(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedSet::Finite(_))
    }

    /// Set equality of finite antichains within tolerance; symbols compare by identity.
    pub fn approx_eq(&self, other: &ExtendedSet) -> bool {
        match (self, other) {
            (ExtendedSet::Finite(a), ExtendedSet::Finite(b)) => {
                a.len() == b.len() && a.points().iter().all(|p| b.contains(p))
            }
            (ExtendedSet::PlusInf, ExtendedSet::PlusInf) => true,
            (ExtendedSet::MinusInf, ExtendedSet::MinusInf) => true,
            _ => false,
        }
    }
}

impl fmt::Display for ExtendedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedSet::PlusInf => write!(f, "+M_inf"),
            ExtendedSet::MinusInf => write!(f, "-M_inf"),
            ExtendedSet::Finite(a) => {
                write!(f, "{{")?;
                for (i, p) in a.points().iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

fn check_uniform_dim(points: &[ObjVec]) -> Result<()> {
    if let Some(first) = points.first() {
        for p in points {
            MoipError::check_dim(first.dim(), p.dim())?;
        }
    }
    Ok(())
}

/// Keeps the points nondominated in direction `sense`, collapsing
/// near-duplicates. Empty input maps to `-M∞` for `Max` and `+M∞` for `Min`.
pub fn nondominated_filter(points: &[ObjVec], sense: Sense) -> Result<ExtendedSet> {
    if points.is_empty() {
        return Ok(match sense {
            Sense::Max => ExtendedSet::MinusInf,
            Sense::Min => ExtendedSet::PlusInf,
        });
    }
    check_uniform_dim(points)?;
    let mut archive = Archive::new(sense);
    for p in points {
        archive.insert(p.clone(), ());
    }
    Ok(archive.into_extended())
}

/// `Max(points)`.
pub fn max_filter(points: &[ObjVec]) -> Result<ExtendedSet> {
    nondominated_filter(points, Sense::Max)
}

/// `Min(points)`.
pub fn min_filter(points: &[ObjVec]) -> Result<ExtendedSet> {
    nondominated_filter(points, Sense::Min)
}

/// True iff no two distinct points are comparable under `≤`.
pub fn is_antichain(points: &[ObjVec]) -> Result<bool> {
    check_uniform_dim(points)?;
    for (i, s) in points.iter().enumerate() {
        for t in &points[i + 1..] {
            if s.dominated_by(t) || t.dominated_by(s) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The Pareto set-ordering `S ⪯ T` on arbitrary nonempty point sets:
/// every `s` is weakly below some `t`, and no `t` lies strictly below any `s`.
pub fn preceq_points(s: &[ObjVec], t: &[ObjVec]) -> Result<bool> {
    if s.is_empty() || t.is_empty() {
        return Err(MoipError::EmptyInput("set-ordering operands".into()));
    }
    let dim = s[0].dim();
    for p in s.iter().chain(t) {
        MoipError::check_dim(dim, p.dim())?;
    }
    let covered = s.iter().all(|a| t.iter().any(|b| a.weakly_below(b)));
    if !covered {
        return Ok(false);
    }
    let undercut = s.iter().any(|a| t.iter().any(|b| b.dominated_by(a)));
    Ok(!undercut)
}

/// `S ⪯ T` on the extended family, with `-M∞ ⪯ X ⪯ +M∞` for every `X`.
pub fn preceq(s: &ExtendedSet, t: &ExtendedSet) -> Result<bool> {
    use ExtendedSet::*;
    match (s, t) {
        (MinusInf, _) => Ok(true),
        (_, PlusInf) => Ok(true),
        (PlusInf, _) => Ok(false),
        (_, MinusInf) => Ok(false),
        (Finite(a), Finite(b)) => preceq_points(a.points(), b.points()),
    }
}

/// Minkowski sum `{s + t}`.
pub fn minkowski_sum(s: &[ObjVec], t: &[ObjVec]) -> Vec<ObjVec> {
    s.iter().flat_map(|a| t.iter().map(move |b| a.add(b))).collect()
}

/// Incrementally maintained nondominated set with a payload per point.
///
/// Inserting a point weakly dominated by (or equal to) a stored point is a
/// no-op; otherwise every stored point it dominates is evicted.
#[derive(Debug, Clone)]
pub struct Archive<P> {
    sense: Sense,
    entries: Vec<(ObjVec, P)>,
}

impl<P> Archive<P> {
    pub fn new(sense: Sense) -> Self {
        Archive { sense, entries: Vec::new() }
    }

    fn beats(&self, a: &ObjVec, b: &ObjVec) -> bool {
        // true when `a` weakly dominates `b` in the archive's direction
        match self.sense {
            Sense::Max => b.weakly_below(a),
            Sense::Min => a.weakly_below(b),
        }
    }

    /// Returns true if the point was stored.
    pub fn insert(&mut self, y: ObjVec, payload: P) -> bool {
        if self.entries.iter().any(|(e, _)| self.beats(e, &y)) {
            return false;
        }
        let sense = self.sense;
        self.entries.retain(|(e, _)| match sense {
            Sense::Max => !e.weakly_below(&y),
            Sense::Min => !y.weakly_below(e),
        });
        self.entries.push((y, payload));
        true
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(ObjVec, P)] {
        &self.entries
    }

    /// Entries sorted lexicographically by point.
    pub fn into_sorted_entries(mut self) -> Vec<(ObjVec, P)> {
        self.entries.sort_by(|a, b| a.0.lex_cmp(&b.0));
        self.entries
    }

    pub fn into_extended(self) -> ExtendedSet {
        let sense = self.sense;
        let points: Vec<ObjVec> = self.entries.into_iter().map(|(y, _)| y).collect();
        if points.is_empty() {
            match sense {
                Sense::Max => ExtendedSet::MinusInf,
                Sense::Min => ExtendedSet::PlusInf,
            }
        } else {
            ExtendedSet::Finite(Antichain::from_sorted(points))
        }
    }
}

/// Sorts points in ascending lexicographic order.
pub fn sort_lex(points: &mut [ObjVec]) {
    points.sort_by(|a, b| a.lex_cmp(b));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> ObjVec {
        ObjVec::from(c.to_vec())
    }

    fn set(pts: &[&[f64]]) -> Vec<ObjVec> {
        pts.iter().map(|p| v(p)).collect()
    }

    #[test]
    fn comparison_cases() {
        assert_eq!(vec_leq(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), Comparison::Lt);
        assert_eq!(vec_leq(&[0.0, 0.0], &[0.0, 1.0]).unwrap(), Comparison::LeqMixed);
        assert_eq!(vec_leq(&[-1.0, 1.0], &[1.0, -1.0]).unwrap(), Comparison::Incomparable);
        assert_eq!(vec_leq(&[2.0, 2.0], &[1.0, 1.0]).unwrap(), Comparison::Gt);
        assert_eq!(vec_leq(&[2.0, 1.0], &[1.0, 1.0]).unwrap(), Comparison::GeqMixed);
        assert_eq!(vec_leq(&[1.0], &[1.0]).unwrap(), Comparison::Eq);
        assert!(matches!(vec_leq(&[1.0], &[1.0, 2.0]), Err(MoipError::DimensionMismatch { .. })));
    }

    #[test]
    fn max_filter_examples() {
        let pts = set(&[&[0.0, 0.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]]);
        assert!(max_filter(&pts)
            .unwrap()
            .approx_eq(&ExtendedSet::Finite(Antichain::new(set(&[&[1.0, 1.0]])).unwrap())));

        assert_eq!(max_filter(&[]).unwrap(), ExtendedSet::MinusInf);
        assert_eq!(min_filter(&[]).unwrap(), ExtendedSet::PlusInf);

        let pts = set(&[&[1.0, -0.5], &[0.0, 0.0], &[-0.5, 1.0], &[0.5, 0.5]]);
        let got = max_filter(&pts).unwrap();
        let want = set(&[&[-0.5, 1.0], &[0.5, 0.5], &[1.0, -0.5]]);
        assert_eq!(got.points(), want.as_slice());
    }

    #[test]
    fn duplicates_collapse() {
        let pts = set(&[&[1.0, 2.0], &[1.0, 2.0], &[1.0 + 1e-12, 2.0]]);
        assert_eq!(max_filter(&pts).unwrap().points().len(), 1);
    }

    #[test]
    fn set_order_remark() {
        let s = set(&[&[0.0, 0.0]]);
        let t = set(&[&[-1.0, 1.0], &[2.0, 2.0], &[1.0, -1.0]]);
        assert!(preceq_points(&s, &t).unwrap());
        let min_t = min_filter(&t).unwrap();
        assert!(!preceq_points(&s, min_t.points()).unwrap());
    }

    #[test]
    fn set_order_symbols() {
        let a = ExtendedSet::Finite(Antichain::new(set(&[&[1.0, 2.0]])).unwrap());
        use ExtendedSet::*;
        assert!(preceq(&MinusInf, &a).unwrap());
        assert!(preceq(&MinusInf, &MinusInf).unwrap());
        assert!(preceq(&a, &PlusInf).unwrap());
        assert!(preceq(&PlusInf, &PlusInf).unwrap());
        assert!(!preceq(&PlusInf, &a).unwrap());
        assert!(!preceq(&a, &MinusInf).unwrap());
        assert!(!preceq(&PlusInf, &MinusInf).unwrap());
    }

    #[test]
    fn antichain_checks() {
        assert!(is_antichain(&set(&[&[1.0, -0.5], &[0.0, 0.0], &[-0.5, 1.0]])).unwrap());
        assert!(!is_antichain(&set(&[&[0.0, 0.0], &[1.0, 1.0]])).unwrap());
        assert!(is_antichain(&set(&[&[3.0, 3.0]])).unwrap());
        assert!(Antichain::new(set(&[&[0.0, 0.0], &[1.0, 1.0]])).is_err());
    }

    #[test]
    fn invalid_vectors_rejected() {
        assert!(ObjVec::new(vec![]).is_err());
        assert!(ObjVec::new(vec![f64::NAN]).is_err());
        assert!(ObjVec::new(vec![f64::INFINITY, 0.0]).is_err());
    }
}
