//! Piecewise-linear biobjective frontiers stored by their vertices.

use crate::error::{MoipError, Result};
use crate::pareto::{ExtendedSet, ObjVec, EPS_DOM};

/// A monotone chain in `R²`: vertices strictly increasing in the first
/// objective and strictly decreasing in the second. The chain's point set
/// is the union of segments joining consecutive vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontierChain {
    vertices: Vec<ObjVec>,
}

impl FrontierChain {
    /// Builds a chain from an antichain in `R²`.
    pub fn new(mut vertices: Vec<ObjVec>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(MoipError::EmptyInput("frontier chain".into()));
        }
        for v in &vertices {
            if v.dim() != 2 {
                return Err(MoipError::UnsupportedDimension(v.dim()));
            }
        }
        vertices.sort_by(|a, b| a[0].total_cmp(&b[0]));
        for w in vertices.windows(2) {
            if w[1][0] <= w[0][0] || w[1][1] >= w[0][1] {
                return Err(MoipError::Precondition("chain vertices must form an antichain".into()));
            }
        }
        Ok(FrontierChain { vertices })
    }

    pub fn from_set(set: &ExtendedSet) -> Result<Self> {
        match set {
            ExtendedSet::Finite(a) => Self::new(a.points().to_vec()),
            other => Err(MoipError::Precondition(format!("no finite chain for {other}"))),
        }
    }

    pub fn vertices(&self) -> &[ObjVec] {
        &self.vertices
    }

    fn first(&self) -> &ObjVec {
        &self.vertices[0]
    }

    fn last(&self) -> &ObjVec {
        &self.vertices[self.vertices.len() - 1]
    }

    /// Second coordinate of the chain at first coordinate `t`, clamped to
    /// the chain's range.
    fn height(&self, t: f64) -> f64 {
        let v = &self.vertices;
        if t <= v[0][0] {
            return v[0][1];
        }
        for w in v.windows(2) {
            if t <= w[1][0] {
                let s = (t - w[0][0]) / (w[1][0] - w[0][0]);
                return w[0][1] + s * (w[1][1] - w[0][1]);
            }
        }
        self.last()[1]
    }

    /// `p ≦ u` for some chain point `u`.
    pub fn covers(&self, p: &[f64]) -> bool {
        p[0] <= self.last()[0] + EPS_DOM && p[1] <= self.height(p[0].max(self.first()[0])) + EPS_DOM
    }

    /// Some chain point `u` satisfies `u ≤ p`, `u ≠ p`.
    pub fn undercuts(&self, p: &[f64]) -> bool {
        if p[0] < self.first()[0] - EPS_DOM {
            return false;
        }
        // The lowest chain point with first coordinate at most p[0].
        let t = p[0].min(self.last()[0]).max(self.first()[0]);
        let u = ObjVec::from(vec![t, self.height(t)]);
        u.dominated_by(&ObjVec::from(p.to_vec()))
    }

    /// `S ⪯ chain` for a finite point set `S`.
    pub fn dominates_points(&self, s: &[ObjVec]) -> bool {
        s.iter().all(|p| self.covers(p)) && !s.iter().any(|p| self.undercuts(p))
    }

    /// `self ⪯ other`, tested on this chain's vertices and segment midpoints.
    pub fn preceq(&self, other: &FrontierChain) -> bool {
        other.dominates_points(&self.vertices_and_midpoints())
    }

    fn vertices_and_midpoints(&self) -> Vec<ObjVec> {
        let mut out = self.vertices.clone();
        for w in self.vertices.windows(2) {
            out.push(ObjVec::from(vec![(w[0][0] + w[1][0]) / 2.0, (w[0][1] + w[1][1]) / 2.0]));
        }
        out
    }

    /// Vertices plus evenly spaced points on each segment, no two
    /// consecutive samples farther apart than `spacing`.
    pub fn sample(&self, spacing: f64) -> Vec<ObjVec> {
        assert!(spacing > 0.0, "sample spacing must be positive");
        let mut out = vec![self.first().clone()];
        for w in self.vertices.windows(2) {
            let len = ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt();
            let pieces = (len / spacing).ceil().max(1.0) as usize;
            for i in 1..pieces {
                let s = i as f64 / pieces as f64;
                out.push(ObjVec::from(vec![w[0][0] + s * (w[1][0] - w[0][0]), w[0][1] + s * (w[1][1] - w[0][1])]));
            }
            out.push(w[1].clone());
        }
        out
    }
}

/// Drops vertices lying on the segment through their neighbours.
pub(crate) fn remove_collinear(mut v: Vec<ObjVec>) -> Vec<ObjVec> {
    let mut i = 1;
    while i + 1 < v.len() {
        let (a, b, c) = (&v[i - 1], &v[i], &v[i + 1]);
        let cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        let scale = (c[0] - a[0]).abs().max((c[1] - a[1]).abs()).max(1.0);
        if cross.abs() <= 1e-9 * scale * scale {
            v.remove(i);
        } else {
            i += 1;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(v: &[[f64; 2]]) -> FrontierChain {
        FrontierChain::new(v.iter().map(|p| ObjVec::from(*p)).collect()).unwrap()
    }

    #[test]
    fn covers_and_undercuts() {
        let c = chain(&[[0.0, 2.0], [2.0, 0.0]]);
        assert!(c.covers(&[1.0, 1.0]));
        assert!(c.covers(&[0.5, 0.5]));
        assert!(!c.covers(&[1.0, 1.5]));
        assert!(!c.covers(&[3.0, -5.0]));
        assert!(c.undercuts(&[1.0, 1.5]));
        assert!(!c.undercuts(&[1.0, 1.0]));
        assert!(!c.undercuts(&[-1.0, 5.0]));
        assert!(c.undercuts(&[5.0, 0.0]));
    }

    #[test]
    fn chain_order() {
        let ch = chain(&[[-0.5, 1.0], [1.0, -0.5]]);
        let molp = chain(&[[-0.5, 1.0], [0.0, 0.75], [0.75, 0.0], [1.0, -0.5]]);
        assert!(ch.preceq(&molp));
        assert!(!molp.preceq(&ch));
        assert!(ch.preceq(&ch));
    }

    #[test]
    fn samples_respect_spacing() {
        let c = chain(&[[0.0, 1.0], [1.0, 0.0], [3.0, -1.0]]);
        let s = c.sample(0.3);
        assert!(s.windows(2).all(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]) <= 0.3 + 1e-12));
        assert!(c.vertices().iter().all(|v| s.contains(v)));
        assert!(s.iter().all(|p| c.covers(p) && !c.undercuts(p)));
    }

    #[test]
    fn collinear_removed() {
        let v = [[0.0, 3.0], [1.0, 2.0], [2.0, 1.0], [3.0, -1.0]].map(ObjVec::from).to_vec();
        assert_eq!(remove_collinear(v).len(), 3);
    }

    #[test]
    fn rejects_comparable_vertices() {
        assert!(FrontierChain::new(vec![ObjVec::from([0.0, 0.0]), ObjVec::from([1.0, 1.0])]).is_err());
    }
}
