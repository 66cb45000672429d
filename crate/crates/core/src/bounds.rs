//! Lower bound sets, the scaled distance between bound sets, and strength
//! and validity diagnostics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::FrontierChain;
use crate::error::{MoipError, Result};
use crate::model::SupportedFrontier;
use crate::pareto::{ExtendedSet, ObjVec, EPS_DOM};
use crate::relax::{LagrangianContext, MultiplierGrid};

/// Chain sample spacing as a fraction of the scale `γ`.
pub const CHAIN_SPACING_FACTOR: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundMethod {
    Lagrangian,
    ConvexHull,
}

impl BoundMethod {
    pub fn name(self) -> &'static str {
        match self {
            BoundMethod::Lagrangian => "lagrangian",
            BoundMethod::ConvexHull => "convex_hull",
        }
    }
}

/// How duplicates are counted when averaging norms over `L ∪ U`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaMode {
    /// Each distinct point once (exact equality).
    #[default]
    SetUnion,
    /// Every listed point, duplicates included.
    Multiset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub method: BoundMethod,
    pub lower: Vec<ObjVec>,
    pub upper: Vec<ObjVec>,
    pub d: f64,
    pub gamma: f64,
    pub strong: bool,
    /// Sample spacing used to discretize a frontier chain, if any.
    pub chain_spacing: Option<f64>,
}

/// Componentwise minima of adjacent supported points (sorted by the first
/// objective); a single supported point is its own bound.
pub fn local_nadir_lower_bound(frontier: &SupportedFrontier) -> Result<Vec<ObjVec>> {
    let mut pts = frontier.points();
    if pts.is_empty() {
        return Err(MoipError::EmptyInput("supported frontier".into()));
    }
    for p in &pts {
        if p.dim() != 2 {
            return Err(MoipError::UnsupportedDimension(p.dim()));
        }
    }
    if pts.len() == 1 {
        return Ok(pts);
    }
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
    Ok(pts.windows(2).map(|w| ObjVec::from(vec![w[0][0].min(w[1][0]), w[0][1].min(w[1][1])])).collect())
}

/// Mean Euclidean norm over `L ∪ U`.
pub fn gamma(lower: &[ObjVec], upper: &[ObjVec], mode: GammaMode) -> Result<f64> {
    let mut pool: Vec<&ObjVec> = lower.iter().chain(upper).collect();
    if mode == GammaMode::SetUnion {
        let mut distinct: Vec<&ObjVec> = Vec::with_capacity(pool.len());
        for p in pool {
            if !distinct.contains(&p) {
                distinct.push(p);
            }
        }
        pool = distinct;
    }
    if pool.is_empty() {
        return Err(MoipError::EmptyInput("bound sets".into()));
    }
    let g = pool.iter().map(|p| p.norm()).sum::<f64>() / pool.len() as f64;
    if g <= 0.0 {
        return Err(MoipError::Precondition("scale is zero: every point is the origin".into()));
    }
    Ok(g)
}

/// `d(L, U) = (1/γ) max_ℓ min_u ‖u − ℓ‖₂`; returns `(d, γ)`.
pub fn bound_quality(lower: &[ObjVec], upper: &[ObjVec], mode: GammaMode) -> Result<(f64, f64)> {
    if lower.is_empty() || upper.is_empty() {
        return Err(MoipError::EmptyInput("bound sets".into()));
    }
    let dim = lower[0].dim();
    for p in lower.iter().chain(upper) {
        MoipError::check_dim(dim, p.dim())?;
    }
    let g = gamma(lower, upper, mode)?;
    let worst = lower
        .par_iter()
        .map(|l| {
            upper
                .iter()
                .map(|u| u.iter().zip(l.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max);
    Ok((worst.sqrt() / g, g))
}

/// `Max(Y) ⊆ U` within tolerance.
pub fn is_strong_upper_bound(upper: &[ObjVec], nd: &ExtendedSet) -> bool {
    match nd {
        ExtendedSet::Finite(a) => a.points().iter().all(|y| upper.iter().any(|u| u.approx_eq(y))),
        _ => false,
    }
}

/// For every `y`, some coordinate has `zᵢ ≥ yᵢ − ε`.
pub fn halfspace_union_check(z: &ObjVec, feasible_values: &[ObjVec]) -> bool {
    feasible_values.iter().all(|y| z.iter().zip(y.iter()).any(|(zi, yi)| *zi >= yi - EPS_DOM))
}

/// No feasible value strictly dominates any element of `upper`.
pub fn is_valid_upper_bound(upper: &[ObjVec], feasible_values: &[ObjVec]) -> bool {
    upper.iter().all(|u| !feasible_values.iter().any(|y| u.dominated_by(y)))
}

/// Each `ℓ` satisfies `{ℓ} ⪯ nd`.
pub fn is_valid_lower_bound(lower: &[ObjVec], nd: &ExtendedSet) -> Result<bool> {
    let single = |l: &ObjVec| ExtendedSet::Finite(crate::pareto::Antichain::new(vec![l.clone()]).unwrap());
    for l in lower {
        if !crate::pareto::preceq(&single(l), nd)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Report for `U = dual_approx(grid)`.
pub fn lagrangian_report(
    ctx: &LagrangianContext,
    grid: &MultiplierGrid,
    lower: &[ObjVec],
    nd: &ExtendedSet,
    mode: GammaMode,
) -> Result<BoundReport> {
    let upper = ctx.dual_approx(grid)?.points().to_vec();
    let (d, gamma) = bound_quality(lower, &upper, mode)?;
    Ok(BoundReport {
        method: BoundMethod::Lagrangian,
        strong: is_strong_upper_bound(&upper, nd),
        lower: lower.to_vec(),
        upper,
        d,
        gamma,
        chain_spacing: None,
    })
}

/// Report for the chain through the supported points, discretized at
/// spacing `0.05 γ₀` with `γ₀` the scale of `L` and the supported points.
pub fn convex_hull_report(
    frontier: &SupportedFrontier,
    lower: &[ObjVec],
    nd: &ExtendedSet,
    mode: GammaMode,
) -> Result<BoundReport> {
    let vertices = frontier.points();
    let chain = FrontierChain::new(vertices.clone())?;
    let spacing = CHAIN_SPACING_FACTOR * gamma(lower, &vertices, mode)?;
    let upper = chain.sample(spacing);
    let (d, gamma) = bound_quality(lower, &upper, mode)?;
    Ok(BoundReport {
        method: BoundMethod::ConvexHull,
        strong: is_strong_upper_bound(&upper, nd),
        lower: lower.to_vec(),
        upper,
        d,
        gamma,
        chain_spacing: Some(spacing),
    })
}
