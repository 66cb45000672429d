//! Value-function sampling, the vector superadditive dual solved through a
//! lattice LP, and finite hyperplane families for the set-valued dual.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MoipError, Result};
use crate::model::{nondominated_set, scalarize, supported_frontier, MoipInstance};
use crate::pareto::{ExtendedSet, ObjVec, Sense, EPS_DOM};
use crate::solver::{ip_solve, lp_solve, LpProblem, Row, SolveOutcome};

pub const DEFAULT_LATTICE_CAP: u128 = 100_000;
/// Cap on the number of superadditivity pairs.
pub const DEFAULT_PAIR_CAP: usize = 2_000_000;

/// Nondominated set of the instance at each right-hand side.
pub fn value_function_sample(inst: &MoipInstance, betas: &[Vec<f64>]) -> Result<Vec<ExtendedSet>> {
    betas.iter().map(|b| nondominated_set(&inst.with_rhs(b.clone())?)).collect()
}

/// The lattice LP whose optimum `(f₁(b), …, f_k(b))` is the vector
/// superadditive dual value.
///
/// Variables are `f_i(d)` for every objective `i` and lattice point
/// `0 ≦ d ≦ b`. Pairs involving `d = 0` are omitted since they reduce to
/// `0 ≤ 0`. Columns with `A_j ≰ b` are omitted since `x_j = 0` is forced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdmolpProgram {
    pub b: Vec<i64>,
    /// Lattice points in lexicographic order; index 0 is the origin.
    pub lattice: Vec<Vec<i64>>,
    /// `(objective i, column j, lattice index of A_j, c_ij)`.
    pub columns: Vec<(usize, usize, usize, f64)>,
    /// Lattice indices `(d₁, d₂, d₁ + d₂)` with `d₁ ≤ d₂` lexicographically.
    pub pairs: Vec<(usize, usize, usize)>,
    pub k: usize,
}

fn as_nonneg_int(v: f64, what: &str) -> Result<i64> {
    if v >= 0.0 && v.fract() == 0.0 && v < 1e15 {
        Ok(v as i64)
    } else {
        Err(MoipError::Precondition(format!("{what} must be a nonnegative integer, got {v}")))
    }
}

impl SdmolpProgram {
    fn index(&self, d: &[i64]) -> usize {
        d.iter().zip(&self.b).fold(0usize, |acc, (&v, &bi)| acc * (bi as usize + 1) + v as usize)
    }

    pub fn num_vars(&self) -> usize {
        self.lattice.len()
    }

    /// `min f_i(b)` for one objective.
    pub fn objective_lp(&self, i: usize) -> LpProblem {
        let n = self.num_vars();
        let mut obj = vec![0.0; n];
        obj[n - 1] = 1.0;
        let mut lp = LpProblem::new(obj, Sense::Min);
        lp.bounds[0] = (0.0, 0.0);
        for &(_, _, at, c) in self.columns.iter().filter(|col| col.0 == i) {
            let mut row = vec![0.0; n];
            row[at] = 1.0;
            lp.rows.push(Row::ge(row, c));
        }
        for &(d1, d2, s) in &self.pairs {
            let mut row = vec![0.0; n];
            row[d1] += 1.0;
            row[d2] += 1.0;
            row[s] -= 1.0;
            lp.rows.push(Row::le(row, 0.0));
        }
        lp
    }

    fn var_name(&self, i: usize, idx: usize) -> String {
        let mut s = format!("f_{}", i + 1);
        for v in &self.lattice[idx] {
            let _ = write!(s, "_{v}");
        }
        s
    }

    /// CPLEX LP text for the equal-weights program `min Σᵢ f_i(b)`.
    pub fn to_lp_format(&self) -> String {
        let top = self.num_vars() - 1;
        let mut out = String::from("\\ vector superadditive dual, equal weights\nMinimize\n obj:");
        for i in 0..self.k {
            let _ = write!(out, " {}{}", if i > 0 { "+ " } else { "" }, self.var_name(i, top));
        }
        out.push_str("\nSubject To\n");
        for &(i, j, at, c) in &self.columns {
            let _ = writeln!(out, " col_{}_{}: {} >= {c}", i + 1, j + 1, self.var_name(i, at));
        }
        for i in 0..self.k {
            for (t, &(d1, d2, s)) in self.pairs.iter().enumerate() {
                let lhs = if d1 == d2 {
                    format!("2 {}", self.var_name(i, d1))
                } else {
                    format!("{} + {}", self.var_name(i, d1), self.var_name(i, d2))
                };
                let _ = writeln!(out, " sup_{}_{}: {lhs} - {} <= 0", i + 1, t + 1, self.var_name(i, s));
            }
        }
        out.push_str("Bounds\n");
        for i in 0..self.k {
            let _ = writeln!(out, " {} = 0", self.var_name(i, 0));
            for idx in 1..self.num_vars() {
                let _ = writeln!(out, " {} >= 0", self.var_name(i, idx));
            }
        }
        out.push_str("End\n");
        out
    }
}

pub fn build_sdmolp(inst: &MoipInstance) -> Result<SdmolpProgram> {
    build_sdmolp_with_caps(inst, DEFAULT_LATTICE_CAP, DEFAULT_PAIR_CAP)
}

/// Requires `A` and `b` to be nonnegative integer data.
pub fn build_sdmolp_with_caps(inst: &MoipInstance, lattice_cap: u128, pair_cap: usize) -> Result<SdmolpProgram> {
    let b: Vec<i64> = inst.b().iter().map(|&v| as_nonneg_int(v, "right-hand side")).collect::<Result<_>>()?;
    let a: Vec<Vec<i64>> = inst
        .a()
        .iter()
        .map(|row| row.iter().map(|&v| as_nonneg_int(v, "constraint coefficient")).collect())
        .collect::<Result<_>>()?;
    let size = b.iter().fold(1u128, |acc, &v| acc.saturating_mul(v as u128 + 1));
    if size > lattice_cap {
        return Err(MoipError::LatticeCapExceeded { size, cap: lattice_cap });
    }
    let mut lattice = Vec::with_capacity(size as usize);
    let zeros = vec![0; b.len()];
    crate::solver::for_each_box_point(&zeros, &b, lattice_cap, |d| lattice.push(d.to_vec()))?;
    let mut prog = SdmolpProgram { b, lattice, columns: Vec::new(), pairs: Vec::new(), k: inst.k() };

    for j in 0..inst.n() {
        let col: Vec<i64> = a.iter().map(|row| row[j]).collect();
        if col.iter().zip(&prog.b).any(|(v, bi)| v > bi) {
            continue;
        }
        let at = prog.index(&col);
        for i in 0..inst.k() {
            prog.columns.push((i, j, at, inst.c()[i][j]));
        }
    }

    for i1 in 1..prog.lattice.len() {
        let d1 = prog.lattice[i1].clone();
        let rest: Vec<i64> = prog.b.iter().zip(&d1).map(|(bi, v)| bi - v).collect();
        let mut err = None;
        crate::solver::for_each_box_point(&zeros, &rest, lattice_cap, |d2| {
            if err.is_some() {
                return;
            }
            let i2 = prog.index(d2);
            if i2 < i1 {
                return;
            }
            let sum: Vec<i64> = d1.iter().zip(d2).map(|(a, b)| a + b).collect();
            prog.pairs.push((i1, i2, prog.index(&sum)));
            if prog.pairs.len() > pair_cap {
                err = Some(MoipError::Precondition(format!("superadditivity pairs exceed the cap of {pair_cap}")));
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(prog)
}

/// `(f₁(b), …, f_k(b))`, one independent LP per objective. For data whose
/// boxes do not cut `{x ∈ Z₊ⁿ : Ax ≤ b}` this is the ideal point.
pub fn vsdp_solve(inst: &MoipInstance) -> Result<ObjVec> {
    let prog = build_sdmolp(inst)?;
    let values = (0..inst.k())
        .into_par_iter()
        .map(|i| match lp_solve(&prog.objective_lp(i))? {
            SolveOutcome::Optimal { value, .. } => Ok(value),
            SolveOutcome::Infeasible => Err(MoipError::Infeasible(format!(
                "superadditive dual of objective {} has no feasible point; the primal objective is unbounded",
                i + 1
            ))),
            SolveOutcome::Unbounded => Err(MoipError::Numerical("minimization over f ≥ 0 reported unbounded".into())),
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ObjVec::from(values))
}

/// True when every box is `[0, h]` with `h` at least the largest value the
/// constraints allow, so the boxes do not cut the nonnegative feasible set.
pub fn boxes_implied(inst: &MoipInstance) -> bool {
    inst.boxes().enumerate().all(|(j, (lo, hi))| {
        let cap = inst
            .a()
            .iter()
            .zip(inst.b())
            .filter(|(row, _)| row[j] > 0.0)
            .map(|(row, bi)| (bi / row[j]).floor())
            .fold(f64::INFINITY, f64::min);
        lo == 0 && (hi as f64) >= cap
    })
}

/// Hyperplanes `{w : μᵀw = f}` with strictly positive normals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneFamily {
    entries: Vec<(ObjVec, f64)>,
}

impl HyperplaneFamily {
    /// Validates and deduplicates on the normalized pair `(μ/Σμ, f/Σμ)`.
    pub fn new(entries: Vec<(ObjVec, f64)>) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(MoipError::EmptyInput("hyperplane family".into()));
        };
        let k = first.0.dim();
        let mut kept: Vec<(ObjVec, f64)> = Vec::new();
        for (mu, f) in entries {
            MoipError::check_dim(k, mu.dim())?;
            crate::model::check_positive(&mu)?;
            if !f.is_finite() {
                return Err(MoipError::Precondition("hyperplane offset must be finite".into()));
            }
            let s: f64 = mu.iter().sum();
            let dup = kept.iter().any(|(m, g)| {
                let t: f64 = m.iter().sum();
                m.iter().zip(mu.iter()).all(|(a, b)| (a / t - b / s).abs() <= EPS_DOM)
                    && (g / t - f / s).abs() <= EPS_DOM
            });
            if !dup {
                kept.push((mu, f));
            }
        }
        Ok(HyperplaneFamily { entries: kept })
    }

    pub fn entries(&self) -> &[(ObjVec, f64)] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries[0].0.dim()
    }
}

/// Membership of `z` in `Min(⋃ᵢ Hᵢ)`.
///
/// A hyperplane with positive normal holds a point `w ≤ z`, `w ≠ z` exactly
/// when `μᵀz > f`. So `z` is a member iff it lies on some `Hᵢ` and
/// `μⱼᵀz ≤ fⱼ` for every `j`. Gaps are measured after dividing by `Σμ`.
pub fn fstar_contains(z: &ObjVec, fam: &HyperplaneFamily) -> bool {
    let gaps: Vec<f64> = fam.entries.iter().map(|(mu, f)| (mu.dot(z) - f) / mu.iter().sum::<f64>()).collect();
    gaps.iter().all(|&g| g <= EPS_DOM) && gaps.iter().any(|&g| g >= -EPS_DOM)
}

/// One hyperplane per weight evaluated by the dichotomic search, offset by
/// the optimal value of the scalarized integer program.
pub fn scalar_dual_family(inst: &MoipInstance) -> Result<HyperplaneFamily> {
    let weights: Vec<ObjVec> = match inst.k() {
        1 => vec![ObjVec::from(vec![1.0])],
        2 => {
            let f = supported_frontier(inst)?;
            if f.is_empty() {
                return Err(MoipError::Infeasible("instance has no feasible point".into()));
            }
            f.weights.into_iter().map(|(mu, _)| mu).collect()
        }
        k => return Err(MoipError::UnsupportedDimension(k)),
    };
    let entries = weights
        .into_iter()
        .map(|mu| match ip_solve(&scalarize(inst, &mu)?)? {
            SolveOutcome::Optimal { value, .. } => Ok((mu, value)),
            _ => Err(MoipError::Infeasible("instance has no feasible point".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    HyperplaneFamily::new(entries)
}

/// Whether `Cx*` belongs to the family's `Min`-of-union for every supported
/// efficient `x*` (the optimum when `k = 1`).
pub fn verify_strong_sdp(inst: &MoipInstance) -> Result<bool> {
    let fam = scalar_dual_family(inst)?;
    let images: Vec<ObjVec> = match inst.k() {
        1 => {
            let out = ip_solve(&scalarize(inst, &[1.0])?)?;
            let x: Vec<i64> = out.solution().unwrap_or(&[]).iter().map(|v| v.round() as i64).collect();
            vec![inst.objective_of(&x)]
        }
        _ => supported_frontier(inst)?.points(),
    };
    Ok(images.iter().all(|y| fstar_contains(y, &fam)))
}
