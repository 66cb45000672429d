//! Linear optimization over the convex hull of an explicit point set.

use crate::error::{MoipError, Result};
use crate::pareto::Sense;
use crate::solver::lp::{lp_solve, LpProblem, Row, SolveOutcome};

/// Maximizes `objective · x` over `x = Σ λᵢ qᵢ`, `Σ λᵢ = 1`, `λ ≥ 0`, with
/// `extra_rows` imposed on `x`. The reported solution is `x`, not `λ`.
pub fn conv_hull_lp(points: &[Vec<i64>], objective: &[f64], extra_rows: &[Row]) -> Result<SolveOutcome> {
    let Some(first) = points.first() else {
        return Err(MoipError::EmptyInput("convex hull point set".into()));
    };
    let n = first.len();
    MoipError::check_dim(n, objective.len())?;
    for q in points {
        MoipError::check_dim(n, q.len())?;
    }
    for r in extra_rows {
        MoipError::check_dim(n, r.coeffs.len())?;
    }

    let dot = |c: &[f64], q: &[i64]| -> f64 { c.iter().zip(q).map(|(a, &v)| a * v as f64).sum() };
    let weights: Vec<f64> = points.iter().map(|q| dot(objective, q)).collect();
    let mut lp = LpProblem::new(weights, Sense::Max).with_row(Row::eq(vec![1.0; points.len()], 1.0));
    for r in extra_rows {
        let coeffs = points.iter().map(|q| dot(&r.coeffs, q)).collect();
        lp.rows.push(Row::new(coeffs, r.relation, r.rhs));
    }
    Ok(match lp_solve(&lp)? {
        SolveOutcome::Optimal { value, solution } => {
            let mut x = vec![0.0; n];
            for (lambda, q) in solution.iter().zip(points) {
                for (xi, &qi) in x.iter_mut().zip(q) {
                    *xi += lambda * qi as f64;
                }
            }
            SolveOutcome::Optimal { value, solution: x }
        }
        other => other,
    })
}
