use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{generate, ExperimentConfig};
use crate::bounds::{
    convex_hull_report, is_valid_lower_bound, is_valid_upper_bound, lagrangian_report, local_nadir_lower_bound,
    BoundReport,
};
use crate::error::{MoipError, Result};
use crate::model::{efficient_points, supported_from_efficient};
use crate::pareto::{max_filter, ObjVec};
use crate::relax::LagrangianContext;

/// Published reference values `(problem, method, mean d, sd d, #strong of 100)`,
/// carried in reports for side-by-side reading only. They are not
/// reproducible here since seeds and generator details are unknown.
pub const REFERENCE_TABLE: [(&str, &str, f64, f64, usize); 4] = [
    ("assignment", "lagrangian", 3.930, 0.587, 59),
    ("assignment", "convex_hull", 4.801, 0.956, 9),
    ("knapsack", "lagrangian", 5.869, 1.980, 3),
    ("knapsack", "convex_hull", 6.384, 1.803, 9),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub nondominated: Vec<ObjVec>,
    pub supported: Vec<ObjVec>,
    pub lagrangian: BoundReport,
    pub convex_hull: BoundReport,
    /// No feasible value strictly dominates an element of the Lagrangian `U`.
    pub lagrangian_upper_valid: bool,
    pub convex_hull_upper_valid: bool,
    /// Every local nadir point is `⪯` the nondominated set.
    pub lower_valid: bool,
}

impl TrialRecord {
    pub fn all_valid(&self) -> bool {
        self.lagrangian_upper_valid && self.convex_hull_upper_valid && self.lower_valid
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub mean_d: f64,
    /// Sample standard deviation (denominator `trials − 1`); 0 for one trial.
    pub sd_d: f64,
    /// False when there is a single trial and `sd_d` is a placeholder.
    pub sd_defined: bool,
    pub strong_count: usize,
}

impl MethodSummary {
    fn from_reports<'a>(reports: impl Iterator<Item = &'a BoundReport>) -> Self {
        let (ds, strong): (Vec<f64>, Vec<bool>) = reports.map(|r| (r.d, r.strong)).unzip();
        let n = ds.len() as f64;
        let mean = ds.iter().sum::<f64>() / n;
        let sd_defined = ds.len() > 1;
        let sd = if sd_defined { (ds.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
        MethodSummary { mean_d: mean, sd_d: sd, sd_defined, strong_count: strong.iter().filter(|s| **s).count() }
    }
}

/// Deterministic experiment output: identical configurations give
/// identical reports regardless of thread count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rhs_rule: String,
    pub lagrangian: MethodSummary,
    pub convex_hull: MethodSummary,
    pub trials: Vec<TrialRecord>,
}

impl ExperimentReport {
    pub fn all_valid(&self) -> bool {
        self.trials.iter().all(TrialRecord::all_valid)
    }
}

/// A report plus per-trial wall-clock times, kept apart so the report
/// itself stays reproducible.
#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub report: ExperimentReport,
    pub wall_ms: Vec<f64>,
}

/// Generates trial `trial` and computes both bound reports.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialRecord> {
    let inst = generate(cfg, trial)?;
    let grid = cfg.grid()?;
    let efficient = efficient_points(&inst)?;
    let nd_points: Vec<ObjVec> = efficient.iter().map(|(y, _)| y.clone()).collect();
    let nd = max_filter(&nd_points)?;
    let frontier = supported_from_efficient(efficient)?;
    let lower = local_nadir_lower_bound(&frontier)?;
    let ctx = LagrangianContext::new(&inst)?;
    let lagrangian = lagrangian_report(&ctx, &grid, &lower, &nd, cfg.gamma_mode)?;
    let convex_hull = convex_hull_report(&frontier, &lower, &nd, cfg.gamma_mode)?;
    Ok(TrialRecord {
        trial,
        supported: frontier.points(),
        lagrangian_upper_valid: is_valid_upper_bound(&lagrangian.upper, &nd_points),
        convex_hull_upper_valid: is_valid_upper_bound(&convex_hull.upper, &nd_points),
        lower_valid: is_valid_lower_bound(&lower, &nd)?,
        nondominated: nd_points,
        lagrangian,
        convex_hull,
    })
}

/// Runs all trials in parallel. The first failing trial aborts the run
/// with its index and the configuration seed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRun> {
    cfg.validate()?;
    let results: Vec<(TrialRecord, f64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let start = Instant::now();
            run_trial(cfg, t).map(|r| (r, start.elapsed().as_secs_f64() * 1e3)).map_err(|e| MoipError::Trial {
                trial: t,
                seed: cfg.seed,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let (trials, wall_ms): (Vec<TrialRecord>, Vec<f64>) = results.into_iter().unzip();
    let report = ExperimentReport {
        config: cfg.clone(),
        rhs_rule: cfg.rhs_rule().to_string(),
        lagrangian: MethodSummary::from_reports(trials.iter().map(|t| &t.lagrangian)),
        convex_hull: MethodSummary::from_reports(trials.iter().map(|t| &t.convex_hull)),
        trials,
    };
    Ok(ExperimentRun { report, wall_ms })
}
