use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::experiment::{ExperimentRun, REFERENCE_TABLE};
use crate::error::{MoipError, Result};
use crate::pareto::ObjVec;

/// One row per trial and method:
/// `trial,method,d,gamma,strong,u_size,l_size,wall_ms`.
pub fn trials_csv(run: &ExperimentRun) -> String {
    let mut out = String::from("trial,method,d,gamma,strong,u_size,l_size,wall_ms\n");
    for (t, ms) in run.report.trials.iter().zip(&run.wall_ms) {
        for r in [&t.lagrangian, &t.convex_hull] {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{:.3}",
                t.trial,
                r.method.name(),
                r.d,
                r.gamma,
                r.strong,
                r.upper.len(),
                r.lower.len(),
                ms
            );
        }
    }
    out
}

/// Plot data: `trial,set,y1,y2` for the nondominated, supported, lower and
/// both upper sets of every trial.
pub fn figure_points_csv(run: &ExperimentRun) -> String {
    let mut out = String::from("trial,set,y1,y2\n");
    let mut emit = |trial: usize, set: &str, pts: &[ObjVec]| {
        for p in pts {
            let _ = writeln!(out, "{trial},{set},{},{}", p[0], p[1]);
        }
    };
    for t in &run.report.trials {
        emit(t.trial, "nondominated", &t.nondominated);
        emit(t.trial, "supported", &t.supported);
        emit(t.trial, "lower", &t.lagrangian.lower);
        emit(t.trial, "upper_lagrangian", &t.lagrangian.upper);
        emit(t.trial, "upper_convex_hull", &t.convex_hull.upper);
    }
    out
}

fn summary_json(run: &ExperimentRun) -> String {
    let r = &run.report;
    let reference: Vec<_> = REFERENCE_TABLE
        .iter()
        .filter(|row| row.0 == r.config.problem.name())
        .map(|(_, method, mean, sd, strong)| json!({"method": method, "mean_d": mean, "sd_d": sd, "strong_of_100": strong}))
        .collect();
    let value = json!({
        "config": r.config,
        "rhs_rule": r.rhs_rule,
        "lagrangian": r.lagrangian,
        "convex_hull": r.convex_hull,
        "all_trials_valid": r.all_valid(),
        "chain_spacing_factor": crate::bounds::CHAIN_SPACING_FACTOR,
        "reference_not_reproducible": reference,
        "total_wall_ms": run.wall_ms.iter().sum::<f64>(),
    });
    serde_json::to_string_pretty(&value).expect("summary is plain data")
}

/// Writes `trials.csv`, `summary.json`, `figure_points.csv` and the full
/// deterministic `report.json` into `dir`, returning the paths.
pub fn write_experiment(dir: &Path, run: &ExperimentRun) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| MoipError::Precondition(format!("cannot write to {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let report = serde_json::to_string_pretty(&run.report).expect("report is plain data");
    let files = [
        ("trials.csv", trials_csv(run)),
        ("summary.json", summary_json(run)),
        ("figure_points.csv", figure_points_csv(run)),
        ("report.json", report),
    ];
    let mut paths = Vec::new();
    for (name, body) in files {
        let p = dir.join(name);
        fs::write(&p, body).map_err(io)?;
        paths.push(p);
    }
    Ok(paths)
}
