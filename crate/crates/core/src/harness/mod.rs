//! Random instance generators, the bound-quality experiment, the instance
//! text format and report persistence.

mod experiment;
mod format;
mod generate;
mod report;

pub use experiment::{
    run_experiment, run_trial, ExperimentReport, ExperimentRun, MethodSummary, TrialRecord, REFERENCE_TABLE,
};
pub use format::{parse_instance, serialize_instance};
pub use generate::{gen_assignment, gen_knapsack, generate, trial_rng, ExperimentConfig, ProblemKind};
pub use report::{figure_points_csv, trials_csv, write_experiment};
