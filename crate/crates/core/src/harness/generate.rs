use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::GammaMode;
use crate::error::{MoipError, Result};
use crate::model::MoipInstance;
use crate::relax::MultiplierGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    Knapsack,
    Assignment,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Knapsack => "knapsack",
            ProblemKind::Assignment => "assignment",
        }
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = MoipError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "knapsack" => Ok(ProblemKind::Knapsack),
            "assignment" => Ok(ProblemKind::Assignment),
            other => Err(MoipError::Precondition(format!("unknown problem kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    pub trials: usize,
    pub seed: u64,
    pub lambda_max: f64,
    /// Grid points per multiplier axis.
    pub grid_count: usize,
    /// Knapsack variable count.
    pub n_vars: usize,
    /// Assignment side length `s` (`s²` variables).
    pub assignment_size: usize,
    /// Inclusive range of objective coefficients.
    pub objective_range: (i64, i64),
    /// Inclusive range of constraint coefficients.
    pub weight_range: (i64, i64),
    pub gamma_mode: GammaMode,
}

impl ExperimentConfig {
    /// 20 binary variables, objectives in `{1..15}`, weights in `{1..5}`, 26 grid points per axis.
    pub fn knapsack() -> Self {
        ExperimentConfig {
            problem: ProblemKind::Knapsack,
            trials: 100,
            seed: 0,
            lambda_max: 2.5,
            grid_count: 26,
            n_vars: 20,
            assignment_size: 4,
            objective_range: (1, 15),
            weight_range: (1, 5),
            gamma_mode: GammaMode::SetUnion,
        }
    }

    /// 4 × 4 assignment, objectives in `{1..20}`, extra row in `{1..5}`, 51 grid points per axis.
    pub fn assignment() -> Self {
        ExperimentConfig {
            problem: ProblemKind::Assignment,
            grid_count: 51,
            objective_range: (1, 20),
            ..Self::knapsack()
        }
    }

    pub fn for_problem(problem: ProblemKind) -> Self {
        match problem {
            ProblemKind::Knapsack => Self::knapsack(),
            ProblemKind::Assignment => Self::assignment(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(MoipError::Precondition(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.objective_range.0 > self.objective_range.1 || self.weight_range.0 > self.weight_range.1 {
            return bad("coefficient ranges must be nonempty");
        }
        if self.n_vars == 0 || self.assignment_size == 0 {
            return bad("instance size must be positive");
        }
        self.grid().map(|_| ())
    }

    /// Both generators produce two objectives and one dualized row.
    pub fn grid(&self) -> Result<MultiplierGrid> {
        MultiplierGrid::new(2, 1, self.lambda_max, self.grid_count)
    }

    /// Right-hand-side rule recorded in every report.
    pub fn rhs_rule(&self) -> &'static str {
        match self.problem {
            ProblemKind::Knapsack => "knapsack and extra row: ceil(sum of row coefficients / 2)",
            ProblemKind::Assignment => "extra row: ceil(sum of row coefficients / s)",
        }
    }
}

/// Generator stream for `(seed, trial, stream)`, seeded from the three
/// values in little-endian order so trials can be drawn in any order.
pub fn trial_rng(seed: u64, trial: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&stream.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

const OBJECTIVE_STREAM: u64 = 0;
const CONSTRAINT_STREAM: u64 = 1;

fn draw(rng: &mut ChaCha8Rng, range: (i64, i64), len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(range.0..=range.1) as f64).collect()
}

fn half_sum(row: &[f64]) -> f64 {
    (row.iter().sum::<f64>() / 2.0).ceil()
}

/// Biobjective binary knapsack with one extra dualized row.
pub fn gen_knapsack(cfg: &ExperimentConfig, trial: usize) -> Result<MoipInstance> {
    let n = cfg.n_vars;
    let mut obj = trial_rng(cfg.seed, trial as u64, OBJECTIVE_STREAM);
    let c = vec![draw(&mut obj, cfg.objective_range, n), draw(&mut obj, cfg.objective_range, n)];
    let mut con = trial_rng(cfg.seed, trial as u64, CONSTRAINT_STREAM);
    let knap = draw(&mut con, cfg.weight_range, n);
    let extra = draw(&mut con, cfg.weight_range, n);
    let b = vec![half_sum(&knap), half_sum(&extra)];
    MoipInstance::new(c, vec![knap, extra], b, vec![1], vec![(0, 1); n])
}

/// `s × s` assignment (each equality written as two `≤` rows) with one
/// extra dualized row.
pub fn gen_assignment(cfg: &ExperimentConfig, trial: usize) -> Result<MoipInstance> {
    let s = cfg.assignment_size;
    let n = s * s;
    let mut obj = trial_rng(cfg.seed, trial as u64, OBJECTIVE_STREAM);
    let c = vec![draw(&mut obj, cfg.objective_range, n), draw(&mut obj, cfg.objective_range, n)];
    let mut a = Vec::with_capacity(4 * s + 1);
    let mut b = Vec::with_capacity(4 * s + 1);
    for line in 0..s {
        let row: Vec<f64> = (0..n).map(|j| if j / s == line { 1.0 } else { 0.0 }).collect();
        let col: Vec<f64> = (0..n).map(|j| if j % s == line { 1.0 } else { 0.0 }).collect();
        for r in [row, col] {
            a.push(r.iter().map(|v| -v).collect());
            b.push(-1.0);
            a.push(r);
            b.push(1.0);
        }
    }
    let mut con = trial_rng(cfg.seed, trial as u64, CONSTRAINT_STREAM);
    let extra = draw(&mut con, cfg.weight_range, n);
    // A permutation picks s of the n coefficients, so its expected weight is sum / s.
    b.push((extra.iter().sum::<f64>() / s as f64).ceil());
    a.push(extra);
    let dualized = vec![a.len() - 1];
    MoipInstance::new(c, a, b, dualized, vec![(0, 1); n])
}

pub fn generate(cfg: &ExperimentConfig, trial: usize) -> Result<MoipInstance> {
    match cfg.problem {
        ProblemKind::Knapsack => gen_knapsack(cfg, trial),
        ProblemKind::Assignment => gen_assignment(cfg, trial),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knapsack_is_deterministic() {
        let cfg = ExperimentConfig { seed: 42, n_vars: 6, ..ExperimentConfig::knapsack() };
        let a = gen_knapsack(&cfg, 0).unwrap();
        assert_eq!(a, gen_knapsack(&cfg, 0).unwrap());
        assert_ne!(a, gen_knapsack(&cfg, 1).unwrap());
        assert!(a.is_feasible(&[0; 6]));
        assert_eq!(a.dualized(), &[1]);
    }

    #[test]
    fn assignment_structure() {
        let cfg = ExperimentConfig { assignment_size: 2, ..ExperimentConfig::assignment() };
        let inst = gen_assignment(&cfg, 3).unwrap();
        assert_eq!((inst.n(), inst.m()), (4, 9));
        assert_eq!(inst.dualized(), &[8]);
    }

    #[test]
    fn rng_streams_differ() {
        let mut a = trial_rng(1, 2, 0);
        let mut b = trial_rng(1, 2, 1);
        assert_ne!(a.gen::<u64>(), b.gen::<u64>());
    }
}
