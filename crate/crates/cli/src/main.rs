//! `moip`: command-line front end for the bound and duality library.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 bad input or a
//! violated precondition, 3 numerical failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use moip_core::bounds::{
    convex_hull_report, halfspace_union_check, lagrangian_report, local_nadir_lower_bound, BoundReport,
};
use moip_core::harness::{
    generate, parse_instance, run_experiment, serialize_instance, write_experiment, ExperimentConfig, ProblemKind,
};
use moip_core::model::{nondominated_set, supported_frontier};
use moip_core::pareto::{max_filter, minkowski_sum, preceq};
use moip_core::relax::{
    ch_relaxation_frontier, check_fr_lag, molp_relaxation_frontier, FrLagOutcome, LagrangianContext,
};
use moip_core::superadditive::{boxes_implied, value_function_sample, vsdp_solve};
use moip_core::{ExtendedSet, GammaMode, MoipError, MoipInstance, MultiplierGrid, MultiplierMatrix, ObjVec, Result};

#[derive(Parser)]
#[command(name = "moip", version, about = "Relaxations, dual bounds and bound-set metrics for small MOIPs")]
struct Cli {
    /// Also write the output (or experiment reports) into this directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelaxKind {
    Molp,
    Ch,
    Lr,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Lagrangian,
    Ch,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    WeakDuality,
    FrLag,
    Prop9,
    ValueFn,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Knapsack,
    Assignment,
}

impl From<Problem> for ProblemKind {
    fn from(p: Problem) -> Self {
        match p {
            Problem::Knapsack => ProblemKind::Knapsack,
            Problem::Assignment => ProblemKind::Assignment,
        }
    }
}

#[derive(clap::Args, Clone, Copy)]
struct GridArgs {
    /// Upper end of every multiplier axis.
    #[arg(long, default_value_t = 2.5)]
    grid_max: f64,
    /// Points per multiplier axis.
    #[arg(long, default_value_t = 51)]
    grid_count: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Nondominated set.
    Solve { file: PathBuf },
    /// Supported nondominated points with supporting weights.
    Supported { file: PathBuf },
    /// Frontier of a relaxation.
    Relax {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: RelaxKind,
        /// Row-major multipliers for `lr` (k × number of dualized rows); zeros by default.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<f64>>,
    },
    /// Grid approximation of the Lagrangian dual.
    DualApprox {
        file: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Bound report against the local-nadir lower bound.
    Bounds {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Vector superadditive dual value.
    Vsdp { file: PathBuf },
    /// Check a property on an instance.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run the bound-quality experiment.
    Experiment {
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Knapsack variables or assignment side length.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        grid_count: Option<usize>,
        /// Count duplicate points when averaging norms.
        #[arg(long)]
        multiset_gamma: bool,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

/// Text output plus whether a checked property held.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn read_instance(path: &Path) -> Result<MoipInstance> {
    let text = fs::read_to_string(path)
        .map_err(|e| MoipError::Precondition(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text)
}

fn points_csv(set: &ExtendedSet) -> String {
    match set {
        ExtendedSet::PlusInf => "+M_inf\n".into(),
        ExtendedSet::MinusInf => "-M_inf\n".into(),
        ExtendedSet::Finite(a) => {
            let k = a.dim();
            let mut out = (1..=k).map(|i| format!("y{i}")).collect::<Vec<_>>().join(",");
            out.push('\n');
            for p in a.points() {
                let _ = writeln!(out, "{}", join(p, ","));
            }
            out
        }
    }
}

fn join<T: std::fmt::Display>(v: &[T], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn report_text(r: &BoundReport) -> String {
    let mut out = format!("method,{}\nd,{}\ngamma,{}\nstrong,{}\n", r.method.name(), r.d, r.gamma, r.strong);
    if let Some(s) = r.chain_spacing {
        let _ = writeln!(out, "chain_spacing,{s}");
    }
    out.push_str("set,y1,y2\n");
    for (name, pts) in [("lower", &r.lower), ("upper", &r.upper)] {
        for p in pts {
            let _ = writeln!(out, "{name},{}", join(p, ","));
        }
    }
    out
}

fn grid_for(inst: &MoipInstance, g: GridArgs) -> Result<MultiplierGrid> {
    MultiplierGrid::for_instance(inst, g.grid_max, g.grid_count)
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Solve { file } => Ok(Outcome::ok(points_csv(&nondominated_set(&read_instance(file)?)?))),
        Command::Supported { file } => {
            let f = supported_frontier(&read_instance(file)?)?;
            let mut out = String::from("x,y1,y2,mu1,mu2\n");
            for e in &f.entries {
                let _ = writeln!(out, "{},{},{}", join(&e.x, " "), join(&e.y, ","), join(&e.mu, ","));
            }
            Ok(Outcome::ok(out))
        }
        Command::Relax { file, kind, lambda } => {
            let inst = read_instance(file)?;
            let set = match kind {
                RelaxKind::Molp => molp_relaxation_frontier(&inst)?,
                RelaxKind::Ch => ch_relaxation_frontier(&inst)?,
                RelaxKind::Lr => {
                    let m1 = inst.dualized().len();
                    let lam = match lambda {
                        Some(v) => MultiplierMatrix::from_flat(inst.k(), m1, v.clone())?,
                        None => MultiplierMatrix::zeros(inst.k(), m1),
                    };
                    LagrangianContext::new(&inst)?.relaxation(&lam)?
                }
            };
            Ok(Outcome::ok(points_csv(&set)))
        }
        Command::DualApprox { file, grid } => {
            let inst = read_instance(file)?;
            let set = LagrangianContext::new(&inst)?.dual_approx(&grid_for(&inst, *grid)?)?;
            Ok(Outcome::ok(points_csv(&set)))
        }
        Command::Bounds { file, method, grid } => {
            let inst = read_instance(file)?;
            let frontier = supported_frontier(&inst)?;
            let lower = local_nadir_lower_bound(&frontier)?;
            let nd = nondominated_set(&inst)?;
            let report = match method {
                Method::Lagrangian => {
                    let ctx = LagrangianContext::new(&inst)?;
                    lagrangian_report(&ctx, &grid_for(&inst, *grid)?, &lower, &nd, GammaMode::SetUnion)?
                }
                Method::Ch => convex_hull_report(&frontier, &lower, &nd, GammaMode::SetUnion)?,
            };
            Ok(Outcome::ok(report_text(&report)))
        }
        Command::Vsdp { file } => {
            let inst = read_instance(file)?;
            let v = vsdp_solve(&inst)?;
            let mut out = format!(
                "{}\n{}\n",
                (1..=v.dim()).map(|i| format!("f{i}")).collect::<Vec<_>>().join(","),
                join(&v, ",")
            );
            if !boxes_implied(&inst) {
                out.push_str("# note: boxes cut the nonnegative feasible set; the value bounds the uncut problem\n");
            }
            Ok(Outcome::ok(out))
        }
        Command::Check { file, property, grid } => check(&read_instance(file)?, *property, *grid),
        Command::Experiment { problem, trials, seed, n, grid_count, multiset_gamma } => {
            let mut cfg = ExperimentConfig::for_problem((*problem).into());
            cfg.trials = *trials;
            cfg.seed = *seed;
            if let Some(n) = n {
                match cfg.problem {
                    ProblemKind::Knapsack => cfg.n_vars = *n,
                    ProblemKind::Assignment => cfg.assignment_size = *n,
                }
            }
            if let Some(g) = grid_count {
                cfg.grid_count = *g;
            }
            if *multiset_gamma {
                cfg.gamma_mode = GammaMode::Multiset;
            }
            let run = run_experiment(&cfg)?;
            if let Some(dir) = &cli.out {
                write_experiment(dir, &run)?;
            }
            let r = &run.report;
            let mut out = String::from("method,mean_d,sd_d,strong,trials\n");
            for (name, s) in [("lagrangian", &r.lagrangian), ("convex_hull", &r.convex_hull)] {
                let _ = writeln!(out, "{name},{:.6},{:.6},{},{}", s.mean_d, s.sd_d, s.strong_count, cfg.trials);
            }
            if cfg.trials == 1 {
                out.push_str("# sd undefined for a single trial, reported as 0\n");
            }
            let _ = writeln!(out, "# all trials valid: {}", r.all_valid());
            let _ = writeln!(out, "# {}", r.rhs_rule);
            Ok(Outcome { text: out, ok: r.all_valid() })
        }
        Command::Gen { problem, seed, trial, n, output } => {
            let mut cfg = ExperimentConfig::for_problem((*problem).into());
            cfg.seed = *seed;
            if let Some(n) = n {
                match cfg.problem {
                    ProblemKind::Knapsack => cfg.n_vars = *n,
                    ProblemKind::Assignment => cfg.assignment_size = *n,
                }
            }
            let inst = generate(&cfg, *trial)?;
            fs::write(output, serialize_instance(&inst))
                .map_err(|e| MoipError::Precondition(format!("cannot write {}: {e}", output.display())))?;
            Ok(Outcome::ok(format!("wrote {}\n", output.display())))
        }
    }
}

fn verdict(name: &str, failures: usize, total: usize, detail: &str) -> Outcome {
    let ok = failures == 0;
    let mut text = format!("{} {name}: {failures} failures in {total} checks\n", if ok { "PASS" } else { "FAIL" });
    text.push_str(detail);
    Outcome { text, ok }
}

fn check(inst: &MoipInstance, property: Property, g: GridArgs) -> Result<Outcome> {
    match property {
        Property::WeakDuality => {
            let nd = nondominated_set(inst)?;
            let ctx = LagrangianContext::new(inst)?;
            let grid = grid_for(inst, g)?;
            let mut detail = String::new();
            let mut failures = 0;
            for lam in grid.iter() {
                if !preceq(&nd, &ctx.relaxation(&lam)?)? {
                    failures += 1;
                    if failures == 1 {
                        let _ = writeln!(detail, "first failing multiplier: {}", join(lam.as_slice(), ","));
                    }
                }
            }
            Ok(verdict("weak-duality", failures, grid.len(), &detail))
        }
        Property::FrLag => {
            let n = inst.n();
            let mut dirs = Vec::new();
            for i in 0..n {
                for s in [1.0, -1.0] {
                    let mut d = vec![0.0; n];
                    d[i] = s;
                    dirs.push(d);
                }
                for j in i + 1..n {
                    let mut d = vec![0.0; n];
                    d[i] = 1.0;
                    d[j] = 1.0;
                    dirs.push(d);
                }
            }
            dirs.push(vec![1.0; n]);
            // A violation is a finding about the instance, not a failure.
            let text = match check_fr_lag(inst, &dirs)? {
                FrLagOutcome::Violated { direction, gap } => {
                    format!("VIOLATED direction {} gap {gap}\n", join(&direction, ","))
                }
                FrLagOutcome::NotFalsified => format!("NOT_FALSIFIED on {} directions\n", dirs.len()),
            };
            Ok(Outcome::ok(text))
        }
        Property::Prop9 => {
            let values: Vec<ObjVec> = inst.feasible_points()?.iter().map(|x| inst.objective_of(x)).collect();
            let u = LagrangianContext::new(inst)?.dual_approx(&grid_for(inst, g)?)?;
            let failures = u.points().iter().filter(|z| !halfspace_union_check(z, &values)).count();
            Ok(verdict("prop9", failures, u.points().len(), ""))
        }
        Property::ValueFn => value_fn_check(inst),
    }
}

/// Monotonicity and superadditivity of the value function at every pair of
/// integer right-hand sides `0 ≦ β₁, β₂` with `β₁ + β₂ ≦ b`.
fn value_fn_check(inst: &MoipInstance) -> Result<Outcome> {
    if !boxes_implied(inst) {
        return Err(MoipError::Precondition(
            "value-function checks need boxes [0, h] that the constraints already imply".into(),
        ));
    }
    let b: Vec<i64> = inst
        .b()
        .iter()
        .map(|&v| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as i64)
            } else {
                Err(MoipError::Precondition("right-hand side must be a nonnegative integer".into()))
            }
        })
        .collect::<Result<_>>()?;
    let mut lattice = vec![vec![]];
    for &bi in &b {
        lattice =
            lattice.into_iter().flat_map(|p: Vec<i64>| (0..=bi).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    if lattice.len() > 400 {
        return Err(MoipError::Precondition("right-hand-side lattice too large for pairwise checks".into()));
    }
    let betas: Vec<Vec<f64>> = lattice.iter().map(|p| p.iter().map(|&v| v as f64).collect()).collect();
    let z = value_function_sample(inst, &betas)?;
    let index = |p: &[i64]| lattice.iter().position(|q| q == p).expect("sum stays in the lattice");
    let (mut total, mut failures) = (0, 0);
    for (i, p) in lattice.iter().enumerate() {
        for (j, q) in lattice.iter().enumerate() {
            if p.iter().zip(q).all(|(a, c)| a <= c) {
                total += 1;
                failures += usize::from(!preceq(&z[i], &z[j])?);
            }
            let sum: Vec<i64> = p.iter().zip(q).map(|(a, c)| a + c).collect();
            if j >= i && sum.iter().zip(&b).all(|(s, bi)| s <= bi) {
                total += 1;
                let lhs = match (&z[i], &z[j]) {
                    (ExtendedSet::Finite(s), ExtendedSet::Finite(t)) => {
                        max_filter(&minkowski_sum(s.points(), t.points()))?
                    }
                    _ => ExtendedSet::MinusInf,
                };
                failures += usize::from(!preceq(&lhs, &z[index(&sum)])?);
            }
        }
    }
    Ok(verdict("value-fn", failures, total, ""))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if let (Some(dir), false) = (&cli.out, matches!(cli.command, Command::Experiment { .. })) {
                let write = fs::create_dir_all(dir).and_then(|_| fs::write(dir.join("output.txt"), &outcome.text));
                if let Err(e) = write {
                    eprintln!("error: cannot write to {}: {e}", dir.display());
                    return ExitCode::from(2);
                }
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
