use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use shelfplan_cli::experiment::{self, ExperimentConfig};
use shelfplan_cli::{io, theorems};
use shelfplan_core::{
    build_model, evaluate_surrogate, expected_cost, parse_solution, solve_bruteforce,
    solve_osa_bnb, verify_solution, write_lp, Objective, PlannerBudget, SolverConfig,
};
use std::fs;
use std::path::PathBuf;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "shelfplan", version, about = "Shelf arrangement solver and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an arrangement for an instance file.
    Solve(SolveArgs),
    /// Price an arrangement with the retrieval planner and the surrogate.
    Evaluate(EvaluateArgs),
    /// Write the instance's mixed-integer model in LP format.
    ExportLp(ExportLpArgs),
    /// Check an external solver's solution file against the model.
    VerifyLpSolution(VerifyArgs),
    /// Run the policy-comparison sweep and emit one CSV row per task.
    Grid(SweepArgs),
    /// Run sequential retrieval episodes and emit cumulative-cost curves.
    Sequential(SweepArgs),
    /// Run the solver's property suites (density, optimality, bounds).
    TheoremCheck(TheoremArgs),
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Instance JSON file.
    #[arg(long)]
    instance: PathBuf,
    /// Arrangement JSON output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Surrogate)]
    objective: ObjectiveArg,
    /// Planner time limit per target for the true-cost objective, seconds.
    #[arg(long, default_value_t = 10.0)]
    budget_per_target: f64,
    /// Solver wall-clock budget in seconds; unlimited when omitted.
    #[arg(long)]
    time_budget: Option<f64>,
    /// Give up after this many seconds without a better incumbent.
    #[arg(long)]
    incumbent_patience: Option<f64>,
    /// Node expansion cap for the branch-and-bound search.
    #[arg(long)]
    node_budget: Option<u64>,
    /// Reject arrangements that force removals (non-dense shelves only).
    #[arg(long)]
    no_removal: bool,
    /// Exhaustive search instead of branch and bound.
    #[arg(long)]
    brute_force: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    /// Closed-form occupancy cost, no planning.
    Surrogate,
    /// Expected retrieval cost from exact per-target plans.
    TrueCost,
}

#[derive(clap::Args)]
struct EvaluateArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Arrangement JSON file mapping object ids to cells.
    #[arg(long)]
    arrangement: PathBuf,
    /// Planner time limit per target, seconds.
    #[arg(long, default_value_t = 10.0)]
    budget_per_target: f64,
    /// Report JSON output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ExportLpArgs {
    #[arg(long)]
    instance: PathBuf,
    /// LP file to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Solution file with one "name value" pair per line.
    #[arg(long)]
    solution: PathBuf,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Shelf shapes as COLUMNSxDEPTH, e.g. 3x3; repeatable.
    #[arg(long = "grid", value_parser = parse_grid)]
    grids: Vec<(u16, u16)>,
    /// Occupancy densities in (0, 1]; repeatable.
    #[arg(long = "density")]
    densities: Vec<f64>,
    /// Suction/push cost ratios; repeatable.
    #[arg(long = "psi")]
    psis: Vec<f64>,
    /// Removal penalties; repeatable.
    #[arg(long = "cr")]
    crs: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    replicates: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TheoremArgs {
    /// Which suite to run; repeat the flag to pick several.
    #[arg(long = "which", value_enum)]
    which: Vec<SuiteArg>,
    /// Random instances for the optimality and bound-chain suites.
    #[arg(long)]
    instances: Option<usize>,
    /// Planner time limit per target, seconds.
    #[arg(long, default_value_t = 10.0)]
    budget_per_target: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output for the equivalence sweep rows.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    /// Exhaustive check that density alone decides forced removals.
    #[value(name = "1")]
    Density,
    /// Solver arrangements are exactly optimal under a constant cost gap.
    #[value(name = "2")]
    ConstantGap,
    /// Bound chain tying the surrogate optimum to the true optimum.
    #[value(name = "3")]
    BoundChain,
    /// Branch and bound matches brute force on the surrogate objective.
    Equivalence,
    All,
}

fn parse_grid(text: &str) -> Result<(u16, u16), String> {
    let (x, y) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected COLUMNSxDEPTH, got {text:?}"))?;
    let m_x = x.trim().parse::<u16>().map_err(|e| format!("bad column count {x:?}: {e}"))?;
    let m_y = y.trim().parse::<u16>().map_err(|e| format!("bad depth {y:?}: {e}"))?;
    if m_x == 0 || m_y == 0 {
        return Err("grid sides must be positive".into());
    }
    Ok((m_x, m_y))
}

fn planner_budget(seconds: f64) -> Result<PlannerBudget> {
    if !(seconds > 0.0) {
        bail!("budget must be positive, got {seconds}");
    }
    Ok(PlannerBudget::from_time(Duration::from_secs_f64(seconds)))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Solve(args) => run_solve(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::ExportLp(args) => run_export_lp(args),
        Command::VerifyLpSolution(args) => run_verify(args),
        Command::Grid(args) => run_grid(args),
        Command::Sequential(args) => run_sequential(args),
        Command::TheoremCheck(args) => run_theorem_check(args),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<()> {
    let instance = io::read_instance(&args.instance)?;
    let objective = match args.objective {
        ObjectiveArg::Surrogate => Objective::Surrogate,
        ObjectiveArg::TrueCost => Objective::TrueCost {
            budget_per_target: planner_budget(args.budget_per_target)?,
        },
    };
    let result = if args.brute_force {
        solve_bruteforce(&instance, objective)?
    } else {
        let config = SolverConfig {
            objective,
            time_budget: args.time_budget.map(Duration::from_secs_f64),
            incumbent_patience: args.incumbent_patience.map(Duration::from_secs_f64),
            node_budget: args.node_budget,
            node_patience: None,
            no_removal_constraint: args.no_removal,
            rng_seed: args.seed,
        };
        solve_osa_bnb(&instance, config)?
    };
    let body = serde_json::to_string_pretty(&result.arrangement)? + "\n";
    emit(args.out.as_ref(), &body)?;
    eprintln!(
        "objective {} after {} nodes in {:.2?}{}",
        result.objective_value,
        result.nodes,
        result.elapsed,
        if result.proved_optimal { ", proved optimal" } else { "" }
    );
    Ok(())
}

#[derive(Serialize)]
struct ObjectCostRow {
    id: u32,
    p: f64,
    plan_cost: f64,
    plan_actions: usize,
    exact: bool,
    surrogate_cost: f64,
    surrogate_removals: u32,
}

#[derive(Serialize)]
struct EvaluationOutput {
    expected_cost: f64,
    surrogate_cost: f64,
    any_fallback: bool,
    objects: Vec<ObjectCostRow>,
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let instance = io::read_instance(&args.instance)?;
    let arrangement = io::read_arrangement(&args.arrangement)?;
    let budget = planner_budget(args.budget_per_target)?;
    let plans = expected_cost(&instance, &arrangement, budget)?;
    let surrogate = evaluate_surrogate(&instance, &arrangement)?;
    let objects = instance
        .objects()
        .iter()
        .map(|spec| {
            let plan = &plans.per_object[&spec.id];
            ObjectCostRow {
                id: spec.id,
                p: spec.p,
                plan_cost: plan.total_cost,
                plan_actions: plan.actions.len(),
                exact: plan.method == shelfplan_core::PlanMethod::Exact,
                surrogate_cost: surrogate.per_object_cost[&spec.id],
                surrogate_removals: surrogate.per_object_removals[&spec.id],
            }
        })
        .collect();
    let output = EvaluationOutput {
        expected_cost: plans.expected_cost,
        surrogate_cost: surrogate.expected_cost,
        any_fallback: plans.any_fallback,
        objects,
    };
    emit(args.out.as_ref(), &(serde_json::to_string_pretty(&output)? + "\n"))
}

fn run_export_lp(args: ExportLpArgs) -> Result<()> {
    let instance = io::read_instance(&args.instance)?;
    let model = build_model(&instance);
    fs::write(&args.out, write_lp(&model))
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!("{} variables, {} rows", model.variable_count(), model.rows().len());
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<()> {
    let instance = io::read_instance(&args.instance)?;
    let model = build_model(&instance);
    let text = fs::read_to_string(&args.solution)
        .with_context(|| format!("reading {}", args.solution.display()))?;
    let assignment = parse_solution(&text)?;
    let report = verify_solution(&model, &assignment)?;
    if report.is_feasible() {
        println!("feasible, objective {}", report.objective);
        Ok(())
    } else {
        for violation in &report.violations {
            println!("{violation}");
        }
        bail!("{} violations", report.violations.len());
    }
}

fn sweep_config(args: &SweepArgs) -> ExperimentConfig {
    let mut config = ExperimentConfig {
        replicates: args.replicates,
        base_seed: args.seed,
        ..ExperimentConfig::default()
    };
    if !args.grids.is_empty() {
        config.grids = args.grids.clone();
    }
    if !args.densities.is_empty() {
        config.densities = args.densities.clone();
    }
    if !args.psis.is_empty() {
        config.cost_ratios = args.psis.clone();
    }
    if !args.crs.is_empty() {
        config.removal_penalties = args.crs.clone();
    }
    config
}

fn run_grid(args: SweepArgs) -> Result<()> {
    let config = sweep_config(&args);
    let output = experiment::run_grid(&config)?;
    if !output.audit.clean() {
        bail!("plan audit failed: {:?}", output.audit);
    }
    emit(args.out.as_ref(), &output.to_csv()?)
}

fn run_sequential(args: SweepArgs) -> Result<()> {
    let config = sweep_config(&args);
    let output = experiment::run_sequential(&config)?;
    emit(args.out.as_ref(), &output.to_csv()?)
}

fn run_theorem_check(args: TheoremArgs) -> Result<()> {
    let which = if args.which.is_empty() || args.which.contains(&SuiteArg::All) {
        vec![SuiteArg::Density, SuiteArg::ConstantGap, SuiteArg::BoundChain, SuiteArg::Equivalence]
    } else {
        args.which.clone()
    };
    let budget = planner_budget(args.budget_per_target)?;
    let mut reports = Vec::new();
    for suite in which {
        let report = match suite {
            SuiteArg::Density => theorems::theorem1_exhaustive(),
            SuiteArg::ConstantGap => {
                theorems::theorem2_suite(args.instances.unwrap_or(50), args.seed, budget)
            }
            SuiteArg::BoundChain => {
                theorems::theorem3_suite(args.instances.unwrap_or(100), args.seed, budget)
            }
            SuiteArg::Equivalence => {
                let (rows, report) = theorems::solver_equivalence_suite(args.seed, 3);
                if let Some(path) = &args.out {
                    fs::write(path, theorems::equivalence_rows_to_csv(&rows)?)
                        .with_context(|| format!("writing {}", path.display()))?;
                }
                report
            }
            SuiteArg::All => unreachable!("expanded above"),
        };
        println!("{} {report}", if report.passed() { "ok  " } else { "FAIL" });
        reports.push(report);
    }
    if reports.iter().all(|report| report.passed()) {
        Ok(())
    } else {
        bail!("property suite failures");
    }
}
