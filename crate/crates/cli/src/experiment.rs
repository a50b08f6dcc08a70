//! Seeded experiment harness.
//!
//! Sweeps a parameter grid of (shelf size, density, cost ratio, removal
//! penalty) cells, builds one instance per replicate, arranges it under the
//! three placement policies, evaluates true and surrogate expected costs,
//! and reports CSV rows plus per-cell aggregates normalized against the
//! Random baseline. Every draw derives from the base seed, so reruns are
//! byte-identical once the timing columns are stripped.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use shelfplan_core::instance::{InstanceError, ObjectSpec};
use shelfplan_core::planner::ShelfState;
use shelfplan_core::rng::{mix64, Xoshiro256StarStar};
use shelfplan_core::{
    arrange_priority_greedy, arrange_random, cumulative_cost_curve, evaluate_surrogate,
    expected_cost, push_heuristic, run_episode, solve_osa_bnb, Arrangement, EpisodeTrace,
    Objective, PlanMethod, PlannerBudget, ProblemInstance, ShelfGrid, SolverConfig,
};
use std::time::Instant;

/// Deterministic default planner budget for experiment runs: pure node
/// budget, no wall clock.
pub const DEFAULT_PLANNER_EXPANSIONS: u64 = 200_000;
/// Deterministic default node budget for branch and bound in experiments.
pub const DEFAULT_SOLVER_NODES: u64 = 2_000_000;
/// Stop branch and bound after this many nodes without a better incumbent.
pub const DEFAULT_SOLVER_NODE_PATIENCE: u64 = 500_000;

#[derive(Debug, thiserror::Error)]
pub enum GenerateError {
    #[error("density {rho} rounds to zero objects on a {cells}-cell grid")]
    ZeroObjects { rho: f64, cells: usize },
    #[error("density must lie in (0, 1], got {0}")]
    BadDensity(f64),
    #[error("cost ratio must be at least 1, got {0}")]
    BadRatio(f64),
    #[error("cost bounds must satisfy 1 <= low <= high, got {low}..={high}")]
    BadCostBounds { low: u64, high: u64 },
    #[error("experiment config has an empty parameter list or zero replicates")]
    EmptyConfig,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// How retrieval probabilities relate to object index. The experiments use
/// the linear scheme: p_l proportional to n+1-l, object 1 most likely.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorityScheme {
    #[default]
    LinearDescending,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub grids: Vec<(u16, u16)>,
    pub densities: Vec<f64>,
    pub cost_ratios: Vec<f64>,
    pub removal_penalties: Vec<f64>,
    /// Push costs are drawn from the discrete uniform on low..=high.
    pub cost_low: u64,
    pub cost_high: u64,
    pub priority: PriorityScheme,
    pub replicates: u32,
    pub base_seed: u64,
    /// A* node budget per retrieval target; None removes the cap.
    pub planner_expansions: Option<u64>,
    /// Branch-and-bound node budget; None removes the cap.
    pub solver_nodes: Option<u64>,
    pub solver_node_patience: Option<u64>,
}

impl Default for ExperimentConfig {
    /// Desk-scale defaults: small shelves, moderate densities, one ratio and
    /// penalty, minutes of total runtime.
    fn default() -> Self {
        ExperimentConfig {
            grids: vec![(3, 3), (4, 3), (4, 4)],
            densities: vec![0.3, 0.5, 0.7],
            cost_ratios: vec![1.3],
            removal_penalties: vec![100.0],
            cost_low: 1,
            cost_high: 10,
            priority: PriorityScheme::LinearDescending,
            replicates: 5,
            base_seed: 0,
            planner_expansions: Some(DEFAULT_PLANNER_EXPANSIONS),
            solver_nodes: Some(DEFAULT_SOLVER_NODES),
            solver_node_patience: Some(DEFAULT_SOLVER_NODE_PATIENCE),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), GenerateError> {
        if self.grids.is_empty()
            || self.densities.is_empty()
            || self.cost_ratios.is_empty()
            || self.removal_penalties.is_empty()
            || self.replicates == 0
        {
            return Err(GenerateError::EmptyConfig);
        }
        for &rho in &self.densities {
            if !(rho > 0.0 && rho <= 1.0) {
                return Err(GenerateError::BadDensity(rho));
            }
        }
        for &psi in &self.cost_ratios {
            if psi < 1.0 {
                return Err(GenerateError::BadRatio(psi));
            }
        }
        if self.cost_low < 1 || self.cost_low > self.cost_high {
            return Err(GenerateError::BadCostBounds {
                low: self.cost_low,
                high: self.cost_high,
            });
        }
        Ok(())
    }

    pub fn planner_budget(&self) -> PlannerBudget {
        PlannerBudget { time_limit: None, max_expansions: self.planner_expansions }
    }

    fn solver_config(&self, rng_seed: u64) -> SolverConfig {
        SolverConfig {
            objective: Objective::Surrogate,
            time_budget: None,
            incumbent_patience: None,
            node_budget: self.solver_nodes,
            node_patience: self.solver_node_patience,
            no_removal_constraint: false,
            rng_seed,
        }
    }

    /// Cells in sweep order: grids, then densities, ratios, penalties.
    fn cells(&self) -> Vec<CellParams> {
        let mut out = Vec::new();
        for &(m_x, m_y) in &self.grids {
            for &rho in &self.densities {
                for &psi in &self.cost_ratios {
                    for &c_r in &self.removal_penalties {
                        out.push(CellParams { index: out.len() as u64, m_x, m_y, rho, psi, c_r });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
struct CellParams {
    index: u64,
    m_x: u16,
    m_y: u16,
    rho: f64,
    psi: f64,
    c_r: f64,
}

/// Task seed for one (cell, replicate) pair: mixes the indices into the
/// base seed so tasks are independent and order-insensitive.
fn task_seed(base: u64, cell_index: u64, replicate: u32) -> u64 {
    base ^ mix64((cell_index << 32) | replicate as u64)
}

/// Objects per shelf at density rho, rounding half up.
pub fn objects_for_density(rho: f64, cells: usize) -> usize {
    (rho * cells as f64 + 0.5).floor() as usize
}

/// Builds a seeded random instance: push costs from the discrete uniform
/// on low..=high, suction costs at ratio psi, probabilities proportional to
/// n, n-1, ..., 1.
pub fn generate_instance_bounded(
    grid: ShelfGrid,
    rho: f64,
    psi: f64,
    c_r: f64,
    seed: u64,
    cost_low: u64,
    cost_high: u64,
) -> Result<ProblemInstance, GenerateError> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(GenerateError::BadDensity(rho));
    }
    if psi < 1.0 {
        return Err(GenerateError::BadRatio(psi));
    }
    if cost_low < 1 || cost_low > cost_high {
        return Err(GenerateError::BadCostBounds { low: cost_low, high: cost_high });
    }
    let cells = grid.cell_count();
    let n = objects_for_density(rho, cells);
    if n == 0 {
        return Err(GenerateError::ZeroObjects { rho, cells });
    }
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let total = (n * (n + 1) / 2) as f64;
    let objects = (1..=n)
        .map(|l| {
            let c_push = rng.gen_range_inclusive(cost_low, cost_high) as f64;
            ObjectSpec::new(l as u32, (n + 1 - l) as f64 / total, c_push, psi * c_push)
        })
        .collect();
    Ok(ProblemInstance::new(grid, objects, c_r)?)
}

/// [`generate_instance_bounded`] with the standard U{1..10} push costs.
pub fn generate_instance(
    grid: ShelfGrid,
    rho: f64,
    psi: f64,
    c_r: f64,
    seed: u64,
) -> Result<ProblemInstance, GenerateError> {
    generate_instance_bounded(grid, rho, psi, c_r, seed, 1, 10)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Random,
    PriorityGreedy,
    OsaBnb,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::Random, Policy::PriorityGreedy, Policy::OsaBnb];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Random => "random",
            Policy::PriorityGreedy => "priority_greedy",
            Policy::OsaBnb => "osa_bnb",
        }
    }
}

/// Arrangement produced by a policy, with the branch-and-bound optimality
/// flag when the policy is the solver.
pub fn arrangement_for_policy(
    instance: &ProblemInstance,
    policy: Policy,
    policy_seed: u64,
    config: &ExperimentConfig,
) -> anyhow::Result<(Arrangement, Option<bool>)> {
    Ok(match policy {
        Policy::Random => (arrange_random(instance, policy_seed), None),
        Policy::PriorityGreedy => (arrange_priority_greedy(instance, policy_seed), None),
        Policy::OsaBnb => {
            let result = solve_osa_bnb(instance, config.solver_config(policy_seed))?;
            (result.arrangement, Some(result.proved_optimal))
        }
    })
}

/// Per-policy stream derived from the task seed, so policies sharing a
/// task never consume each other's draws.
pub fn policy_seed(task_seed: u64, policy: Policy) -> u64 {
    let tag = match policy {
        Policy::Random => 1,
        Policy::PriorityGreedy => 2,
        Policy::OsaBnb => 3,
    };
    mix64(task_seed ^ (tag << 56))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Result,
    Aggregate,
}

/// One CSV row. Result rows carry per-replicate metrics; aggregate rows
/// carry per-cell means and Random-normalized percentages, leaving the
/// per-replicate columns empty.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExperimentRecord {
    pub kind: RowKind,
    pub m_x: u16,
    pub m_y: u16,
    pub rho: f64,
    pub psi: f64,
    pub c_r: f64,
    pub replicate: Option<u32>,
    pub seed: Option<u64>,
    pub policy: Option<Policy>,
    pub n: usize,
    /// True expected retrieval cost via the planner (surrogate values fill
    /// in for targets whose plan fell back).
    pub expected_cost: Option<f64>,
    pub surrogate_cost: Option<f64>,
    /// Expected number of removals: probability-weighted removal actions in
    /// the exact plans, surrogate counts for fallback targets.
    pub removals_expected: Option<f64>,
    pub any_fallback: Option<bool>,
    pub solver_proved_optimal: Option<bool>,
    pub solve_ms: Option<f64>,
    pub plan_ms: Option<f64>,
    pub mean_random_cost: Option<f64>,
    pub mean_priority_cost: Option<f64>,
    pub mean_osa_cost: Option<f64>,
    pub random_norm_pct: Option<f64>,
    pub priority_norm_pct: Option<f64>,
    pub osa_norm_pct: Option<f64>,
}

impl ExperimentRecord {
    /// Result-row invariant: the surrogate never undercuts the true cost
    /// unless a fallback already priced some target at the surrogate.
    pub fn validate(&self) -> Result<(), String> {
        if self.kind == RowKind::Result && self.any_fallback == Some(false) {
            let (Some(true_cost), Some(surrogate)) = (self.expected_cost, self.surrogate_cost)
            else {
                return Err("result row missing cost columns".into());
            };
            if true_cost > surrogate + 1e-9 {
                return Err(format!(
                    "true cost {true_cost} exceeds surrogate {surrogate}"
                ));
            }
        }
        Ok(())
    }
}

/// Counters over every retrieval planned during a run. Exact plans must
/// respect root-heuristic and surrogate bounds; the failure counters stay
/// zero on a healthy build.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PlanAudit {
    pub exact_plans: u64,
    pub fallback_plans: u64,
    pub heuristic_bound_failures: u64,
    pub surrogate_bound_failures: u64,
}

impl PlanAudit {
    pub fn absorb(&mut self, other: PlanAudit) {
        self.exact_plans += other.exact_plans;
        self.fallback_plans += other.fallback_plans;
        self.heuristic_bound_failures += other.heuristic_bound_failures;
        self.surrogate_bound_failures += other.surrogate_bound_failures;
    }

    pub fn clean(&self) -> bool {
        self.heuristic_bound_failures == 0 && self.surrogate_bound_failures == 0
    }
}

/// Evaluation of one arrangement: true and surrogate expected costs, the
/// removal expectation, and bound audits for every exact plan.
pub struct PolicyEvaluation {
    pub expected_cost: f64,
    pub surrogate_cost: f64,
    pub removals_expected: f64,
    pub any_fallback: bool,
    pub audit: PlanAudit,
}

/// Checks every exact plan against its admissible root heuristic and its
/// surrogate upper bound, and accumulates the removal expectation.
pub fn audit_plans(
    instance: &ProblemInstance,
    arr: &Arrangement,
    report: &shelfplan_core::ExpectedCostReport,
    surrogate: &shelfplan_core::SurrogateReport,
) -> (PlanAudit, f64) {
    let state = ShelfState::from_arrangement(instance.grid(), arr);
    let mut audit = PlanAudit::default();
    let mut removals = 0.0;
    for spec in instance.objects() {
        let plan = &report.per_object[&spec.id];
        match plan.method {
            PlanMethod::Exact => {
                audit.exact_plans += 1;
                let h = push_heuristic(&state, instance, spec.id);
                if h > plan.total_cost + 1e-9 {
                    audit.heuristic_bound_failures += 1;
                }
                if plan.total_cost > surrogate.per_object_cost[&spec.id] + 1e-9 {
                    audit.surrogate_bound_failures += 1;
                }
                let removed = plan
                    .actions
                    .iter()
                    .filter(|a| matches!(a.kind, shelfplan_core::ActionKind::Remove { .. }))
                    .count();
                removals += spec.p * removed as f64;
            }
            PlanMethod::FallbackSurrogate => {
                audit.fallback_plans += 1;
                removals += spec.p * surrogate.per_object_removals[&spec.id] as f64;
            }
        }
    }
    (audit, removals)
}

pub fn evaluate_arrangement(
    instance: &ProblemInstance,
    arr: &Arrangement,
    budget: PlannerBudget,
) -> anyhow::Result<PolicyEvaluation> {
    let surrogate = evaluate_surrogate(instance, arr)?;
    let report = expected_cost(instance, arr, budget)?;
    let (audit, removals) = audit_plans(instance, arr, &report, &surrogate);
    Ok(PolicyEvaluation {
        expected_cost: report.expected_cost,
        surrogate_cost: surrogate.expected_cost,
        removals_expected: removals,
        any_fallback: report.any_fallback,
        audit,
    })
}

pub struct GridOutput {
    pub records: Vec<ExperimentRecord>,
    pub audit: PlanAudit,
}

impl GridOutput {
    pub fn to_csv(&self) -> anyhow::Result<String> {
        records_to_csv(&self.records)
    }
}

/// Runs the full sweep. Tasks (one per cell and replicate) execute in
/// parallel; rows are assembled in deterministic order afterwards.
pub fn run_grid(config: &ExperimentConfig) -> anyhow::Result<GridOutput> {
    config.validate()?;
    let cells = config.cells();
    let tasks: Vec<(u64, u32)> = cells
        .iter()
        .flat_map(|c| (0..config.replicates).map(move |r| (c.index, r)))
        .collect();

    let mut results: Vec<(u64, u32, Vec<ExperimentRecord>, PlanAudit)> = tasks
        .par_iter()
        .map(|&(cell_index, replicate)| {
            let cell = cells[cell_index as usize];
            let seed = task_seed(config.base_seed, cell_index, replicate);
            let grid = ShelfGrid::new(cell.m_x, cell.m_y);
            let instance = generate_instance_bounded(
                grid, cell.rho, cell.psi, cell.c_r, seed, config.cost_low, config.cost_high,
            )?;
            let mut records = Vec::with_capacity(Policy::ALL.len());
            let mut audit = PlanAudit::default();
            for policy in Policy::ALL {
                let solve_start = Instant::now();
                let (arr, proved) =
                    arrangement_for_policy(&instance, policy, policy_seed(seed, policy), config)?;
                let solve_ms = solve_start.elapsed().as_secs_f64() * 1e3;
                let plan_start = Instant::now();
                let eval = evaluate_arrangement(&instance, &arr, config.planner_budget())?;
                let plan_ms = plan_start.elapsed().as_secs_f64() * 1e3;
                audit.absorb(eval.audit);
                records.push(ExperimentRecord {
                    kind: RowKind::Result,
                    m_x: cell.m_x,
                    m_y: cell.m_y,
                    rho: cell.rho,
                    psi: cell.psi,
                    c_r: cell.c_r,
                    replicate: Some(replicate),
                    seed: Some(seed),
                    policy: Some(policy),
                    n: instance.n(),
                    expected_cost: Some(eval.expected_cost),
                    surrogate_cost: Some(eval.surrogate_cost),
                    removals_expected: Some(eval.removals_expected),
                    any_fallback: Some(eval.any_fallback),
                    solver_proved_optimal: proved,
                    solve_ms: Some(solve_ms),
                    plan_ms: Some(plan_ms),
                    mean_random_cost: None,
                    mean_priority_cost: None,
                    mean_osa_cost: None,
                    random_norm_pct: None,
                    priority_norm_pct: None,
                    osa_norm_pct: None,
                });
            }
            Ok((cell_index, replicate, records, audit))
        })
        .collect::<anyhow::Result<_>>()?;
    results.sort_by_key(|&(cell, replicate, ..)| (cell, replicate));

    let mut records = Vec::new();
    let mut audit = PlanAudit::default();
    for cell in &cells {
        // fold replicates in order: sums first, then one aggregate row
        let mut sums = [0.0f64; 3];
        let mut count = 0u32;
        let mut n = 0usize;
        for (_, _, task_records, task_audit) in
            results.iter().filter(|&&(c, ..)| c == cell.index)
        {
            audit.absorb(*task_audit);
            count += 1;
            for record in task_records {
                let k = Policy::ALL
                    .iter()
                    .position(|&p| Some(p) == record.policy)
                    .expect("result rows always carry a policy");
                sums[k] += record.expected_cost.unwrap();
                n = record.n;
                records.push(record.clone());
            }
        }
        let means: Vec<f64> = sums.iter().map(|s| s / count as f64).collect();
        let normalize = |value: f64| {
            if means[0] > 0.0 {
                Some(value / means[0] * 100.0)
            } else {
                None
            }
        };
        records.push(ExperimentRecord {
            kind: RowKind::Aggregate,
            m_x: cell.m_x,
            m_y: cell.m_y,
            rho: cell.rho,
            psi: cell.psi,
            c_r: cell.c_r,
            replicate: None,
            seed: None,
            policy: None,
            n,
            expected_cost: None,
            surrogate_cost: None,
            removals_expected: None,
            any_fallback: None,
            solver_proved_optimal: None,
            solve_ms: None,
            plan_ms: None,
            mean_random_cost: Some(means[0]),
            mean_priority_cost: Some(means[1]),
            mean_osa_cost: Some(means[2]),
            random_norm_pct: if means[0] > 0.0 { Some(100.0) } else { None },
            priority_norm_pct: normalize(means[1]),
            osa_norm_pct: normalize(means[2]),
        });
    }
    Ok(GridOutput { records, audit })
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> anyhow::Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for record in records {
        writer.serialize(record)?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}

pub fn records_from_csv(text: &str) -> anyhow::Result<Vec<ExperimentRecord>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Drops the wall-clock columns so reruns can be compared byte for byte.
pub fn strip_timing_columns(csv_text: &str) -> anyhow::Result<String> {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = reader.headers()?.clone();
    let drop: Vec<usize> = headers
        .iter()
        .enumerate()
        .filter(|(_, name)| *name == "solve_ms" || *name == "plan_ms")
        .map(|(k, _)| k)
        .collect();
    let mut writer = csv::Writer::from_writer(Vec::new());
    let keep = |row: &csv::StringRecord| -> csv::StringRecord {
        row.iter()
            .enumerate()
            .filter(|(k, _)| !drop.contains(k))
            .map(|(_, field)| field)
            .collect()
    };
    writer.write_record(&keep(&headers))?;
    for row in reader.records() {
        writer.write_record(&keep(&row?))?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}

/// One row of the sequential-retrieval curve CSV.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SequentialRow {
    pub m_x: u16,
    pub m_y: u16,
    pub rho: f64,
    pub psi: f64,
    pub c_r: f64,
    pub policy: Policy,
    /// 1-based retrieval count.
    pub step: usize,
    pub mean_cumulative_cost: f64,
    /// Percentage of the Random curve at the same step; the Random policy
    /// is 100 by definition, and steps with a zero Random mean stay empty.
    pub normalized_pct: Option<f64>,
}

pub struct SequentialOutput {
    pub rows: Vec<SequentialRow>,
}

impl SequentialOutput {
    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            writer.serialize(row)?;
        }
        Ok(String::from_utf8(writer.into_inner()?)?)
    }
}

/// Sequential retrieval sweep: one episode per (cell, replicate, policy),
/// curves averaged per policy over replicates and normalized by Random.
pub fn run_sequential(config: &ExperimentConfig) -> anyhow::Result<SequentialOutput> {
    config.validate()?;
    let cells = config.cells();
    let tasks: Vec<(u64, u32)> = cells
        .iter()
        .flat_map(|c| (0..config.replicates).map(move |r| (c.index, r)))
        .collect();

    let mut episodes: Vec<(u64, u32, Vec<EpisodeTrace>)> = tasks
        .par_iter()
        .map(|&(cell_index, replicate)| {
            let cell = cells[cell_index as usize];
            let seed = task_seed(config.base_seed, cell_index, replicate);
            let grid = ShelfGrid::new(cell.m_x, cell.m_y);
            let instance = generate_instance_bounded(
                grid, cell.rho, cell.psi, cell.c_r, seed, config.cost_low, config.cost_high,
            )?;
            let mut traces = Vec::with_capacity(Policy::ALL.len());
            for policy in Policy::ALL {
                let p_seed = policy_seed(seed, policy);
                let (arr, _) = arrangement_for_policy(&instance, policy, p_seed, config)?;
                traces.push(run_episode(
                    &instance,
                    &arr,
                    mix64(p_seed ^ 0x5eed),
                    config.planner_budget(),
                )?);
            }
            Ok((cell_index, replicate, traces))
        })
        .collect::<anyhow::Result<_>>()?;
    episodes.sort_by_key(|&(cell, replicate, _)| (cell, replicate));

    let mut rows = Vec::new();
    for cell in &cells {
        let per_policy: Vec<Vec<EpisodeTrace>> = (0..Policy::ALL.len())
            .map(|k| {
                episodes
                    .iter()
                    .filter(|&&(c, ..)| c == cell.index)
                    .map(|(_, _, traces)| traces[k].clone())
                    .collect()
            })
            .collect();
        let curves: Vec<Vec<f64>> = per_policy
            .iter()
            .map(|traces| cumulative_cost_curve(traces))
            .collect::<Result<_, _>>()?;
        for (k, policy) in Policy::ALL.into_iter().enumerate() {
            for (step, &mean) in curves[k].iter().enumerate() {
                let normalized = if policy == Policy::Random {
                    Some(100.0)
                } else {
                    match curves[0].get(step) {
                        Some(&random_mean) if random_mean > 0.0 => {
                            Some(mean / random_mean * 100.0)
                        }
                        _ => None,
                    }
                };
                rows.push(SequentialRow {
                    m_x: cell.m_x,
                    m_y: cell.m_y,
                    rho: cell.rho,
                    psi: cell.psi,
                    c_r: cell.c_r,
                    policy,
                    step: step + 1,
                    mean_cumulative_cost: mean,
                    normalized_pct: normalized,
                });
            }
        }
    }
    Ok(SequentialOutput { rows })
}
