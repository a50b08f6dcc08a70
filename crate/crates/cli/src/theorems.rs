//! Property suites behind the structural guarantees: density vs forced
//! removals, optimality of the surrogate solver under constant cost gaps,
//! and the consolidation bound chain. Shared by the `theorem-check`
//! subcommand and the acceptance tests.

use crate::experiment::{audit_plans, PlanAudit};
use serde::Serialize;
use shelfplan_core::instance::ObjectSpec;
use shelfplan_core::rng::{mix64, Xoshiro256StarStar};
use shelfplan_core::{
    consolidate, evaluate_surrogate, expected_cost, is_dense_for, removal_free_arrangement,
    solve_bruteforce, solve_osa_bnb, Arrangement, ExpectedCostReport, Objective, PlannerBudget,
    ProblemInstance, ShelfGrid, SolverConfig,
};
use std::fmt;

/// Outcome of one property suite: how many cases ran and which failed.
#[derive(Clone, Debug, Default)]
pub struct TheoremReport {
    pub name: &'static str,
    pub cases: u64,
    pub failures: Vec<String>,
    pub audit: PlanAudit,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.audit.clean()
    }

    fn fail(&mut self, message: String) {
        self.failures.push(message);
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} cases, {} failures",
            self.name,
            self.cases,
            self.failures.len()
        )?;
        for failure in self.failures.iter().take(5) {
            write!(f, "\n  {failure}")?;
        }
        Ok(())
    }
}

/// Grids with at most `max_cells` cells, ascending (m_x, m_y).
fn small_grids(max_cells: usize) -> Vec<ShelfGrid> {
    let mut out = Vec::new();
    for m_x in 1..=max_cells as u16 {
        for m_y in 1..=max_cells as u16 {
            if (m_x as usize) * (m_y as usize) <= max_cells {
                out.push(ShelfGrid::new(m_x, m_y));
            }
        }
    }
    out
}

/// Uniform instance whose only meaningful content is the occupancy pattern.
fn pattern_instance(grid: ShelfGrid, n: usize) -> ProblemInstance {
    let objects = (1..=n as u32)
        .map(|id| ObjectSpec::new(id, 1.0 / n as f64, 1.0, 1.0))
        .collect();
    ProblemInstance::new(grid, objects, 1.0).unwrap()
}

/// Whether any occupancy pattern of n objects on the grid needs zero
/// removals, decided by brute force over all cell subsets.
fn zero_removal_pattern_exists(grid: ShelfGrid, n: usize) -> bool {
    let cells: Vec<_> = grid.cells().collect();
    let instance = pattern_instance(grid, n);
    // subsets as bitmasks; removal counts depend only on occupancy
    for mask in 0u32..(1 << cells.len()) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let occupied = cells
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &c)| c);
        let arr = Arrangement::from_pairs((1..=n as u32).zip(occupied));
        let report = evaluate_surrogate(&instance, &arr).unwrap();
        if report.per_object_removals.values().all(|&b| b == 0) {
            return true;
        }
    }
    false
}

/// Exhaustive density check on every grid with at most 9 cells and every
/// object count: a zero-removal pattern exists exactly when the shelf is
/// not dense, and the constructive witness agrees.
pub fn theorem1_exhaustive() -> TheoremReport {
    let mut report = TheoremReport { name: "density_forces_removals", ..Default::default() };
    for grid in small_grids(9) {
        for n in 1..=grid.cell_count() {
            report.cases += 1;
            let exists = zero_removal_pattern_exists(grid, n);
            let dense = is_dense_for(n, grid);
            if exists == dense {
                report.fail(format!(
                    "{}x{} n={n}: pattern {} but dense = {dense}",
                    grid.m_x,
                    grid.m_y,
                    if exists { "exists" } else { "missing" }
                ));
            }
            let instance = pattern_instance(grid, n);
            match removal_free_arrangement(&instance) {
                Some(witness) => {
                    if dense {
                        report.fail(format!(
                            "{}x{} n={n}: witness produced on a dense shelf",
                            grid.m_x, grid.m_y
                        ));
                    }
                    let surrogate = evaluate_surrogate(&instance, &witness).unwrap();
                    if surrogate.per_object_removals.values().any(|&b| b > 0) {
                        report.fail(format!(
                            "{}x{} n={n}: witness needs removals",
                            grid.m_x, grid.m_y
                        ));
                    }
                }
                None => {
                    if !dense {
                        report.fail(format!(
                            "{}x{} n={n}: no witness on a non-dense shelf",
                            grid.m_x, grid.m_y
                        ));
                    }
                }
            }
        }
    }
    report
}

/// Per-object costs as exact integers weighted by the priority ratios.
///
/// Probabilities are (n+1-l)/T with a common denominator, and all action
/// costs plus the removal penalty are integers, so comparing
/// sum_l (n+1-l) * cost_l as u64 decides cost order exactly.
pub fn weighted_true_cost(
    instance: &ProblemInstance,
    report: &ExpectedCostReport,
) -> Result<u64, String> {
    let n = instance.n() as u64;
    let mut acc = 0u64;
    for spec in instance.objects() {
        let cost = report.per_object[&spec.id].total_cost;
        let rounded = cost.round();
        if (cost - rounded).abs() > 1e-6 || rounded < 0.0 {
            return Err(format!("object {} cost {cost} is not integral", spec.id));
        }
        acc += (n + 1 - spec.id as u64) * rounded as u64;
    }
    Ok(acc)
}

fn unbounded_solver(seed: u64) -> SolverConfig {
    SolverConfig {
        objective: Objective::Surrogate,
        time_budget: None,
        incumbent_patience: None,
        node_budget: None,
        node_patience: None,
        no_removal_constraint: false,
        rng_seed: seed,
    }
}

const THEOREM_GRIDS: [(u16, u16); 6] = [(2, 2), (1, 3), (3, 1), (2, 3), (3, 2), (3, 3)];

/// Instance with a constant suction-push gap dc <= min c_push, the regime
/// where the surrogate solver is exactly optimal.
fn constant_gap_instance(grid: ShelfGrid, n: usize, c_r: f64, seed: u64) -> ProblemInstance {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let pushes: Vec<u64> = (0..n).map(|_| rng.gen_range_inclusive(1, 10)).collect();
    let min_push = *pushes.iter().min().unwrap();
    let gap = rng.gen_index(min_push + 1);
    let total = (n * (n + 1) / 2) as f64;
    let objects = pushes
        .iter()
        .enumerate()
        .map(|(k, &c_p)| {
            ObjectSpec::new(
                k as u32 + 1,
                (n - k) as f64 / total,
                c_p as f64,
                (c_p + gap) as f64,
            )
        })
        .collect();
    ProblemInstance::new(grid, objects, c_r).unwrap()
}

/// Surrogate branch and bound against the true-cost brute force under a
/// constant cost gap: the weighted integer costs must agree exactly, with
/// no planner fallbacks anywhere.
pub fn theorem2_suite(
    instances: usize,
    base_seed: u64,
    budget: PlannerBudget,
) -> TheoremReport {
    let mut report = TheoremReport { name: "constant_gap_optimality", ..Default::default() };
    for i in 0..instances {
        report.cases += 1;
        let seed = mix64(base_seed ^ i as u64);
        let (m_x, m_y) = THEOREM_GRIDS[i % THEOREM_GRIDS.len()];
        let grid = ShelfGrid::new(m_x, m_y);
        let span = grid.cell_count().min(5) as u64 - 1;
        let mut rng = Xoshiro256StarStar::seed_from_u64(mix64(seed));
        let n = 2 + rng.gen_index(span) as usize;
        let c_r = [0.0, 10.0, 100.0][i % 3];
        let instance = constant_gap_instance(grid, n, c_r, seed);

        let exact = match solve_bruteforce(&instance, Objective::TrueCost { budget_per_target: budget }) {
            Ok(result) => result,
            Err(err) => {
                report.fail(format!("case {i}: brute force failed: {err}"));
                continue;
            }
        };
        let bnb = match solve_osa_bnb(&instance, unbounded_solver(seed)) {
            Ok(result) => result,
            Err(err) => {
                report.fail(format!("case {i}: branch and bound failed: {err}"));
                continue;
            }
        };
        let mut weighted = |arr: &Arrangement, label: &str| -> Option<u64> {
            let plans = match expected_cost(&instance, arr, budget) {
                Ok(plans) => plans,
                Err(err) => {
                    report.failures.push(format!("case {i}: {label} planning failed: {err}"));
                    return None;
                }
            };
            if plans.any_fallback {
                report.failures.push(format!("case {i}: {label} hit a planner fallback"));
                return None;
            }
            let surrogate = evaluate_surrogate(&instance, arr).unwrap();
            let (audit, _) = audit_plans(&instance, arr, &plans, &surrogate);
            report.audit.absorb(audit);
            match weighted_true_cost(&instance, &plans) {
                Ok(value) => Some(value),
                Err(err) => {
                    report.failures.push(format!("case {i}: {label}: {err}"));
                    None
                }
            }
        };
        let (Some(bnb_cost), Some(exact_cost)) = (
            weighted(&bnb.arrangement, "bnb"),
            weighted(&exact.arrangement, "bruteforce"),
        ) else {
            continue;
        };
        if bnb_cost != exact_cost {
            report.fail(format!(
                "case {i}: {m_x}x{m_y} n={n} c_r={c_r}: bnb weighted cost {bnb_cost} != optimum {exact_cost}"
            ));
        }
    }
    report
}

/// Instance with independent suction costs (no constant-gap structure).
fn free_gap_instance(grid: ShelfGrid, n: usize, c_r: f64, seed: u64) -> ProblemInstance {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let total = (n * (n + 1) / 2) as f64;
    let objects = (1..=n)
        .map(|l| {
            let c_p = rng.gen_range_inclusive(1, 10);
            let c_s = c_p + rng.gen_index(11);
            ObjectSpec::new(l as u32, (n + 1 - l) as f64 / total, c_p as f64, c_s as f64)
        })
        .collect();
    ProblemInstance::new(grid, objects, c_r).unwrap()
}

/// Bound chain linking the surrogate optimum to the true optimum:
/// C(S*) <= C(S_bnb) <= min(Chat(consolidate(S*)), Chat(S*))
///        <= min(k C(S*), Chat(S*)) with k = max_l c_ls / c_lp.
pub fn theorem3_suite(
    instances: usize,
    base_seed: u64,
    budget: PlannerBudget,
) -> TheoremReport {
    let mut report = TheoremReport { name: "surrogate_bound_chain", ..Default::default() };
    const TOL: f64 = 1e-9;
    for i in 0..instances {
        report.cases += 1;
        let seed = mix64(base_seed ^ (0x1000 + i as u64));
        let (m_x, m_y) = THEOREM_GRIDS[i % THEOREM_GRIDS.len()];
        let grid = ShelfGrid::new(m_x, m_y);
        let span = grid.cell_count().min(4) as u64 - 1;
        let mut rng = Xoshiro256StarStar::seed_from_u64(mix64(seed));
        let n = 2 + rng.gen_index(span) as usize;
        let c_r = [0.0, 10.0, 100.0][i % 3];
        let instance = free_gap_instance(grid, n, c_r, seed);

        let star = match solve_bruteforce(&instance, Objective::TrueCost { budget_per_target: budget }) {
            Ok(result) => result,
            Err(err) => {
                report.fail(format!("case {i}: brute force failed: {err}"));
                continue;
            }
        };
        let bnb = match solve_osa_bnb(&instance, unbounded_solver(seed)) {
            Ok(result) => result,
            Err(err) => {
                report.fail(format!("case {i}: branch and bound failed: {err}"));
                continue;
            }
        };
        let bnb_plans = match expected_cost(&instance, &bnb.arrangement, budget) {
            Ok(plans) if !plans.any_fallback => plans,
            Ok(_) => {
                report.fail(format!("case {i}: bnb arrangement hit a planner fallback"));
                continue;
            }
            Err(err) => {
                report.fail(format!("case {i}: bnb planning failed: {err}"));
                continue;
            }
        };
        let bnb_surrogate = evaluate_surrogate(&instance, &bnb.arrangement).unwrap();
        let (audit, _) = audit_plans(&instance, &bnb.arrangement, &bnb_plans, &bnb_surrogate);
        report.audit.absorb(audit);

        let c_star = star.objective_value;
        let c_bnb = bnb_plans.expected_cost;
        let chat_star = evaluate_surrogate(&instance, &star.arrangement).unwrap().expected_cost;
        let consolidated = consolidate(&star.arrangement, grid);
        let chat_consolidated =
            evaluate_surrogate(&instance, &consolidated).unwrap().expected_cost;
        let k = instance
            .objects()
            .iter()
            .map(|o| o.c_suction / o.c_push)
            .fold(0.0f64, f64::max);

        let mid = chat_consolidated.min(chat_star);
        let outer = (k * c_star).min(chat_star);
        let label = format!("case {i}: {m_x}x{m_y} n={n} c_r={c_r}");
        if c_star > c_bnb + TOL {
            report.fail(format!("{label}: C(S*)={c_star} > C(S_bnb)={c_bnb}"));
        }
        if c_bnb > mid + TOL {
            report.fail(format!(
                "{label}: C(S_bnb)={c_bnb} > min(Chat(cons)={chat_consolidated}, Chat(S*)={chat_star})"
            ));
        }
        if mid > outer + TOL {
            report.fail(format!("{label}: mid bound {mid} > outer bound {outer} (k={k})"));
        }
    }
    report
}

/// One comparison row of the solver equivalence sweep.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceRow {
    pub case: u64,
    pub m_x: u16,
    pub m_y: u16,
    pub n: usize,
    pub psi: f64,
    pub c_r: f64,
    pub seed: u64,
    pub bruteforce_objective: f64,
    pub bnb_objective: f64,
}

/// Branch and bound against brute force on the surrogate objective across
/// the full small-instance sweep. Objectives must match bit for bit: both
/// solvers score leaves through the same evaluator, and the bound's pruning
/// slack cannot discard a strictly better leaf.
pub fn solver_equivalence_suite(
    base_seed: u64,
    replicates: usize,
) -> (Vec<EquivalenceRow>, TheoremReport) {
    let mut report = TheoremReport { name: "solver_equivalence", ..Default::default() };
    let mut rows = Vec::new();
    let grids = [(1u16, 3u16), (2, 2), (3, 2), (2, 3)];
    let mut case = 0u64;
    for rep in 0..replicates {
        for &(m_x, m_y) in &grids {
            let grid = ShelfGrid::new(m_x, m_y);
            for n in 2..=grid.cell_count().min(4) {
                for &psi in &[1.0, 1.3, 2.0] {
                    for &c_r in &[0.0, 10.0, 100.0] {
                        report.cases += 1;
                        let seed = mix64(base_seed ^ mix64(case ^ (rep as u64) << 40));
                        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
                        let total = (n * (n + 1) / 2) as f64;
                        let objects = (1..=n)
                            .map(|l| {
                                let c_p = rng.gen_range_inclusive(1, 10) as f64;
                                ObjectSpec::new(
                                    l as u32,
                                    (n + 1 - l) as f64 / total,
                                    c_p,
                                    psi * c_p,
                                )
                            })
                            .collect();
                        let instance = ProblemInstance::new(grid, objects, c_r).unwrap();
                        let exact = solve_bruteforce(&instance, Objective::Surrogate).unwrap();
                        let bnb = solve_osa_bnb(&instance, unbounded_solver(seed)).unwrap();
                        if bnb.objective_value != exact.objective_value {
                            report.fail(format!(
                                "case {case}: {m_x}x{m_y} n={n} psi={psi} c_r={c_r}: bnb {} != bruteforce {}",
                                bnb.objective_value, exact.objective_value
                            ));
                        }
                        rows.push(EquivalenceRow {
                            case,
                            m_x,
                            m_y,
                            n,
                            psi,
                            c_r,
                            seed,
                            bruteforce_objective: exact.objective_value,
                            bnb_objective: bnb.objective_value,
                        });
                        case += 1;
                    }
                }
            }
        }
    }
    (rows, report)
}

pub fn equivalence_rows_to_csv(rows: &[EquivalenceRow]) -> anyhow::Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}
