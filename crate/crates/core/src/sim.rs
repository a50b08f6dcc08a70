//! Sequential retrieval episodes.
//!
//! Starting from a full arrangement, repeatedly sample a target from the
//! retrieval distribution renormalized over the objects still on the shelf,
//! run the retrieval planner, apply its actions, extract the target for
//! free, and accumulate cost until the shelf is empty. Obstacles the plan
//! removed leave the sampling pool permanently.

use crate::arrangement::{Arrangement, ArrangementError};
use crate::instance::{ObjectId, ProblemInstance};
use crate::planner::{plan_retrieval, PlannerBudget, PlannerError, RetrievalPlan, ShelfState};
use crate::rng::Xoshiro256StarStar;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("cannot build a cost curve from zero traces")]
    NoTraces,
}

/// One retrieval within an episode.
#[derive(Clone, Debug, Serialize)]
pub struct EpisodeStep {
    pub target: ObjectId,
    pub plan: RetrievalPlan,
    /// Shelf after the plan's actions and the free target extraction.
    pub post: Arrangement,
}

/// A full sequential-retrieval run for one seed.
#[derive(Clone, Debug, Serialize)]
pub struct EpisodeTrace {
    pub steps: Vec<EpisodeStep>,
    /// Running cost totals after each step; same length as `steps`.
    pub cumulative_cost: Vec<f64>,
    pub seed: u64,
}

/// Inverse-CDF draw over the on-shelf objects, ascending id. The last
/// candidate absorbs any leftover mass from rounding.
fn draw_target(
    instance: &ProblemInstance,
    on_shelf: impl Iterator<Item = ObjectId> + Clone,
    rng: &mut Xoshiro256StarStar,
) -> ObjectId {
    let total: f64 = on_shelf
        .clone()
        .map(|id| instance.objects()[id as usize - 1].p)
        .sum();
    let mut x = rng.gen_f64() * total;
    let mut last = 0;
    for id in on_shelf {
        last = id;
        x -= instance.objects()[id as usize - 1].p;
        if x < 0.0 {
            return id;
        }
    }
    last
}

/// Runs one episode to completion. Deterministic per seed.
pub fn run_episode(
    instance: &ProblemInstance,
    arr: &Arrangement,
    seed: u64,
    budget_per_target: PlannerBudget,
) -> Result<EpisodeTrace, SimError> {
    arr.validate_total(instance)?;
    let grid = instance.grid();
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let mut state = arr.clone();
    let mut steps = Vec::with_capacity(instance.n());
    let mut cumulative = Vec::with_capacity(instance.n());
    let mut running = 0.0;
    while !state.is_empty() {
        let on_shelf = instance
            .objects()
            .iter()
            .map(|o| o.id)
            .filter(|&id| state.cell_of(id).is_some());
        let target = draw_target(instance, on_shelf, &mut rng);
        let plan = plan_retrieval(instance, &state, target, budget_per_target)?;
        let mut shelf = ShelfState::from_arrangement(grid, &state);
        for action in &plan.actions {
            shelf = shelf.apply(grid, action);
        }
        let mut post = shelf.to_arrangement(grid);
        post.remove(target); // final extraction, free by convention
        running += plan.total_cost;
        cumulative.push(running);
        steps.push(EpisodeStep { target, plan, post: post.clone() });
        state = post;
    }
    Ok(EpisodeTrace { steps, cumulative_cost: cumulative, seed })
}

/// Mean cumulative cost after k retrievals, averaging only over traces
/// that reached step k. Length equals the longest trace.
pub fn cumulative_cost_curve(traces: &[EpisodeTrace]) -> Result<Vec<f64>, SimError> {
    let longest = traces.iter().map(|t| t.steps.len()).max().ok_or(SimError::NoTraces)?;
    let mut curve = Vec::with_capacity(longest);
    for k in 0..longest {
        let mut sum = 0.0;
        let mut count = 0u64;
        for trace in traces {
            if let Some(&c) = trace.cumulative_cost.get(k) {
                sum += c;
                count += 1;
            }
        }
        curve.push(sum / count as f64);
    }
    Ok(curve)
}
