//! Independent check of the retrieval planner.
//!
//! The oracle below re-implements the movement rules from scratch on a
//! different state representation (object -> optional cell map) and finds
//! the cheapest clearing sequence by uniform-cost search with a linear-scan
//! frontier: no heuristic, no hashing, no shared code with the planner's
//! search. On every instance small enough to afford it, the planner must
//! match the oracle's optimal cost exactly.

mod common;

use common::{all_arrangements, random_arrangement, random_instance};
use shelfplan_core::planner::{
    expected_cost, plan_retrieval, push_heuristic, replay_plan, PlanMethod, PlannerBudget,
    ShelfState,
};
use shelfplan_core::rng::Xoshiro256StarStar;
use shelfplan_core::surrogate::evaluate_surrogate;
use shelfplan_core::{Arrangement, ObjectId, ProblemInstance, ShelfGrid};
use std::collections::BTreeMap;

/// Oracle state: every object is either at a cell or removed (None).
type OState = BTreeMap<ObjectId, Option<(u16, u16)>>;

fn occupant(state: &OState, cell: (u16, u16)) -> Option<ObjectId> {
    state
        .iter()
        .find(|(_, &c)| c == Some(cell))
        .map(|(&id, _)| id)
}

/// True when every cell strictly in front of `cell` holds no object other
/// than `lifted` (an object held by the suction gripper blocks nothing).
fn front_clear(state: &OState, cell: (u16, u16), lifted: Option<ObjectId>) -> bool {
    (1..cell.1).all(|j| match occupant(state, (cell.0, j)) {
        None => true,
        Some(id) => Some(id) == lifted,
    })
}

fn successors(
    instance: &ProblemInstance,
    state: &OState,
    target: ObjectId,
) -> Vec<(OState, f64)> {
    let m_x = instance.grid().m_x;
    let m_y = instance.grid().m_y;
    let mut out = Vec::new();
    for (&id, &cell) in state.iter() {
        if id == target {
            continue;
        }
        let Some((i, j)) = cell else { continue };
        if !front_clear(state, (i, j), None) {
            continue; // the gripper cannot reach past standing objects
        }
        let spec = instance.object(id);
        for di in [-1i32, 1] {
            let ti = i as i32 + di;
            if ti >= 1 && ti <= m_x as i32 && occupant(state, (ti as u16, j)).is_none() {
                let mut s = state.clone();
                s.insert(id, Some((ti as u16, j)));
                out.push((s, spec.c_push));
            }
        }
        for ti in 1..=m_x {
            for tj in 1..=m_y {
                if occupant(state, (ti, tj)).is_some() {
                    continue;
                }
                if !front_clear(state, (ti, tj), Some(id)) {
                    continue;
                }
                let mut s = state.clone();
                s.insert(id, Some((ti, tj)));
                out.push((s, spec.c_suction));
            }
        }
        let mut s = state.clone();
        s.insert(id, None);
        out.push((s, spec.c_suction + instance.c_removal()));
    }
    out
}

/// Cheapest cost to clear everything in front of `target`, by Dijkstra
/// over full states with a linear-scan priority queue.
fn oracle_min_cost(instance: &ProblemInstance, arr: &Arrangement, target: ObjectId) -> f64 {
    let start: OState = arr.iter().map(|(id, c)| (id, Some((c.i, c.j)))).collect();
    let target_cell = {
        let c = arr.cell_of(target).expect("target placed");
        (c.i, c.j)
    };
    let mut states: Vec<OState> = vec![start];
    let mut dist: Vec<f64> = vec![0.0];
    let mut settled: Vec<bool> = vec![false];
    loop {
        let mut u = usize::MAX;
        for k in 0..states.len() {
            if !settled[k] && (u == usize::MAX || dist[k] < dist[u]) {
                u = k;
            }
        }
        assert_ne!(u, usize::MAX, "removal always makes the goal reachable");
        settled[u] = true;
        if front_clear(&states[u], target_cell, None) {
            return dist[u];
        }
        let base = dist[u];
        for (succ, w) in successors(instance, &states[u], target) {
            match states.iter().position(|s| *s == succ) {
                Some(v) => {
                    if base + w < dist[v] {
                        assert!(!settled[v], "negative-cost edge cannot exist");
                        dist[v] = base + w;
                    }
                }
                None => {
                    states.push(succ);
                    dist.push(base + w);
                    settled.push(false);
                }
            }
        }
    }
}

fn check_instance(instance: &ProblemInstance, arr: &Arrangement) {
    for spec in instance.objects() {
        let expected = oracle_min_cost(instance, arr, spec.id);
        let plan = plan_retrieval(instance, arr, spec.id, PlannerBudget::unlimited()).unwrap();
        assert_eq!(plan.method, PlanMethod::Exact);
        assert!(
            (plan.total_cost - expected).abs() < 1e-9,
            "target {} on {:?}: planner {} oracle {}",
            spec.id,
            arr,
            plan.total_cost,
            expected
        );
        replay_plan(instance, arr, spec.id, &plan).unwrap();
        let root = ShelfState::from_arrangement(instance.grid(), arr);
        assert!(push_heuristic(&root, instance, spec.id) <= plan.total_cost + 1e-9);
    }
}

#[test]
fn matches_oracle_on_every_tiny_arrangement() {
    // exhaustive over placements for the smallest shapes
    for (m_x, m_y, n) in [(2u16, 2u16, 2usize), (1, 3, 2), (3, 1, 2), (1, 3, 3)] {
        let grid = ShelfGrid::new(m_x, m_y);
        let mut rng = Xoshiro256StarStar::seed_from_u64(900 + m_x as u64 * 10 + m_y as u64);
        let instance = random_instance(grid, n, 2.0, 3.0, &mut rng);
        for arr in all_arrangements(grid, n) {
            check_instance(&instance, &arr);
        }
    }
}

#[test]
fn matches_oracle_on_random_small_instances() {
    let combos: [(u16, u16, usize, usize); 8] = [
        (1, 3, 2, 12),
        (3, 1, 3, 12),
        (2, 2, 3, 12),
        (2, 3, 2, 10),
        (2, 3, 4, 8),
        (3, 2, 4, 8),
        (1, 6, 3, 8),
        (6, 1, 4, 8),
    ];
    for (m_x, m_y, n, trials) in combos {
        let grid = ShelfGrid::new(m_x, m_y);
        let mut rng =
            Xoshiro256StarStar::seed_from_u64(7_000 + (m_x as u64) * 100 + m_y as u64);
        for trial in 0..trials {
            let psi = [1.0, 1.3, 2.0][trial % 3];
            let c_r = [0.0, 10.0][trial % 2];
            let instance = random_instance(grid, n, psi, c_r, &mut rng);
            let arr = random_arrangement(grid, n, &mut rng);
            check_instance(&instance, &arr);
        }
    }
}

/// On larger shelves the oracle is out of reach, but the surrogate bounds
/// the exact plan from above and the root heuristic from below.
#[test]
fn exact_plans_sit_between_heuristic_and_surrogate() {
    let grid = ShelfGrid::new(3, 3);
    let mut rng = Xoshiro256StarStar::seed_from_u64(41);
    for trial in 0..40 {
        let n = 2 + trial % 4; // 2..=5
        let psi = [1.0, 1.3, 2.0][trial % 3];
        let c_r = [0.0, 10.0, 100.0][trial % 3];
        let instance = random_instance(grid, n, psi, c_r, &mut rng);
        let arr = random_arrangement(grid, n, &mut rng);
        let surrogate = evaluate_surrogate(&instance, &arr).unwrap();
        let report = expected_cost(&instance, &arr, PlannerBudget::default()).unwrap();
        assert!(!report.any_fallback);
        let root = ShelfState::from_arrangement(grid, &arr);
        for spec in instance.objects() {
            let plan = &report.per_object[&spec.id];
            replay_plan(&instance, &arr, spec.id, plan).unwrap();
            let upper = surrogate.per_object_cost[&spec.id];
            assert!(push_heuristic(&root, &instance, spec.id) <= plan.total_cost + 1e-9);
            assert!(
                plan.total_cost <= upper + 1e-9,
                "target {} cost {} exceeds surrogate bound {upper}",
                spec.id,
                plan.total_cost
            );
        }
        assert!(report.expected_cost <= surrogate.expected_cost + 1e-9);
    }
}
