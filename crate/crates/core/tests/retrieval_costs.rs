//! Frozen true-cost regressions for the reference studies.
//!
//! Every per-object retrieval cost below was derived by hand by
//! enumerating the alternative plans. The planner must reproduce them
//! exactly: all costs are small integer sums, so no tolerance is needed
//! on the per-object level.

use shelfplan_core::planner::{
    expected_cost, plan_retrieval, push_heuristic, replay_plan, ActionKind, PlanMethod,
    PlannerBudget, ShelfState,
};
use shelfplan_core::studies::{blocker_study, deep_shelf_study};
use shelfplan_core::surrogate::evaluate_surrogate;
use shelfplan_core::{Arrangement, ObjectId, ProblemInstance};

fn per_object_costs(instance: &ProblemInstance, arr: &Arrangement) -> Vec<f64> {
    let report = expected_cost(instance, arr, PlannerBudget::default()).unwrap();
    assert!(!report.any_fallback, "studies must plan exactly");
    for (&target, plan) in &report.per_object {
        assert_eq!(plan.method, PlanMethod::Exact);
        replay_plan(instance, arr, target, plan).unwrap();
        // admissibility spot check: the root heuristic never exceeds the cost
        let root = ShelfState::from_arrangement(instance.grid(), arr);
        assert!(push_heuristic(&root, instance, target) <= plan.total_cost + 1e-12);
    }
    report
        .per_object
        .values()
        .map(|plan| plan.total_cost)
        .collect()
}

/// Action multiset as (kind tag, object) pairs, order-insensitive.
fn action_summary(
    instance: &ProblemInstance,
    arr: &Arrangement,
    target: ObjectId,
) -> (f64, Vec<(&'static str, ObjectId)>) {
    let plan = plan_retrieval(instance, arr, target, PlannerBudget::default()).unwrap();
    assert_eq!(plan.method, PlanMethod::Exact);
    replay_plan(instance, arr, target, &plan).unwrap();
    let mut kinds: Vec<(&'static str, ObjectId)> = plan
        .actions
        .iter()
        .map(|a| match a.kind {
            ActionKind::Push { object, .. } => ("push", object),
            ActionKind::Suction { object, .. } => ("suction", object),
            ActionKind::Remove { object, .. } => ("remove", object),
        })
        .collect();
    kinds.sort();
    (plan.total_cost, kinds)
}

#[test]
fn blocker_study_per_object_costs() {
    let (instance, front, middle) = blocker_study();
    assert_eq!(
        per_object_costs(&instance, &front),
        vec![0.0, 3.0, 6.0, 0.0, 3.0, 5.0, 0.0]
    );
    assert_eq!(
        per_object_costs(&instance, &middle),
        vec![0.0, 3.0, 6.0, 0.0, 2.0, 6.0, 0.0]
    );
}

#[test]
fn blocker_study_ranking_reversal() {
    let (instance, front, middle) = blocker_study();
    let surrogate_front = evaluate_surrogate(&instance, &front).unwrap().expected_cost;
    let surrogate_middle = evaluate_surrogate(&instance, &middle).unwrap().expected_cost;
    let true_front = expected_cost(&instance, &front, PlannerBudget::default())
        .unwrap()
        .expected_cost;
    let true_middle = expected_cost(&instance, &middle, PlannerBudget::default())
        .unwrap()
        .expected_cost;

    assert!((surrogate_front - 2.5).abs() < 1e-12);
    assert!((surrogate_middle - 2.8).abs() < 1e-12);
    assert!((true_front - 2.5).abs() < 1e-12);
    assert!((true_middle - 2.4).abs() < 1e-12);
    // the surrogate prefers the blocker up front, true planning the reverse
    assert!(surrogate_front < surrogate_middle);
    assert!(true_middle < true_front);
}

/// With the blocker at depth 2, freeing the preferred object 6 is cheapest
/// by relocating the blocker itself and pushing both leading objects into
/// the freed column.
#[test]
fn blocker_study_key_plans() {
    let (instance, front, middle) = blocker_study();

    let (cost, kinds) = action_summary(&instance, &middle, 6);
    assert_eq!(cost, 6.0);
    assert_eq!(kinds, vec![("push", 4), ("push", 5), ("suction", 7)]);

    // blocker in front: object 4 cannot be pushed aside, suction it instead
    let (cost, kinds) = action_summary(&instance, &front, 6);
    assert_eq!(cost, 5.0);
    assert_eq!(kinds, vec![("push", 5), ("suction", 4)]);

    let (cost, kinds) = action_summary(&instance, &front, 5);
    assert_eq!(cost, 3.0);
    assert_eq!(kinds, vec![("suction", 4)]);

    let (cost, kinds) = action_summary(&instance, &middle, 5);
    assert_eq!(cost, 2.0);
    assert_eq!(kinds, vec![("push", 4)]);

    // identical in both layouts: column 1 is untouched by the blocker
    for arr in [&front, &middle] {
        let (cost, kinds) = action_summary(&instance, arr, 2);
        assert_eq!(cost, 3.0);
        assert_eq!(kinds, vec![("suction", 1)]);
        let (cost, kinds) = action_summary(&instance, arr, 3);
        assert_eq!(cost, 6.0);
        assert_eq!(kinds, vec![("suction", 1), ("suction", 2)]);
    }
}

#[test]
fn deep_shelf_per_object_costs() {
    let (instance, corner_open, corner_pinned) = deep_shelf_study();
    assert_eq!(
        per_object_costs(&instance, &corner_open),
        vec![0.0, 3.0, 16.0, 25.0, 0.0, 3.0, 16.0, 0.0, 0.0, 2.0, 18.0, 18.0]
    );
    assert_eq!(
        per_object_costs(&instance, &corner_pinned),
        vec![0.0, 5.0, 18.0, 27.0, 0.0, 5.0, 18.0, 12.0, 0.0, 4.0, 15.0, 0.0]
    );
}

#[test]
fn deep_shelf_ranking_reversal() {
    let (instance, corner_open, corner_pinned) = deep_shelf_study();
    let surrogate_open = evaluate_surrogate(&instance, &corner_open)
        .unwrap()
        .expected_cost;
    let surrogate_pinned = evaluate_surrogate(&instance, &corner_pinned)
        .unwrap()
        .expected_cost;
    let true_open = expected_cost(&instance, &corner_open, PlannerBudget::default())
        .unwrap()
        .expected_cost;
    let true_pinned = expected_cost(&instance, &corner_pinned, PlannerBudget::default())
        .unwrap()
        .expected_cost;

    assert!((surrogate_open - 584.0 / 39.0).abs() < 1e-12);
    assert!((surrogate_pinned - 650.0 / 39.0).abs() < 1e-12);
    assert!((true_open - 568.0 / 39.0).abs() < 1e-12);
    assert!((true_pinned - 528.0 / 39.0).abs() < 1e-12);
    assert!(surrogate_open < surrogate_pinned);
    assert!(true_pinned < true_open);
    // the surrogate is an upper bound on the true cost of each layout
    assert!(true_open <= surrogate_open + 1e-12);
    assert!(true_pinned <= surrogate_pinned + 1e-12);
}

/// The pinned layout wins because suction can pull an object deeper into
/// its own column (the lifted object does not block its own destination),
/// which the surrogate cannot see.
#[test]
fn deep_shelf_key_plans() {
    let (instance, _, corner_pinned) = deep_shelf_study();

    // retrieve 10: tuck 12 one cell deeper, push 9 into the freed corner
    let plan = plan_retrieval(&instance, &corner_pinned, 10, PlannerBudget::default()).unwrap();
    assert_eq!(plan.total_cost, 4.0);
    assert_eq!(plan.actions.len(), 2);
    let mut saw_backward_suction = false;
    for action in &plan.actions {
        if let ActionKind::Suction { object, from, to } = action.kind {
            assert_eq!(object, 12);
            assert_eq!((from.i, from.j), (4, 1));
            assert_eq!((to.i, to.j), (4, 2));
            saw_backward_suction = true;
        }
    }
    assert!(saw_backward_suction, "plan must move 12 backward in its own column");

    let (cost, kinds) = action_summary(&instance, &corner_pinned, 2);
    assert_eq!(cost, 5.0);
    assert_eq!(kinds, vec![("suction", 1), ("suction", 12)]);

    // the heavy favourite: one removal is unavoidable, but only one
    let (cost, kinds) = action_summary(&instance, &corner_pinned, 11);
    assert_eq!(cost, 15.0);
    assert_eq!(kinds, vec![("push", 10), ("remove", 9)]);
}
