//! Shelf arrangement toolkit.

pub mod arrangement;
pub mod grid;
pub mod instance;
pub mod lp;
pub mod planner;
pub mod rng;
pub mod sim;
pub mod solvers;
pub mod studies;
pub mod surrogate;

pub use arrangement::{
    cavities, consolidate, is_accessible, removal_free_arrangement,
    removal_free_arrangement_exists, Arrangement, ArrangementError,
};
pub use grid::{Cell, ShelfGrid};
pub use lp::{
    build_model, feasible_point, parse_solution, verify_solution, write_lp, LpError, LpModel,
    VerifyReport, Violation, ViolationKind,
};
pub use planner::{
    expected_cost, legal_actions, object_actions, plan_retrieval, push_heuristic, replay_plan,
    Action, ActionKind, ExpectedCostReport, PlanMethod, PlannerBudget, PlannerError,
    RetrievalPlan, ShelfState,
};
pub use sim::{cumulative_cost_curve, run_episode, EpisodeStep, EpisodeTrace, SimError};
pub use solvers::{
    arrange_priority_greedy, arrange_random, solve_bruteforce, solve_osa_bnb, Objective,
    SolveResult, SolverConfig, SolverError,
};
pub use surrogate::{
    evaluate_surrogate, surrogate_retrieval_cost, verify_no_removal, SurrogateBreakdown,
    SurrogateReport,
};
pub use instance::{
    dense_threshold, density_for, is_dense_for, InstanceError, ObjectId, ObjectSpec,
    ProblemInstance, Ratio,
};
