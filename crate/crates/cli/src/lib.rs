//! Benchmark harness around the shelf arrangement solver: instance and
//! arrangement file formats, the experiment sweep, and property suites
//! for the solver's structural guarantees.

pub mod experiment;
pub mod io;
pub mod theorems;

pub use experiment::{
    audit_plans, evaluate_arrangement, generate_instance, policy_seed, run_grid,
    run_sequential, strip_timing_columns, ExperimentConfig, ExperimentRecord, GenerateError,
    GridOutput, PlanAudit, Policy, PolicyEvaluation, SequentialOutput, SequentialRow,
};
pub use io::{read_arrangement, read_instance, write_arrangement, write_instance, InstanceFile};
pub use theorems::{
    equivalence_rows_to_csv, solver_equivalence_suite, theorem1_exhaustive, theorem2_suite,
    theorem3_suite, weighted_true_cost, EquivalenceRow, TheoremReport,
};
