//! Experiment driver: runs algorithms over instances, records costs and
//! checks results against their guarantees.

mod record;
mod run;
mod verify;

pub use record::{emit_results, read_results, write_csv, write_json, OptMode, OutputFormat, RunRecord, CSV_HEADER};
pub use run::{
    calls_per_element_bound, execute, guess_count_bound, memory_bound, resolve_opt, run_experiment, AlgoSpec,
    Execution, ExperimentConfig, Ordering, RunSettings,
};
pub use verify::{dominance_violations, verify_suite, Bounds, CheckedRun, VerifyReport};
