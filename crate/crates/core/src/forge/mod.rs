//! Instance generation, loading and stream ordering.

mod bundle;
mod generators;
mod loaders;
mod sieve_hard;

pub use bundle::{shuffle, InstanceBundle, KnownOpt, OptProvenance, StreamItem, StreamPlan};
pub use generators::{
    gen_index_instance, gen_random_graph, gen_random_points, gen_random_recsys, SyntheticSpec,
};
pub use loaders::{load_edge_list, load_points_csv, load_recsys};
pub use sieve_hard::{
    gen_sieve_hard, sieve_guess_thresholds, Band, SieveHardLayout, SieveHardSpec, ThresholdFamily,
    DEFAULT_MAX_STREAM,
};
