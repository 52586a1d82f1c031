//! Streaming and offline maximization algorithms.
//!
//! Every streaming algorithm is a set of [`CandidateState`]s, each a
//! threshold-greedy selection with its own acceptance rule, fed the stream
//! one element at a time. The composer and the OPT-guessing wrapper differ
//! only in which candidates they keep alive.

mod candidate;
mod greedy;
mod guess;
mod multipass;
mod schedule;
mod single;

pub use candidate::{CandidateState, RunOutcome, StreamSource, ThresholdRule};
pub use greedy::{greedy, lazy_greedy};
pub use guess::{guess_exponents, guess_opt, live_guess_bound, GuessedAlgorithm};
pub use multipass::{p_pass, p_pass_bound, two_pass};
pub use schedule::{
    make_dense_schedule, make_fixed_schedule, make_highlow_schedule, DenseLowRule, Preset, SalsaParams,
    ThresholdSchedule,
};
pub use single::{salsa, schedule_pass, sieve_pass, small_k_pass};
