//! Running an algorithm without knowing OPT.
//!
//! Every algorithm here accepts an element only when its gain clears
//! `T · v / k` for some coefficient `T` fixed by the algorithm, so a guess
//! `v > k · m / T` (with `m` the largest singleton value seen so far) could
//! not have accepted anything yet. Guesses are therefore kept on the grid
//! `(1 + eps)^j` restricted to `[m, k · m / T]`; a guess entering the window
//! starts from an empty solution and guesses falling below `m` are dropped.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::candidate::{CandidateState, RunOutcome, StreamSource, ThresholdRule};
use super::multipass::p_pass_threshold;
use super::schedule::{SalsaParams, ThresholdSchedule};
use super::single::{check_k, salsa_candidates};
use crate::error::{Error, Result};
use crate::oracle::MeteredOracle;

/// Algorithms that can be wrapped by [`guess_opt`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "kebab-case")]
pub enum GuessedAlgorithm {
    Sieve,
    SmallK,
    Salsa { params: SalsaParams },
    PPass { p: u32 },
}

impl GuessedAlgorithm {
    /// The coefficient `T` of the lowest threshold the algorithm can apply.
    pub fn min_threshold_coefficient(&self) -> f64 {
        match self {
            GuessedAlgorithm::Sieve => 0.5,
            GuessedAlgorithm::SmallK => 1.0,
            GuessedAlgorithm::Salsa { params } => params.min_threshold_coefficient(),
            GuessedAlgorithm::PPass { p } => {
                let p = *p as f64;
                (p / (p + 1.0)).powi(p as i32)
            }
        }
    }

    pub fn passes(&self) -> u32 {
        match self {
            GuessedAlgorithm::PPass { p } => *p,
            _ => 1,
        }
    }

    fn spawn(&self, v: f64, k: usize, n: usize) -> Result<Vec<CandidateState>> {
        Ok(match self {
            GuessedAlgorithm::Sieve => vec![CandidateState::new("sieve", k, ThresholdRule::Sieve { v })],
            GuessedAlgorithm::SmallK => vec![CandidateState::new("small-k", k, ThresholdRule::SmallK { v })],
            GuessedAlgorithm::Salsa { params } => salsa_candidates(k, v, n, params)?,
            GuessedAlgorithm::PPass { p } => vec![CandidateState::new(
                "p-pass",
                k,
                ThresholdRule::Schedule(ThresholdSchedule::flat(p_pass_threshold(*p, 1, v, k), n)?),
            )],
        })
    }

    /// Switches a candidate to the rule of pass `pass` (1-based).
    fn enter_pass(&self, c: &mut CandidateState, pass: u32, v: f64, k: usize, n: usize) -> Result<()> {
        if let GuessedAlgorithm::PPass { p } = self {
            c.set_rule(ThresholdRule::Schedule(ThresholdSchedule::flat(p_pass_threshold(*p, pass, v, k), n)?));
        }
        Ok(())
    }
}

/// Inclusive range of exponents `j` with `lo ≤ (1 + eps)^j ≤ hi`.
pub fn guess_exponents(lo: f64, hi: f64, eps: f64) -> Option<(i32, i32)> {
    if !(lo > 0.0 && hi >= lo) {
        return None;
    }
    let base = 1.0 + eps;
    let mut first = (lo.ln() / base.ln()).ceil() as i32;
    while base.powi(first - 1) >= lo {
        first -= 1;
    }
    while base.powi(first) < lo {
        first += 1;
    }
    let mut last = (hi.ln() / base.ln()).floor() as i32;
    while base.powi(last + 1) <= hi {
        last += 1;
    }
    while base.powi(last) > hi {
        last -= 1;
    }
    (first <= last).then_some((first, last))
}

/// Upper bound on simultaneously live guesses: `⌈log_{1+eps}(k / T)⌉ + 1`.
pub fn live_guess_bound(k: usize, t_min: f64, eps: f64) -> usize {
    ((k as f64 / t_min).ln() / (1.0 + eps).ln()).ceil() as usize + 1
}

/// Runs `algorithm` for every live OPT guess and returns the best final
/// solution among the guesses alive at the end of the stream.
pub fn guess_opt(
    algorithm: &GuessedAlgorithm,
    oracle: &MeteredOracle<'_>,
    stream: &StreamSource<'_>,
    k: usize,
    eps: f64,
) -> Result<RunOutcome> {
    check_k(k)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
    }
    let t_min = algorithm.min_threshold_coefficient();
    let base = 1.0 + eps;
    let n = stream.len();
    let mut live: BTreeMap<i32, Vec<CandidateState>> = BTreeMap::new();
    let mut max_singleton = 0.0_f64;
    let mut peak = 0;
    let mut max_live = 0;
    let stored = |live: &BTreeMap<i32, Vec<CandidateState>>| -> usize {
        live.values().flatten().map(|c| c.solution().len()).sum()
    };

    for (position, e) in stream.pass() {
        oracle.check(e)?;
        let singleton = oracle.eval(&[e]);
        if singleton > max_singleton {
            max_singleton = singleton;
            match guess_exponents(max_singleton, k as f64 * max_singleton / t_min, eps) {
                Some((first, last)) => {
                    live.retain(|&j, _| j >= first);
                    for j in first..=last {
                        if let std::collections::btree_map::Entry::Vacant(slot) = live.entry(j) {
                            slot.insert(algorithm.spawn(base.powi(j), k, n)?);
                        }
                    }
                }
                None => live.clear(),
            }
            max_live = max_live.max(live.len());
        }
        for candidates in live.values_mut() {
            for c in candidates.iter_mut() {
                c.offer(oracle, position, e);
            }
        }
        peak = peak.max(stored(&live));
    }

    for pass in 2..=algorithm.passes() {
        for (&j, candidates) in live.iter_mut() {
            for c in candidates.iter_mut() {
                algorithm.enter_pass(c, pass, base.powi(j), k, n)?;
            }
        }
        for (position, e) in stream.pass() {
            for candidates in live.values_mut() {
                for c in candidates.iter_mut() {
                    c.offer(oracle, position, e);
                }
            }
        }
        peak = peak.max(stored(&live));
    }

    let labelled: Vec<CandidateState> = live
        .into_iter()
        .flat_map(|(j, candidates)| {
            candidates.into_iter().map(move |mut c| {
                let label = format!("{}@(1+eps)^{j}", c.label());
                c.set_label(label);
                c
            })
        })
        .collect();
    let mut outcome = RunOutcome::best_of(labelled, peak, algorithm.passes());
    outcome.max_live_guesses = max_live;
    Ok(outcome)
}
