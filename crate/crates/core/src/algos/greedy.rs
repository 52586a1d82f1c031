//! Offline greedy baselines.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::candidate::RunOutcome;
use super::single::check_k;
use crate::error::Result;
use crate::oracle::{ElementId, MeteredOracle, SolutionSet};

fn outcome(solution: SolutionSet, label: &str, ground: usize, rounds: u32) -> RunOutcome {
    RunOutcome {
        candidate_values: vec![(label.to_string(), solution.value())],
        winner: label.to_string(),
        insertion_thresholds: Vec::new(),
        solution,
        // Offline: the whole universe is held in memory.
        peak_stored: ground,
        passes: rounds.max(1),
        max_live_guesses: 0,
    }
}

/// `k` rounds of picking the element of largest marginal gain, ties to the
/// smallest id. Stops early once no element has positive gain.
pub fn greedy(oracle: &MeteredOracle<'_>, universe: &[ElementId], k: usize) -> Result<RunOutcome> {
    check_k(k)?;
    oracle.check_all(universe)?;
    let mut candidates: Vec<ElementId> = universe.to_vec();
    candidates.sort_unstable();
    candidates.dedup();
    let mut solution = SolutionSet::new(k);
    let mut rounds = 0;
    while !solution.is_full() {
        rounds += 1;
        let mut best = None;
        for &e in &candidates {
            if solution.contains(e) {
                continue;
            }
            let probe = oracle.probe(e, &solution);
            if best.is_none_or(|(_, b): (ElementId, crate::oracle::Probe)| probe.gain > b.gain) {
                best = Some((e, probe));
            }
        }
        match best {
            Some((e, probe)) if probe.gain > 0.0 => {
                solution.insert(e, probe);
            }
            _ => break,
        }
    }
    Ok(outcome(solution, "greedy", candidates.len(), rounds))
}

/// Heap entry ordered by bound (descending) then id (ascending).
#[derive(Debug, PartialEq)]
struct Bound {
    gain: f64,
    id: ElementId,
    value: f64,
    /// Solution size the bound was computed against.
    fresh_at: usize,
}

impl Eq for Bound {}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Greedy with stale upper bounds in a priority queue. Produces the same
/// selection as [`greedy`] under the same tie-breaking, with fewer
/// evaluations on submodular inputs.
pub fn lazy_greedy(oracle: &MeteredOracle<'_>, universe: &[ElementId], k: usize) -> Result<RunOutcome> {
    check_k(k)?;
    oracle.check_all(universe)?;
    let mut candidates: Vec<ElementId> = universe.to_vec();
    candidates.sort_unstable();
    candidates.dedup();
    let mut solution = SolutionSet::new(k);
    let mut heap: BinaryHeap<Bound> = candidates
        .iter()
        .map(|&id| Bound {
            gain: f64::INFINITY,
            id,
            value: f64::NAN,
            fresh_at: usize::MAX,
        })
        .collect();
    let mut rounds = 0;
    while !solution.is_full() {
        rounds += 1;
        let picked = loop {
            let Some(top) = heap.pop() else { break None };
            if top.fresh_at == solution.len() {
                break Some(top);
            }
            let probe = oracle.probe(top.id, &solution);
            heap.push(Bound {
                gain: probe.gain,
                id: top.id,
                value: probe.value,
                fresh_at: solution.len(),
            });
        };
        match picked {
            Some(top) if top.gain > 0.0 => {
                // The stored bound is exact for the current solution.
                let probe = crate::oracle::Probe {
                    gain: top.gain,
                    value: top.value,
                };
                solution.insert(top.id, probe);
            }
            _ => break,
        }
    }
    Ok(outcome(solution, "lazy-greedy", candidates.len(), rounds))
}
