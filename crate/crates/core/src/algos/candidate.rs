use std::cell::Cell;

use serde::Serialize;

use super::schedule::ThresholdSchedule;
use crate::oracle::{ElementId, MeteredOracle, SolutionSet};

/// A replayable stream that counts how often it is read.
#[derive(Debug)]
pub struct StreamSource<'a> {
    items: &'a [ElementId],
    reads: Cell<u64>,
    passes: Cell<u32>,
}

impl<'a> StreamSource<'a> {
    pub fn new(items: &'a [ElementId]) -> Self {
        Self {
            items,
            reads: Cell::new(0),
            passes: Cell::new(0),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Starts a pass. Yields `(position, element)` with 1-based positions.
    pub fn pass(&self) -> impl Iterator<Item = (usize, ElementId)> + '_ {
        self.passes.set(self.passes.get() + 1);
        self.items.iter().enumerate().map(move |(i, &e)| {
            self.reads.set(self.reads.get() + 1);
            (i + 1, e)
        })
    }

    /// Element reads across all passes.
    pub fn reads(&self) -> u64 {
        self.reads.get()
    }

    pub fn passes(&self) -> u32 {
        self.passes.get()
    }
}

/// Acceptance rule of a candidate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ThresholdRule {
    /// Position-dependent threshold.
    Schedule(ThresholdSchedule),
    /// `(v/2 − f(S)) / (k − |S|)`.
    Sieve { v: f64 },
    /// `(v − f(S)) / k`.
    SmallK { v: f64 },
}

impl ThresholdRule {
    pub fn threshold(&self, position: usize, solution: &SolutionSet) -> f64 {
        match *self {
            ThresholdRule::Schedule(ref s) => s.threshold_at(position),
            ThresholdRule::Sieve { v } => {
                // Only consulted while |S| < k, so the denominator is positive.
                (v / 2.0 - solution.value()) / (solution.capacity() - solution.len()) as f64
            }
            ThresholdRule::SmallK { v } => (v - solution.value()) / solution.capacity() as f64,
        }
    }
}

/// One threshold-greedy selection running over a stream.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateState {
    label: String,
    solution: SolutionSet,
    rule: ThresholdRule,
    thresholds: Vec<f64>,
}

impl CandidateState {
    pub fn new(label: impl Into<String>, k: usize, rule: ThresholdRule) -> Self {
        Self {
            label: label.into(),
            solution: SolutionSet::new(k),
            rule,
            thresholds: Vec::with_capacity(k),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn solution(&self) -> &SolutionSet {
        &self.solution
    }

    pub fn into_solution(self) -> SolutionSet {
        self.solution
    }

    pub fn rule(&self) -> &ThresholdRule {
        &self.rule
    }

    pub fn set_rule(&mut self, rule: ThresholdRule) {
        self.rule = rule;
    }

    /// Threshold in force at each insertion, parallel to the solution's gains.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Offers the element at `position`. Full candidates and members are
    /// skipped without touching the oracle; otherwise exactly one evaluation
    /// is spent, on a set of size at most `k`.
    pub fn offer(&mut self, oracle: &MeteredOracle<'_>, position: usize, e: ElementId) -> bool {
        if self.solution.is_full() || self.solution.contains(e) {
            return false;
        }
        let threshold = self.rule.threshold(position, &self.solution);
        let probe = oracle.probe(e, &self.solution);
        if probe.gain >= threshold {
            self.solution.insert(e, probe);
            self.thresholds.push(threshold);
            true
        } else {
            false
        }
    }
}

/// Result of running an algorithm.
#[derive(Clone, Debug, Serialize)]
pub struct RunOutcome {
    pub solution: SolutionSet,
    /// Label of the candidate that produced `solution`.
    pub winner: String,
    /// Threshold at each insertion into `solution`.
    pub insertion_thresholds: Vec<f64>,
    /// Final value of every candidate still alive at the end.
    pub candidate_values: Vec<(String, f64)>,
    /// Largest number of elements held across all candidates at once.
    pub peak_stored: usize,
    pub passes: u32,
    /// Largest number of simultaneously live OPT guesses (0 when OPT is given).
    pub max_live_guesses: usize,
}

impl RunOutcome {
    pub fn value(&self) -> f64 {
        self.solution.value()
    }

    /// Picks the best candidate; ties go to the earliest one.
    pub(crate) fn best_of(candidates: Vec<CandidateState>, peak_stored: usize, passes: u32) -> Self {
        let candidate_values = candidates
            .iter()
            .map(|c| (c.label.clone(), c.solution.value()))
            .collect();
        let mut best: Option<CandidateState> = None;
        for c in candidates {
            if best.as_ref().is_none_or(|b| c.solution.value() > b.solution.value()) {
                best = Some(c);
            }
        }
        let best = best.unwrap_or_else(|| CandidateState::new("none", 0, ThresholdRule::SmallK { v: 0.0 }));
        Self {
            winner: best.label,
            insertion_thresholds: best.thresholds,
            solution: best.solution,
            candidate_values,
            peak_stored,
            passes,
            max_live_guesses: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_counts_reads_and_passes() {
        let items = crate::oracle::ids(&[3, 1, 2]);
        let s = StreamSource::new(&items);
        let positions: Vec<usize> = s.pass().map(|(i, _)| i).collect();
        assert_eq!(positions, vec![1, 2, 3]);
        s.pass().for_each(drop);
        assert_eq!((s.reads(), s.passes()), (6, 2));
    }

    #[test]
    fn sieve_rule_is_constant_under_exact_gains() {
        // With every gain equal to v/(2k) the sieve threshold never moves.
        let mut s = SolutionSet::new(4);
        let rule = ThresholdRule::Sieve { v: 8.0 };
        assert_eq!(rule.threshold(1, &s), 1.0);
        s.insert(ElementId(0), crate::oracle::Probe { gain: 1.0, value: 1.0 });
        assert_eq!(rule.threshold(2, &s), 1.0);
    }

    #[test]
    fn small_k_rule() {
        let mut s = SolutionSet::new(2);
        let rule = ThresholdRule::SmallK { v: 10.0 };
        assert_eq!(rule.threshold(1, &s), 5.0);
        s.insert(ElementId(0), crate::oracle::Probe { gain: 6.0, value: 6.0 });
        assert_eq!(rule.threshold(2, &s), 2.0);
    }
}
