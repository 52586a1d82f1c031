//! Ground-set and value-oracle abstractions.
//!
//! Objectives implement [`SubmodularOracle`], a pure set function over the
//! indices `0..ground_size`. Algorithms never call an objective directly:
//! they go through a [`MeteredOracle`], which counts evaluations and records
//! the largest set ever queried so that cost and feasibility claims can be
//! checked after a run.

use std::fmt;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used for every value comparison in the crate.
pub const REL_TOL: f64 = 1e-9;

/// `a` and `b` agree within [`REL_TOL`] relative to the larger magnitude
/// (absolute below 1).
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Index of an element of the ground set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

impl ElementId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ElementId {
    fn from(i: usize) -> Self {
        ElementId(u32::try_from(i).expect("element index exceeds u32"))
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Convenience for tests and examples: `ids(&[0, 2])`.
pub fn ids(raw: &[u32]) -> Vec<ElementId> {
    raw.iter().copied().map(ElementId).collect()
}

/// A normalized set function given as a value oracle.
///
/// Implementations must return 0 for the empty set and be deterministic.
/// `value` may assume that every id is `< ground_size()` and that the slice
/// holds no duplicates; [`MeteredOracle::try_eval`] is the checked entry.
pub trait SubmodularOracle: Send + Sync {
    fn ground_size(&self) -> usize;

    fn value(&self, set: &[ElementId]) -> f64;
}

impl<T: SubmodularOracle + ?Sized> SubmodularOracle for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        (**self).value(set)
    }
}

impl<T: SubmodularOracle + ?Sized> SubmodularOracle for Box<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        (**self).value(set)
    }
}

/// Evaluation counters. Both counters only ever grow.
#[derive(Debug, Default)]
pub struct OracleStats {
    evals: AtomicU64,
    largest_query: AtomicUsize,
}

impl OracleStats {
    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    /// Cardinality of the largest set passed to the oracle so far.
    pub fn largest_query(&self) -> usize {
        self.largest_query.load(Ordering::Relaxed)
    }

    fn record(&self, size: usize) {
        self.evals.fetch_add(1, Ordering::Relaxed);
        self.largest_query.fetch_max(size, Ordering::Relaxed);
    }
}

/// Counting wrapper around an oracle.
pub struct MeteredOracle<'a> {
    inner: &'a dyn SubmodularOracle,
    stats: OracleStats,
}

impl<'a> MeteredOracle<'a> {
    pub fn new(inner: &'a dyn SubmodularOracle) -> Self {
        Self {
            inner,
            stats: OracleStats::default(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    pub fn stats(&self) -> &OracleStats {
        &self.stats
    }

    pub fn check(&self, e: ElementId) -> Result<()> {
        let ground_size = self.ground_size();
        if e.index() < ground_size {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                id: e.index(),
                ground_size,
            })
        }
    }

    pub fn check_all(&self, set: &[ElementId]) -> Result<()> {
        set.iter().try_for_each(|&e| self.check(e))
    }

    /// Unchecked, counted evaluation.
    pub fn eval(&self, set: &[ElementId]) -> f64 {
        self.stats.record(set.len());
        self.inner.value(set)
    }

    pub fn try_eval(&self, set: &[ElementId]) -> Result<f64> {
        self.check_all(set)?;
        Ok(self.eval(set))
    }

    /// `f(S + e) - f(S)` trusting `solution`'s cached value: one evaluation,
    /// or none when `e` is already a member.
    pub fn probe(&self, e: ElementId, solution: &SolutionSet) -> Probe {
        if solution.contains(e) {
            return Probe {
                gain: 0.0,
                value: solution.value(),
            };
        }
        let mut set = Vec::with_capacity(solution.len() + 1);
        set.extend_from_slice(solution.members());
        set.push(e);
        let value = self.eval(&set);
        Probe {
            gain: value - solution.value(),
            value,
        }
    }
}

/// Outcome of probing an element against a solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Probe {
    pub gain: f64,
    /// Value of the solution with the element added.
    pub value: f64,
}

/// Marginal gain `f(e | S)` computed from two fresh evaluations.
///
/// An element that is already in `S` has gain 0 and costs nothing.
pub fn marginal_gain(oracle: &MeteredOracle<'_>, e: ElementId, solution: &SolutionSet) -> Result<f64> {
    oracle.check(e)?;
    oracle.check_all(solution.members())?;
    if solution.contains(e) {
        return Ok(0.0);
    }
    let base = oracle.eval(solution.members());
    let mut set = solution.members().to_vec();
    set.push(e);
    Ok(oracle.eval(&set) - base)
}

/// An ordered selection with its cached value and the gain recorded at each
/// insertion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    members: Vec<ElementId>,
    value: f64,
    gains: Vec<f64>,
    capacity: usize,
}

impl SolutionSet {
    pub fn new(capacity: usize) -> Self {
        Self {
            members: Vec::with_capacity(capacity),
            value: 0.0,
            gains: Vec::with_capacity(capacity),
            capacity,
        }
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() >= self.capacity
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.members.contains(&e)
    }

    /// Appends `e` using a probe taken against the current contents.
    /// Returns false (and leaves the set untouched) when full or a duplicate.
    pub fn insert(&mut self, e: ElementId, probe: Probe) -> bool {
        if self.is_full() || self.contains(e) {
            return false;
        }
        self.members.push(e);
        self.gains.push(probe.gain);
        self.value = probe.value;
        true
    }

    /// Re-evaluates the members and compares against the cached value and
    /// the sum of recorded gains.
    pub fn is_consistent(&self, oracle: &dyn SubmodularOracle) -> bool {
        let fresh = oracle.value(&self.members);
        let summed: f64 = self.gains.iter().sum();
        approx_eq(fresh, self.value) && approx_eq(summed, self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// f(S) = sum of per-element weights.
    struct Modular(Vec<f64>);

    impl SubmodularOracle for Modular {
        fn ground_size(&self) -> usize {
            self.0.len()
        }

        fn value(&self, set: &[ElementId]) -> f64 {
            set.iter().map(|e| self.0[e.index()]).sum()
        }
    }

    #[test]
    fn gain_of_member_is_zero_and_free() {
        let f = Modular(vec![1.0, 2.0, 3.0]);
        let oracle = MeteredOracle::new(&f);
        let mut s = SolutionSet::new(3);
        let p = oracle.probe(ElementId(1), &s);
        assert!(s.insert(ElementId(1), p));
        let before = oracle.stats().eval_count();
        assert_eq!(marginal_gain(&oracle, ElementId(1), &s).unwrap(), 0.0);
        assert_eq!(oracle.probe(ElementId(1), &s).gain, 0.0);
        assert_eq!(oracle.stats().eval_count(), before);
    }

    #[test]
    fn gain_on_empty_set_is_singleton_value() {
        let f = Modular(vec![1.5, 2.0]);
        let oracle = MeteredOracle::new(&f);
        let s = SolutionSet::new(2);
        assert_eq!(marginal_gain(&oracle, ElementId(0), &s).unwrap(), 1.5);
        assert_eq!(oracle.stats().eval_count(), 2);
    }

    #[test]
    fn invalid_element_is_a_domain_error() {
        let f = Modular(vec![1.0]);
        let oracle = MeteredOracle::new(&f);
        let err = marginal_gain(&oracle, ElementId(4), &SolutionSet::new(1)).unwrap_err();
        assert!(matches!(err, Error::InvalidElement { id: 4, ground_size: 1 }));
    }

    #[test]
    fn insert_respects_capacity_and_duplicates() {
        let f = Modular(vec![1.0, 2.0, 3.0]);
        let oracle = MeteredOracle::new(&f);
        let mut s = SolutionSet::new(2);
        for e in ids(&[0, 0, 1]) {
            let p = oracle.probe(e, &s);
            s.insert(e, p);
        }
        assert!(!s.insert(ElementId(2), Probe { gain: 3.0, value: 6.0 }));
        assert_eq!(s.members(), &ids(&[0, 1])[..]);
        assert_eq!(s.gains(), &[1.0, 2.0]);
        assert!(s.is_consistent(&f));
        assert_eq!(oracle.stats().largest_query(), 2);
    }
}
