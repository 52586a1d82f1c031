//! Exhaustive optimum for small instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SubmodularOracle, REL_TOL};

/// Default cap on the number of subsets enumerated.
pub const DEFAULT_MAX_SUBSETS: u128 = 5_000_000;

#[derive(Clone, Copy, Debug)]
pub struct BruteForce {
    /// Enumerate only sets of exactly `min(k, n)` elements. Valid for monotone
    /// oracles, whose maxima are attained at full cardinality.
    pub monotone: bool,
    pub max_subsets: u128,
}

impl Default for BruteForce {
    fn default() -> Self {
        Self {
            monotone: false,
            max_subsets: DEFAULT_MAX_SUBSETS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub value: f64,
    /// Lexicographically smallest maximizer.
    pub witness: Vec<ElementId>,
    pub subsets_checked: u128,
}

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

impl BruteForce {
    pub fn monotone() -> Self {
        Self {
            monotone: true,
            ..Self::default()
        }
    }

    /// Number of subsets the search would visit.
    pub fn subset_count(&self, n: usize, k: usize) -> u128 {
        let k = k.min(n);
        if self.monotone {
            binomial(n, k)
        } else {
            (0..=k).map(|r| binomial(n, r)).sum()
        }
    }

    /// Maximum of `f` over all subsets of at most `k` elements.
    pub fn solve(&self, oracle: &dyn SubmodularOracle, k: usize) -> Result<Optimum> {
        let n = oracle.ground_size();
        let k = k.min(n);
        let required = self.subset_count(n, k);
        if required > self.max_subsets {
            return Err(Error::Size {
                what: "brute-force enumeration",
                required,
                cap: self.max_subsets,
            });
        }
        let mut search = Search {
            oracle,
            n,
            best_value: f64::NEG_INFINITY,
            best: Vec::new(),
            current: Vec::with_capacity(k),
            checked: 0,
        };
        if self.monotone {
            search.exact_size(0, k);
        } else {
            search.up_to(0, k);
        }
        Ok(Optimum {
            value: search.best_value,
            witness: search.best,
            subsets_checked: search.checked,
        })
    }
}

struct Search<'a> {
    oracle: &'a dyn SubmodularOracle,
    n: usize,
    best_value: f64,
    best: Vec<ElementId>,
    current: Vec<ElementId>,
    checked: u128,
}

impl Search<'_> {
    fn visit(&mut self) {
        self.checked += 1;
        let value = self.oracle.value(&self.current);
        // Visits happen in lexicographic order, so a strict comparison keeps
        // the smallest maximizer.
        if value > self.best_value {
            self.best_value = value;
            self.best = self.current.clone();
        }
    }

    /// All sets of size ≤ `remaining` extending `current` with ids ≥ `start`,
    /// in lexicographic order (a prefix precedes its extensions).
    fn up_to(&mut self, start: usize, remaining: usize) {
        self.visit();
        if remaining == 0 {
            return;
        }
        for e in start..self.n {
            self.current.push(ElementId::from(e));
            self.up_to(e + 1, remaining - 1);
            self.current.pop();
        }
    }

    fn exact_size(&mut self, start: usize, remaining: usize) {
        if remaining == 0 {
            self.visit();
            return;
        }
        for e in start..=(self.n - remaining) {
            self.current.push(ElementId::from(e));
            self.exact_size(e + 1, remaining - 1);
            self.current.pop();
        }
    }
}

/// Exact optimum over sets of at most `k` elements with default settings.
pub fn brute_force_opt(oracle: &dyn SubmodularOracle, k: usize) -> Result<Optimum> {
    BruteForce::default().solve(oracle, k)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioCheck {
    pub pass: bool,
    /// `value / opt`.
    pub ratio: f64,
    /// `value − bound · opt`; negative when failing.
    pub slack: f64,
}

/// Passes iff `value ≥ (bound − 1e-9) · opt`.
pub fn verify_ratio(value: f64, opt: f64, bound: f64) -> Result<RatioCheck> {
    if !(opt > 0.0 && opt.is_finite()) {
        return Err(Error::Domain(format!("ratio check needs a positive optimum, got {opt}")));
    }
    Ok(RatioCheck {
        pass: value >= (bound - REL_TOL) * opt,
        ratio: value / opt,
        slack: value - bound * opt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{CoverageObjective, IndexObjective};
    use crate::oracle::ids;

    fn star() -> CoverageObjective {
        CoverageObjective::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap()
    }

    #[test]
    fn star_optimum() {
        let opt = brute_force_opt(&star(), 1).unwrap();
        assert_eq!(opt.value, 6.0);
        assert_eq!(opt.witness, ids(&[0]));
        assert_eq!(opt.subsets_checked, 7);
        let mono = BruteForce::monotone().solve(&star(), 1).unwrap();
        assert_eq!((mono.value, mono.witness, mono.subsets_checked), (6.0, ids(&[0]), 6));
    }

    #[test]
    fn k_zero_is_empty() {
        let opt = brute_force_opt(&star(), 0).unwrap();
        assert_eq!((opt.value, opt.witness.len()), (0.0, 0));
    }

    #[test]
    fn index_instance_optimum() {
        let f = IndexObjective::new(3, vec![true, false, true], 1).unwrap();
        assert_eq!(brute_force_opt(&f, 3).unwrap().value, 5.0);
        let f = IndexObjective::new(3, vec![true, false, true], 2).unwrap();
        assert_eq!(brute_force_opt(&f, 3).unwrap().value, 3.0);
    }

    #[test]
    fn lexicographic_witness_among_ties() {
        // Path 0-1-2: {1} covers everything; with k = 2, {0,1} is the first
        // maximizer in lexicographic order.
        let f = CoverageObjective::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(brute_force_opt(&f, 2).unwrap().witness, ids(&[0, 1]));
        assert_eq!(BruteForce::monotone().solve(&f, 2).unwrap().witness, ids(&[0, 1]));
    }

    #[test]
    fn guard_reports_required_count() {
        let solver = BruteForce {
            monotone: true,
            max_subsets: 10,
        };
        match solver.solve(&star(), 3) {
            Err(Error::Size { required, cap, .. }) => assert_eq!((required, cap), (20, 10)),
            other => panic!("expected size error, got {other:?}"),
        }
    }

    #[test]
    fn ratio_checks() {
        assert!(verify_ratio(5.0, 9.0, 5.0 / 9.0).unwrap().pass);
        assert!(!verify_ratio(4.4, 9.0, 5.0 / 9.0).unwrap().pass);
        assert!(verify_ratio(9.0, 9.0, 1.0).unwrap().pass);
        assert!(verify_ratio(1.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 4), 1820);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(BruteForce::default().subset_count(4, 2), 1 + 4 + 6);
    }
}
