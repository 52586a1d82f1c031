//! Randomized and exhaustive checks of monotonicity and submodularity.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SubmodularOracle};

/// A triple `(X, Y, e)` with `X ⊆ Y` and `e ∉ Y` that broke a property.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub smaller: Vec<ElementId>,
    pub larger: Vec<ElementId>,
    pub element: ElementId,
    pub gain_smaller: f64,
    pub gain_larger: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// `f(e | Y) < 0`.
    Monotonicity,
    /// `f(e | X) < f(e | Y)`.
    Submodularity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub checked: u64,
    pub violations: u64,
    pub first_violation: Option<Violation>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct Auditor<'a> {
    oracle: &'a dyn SubmodularOracle,
    report: AuditReport,
}

impl<'a> Auditor<'a> {
    fn new(oracle: &'a dyn SubmodularOracle) -> Self {
        Self {
            oracle,
            report: AuditReport {
                checked: 0,
                violations: 0,
                first_violation: None,
            },
        }
    }

    fn check(&mut self, smaller: &[ElementId], larger: &[ElementId], e: ElementId) {
        let f = |set: &[ElementId]| self.oracle.value(set);
        let with = |set: &[ElementId]| {
            let mut v = set.to_vec();
            v.push(e);
            v
        };
        let fx = f(smaller);
        let fy = f(larger);
        let fye = f(&with(larger));
        let gain_smaller = f(&with(smaller)) - fx;
        let gain_larger = fye - fy;
        let scale = REL_SCALE * fye.abs().max(1.0);

        self.report.checked += 1;
        let kind = if gain_larger < -scale {
            Some(ViolationKind::Monotonicity)
        } else if gain_smaller < gain_larger - scale {
            Some(ViolationKind::Submodularity)
        } else {
            None
        };
        if let Some(kind) = kind {
            self.report.violations += 1;
            self.report.first_violation.get_or_insert_with(|| Violation {
                kind,
                smaller: smaller.to_vec(),
                larger: larger.to_vec(),
                element: e,
                gain_smaller,
                gain_larger,
            });
        }
    }
}

const REL_SCALE: f64 = 1e-9;

/// Samples `samples` random triples `X ⊆ Y ⊆ V`, `e ∉ Y` and checks
/// `f(e|Y) ≥ 0` and `f(e|X) ≥ f(e|Y)` up to a relative tolerance of 1e-9.
pub fn audit_monotone_submodular(
    oracle: &dyn SubmodularOracle,
    samples: u64,
    seed: u64,
) -> Result<AuditReport> {
    let n = oracle.ground_size();
    if n < 2 {
        return Err(Error::Domain(format!("audit needs a ground set of at least 2 elements, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut auditor = Auditor::new(oracle);
    let mut pool: Vec<ElementId> = (0..n).map(ElementId::from).collect();
    for _ in 0..samples {
        pool.shuffle(&mut rng);
        let (e, rest) = pool.split_last().expect("n >= 2");
        // Vary the density so both small and large sets are exercised.
        let p_larger: f64 = rng.random();
        let p_smaller: f64 = rng.random();
        let larger: Vec<ElementId> = rest.iter().copied().filter(|_| rng.random_bool(p_larger)).collect();
        let smaller: Vec<ElementId> = larger.iter().copied().filter(|_| rng.random_bool(p_smaller)).collect();
        auditor.check(&smaller, &larger, *e);
    }
    Ok(auditor.report)
}

/// Checks every triple `X ⊆ Y ⊆ V \ {e}`. Limited to ground sets of at most
/// 12 elements.
pub fn audit_exhaustive(oracle: &dyn SubmodularOracle) -> Result<AuditReport> {
    let n = oracle.ground_size();
    if !(2..=12).contains(&n) {
        return Err(Error::Domain(format!(
            "exhaustive audit supports ground sets of 2..=12 elements, got {n}"
        )));
    }
    let mut auditor = Auditor::new(oracle);
    let members = |mask: u32| -> Vec<ElementId> {
        (0..n).filter(|i| mask & (1 << i) != 0).map(ElementId::from).collect()
    };
    for e in 0..n {
        let others = ((1u32 << n) - 1) & !(1 << e);
        // Enumerate Y ⊆ others, then X ⊆ Y.
        let mut y = others;
        loop {
            let larger = members(y);
            let mut x = y;
            loop {
                auditor.check(&members(x), &larger, ElementId::from(e));
                if x == 0 {
                    break;
                }
                x = (x - 1) & y;
            }
            if y == 0 {
                break;
            }
            y = (y - 1) & others;
        }
    }
    Ok(auditor.report)
}
