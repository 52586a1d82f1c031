use std::collections::BTreeMap;

use serde::Serialize;

use crate::algos::p_pass_bound;
use crate::exact::{verify_ratio, RatioCheck};

use super::record::{OptMode, RunRecord};
use super::run::AlgoSpec;

/// Approximation guarantees per algorithm, as fractions of OPT.
#[derive(Clone, Debug, Default)]
pub struct Bounds {
    overrides: BTreeMap<String, f64>,
}

impl Bounds {
    pub fn theorems() -> Self {
        Self::default()
    }

    /// Uses `bound` for records labelled `algo` instead of the default.
    pub fn with(mut self, algo: &str, bound: f64) -> Self {
        self.overrides.insert(algo.to_string(), bound);
        self
    }

    /// Guarantee for `record`, or `None` when nothing is promised. In guessed
    /// mode the bound loses a `(1 − eps)` factor.
    pub fn for_record(&self, record: &RunRecord) -> Option<f64> {
        let base = match self.overrides.get(&record.algo) {
            Some(&b) => b,
            None => default_bound(record)?,
        };
        Some(match record.opt_estimate_mode {
            OptMode::Guessed => base * (1.0 - record.param::<f64>("eps")?),
            OptMode::Known => base,
        })
    }
}

fn default_bound(record: &RunRecord) -> Option<f64> {
    let greedy = 1.0 - (-1.0f64).exp();
    match record.algo.parse::<AlgoSpec>().ok()? {
        AlgoSpec::Sieve | AlgoSpec::Salsa => Some(0.5),
        AlgoSpec::TwoPass => Some(5.0 / 9.0),
        AlgoSpec::PPass(p) => Some(p_pass_bound(p.or_else(|| record.param("p"))?)),
        AlgoSpec::Greedy | AlgoSpec::LazyGreedy => Some(greedy),
        // Promised only for runs that fill all k slots.
        AlgoSpec::SmallK => (record.param::<usize>("size")? == record.k).then_some(greedy),
        AlgoSpec::Dense | AlgoSpec::Fixed | AlgoSpec::HighLow => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckedRun {
    pub algo: String,
    pub k: usize,
    pub trial: u32,
    pub bound: f64,
    pub opt: f64,
    pub check: RatioCheck,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checked: Vec<CheckedRun>,
    /// Records with no guarantee or no recorded OPT.
    pub skipped: usize,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckedRun> {
        self.checked.iter().filter(|c| !c.check.pass)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// Process exit status: 0 when every check passed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            2
        }
    }
}

/// Checks every record that carries an OPT against its guarantee.
pub fn verify_suite(records: &[RunRecord], bounds: &Bounds) -> VerifyReport {
    let mut report = VerifyReport::default();
    for r in records {
        let (Some(bound), Some(opt)) = (bounds.for_record(r), r.param::<f64>("opt")) else {
            report.skipped += 1;
            continue;
        };
        match verify_ratio(r.utility, opt, bound) {
            Ok(check) => report.checked.push(CheckedRun {
                algo: r.algo.clone(),
                k: r.k,
                trial: r.trial,
                bound,
                opt,
                check,
            }),
            Err(_) => report.skipped += 1,
        }
    }
    report
}

/// `(k, trial)` pairs where `better` scored below `worse` on the same stream.
pub fn dominance_violations(records: &[RunRecord], better: &str, worse: &str) -> Vec<(usize, u32)> {
    let lookup: BTreeMap<(usize, u32), f64> = records
        .iter()
        .filter(|r| r.algo == worse)
        .map(|r| ((r.k, r.trial), r.utility))
        .collect();
    records
        .iter()
        .filter(|r| r.algo == better)
        .filter(|r| lookup.get(&(r.k, r.trial)).is_some_and(|&w| r.utility < w))
        .map(|r| (r.k, r.trial))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(algo: &str, utility: f64, opt: f64, mode: OptMode) -> RunRecord {
        RunRecord {
            algo: algo.into(),
            k: 2,
            trial: 0,
            seed: 0,
            utility,
            oracle_calls: 0,
            peak_stored: 0,
            passes: 1,
            opt_estimate_mode: mode,
            wall_ms: 0,
            params: [
                ("opt".to_string(), opt.to_string()),
                ("eps".into(), "0.5".into()),
                ("size".into(), "1".into()),
            ]
            .into(),
        }
    }

    #[test]
    fn bounds_by_label() {
        let b = Bounds::theorems();
        assert_eq!(b.for_record(&rec("two-pass", 5.0, 9.0, OptMode::Known)), Some(5.0 / 9.0));
        assert_eq!(b.for_record(&rec("sieve", 5.0, 9.0, OptMode::Guessed)), Some(0.25));
        assert!((b.for_record(&rec("p-pass:2", 5.0, 9.0, OptMode::Known)).unwrap() - 5.0 / 9.0).abs() < 1e-15);
        // small-k with an unfilled set promises nothing.
        assert_eq!(b.for_record(&rec("small-k", 5.0, 9.0, OptMode::Known)), None);
        assert_eq!(b.with("dense", 0.1).for_record(&rec("dense", 1.0, 9.0, OptMode::Known)), Some(0.1));
    }

    #[test]
    fn suite_exit_codes() {
        let good = vec![rec("two-pass", 5.0, 9.0, OptMode::Known), rec("dense", 0.0, 9.0, OptMode::Known)];
        let report = verify_suite(&good, &Bounds::theorems());
        assert_eq!((report.exit_code(), report.checked.len(), report.skipped), (0, 1, 1));
        let bad = vec![rec("two-pass", 4.4, 9.0, OptMode::Known)];
        assert_eq!(verify_suite(&bad, &Bounds::theorems()).exit_code(), 2);
    }

    #[test]
    fn dominance() {
        let mut a = rec("salsa", 3.0, 9.0, OptMode::Known);
        let b = rec("sieve", 4.0, 9.0, OptMode::Known);
        assert_eq!(dominance_violations(&[a.clone(), b.clone()], "salsa", "sieve"), vec![(2, 0)]);
        a.utility = 4.0;
        assert!(dominance_violations(&[a, b], "salsa", "sieve").is_empty());
    }
}
