//! Multi-pass threshold algorithms sharing one solution across passes.

use super::candidate::{CandidateState, RunOutcome, StreamSource, ThresholdRule};
use super::schedule::ThresholdSchedule;
use super::single::{check_k, check_v, run_pass};
use crate::error::{Error, Result};
use crate::oracle::MeteredOracle;

/// `(num · v) / (den · k)`; both multi-pass routes go through this so equal
/// coefficients give bit-identical thresholds.
pub(crate) fn scaled_threshold(num: f64, den: f64, v: f64, k: usize) -> f64 {
    (num * v) / (den * k as f64)
}

/// Pass `pass` (1-based) of the p-pass algorithm uses `(p/(p+1))^pass · v/k`.
pub(crate) fn p_pass_threshold(p: u32, pass: u32, v: f64, k: usize) -> f64 {
    let num = (p as f64).powi(pass as i32);
    let den = ((p + 1) as f64).powi(pass as i32);
    scaled_threshold(num, den, v, k)
}

fn multi_pass(
    oracle: &MeteredOracle<'_>,
    stream: &StreamSource<'_>,
    label: &str,
    k: usize,
    thresholds: &[f64],
) -> Result<RunOutcome> {
    let n = stream.len();
    let mut candidate = [CandidateState::new(label, k, ThresholdRule::SmallK { v: 0.0 })];
    let mut peak = 0;
    for &t in thresholds {
        candidate[0].set_rule(ThresholdRule::Schedule(ThresholdSchedule::flat(t, n)?));
        run_pass(oracle, stream, &mut candidate, &mut peak)?;
    }
    let [candidate] = candidate;
    Ok(RunOutcome::best_of(vec![candidate], peak, thresholds.len() as u32))
}

/// Two passes with thresholds `2v/(3k)` then `4v/(9k)`.
pub fn two_pass(oracle: &MeteredOracle<'_>, stream: &StreamSource<'_>, k: usize, v: f64) -> Result<RunOutcome> {
    check_k(k)?;
    check_v(v)?;
    let thresholds = [scaled_threshold(2.0, 3.0, v, k), scaled_threshold(4.0, 9.0, v, k)];
    multi_pass(oracle, stream, "two-pass", k, &thresholds)
}

/// `p` passes, pass `i` using the flat threshold `(p/(p+1))^i · v/k`.
pub fn p_pass(oracle: &MeteredOracle<'_>, stream: &StreamSource<'_>, k: usize, v: f64, p: u32) -> Result<RunOutcome> {
    check_k(k)?;
    check_v(v)?;
    if p == 0 {
        return Err(Error::Parameter("p must be at least 1".into()));
    }
    let thresholds: Vec<f64> = (1..=p).map(|i| p_pass_threshold(p, i, v, k)).collect();
    multi_pass(oracle, stream, "p-pass", k, &thresholds)
}

/// Approximation guarantee of the p-pass algorithm, `1 − (p/(p+1))^p`.
pub fn p_pass_bound(p: u32) -> f64 {
    1.0 - (p as f64 / (p + 1) as f64).powi(p as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{ids, ElementId, SubmodularOracle};

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
    fn two_pass_tight_modular_instance() {
        // OPT = 9 with k = 2 (4.5 + 4.5). Elements worth exactly T1·OPT/k = 3
        // and T2·OPT/k = 2 arrive first and fill the solution.
        let f = Modular(vec![3.0, 2.0, 4.5, 4.5]);
        let oracle = MeteredOracle::new(&f);
        let items = ids(&[0, 1, 2, 3]);
        let stream = StreamSource::new(&items);
        let out = two_pass(&oracle, &stream, 2, 9.0).unwrap();
        // Pass 1 (threshold 3) takes 0 and 2; value 7.5 >= 5/9 * 9.
        assert_eq!(out.solution.members(), &ids(&[0, 2])[..]);
        assert!(out.value() >= 5.0);
        assert_eq!(stream.passes(), 2);

        let f = Modular(vec![3.0, 2.0]);
        let oracle = MeteredOracle::new(&f);
        let items = ids(&[0, 1]);
        let stream = StreamSource::new(&items);
        let out = two_pass(&oracle, &stream, 2, 9.0).unwrap();
        assert_eq!(out.value(), 5.0);
        assert_eq!(out.insertion_thresholds, vec![3.0, 2.0]);
    }

    #[test]
    fn empty_stream() {
        let f = Modular(vec![1.0]);
        let oracle = MeteredOracle::new(&f);
        let stream = StreamSource::new(&[]);
        assert!(two_pass(&oracle, &stream, 2, 1.0).unwrap().solution.is_empty());
    }

    #[test]
    fn p1_matches_half_threshold() {
        assert_eq!(p_pass_threshold(1, 1, 10.0, 5), 1.0);
        assert_eq!(p_pass_bound(1), 0.5);
        assert_eq!(p_pass_bound(3), 1.0 - 27.0 / 64.0);
    }

    #[test]
    fn p2_thresholds_match_two_pass_bitwise() {
        for v in [1.0, 7.3, 9.0, 123.456] {
            for k in 1..6 {
                assert_eq!(p_pass_threshold(2, 1, v, k), scaled_threshold(2.0, 3.0, v, k));
                assert_eq!(p_pass_threshold(2, 2, v, k), scaled_threshold(4.0, 9.0, v, k));
            }
        }
    }

    #[test]
    fn reads_stream_p_times() {
        let f = Modular(vec![1.0, 1.0, 1.0]);
        let oracle = MeteredOracle::new(&f);
        let items = ids(&[0, 1, 2]);
        let stream = StreamSource::new(&items);
        let out = p_pass(&oracle, &stream, 1, 3.0, 4).unwrap();
        assert_eq!((stream.passes(), stream.reads(), out.passes), (4, 12, 4));
        assert!(p_pass(&oracle, &stream, 1, 3.0, 0).is_err());
    }
}
