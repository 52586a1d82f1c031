//! Single-pass threshold algorithms with a known OPT estimate `v`.

use super::candidate::{CandidateState, RunOutcome, StreamSource, ThresholdRule};
use super::schedule::{SalsaParams, ThresholdSchedule};
use crate::error::{Error, Result};
use crate::oracle::MeteredOracle;

pub(crate) fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::Parameter("k must be positive".into()))
    } else {
        Ok(())
    }
}

pub(crate) fn check_v(v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("OPT estimate must be positive, got {v}")))
    }
}

/// Feeds one full pass of `stream` to every candidate, element by element.
pub(crate) fn run_pass(
    oracle: &MeteredOracle<'_>,
    stream: &StreamSource<'_>,
    candidates: &mut [CandidateState],
    peak_stored: &mut usize,
) -> Result<()> {
    for (position, e) in stream.pass() {
        oracle.check(e)?;
        for c in candidates.iter_mut() {
            c.offer(oracle, position, e);
        }
        let stored = candidates.iter().map(|c| c.solution().len()).sum();
        *peak_stored = (*peak_stored).max(stored);
    }
    Ok(())
}

fn single(
    oracle: &MeteredOracle<'_>,
    stream: &StreamSource<'_>,
    mut candidates: Vec<CandidateState>,
) -> Result<RunOutcome> {
    let mut peak = 0;
    run_pass(oracle, stream, &mut candidates, &mut peak)?;
    Ok(RunOutcome::best_of(candidates, peak, 1))
}

/// Adds `e_i` whenever `|S| < k` and `f(e_i | S) ≥ schedule(i)`.
pub fn schedule_pass(
    oracle: &MeteredOracle<'_>,
    stream: &StreamSource<'_>,
    k: usize,
    schedule: ThresholdSchedule,
) -> Result<RunOutcome> {
    check_k(k)?;
    if schedule.n() != stream.len() {
        return Err(Error::Parameter(format!(
            "schedule built for {} elements but the stream has {}",
            schedule.n(),
            stream.len()
        )));
    }
    single(oracle, stream, vec![CandidateState::new("schedule", k, ThresholdRule::Schedule(schedule))])
}

/// Sieve-Streaming for one guess `v`.
pub fn sieve_pass(oracle: &MeteredOracle<'_>, stream: &StreamSource<'_>, k: usize, v: f64) -> Result<RunOutcome> {
    check_k(k)?;
    check_v(v)?;
    single(oracle, stream, vec![CandidateState::new("sieve", k, ThresholdRule::Sieve { v })])
}

/// Adaptive small-k pass: threshold `(v − f(S)) / k`.
pub fn small_k_pass(oracle: &MeteredOracle<'_>, stream: &StreamSource<'_>, k: usize, v: f64) -> Result<RunOutcome> {
    check_k(k)?;
    check_v(v)?;
    single(oracle, stream, vec![CandidateState::new("small-k", k, ThresholdRule::SmallK { v })])
}

/// The five composer candidates in tie-break order.
pub(crate) fn salsa_candidates(k: usize, v: f64, n: usize, params: &SalsaParams) -> Result<Vec<CandidateState>> {
    Ok(vec![
        CandidateState::new("dense", k, ThresholdRule::Schedule(params.dense_schedule(v, k, n)?)),
        CandidateState::new("fixed", k, ThresholdRule::Schedule(params.fixed_schedule(v, k, n)?)),
        CandidateState::new("high-low", k, ThresholdRule::Schedule(params.high_low_schedule(v, k, n)?)),
        CandidateState::new("small-k", k, ThresholdRule::SmallK { v }),
        CandidateState::new("sieve", k, ThresholdRule::Sieve { v }),
    ])
}

/// Runs the dense, fixed, high-low, small-k and sieve candidates side by
/// side in a single pass and keeps the best.
pub fn salsa(
    oracle: &MeteredOracle<'_>,
    stream: &StreamSource<'_>,
    k: usize,
    v: f64,
    params: &SalsaParams,
) -> Result<RunOutcome> {
    check_k(k)?;
    check_v(v)?;
    params.validate()?;
    single(oracle, stream, salsa_candidates(k, v, stream.len(), params)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::CoverageObjective;
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

    fn star() -> CoverageObjective {
        CoverageObjective::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap()
    }

    #[test]
    fn empty_stream_gives_empty_solution() {
        let f = star();
        let oracle = MeteredOracle::new(&f);
        let stream = StreamSource::new(&[]);
        let out = schedule_pass(&oracle, &stream, 2, ThresholdSchedule::flat(1.0, 0).unwrap()).unwrap();
        assert!(out.solution.is_empty());
        assert_eq!(out.value(), 0.0);
        assert!(sieve_pass(&oracle, &stream, 2, 3.0).unwrap().solution.is_empty());
        assert_eq!(oracle.stats().eval_count(), 0);
    }

    #[test]
    fn flat_threshold_on_star_takes_center() {
        let f = star();
        let oracle = MeteredOracle::new(&f);
        let items = ids(&[1, 2, 0, 3, 4, 5]);
        let stream = StreamSource::new(&items);
        let out = schedule_pass(&oracle, &stream, 1, ThresholdSchedule::flat(4.0, 6).unwrap()).unwrap();
        assert_eq!(out.solution.members(), &ids(&[0])[..]);
        assert_eq!(out.value(), 6.0);
    }

    #[test]
    fn two_piece_schedule_on_modular_gains() {
        let f = Modular(vec![3.0, 2.0]);
        let oracle = MeteredOracle::new(&f);
        let items = ids(&[0, 1]);
        let stream = StreamSource::new(&items);
        let schedule = ThresholdSchedule::new(vec![(0.5, 3.0), (1.0, 2.0)], 2).unwrap();
        let out = schedule_pass(&oracle, &stream, 2, schedule).unwrap();
        assert_eq!(out.value(), 5.0);
        assert_eq!(out.insertion_thresholds, vec![3.0, 2.0]);
    }

    #[test]
    fn schedule_length_mismatch() {
        let f = Modular(vec![1.0]);
        let oracle = MeteredOracle::new(&f);
        let items = ids(&[0]);
        let stream = StreamSource::new(&items);
        assert!(schedule_pass(&oracle, &stream, 1, ThresholdSchedule::flat(1.0, 5).unwrap()).is_err());
    }

    #[test]
    fn sieve_k1_takes_first_half_opt_element() {
        let f = Modular(vec![1.0, 3.0, 5.0, 6.0]);
        let oracle = MeteredOracle::new(&f);
        let items = ids(&[0, 1, 2, 3]);
        let stream = StreamSource::new(&items);
        let out = sieve_pass(&oracle, &stream, 1, 6.0).unwrap();
        assert_eq!(out.solution.members(), &ids(&[1])[..]);
    }

    #[test]
    fn small_k_k1_takes_only_opt_valued_element() {
        let f = Modular(vec![1.0, 3.0, 6.0, 5.0]);
        let oracle = MeteredOracle::new(&f);
        let items = ids(&[0, 1, 2, 3]);
        let stream = StreamSource::new(&items);
        let out = small_k_pass(&oracle, &stream, 1, 6.0).unwrap();
        assert_eq!(out.solution.members(), &ids(&[2])[..]);
        assert_eq!(out.value(), 6.0);
    }

    #[test]
    fn salsa_dominates_its_candidates() {
        let f = star();
        let oracle = MeteredOracle::new(&f);
        let items = ids(&[3, 1, 0, 2, 5, 4]);
        let stream = StreamSource::new(&items);
        let out = salsa(&oracle, &stream, 2, 6.0, &SalsaParams::default()).unwrap();
        assert_eq!(out.candidate_values.len(), 5);
        let best = out.candidate_values.iter().map(|c| c.1).fold(0.0, f64::max);
        assert_eq!(out.value(), best);
        assert!(out.peak_stored <= 5 * 2);
        assert_eq!(stream.reads(), 6);
        // At most one evaluation per candidate per element.
        assert!(oracle.stats().eval_count() <= 5 * 6);
        assert!(oracle.stats().largest_query() <= 2);
    }

    #[test]
    fn rejects_bad_estimates() {
        let f = Modular(vec![1.0]);
        let oracle = MeteredOracle::new(&f);
        let stream = StreamSource::new(&[]);
        assert!(sieve_pass(&oracle, &stream, 1, 0.0).is_err());
        assert!(small_k_pass(&oracle, &stream, 0, 1.0).is_err());
    }
}
