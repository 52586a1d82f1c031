use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Piecewise-constant threshold over stream positions.
///
/// Each breakpoint `(fraction, threshold)` covers the positions `i` (1-based)
/// with `previous_fraction · n < i ≤ fraction · n`. Fractions are strictly
/// increasing and the last one is 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSchedule {
    breakpoints: Vec<(f64, f64)>,
    n: usize,
}

impl ThresholdSchedule {
    pub fn new(breakpoints: Vec<(f64, f64)>, n: usize) -> Result<Self> {
        let Some(&(last, _)) = breakpoints.last() else {
            return Err(Error::Parameter("a schedule needs at least one breakpoint".into()));
        };
        if last != 1.0 {
            return Err(Error::Parameter(format!("last breakpoint must be 1.0, got {last}")));
        }
        let mut previous = 0.0;
        for &(fraction, threshold) in &breakpoints {
            if !(fraction > previous && fraction <= 1.0) {
                return Err(Error::Parameter(format!(
                    "breakpoint fractions must increase strictly within (0, 1], got {fraction} after {previous}"
                )));
            }
            if !(threshold >= 0.0 && threshold.is_finite()) {
                return Err(Error::Parameter(format!("threshold {threshold} is not a non-negative number")));
            }
            previous = fraction;
        }
        Ok(Self { breakpoints, n })
    }

    /// One threshold for the whole stream.
    pub fn flat(threshold: f64, n: usize) -> Result<Self> {
        Self::new(vec![(1.0, threshold)], n)
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Threshold for the 1-based stream position `i`. Positions past `n`
    /// use the final piece.
    pub fn threshold_at(&self, i: usize) -> f64 {
        let n = self.n as f64;
        self.breakpoints
            .iter()
            .find(|(fraction, _)| i as f64 <= fraction * n)
            .unwrap_or_else(|| self.breakpoints.last().expect("non-empty"))
            .1
    }
}

/// How the low phase of the dense procedure turns `C2` into a threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DenseLowRule {
    /// `v / (C2 · k)`, the pseudo-code reading.
    #[default]
    Reciprocal,
    /// `C2 · v / k`.
    Coefficient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Constants used for the reported experiments.
    Icml,
    /// Constants used in the approximation analysis.
    Analysis,
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Preset::Icml => "icml",
            Preset::Analysis => "analysis",
        })
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "icml" => Ok(Preset::Icml),
            "analysis" => Ok(Preset::Analysis),
            other => Err(Error::Parameter(format!("unknown preset `{other}` (expected icml|analysis)"))),
        }
    }
}

/// Constants of the three threshold procedures that make up the composer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SalsaParams {
    pub preset: Preset,
    /// Dense procedure: high threshold `C1 · v / k` on the first `beta_dense`
    /// fraction, then the low threshold given by `dense_low`.
    pub c1: f64,
    pub c2: f64,
    pub beta_dense: f64,
    pub dense_low: DenseLowRule,
    /// Fixed procedure: `(1/2 + eps_fixed) · v / k`.
    pub eps_fixed: f64,
    /// High-low procedure: `(1/2 + eps_hl) · v / k` on the first `beta_hl`
    /// fraction, then `(1/2 − delta_hl) · v / k`.
    pub beta_hl: f64,
    pub eps_hl: f64,
    pub delta_hl: f64,
}

impl Default for SalsaParams {
    fn default() -> Self {
        Self::preset(Preset::Icml)
    }
}

impl SalsaParams {
    pub fn preset(preset: Preset) -> Self {
        match preset {
            Preset::Icml => Self {
                preset,
                c1: 10.0,
                c2: 0.2,
                beta_dense: 0.8,
                dense_low: DenseLowRule::Reciprocal,
                eps_fixed: 1.0 / 6.0,
                beta_hl: 0.1,
                eps_hl: 0.05,
                delta_hl: 0.025,
            },
            // Thresholds (1 + 1e-8)/2 and (1 - 3e-11)/2 expressed in the
            // 1/2 ± eps form.
            Preset::Analysis => Self {
                preset,
                c1: 100.0,
                c2: 10.0,
                beta_dense: 0.9,
                dense_low: DenseLowRule::Reciprocal,
                eps_fixed: 0.5e-8,
                beta_hl: 1e-3,
                eps_hl: 0.5e-8,
                delta_hl: 1.5e-11,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("c1", self.c1),
            ("c2", self.c2),
            ("eps_fixed", self.eps_fixed),
            ("eps_hl", self.eps_hl),
            ("delta_hl", self.delta_hl),
        ];
        for (name, x) in positive {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::Parameter(format!("{name} must be positive, got {x}")));
            }
        }
        for (name, beta) in [("beta_dense", self.beta_dense), ("beta_hl", self.beta_hl)] {
            if !(beta > 0.0 && beta <= 1.0) {
                return Err(Error::Parameter(format!("{name} must lie in (0, 1], got {beta}")));
            }
        }
        if self.delta_hl >= 0.5 {
            return Err(Error::Parameter("delta_hl must be below 1/2".into()));
        }
        Ok(())
    }

    fn dense_low_coefficient(&self) -> f64 {
        match self.dense_low {
            DenseLowRule::Reciprocal => 1.0 / self.c2,
            DenseLowRule::Coefficient => self.c2,
        }
    }

    /// Smallest threshold coefficient `T` (threshold `T · v / k`) that any
    /// composer candidate starts from or switches to.
    pub fn min_threshold_coefficient(&self) -> f64 {
        [
            self.c1,
            self.dense_low_coefficient(),
            0.5 + self.eps_fixed,
            0.5 + self.eps_hl,
            0.5 - self.delta_hl,
            1.0, // small-k
            0.5, // sieve
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }

    pub fn dense_schedule(&self, v: f64, k: usize, n: usize) -> Result<ThresholdSchedule> {
        let kf = k as f64;
        let high = self.c1 * v / kf;
        let low = match self.dense_low {
            DenseLowRule::Reciprocal => v / (self.c2 * kf),
            DenseLowRule::Coefficient => self.c2 * v / kf,
        };
        two_piece(self.beta_dense, high, low, n)
    }

    pub fn fixed_schedule(&self, v: f64, k: usize, n: usize) -> Result<ThresholdSchedule> {
        make_fixed_schedule(v, k, n, self.eps_fixed)
    }

    pub fn high_low_schedule(&self, v: f64, k: usize, n: usize) -> Result<ThresholdSchedule> {
        make_highlow_schedule(v, k, n, self.beta_hl, self.eps_hl, self.delta_hl)
    }
}

fn two_piece(beta: f64, high: f64, low: f64, n: usize) -> Result<ThresholdSchedule> {
    if beta >= 1.0 {
        ThresholdSchedule::flat(high, n)
    } else {
        ThresholdSchedule::new(vec![(beta, high), (1.0, low)], n)
    }
}

fn check_estimate(v: f64, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Parameter(format!("OPT estimate must be positive, got {v}")));
    }
    Ok(())
}

/// Dense procedure: `C1 · v / k` for the first `beta` fraction of the
/// stream, `v / (C2 · k)` afterwards. `beta = 1` gives a single piece.
pub fn make_dense_schedule(v: f64, k: usize, n: usize, c1: f64, c2: f64, beta: f64) -> Result<ThresholdSchedule> {
    check_estimate(v, k)?;
    let kf = k as f64;
    two_piece(beta, c1 * v / kf, v / (c2 * kf), n)
}

/// Fixed procedure: `(1/2 + eps) · v / k` throughout.
pub fn make_fixed_schedule(v: f64, k: usize, n: usize, eps: f64) -> Result<ThresholdSchedule> {
    check_estimate(v, k)?;
    ThresholdSchedule::flat((0.5 + eps) * v / k as f64, n)
}

/// High-low procedure: `(1/2 + eps) · v / k` for the first `beta` fraction,
/// then `(1/2 − delta) · v / k`.
pub fn make_highlow_schedule(
    v: f64,
    k: usize,
    n: usize,
    beta: f64,
    eps: f64,
    delta: f64,
) -> Result<ThresholdSchedule> {
    check_estimate(v, k)?;
    let kf = k as f64;
    two_piece(beta, (0.5 + eps) * v / kf, (0.5 - delta) * v / kf, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::approx_eq;

    fn assert_breakpoints(s: &ThresholdSchedule, expected: &[(f64, f64)]) {
        assert_eq!(s.breakpoints().len(), expected.len());
        for (&(fa, ta), &(fb, tb)) in s.breakpoints().iter().zip(expected) {
            assert_eq!(fa, fb);
            assert!(approx_eq(ta, tb), "{ta} vs {tb}");
        }
    }

    #[test]
    fn dense_with_experiment_constants() {
        let s = make_dense_schedule(100.0, 10, 100, 10.0, 0.2, 0.8).unwrap();
        assert_breakpoints(&s, &[(0.8, 100.0), (1.0, 50.0)]);
        assert_eq!(s.threshold_at(80), 100.0);
        assert_eq!(s.threshold_at(81), 50.0);
    }

    #[test]
    fn dense_with_analysis_constants() {
        let s = make_dense_schedule(7.0, 7, 10, 100.0, 10.0, 0.9).unwrap();
        assert_breakpoints(&s, &[(0.9, 100.0), (1.0, 0.1)]);
    }

    #[test]
    fn dense_degenerate_beta() {
        let s = make_dense_schedule(10.0, 2, 10, 10.0, 0.2, 1.0).unwrap();
        assert_breakpoints(&s, &[(1.0, 50.0)]);
    }

    #[test]
    fn fixed_thresholds() {
        let s = make_fixed_schedule(18.0, 3, 5, 1.0 / 6.0).unwrap();
        assert!(approx_eq(s.threshold_at(1), 4.0));
        let s = make_fixed_schedule(18.0, 3, 5, 0.0).unwrap();
        assert_eq!(s.threshold_at(5), 3.0);
        let analysis = SalsaParams::preset(Preset::Analysis);
        let s = analysis.fixed_schedule(18.0, 3, 5).unwrap();
        assert!(approx_eq(s.threshold_at(1), (1.0 + 1e-8) / 2.0 * 6.0));
    }

    #[test]
    fn high_low_thresholds() {
        let s = make_highlow_schedule(20.0, 2, 100, 0.1, 0.05, 0.025).unwrap();
        assert_breakpoints(&s, &[(0.1, 5.5), (1.0, 4.75)]);
        let s = make_highlow_schedule(20.0, 2, 100, 0.1, 0.05, 0.0).unwrap();
        assert!(s.breakpoints().iter().all(|&(_, t)| t >= 5.0));
        let analysis = SalsaParams::preset(Preset::Analysis);
        let s = analysis.high_low_schedule(2.0, 1, 1000).unwrap();
        assert_breakpoints(&s, &[(1e-3, 1.0 + 1e-8), (1.0, 1.0 - 3e-11)]);
    }

    #[test]
    fn schedule_validation() {
        assert!(ThresholdSchedule::new(vec![], 1).is_err());
        assert!(ThresholdSchedule::new(vec![(0.5, 1.0)], 1).is_err());
        assert!(ThresholdSchedule::new(vec![(0.5, 1.0), (0.5, 1.0), (1.0, 1.0)], 1).is_err());
        assert!(ThresholdSchedule::new(vec![(1.0, -1.0)], 1).is_err());
        assert!(make_fixed_schedule(0.0, 3, 5, 0.1).is_err());
    }

    #[test]
    fn min_coefficients() {
        assert_eq!(SalsaParams::default().min_threshold_coefficient(), 0.475);
        assert!(approx_eq(SalsaParams::preset(Preset::Analysis).min_threshold_coefficient(), 0.1));
        assert!(SalsaParams::default().validate().is_ok());
    }
}
