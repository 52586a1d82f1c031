//! Streams on which Sieve-Streaming stalls near half of OPT.
//!
//! The universe is two segments of length `OPT/2`: region A and the rest.
//! The `k` optimal elements split both segments evenly. For each threshold
//! `τ` the stream carries a family `X_τ` that a sieve with threshold `τ`
//! fills up with before any optimal element arrives:
//!
//! * `τ ≤ OPT/2k`: `k` disjoint blocks of A of length `τ`;
//! * `OPT/2k < τ ≤ OPT/k`: `t = ⌈OPT/2τ⌉` elements tiling A in contiguous
//!   blocks of `OPT/2t`, each topped up to value `τ` by a contiguous piece of
//!   the other segment;
//! * larger `τ`: nothing.
//!
//! Family `i` (thresholds in descending order, 1-based) is repeated
//! `⌈(k²|T|/δ)^i⌉` times so that with probability `1 − δ` a random order
//! shows each family before anything that could disturb it. Segments are cut
//! into atoms at every endpoint, which turns the picture into a weighted
//! cell cover.

use serde::{Deserialize, Serialize};

use super::bundle::{InstanceBundle, OptProvenance};
use crate::algos::guess_exponents;
use crate::error::{Error, Result};
use crate::objectives::CellCoverObjective;
use crate::oracle::ElementId;

/// Default cap on the generated stream length.
pub const DEFAULT_MAX_STREAM: u128 = 5_000_000;

const MAX_K: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct SieveHardSpec {
    pub k: usize,
    /// Strictly descending, positive.
    pub thresholds: Vec<f64>,
    pub delta: f64,
    pub opt_value: f64,
    pub max_stream_len: u128,
}

impl SieveHardSpec {
    pub fn new(k: usize, thresholds: Vec<f64>, delta: f64, opt_value: f64) -> Self {
        Self {
            k,
            thresholds,
            delta,
            opt_value,
            max_stream_len: DEFAULT_MAX_STREAM,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(1..=MAX_K).contains(&self.k) {
            return Err(Error::Parameter(format!("k must lie in 1..={MAX_K}, got {}", self.k)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Parameter(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.opt_value > 0.0 && self.opt_value.is_finite()) {
            return Err(Error::Parameter(format!("OPT must be positive, got {}", self.opt_value)));
        }
        if self.thresholds.is_empty() {
            return Err(Error::Parameter("need at least one threshold".into()));
        }
        if self.thresholds.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Error::Parameter("thresholds must be positive".into()));
        }
        if self.thresholds.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Parameter("thresholds must be strictly descending".into()));
        }
        Ok(())
    }

    /// Copies of each family, in threshold order.
    pub fn copies(&self) -> Result<Vec<u128>> {
        let base = (self.k * self.k * self.thresholds.len()) as f64 / self.delta;
        (1..=self.thresholds.len() as i32)
            .map(|i| {
                let c = base.powi(i).ceil();
                if c > self.max_stream_len as f64 {
                    Err(self.too_long(c as u128))
                } else {
                    Ok(c as u128)
                }
            })
            .collect()
    }

    fn too_long(&self, required: u128) -> Error {
        Error::Size {
            what: "sieve-hard stream length",
            required,
            cap: self.max_stream_len,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Band {
    Low,
    Mid,
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFamily {
    pub tau: f64,
    pub band: Band,
    pub elements: Vec<ElementId>,
    pub copies: u128,
}

/// Where everything ended up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveHardLayout {
    pub opt_elements: Vec<ElementId>,
    pub families: Vec<ThresholdFamily>,
    /// Cells of region A.
    pub region_a: Vec<u32>,
}

#[derive(Clone, Copy)]
enum Segment {
    A,
    Rest,
}

struct Piece {
    segment: Segment,
    lo: f64,
    hi: f64,
}

/// Sorted cut points of one segment, merged within a tolerance.
struct Cuts {
    points: Vec<f64>,
    tol: f64,
}

impl Cuts {
    fn new(mut raw: Vec<f64>, tol: f64) -> Self {
        raw.sort_by(f64::total_cmp);
        let mut points: Vec<f64> = Vec::with_capacity(raw.len());
        for x in raw {
            if points.last().is_none_or(|&p| x - p > tol) {
                points.push(x);
            }
        }
        Self { points, tol }
    }

    fn index(&self, x: f64) -> usize {
        let i = self.points.partition_point(|&p| p < x - self.tol);
        debug_assert!((self.points[i] - x).abs() <= self.tol);
        i
    }

    fn atoms(&self) -> usize {
        self.points.len() - 1
    }
}

/// Builds the instance and reports its layout. `known_opt` is the
/// constructed `opt_value`: every element lies inside the optimal cover.
pub fn gen_sieve_hard(spec: &SieveHardSpec) -> Result<(InstanceBundle, SieveHardLayout)> {
    spec.validate()?;
    let k = spec.k;
    let opt = spec.opt_value;
    let half = opt / 2.0;
    let slot = half / k as f64;
    let tol = opt * 1e-12;
    let copies = spec.copies()?;

    let mut elements: Vec<Vec<Piece>> = Vec::new();
    let opt_elements: Vec<ElementId> = (0..k)
        .map(|i| {
            let (lo, hi) = (i as f64 * slot, (i + 1) as f64 * slot);
            elements.push(vec![
                Piece { segment: Segment::A, lo, hi },
                Piece { segment: Segment::Rest, lo, hi },
            ]);
            ElementId::from(i)
        })
        .collect();

    let mut families = Vec::with_capacity(spec.thresholds.len());
    for (&tau, &count) in spec.thresholds.iter().zip(&copies) {
        let first = elements.len();
        let band = if tau <= slot + tol {
            for j in 0..k {
                let lo = j as f64 * tau;
                elements.push(vec![Piece { segment: Segment::A, lo, hi: lo + tau }]);
            }
            Band::Low
        } else if tau <= 2.0 * slot + tol {
            let t = ((half / tau) - 1e-9).ceil().max(1.0) as usize;
            let block = half / t as f64;
            let rest = (tau - block).max(0.0);
            for j in 0..t {
                let mut pieces = vec![Piece {
                    segment: Segment::A,
                    lo: j as f64 * block,
                    hi: (j + 1) as f64 * block,
                }];
                if rest > tol {
                    let lo = j as f64 * rest;
                    pieces.push(Piece { segment: Segment::Rest, lo, hi: lo + rest });
                }
                elements.push(pieces);
            }
            Band::Mid
        } else {
            Band::Empty
        };
        let members: Vec<ElementId> = (first..elements.len()).map(ElementId::from).collect();
        families.push(ThresholdFamily {
            tau,
            band,
            elements: members,
            copies: count,
        });
    }
    let total = families
        .iter()
        .fold(k as u128, |acc, f| acc.saturating_add(f.copies.saturating_mul(f.elements.len() as u128)));
    if total > spec.max_stream_len {
        return Err(spec.too_long(total));
    }

    let cuts = |segment: Segment| {
        let mut raw = vec![0.0, half];
        for p in elements.iter().flatten() {
            if matches!((p.segment, segment), (Segment::A, Segment::A) | (Segment::Rest, Segment::Rest)) {
                raw.push(p.lo);
                raw.push(p.hi);
            }
        }
        Cuts::new(raw, tol)
    };
    let a = cuts(Segment::A);
    let rest = cuts(Segment::Rest);
    let offset = a.atoms();
    let weights: Vec<f64> = a
        .points
        .windows(2)
        .chain(rest.points.windows(2))
        .map(|w| w[1] - w[0])
        .collect();
    let element_cells: Vec<Vec<u32>> = elements
        .iter()
        .map(|pieces| {
            pieces
                .iter()
                .flat_map(|p| {
                    let (cuts, base) = match p.segment {
                        Segment::A => (&a, 0),
                        Segment::Rest => (&rest, offset),
                    };
                    (cuts.index(p.lo)..cuts.index(p.hi)).map(move |c| (c + base) as u32)
                })
                .collect()
        })
        .collect();

    let mut order: Vec<ElementId> = opt_elements.clone();
    for family in &families {
        for _ in 0..family.copies {
            order.extend_from_slice(&family.elements);
        }
    }

    let f = CellCoverObjective::new(weights, element_cells)?;
    let thresholds: Vec<String> = spec.thresholds.iter().map(f64::to_string).collect();
    let bundle = InstanceBundle::new(f.into(), order, k)?
        .with_known_opt(opt, OptProvenance::Constructed)
        .with_meta("generator", "sieve-hard")
        .with_meta("delta", spec.delta)
        .with_meta("thresholds", thresholds.join(";"));
    let layout = SieveHardLayout {
        opt_elements,
        families,
        region_a: (0..offset as u32).collect(),
    };
    Ok((bundle, layout))
}

/// Thresholds `v/(2k)` of the sieve guesses alive once the largest singleton
/// `OPT/k` has been seen, descending.
pub fn sieve_guess_thresholds(k: usize, opt: f64, eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0 && eps.is_finite()) || k == 0 || opt.is_nan() || opt <= 0.0 {
        return Err(Error::Parameter("need k ≥ 1, OPT > 0 and eps > 0".into()));
    }
    let m = opt / k as f64;
    let Some((first, last)) = guess_exponents(m, 2.0 * k as f64 * m, eps) else {
        return Ok(Vec::new());
    };
    Ok((first..=last)
        .rev()
        .map(|j| (1.0 + eps).powi(j) / (2.0 * k as f64))
        .filter(|&tau| tau <= m)
        .collect())
}
