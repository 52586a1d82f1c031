use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SubmodularOracle};

/// Exemplar-based clustering utility `f(S) = L({e0}) − L(S ∪ {e0})` where
/// `L(S)` is the mean over all points of the squared distance to the closest
/// exemplar in `S`, and `e0` is the origin. `e0` is never a ground-set
/// element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExemplarObjective {
    points: Vec<Vec<f64>>,
    centered: bool,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl ExemplarObjective {
    /// Validates the matrix and, when `center` is set, subtracts the column
    /// means.
    pub fn new(mut points: Vec<Vec<f64>>, center: bool) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Domain("exemplar objective needs at least one point".into()));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::Domain("points must have at least one coordinate".into()));
        }
        for (row, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Domain(format!(
                    "point {row} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Data(format!("point {row} has a non-finite coordinate")));
            }
        }
        if center {
            let n = points.len() as f64;
            let mean: Vec<f64> = (0..dim)
                .map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n)
                .collect();
            for p in &mut points {
                for (x, m) in p.iter_mut().zip(&mean) {
                    *x -= m;
                }
            }
        }
        Ok(Self {
            points,
            centered: center,
        })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    /// `L(S ∪ {e0})`.
    pub fn loss(&self, set: &[ElementId]) -> f64 {
        let total: f64 = self
            .points
            .iter()
            .map(|p| {
                let origin: f64 = p.iter().map(|x| x * x).sum();
                set.iter()
                    .map(|e| squared_distance(p, &self.points[e.index()]))
                    .fold(origin, f64::min)
            })
            .sum();
        total / self.points.len() as f64
    }
}

impl SubmodularOracle for ExemplarObjective {
    fn ground_size(&self) -> usize {
        self.points.len()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        if set.is_empty() {
            return 0.0;
        }
        let n = self.points.len() as f64;
        // Summing per-point improvements keeps f(∅) = 0 exact and the sum
        // independent of the order of `set`.
        let total: f64 = self
            .points
            .iter()
            .map(|p| {
                let origin: f64 = p.iter().map(|x| x * x).sum();
                let best = set
                    .iter()
                    .map(|e| squared_distance(p, &self.points[e.index()]))
                    .fold(origin, f64::min);
                origin - best
            })
            .sum();
        total / n
    }
}
