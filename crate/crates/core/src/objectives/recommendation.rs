use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SubmodularOracle};

/// Personalized recommendation utility
///
/// `f(S) = α · Σ_{m'} max(0, max_{m∈S} ⟨v_m', v_m⟩) + (1 − α) · Σ_{m∈S} max(0, ⟨w_u, v_m⟩)`
///
/// The first term is a facility-location score over the whole catalogue,
/// the second a per-user relevance score. Similarities are clamped at zero,
/// which keeps the function monotone when feature vectors disagree in sign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecommendationObjective {
    movies: Vec<Vec<f64>>,
    user: Vec<f64>,
    alpha: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RecommendationObjective {
    pub fn new(movies: Vec<Vec<f64>>, user: Vec<f64>, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Parameter(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        if movies.is_empty() {
            return Err(Error::Domain("recommendation objective needs at least one movie".into()));
        }
        let dim = user.len();
        for (row, v) in movies.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Domain(format!(
                    "movie {row} has dimension {}, user vector has {dim}",
                    v.len()
                )));
            }
        }
        if movies.iter().flatten().chain(&user).any(|x| !x.is_finite()) {
            return Err(Error::Data("non-finite feature value".into()));
        }
        Ok(Self { movies, user, alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn movie_count(&self) -> usize {
        self.movies.len()
    }
}

impl SubmodularOracle for RecommendationObjective {
    fn ground_size(&self) -> usize {
        self.movies.len()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        if set.is_empty() {
            return 0.0;
        }
        let coverage: f64 = self
            .movies
            .iter()
            .map(|other| {
                set.iter()
                    .map(|m| dot(other, &self.movies[m.index()]))
                    .fold(0.0, f64::max)
            })
            .sum();
        let mut chosen = set.to_vec();
        chosen.sort_unstable();
        let relevance: f64 = chosen
            .iter()
            .map(|m| dot(&self.user, &self.movies[m.index()]).max(0.0))
            .sum();
        self.alpha * coverage + (1.0 - self.alpha) * relevance
    }
}
