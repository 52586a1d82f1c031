//! The objectives used by the experiments and the adversarial generators.
//!
//! [`Objective`] is the closed, serializable union of all of them; it is what
//! instance documents store.

mod cellcover;
mod coverage;
mod exemplar;
mod index;
mod recommendation;

use serde::{Deserialize, Serialize};

pub use cellcover::CellCoverObjective;
pub use coverage::CoverageObjective;
pub use exemplar::ExemplarObjective;
pub use index::{IndexClass, IndexObjective};
pub use recommendation::RecommendationObjective;

use crate::oracle::{ElementId, SubmodularOracle};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "payload", rename_all = "kebab-case")]
pub enum Objective {
    Coverage(CoverageObjective),
    Exemplar(ExemplarObjective),
    Recommendation(RecommendationObjective),
    CellCover(CellCoverObjective),
    Index(IndexObjective),
}

impl Objective {
    pub fn kind(&self) -> &'static str {
        match self {
            Objective::Coverage(_) => "coverage",
            Objective::Exemplar(_) => "exemplar",
            Objective::Recommendation(_) => "recommendation",
            Objective::CellCover(_) => "cell-cover",
            Objective::Index(_) => "index",
        }
    }

    fn inner(&self) -> &dyn SubmodularOracle {
        match self {
            Objective::Coverage(f) => f,
            Objective::Exemplar(f) => f,
            Objective::Recommendation(f) => f,
            Objective::CellCover(f) => f,
            Objective::Index(f) => f,
        }
    }
}

impl SubmodularOracle for Objective {
    fn ground_size(&self) -> usize {
        self.inner().ground_size()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        self.inner().value(set)
    }
}

impl From<CoverageObjective> for Objective {
    fn from(f: CoverageObjective) -> Self {
        Objective::Coverage(f)
    }
}

impl From<ExemplarObjective> for Objective {
    fn from(f: ExemplarObjective) -> Self {
        Objective::Exemplar(f)
    }
}

impl From<RecommendationObjective> for Objective {
    fn from(f: RecommendationObjective) -> Self {
        Objective::Recommendation(f)
    }
}

impl From<CellCoverObjective> for Objective {
    fn from(f: CellCoverObjective) -> Self {
        Objective::CellCover(f)
    }
}

impl From<IndexObjective> for Objective {
    fn from(f: IndexObjective) -> Self {
        Objective::Index(f)
    }
}
