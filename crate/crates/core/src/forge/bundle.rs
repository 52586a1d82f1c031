use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::oracle::{ElementId, SubmodularOracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptProvenance {
    BruteForced,
    Constructed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownOpt {
    pub value: f64,
    pub provenance: OptProvenance,
}

/// An objective together with its canonical stream and capacity.
///
/// `canonical_order` may repeat ids: multiset streams list every copy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceBundle {
    pub objective: Objective,
    pub canonical_order: Vec<ElementId>,
    pub k: usize,
    #[serde(default)]
    pub known_opt: Option<KnownOpt>,
    /// Generator parameters, free-form.
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl InstanceBundle {
    pub fn new(objective: Objective, canonical_order: Vec<ElementId>, k: usize) -> Result<Self> {
        let ground_size = objective.ground_size();
        if let Some(bad) = canonical_order.iter().find(|e| e.index() >= ground_size) {
            return Err(Error::InvalidElement {
                id: bad.index(),
                ground_size,
            });
        }
        Ok(Self {
            objective,
            canonical_order,
            k,
            known_opt: None,
            metadata: BTreeMap::new(),
        })
    }

    /// Bundle whose stream is every element once, in id order.
    pub fn with_identity_order(objective: Objective, k: usize) -> Self {
        let order = (0..objective.ground_size()).map(ElementId::from).collect();
        Self::new(objective, order, k).expect("identity order is valid")
    }

    pub fn with_known_opt(mut self, value: f64, provenance: OptProvenance) -> Self {
        self.known_opt = Some(KnownOpt { value, provenance });
        self
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    /// Distinct elements of the stream, ascending.
    pub fn universe(&self) -> Vec<ElementId> {
        let mut u = self.canonical_order.clone();
        u.sort_unstable();
        u.dedup();
        u
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let bundle: InstanceBundle = serde_json::from_str(&text)?;
        // Re-run validation on the deserialized order.
        let InstanceBundle {
            objective,
            canonical_order,
            k,
            known_opt,
            metadata,
        } = bundle;
        let mut checked = Self::new(objective, canonical_order, k)?;
        checked.known_opt = known_opt;
        checked.metadata = metadata;
        Ok(checked)
    }
}

/// One stream position: an element and which copy of it this is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamItem {
    pub id: ElementId,
    pub copy: u32,
}

/// An arrival order for a bundle's stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamPlan {
    pub order: Vec<StreamItem>,
    /// `None` for the canonical order.
    pub seed: Option<u64>,
}

impl StreamPlan {
    /// The bundle's canonical order with copies numbered by occurrence.
    pub fn canonical(bundle: &InstanceBundle) -> Self {
        let mut seen: BTreeMap<ElementId, u32> = BTreeMap::new();
        let order = bundle
            .canonical_order
            .iter()
            .map(|&id| {
                let copy = seen.entry(id).or_insert(0);
                let item = StreamItem { id, copy: *copy };
                *copy += 1;
                item
            })
            .collect();
        Self { order, seed: None }
    }

    pub fn ids(&self) -> Vec<ElementId> {
        self.order.iter().map(|item| item.id).collect()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Uniformly random arrival order (seeded Fisher-Yates over the stream
/// positions, so copies of one element are distinct items).
pub fn shuffle(bundle: &InstanceBundle, seed: u64) -> StreamPlan {
    let mut plan = StreamPlan::canonical(bundle);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    plan.order.shuffle(&mut rng);
    plan.seed = Some(seed);
    plan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::CoverageObjective;
    use crate::oracle::ids;

    fn path_bundle() -> InstanceBundle {
        let f = CoverageObjective::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        InstanceBundle::new(f.into(), ids(&[0, 1, 1, 2, 3]), 2).unwrap()
    }

    #[test]
    fn canonical_plan_numbers_copies() {
        let plan = StreamPlan::canonical(&path_bundle());
        let copies: Vec<u32> = plan.order.iter().map(|i| i.copy).collect();
        assert_eq!(copies, vec![0, 0, 1, 0, 0]);
    }

    #[test]
    fn shuffle_is_seeded_permutation() {
        let bundle = path_bundle();
        let a = shuffle(&bundle, 42);
        assert_eq!(a, shuffle(&bundle, 42));
        let mut sorted = a.order.clone();
        sorted.sort_by_key(|i| (i.id, i.copy));
        let mut canonical = StreamPlan::canonical(&bundle).order;
        canonical.sort_by_key(|i| (i.id, i.copy));
        assert_eq!(sorted, canonical);
    }

    #[test]
    fn single_element_stream_is_identity() {
        let f = CoverageObjective::from_edges(1, &[]).unwrap();
        let bundle = InstanceBundle::with_identity_order(f.into(), 1);
        assert_eq!(shuffle(&bundle, 9).ids(), ids(&[0]));
    }

    #[test]
    fn invalid_order_rejected() {
        let f = CoverageObjective::from_edges(2, &[]).unwrap();
        assert!(InstanceBundle::new(f.into(), ids(&[0, 2]), 1).is_err());
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        let bundle = path_bundle()
            .with_known_opt(4.0, OptProvenance::BruteForced)
            .with_meta("generator", "test");
        bundle.save(&path).unwrap();
        assert_eq!(InstanceBundle::load(&path).unwrap(), bundle);
    }
}
