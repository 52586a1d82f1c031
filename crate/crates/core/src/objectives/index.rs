use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SubmodularOracle};

/// The set function of the INDEX communication reduction, restricted to the
/// elements that actually appear on the stream.
///
/// Alice holds `x ∈ {0,1}^m` and streams `k` elements per bit (`u_j^l` when
/// `x_j = 1`, `ū_j^l` otherwise); Bob then streams the single element `w_i`.
/// With `U_i = {u_i^l}` and `V_i` every other Alice element,
///
/// `f(S) = |U_i ∩ S| + (k if w_i ∈ S else min(k, |V_i ∩ S|))`.
///
/// Element `j·k + l` is the `l`-th element of bit `j` (both 0-based) and
/// element `k·m` is `w_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexObjective {
    k: usize,
    bits: Vec<bool>,
    /// 1-based position of Bob's index.
    target: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexClass {
    /// `u_i^l`: in `U_i`.
    Target,
    /// Any other Alice element: in `V_i`.
    Other,
    /// Bob's `w_i`.
    Bob,
}

impl IndexObjective {
    /// `target` is 1-based, `1 ≤ target ≤ bits.len()`.
    pub fn new(k: usize, bits: Vec<bool>, target: usize) -> Result<Self> {
        if k <= 2 {
            return Err(Error::Parameter(format!("INDEX instances need k > 2, got {k}")));
        }
        if !(1..=bits.len()).contains(&target) {
            return Err(Error::Parameter(format!(
                "index {target} outside 1..={}",
                bits.len()
            )));
        }
        Ok(Self { k, bits, target })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Number of elements Alice streams (`k·m`).
    pub fn alice_len(&self) -> usize {
        self.k * self.bits.len()
    }

    pub fn bob_element(&self) -> ElementId {
        ElementId::from(self.alice_len())
    }

    pub fn class(&self, e: ElementId) -> IndexClass {
        let i = e.index();
        if i == self.alice_len() {
            IndexClass::Bob
        } else if i / self.k == self.target - 1 && self.bits[self.target - 1] {
            IndexClass::Target
        } else {
            IndexClass::Other
        }
    }

    /// Optimum of the instance: `2k − 1` when `x_i = 1`, else `k`.
    pub fn closed_form_opt(&self) -> f64 {
        if self.bits[self.target - 1] {
            (2 * self.k - 1) as f64
        } else {
            self.k as f64
        }
    }
}

impl SubmodularOracle for IndexObjective {
    fn ground_size(&self) -> usize {
        self.alice_len() + 1
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        let (mut target, mut other, mut bob) = (0usize, 0usize, false);
        for &e in set {
            match self.class(e) {
                IndexClass::Target => target += 1,
                IndexClass::Other => other += 1,
                IndexClass::Bob => bob = true,
            }
        }
        let rest = if bob { self.k } else { other.min(self.k) };
        (target + rest) as f64
    }
}
