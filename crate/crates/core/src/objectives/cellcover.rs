use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SubmodularOracle};

/// Weighted coverage over a finite set of cells: each element covers a
/// fixed list of cells and `f(S)` is the total weight of the cells covered
/// by at least one member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellCoverObjective {
    cell_weights: Vec<f64>,
    element_cells: Vec<Vec<u32>>,
}

impl CellCoverObjective {
    pub fn new(cell_weights: Vec<f64>, mut element_cells: Vec<Vec<u32>>) -> Result<Self> {
        if element_cells.is_empty() {
            return Err(Error::Domain("cell cover needs at least one element".into()));
        }
        if let Some(w) = cell_weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Data(format!("cell weight {w} is not a non-negative number")));
        }
        for cells in &mut element_cells {
            cells.sort_unstable();
            cells.dedup();
            if let Some(&c) = cells.last() {
                if c as usize >= cell_weights.len() {
                    return Err(Error::Domain(format!(
                        "cell {c} out of range for {} cells",
                        cell_weights.len()
                    )));
                }
            }
        }
        Ok(Self {
            cell_weights,
            element_cells,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.cell_weights.len()
    }

    pub fn cells(&self, e: ElementId) -> &[u32] {
        &self.element_cells[e.index()]
    }
}

impl SubmodularOracle for CellCoverObjective {
    fn ground_size(&self) -> usize {
        self.element_cells.len()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        let mut covered = vec![false; self.cell_weights.len()];
        for e in set {
            for &c in &self.element_cells[e.index()] {
                covered[c as usize] = true;
            }
        }
        // Sum in cell order so the result does not depend on the order of `set`.
        covered
            .iter()
            .zip(&self.cell_weights)
            .filter(|(c, _)| **c)
            .map(|(_, w)| w)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ids;

    #[test]
    fn disjoint_cells_add() {
        let f = CellCoverObjective::new(vec![1.0, 2.0], vec![vec![0], vec![1]]).unwrap();
        assert_eq!(f.value(&ids(&[0, 1])), 3.0);
    }

    #[test]
    fn overlap_counts_once() {
        let f = CellCoverObjective::new(vec![1.0, 2.0, 4.0], vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(f.value(&ids(&[0])), 3.0);
        assert_eq!(f.value(&ids(&[0, 1])), 7.0);
    }

    #[test]
    fn invalid_cells_rejected() {
        assert!(CellCoverObjective::new(vec![1.0], vec![vec![3]]).is_err());
        assert!(CellCoverObjective::new(vec![-1.0], vec![vec![0]]).is_err());
    }
}
