use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SubmodularOracle};

/// Neighborhood coverage on an undirected graph: `f(S)` is the number of
/// vertices adjacent to some member of `S`. With `closed` set (the default)
/// members count as covering themselves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageObjective {
    adjacency: Vec<Vec<u32>>,
    #[serde(default = "closed_default")]
    closed: bool,
}

fn closed_default() -> bool {
    true
}

impl CoverageObjective {
    /// Builds the graph from an edge list. Self-loops are dropped and
    /// duplicate edges collapsed.
    pub fn from_edges(vertex_count: usize, edges: &[(u32, u32)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Domain("a coverage graph needs at least one vertex".into()));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            for w in [u, v] {
                if w as usize >= vertex_count {
                    return Err(Error::InvalidElement {
                        id: w as usize,
                        ground_size: vertex_count,
                    });
                }
            }
            if u != v {
                adjacency[u as usize].push(v);
                adjacency[v as usize].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self {
            adjacency,
            closed: true,
        })
    }

    /// Switches between closed (`N[v]`) and open (`N(v)`) neighborhoods.
    pub fn with_closed(mut self, closed: bool) -> Self {
        self.closed = closed;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: ElementId) -> &[u32] {
        &self.adjacency[v.index()]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

impl SubmodularOracle for CoverageObjective {
    fn ground_size(&self) -> usize {
        self.adjacency.len()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        let mut covered = vec![0u64; self.adjacency.len().div_ceil(64)];
        let mut count = 0u64;
        let mut mark = |w: usize| {
            let (word, bit) = (w / 64, 1u64 << (w % 64));
            if covered[word] & bit == 0 {
                covered[word] |= bit;
                count += 1;
            }
        };
        for &v in set {
            if self.closed {
                mark(v.index());
            }
            for &w in &self.adjacency[v.index()] {
                mark(w as usize);
            }
        }
        count as f64
    }
}
