//! The view of a game graph that the attractor works on.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::Player;

/// A finite two-player graph with dense vertex indices.
pub trait GameGraph {
    fn vertex_count(&self) -> usize;
    fn owner(&self, v: usize) -> Player;
    fn successors(&self, v: usize) -> &[u32];
    fn predecessors(&self, v: usize) -> &[u32];
}

/// Compressed adjacency lists in both directions.
#[derive(Debug, Clone, Default)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    pred_offsets: Vec<usize>,
    pred_sources: Vec<u32>,
}

impl Csr {
    /// `offsets` has one entry per vertex plus one; `targets[offsets[v]..offsets[v + 1]]`
    /// are the successors of `v`.
    pub fn from_forward(offsets: Vec<usize>, targets: Vec<u32>) -> Csr {
        let n = offsets.len() - 1;
        let mut pred_offsets = vec![0usize; n + 1];
        for &t in &targets {
            pred_offsets[t as usize + 1] += 1;
        }
        for v in 0..n {
            pred_offsets[v + 1] += pred_offsets[v];
        }
        let mut fill = pred_offsets.clone();
        let mut pred_sources = vec![0u32; targets.len()];
        for u in 0..n {
            for &t in &targets[offsets[u]..offsets[u + 1]] {
                pred_sources[fill[t as usize]] = u as u32;
                fill[t as usize] += 1;
            }
        }
        Csr {
            offsets,
            targets,
            pred_offsets,
            pred_sources,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn successors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn predecessors(&self, v: usize) -> &[u32] {
        &self.pred_sources[self.pred_offsets[v]..self.pred_offsets[v + 1]]
    }
}
