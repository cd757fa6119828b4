//! Polynomial solvers for restricted color sizes.

mod oneplayer;
mod singleton;
mod twosat;

pub use oneplayer::{solve_oneplayer_size2, witness_strategy};
pub use singleton::solve_singleton;
pub use twosat::{Lit, TwoSatFormula, TwoSatResult};

use alloc::vec::Vec;

use crate::attractor::{attractor, AttractorResult};
use crate::model::Arena;

/// The preorder `v ⪯ w` iff `v` lies in Eve's attractor of `{w}`, over a sorted set
/// of vertices. In one-player arenas this is plain reachability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachMatrix {
    vertices: Vec<usize>,
    le: Vec<bool>,
}

impl ReachMatrix {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Position of a vertex in [`Self::vertices`].
    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v)
    }

    /// `vertices[i] ⪯ vertices[j]`.
    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i * self.vertices.len() + j]
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.le(i, j) || self.le(j, i)
    }

    pub fn is_total(&self) -> bool {
        let r = self.len();
        (0..r).all(|i| (0..r).all(|j| self.comparable(i, j)))
    }

    pub fn is_transitive(&self) -> bool {
        let r = self.len();
        (0..r).all(|i| (0..r).all(|j| !self.le(i, j) || (0..r).all(|l| !self.le(j, l) || self.le(i, l))))
    }

    /// Sorts positions so that each precedes the ones it can be driven to:
    /// by decreasing number of dominating elements, ties by vertex index.
    /// Returns `None` when the result is not a chain.
    pub fn chain(&self, positions: &[usize]) -> Option<Vec<usize>> {
        let mut order = positions.to_vec();
        let up = |i: usize| positions.iter().filter(|&&j| self.le(i, j)).count();
        order.sort_by_key(|&i| (core::cmp::Reverse(up(i)), self.vertices[i]));
        order.windows(2).all(|w| self.le(w[0], w[1])).then_some(order)
    }
}

/// Computes `⪯` over `relevant` with one attractor per vertex.
pub fn reach_matrix(arena: &Arena, relevant: &[usize]) -> ReachMatrix {
    let mut vertices = relevant.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    let attractors: Vec<AttractorResult> = vertices.iter().map(|&w| attractor(arena, |v| v == w)).collect();
    ReachMatrix::from_attractors(vertices, &attractors)
}

impl ReachMatrix {
    /// `attractors[j]` must be the attractor of `{vertices[j]}`.
    pub(crate) fn from_attractors(vertices: Vec<usize>, attractors: &[AttractorResult]) -> ReachMatrix {
        let r = vertices.len();
        let mut le = alloc::vec![false; r * r];
        for (j, attr) in attractors.iter().enumerate() {
            for (i, &v) in vertices.iter().enumerate() {
                le[i * r + j] = attr.contains(v);
            }
        }
        ReachMatrix { vertices, le }
    }
}
