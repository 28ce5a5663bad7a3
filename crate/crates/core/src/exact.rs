//! Exact maximum independent set by branch and bound, for small graphs.

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::independent_set::IndependentSet;

pub const EXACT_MAX_N: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("TooLarge: exact solver supports n <= {EXACT_MAX_N}, got n = {0}")]
    TooLarge(usize),
}

/// Branches on a vertex of highest residual degree, exclude branch first.
/// A node is pruned when its set size plus the number of undecided vertices
/// cannot beat the incumbent.
pub fn exact_mis(g: &Graph) -> Result<IndependentSet, ExactError> {
    let n = g.n();
    if n > EXACT_MAX_N {
        return Err(ExactError::TooLarge(n));
    }
    let adj: Vec<u64> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let all = (1u64 << n) - 1;
    let mut best = Best { set: 0, size: 0 };
    branch(&adj, all, 0, 0, &mut best);
    let members = (0..n as Vertex)
        .filter(|&v| best.set >> v & 1 == 1)
        .collect();
    Ok(IndependentSet::from_members(members))
}

struct Best {
    set: u64,
    size: u32,
}

fn branch(adj: &[u64], undecided: u64, chosen: u64, size: u32, best: &mut Best) {
    if size + undecided.count_ones() <= best.size {
        return;
    }
    let mut pivot = None;
    let mut pivot_degree = 0;
    let mut rest = undecided;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let deg = (adj[v] & undecided).count_ones();
        if pivot.is_none() || deg > pivot_degree {
            pivot = Some(v);
            pivot_degree = deg;
        }
    }
    let Some(v) = pivot else {
        best.set = chosen;
        best.size = size;
        return;
    };
    if pivot_degree == 0 {
        // Remaining vertices are pairwise non-adjacent.
        best.set = chosen | undecided;
        best.size = size + undecided.count_ones();
        return;
    }
    let bit = 1u64 << v;
    branch(adj, undecided & !bit, chosen, size, best);
    branch(
        adj,
        undecided & !bit & !adj[v],
        chosen | bit,
        size + 1,
        best,
    );
}
