//! Random greedy (GA) and min-degree greedy (DGA).
//!
//! Both grow an independent set by repeatedly picking a vertex of the
//! residual graph, adding it, and deleting it together with its neighbors
//! until the residual graph is empty. GA picks uniformly at random; DGA picks
//! a vertex of minimum residual degree, breaking ties uniformly at random.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::bucket_queue::BucketQueue;
use crate::graph::{Graph, Vertex};
use crate::independent_set::IndependentSet;
use crate::rng::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pick {
    pub step: usize,
    pub vertex: Vertex,
    pub residual_degree: usize,
}

/// Pick order of one greedy run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GreedyTrace {
    pub picks: Vec<Pick>,
}

impl GreedyTrace {
    /// Number of steps until the residual graph became empty.
    pub fn t_star(&self) -> usize {
        self.picks.len()
    }
}

pub fn greedy_random(g: &Graph, seed: u64) -> IndependentSet {
    run_random(g, seed, None)
}

pub fn greedy_random_traced(g: &Graph, seed: u64) -> (IndependentSet, GreedyTrace) {
    let mut trace = GreedyTrace::default();
    let set = run_random(g, seed, Some(&mut trace));
    (set, trace)
}

// A uniform random permutation scanned once, skipping blocked vertices, has
// the same law as repeated uniform picks from the residual graph.
fn run_random(g: &Graph, seed: u64, mut trace: Option<&mut GreedyTrace>) -> IndependentSet {
    let mut rng = seeded_rng(seed);
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.shuffle(&mut rng);

    let mut blocked = vec![false; g.n()];
    let mut members = Vec::new();
    for v in order {
        if blocked[v as usize] {
            continue;
        }
        if let Some(t) = trace.as_deref_mut() {
            let residual_degree = g
                .neighbors(v)
                .iter()
                .filter(|&&w| !blocked[w as usize])
                .count();
            t.picks.push(Pick {
                step: t.picks.len(),
                vertex: v,
                residual_degree,
            });
        }
        blocked[v as usize] = true;
        for &w in g.neighbors(v) {
            blocked[w as usize] = true;
        }
        members.push(v);
    }
    IndependentSet::from_members(members)
}

pub fn greedy_min_degree(g: &Graph, seed: u64) -> IndependentSet {
    run_min_degree(g, seed, None, false)
}

/// DGA with its pick order. With `audit`, the bucket queue is checked
/// against residual degrees recomputed from scratch after every step
/// (quadratic; small graphs only) and any incoherence panics.
pub fn greedy_min_degree_traced(
    g: &Graph,
    seed: u64,
    audit: bool,
) -> (IndependentSet, GreedyTrace) {
    let mut trace = GreedyTrace::default();
    let set = run_min_degree(g, seed, Some(&mut trace), audit);
    (set, trace)
}

fn run_min_degree(
    g: &Graph,
    seed: u64,
    mut trace: Option<&mut GreedyTrace>,
    audit: bool,
) -> IndependentSet {
    let mut rng = seeded_rng(seed);
    let mut queue = BucketQueue::new(g.degrees());
    let mut chosen = vec![false; g.n()];
    let mut deleted = Vec::new();
    let mut second = Vec::new();

    while let Some((v, residual_degree)) = queue.pop_min_random(&mut rng) {
        if let Some(t) = trace.as_deref_mut() {
            t.picks.push(Pick {
                step: t.picks.len(),
                vertex: v,
                residual_degree,
            });
        }
        chosen[v as usize] = true;

        // Gather before mutating the queue: the reads are independent, so on
        // large graphs their cache misses overlap.
        deleted.clear();
        deleted.extend(
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&w| queue.contains(w)),
        );
        for &w in &deleted {
            queue.remove(w);
        }
        second.clear();
        for &w in &deleted {
            second.extend_from_slice(g.neighbors(w));
        }
        second.retain(|&x| queue.contains(x));
        for &x in &second {
            queue.decrement(x);
        }

        if audit {
            let q = &queue;
            q.audit(|x| g.neighbors(x).iter().filter(|&&y| q.contains(y)).count())
                .unwrap_or_else(|e| panic!("bucket queue audit failed: {e}"));
        }
    }
    IndependentSet::from_flags(&chosen)
}
