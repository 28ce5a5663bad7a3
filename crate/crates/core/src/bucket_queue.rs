//! Degree-indexed bucket queue for min-degree greedy.
//!
//! Vertex keys only ever decrease by one at a time (a neighbor was deleted),
//! so the minimum pointer moves down on decrement and scans up on pop. Over a
//! whole greedy run the total pointer movement is bounded by `n + |E|`.

use rand::Rng as _;

use crate::graph::Vertex;
use crate::rng::Rng;

const ABSENT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Entry {
    key: u32,
    slot: u32,
}

#[derive(Debug, Clone)]
pub struct BucketQueue {
    buckets: Vec<Vec<Vertex>>,
    /// Key and bucket slot of each vertex, kept together so one cache line
    /// serves both. Key is `ABSENT` once removed.
    entry: Vec<Entry>,
    min: usize,
    len: usize,
}

impl BucketQueue {
    /// Queue holding every vertex `v` with key `keys[v]`.
    pub fn new(keys: impl ExactSizeIterator<Item = usize>) -> Self {
        let n = keys.len();
        let mut entry = Vec::with_capacity(n);
        let mut buckets: Vec<Vec<Vertex>> = Vec::new();
        for (v, k) in keys.enumerate() {
            if k >= buckets.len() {
                buckets.resize_with(k + 1, Vec::new);
            }
            entry.push(Entry {
                key: k as u32,
                slot: buckets[k].len() as u32,
            });
            buckets[k].push(v as Vertex);
        }
        BucketQueue {
            buckets,
            entry,
            min: 0,
            len: n,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.entry[v as usize].key != ABSENT
    }

    #[inline]
    pub fn key(&self, v: Vertex) -> Option<usize> {
        let k = self.entry[v as usize].key;
        (k != ABSENT).then_some(k as usize)
    }

    /// Swap-removes `v` from its bucket. No-op if absent.
    pub fn remove(&mut self, v: Vertex) {
        let k = self.entry[v as usize].key;
        if k == ABSENT {
            return;
        }
        self.detach(v, k as usize);
        self.entry[v as usize].key = ABSENT;
        self.len -= 1;
    }

    #[inline]
    fn detach(&mut self, v: Vertex, k: usize) {
        let s = self.entry[v as usize].slot as usize;
        let bucket = &mut self.buckets[k];
        bucket.swap_remove(s);
        if let Some(&moved) = bucket.get(s) {
            self.entry[moved as usize].slot = s as u32;
        }
    }

    /// Moves a live vertex one bucket down.
    pub fn decrement(&mut self, v: Vertex) {
        let k = self.entry[v as usize].key;
        debug_assert!(
            k != ABSENT && k > 0,
            "decrement of absent or zero-key vertex"
        );
        let k = k as usize;
        self.detach(v, k);
        let nk = k - 1;
        self.entry[v as usize] = Entry {
            key: nk as u32,
            slot: self.buckets[nk].len() as u32,
        };
        self.buckets[nk].push(v);
        if nk < self.min {
            self.min = nk;
        }
    }

    /// Current minimum key without removing anything.
    pub fn min_key(&mut self) -> Option<usize> {
        if self.len == 0 {
            return None;
        }
        while self.buckets[self.min].is_empty() {
            self.min += 1;
        }
        Some(self.min)
    }

    /// Removes and returns a uniformly random vertex of minimum key.
    pub fn pop_min_random(&mut self, rng: &mut Rng) -> Option<(Vertex, usize)> {
        let k = self.min_key()?;
        let bucket = &mut self.buckets[k];
        let s = rng.random_range(0..bucket.len());
        let v = bucket.swap_remove(s);
        if let Some(&moved) = bucket.get(s) {
            self.entry[moved as usize].slot = s as u32;
        }
        self.entry[v as usize].key = ABSENT;
        self.len -= 1;
        Some((v, k))
    }

    /// Checks internal consistency and that every live vertex sits at
    /// `expected(v)`. Intended for tests; cost is linear in the queue size.
    pub fn audit(&self, expected: impl Fn(Vertex) -> usize) -> Result<(), String> {
        let mut live = 0;
        for (k, bucket) in self.buckets.iter().enumerate() {
            if !bucket.is_empty() && k < self.min {
                return Err(format!(
                    "bucket {k} non-empty below min pointer {}",
                    self.min
                ));
            }
            for (s, &v) in bucket.iter().enumerate() {
                live += 1;
                let e = self.entry[v as usize];
                if e.key as usize != k {
                    return Err(format!("vertex {v} in bucket {k} but key {}", e.key));
                }
                if e.slot as usize != s {
                    return Err(format!("vertex {v} slot index stale"));
                }
                let want = expected(v);
                if want != k {
                    return Err(format!("vertex {v} in bucket {k}, residual degree {want}"));
                }
            }
        }
        if live != self.len {
            return Err(format!("len {} but {live} vertices in buckets", self.len));
        }
        Ok(())
    }
}
