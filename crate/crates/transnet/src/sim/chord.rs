//! Minimal Chord baseline for the comparison experiments.
//!
//! 64-bit identifier ring, one finger per bit, standard
//! closest-preceding-finger routing, no stabilization: the network is built
//! statically, matching the quiescent conditions under which the overlay is
//! measured.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Metrics;

const BITS: usize = 64;

/// A static Chord ring.
pub struct ChordNetwork {
    /// Sorted node identifiers.
    ids: Vec<u64>,
    /// `fingers[v][i]` = successor of `ids[v] + 2^i`, as an index into `ids`.
    fingers: Vec<Vec<u32>>,
}

/// `x in (a, b]` on the 64-bit ring.
fn in_half_open(x: u64, a: u64, b: u64) -> bool {
    if a < b {
        x > a && x <= b
    } else if a > b {
        x > a || x <= b
    } else {
        true
    }
}

/// `x in (a, b)` on the 64-bit ring.
fn in_open(x: u64, a: u64, b: u64) -> bool {
    if a < b {
        x > a && x < b
    } else if a > b {
        x > a || x < b
    } else {
        x != a
    }
}

impl ChordNetwork {
    /// Builds a ring of `m` distinct random identifiers with full finger
    /// tables. Deterministic in `seed`.
    pub fn build(m: usize, seed: u64) -> Self {
        assert!(m >= 1, "need at least one node");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ids: Vec<u64> = Vec::with_capacity(m);
        let mut seen = std::collections::HashSet::with_capacity(m);
        while ids.len() < m {
            let id = rng.random::<u64>();
            if seen.insert(id) {
                ids.push(id);
            }
        }
        ids.sort_unstable();

        let successor_index = |key: u64| -> u32 {
            match ids.binary_search(&key) {
                Ok(i) => i as u32,
                Err(i) => {
                    if i == ids.len() {
                        0
                    } else {
                        i as u32
                    }
                }
            }
        };

        let fingers = ids
            .iter()
            .map(|&id| {
                (0..BITS)
                    .map(|i| successor_index(id.wrapping_add(1u64 << i)))
                    .collect()
            })
            .collect();

        Self { ids, fingers }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    fn successor_of_node(&self, v: usize) -> usize {
        (v + 1) % self.ids.len()
    }

    fn predecessor_of_node(&self, v: usize) -> usize {
        (v + self.ids.len() - 1) % self.ids.len()
    }

    /// Forwarding steps to resolve `key` from node index `start`: the count
    /// of closest-preceding-finger moves until a node knows the responsible
    /// successor directly (the classic path-length convention, about
    /// `log2(m)/2` on average).
    pub fn lookup_hops(&self, start: usize, key: u64) -> u32 {
        let m = self.ids.len();
        if m == 1 {
            return 0;
        }
        let mut cur = start;
        let mut hops = 0u32;
        loop {
            let pred = self.predecessor_of_node(cur);
            if in_half_open(key, self.ids[pred], self.ids[cur]) {
                return hops;
            }
            let succ = self.successor_of_node(cur);
            if in_half_open(key, self.ids[cur], self.ids[succ]) {
                return hops;
            }
            let mut next = cur;
            for i in (0..BITS).rev() {
                let f = self.fingers[cur][i] as usize;
                if f != cur && in_open(self.ids[f], self.ids[cur], key) {
                    next = f;
                    break;
                }
            }
            if next == cur {
                next = succ;
            }
            cur = next;
            hops += 1;
            debug_assert!(hops as usize <= m, "chord walk failed to terminate");
        }
    }
}

/// Mean hop count over `lookups` random (initiator, key) pairs on a fresh
/// `m`-node ring. Deterministic in `seed`.
pub fn chord_baseline(m: usize, seed: u64, lookups: usize) -> Metrics {
    assert!(m >= 1 && lookups >= 1);
    let net = ChordNetwork::build(m, super::derive_seed(seed, 0xC0));
    let mut rng = ChaCha8Rng::seed_from_u64(super::derive_seed(seed, 0xC1));
    let mut hops: Vec<u32> = (0..lookups)
        .map(|_| {
            let start = rng.random_range(0..net.len());
            let key = rng.random::<u64>();
            net.lookup_hops(start, key)
        })
        .collect();
    let mut metrics = Metrics::from_hop_samples(&mut hops);
    metrics.success_rate = Some(1.0);
    metrics
}
