//! Structural checks of the full transposition graph at small arities.
//!
//! The graph on all `n!` identifiers with one edge per transposition is
//! materialized explicitly; diameter comes from all-pairs breadth-first
//! search and vertex connectivity from unit-capacity max-flow over the
//! node-split graph. Pair sampling for the connectivity check is sound
//! because the graph is vertex-transitive.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::perm::{factorial, generator_set};
use crate::{Key, PermutationId};

/// Arity cap for the all-pairs diameter computation.
const DIAMETER_MAX_ARITY: u8 = 5;
/// Arity cap for the max-flow connectivity computation.
const CONNECTIVITY_MAX_ARITY: u8 = 4;
/// Node pairs sampled for connectivity above the exhaustive sizes.
const CONNECTIVITY_SAMPLE_PAIRS: usize = 50;

/// Measured properties of the complete transposition graph. Fields that are
/// infeasible at the requested arity are `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FtnGraphProps {
    pub node_count: Key,
    /// Uniform vertex degree, `n(n-1)/2`.
    pub degree: usize,
    pub diameter: Option<u32>,
    pub vertex_connectivity: Option<usize>,
}

/// Adjacency of the complete graph: node index = lexicographic rank - 1.
fn build_adjacency(n: u8) -> Vec<Vec<u32>> {
    let total = factorial(n) as usize;
    let gens = generator_set(n);
    let mut adj = Vec::with_capacity(total);
    for rank in 1..=total {
        let p = PermutationId::from_lex_rank(rank as Key, n).unwrap();
        let neighbours: Vec<u32> = gens
            .iter()
            .map(|&g| (p.transposed(g).lex_rank() - 1) as u32)
            .collect();
        adj.push(neighbours);
    }
    adj
}

fn eccentricity(adj: &[Vec<u32>], start: usize) -> u32 {
    let mut dist = vec![u32::MAX; adj.len()];
    let mut queue = VecDeque::new();
    dist[start] = 0;
    queue.push_back(start);
    let mut ecc = 0;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            let w = w as usize;
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                ecc = ecc.max(dist[w]);
                queue.push_back(w);
            }
        }
    }
    debug_assert!(dist.iter().all(|&d| d != u32::MAX), "graph is connected");
    ecc
}

/// Maximum number of internally vertex-disjoint paths between `s` and `t`:
/// unit-capacity max-flow on the split graph (each vertex becomes an
/// in/out pair joined by a capacity-1 arc).
fn vertex_disjoint_paths(adj: &[Vec<u32>], s: usize, t: usize) -> usize {
    let n = adj.len();
    let size = 2 * n; // 2v = in, 2v+1 = out
    let inf = i32::MAX / 2;
    let mut cap = vec![std::collections::HashMap::new(); size];
    let add_edge =
        |cap: &mut Vec<std::collections::HashMap<usize, i32>>, a: usize, b: usize, c: i32| {
            *cap[a].entry(b).or_insert(0) += c;
            cap[b].entry(a).or_insert(0);
        };
    for (v, neighbours) in adj.iter().enumerate() {
        let c = if v == s || v == t { inf } else { 1 };
        add_edge(&mut cap, 2 * v, 2 * v + 1, c);
        for &w in neighbours {
            add_edge(&mut cap, 2 * v + 1, 2 * (w as usize), inf);
        }
    }

    let (source, sink) = (2 * s + 1, 2 * t);
    let mut flow = 0usize;
    loop {
        // BFS augmenting path on residual capacities.
        let mut parent = vec![usize::MAX; size];
        parent[source] = source;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            if v == sink {
                break;
            }
            for (&w, &c) in &cap[v] {
                if c > 0 && parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if parent[sink] == usize::MAX {
            return flow;
        }
        // Unit capacities on the split arcs: each augmentation adds 1.
        let mut v = sink;
        while v != source {
            let u = parent[v];
            *cap[u].get_mut(&v).unwrap() -= 1;
            *cap[v].get_mut(&u).unwrap() += 1;
            v = u;
        }
        flow += 1;
    }
}

/// Builds the complete transposition graph and measures it. Diameter and
/// connectivity are skipped above their feasible arities.
pub fn ftn_graph_props(n: u8, seed: u64) -> FtnGraphProps {
    let node_count = factorial(n);
    let degree = n as usize * (n as usize - 1) / 2;
    if n > DIAMETER_MAX_ARITY {
        return FtnGraphProps {
            node_count,
            degree,
            diameter: None,
            vertex_connectivity: None,
        };
    }

    let adj = build_adjacency(n);
    debug_assert!(adj.iter().all(|nb| nb.len() == degree));

    let diameter = (0..adj.len()).map(|v| eccentricity(&adj, v)).max().unwrap();

    let vertex_connectivity = if n <= CONNECTIVITY_MAX_ARITY {
        let total = adj.len();
        let adjacent = |a: usize, b: usize| adj[a].contains(&(b as u32));
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        if n == 3 {
            // Exhaustive over all non-adjacent pairs.
            for a in 0..total {
                for b in a + 1..total {
                    if !adjacent(a, b) {
                        pairs.push((a, b));
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while pairs.len() < CONNECTIVITY_SAMPLE_PAIRS {
                let a = rng.random_range(0..total);
                let b = rng.random_range(0..total);
                if a != b && !adjacent(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Some(
            pairs
                .into_iter()
                .map(|(a, b)| vertex_disjoint_paths(&adj, a, b))
                .min()
                .unwrap(),
        )
    } else {
        None
    };

    FtnGraphProps {
        node_count,
        degree,
        diameter: Some(diameter),
        vertex_connectivity,
    }
}
