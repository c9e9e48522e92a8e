//! Lookup algorithms over a quiescent network.
//!
//! The greedy lookup steers by ring distance: at every node it evaluates all
//! transposition links plus the ring neighbours against the key of the
//! full-network owner, and moves to the candidate whose managed interval is
//! closest clockwise. A serial-move detector breaks the rare pathology where
//! greedy degrades to a successor-by-successor crawl by forcing a hop along
//! a link that extends the symbol-prefix match with the owner.
//!
//! The digit-correcting heuristic instead follows, at each node, the link
//! that fixes the leftmost differing symbol. It can fail on sparse networks
//! and restarts from a random table entry, up to a bounded number of
//! attempts.
//!
//! Lookups are read-only; they may run concurrently with each other but
//! never with membership mutations.

use rand::Rng;

use crate::keyspace::DataPoint;
use crate::overlay::{KeyInterval, Network, NodeState, RoutingEntry, StoredPoint};
use crate::{Error, Key, PermutationId, Result, Transposition};

/// Outcome of a lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LookupResult {
    /// Key of the node whose interval holds the queried key, or `None` when
    /// a heuristic search exhausted its attempts.
    pub found: Option<Key>,
    /// Overlay edges traversed (successful attempt only, for the heuristic).
    pub hops: u32,
    /// Node keys visited, starting at the initiator. On a heuristic failure
    /// only the initiator remains.
    pub path: Vec<Key>,
    /// Attempts used (always 1 for greedy).
    pub attempts: u32,
    /// Forced serial-move jumps taken (always 0 for the heuristic).
    pub jumps: u32,
}

impl LookupResult {
    fn invariants_hold(&self) -> bool {
        self.hops as usize == self.path.len() - 1
    }
}

/// Tunables for the greedy walk.
#[derive(Clone, Copy, Debug)]
pub struct GreedyConfig {
    /// Consecutive successor-only, non-prefix-improving hops required before
    /// a digit-correcting jump is forced.
    pub serial_move_threshold: usize,
    /// Whether the predecessor link joins the candidate set.
    pub include_predecessor: bool,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        Self {
            serial_move_threshold: 2,
            include_predecessor: true,
        }
    }
}

/// Clockwise distance from `from` to `to` on a ring of `keyspace` keys.
pub fn ring_distance(from: Key, to: Key, keyspace: Key) -> Key {
    debug_assert!(from < keyspace && to < keyspace);
    if to >= from {
        to - from
    } else {
        keyspace - from + to
    }
}

/// Virtual distance of a candidate: zero when the target key lies inside the
/// candidate's managed interval, otherwise the clockwise distance from the
/// interval's right bound to the target.
pub fn candidate_distance(interval: KeyInterval, target: Key, keyspace: Key) -> Key {
    if interval.contains(target) {
        0
    } else {
        ring_distance(interval.right(), target, keyspace)
    }
}

/// One traversed overlay edge, as seen by the serial-move detector.
#[derive(Clone, Copy, Debug)]
pub struct MoveRecord {
    /// Node key the hop landed on.
    pub destination: Key,
    /// Whether the hop followed the ring successor link.
    pub via_successor: bool,
    /// Prefix match with the owner id after the hop.
    pub prefix_after: usize,
    /// Whether the hop increased the prefix match.
    pub improved_prefix: bool,
}

/// Serial-move detection: when the last `threshold` hops all followed the
/// successor link without growing the symbol-prefix match with the owner,
/// and the current table holds an entry whose ideal neighbour extends the
/// match beyond the best seen so far, that entry is returned as a forced
/// jump. Returns `None` otherwise.
pub fn detect_and_jump<'a>(
    tail: &[MoveRecord],
    node: &'a NodeState,
    owner: &PermutationId,
    threshold: usize,
    best_prefix: usize,
) -> Option<&'a RoutingEntry> {
    if tail.len() < threshold {
        return None;
    }
    let streak = &tail[tail.len() - threshold..];
    if !streak.iter().all(|m| m.via_successor && !m.improved_prefix) {
        return None;
    }
    node.routing_table()
        .iter()
        .filter(|e| e.resolved_key() != node.key())
        .map(|e| (e.ideal_perm().common_prefix_len(owner), e))
        .filter(|(p, _)| *p > best_prefix)
        .max_by_key(|(p, _)| *p)
        .map(|(_, e)| e)
}

/// Greedy lookup with the default tunables.
pub fn greedy_lookup(net: &Network, start: Key, k: Key) -> Result<LookupResult> {
    greedy_lookup_with(net, start, k, &GreedyConfig::default())
}

/// Greedy lookup: ring-distance descent over all links, with forced jumps
/// out of detected serial-move segments. Always terminates at the node
/// responsible for `k`.
pub fn greedy_lookup_with(
    net: &Network,
    start: Key,
    k: Key,
    cfg: &GreedyConfig,
) -> Result<LookupResult> {
    let (lo, hi) = net.scheme().bounds();
    if k < lo || k > hi {
        return Err(Error::KeyOutOfRange { key: k });
    }
    if net.node(start).is_none() {
        return Err(Error::UnknownNode { key: start });
    }

    let owner = net.scheme().owner(k)?;
    let target = net.scheme().node_key(&owner)?;
    let keyspace = net.keyspace_size();

    let mut current = start;
    let mut path = vec![start];
    let mut visited: std::collections::HashSet<Key> = [start].into();
    let mut jumps = 0u32;
    let mut tail: Vec<MoveRecord> = Vec::new();
    let mut best_prefix = net.node(start).unwrap().perm().common_prefix_len(&owner);
    // Stale routing data can break monotone progress; past this many hops the
    // walk degrades to pure successor steps, which always reach the target.
    let hop_cap = 2 * net.len() + 2 * net.scheme().arity() as usize + 8;

    loop {
        let node = net.node(current).unwrap();
        if node.interval().contains(k) {
            let result = LookupResult {
                found: Some(current),
                hops: path.len() as u32 - 1,
                path,
                attempts: 1,
                jumps,
            };
            debug_assert!(result.invariants_hold());
            return Ok(result);
        }

        let successor_only = path.len() > hop_cap;

        if !successor_only {
            if let Some(entry) =
                detect_and_jump(&tail, node, &owner, cfg.serial_move_threshold, best_prefix)
            {
                if net.node(entry.resolved_key()).is_some()
                    && !visited.contains(&entry.resolved_key())
                {
                    let claimed = entry.ideal_perm().common_prefix_len(&owner);
                    let dest = entry.resolved_key();
                    let prefix_after = net.node(dest).unwrap().perm().common_prefix_len(&owner);
                    tail.push(MoveRecord {
                        destination: dest,
                        via_successor: dest == node.successor(),
                        prefix_after,
                        improved_prefix: prefix_after > node.perm().common_prefix_len(&owner),
                    });
                    // The claimed prefix bounds the number of jumps per walk.
                    best_prefix = best_prefix.max(claimed).max(prefix_after);
                    jumps += 1;
                    path.push(dest);
                    visited.insert(dest);
                    current = dest;
                    continue;
                }
            }
        }

        // Candidate evaluation: ring links first, then table entries; the
        // first minimum wins ties.
        let mut best: Option<(Key, Key)> = None; // (distance, destination)
        let mut consider = |interval: KeyInterval, dest: Key| {
            let d = candidate_distance(interval, target, keyspace);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, dest));
            }
        };

        let succ = net.node(node.successor()).unwrap();
        consider(succ.interval(), succ.key());
        if !successor_only {
            if cfg.include_predecessor && !visited.contains(&node.predecessor()) {
                let pred = net.node(node.predecessor()).unwrap();
                consider(pred.interval(), pred.key());
            }
            for e in node.routing_table() {
                // Entries whose target left the ring, or whose stale interval
                // claim would revisit a node, fall back to the successor.
                if net.node(e.resolved_key()).is_some() && !visited.contains(&e.resolved_key()) {
                    consider(e.resolved_interval(), e.resolved_key());
                }
            }
        }

        let (_, dest) = best.expect("at least the successor is a candidate");
        let prefix_before = node.perm().common_prefix_len(&owner);
        let prefix_after = net.node(dest).unwrap().perm().common_prefix_len(&owner);
        tail.push(MoveRecord {
            destination: dest,
            via_successor: dest == node.successor(),
            prefix_after,
            improved_prefix: prefix_after > prefix_before,
        });
        best_prefix = best_prefix.max(prefix_after);
        path.push(dest);
        visited.insert(dest);
        current = dest;
    }
}

/// Digit-correcting lookup: at each node, follow the link that fixes the
/// leftmost symbol differing from the owner id. A failed attempt (hop budget
/// `2(n-1)` spent, or a link that resolves back to the current node) restarts
/// from a uniformly random routing-table entry of the initiator, up to
/// `max_attempts` attempts in total.
pub fn heuristic_lookup<R: Rng + ?Sized>(
    net: &Network,
    start: Key,
    k: Key,
    max_attempts: u32,
    rng: &mut R,
) -> Result<LookupResult> {
    let (lo, hi) = net.scheme().bounds();
    if k < lo || k > hi {
        return Err(Error::KeyOutOfRange { key: k });
    }
    let start_node = net.node(start).ok_or(Error::UnknownNode { key: start })?;
    assert!(max_attempts >= 1, "at least one attempt is required");

    let owner = net.scheme().owner(k)?;
    let n = net.scheme().arity();
    let budget = 2 * (n as u32 - 1);

    for attempt in 1..=max_attempts {
        let mut path = vec![start];
        let origin = if attempt == 1 {
            start
        } else {
            let table = start_node.routing_table();
            let e = &table[rng.random_range(0..table.len())];
            let dest = if net.node(e.resolved_key()).is_some() {
                e.resolved_key()
            } else {
                net.responsible_for(e.ideal_key())?
            };
            if dest != start {
                path.push(dest);
            }
            dest
        };

        let mut current = origin;
        let mut corrections = 0u32;
        loop {
            let node = net.node(current).unwrap();
            if node.interval().contains(k) {
                let result = LookupResult {
                    found: Some(current),
                    hops: path.len() as u32 - 1,
                    path,
                    attempts: attempt,
                    jumps: 0,
                };
                debug_assert!(result.invariants_hold());
                return Ok(result);
            }
            if corrections >= budget {
                break;
            }
            let prefix = node.perm().common_prefix_len(&owner);
            if prefix == n as usize {
                // Owner id reached but the key is served elsewhere: the ring
                // data must be stale; give up on this attempt.
                break;
            }
            let position = prefix as u8 + 1;
            let wanted = owner.symbol_at(position);
            let holder = node.perm().position_of(wanted);
            let generator = Transposition::new(position, holder)
                .expect("first differing symbol always sits to the right");
            let entry = node
                .routing_table()
                .iter()
                .find(|e| e.generator() == generator)
                .expect("one entry per generator");
            if net.node(entry.resolved_key()).is_none() {
                break;
            }
            let dest = entry.resolved_key();
            if dest == current {
                // No progress possible along the correcting link.
                break;
            }
            corrections += 1;
            path.push(dest);
            current = dest;
        }
    }

    Ok(LookupResult {
        found: None,
        hops: 0,
        path: vec![start],
        attempts: max_attempts,
        jumps: 0,
    })
}

/// Nodes visited by a range scan, with each node's stored keys inside the
/// queried range.
#[derive(Clone, Debug)]
pub struct RangeResult {
    /// `(node key, matching stored keys)` in visit order.
    pub per_node: Vec<(Key, Vec<Key>)>,
    /// Total overlay edges traversed: the initial lookup plus the walk.
    pub hops: u32,
    /// Jumps taken by the initial lookup.
    pub jumps: u32,
}

impl RangeResult {
    pub fn all_keys(&self) -> Vec<Key> {
        self.per_node
            .iter()
            .flat_map(|(_, ks)| ks.iter().copied())
            .collect()
    }
}

/// Range scan `[k_l, k_r]` (ring order, so wrapped ranges are allowed):
/// greedy lookup of `k_l`, then a successor walk collecting stored keys until
/// the node responsible for `k_r`.
pub fn range_lookup(net: &Network, start: Key, k_l: Key, k_r: Key) -> Result<RangeResult> {
    let (lo, hi) = net.scheme().bounds();
    for k in [k_l, k_r] {
        if k < lo || k > hi {
            return Err(Error::KeyOutOfRange { key: k });
        }
    }
    let keyspace = net.keyspace_size();
    let span = ring_distance(k_l, k_r, keyspace);

    let initial = greedy_lookup(net, start, k_l)?;
    let first = initial.found.expect("greedy lookup always terminates");
    let mut hops = initial.hops;
    let jumps = initial.jumps;

    let mut per_node = Vec::new();
    let mut current = first;
    loop {
        let node = net.node(current).unwrap();
        let matches: Vec<Key> = node
            .store()
            .keys()
            .copied()
            .filter(|&sk| ring_distance(k_l, sk, keyspace) <= span)
            .collect();
        per_node.push((current, matches));

        // Stop once this node's position has reached or passed k_r as seen
        // from k_l; a full circle covers the degenerate whole-ring range.
        if ring_distance(k_l, node.key(), keyspace) >= span {
            break;
        }
        let next = net.next_on_ring(current)?;
        if next == first {
            break;
        }
        hops += 1;
        current = next;
    }

    Ok(RangeResult {
        per_node,
        hops,
        jumps,
    })
}

/// Result of a multi-dimensional point query.
#[derive(Clone, Debug)]
pub struct PointQueryResult {
    /// Node responsible for the point's normalized key.
    pub node: Key,
    /// Stored points whose coordinates equal the queried point's.
    pub matches: Vec<StoredPoint>,
    pub lookup: LookupResult,
}

/// Routes to the node owning the point's normalized key and returns the
/// stored points equal to it. Positional scheme only.
pub fn multidim_point_query(
    net: &Network,
    start: Key,
    point: &DataPoint,
) -> Result<PointQueryResult> {
    let k = net.scheme().point_key(&point.normalize())?;
    let lookup = greedy_lookup(net, start, k)?;
    let node_key = lookup.found.expect("greedy lookup always terminates");
    let matches = net
        .node(node_key)
        .unwrap()
        .points()
        .get(&k)
        .map(|pts| {
            pts.iter()
                .filter(|p| p.coords == point.coords())
                .cloned()
                .collect()
        })
        .unwrap_or_default();
    Ok(PointQueryResult {
        node: node_key,
        matches,
        lookup,
    })
}

/// Result of a multi-dimensional box query.
#[derive(Clone, Debug)]
pub struct BoxQueryResult {
    /// Stored points inside the queried box, in ring visit order.
    pub matches: Vec<StoredPoint>,
    pub nodes_visited: usize,
    pub hops: u32,
}

/// Box query `[lo, hi]` (component-wise): scans the key range between the
/// two corners' normalized keys, which is a superset of the matches, then
/// filters the collected points against the box. Positional scheme only.
pub fn multidim_range_query(
    net: &Network,
    start: Key,
    lo: &DataPoint,
    hi: &DataPoint,
) -> Result<BoxQueryResult> {
    assert_eq!(lo.dims(), hi.dims(), "corner dimensionality mismatch");
    assert!(
        lo.coords().iter().zip(hi.coords()).all(|(a, b)| a <= b),
        "lower corner must not exceed upper corner"
    );
    let k_lo = net.scheme().point_key(&lo.normalize())?;
    let k_hi = net.scheme().point_key(&hi.normalize())?;
    let keyspace = net.keyspace_size();
    let span = ring_distance(k_lo, k_hi, keyspace);

    let scan = range_lookup(net, start, k_lo, k_hi)?;
    let mut matches = Vec::new();
    for (node_key, _) in &scan.per_node {
        let node = net.node(*node_key).unwrap();
        for (&pk, pts) in node.points() {
            if ring_distance(k_lo, pk, keyspace) > span {
                continue;
            }
            for p in pts {
                let inside = p
                    .coords
                    .iter()
                    .zip(lo.coords().iter().zip(hi.coords()))
                    .all(|(&c, (&l, &h))| c >= l && c <= h);
                if inside {
                    matches.push(p.clone());
                }
            }
        }
    }
    Ok(BoxQueryResult {
        matches,
        nodes_visited: scan.per_node.len(),
        hops: scan.hops,
    })
}
