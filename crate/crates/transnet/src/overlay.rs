//! Per-peer state and the membership protocol.
//!
//! A [`Network`] is the simulated system: live nodes keyed by ring position.
//! Ring links (predecessor/successor) are maintained eagerly on every join
//! and leave; transposition-link routing tables are rebuilt lazily via the
//! refresh operations. Successor resolution uses the global sorted directory,
//! while join reports the lookup count it would have cost on the wire.
//!
//! A `Network` is single-writer: mutating operations are serialized by
//! `&mut self`; read-only queries may run concurrently between mutations.

use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};

use crate::keyspace::{DataPoint, SchemeConfig};
use crate::perm::generator_set;
use crate::{Error, Key, PermutationId, Result, Transposition};

/// Half-open-below ring interval `(left, right]`, wrapping modulo the
/// keyspace. `left == right` denotes the whole keyspace (a single node that
/// is its own predecessor).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyInterval {
    left: Key,
    right: Key,
}

impl KeyInterval {
    pub fn new(left: Key, right: Key) -> Self {
        Self { left, right }
    }

    pub fn left(&self) -> Key {
        self.left
    }

    pub fn right(&self) -> Key {
        self.right
    }

    pub fn contains(&self, k: Key) -> bool {
        if self.left == self.right {
            true
        } else if self.left < self.right {
            k > self.left && k <= self.right
        } else {
            k > self.left || k <= self.right
        }
    }

    /// Number of keys covered, given the keyspace size.
    pub fn span(&self, keyspace: Key) -> Key {
        if self.left == self.right {
            keyspace
        } else if self.left < self.right {
            self.right - self.left
        } else {
            keyspace - self.left + self.right
        }
    }
}

/// One transposition link: the generator, the ideal neighbour it names, and
/// the live node currently serving that neighbour's key, with the key range
/// the live node managed when the entry was last refreshed.
#[derive(Clone, Debug)]
pub struct RoutingEntry {
    generator: Transposition,
    ideal_perm: PermutationId,
    ideal_key: Key,
    resolved_key: Key,
    resolved_interval: KeyInterval,
}

impl RoutingEntry {
    pub fn generator(&self) -> Transposition {
        self.generator
    }

    pub fn ideal_perm(&self) -> &PermutationId {
        &self.ideal_perm
    }

    pub fn ideal_key(&self) -> Key {
        self.ideal_key
    }

    pub fn resolved_key(&self) -> Key {
        self.resolved_key
    }

    pub fn resolved_interval(&self) -> KeyInterval {
        self.resolved_interval
    }
}

/// A stored multi-dimensional point with its payload.
#[derive(Clone, Debug, PartialEq)]
pub struct StoredPoint {
    pub coords: Vec<f64>,
    pub payload: String,
}

/// One live peer.
#[derive(Clone, Debug)]
pub struct NodeState {
    perm: PermutationId,
    key: Key,
    predecessor: Key,
    successor: Key,
    routing_table: Vec<RoutingEntry>,
    store: BTreeMap<Key, String>,
    points: BTreeMap<Key, Vec<StoredPoint>>,
}

impl NodeState {
    pub fn perm(&self) -> &PermutationId {
        &self.perm
    }

    pub fn key(&self) -> Key {
        self.key
    }

    pub fn predecessor(&self) -> Key {
        self.predecessor
    }

    pub fn successor(&self) -> Key {
        self.successor
    }

    pub fn routing_table(&self) -> &[RoutingEntry] {
        &self.routing_table
    }

    /// The key range this node serves: `(predecessor, key]`.
    pub fn interval(&self) -> KeyInterval {
        KeyInterval::new(self.predecessor, self.key)
    }

    pub fn store(&self) -> &BTreeMap<Key, String> {
        &self.store
    }

    pub fn points(&self) -> &BTreeMap<Key, Vec<StoredPoint>> {
        &self.points
    }

    /// Count of distinct live targets among the routing entries.
    pub fn distinct_table_targets(&self) -> usize {
        let mut keys: Vec<Key> = self.routing_table.iter().map(|e| e.resolved_key).collect();
        keys.sort_unstable();
        keys.dedup();
        keys.len()
    }
}

/// Report returned by a successful join.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JoinOutcome {
    pub key: Key,
    /// Lookups the join would have issued on the wire: one for the joiner's
    /// own key plus one per routing-table entry.
    pub charged_lookups: u32,
    pub migrated_keys: usize,
}

/// Report returned by a leave.
#[derive(Clone, Copy, Debug)]
pub struct LeaveOutcome {
    pub transferred_keys: usize,
    /// Peers the leaver contacts: ring neighbours plus distinct table targets.
    pub notifications: u32,
}

/// The simulated overlay: live nodes in ring order plus the key scheme.
#[derive(Clone, Debug)]
pub struct Network {
    scheme: SchemeConfig,
    nodes: BTreeMap<Key, NodeState>,
}

impl Network {
    pub fn new(scheme: SchemeConfig) -> Self {
        Self {
            scheme,
            nodes: BTreeMap::new(),
        }
    }

    pub fn scheme(&self) -> SchemeConfig {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn keyspace_size(&self) -> Key {
        self.scheme.keyspace_size()
    }

    pub fn node(&self, key: Key) -> Option<&NodeState> {
        self.nodes.get(&key)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeState> {
        self.nodes.values()
    }

    pub fn node_keys(&self) -> impl Iterator<Item = Key> + '_ {
        self.nodes.keys().copied()
    }

    /// The live node responsible for `k`: the one whose interval contains it,
    /// equivalently the first node at or after `k` in ring order.
    pub fn responsible_for(&self, k: Key) -> Result<Key> {
        if self.nodes.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        Ok(self
            .nodes
            .range(k..)
            .next()
            .or_else(|| self.nodes.iter().next())
            .map(|(k, _)| *k)
            .unwrap())
    }

    /// The live node strictly after `key` in ring order.
    pub fn next_on_ring(&self, key: Key) -> Result<Key> {
        if self.nodes.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        Ok(self
            .nodes
            .range((Excluded(key), Unbounded))
            .next()
            .or_else(|| self.nodes.iter().next())
            .map(|(k, _)| *k)
            .unwrap())
    }

    /// Splices a new peer into the ring, migrates the keys of its interval
    /// from its successor, and builds its routing table.
    ///
    /// On an identifier collision the join is rejected and the caller is
    /// expected to resample a fresh permutation. `bootstrap` must name a live
    /// node unless the network is empty.
    pub fn join(&mut self, perm: PermutationId, bootstrap: Option<Key>) -> Result<JoinOutcome> {
        let key = self.scheme.node_key(&perm)?;

        if self.nodes.is_empty() {
            let mut node = NodeState {
                perm,
                key,
                predecessor: key,
                successor: key,
                routing_table: Vec::new(),
                store: BTreeMap::new(),
                points: BTreeMap::new(),
            };
            node.routing_table = self.build_table_for(&node.perm, key);
            self.nodes.insert(key, node);
            // Bootstrap irrelevant: the first node owns the whole keyspace.
            let table_len = self.nodes[&key].routing_table.len();
            // Entries of a lone node all resolve to itself.
            debug_assert!(self.nodes[&key]
                .routing_table
                .iter()
                .all(|e| e.resolved_key == key));
            return Ok(JoinOutcome {
                key,
                charged_lookups: 1 + table_len as u32,
                migrated_keys: 0,
            });
        }

        let bootstrap = bootstrap.ok_or(Error::EmptyNetwork)?;
        if !self.nodes.contains_key(&bootstrap) {
            return Err(Error::UnknownNode { key: bootstrap });
        }
        if self.nodes.contains_key(&key) {
            return Err(Error::IdentifierCollision);
        }

        let succ_key = self.responsible_for(key)?;
        let pred_key = self.nodes[&succ_key].predecessor;

        // Migrate the stored keys and points of the new interval (pred, key]
        // out of the successor.
        let interval = KeyInterval::new(pred_key, key);
        let succ = self.nodes.get_mut(&succ_key).unwrap();
        let mut store = BTreeMap::new();
        let mut points = BTreeMap::new();
        let moved_keys: Vec<Key> = succ
            .store
            .keys()
            .copied()
            .filter(|&k| interval.contains(k))
            .collect();
        for k in moved_keys {
            let v = succ.store.remove(&k).unwrap();
            store.insert(k, v);
        }
        let moved_points: Vec<Key> = succ
            .points
            .keys()
            .copied()
            .filter(|&k| interval.contains(k))
            .collect();
        for k in moved_points {
            let v = succ.points.remove(&k).unwrap();
            points.insert(k, v);
        }
        let migrated_keys = store.len() + points.values().map(Vec::len).sum::<usize>();

        // Notify ring neighbours.
        succ.predecessor = key;
        self.nodes.get_mut(&pred_key).unwrap().successor = key;

        let mut node = NodeState {
            perm,
            key,
            predecessor: pred_key,
            successor: succ_key,
            routing_table: Vec::new(),
            store,
            points,
        };
        node.routing_table = self.build_table_for(&node.perm, key);
        let table_len = node.routing_table.len();
        self.nodes.insert(key, node);

        Ok(JoinOutcome {
            key,
            charged_lookups: 1 + table_len as u32,
            migrated_keys,
        })
    }

    /// Removes a live peer, handing its stored keys to its successor. Ring
    /// neighbours are re-linked immediately; other peers' routing entries
    /// stay stale until their next refresh.
    pub fn leave(&mut self, leaving: Key) -> Result<LeaveOutcome> {
        let node = self
            .nodes
            .remove(&leaving)
            .ok_or(Error::UnknownNode { key: leaving })?;

        if self.nodes.is_empty() {
            // Last node out: the network is empty and its data is gone.
            return Ok(LeaveOutcome {
                transferred_keys: 0,
                notifications: 0,
            });
        }

        let mut targets: Vec<Key> = node
            .routing_table
            .iter()
            .map(|e| e.resolved_key)
            .chain([node.predecessor, node.successor])
            .filter(|&k| k != leaving)
            .collect();
        targets.sort_unstable();
        targets.dedup();
        let notifications = targets.len() as u32;

        let transferred_keys = node.store.len() + node.points.values().map(Vec::len).sum::<usize>();
        let succ = self.nodes.get_mut(&node.successor).unwrap();
        succ.store.extend(node.store);
        for (k, mut pts) in node.points {
            succ.points.entry(k).or_default().append(&mut pts);
        }
        succ.predecessor = node.predecessor;
        self.nodes.get_mut(&node.predecessor).unwrap().successor = node.successor;

        Ok(LeaveOutcome {
            transferred_keys,
            notifications,
        })
    }

    fn build_table_for(&self, perm: &PermutationId, self_key: Key) -> Vec<RoutingEntry> {
        let gens = generator_set(self.scheme.arity());
        let mut table = Vec::with_capacity(gens.len());
        for g in gens {
            let ideal_perm = perm.transposed(g);
            let ideal_key = self.scheme.node_key(&ideal_perm).unwrap();
            let resolved_key = if self.nodes.is_empty() {
                self_key
            } else {
                self.responsible_for(ideal_key).unwrap()
            };
            let resolved_interval = self
                .nodes
                .get(&resolved_key)
                .map(|n| n.interval())
                .unwrap_or_else(|| KeyInterval::new(self_key, self_key));
            table.push(RoutingEntry {
                generator: g,
                ideal_perm,
                ideal_key,
                resolved_key,
                resolved_interval,
            });
        }
        table
    }

    /// Rebuilds one node's routing table against current membership.
    /// Idempotent on an unchanged network.
    pub fn refresh_node(&mut self, key: Key) -> Result<()> {
        let node = self.nodes.get(&key).ok_or(Error::UnknownNode { key })?;
        let table = self.build_table_for(&node.perm.clone(), key);
        self.nodes.get_mut(&key).unwrap().routing_table = table;
        Ok(())
    }

    /// Rebuilds every routing table; run after a churn batch to reach a
    /// quiescent state.
    pub fn refresh_all(&mut self) {
        let keys: Vec<Key> = self.nodes.keys().copied().collect();
        for key in keys {
            self.refresh_node(key).unwrap();
        }
    }

    /// Stores `payload` at the node responsible for `k`, routing from
    /// `start`. The hop cost is the cost of one lookup.
    pub fn insert_key(
        &mut self,
        start: Key,
        k: Key,
        payload: impl Into<String>,
    ) -> Result<crate::routing::LookupResult> {
        let (lo, hi) = self.scheme.bounds();
        if k < lo || k > hi {
            return Err(Error::KeyOutOfRange { key: k });
        }
        let result = crate::routing::greedy_lookup(self, start, k)?;
        let target = result.found.expect("greedy lookup always terminates");
        self.nodes
            .get_mut(&target)
            .unwrap()
            .store
            .insert(k, payload.into());
        Ok(result)
    }

    /// Removes `k` from its responsible node. Reports `KeyNotFound` when the
    /// responsible node holds no such key.
    pub fn delete_key(&mut self, start: Key, k: Key) -> Result<crate::routing::LookupResult> {
        let (lo, hi) = self.scheme.bounds();
        if k < lo || k > hi {
            return Err(Error::KeyOutOfRange { key: k });
        }
        let result = crate::routing::greedy_lookup(self, start, k)?;
        let target = result.found.expect("greedy lookup always terminates");
        self.nodes
            .get_mut(&target)
            .unwrap()
            .store
            .remove(&k)
            .ok_or(Error::KeyNotFound { key: k })?;
        Ok(result)
    }

    /// Stores a multi-dimensional point at the node owning its normalized
    /// key. Positional scheme only.
    pub fn insert_point(
        &mut self,
        start: Key,
        point: &DataPoint,
        payload: impl Into<String>,
    ) -> Result<crate::routing::LookupResult> {
        let k = self.scheme.point_key(&point.normalize())?;
        let result = crate::routing::greedy_lookup(self, start, k)?;
        let target = result.found.expect("greedy lookup always terminates");
        self.nodes
            .get_mut(&target)
            .unwrap()
            .points
            .entry(k)
            .or_default()
            .push(StoredPoint {
                coords: point.coords().to_vec(),
                payload: payload.into(),
            });
        Ok(result)
    }

    /// Total stored entries (keys plus points) across all nodes.
    pub fn total_stored(&self) -> usize {
        self.nodes
            .values()
            .map(|n| n.store.len() + n.points.values().map(Vec::len).sum::<usize>())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn perm(symbols: &[u8]) -> PermutationId {
        PermutationId::new(symbols.to_vec()).unwrap()
    }

    /// Brute-force responsibility: scan the sorted key list directly.
    fn oracle_responsible(keys: &[Key], k: Key) -> Key {
        let mut sorted = keys.to_vec();
        sorted.sort_unstable();
        *sorted.iter().find(|&&nk| nk >= k).unwrap_or(&sorted[0])
    }

    #[test]
    fn interval_examples() {
        let whole = KeyInterval::new(5, 5);
        assert!(whole.contains(0) && whole.contains(5) && whole.contains(63));
        let plain = KeyInterval::new(10, 20);
        assert!(plain.contains(11) && plain.contains(20));
        assert!(!plain.contains(10) && !plain.contains(21));
        // Wrap: (50, 5] over [0, 59] is (50, 59] plus [0, 5].
        let wrap = KeyInterval::new(50, 5);
        for k in 0..60u128 {
            let expect = k > 50 || k <= 5;
            assert_eq!(wrap.contains(k), expect, "key {k}");
        }
        assert_eq!(wrap.span(60), 15);
        assert_eq!(plain.span(60), 10);
        assert_eq!(whole.span(60), 60);
    }

    #[test]
    fn first_join_owns_everything() {
        let scheme = SchemeConfig::rank_block(3, 10).unwrap();
        let mut net = Network::new(scheme);
        let out = net.join(perm(&[2, 1, 3]), None).unwrap();
        assert_eq!(net.len(), 1);
        let node = net.node(out.key).unwrap();
        assert_eq!(node.interval().span(net.keyspace_size()), 60);
        assert!(node.routing_table.iter().all(|e| e.resolved_key == out.key));
        assert_eq!(node.predecessor, out.key);
        assert_eq!(node.successor, out.key);
    }

    #[test]
    fn routing_table_substitutes_live_successors() {
        // n=3, K=1: live {123 (key 0), 321 (key 5)}. From 123, the ideal
        // neighbour 213 (key 2) is absent and resolves to 321 (key 5).
        let scheme = SchemeConfig::rank_block(3, 1).unwrap();
        let mut net = Network::new(scheme);
        let a = net.join(perm(&[1, 2, 3]), None).unwrap().key;
        let b = net.join(perm(&[3, 2, 1]), Some(a)).unwrap().key;
        assert_eq!((a, b), (0, 5));
        net.refresh_all();
        let table = net.node(a).unwrap().routing_table();
        let entry = table
            .iter()
            .find(|e| e.ideal_perm() == &perm(&[2, 1, 3]))
            .unwrap();
        assert_eq!(entry.ideal_key(), 2);
        assert_eq!(entry.resolved_key(), 5);
    }

    #[test]
    fn complete_network_realizes_every_ideal_link() {
        for n in 3..=5u8 {
            let scheme = SchemeConfig::rank_block(n, 1).unwrap();
            let mut net = Network::new(scheme);
            let total = crate::perm::factorial(n);
            let mut bootstrap = None;
            for r in 1..=total {
                let p = PermutationId::from_lex_rank(r, n).unwrap();
                let key = net.join(p, bootstrap).unwrap().key;
                bootstrap.get_or_insert(key);
            }
            net.refresh_all();
            for node in net.nodes() {
                for e in node.routing_table() {
                    assert_eq!(
                        e.resolved_key(),
                        e.ideal_key(),
                        "substitution in a complete network"
                    );
                }
                assert_eq!(
                    node.distinct_table_targets(),
                    n as usize * (n as usize - 1) / 2
                );
            }
        }
    }

    #[test]
    fn join_charges_at_most_one_lookup_per_link() {
        let scheme = SchemeConfig::positional(5).unwrap();
        let mut net = Network::new(scheme);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut bootstrap = None;
        for _ in 0..40 {
            let p = PermutationId::random(5, &mut rng).unwrap();
            match net.join(p, bootstrap) {
                Ok(out) => {
                    assert!(out.charged_lookups <= 1 + 10);
                    bootstrap.get_or_insert(out.key);
                }
                Err(Error::IdentifierCollision) => {}
                Err(e) => panic!("unexpected join error {e}"),
            }
        }
    }

    #[test]
    fn join_migrates_exactly_its_interval() {
        let scheme = SchemeConfig::rank_block(4, 8).unwrap();
        let mut net = Network::new(scheme);
        let first = net.join(perm(&[1, 2, 3, 4]), None).unwrap().key;
        // Populate the whole keyspace with one payload per key block edge.
        let (lo, hi) = scheme.bounds();
        for k in (lo..=hi).step_by(3) {
            net.insert_key(first, k, format!("v{k}")).unwrap();
        }
        let before = net.total_stored();

        let joined = net.join(perm(&[3, 1, 4, 2]), Some(first)).unwrap();
        assert!(joined.migrated_keys > 0);
        assert_eq!(net.total_stored(), before, "keys migrate, never vanish");
        net.refresh_all();

        // Every migrated key now answers at the new node.
        let node = net.node(joined.key).unwrap();
        for &k in node.store().keys() {
            assert!(node.interval().contains(k));
            let keys: Vec<Key> = net.node_keys().collect();
            assert_eq!(oracle_responsible(&keys, k), joined.key);
        }
    }

    #[test]
    fn collision_is_reported_for_resampling() {
        let scheme = SchemeConfig::rank_block(3, 10).unwrap();
        let mut net = Network::new(scheme);
        let a = net.join(perm(&[1, 2, 3]), None).unwrap().key;
        assert_eq!(
            net.join(perm(&[1, 2, 3]), Some(a)),
            Err(Error::IdentifierCollision)
        );
        assert!(matches!(
            net.join(perm(&[2, 1, 3]), Some(42)),
            Err(Error::UnknownNode { .. })
        ));
    }

    #[test]
    fn leave_hands_keys_to_successor() {
        let scheme = SchemeConfig::rank_block(3, 10).unwrap();
        let mut net = Network::new(scheme);
        let a = net.join(perm(&[1, 2, 3]), None).unwrap().key; // key 9
        let b = net.join(perm(&[2, 3, 1]), Some(a)).unwrap().key; // rank 4 -> 39
        let c = net.join(perm(&[3, 2, 1]), Some(a)).unwrap().key; // key 59
        net.refresh_all();
        net.insert_key(a, 30, "x").unwrap();
        net.insert_key(a, 35, "y").unwrap();
        assert_eq!(net.node(b).unwrap().store().len(), 2);

        let out = net.leave(b).unwrap();
        assert_eq!(out.transferred_keys, 2);
        assert!(out.notifications <= 3 + 2);
        net.refresh_all();
        // The transferred keys answer at b's old successor.
        let keys: Vec<Key> = net.node_keys().collect();
        assert_eq!(oracle_responsible(&keys, 30), c);
        assert_eq!(net.node(c).unwrap().store().len(), 2);
        assert_eq!(net.total_stored(), 2);

        net.leave(c).unwrap();
        net.leave(a).unwrap();
        assert!(net.is_empty());
    }

    #[test]
    fn join_then_leave_restores_the_network() {
        let scheme = SchemeConfig::positional(4).unwrap();
        let mut net = Network::new(scheme);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut bootstrap = None;
        for _ in 0..8 {
            let p = PermutationId::random(4, &mut rng).unwrap();
            if let Ok(out) = net.join(p, bootstrap) {
                bootstrap.get_or_insert(out.key);
            }
        }
        net.refresh_all();
        let start = bootstrap.unwrap();
        for k in [5u128, 100, 300, 500] {
            net.insert_key(start, k, format!("{k}")).unwrap();
        }

        let snapshot: Vec<(Key, Key, Key, usize)> = net
            .nodes()
            .map(|n| (n.key(), n.predecessor(), n.successor(), n.store().len()))
            .collect();
        let stored_before = net.total_stored();

        let newcomer = perm(&[4, 2, 3, 1]);
        let key = net.join(newcomer, Some(start)).unwrap().key;
        net.refresh_all();
        net.leave(key).unwrap();
        net.refresh_all();

        let after: Vec<(Key, Key, Key, usize)> = net
            .nodes()
            .map(|n| (n.key(), n.predecessor(), n.successor(), n.store().len()))
            .collect();
        assert_eq!(snapshot, after);
        assert_eq!(net.total_stored(), stored_before);
    }

    #[test]
    fn refresh_is_idempotent() {
        let scheme = SchemeConfig::rank_block(4, 2).unwrap();
        let mut net = Network::new(scheme);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut bootstrap = None;
        for _ in 0..10 {
            let p = PermutationId::random(4, &mut rng).unwrap();
            if let Ok(out) = net.join(p, bootstrap) {
                bootstrap.get_or_insert(out.key);
            }
        }
        net.refresh_all();
        let before: Vec<Vec<Key>> = net
            .nodes()
            .map(|n| n.routing_table().iter().map(|e| e.resolved_key()).collect())
            .collect();
        net.refresh_all();
        let after: Vec<Vec<Key>> = net
            .nodes()
            .map(|n| n.routing_table().iter().map(|e| e.resolved_key()).collect())
            .collect();
        assert_eq!(before, after);
    }

    #[test]
    fn quiescent_tables_match_the_directory_oracle() {
        let scheme = SchemeConfig::positional(5).unwrap();
        let mut net = Network::new(scheme);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut bootstrap = None;
        for _ in 0..60 {
            let p = PermutationId::random(5, &mut rng).unwrap();
            if let Ok(out) = net.join(p, bootstrap) {
                bootstrap.get_or_insert(out.key);
            }
        }
        // Churn: drop a third of the nodes, then refresh.
        let keys: Vec<Key> = net.node_keys().collect();
        for k in keys.iter().step_by(3) {
            net.leave(*k).unwrap();
        }
        net.refresh_all();

        let live: Vec<Key> = net.node_keys().collect();
        for node in net.nodes() {
            for e in node.routing_table() {
                assert_eq!(e.resolved_key(), oracle_responsible(&live, e.ideal_key()));
                assert_eq!(
                    e.resolved_interval(),
                    net.node(e.resolved_key()).unwrap().interval()
                );
            }
        }
        // Intervals partition the keyspace.
        let total: Key = net
            .nodes()
            .map(|n| n.interval().span(net.keyspace_size()))
            .sum();
        assert_eq!(total, net.keyspace_size());
    }

    #[test]
    fn delete_of_absent_key_reports_not_found() {
        let scheme = SchemeConfig::rank_block(3, 10).unwrap();
        let mut net = Network::new(scheme);
        let a = net.join(perm(&[1, 2, 3]), None).unwrap().key;
        net.insert_key(a, 7, "x").unwrap();
        assert!(net.delete_key(a, 7).is_ok());
        assert_eq!(net.delete_key(a, 7), Err(Error::KeyNotFound { key: 7 }));
    }
}
