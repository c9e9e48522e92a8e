//! Deterministic experiment harness.
//!
//! Every experiment is a pure function of its configuration: networks,
//! initiators, keys, and identifiers all come from counter-derived ChaCha
//! streams, so a repeated run is bit-identical. Repetitions use distinct
//! derived seeds and are aggregated in repetition order.

mod chord;
mod graph;

pub use chord::{chord_baseline, ChordNetwork};
pub use graph::{ftn_graph_props, FtnGraphProps};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::keyspace::SchemeConfig;
use crate::overlay::Network;
use crate::perm::factorial;
use crate::routing::{greedy_lookup, heuristic_lookup};
use crate::{Error, Key, PermutationId, Result};

/// Lookup algorithm under measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Greedy,
    Heuristic,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Greedy => write!(f, "greedy"),
            Algorithm::Heuristic => write!(f, "heuristic"),
        }
    }
}

/// Configuration of one experiment cell.
#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    pub scheme: SchemeConfig,
    /// Live node count `m`, at most `n!`.
    pub nodes: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub initiators: usize,
    pub lookups_per_initiator: usize,
    pub repetitions: usize,
}

impl SimConfig {
    /// Standard measurement shape: 100 initiators, 100 lookups each,
    /// 40 repetitions.
    pub fn new(scheme: SchemeConfig, nodes: usize, seed: u64, algorithm: Algorithm) -> Self {
        Self {
            scheme,
            nodes,
            seed,
            algorithm,
            initiators: 100,
            lookups_per_initiator: 100,
            repetitions: 40,
        }
    }

    pub fn with_counts(
        mut self,
        initiators: usize,
        lookups_per_initiator: usize,
        repetitions: usize,
    ) -> Self {
        self.initiators = initiators;
        self.lookups_per_initiator = lookups_per_initiator;
        self.repetitions = repetitions;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0
            || self.initiators == 0
            || self.lookups_per_initiator == 0
            || self.repetitions == 0
        {
            return Err(Error::KeyspaceOverflow("all counts must be >= 1".into()));
        }
        if self.nodes as Key > factorial(self.scheme.arity()) {
            return Err(Error::KeyspaceOverflow(format!(
                "{} nodes exceed {}! identifiers",
                self.nodes,
                self.scheme.arity()
            )));
        }
        Ok(())
    }
}

/// Aggregated measurements. Fields not produced by an experiment stay `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Metrics {
    pub mean_hops: Option<f64>,
    pub p95_hops: Option<f64>,
    pub max_hops: Option<u32>,
    pub success_rate: Option<f64>,
    pub mean_distinct_table_entries: Option<f64>,
    pub load_metric_a_mean: Option<f64>,
    pub jump_rate: Option<f64>,
}

impl Metrics {
    fn from_hop_samples(hops: &mut [u32]) -> Self {
        let mut m = Metrics::default();
        if hops.is_empty() {
            return m;
        }
        hops.sort_unstable();
        let len = hops.len();
        m.mean_hops = Some(hops.iter().map(|&h| h as f64).sum::<f64>() / len as f64);
        m.p95_hops = Some(hops[((len as f64 * 0.95).ceil() as usize).clamp(1, len) - 1] as f64);
        m.max_hops = Some(hops[len - 1]);
        debug_assert!(m.mean_hops <= m.p95_hops);
        m
    }
}

/// One experiment: its per-repetition metrics plus the pooled aggregate.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRun {
    pub per_repetition: Vec<Metrics>,
    pub aggregate: Metrics,
}

/// Counter-derived seed stream (splitmix-style mixing).
pub fn derive_seed(base: u64, salt: u64) -> u64 {
    let mut z = base ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Assembles a network of `m` distinct uniformly sampled identifiers,
/// joining them in sequence (resampling on collision) and finishing with a
/// full routing-table refresh. Deterministic in `seed`.
pub fn build_network(scheme: SchemeConfig, m: usize, seed: u64) -> Result<Network> {
    if m == 0 || m as Key > factorial(scheme.arity()) {
        return Err(Error::KeyspaceOverflow(format!(
            "cannot place {m} nodes in a {}! identifier space",
            scheme.arity()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = Network::new(scheme);
    let mut bootstrap = None;
    while net.len() < m {
        let p = PermutationId::random(scheme.arity(), &mut rng)?;
        match net.join(p, bootstrap) {
            Ok(out) => {
                bootstrap.get_or_insert(out.key);
            }
            Err(Error::IdentifierCollision) => continue,
            Err(e) => return Err(e),
        }
    }
    net.refresh_all();
    Ok(net)
}

/// Random-key lookup experiment: per repetition, `initiators` random live
/// nodes each resolve `lookups_per_initiator` random keys. Hop statistics
/// pool successful lookups only; the success rate counts all of them.
pub fn experiment_lookup_perf(cfg: &SimConfig) -> Result<ExperimentRun> {
    cfg.validate()?;
    let (_, hi) = cfg.scheme.bounds();
    let mut per_repetition = Vec::with_capacity(cfg.repetitions);
    let mut pooled_hops: Vec<u32> = Vec::new();
    let mut pooled_lookups = 0usize;
    let mut pooled_successes = 0usize;
    let mut pooled_jump_activations = 0usize;

    for rep in 0..cfg.repetitions {
        let net = build_network(
            cfg.scheme,
            cfg.nodes,
            derive_seed(cfg.seed, rep as u64 * 2 + 1),
        )?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, rep as u64 * 2 + 2));
        let keys: Vec<Key> = net.node_keys().collect();

        let mut hops: Vec<u32> = Vec::with_capacity(cfg.initiators * cfg.lookups_per_initiator);
        let mut successes = 0usize;
        let mut jump_activations = 0usize;
        let mut issued = 0usize;

        for _ in 0..cfg.initiators {
            let start = keys[rng.random_range(0..keys.len())];
            for _ in 0..cfg.lookups_per_initiator {
                let k = rng.random_range(0..=hi);
                issued += 1;
                let found = match cfg.algorithm {
                    Algorithm::Greedy => {
                        let res = greedy_lookup(&net, start, k)?;
                        if res.jumps > 0 {
                            jump_activations += 1;
                        }
                        successes += 1;
                        hops.push(res.hops);
                        res.found
                    }
                    Algorithm::Heuristic => {
                        let res = heuristic_lookup(&net, start, k, 3, &mut rng)?;
                        if res.found.is_some() {
                            successes += 1;
                            hops.push(res.hops);
                        }
                        res.found
                    }
                };
                // Spot-check 1% of lookups against the directory.
                if issued.is_multiple_of(100) {
                    if let Some(found) = found {
                        assert_eq!(found, net.responsible_for(k)?, "lookup oracle violation");
                    }
                }
            }
        }

        pooled_lookups += issued;
        pooled_successes += successes;
        pooled_jump_activations += jump_activations;
        pooled_hops.extend_from_slice(&hops);

        let mut m = Metrics::from_hop_samples(&mut hops);
        m.success_rate = Some(successes as f64 / issued as f64);
        if cfg.algorithm == Algorithm::Greedy {
            m.jump_rate = Some(jump_activations as f64 / issued as f64);
        }
        per_repetition.push(m);
    }

    let mut aggregate = Metrics::from_hop_samples(&mut pooled_hops);
    aggregate.success_rate = Some(pooled_successes as f64 / pooled_lookups as f64);
    if cfg.algorithm == Algorithm::Greedy {
        aggregate.jump_rate = Some(pooled_jump_activations as f64 / pooled_lookups as f64);
    }
    Ok(ExperimentRun {
        per_repetition,
        aggregate,
    })
}

/// Routing-space experiment: mean count of distinct live targets per
/// routing table, as the network grows.
pub fn experiment_routing_table(cfg: &SimConfig) -> Result<ExperimentRun> {
    cfg.validate()?;
    let mut per_repetition = Vec::with_capacity(cfg.repetitions);
    let mut pooled = 0.0;
    for rep in 0..cfg.repetitions {
        let net = build_network(
            cfg.scheme,
            cfg.nodes,
            derive_seed(cfg.seed, rep as u64 * 2 + 1),
        )?;
        let mean = net
            .nodes()
            .map(|n| n.distinct_table_targets() as f64)
            .sum::<f64>()
            / net.len() as f64;
        pooled += mean;
        per_repetition.push(Metrics {
            mean_distinct_table_entries: Some(mean),
            ..Metrics::default()
        });
    }
    Ok(ExperimentRun {
        aggregate: Metrics {
            mean_distinct_table_entries: Some(pooled / cfg.repetitions as f64),
            ..Metrics::default()
        },
        per_repetition,
    })
}

/// Load-balance experiment: sample `count` distinct identifiers, sort them
/// by the scheme valuation, and average the relative deviation of adjacent
/// gaps from the perfect per-node load.
pub fn experiment_load_balance(cfg: &SimConfig, count: usize) -> Result<ExperimentRun> {
    if count < 2 || count as Key > factorial(cfg.scheme.arity()) {
        return Err(Error::KeyspaceOverflow(format!(
            "population {count} outside 2..={}!",
            cfg.scheme.arity()
        )));
    }
    if cfg.repetitions == 0 {
        return Err(Error::KeyspaceOverflow("repetitions must be >= 1".into()));
    }
    let perfect = cfg.scheme.perfect_load(count as u64);
    let mut per_repetition = Vec::with_capacity(cfg.repetitions);
    let mut pooled_sum = 0.0;
    let mut pooled_terms = 0usize;

    for rep in 0..cfg.repetitions {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, rep as u64 * 2 + 1));
        let mut values: Vec<Key> = Vec::with_capacity(count);
        let mut seen = std::collections::HashSet::with_capacity(count);
        while values.len() < count {
            let p = PermutationId::random(cfg.scheme.arity(), &mut rng)?;
            if seen.insert(p.clone()) {
                values.push(cfg.scheme.load_value(&p));
            }
        }
        values.sort_unstable();
        let mut sum = 0.0;
        for w in values.windows(2) {
            let gap = (w[1] - w[0]) as f64;
            sum += (perfect - gap).abs() / perfect;
        }
        let terms = count - 1;
        pooled_sum += sum;
        pooled_terms += terms;
        per_repetition.push(Metrics {
            load_metric_a_mean: Some(sum / terms as f64),
            ..Metrics::default()
        });
    }

    Ok(ExperimentRun {
        aggregate: Metrics {
            load_metric_a_mean: Some(pooled_sum / pooled_terms as f64),
            ..Metrics::default()
        },
        per_repetition,
    })
}

/// Whether the transposition-graph degree `n(n-1)/2` exceeds `log2(n!)`,
/// the threshold for staying connected under random halving failures.
pub fn degree_vs_log_check(n: u8) -> bool {
    assert!(n >= 3, "arity must be at least 3");
    let degree = n as f64 * (n as f64 - 1.0) / 2.0;
    let log2_fact: f64 = (2..=n as u64).map(|k| (k as f64).log2()).sum();
    degree > log2_fact
}
