//! Key-assignment schemes.
//!
//! Scheme A maps a permutation to its positional (base `n+1`) value; the
//! keyspace is `[0, (n+1)^n - 1]`. Scheme B maps it to its lexicographic
//! rank and hands every peer a contiguous block of `K` keys; the keyspace is
//! `[0, n!*K - 1]`. Both give each peer a ring interval that coincides
//! exactly with its key block, and both owner computations are local
//! arithmetic, never network operations.

use crate::perm::{factorial, positional_digit_value, MAX_ARITY, MIN_ARITY};
use crate::{Error, Key, PermutationId, Result};

/// Key-assignment scheme, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeConfig {
    /// Positional valuation in base `n+1`.
    A { n: u8 },
    /// Lexicographic rank times a per-peer block of `keys_per_peer` keys.
    B { n: u8, keys_per_peer: Key },
}

impl SchemeConfig {
    pub fn positional(n: u8) -> Result<Self> {
        if !(MIN_ARITY..=MAX_ARITY).contains(&n) {
            return Err(Error::ArityOutOfRange { arity: n as usize });
        }
        Ok(SchemeConfig::A { n })
    }

    pub fn rank_block(n: u8, keys_per_peer: Key) -> Result<Self> {
        if !(MIN_ARITY..=MAX_ARITY).contains(&n) {
            return Err(Error::ArityOutOfRange { arity: n as usize });
        }
        if keys_per_peer == 0 {
            return Err(Error::KeyspaceOverflow("K must be at least 1".into()));
        }
        factorial(n)
            .checked_mul(keys_per_peer)
            .ok_or_else(|| Error::KeyspaceOverflow(format!("{n}! * {keys_per_peer}")))?;
        Ok(SchemeConfig::B { n, keys_per_peer })
    }

    pub fn arity(&self) -> u8 {
        match *self {
            SchemeConfig::A { n } | SchemeConfig::B { n, .. } => n,
        }
    }

    /// `(N_left, N_right)`: the inclusive keyspace bounds.
    pub fn bounds(&self) -> (Key, Key) {
        match *self {
            SchemeConfig::A { n } => (0, (n as Key + 1).pow(n as u32) - 1),
            SchemeConfig::B { n, keys_per_peer } => (0, factorial(n) * keys_per_peer - 1),
        }
    }

    /// Number of keys in the keyspace.
    pub fn keyspace_size(&self) -> Key {
        self.bounds().1 + 1
    }

    /// The ring key a peer with identifier `p` sits at.
    ///
    /// Scheme A: the positional value. Scheme B: the top of the peer's
    /// block `[(rank-1)K, rank*K - 1]`, so that the ring interval
    /// `(predecessor, key]` of a fully populated network is exactly the
    /// block.
    pub fn node_key(&self, p: &PermutationId) -> Result<Key> {
        if p.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                scheme: self.arity(),
                perm: p.arity(),
            });
        }
        Ok(match *self {
            SchemeConfig::A { .. } => p.positional_value(),
            SchemeConfig::B { keys_per_peer, .. } => p.lex_rank() * keys_per_peer - 1,
        })
    }

    /// The identifier that would be responsible for `k` if all `n!` peers
    /// were present.
    pub fn owner(&self, k: Key) -> Result<PermutationId> {
        let (lo, hi) = self.bounds();
        assert!(k >= lo && k <= hi, "key {k} outside keyspace [{lo}, {hi}]");
        match *self {
            SchemeConfig::A { n } => PermutationId::from_positional_ceil(k, n),
            SchemeConfig::B { n, keys_per_peer } => {
                PermutationId::from_lex_rank(k / keys_per_peer + 1, n)
            }
        }
    }

    /// Ideal per-node load if `count` sampled identifiers split the scheme's
    /// valuation domain evenly: domain size over population.
    pub fn perfect_load(&self, count: u64) -> f64 {
        assert!(count >= 1, "population must be at least 1");
        let domain = match *self {
            SchemeConfig::A { n } => (n as Key + 1).pow(n as u32),
            SchemeConfig::B { n, .. } => factorial(n),
        };
        domain as f64 / count as f64
    }

    /// Valuation used by the load-balance experiments: positional value for
    /// scheme A, raw lexicographic rank for scheme B.
    pub fn load_value(&self, p: &PermutationId) -> Key {
        match *self {
            SchemeConfig::A { .. } => p.positional_value(),
            SchemeConfig::B { .. } => p.lex_rank(),
        }
    }

    /// Ring key for a normalized digit vector (multi-dimensional data).
    ///
    /// Only the positional scheme accepts digit vectors with repeats; the
    /// rank scheme has no valuation for them and reports an error.
    pub fn point_key(&self, digits: &[u8]) -> Result<Key> {
        match *self {
            SchemeConfig::A { n } => {
                assert_eq!(
                    digits.len(),
                    n as usize,
                    "digit vector length {} does not match arity {n}",
                    digits.len()
                );
                assert!(
                    digits.iter().all(|&d| d >= 1 && d <= n),
                    "digits must lie in 1..={n}"
                );
                Ok(positional_digit_value(digits, n))
            }
            SchemeConfig::B { .. } => Err(Error::UnsupportedScheme),
        }
    }
}

/// An `n`-dimensional data point with every coordinate in a shared rational
/// domain `[domain_lo, domain_hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DataPoint {
    coords: Vec<f64>,
    domain_lo: f64,
    domain_hi: f64,
}

impl DataPoint {
    pub fn new(coords: Vec<f64>, domain_lo: f64, domain_hi: f64) -> Result<Self> {
        if domain_lo >= domain_hi {
            return Err(Error::DegenerateDomain);
        }
        if !(MIN_ARITY as usize..=MAX_ARITY as usize).contains(&coords.len()) {
            return Err(Error::ArityOutOfRange {
                arity: coords.len(),
            });
        }
        if coords.iter().any(|c| *c < domain_lo || *c > domain_hi) {
            return Err(Error::KeyOutOfRange { key: 0 });
        }
        Ok(Self {
            coords,
            domain_lo,
            domain_hi,
        })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dims(&self) -> u8 {
        self.coords.len() as u8
    }

    /// Min-max normalization to digits in `1..=n`:
    /// `y_i = floor((x_i - lo) / (hi - lo) * (n - 1)) + 1`.
    ///
    /// Digits may repeat; the result is generally not a permutation.
    pub fn normalize(&self) -> Vec<u8> {
        let n = self.coords.len() as u8;
        let span = self.domain_hi - self.domain_lo;
        self.coords
            .iter()
            .map(|&x| {
                let scaled = ((x - self.domain_lo) / span * (n as f64 - 1.0)).floor() as u8;
                scaled.min(n - 1) + 1
            })
            .collect()
    }
}
