//! A peer-to-peer overlay whose node identities are permutations of
//! `1..=n`, routed over the full transposition graph (every position pair is
//! a link generator) embedded in a successor ring. Missing graph neighbours
//! are bridged by their live ring successors, so the overlay works at any
//! population up to `n!`.
//!
//! The crate provides the permutation/key machinery, the overlay membership
//! protocol, greedy and digit-correcting lookups, range and multi-dimensional
//! queries, and a deterministic simulation harness with a minimal Chord
//! baseline for comparison experiments.

pub mod keyspace;
pub mod overlay;
pub mod perm;
pub mod routing;
pub mod sim;

/// Ring key. 128 bits cover the positional keyspace `(n+1)^n` for every
/// supported arity.
pub type Key = u128;

pub use keyspace::{DataPoint, SchemeConfig};
pub use overlay::{Network, NodeState, RoutingEntry};
pub use perm::{generator_set, PermutationId, Transposition};
pub use routing::{greedy_lookup, heuristic_lookup, range_lookup, LookupResult};

/// Errors surfaced by fallible operations. Precondition breaches (positions
/// out of range, ranks outside `1..=n!`) are contract violations and panic
/// instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("arity {arity} outside supported range 3..=25")]
    ArityOutOfRange { arity: usize },
    #[error("symbols {symbols:?} are not a permutation of 1..=n")]
    InvalidPermutation { symbols: Vec<u8> },
    #[error("transposition positions ({i},{j}) invalid: need 1 <= i < j <= 25")]
    InvalidTransposition { i: u8, j: u8 },
    #[error("key {key} outside the configured keyspace")]
    KeyOutOfRange { key: Key },
    #[error("arity mismatch: scheme has {scheme}, permutation has {perm}")]
    ArityMismatch { scheme: u8, perm: u8 },
    #[error("operation requires the positional key scheme")]
    UnsupportedScheme,
    #[error("keyspace {0} does not fit in a 128-bit key")]
    KeyspaceOverflow(String),
    #[error("degenerate point domain: lower and upper bounds are equal")]
    DegenerateDomain,
    #[error("a live node already holds this identifier's key; resample")]
    IdentifierCollision,
    #[error("node key {key} is not live")]
    UnknownNode { key: Key },
    #[error("the network has no live nodes")]
    EmptyNetwork,
    #[error("key {key} not stored at its responsible node")]
    KeyNotFound { key: Key },
}

pub type Result<T> = std::result::Result<T, Error>;
