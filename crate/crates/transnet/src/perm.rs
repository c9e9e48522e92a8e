//! Permutation identifiers and the transposition generator set.
//!
//! A node identity is an ordered sequence of the symbols `1..=n` with every
//! symbol appearing exactly once. Two valuations map identifiers to integers:
//! the positional value (base `n+1` reading of the digits) and the 1-based
//! lexicographic rank. Both are strictly monotone with lexicographic order,
//! and both have exact inverses.

use rand::Rng;

use crate::{Error, Key, Result};

/// Smallest supported arity.
pub const MIN_ARITY: u8 = 3;
/// Largest supported arity. Keeps `(n+1)^n` (the positional keyspace bound)
/// inside an unsigned 128-bit key.
pub const MAX_ARITY: u8 = 25;

/// An ordered sequence of the `n` distinct symbols `1..=n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PermutationId {
    symbols: Vec<u8>,
}

impl std::fmt::Debug for PermutationId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PermutationId({self})")
    }
}

impl std::fmt::Display for PermutationId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.arity() <= 9 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl PermutationId {
    /// Validates that `symbols` is a permutation of `1..=n` for a supported `n`.
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        let n = symbols.len();
        if !(MIN_ARITY as usize..=MAX_ARITY as usize).contains(&n) {
            return Err(Error::ArityOutOfRange { arity: n });
        }
        let mut seen = [false; MAX_ARITY as usize + 1];
        for &s in &symbols {
            if s == 0 || s as usize > n || seen[s as usize] {
                return Err(Error::InvalidPermutation {
                    symbols: symbols.clone(),
                });
            }
            seen[s as usize] = true;
        }
        Ok(Self { symbols })
    }

    /// The identity permutation `1, 2, …, n`.
    pub fn identity(n: u8) -> Result<Self> {
        Self::new((1..=n).collect())
    }

    /// Draws a permutation uniformly from the `n!` possibilities.
    ///
    /// Unbiased swap-down shuffle: for each position `i` from the last down
    /// to the second, the symbol at `i` is exchanged with a uniformly chosen
    /// position `<= i`. Deterministic for a seeded `rng`.
    pub fn random<R: Rng + ?Sized>(n: u8, rng: &mut R) -> Result<Self> {
        if !(MIN_ARITY..=MAX_ARITY).contains(&n) {
            return Err(Error::ArityOutOfRange { arity: n as usize });
        }
        let mut symbols: Vec<u8> = (1..=n).collect();
        for i in (1..symbols.len()).rev() {
            let j = rng.random_range(0..=i);
            symbols.swap(i, j);
        }
        Ok(Self { symbols })
    }

    pub fn arity(&self) -> u8 {
        self.symbols.len() as u8
    }

    /// Symbols in order, values in `1..=n`.
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Symbol at 1-based position `pos`.
    pub fn symbol_at(&self, pos: u8) -> u8 {
        assert!(
            pos >= 1 && pos <= self.arity(),
            "position {pos} out of range for arity {}",
            self.arity()
        );
        self.symbols[pos as usize - 1]
    }

    /// 1-based position holding `symbol`.
    pub fn position_of(&self, symbol: u8) -> u8 {
        assert!(
            symbol >= 1 && symbol <= self.arity(),
            "symbol {symbol} out of range for arity {}",
            self.arity()
        );
        self.symbols.iter().position(|&s| s == symbol).unwrap() as u8 + 1
    }

    /// Returns a copy with the symbols at the transposition's two positions
    /// exchanged.
    pub fn transposed(&self, t: Transposition) -> Self {
        assert!(
            t.second() <= self.arity(),
            "transposition {t:?} out of range for arity {}",
            self.arity()
        );
        let mut symbols = self.symbols.clone();
        symbols.swap(t.first() as usize - 1, t.second() as usize - 1);
        Self { symbols }
    }

    /// Positional valuation: the symbol sequence read as an `n`-digit number
    /// in base `n+1`. Strictly monotone with lexicographic order.
    pub fn positional_value(&self) -> Key {
        positional_digit_value(&self.symbols, self.arity())
    }

    /// Smallest permutation whose positional value is `>= k`, wrapping to the
    /// identity when `k` exceeds the largest permutation value.
    ///
    /// Digit-by-digit lexicographic successor search with backtracking: match
    /// the base-`n+1` digits of `k` as a prefix while possible; where that
    /// fails, place the smallest larger unused symbol and fill the remainder
    /// ascending.
    pub fn from_positional_ceil(k: Key, n: u8) -> Result<Self> {
        if !(MIN_ARITY..=MAX_ARITY).contains(&n) {
            return Err(Error::ArityOutOfRange { arity: n as usize });
        }
        let base = n as Key + 1;
        let max_key = base.pow(n as u32) - 1;
        if k > max_key {
            return Err(Error::KeyOutOfRange { key: k });
        }

        // Base-(n+1) digits of k, most significant first.
        let mut digits = vec![0u8; n as usize];
        let mut rem = k;
        for d in digits.iter_mut().rev() {
            *d = (rem % base) as u8;
            rem /= base;
        }

        let mut chosen: Vec<u8> = Vec::with_capacity(n as usize);
        let mut used = [false; MAX_ARITY as usize + 1];

        // Fills positions from `chosen.len()` onward with the unused symbols
        // in ascending order: the minimal completion once the prefix is
        // strictly above k's digits.
        let complete_ascending = |chosen: &mut Vec<u8>, used: &[bool]| {
            for s in 1..=n {
                if !used[s as usize] {
                    chosen.push(s);
                }
            }
        };

        let mut pos = 0usize;
        loop {
            if pos == n as usize {
                // Every digit matched exactly: k itself is a permutation value.
                return Self::new(chosen);
            }
            let want = digits[pos];
            if want >= 1 && want <= n && !used[want as usize] {
                used[want as usize] = true;
                chosen.push(want);
                pos += 1;
                continue;
            }
            // Tight match impossible here; take the smallest unused symbol
            // strictly greater than the wanted digit, backtracking as needed.
            loop {
                let floor = if pos == chosen.len() {
                    digits[pos]
                } else {
                    // Backtracked: must exceed the symbol previously placed here.
                    let prev = chosen.pop().unwrap();
                    used[prev as usize] = false;
                    prev
                };
                if let Some(next) = (floor + 1..=n).find(|&s| !used[s as usize]) {
                    used[next as usize] = true;
                    chosen.push(next);
                    let mut symbols = chosen;
                    complete_ascending(&mut symbols, &used);
                    return Self::new(symbols);
                }
                if pos == 0 && chosen.is_empty() {
                    // No permutation is >= k: wrap around the ring.
                    return Self::identity(n);
                }
                pos = chosen.len().saturating_sub(1);
                if chosen.is_empty() {
                    return Self::identity(n);
                }
            }
        }
    }

    /// 1-based lexicographic rank in `1..=n!`.
    ///
    /// The weight of position `i` is the count of symbols smaller than the
    /// one at `i` among positions `i..=n`; the rank is the factorial-base
    /// reading of the weights, plus one.
    pub fn lex_rank(&self) -> Key {
        let n = self.symbols.len();
        let mut rank: Key = 1;
        let mut fact: Key = factorial(self.arity() - 1);
        for i in 0..n {
            let weight = self.symbols[i + 1..]
                .iter()
                .filter(|&&s| s < self.symbols[i])
                .count() as Key;
            rank += weight * fact;
            if i + 2 <= n {
                fact /= (n - 1 - i) as Key;
            }
        }
        rank
    }

    /// Exact inverse of [`lex_rank`](Self::lex_rank): repeated division by
    /// factorials recovers the weights, the weights select the symbols.
    pub fn from_lex_rank(rank: Key, n: u8) -> Result<Self> {
        if !(MIN_ARITY..=MAX_ARITY).contains(&n) {
            return Err(Error::ArityOutOfRange { arity: n as usize });
        }
        assert!(
            rank >= 1 && rank <= factorial(n),
            "rank {rank} out of range for arity {n}"
        );
        let mut rem = rank - 1;
        let mut pool: Vec<u8> = (1..=n).collect();
        let mut symbols = Vec::with_capacity(n as usize);
        for i in (0..n as usize).rev() {
            let fact = factorial(i as u8);
            let weight = (rem / fact) as usize;
            rem %= fact;
            symbols.push(pool.remove(weight));
        }
        Self::new(symbols)
    }

    /// Length of the longest common prefix of the two symbol sequences.
    pub fn common_prefix_len(&self, other: &Self) -> usize {
        assert_eq!(
            self.arity(),
            other.arity(),
            "arity mismatch: {} vs {}",
            self.arity(),
            other.arity()
        );
        self.symbols
            .iter()
            .zip(&other.symbols)
            .take_while(|(a, b)| a == b)
            .count()
    }
}

/// Positional valuation of an arbitrary digit vector in base `n+1`.
///
/// Digits may repeat; on a valid permutation this agrees with
/// [`PermutationId::positional_value`].
pub fn positional_digit_value(digits: &[u8], n: u8) -> Key {
    let base = n as Key + 1;
    digits.iter().fold(0, |acc, &d| acc * base + d as Key)
}

/// `n!` as a 128-bit key; exact for the supported arities.
pub fn factorial(n: u8) -> Key {
    (1..=n as Key).product::<Key>().max(1)
}

/// A position pair `(i, j)`, `1 <= i < j <= n`, naming the generator that
/// exchanges the symbols at positions `i` and `j`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transposition {
    i: u8,
    j: u8,
}

impl std::fmt::Debug for Transposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl Transposition {
    pub fn new(i: u8, j: u8) -> Result<Self> {
        if i == 0 || j == 0 || i >= j || j > MAX_ARITY {
            return Err(Error::InvalidTransposition { i, j });
        }
        Ok(Self { i, j })
    }

    pub fn first(&self) -> u8 {
        self.i
    }

    pub fn second(&self) -> u8 {
        self.j
    }
}

/// All position pairs `(i, j)` with `1 <= i < j <= n`, in `(i, j)` order.
/// The set has exactly `n(n-1)/2` members.
pub fn generator_set(n: u8) -> Vec<Transposition> {
    assert!(
        (MIN_ARITY..=MAX_ARITY).contains(&n),
        "arity {n} out of supported range"
    );
    let mut set = Vec::with_capacity(n as usize * (n as usize - 1) / 2);
    for i in 1..n {
        for j in i + 1..=n {
            set.push(Transposition { i, j });
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn perm(symbols: &[u8]) -> PermutationId {
        PermutationId::new(symbols.to_vec()).unwrap()
    }

    /// All permutations of arity n in lexicographic order, generated by
    /// repeated next-permutation steps; independent of rank/unrank.
    fn all_perms_lex(n: u8) -> Vec<Vec<u8>> {
        let mut cur: Vec<u8> = (1..=n).collect();
        let mut out = vec![cur.clone()];
        // next lexicographic permutation until the sequence is descending
        while let Some(i) = (0..cur.len() - 1).rev().find(|&i| cur[i] < cur[i + 1]) {
            let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
            out.push(cur.clone());
        }
        out
    }

    #[test]
    fn rejects_invalid_symbol_sequences() {
        assert!(PermutationId::new(vec![1, 2, 2]).is_err());
        assert!(PermutationId::new(vec![1, 2, 4]).is_err());
        assert!(PermutationId::new(vec![0, 1, 2]).is_err());
        assert!(PermutationId::new(vec![1, 2]).is_err());
        assert!(PermutationId::new((1..=26).collect()).is_err());
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(
            perm(&[1, 2, 3]).transposed(Transposition::new(1, 2).unwrap()),
            perm(&[2, 1, 3])
        );
        // Fig-2-style n=6 hop: 365241 reaches 465231 via positions (1,5).
        assert_eq!(
            perm(&[3, 6, 5, 2, 4, 1]).transposed(Transposition::new(1, 5).unwrap()),
            perm(&[4, 6, 5, 2, 3, 1])
        );
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn transpose_position_out_of_range_panics() {
        perm(&[1, 2, 3]).transposed(Transposition::new(2, 4).unwrap());
    }

    #[test]
    fn generator_set_examples() {
        let g3 = generator_set(3);
        assert_eq!(
            g3,
            vec![
                Transposition::new(1, 2).unwrap(),
                Transposition::new(1, 3).unwrap(),
                Transposition::new(2, 3).unwrap()
            ]
        );
        assert_eq!(generator_set(4).len(), 6);
        assert_eq!(generator_set(6).len(), 15);
        for n in MIN_ARITY..=MAX_ARITY {
            let expect = n as usize * (n as usize - 1) / 2;
            assert_eq!(generator_set(n).len(), expect);
        }
    }

    #[test]
    fn positional_value_examples() {
        assert_eq!(perm(&[1, 2, 3]).positional_value(), 27);
        assert_eq!(perm(&[4, 1, 3, 5, 6, 2]).positional_value(), 70947);
        // Identity is the lexicographic minimum, hence value minimum.
        for n in 3..=6 {
            let id_val = PermutationId::identity(n).unwrap().positional_value();
            for p in all_perms_lex(n) {
                assert!(perm(&p).positional_value() >= id_val);
            }
        }
    }

    #[test]
    fn positional_ceil_examples() {
        // Brute-force oracle for n=3: permutation values are
        // {27, 30, 39, 45, 54, 57}.
        assert_eq!(
            PermutationId::from_positional_ceil(27, 3).unwrap(),
            perm(&[1, 2, 3])
        );
        assert_eq!(
            PermutationId::from_positional_ceil(28, 3).unwrap(),
            perm(&[1, 3, 2])
        );
        assert_eq!(perm(&[1, 3, 2]).positional_value(), 30);
        // Past the maximum value 57, wraps to the identity.
        assert_eq!(
            PermutationId::from_positional_ceil(58, 3).unwrap(),
            perm(&[1, 2, 3])
        );
    }

    #[test]
    fn positional_ceil_matches_brute_force_small_arities() {
        for n in 3..=6u8 {
            let values: Vec<Key> = all_perms_lex(n)
                .iter()
                .map(|p| perm(p).positional_value())
                .collect();
            let max = *values.iter().max().unwrap();
            let keyspace = (n as Key + 1).pow(n as u32);
            // Exhaustive for n<=5; strided above to keep the test quick.
            let stride = if keyspace > 20_000 { 7 } else { 1 };
            let mut k = 0;
            while k < keyspace {
                let got = PermutationId::from_positional_ceil(k, n).unwrap();
                let expect = if k > max {
                    PermutationId::identity(n).unwrap()
                } else {
                    let v = values.iter().copied().filter(|&v| v >= k).min().unwrap();
                    PermutationId::from_positional_ceil(v, n).unwrap()
                };
                assert_eq!(got, expect, "ceil mismatch at k={k} n={n}");
                k += stride;
            }
        }
    }

    #[test]
    fn lex_rank_examples() {
        assert_eq!(perm(&[1, 2, 3]).lex_rank(), 1);
        assert_eq!(perm(&[1, 3, 2]).lex_rank(), 2);
        assert_eq!(perm(&[3, 2, 1]).lex_rank(), 6);
        for n in 3..=8u8 {
            assert_eq!(PermutationId::identity(n).unwrap().lex_rank(), 1);
            let desc: Vec<u8> = (1..=n).rev().collect();
            assert_eq!(perm(&desc).lex_rank(), factorial(n));
        }
    }

    #[test]
    fn unrank_examples() {
        assert_eq!(
            PermutationId::from_lex_rank(1, 4).unwrap(),
            perm(&[1, 2, 3, 4])
        );
        assert_eq!(
            PermutationId::from_lex_rank(3, 3).unwrap(),
            perm(&[2, 1, 3])
        );
    }

    #[test]
    #[should_panic(expected = "rank")]
    fn unrank_out_of_range_panics() {
        let _ = PermutationId::from_lex_rank(7, 3);
    }

    #[test]
    fn rank_agrees_with_lexicographic_enumeration() {
        for n in 3..=7u8 {
            for (idx, p) in all_perms_lex(n).iter().enumerate() {
                let p = perm(p);
                assert_eq!(p.lex_rank(), idx as Key + 1, "rank of {p}");
                assert_eq!(PermutationId::from_lex_rank(idx as Key + 1, n).unwrap(), p);
            }
        }
    }

    #[test]
    fn order_agreement_between_valuations() {
        // rank and positional value induce the same (lexicographic) order.
        for n in 3..=6u8 {
            let perms = all_perms_lex(n);
            for w in perms.windows(2) {
                let (a, b) = (perm(&w[0]), perm(&w[1]));
                assert!(a.lex_rank() < b.lex_rank());
                assert!(a.positional_value() < b.positional_value());
            }
        }
    }

    #[test]
    fn positional_round_trip_exhaustive() {
        for n in 3..=6u8 {
            for p in all_perms_lex(n) {
                let p = perm(&p);
                assert_eq!(
                    PermutationId::from_positional_ceil(p.positional_value(), n).unwrap(),
                    p
                );
            }
        }
    }

    #[test]
    fn random_permutation_is_deterministic_and_valid() {
        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let pa = PermutationId::random(10, &mut a).unwrap();
            let pb = PermutationId::random(10, &mut b).unwrap();
            assert_eq!(pa, pb);
            // `new` revalidates the invariants.
            PermutationId::new(pa.symbols().to_vec()).unwrap();
        }
    }

    #[test]
    fn random_permutation_frequencies_are_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = std::collections::HashMap::new();
        let draws = 60_000;
        for _ in 0..draws {
            let p = PermutationId::random(3, &mut rng).unwrap();
            *counts.entry(p).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 6);
        for (p, c) in counts {
            let freq = c as f64 / draws as f64;
            assert!(
                (freq - 1.0 / 6.0).abs() < 0.02,
                "frequency of {p} was {freq}"
            );
        }
    }

    #[test]
    fn common_prefix_examples() {
        let p = perm(&[3, 6, 5, 2, 4, 1]);
        let q = perm(&[4, 1, 3, 5, 6, 2]);
        assert_eq!(p.common_prefix_len(&q), 0);
        assert_eq!(p.common_prefix_len(&p), 6);
        assert_eq!(
            perm(&[1, 2, 3, 4]).common_prefix_len(&perm(&[1, 2, 4, 3])),
            2
        );
    }

    #[test]
    #[should_panic(expected = "arity mismatch")]
    fn common_prefix_arity_mismatch_panics() {
        perm(&[1, 2, 3]).common_prefix_len(&perm(&[1, 2, 3, 4]));
    }

    #[test]
    fn generators_connect_all_permutations() {
        // BFS from the identity over transpose reaches all n! permutations.
        for n in 3..=5u8 {
            let gens = generator_set(n);
            let start = PermutationId::identity(n).unwrap();
            let mut seen = std::collections::HashSet::new();
            let mut queue = std::collections::VecDeque::new();
            seen.insert(start.clone());
            queue.push_back(start);
            while let Some(p) = queue.pop_front() {
                for &g in &gens {
                    let q = p.transposed(g);
                    if seen.insert(q.clone()) {
                        queue.push_back(q);
                    }
                }
            }
            assert_eq!(seen.len() as Key, factorial(n));
        }
    }

    proptest! {
        #[test]
        fn transpose_is_an_involution(n in 3u8..=12, seed in any::<u64>(), gi in any::<usize>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = PermutationId::random(n, &mut rng).unwrap();
            let gens = generator_set(n);
            let t = gens[gi % gens.len()];
            let q = p.transposed(t);
            PermutationId::new(q.symbols().to_vec()).unwrap();
            prop_assert_eq!(q.transposed(t), p);
        }

        #[test]
        fn rank_round_trip_random_arities(n in 3u8..=12, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = PermutationId::random(n, &mut rng).unwrap();
            let r = p.lex_rank();
            prop_assert!(r >= 1 && r <= factorial(n));
            prop_assert_eq!(PermutationId::from_lex_rank(r, n).unwrap(), p);
        }

        #[test]
        fn positional_ceil_is_lower_bounded_by_key(n in 3u8..=8, k in any::<u128>()) {
            let keyspace = (n as Key + 1).pow(n as u32);
            let k = k % keyspace;
            let p = PermutationId::from_positional_ceil(k, n).unwrap();
            let v = p.positional_value();
            // Either the ceiling sits at or above k, or we wrapped to the identity.
            prop_assert!(v >= k || p == PermutationId::identity(n).unwrap());
        }
    }
}
