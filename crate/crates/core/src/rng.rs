//! Seeded randomness.
//!
//! Every stream is a ChaCha8 keystream whose 256-bit key is expanded from a
//! 64-bit seed with SplitMix64. Bounded integers use Lemire's
//! multiply-shift rejection method and unit reals take the top 53 bits of a
//! word, so a (seed, call sequence) pair yields the same values on every
//! platform and every version of this crate.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{OrientedEdge, VertexId};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replica `index` under a master seed: `mix64(mix64(seed) ^ mix64(index + 1) * GOLDEN)`.
/// Injective in `index` for a fixed seed because every step is a bijection of `u64`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(mix64(seed) ^ mix64(index.wrapping_add(1)).wrapping_mul(GOLDEN | 1))
}

/// Tags separating the independent streams used by one run.
pub mod tag {
    pub const EDGES: u64 = 0;
    pub const AUX: u64 = 1;
    pub const SAMPLER: u64 = 2;
    pub const REDIRECT: u64 = 3;
}

/// Deterministic 64-bit generator.
#[derive(Clone, Debug)]
pub struct Prng {
    inner: ChaCha8Rng,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut s = seed;
        for chunk in key.chunks_exact_mut(8) {
            s = s.wrapping_add(GOLDEN);
            chunk.copy_from_slice(&mix64(s).to_le_bytes());
        }
        Self { inner: ChaCha8Rng::from_seed(key) }
    }

    /// Stream `tag` of a run seeded by `seed`.
    pub fn stream(seed: u64, tag: u64) -> Self {
        Self::new(derive_seed(seed, tag))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..bound`. Panics if `bound == 0`.
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let mut m = (self.next_u64() as u128) * (bound as u128);
        let mut low = m as u64;
        if low < bound {
            let threshold = bound.wrapping_neg() % bound;
            while low < threshold {
                m = (self.next_u64() as u128) * (bound as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    #[inline]
    pub fn below_usize(&mut self, bound: usize) -> usize {
        self.below(bound as u64) as usize
    }

    /// Uniform real in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Fair coin.
    #[inline]
    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// Uniform permutation of `0..n` (Fisher-Yates).
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        self.shuffle(&mut p);
        p
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below_usize(i + 1);
            xs.swap(i, j);
        }
    }
}

/// The i.i.d. oriented edges `E_1, E_2, ...` with uniform tail and head.
#[derive(Clone, Debug)]
pub struct EdgeStream {
    n: usize,
    seed: u64,
    position: u64,
    rng: Prng,
}

impl EdgeStream {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("edge stream needs n >= 1".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidSize(format!("n = {n} exceeds 32-bit vertex ids")));
        }
        Ok(Self { n, seed, position: 0, rng: Prng::stream(seed, tag::EDGES) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of edges drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn next_edge(&mut self) -> OrientedEdge {
        let tail = self.rng.below(self.n as u64) as u32;
        let head = self.rng.below(self.n as u64) as u32;
        self.position += 1;
        OrientedEdge {
            tail: VertexId::from_index(tail as usize),
            head: VertexId::from_index(head as usize),
            index: self.position,
        }
    }

    pub fn take_edges(&mut self, count: usize) -> Vec<OrientedEdge> {
        (0..count).map(|_| self.next_edge()).collect()
    }
}

impl Iterator for EdgeStream {
    type Item = OrientedEdge;

    fn next(&mut self) -> Option<OrientedEdge> {
        Some(self.next_edge())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_is_identical() {
        let a = EdgeStream::new(5, 42).unwrap().take_edges(100);
        let b = EdgeStream::new(5, 42).unwrap().take_edges(100);
        assert_eq!(a, b);
        let c = EdgeStream::new(5, 43).unwrap().take_edges(100);
        assert_ne!(a, c);
    }

    #[test]
    fn single_vertex_gives_self_loops() {
        for e in EdgeStream::new(1, 9).unwrap().take(50) {
            assert_eq!((e.tail.get(), e.head.get()), (1, 1));
        }
    }

    #[test]
    fn zero_vertices_rejected() {
        assert!(matches!(EdgeStream::new(0, 1), Err(Error::InvalidSize(_))));
    }

    #[test]
    fn tail_mean_concentrates() {
        let n = 1_000_000u64;
        let draws = 1_000_000u64;
        let mut s = EdgeStream::new(n as usize, 7).unwrap();
        let total: f64 = (0..draws).map(|_| s.next_edge().tail.get() as f64).sum();
        let mean = total / draws as f64;
        let expected = (n + 1) as f64 / 2.0;
        let sd = (((n * n - 1) as f64) / 12.0 / draws as f64).sqrt();
        assert!((mean - expected).abs() < 3.0 * sd, "{mean} vs {expected} +- {sd}");
    }

    #[test]
    fn replica_seeds_distinct() {
        let mut seen = std::collections::HashSet::new();
        for i in 0..10_000 {
            assert!(seen.insert(derive_seed(3, i)));
        }
    }

    #[test]
    fn below_is_unbiased_on_small_range() {
        let mut r = Prng::new(11);
        let mut counts = [0u64; 3];
        for _ in 0..300_000 {
            counts[r.below(3) as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 - 100_000.0).abs() < 4.0 * (300_000.0f64 * 2.0 / 9.0).sqrt());
        }
    }
}
