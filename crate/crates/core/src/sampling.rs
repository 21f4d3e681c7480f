//! Deterministic sampling: a small splittable PRNG and rational
//! low-discrepancy sequences. Everything here is pure integer arithmetic so
//! that identical seeds give byte-identical outputs on every platform.

use crate::numerics::{Rat, RatInterval};
use num_bigint::BigInt;
use num_traits::One;

/// SplitMix64; the reference output sequence of Steele, Lea and Flood.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..n` by rejection, unbiased.
    pub fn next_below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    pub fn next_i64_range(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.next_below((hi - lo + 1) as u64) as i64
    }

    /// Random rational `p/q` with `|p| <= max_num`, `1 <= q <= max_den`.
    pub fn next_rat(&mut self, max_num: i64, max_den: i64) -> Rat {
        let p = self.next_i64_range(-max_num, max_num);
        let q = self.next_i64_range(1, max_den);
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    /// Rational in `[0, 1)` with denominator `2^32`.
    pub fn next_unit_rat(&mut self) -> Rat {
        let v = self.next_u64() >> 32;
        Rat::new(BigInt::from(v), BigInt::one() << 32)
    }
}

const HALTON_BASES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical-inverse of `index` in the given base, truncated to `digits`
/// digits: an exact rational in `[0, 1)` with denominator `base^digits`.
fn radical_inverse(base: u64, mut index: u64, digits: u32) -> Rat {
    let mut num: u64 = 0;
    let mut scale: u128 = 1;
    for _ in 0..digits {
        let d = index % base;
        num = num * base + d;
        index /= base;
        scale *= base as u128;
    }
    Rat::new(BigInt::from(num), BigInt::from(scale))
}

/// Seeded low-discrepancy points in `[0, 1)^dim`: Halton points in coprime
/// bases with a seed-derived Cranley-Patterson rotation. All coordinates are
/// exact rationals.
pub fn low_discrepancy_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<Rat>> {
    assert!(dim >= 1 && dim <= HALTON_BASES.len());
    let mut rng = SplitMix64::new(seed ^ 0xD1B54A32D192ED03);
    let offsets: Vec<Rat> = (0..dim).map(|_| rng.next_unit_rat()).collect();
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let mut pt = Vec::with_capacity(dim);
        for (d, &b) in HALTON_BASES[..dim].iter().enumerate() {
            let digits = (32.0 / (b as f64).log2()).ceil() as u32;
            let mut v = radical_inverse(b, j as u64 + 1, digits) + &offsets[d];
            if v >= Rat::one() {
                v -= Rat::one();
            }
            pt.push(v);
        }
        out.push(pt);
    }
    out
}

/// Midpoints of a rational point, for display.
pub fn point_to_f64(pt: &[Rat]) -> Vec<f64> {
    pt.iter().map(crate::numerics::rat_to_f64).collect()
}

/// Midpoint of an interval as a float, for display.
pub fn interval_mid_f64(iv: &RatInterval) -> f64 {
    iv.to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, Zero};

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(1234567);
        let mut b = SplitMix64::new(1234567);
        let va: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let vb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_eq!(va, vb);
        let mut c = SplitMix64::new(7654321);
        assert_ne!(va[0], c.next_u64());
    }

    #[test]
    fn deterministic_given_seed() {
        let a = low_discrepancy_points(2, 16, 42);
        let b = low_discrepancy_points(2, 16, 42);
        let c = low_discrepancy_points(2, 16, 43);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn points_in_unit_box() {
        for pt in low_discrepancy_points(3, 64, 7) {
            for x in pt {
                assert!(!x.is_negative() || x.is_zero());
                assert!(x < Rat::one());
            }
        }
    }

    #[test]
    fn radical_inverse_base2() {
        // 1 -> 0.1b = 1/2, 3 -> 0.11b = 3/4
        assert_eq!(radical_inverse(2, 1, 32), Rat::new(BigInt::one(), BigInt::from(2)));
        assert_eq!(radical_inverse(2, 3, 4), Rat::new(BigInt::from(3), BigInt::from(4)));
    }
}
