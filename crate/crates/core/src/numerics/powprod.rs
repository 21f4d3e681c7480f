//! Signed products of rational powers of positive rationals.
//!
//! This is the exact-comparison normal form behind weighted norms: values
//! like `|x|^{1/s}` with rational `x` and `s` compare without any interval
//! refinement by clearing exponent denominators, and pure powers of a common
//! prime (notably 2, which the factorial-series witnesses produce) compare
//! through exponent arithmetic alone regardless of size.

use super::interval::{ln_bounds, rat_cmp, rat_pow, Rat, RatInterval};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Exact powering is attempted only while the result stays below this many
/// bits; beyond that the certified-logarithm route takes over.
const EXACT_POW_BIT_LIMIT: u64 = 24_000;

#[derive(Clone, Debug)]
pub struct PowProd {
    /// -1, 0 or 1; zero means the whole value is zero and `factors` is empty.
    sign: i8,
    /// base -> exponent, bases positive and distinct from 1, exponents nonzero.
    factors: BTreeMap<Rat, Rat>,
}

impl PowProd {
    pub fn from_rat(r: &Rat) -> Self {
        if r.is_zero() {
            return PowProd { sign: 0, factors: BTreeMap::new() };
        }
        let sign = if r.is_negative() { -1 } else { 1 };
        let mut factors = BTreeMap::new();
        let a = r.abs();
        if !a.is_one() {
            factors.insert(a, Rat::one());
        }
        PowProd { sign, factors }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn neg(mut self) -> Self {
        self.sign = -self.sign;
        self
    }

    pub fn abs(mut self) -> Self {
        self.sign = self.sign.abs();
        self
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.sign == 0 || o.sign == 0 {
            return PowProd { sign: 0, factors: BTreeMap::new() };
        }
        let mut factors = self.factors.clone();
        for (b, e) in &o.factors {
            let entry = factors.entry(b.clone()).or_insert_with(Rat::zero);
            *entry += e;
            if entry.is_zero() {
                factors.remove(b);
            }
        }
        PowProd { sign: self.sign * o.sign, factors }
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.sign == 0 {
            return None;
        }
        Some(self.mul(&o.clone().pow_int(-1)))
    }

    fn pow_int(mut self, k: i64) -> Self {
        let k_rat = Rat::from_integer(BigInt::from(k));
        for e in self.factors.values_mut() {
            *e *= &k_rat;
        }
        if k % 2 == 0 {
            self.sign = self.sign.abs();
        }
        self
    }

    /// Raise to a rational exponent. Returns `None` when the operation is
    /// not defined in this normal form (negative base with fractional
    /// exponent, or zero base with nonpositive exponent).
    pub fn pow(&self, e: &Rat) -> Option<Self> {
        if self.sign == 0 {
            return if e.is_positive() {
                Some(PowProd { sign: 0, factors: BTreeMap::new() })
            } else {
                None
            };
        }
        if e.is_zero() {
            return Some(PowProd { sign: 1, factors: BTreeMap::new() });
        }
        let sign = if self.sign < 0 {
            if !e.is_integer() {
                return None;
            }
            if e.to_integer().is_odd() {
                -1
            } else {
                1
            }
        } else {
            1
        };
        let mut factors = BTreeMap::new();
        for (b, old) in &self.factors {
            let ne = old * e;
            if !ne.is_zero() {
                factors.insert(b.clone(), ne);
            }
        }
        Some(PowProd { sign, factors })
    }

    /// Exact comparison where the normal form decides it; `None` means the
    /// certified-log route hit the precision cap without separating the
    /// values (caller treats this as a tie).
    pub fn compare(a: &Self, b: &Self, cap: u32) -> Option<Ordering> {
        if a.sign != b.sign {
            return Some(a.sign.cmp(&b.sign));
        }
        if a.sign == 0 {
            return Some(Ordering::Equal);
        }
        // compare magnitudes via their quotient against 1
        let mut diff = a.factors.clone();
        for (base, e) in &b.factors {
            let entry = diff.entry(base.clone()).or_insert_with(Rat::zero);
            *entry -= e;
            if entry.is_zero() {
                diff.remove(base);
            }
        }
        if diff.is_empty() {
            return Some(Ordering::Equal);
        }
        let mag = magnitude_vs_one(&diff, cap)?;
        Some(if a.sign > 0 { mag } else { mag.reverse() })
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }
}

/// Decide `prod base^exp` vs 1 for positive bases.
fn magnitude_vs_one(factors: &BTreeMap<Rat, Rat>, cap: u32) -> Option<Ordering> {
    // pure powers of two: exponent arithmetic only
    if let Some(ord) = two_power_route(factors) {
        return Some(ord);
    }
    if let Some(ord) = exact_power_route(factors) {
        return Some(ord);
    }
    log_route(factors, cap)
}

fn two_power_route(factors: &BTreeMap<Rat, Rat>) -> Option<Ordering> {
    let mut total = Rat::zero();
    for (base, e) in factors {
        let vn = base.numer().trailing_zeros().unwrap_or(0);
        let vd = base.denom().trailing_zeros().unwrap_or(0);
        let odd_n = base.numer() >> vn;
        let odd_d = base.denom() >> vd;
        if !odd_n.is_one() || !odd_d.is_one() {
            return None;
        }
        let v = vn as i64 - vd as i64;
        total += e * Rat::from_integer(BigInt::from(v));
    }
    Some(if total.is_zero() {
        Ordering::Equal
    } else if total.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    })
}

fn exact_power_route(factors: &BTreeMap<Rat, Rat>) -> Option<Ordering> {
    let mut lcm = BigInt::one();
    for e in factors.values() {
        lcm = lcm.lcm(e.denom());
    }
    let mut cost: u64 = 0;
    let mut powered: Vec<(Rat, i64)> = Vec::with_capacity(factors.len());
    for (base, e) in factors {
        let k_int = (e * Rat::from_integer(lcm.clone())).to_integer();
        let k = k_int.to_i64()?;
        let bits = base.numer().bits().max(base.denom().bits());
        cost = cost.checked_add(k.unsigned_abs().checked_mul(bits)?)?;
        if cost > EXACT_POW_BIT_LIMIT {
            return None;
        }
        powered.push((base.clone(), k));
    }
    let mut num = Rat::one();
    let mut den = Rat::one();
    for (base, k) in powered {
        let p = rat_pow(&base, k.unsigned_abs() as u32);
        if k >= 0 {
            num *= p;
        } else {
            den *= p;
        }
    }
    Some(rat_cmp(&num, &den))
}

fn log_route(factors: &BTreeMap<Rat, Rat>, cap: u32) -> Option<Ordering> {
    let mut prec = 64u32;
    loop {
        let mut sum = RatInterval::point(Rat::zero());
        for (base, e) in factors {
            sum = sum.add(&ln_bounds(base, prec).mul_rat(e));
        }
        match sum.sign() {
            Some(0) => return Some(Ordering::Equal),
            Some(s) if s > 0 => return Some(Ordering::Greater),
            Some(_) => return Some(Ordering::Less),
            None => {}
        }
        if prec >= cap {
            return None;
        }
        prec = (prec * 2).min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::interval::{rat, rat_int};

    fn pp(r: &Rat) -> PowProd {
        PowProd::from_rat(r)
    }

    #[test]
    fn rational_collapse() {
        // 6 = 2 * 3 via the exact powering route
        let six = pp(&rat_int(6));
        let two_three = pp(&rat_int(2)).mul(&pp(&rat_int(3)));
        assert_eq!(PowProd::compare(&six, &two_three, 256), Some(Ordering::Equal));
    }

    #[test]
    fn cross_power_comparison() {
        // 4^(1/2) vs 9^(1/2): 2 < 3
        let a = pp(&rat_int(4)).pow(&rat(1, 2)).unwrap();
        let b = pp(&rat_int(9)).pow(&rat(1, 2)).unwrap();
        assert_eq!(PowProd::compare(&a, &b, 256), Some(Ordering::Less));
        // 2^(1/2) vs 3^(1/3): 2^3 = 8 > 3^2... exponent lcm 6: 2^3 vs 3^2
        let a = pp(&rat_int(2)).pow(&rat(1, 2)).unwrap();
        let b = pp(&rat_int(3)).pow(&rat(1, 3)).unwrap();
        assert_eq!(PowProd::compare(&a, &b, 256), Some(Ordering::Less));
    }

    #[test]
    fn giant_two_powers() {
        // 2^(-439084800) vs 2^(-419126400): exponent route, no big numbers
        let a = pp(&rat_int(2)).pow(&rat_int(-439_084_800)).unwrap();
        let b = pp(&rat_int(2)).pow(&rat_int(-419_126_400)).unwrap();
        assert_eq!(PowProd::compare(&a, &b, 256), Some(Ordering::Less));
    }

    #[test]
    fn log_route_fallback() {
        // 3^10000 vs 10^4771: too big to power exactly, log-separable
        let a = pp(&rat_int(3)).pow(&rat_int(10_000)).unwrap();
        let b = pp(&rat_int(10)).pow(&rat_int(4771)).unwrap();
        // 10000 log 3 = 4771.2...; so 3^10000 > 10^4771
        assert_eq!(PowProd::compare(&a, &b, 512), Some(Ordering::Greater));
    }

    #[test]
    fn signs_and_zero() {
        let z = pp(&Rat::zero());
        let neg = pp(&rat_int(-5));
        let pos = pp(&rat(1, 7));
        assert_eq!(PowProd::compare(&neg, &z, 64), Some(Ordering::Less));
        assert_eq!(PowProd::compare(&z, &pos, 64), Some(Ordering::Less));
        assert_eq!(PowProd::compare(&z, &z, 64), Some(Ordering::Equal));
    }
}
