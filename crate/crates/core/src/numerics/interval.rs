//! Rational interval arithmetic with certified endpoints.
//!
//! All enclosures are closed intervals `[lo, hi]` with exact rational
//! endpoints. Addition, subtraction and multiplication are exact; roots and
//! logarithms round outward to a requested number of bits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Mutex;

pub type Rat = BigRational;

/// Comparison by cross-multiplication. `num_rational`'s `Ord` recurses once
/// per continued-fraction term of the operands, which overflows the stack on
/// nearly-equal values with large denominators; every comparison of
/// potentially large rationals in this crate goes through here instead.
pub fn rat_cmp(a: &Rat, b: &Rat) -> std::cmp::Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

pub fn rat_le(a: &Rat, b: &Rat) -> bool {
    rat_cmp(a, b) != std::cmp::Ordering::Greater
}

pub fn rat_lt(a: &Rat, b: &Rat) -> bool {
    rat_cmp(a, b) == std::cmp::Ordering::Less
}

pub fn rat_min(a: Rat, b: Rat) -> Rat {
    if rat_le(&a, &b) {
        a
    } else {
        b
    }
}

pub fn rat_max(a: Rat, b: Rat) -> Rat {
    if rat_le(&a, &b) {
        b
    } else {
        a
    }
}

/// `2^e` as an exact rational, for any sign of `e`.
pub fn pow2(e: i64) -> Rat {
    let one = BigInt::one();
    if e >= 0 {
        Rat::from_integer(one << e as usize)
    } else {
        Rat::new(one.clone(), one << (-e) as usize)
    }
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Round-to-nearest conversion widened by a few ulps on each side, so the
/// returned pair is a (floating-point) enclosure of the rational.
pub fn rat_to_f64_bounds(x: &Rat) -> (f64, f64) {
    let v = x.to_f64().unwrap_or(f64::NAN);
    if !v.is_finite() {
        return (f64::MIN, f64::MAX);
    }
    let mut lo = v;
    let mut hi = v;
    for _ in 0..4 {
        lo = lo.next_down();
        hi = hi.next_up();
    }
    (lo, hi)
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering truncated to `digits` fractional digits.
pub fn decimal_string(x: &Rat, digits: u32) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (a * Rat::from_integer(scale.clone())).floor().to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    let sign = if neg { "-" } else { "" };
    format!("{sign}{int_part}.{frac}")
}

/// A closed interval with rational endpoints, `lo <= hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(rat_le(&lo, &hi), "inverted interval");
        RatInterval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certified sign: `Some(-1)`, `Some(0)` (exact zero point) or `Some(1)`;
    /// `None` when the interval straddles zero.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        RatInterval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        RatInterval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Self {
        RatInterval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let hi = rat_max(-self.lo.clone(), self.hi.clone());
            RatInterval::new(Rat::zero(), hi)
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let (lo, hi) = min_max4(cands);
        RatInterval::new(lo, hi)
    }

    pub fn mul_rat(&self, c: &Rat) -> Self {
        if c.is_negative() {
            RatInterval::new(&self.hi * c, &self.lo * c)
        } else {
            RatInterval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Division; caller must ensure `o` does not contain zero.
    pub fn div(&self, o: &Self) -> Self {
        debug_assert!(!o.contains_zero());
        let cands = [
            &self.lo / &o.lo,
            &self.lo / &o.hi,
            &self.hi / &o.lo,
            &self.hi / &o.hi,
        ];
        let (lo, hi) = min_max4(cands);
        RatInterval::new(lo, hi)
    }

    /// Integer power. For negative exponents the interval must exclude zero.
    pub fn pow_int(&self, e: i64) -> Self {
        if e == 0 {
            return RatInterval::point(Rat::one());
        }
        if e < 0 {
            let inv = RatInterval::point(Rat::one()).div(self);
            return inv.pow_int(-e);
        }
        let e = e as u32;
        if e % 2 == 1 || !self.lo.is_negative() {
            RatInterval::new(rat_pow(&self.lo, e), rat_pow(&self.hi, e))
        } else if !self.hi.is_positive() {
            RatInterval::new(rat_pow(&self.hi, e), rat_pow(&self.lo, e))
        } else {
            // even power of an interval straddling zero
            let hi = rat_max(rat_pow(&self.lo, e), rat_pow(&self.hi, e));
            RatInterval::new(Rat::zero(), hi)
        }
    }

    pub fn intersect(&self, o: &Self) -> Self {
        let lo = rat_max(self.lo.clone(), o.lo.clone());
        let hi = rat_min(self.hi.clone(), o.hi.clone());
        // both intervals enclose the same value, so they overlap
        RatInterval::new(lo, hi)
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.midpoint())
    }
}

fn min_max4(cands: [Rat; 4]) -> (Rat, Rat) {
    let [a, b, c, d] = cands;
    let (lo1, hi1) = if rat_le(&a, &b) { (a, b) } else { (b, a) };
    let (lo2, hi2) = if rat_le(&c, &d) { (c, d) } else { (d, c) };
    (rat_min(lo1, lo2), rat_max(hi1, hi2))
}

pub fn rat_pow(x: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Certified dyadic bounds `l <= x^{1/n} <= u` with `u - l <= 2^-prec`,
/// for `x >= 0`.
pub fn nth_root_bounds(x: &Rat, n: u32, prec: u32) -> (Rat, Rat) {
    debug_assert!(!x.is_negative() && n >= 1);
    if x.is_zero() {
        return (Rat::zero(), Rat::zero());
    }
    if n == 1 {
        return (x.clone(), x.clone());
    }
    let shift = (n as usize) * (prec as usize);
    let scaled: BigInt = (x.numer() << shift) / x.denom();
    let r = scaled.nth_root(n);
    let den: BigInt = BigInt::one() << prec as usize;
    (
        Rat::new(r.clone(), den.clone()),
        Rat::new(r + BigInt::one(), den),
    )
}

/// `atanh` partial-sum bounds for `|t| <= 1/3`.
fn atanh_bounds(t: &Rat, prec: u32) -> RatInterval {
    debug_assert!(rat_le(&t.abs(), &rat(1, 3)));
    let t2 = t * t;
    let mut sum = t.clone();
    let mut term = t.clone(); // t^{2k+1}
    let mut k: u64 = 0;
    let tol = pow2(-(prec as i64) - 1);
    loop {
        k += 1;
        term = &term * &t2;
        // tail after adding up to exponent 2k+1 is below |t|^{2k+3} * 9/8
        let tail_bound = term.abs() * &t2 * rat(9, 8);
        sum += &term / rat_int(2 * k as i64 + 1);
        if rat_le(&tail_bound, &tol) {
            return RatInterval::new(&sum - &tail_bound, &sum + &tail_bound);
        }
    }
}

static LN2_CACHE: Mutex<Option<(u32, RatInterval)>> = Mutex::new(None);

/// Certified enclosure of `ln 2` with width below `2^-prec`.
pub fn ln2_bounds(prec: u32) -> RatInterval {
    let mut cache = LN2_CACHE.lock().unwrap();
    if let Some((p, iv)) = cache.as_ref() {
        if *p >= prec {
            return iv.clone();
        }
    }
    // ln 2 = 2 atanh(1/3)
    let iv = atanh_bounds(&rat(1, 3), prec + 2).mul_rat(&rat_int(2));
    *cache = Some((prec, iv.clone()));
    iv
}

/// Certified enclosure of `ln x` for rational `x > 0`, width ~ `2^-prec`.
pub fn ln_bounds(x: &Rat, prec: u32) -> RatInterval {
    assert!(x.is_positive(), "ln of a non-positive rational");
    // write x = m * 2^e with m in [3/4, 3/2)
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut m = x * pow2(-e);
    while rat_le(&rat(3, 2), &m) {
        m = m * rat(1, 2);
        e += 1;
    }
    while rat_lt(&m, &rat(3, 4)) {
        m = m * rat_int(2);
        e -= 1;
    }
    let t = (&m - Rat::one()) / (&m + Rat::one());
    let inner_prec = prec + 4 + 64 - (e.unsigned_abs().leading_zeros() as u32).min(64);
    let mut iv = atanh_bounds(&t, inner_prec).mul_rat(&rat_int(2));
    if e != 0 {
        let l2 = ln2_bounds(inner_prec).mul_rat(&rat_int(e));
        iv = iv.add(&l2);
    }
    iv
}

/// Certified enclosure of `log2 x = ln x / ln 2` for rational `x > 0`.
pub fn log2_bounds(x: &Rat, prec: u32) -> RatInterval {
    let lx = ln_bounds(x, prec + 4);
    let l2 = ln2_bounds(prec + 4);
    lx.div(&l2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_signs() {
        assert_eq!(pow2(3), rat_int(8));
        assert_eq!(pow2(-2), rat(1, 4));
        assert_eq!(pow2(0), rat_int(1));
    }

    #[test]
    fn interval_mul_signs() {
        let a = RatInterval::new(rat_int(-2), rat_int(3));
        let b = RatInterval::new(rat_int(-1), rat_int(4));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat_int(-8));
        assert_eq!(p.hi, rat_int(12));
    }

    #[test]
    fn nth_root_encloses() {
        let (lo, hi) = nth_root_bounds(&rat_int(2), 2, 80);
        assert!(&lo * &lo <= rat_int(2));
        assert!(&hi * &hi >= rat_int(2));
        assert!(&hi - &lo <= pow2(-80));

        let (lo, hi) = nth_root_bounds(&rat(27, 8), 3, 60);
        assert!(lo <= rat(3, 2) && rat(3, 2) <= hi);
    }

    #[test]
    fn ln_bounds_sanity() {
        // ln 2 = 0.693147180559945...
        let iv = ln2_bounds(100);
        let lo = rat_to_f64(&iv.lo);
        let hi = rat_to_f64(&iv.hi);
        assert!(lo <= 0.6931471805599454 && 0.6931471805599452 <= hi);

        // ln 10 = 2.302585092994046...
        let iv = ln_bounds(&rat_int(10), 100);
        assert!(rat_to_f64(&iv.lo) <= 2.302585092994046);
        assert!(rat_to_f64(&iv.hi) >= 2.302585092994045);
        assert!(iv.width() <= pow2(-90));

        // ln(1/3) = -ln 3
        let iv = ln_bounds(&rat(1, 3), 80);
        assert!(rat_to_f64(&iv.midpoint()) + 1.0986122886681098 < 1e-12);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(1, 8), 4), "0.1250");
        assert_eq!(decimal_string(&rat(-22, 7), 3), "-3.142");
    }

    #[test]
    fn interval_pow_int() {
        let a = RatInterval::new(rat_int(-2), rat_int(3));
        let sq = a.pow_int(2);
        assert_eq!(sq.lo, rat_int(0));
        assert_eq!(sq.hi, rat_int(9));
        let inv = RatInterval::new(rat_int(2), rat_int(4)).pow_int(-1);
        assert_eq!(inv.lo, rat(1, 4));
        assert_eq!(inv.hi, rat(1, 2));
    }
}
