//! Certified real numbers: exact rationals and refinable constants.
//!
//! A `CertReal` is either an exact rational or an expression over refinable
//! leaves (square roots of rationals, the factorial-series constants). Every
//! value can produce a rational enclosure of any requested width; successive
//! enclosures of the same node are nested because the narrowest one seen so
//! far is cached and intersected into each new result.

use super::interval::{pow2, rat_cmp, rat_le, rat_lt, rat_int, rat_pow, nth_root_bounds, Rat, RatInterval};
use super::powprod::PowProd;
use crate::error::NumError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

/// Default comparison cap: enclosures are refined down to width `2^-256`
/// before a comparison is reported as undecidable.
pub const DEFAULT_CAP: u32 = 256;

/// Hard ceiling on working precision inside `enclosure`, in bits.
const MAX_WORK: u32 = 1 << 16;

#[derive(Clone)]
pub struct CertReal {
    node: Arc<Node>,
}

struct Node {
    kind: Kind,
    cache: Mutex<Option<RatInterval>>,
}

enum Kind {
    Rat(Rat),
    Sqrt(CertReal),
    /// The base-`b` factorial series `sum_{k >= 1} b^{-k!}`.
    Liouville { base: u64 },
    Add(CertReal, CertReal),
    Sub(CertReal, CertReal),
    Mul(CertReal, CertReal),
    Div(CertReal, CertReal),
    Neg(CertReal),
    Abs(CertReal),
    /// Rational power; the base must be nonnegative unless the exponent is
    /// an integer.
    Pow(CertReal, Rat),
}

enum EvalOutcome {
    Done(RatInterval),
    /// Needs a finer working precision (division straddling zero, etc.).
    Pending,
}

impl CertReal {
    fn wrap(kind: Kind) -> Self {
        CertReal {
            node: Arc::new(Node {
                kind,
                cache: Mutex::new(None),
            }),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::wrap(Kind::Rat(r))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    /// Square root of a nonnegative value. Perfect squares of rationals fold
    /// to an exact rational.
    pub fn sqrt(x: CertReal) -> Self {
        if let Some(r) = x.as_rat() {
            assert!(!r.is_negative(), "sqrt of a negative rational");
            let ns = r.numer().sqrt();
            let ds = r.denom().sqrt();
            if &ns * &ns == *r.numer() && &ds * &ds == *r.denom() {
                return Self::from_rat(Rat::new(ns, ds));
            }
        }
        Self::wrap(Kind::Sqrt(x))
    }

    pub fn sqrt_rat(r: Rat) -> Self {
        Self::sqrt(Self::from_rat(r))
    }

    /// The golden ratio `(1 + sqrt 5) / 2`.
    pub fn phi() -> Self {
        (Self::one() + Self::sqrt_rat(rat_int(5))) / Self::from_int(2)
    }

    /// `sum_{k >= 1} base^{-k!}` for `base >= 2`.
    pub fn liouville(base: u64) -> Self {
        assert!(base >= 2, "liouville base must be at least 2");
        Self::wrap(Kind::Liouville { base })
    }

    pub fn abs(&self) -> Self {
        if let Some(r) = self.as_rat() {
            return Self::from_rat(r.abs());
        }
        Self::wrap(Kind::Abs(self.clone()))
    }

    /// Rational power. Negative bases are only allowed with integer
    /// exponents; the violation surfaces as an evaluation error.
    pub fn pow(&self, e: Rat) -> Self {
        if e.is_zero() {
            return Self::one();
        }
        if e.is_one() {
            return self.clone();
        }
        if let Some(r) = self.as_rat() {
            if e.is_integer() {
                if let Some(k) = e.to_integer().to_i64() {
                    if k.unsigned_abs() <= 4096 {
                        let p = rat_pow(r, k.unsigned_abs() as u32);
                        if k >= 0 {
                            return Self::from_rat(p);
                        }
                        if !p.is_zero() {
                            return Self::from_rat(p.recip());
                        }
                    }
                }
            }
            if r.is_zero() && e.is_positive() {
                return Self::zero();
            }
            // perfect-power folding: r^(p/q) rational when r^p is a perfect
            // q-th power
            if !e.is_integer() && !r.is_negative() && !r.is_zero() {
                if let (Some(p), Some(q)) = (e.numer().to_i64(), e.denom().to_u32()) {
                    if p.unsigned_abs() <= 4096 && q <= 64 {
                        let mut t = rat_pow(r, p.unsigned_abs() as u32);
                        if p < 0 {
                            t = t.recip();
                        }
                        let rn = t.numer().nth_root(q);
                        let rd = t.denom().nth_root(q);
                        if rat_pow(&Rat::from_integer(rn.clone()), q) == Rat::from_integer(t.numer().clone())
                            && rat_pow(&Rat::from_integer(rd.clone()), q) == Rat::from_integer(t.denom().clone())
                        {
                            return Self::from_rat(Rat::new(rn, rd));
                        }
                    }
                }
            }
        }
        Self::wrap(Kind::Pow(self.clone(), e))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match &self.node.kind {
            Kind::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// The base when this value is exactly a factorial-series constant.
    pub fn as_liouville(&self) -> Option<u64> {
        match &self.node.kind {
            Kind::Liouville { base } => Some(*base),
            _ => None,
        }
    }

    pub fn is_zero_rat(&self) -> bool {
        self.as_rat().map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Multiplicative normal form, when the expression is a signed product
    /// of rational powers of positive rationals.
    pub fn as_pow_prod(&self) -> Option<PowProd> {
        match &self.node.kind {
            Kind::Rat(r) => Some(PowProd::from_rat(r)),
            Kind::Sqrt(x) => x.as_pow_prod()?.pow(&Rat::new(BigInt::one(), BigInt::from(2))),
            Kind::Mul(a, b) => Some(a.as_pow_prod()?.mul(&b.as_pow_prod()?)),
            Kind::Div(a, b) => a.as_pow_prod()?.div(&b.as_pow_prod()?),
            Kind::Neg(x) => Some(x.as_pow_prod()?.neg()),
            Kind::Abs(x) => Some(x.as_pow_prod()?.abs()),
            Kind::Pow(x, e) => x.as_pow_prod()?.pow(e),
            Kind::Liouville { .. } | Kind::Add(..) | Kind::Sub(..) => None,
        }
    }

    fn eval_raw(&self, work: u32) -> Result<EvalOutcome, NumError> {
        use EvalOutcome::*;
        let iv = match &self.node.kind {
            Kind::Rat(r) => RatInterval::point(r.clone()),
            Kind::Sqrt(x) => {
                let xi = match x.eval_raw(work)? {
                    Done(iv) => iv,
                    Pending => return Ok(Pending),
                };
                if xi.hi.is_negative() {
                    return Err(NumError::NegativeBase {
                        value: format!("{x:?}"),
                    });
                }
                let lo = if xi.lo.is_negative() { Rat::zero() } else { xi.lo };
                let (l, _) = nth_root_bounds(&lo, 2, work);
                let (_, h) = nth_root_bounds(&xi.hi, 2, work);
                RatInterval::new(l, h)
            }
            Kind::Liouville { base } => liouville_enclosure(*base, work),
            Kind::Add(a, b) => {
                let (ia, ib) = match (a.eval_raw(work)?, b.eval_raw(work)?) {
                    (Done(x), Done(y)) => (x, y),
                    _ => return Ok(Pending),
                };
                ia.add(&ib)
            }
            Kind::Sub(a, b) => {
                let (ia, ib) = match (a.eval_raw(work)?, b.eval_raw(work)?) {
                    (Done(x), Done(y)) => (x, y),
                    _ => return Ok(Pending),
                };
                ia.sub(&ib)
            }
            Kind::Mul(a, b) => {
                let (ia, ib) = match (a.eval_raw(work)?, b.eval_raw(work)?) {
                    (Done(x), Done(y)) => (x, y),
                    _ => return Ok(Pending),
                };
                ia.mul(&ib)
            }
            Kind::Div(a, b) => {
                let (ia, ib) = match (a.eval_raw(work)?, b.eval_raw(work)?) {
                    (Done(x), Done(y)) => (x, y),
                    _ => return Ok(Pending),
                };
                if ib.is_point() && ib.lo.is_zero() {
                    return Err(NumError::DivisionByZero);
                }
                if ib.contains_zero() {
                    return Ok(Pending);
                }
                ia.div(&ib)
            }
            Kind::Neg(x) => match x.eval_raw(work)? {
                Done(iv) => iv.neg(),
                Pending => return Ok(Pending),
            },
            Kind::Abs(x) => match x.eval_raw(work)? {
                Done(iv) => iv.abs(),
                Pending => return Ok(Pending),
            },
            Kind::Pow(x, e) => {
                let xi = match x.eval_raw(work)? {
                    Done(iv) => iv,
                    Pending => return Ok(Pending),
                };
                let p = e
                    .numer()
                    .to_i64()
                    .ok_or_else(|| NumError::ExponentOverflow(e.to_string()))?;
                let q = e
                    .denom()
                    .to_u32()
                    .ok_or_else(|| NumError::ExponentOverflow(e.to_string()))?;
                if q == 1 {
                    if p < 0 && xi.contains_zero() {
                        if xi.is_point() && xi.lo.is_zero() {
                            return Err(NumError::DivisionByZero);
                        }
                        return Ok(Pending);
                    }
                    xi.pow_int(p)
                } else {
                    if xi.hi.is_negative() {
                        return Err(NumError::NegativeBase {
                            value: format!("{x:?}"),
                        });
                    }
                    let lo = if xi.lo.is_negative() { Rat::zero() } else { xi.lo.clone() };
                    let base = RatInterval::new(lo, xi.hi.clone());
                    if p < 0 && base.contains_zero() {
                        if base.is_point() && base.lo.is_zero() {
                            return Err(NumError::DivisionByZero);
                        }
                        return Ok(Pending);
                    }
                    let powered = base.pow_int(p);
                    let (l, _) = nth_root_bounds(&powered.lo, q, work);
                    let (_, h) = nth_root_bounds(&powered.hi, q, work);
                    RatInterval::new(l, h)
                }
            }
        };
        Ok(Done(iv))
    }

    /// Certified enclosure with width at most `2^-width_exp`. Successive
    /// calls return nested intervals.
    pub fn enclosure(&self, width_exp: u32) -> Result<RatInterval, NumError> {
        if let Some(r) = self.as_rat() {
            return Ok(RatInterval::point(r.clone()));
        }
        {
            let cache = self.node.cache.lock().unwrap();
            if let Some(iv) = cache.as_ref() {
                if rat_le(&iv.width(), &pow2(-(width_exp as i64))) {
                    return Ok(iv.clone());
                }
            }
        }
        let target = pow2(-(width_exp as i64));
        let mut work = width_exp.saturating_add(16);
        loop {
            match self.eval_raw(work)? {
                EvalOutcome::Done(iv) => {
                    let merged = {
                        let mut cache = self.node.cache.lock().unwrap();
                        let merged = match cache.as_ref() {
                            Some(prev) => prev.intersect(&iv),
                            None => iv,
                        };
                        *cache = Some(merged.clone());
                        merged
                    };
                    if rat_le(&merged.width(), &target) {
                        return Ok(merged);
                    }
                }
                EvalOutcome::Pending => {}
            }
            if work >= MAX_WORK {
                return Err(NumError::PrecisionExhausted {
                    cap: work,
                    lhs: format!("{self:?}"),
                    rhs: String::new(),
                });
            }
            work = work.saturating_mul(2);
        }
    }

    /// Structural identity of the defining expressions (sufficient but not
    /// necessary for value equality).
    pub fn structural_eq(&self, other: &CertReal) -> bool {
        if Arc::ptr_eq(&self.node, &other.node) {
            return true;
        }
        match (&self.node.kind, &other.node.kind) {
            (Kind::Rat(a), Kind::Rat(b)) => a == b,
            (Kind::Sqrt(a), Kind::Sqrt(b)) | (Kind::Neg(a), Kind::Neg(b)) | (Kind::Abs(a), Kind::Abs(b)) => {
                a.structural_eq(b)
            }
            (Kind::Liouville { base: a }, Kind::Liouville { base: b }) => a == b,
            (Kind::Add(a, b), Kind::Add(c, d))
            | (Kind::Sub(a, b), Kind::Sub(c, d))
            | (Kind::Mul(a, b), Kind::Mul(c, d))
            | (Kind::Div(a, b), Kind::Div(c, d)) => a.structural_eq(c) && b.structural_eq(d),
            (Kind::Pow(a, e), Kind::Pow(b, f)) => e == f && a.structural_eq(b),
            _ => false,
        }
    }

    /// Exact trichotomy where possible, otherwise decided by refining both
    /// enclosures down to width `2^-cap`.
    pub fn compare_cap(&self, other: &CertReal, cap: u32) -> Result<Ordering, NumError> {
        if let (Some(a), Some(b)) = (self.as_rat(), other.as_rat()) {
            return Ok(rat_cmp(a, b));
        }
        if self.structural_eq(other) {
            return Ok(Ordering::Equal);
        }
        if let (Some(pa), Some(pb)) = (self.as_pow_prod(), other.as_pow_prod()) {
            if let Some(ord) = PowProd::compare(&pa, &pb, cap) {
                return Ok(ord);
            }
            return Err(self.undecided(other, cap));
        }
        let mut prec = 64u32;
        loop {
            let ia = self.enclosure(prec)?;
            let ib = other.enclosure(prec)?;
            if rat_lt(&ia.hi, &ib.lo) {
                return Ok(Ordering::Less);
            }
            if rat_lt(&ib.hi, &ia.lo) {
                return Ok(Ordering::Greater);
            }
            if ia.is_point() && ib.is_point() {
                return Ok(rat_cmp(&ia.lo, &ib.lo));
            }
            if prec >= cap {
                return Err(self.undecided(other, cap));
            }
            prec = (prec * 2).min(cap);
        }
    }

    pub fn compare(&self, other: &CertReal) -> Result<Ordering, NumError> {
        self.compare_cap(other, DEFAULT_CAP)
    }

    pub fn compare_rat(&self, r: &Rat) -> Result<Ordering, NumError> {
        self.compare(&CertReal::from_rat(r.clone()))
    }

    /// Certified sign with the default cap.
    pub fn sign(&self) -> Result<i8, NumError> {
        match self.compare_rat(&Rat::zero())? {
            Ordering::Less => Ok(-1),
            Ordering::Equal => Ok(0),
            Ordering::Greater => Ok(1),
        }
    }

    fn undecided(&self, other: &CertReal, cap: u32) -> NumError {
        NumError::PrecisionExhausted {
            cap,
            lhs: format!("{self:?}"),
            rhs: format!("{other:?}"),
        }
    }

    /// Midpoint of a reasonably tight enclosure, for reporting only.
    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rat() {
            return super::interval::rat_to_f64(r);
        }
        match self.enclosure(96) {
            Ok(iv) => iv.to_f64(),
            Err(_) => f64::NAN,
        }
    }

    /// All integers whose distance to this value could be minimal: one
    /// candidate generically, two at (possible) half-integer ties.
    pub fn nearest_int_candidates(&self, cap: u32) -> Result<Vec<BigInt>, NumError> {
        if let Some(r) = self.as_rat() {
            let twice = r * rat_int(2);
            if twice.is_integer() && twice.to_integer().is_odd() {
                let f = r.floor().to_integer();
                return Ok(vec![f.clone(), f + BigInt::one()]);
            }
            return Ok(vec![round_rat(r)]);
        }
        let mut prec = 8u32;
        loop {
            let iv = self.enclosure(prec)?;
            let lo_c = round_rat(&iv.lo);
            let hi_c = round_rat(&iv.hi);
            if lo_c == hi_c {
                return Ok(vec![lo_c]);
            }
            if &hi_c - &lo_c == BigInt::one() && rat_lt(&iv.width(), &rat_int(1)) {
                // could be a genuine half-integer tie; keep both candidates
                if prec >= cap {
                    return Ok(vec![lo_c, hi_c]);
                }
            }
            if prec >= cap {
                return Ok(vec![lo_c, hi_c]);
            }
            prec = (prec * 4).min(cap);
        }
    }
}

/// Round half away from... to nearest integer, ties toward +infinity.
fn round_rat(r: &Rat) -> BigInt {
    (r + Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

fn liouville_enclosure(base: u64, work: u32) -> RatInterval {
    // tail after K terms: sum_{j>K} b^{-j!} <= 2 b^{-(K+1)!}
    let b = BigInt::from(base);
    let bits_per = (base as f64).log2();
    let mut k: u64 = 1;
    let mut fact: u64 = 1;
    let mut sum = Rat::zero();
    loop {
        fact *= k;
        sum += Rat::new(BigInt::one(), pow_bigint(&b, fact));
        let next_fact = fact * (k + 1);
        let tail_bits = bits_per * next_fact as f64;
        if tail_bits > (work as f64) + 2.0 {
            let tail = Rat::new(BigInt::from(2), pow_bigint(&b, next_fact));
            return RatInterval::new(sum.clone(), sum + tail);
        }
        k += 1;
    }
}

fn pow_bigint(b: &BigInt, e: u64) -> BigInt {
    if *b == BigInt::from(2) {
        return BigInt::one() << e as usize;
    }
    b.pow(e as u32)
}

impl fmt::Debug for CertReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node.kind {
            Kind::Rat(r) => write!(f, "{r}"),
            Kind::Sqrt(x) => write!(f, "sqrt({x:?})"),
            Kind::Liouville { base } => write!(f, "liouville({base})"),
            Kind::Add(a, b) => write!(f, "({a:?} + {b:?})"),
            Kind::Sub(a, b) => write!(f, "({a:?} - {b:?})"),
            Kind::Mul(a, b) => write!(f, "({a:?} * {b:?})"),
            Kind::Div(a, b) => write!(f, "({a:?} / {b:?})"),
            Kind::Neg(x) => write!(f, "-({x:?})"),
            Kind::Abs(x) => write!(f, "|{x:?}|"),
            Kind::Pow(x, e) => write!(f, "({x:?})^({e})"),
        }
    }
}

// Constructors fold exact rationals and algebraic identities (x + 0, x * 1,
// 0 / x, ...) so that elimination-style pipelines keep a normal form that
// exact comparison can still recognise.
impl std::ops::Add for CertReal {
    type Output = CertReal;
    fn add(self, rhs: CertReal) -> CertReal {
        match (self.as_rat(), rhs.as_rat()) {
            (Some(a), Some(b)) => CertReal::from_rat(a + b),
            (Some(a), None) if a.is_zero() => rhs,
            (None, Some(b)) if b.is_zero() => self,
            _ => CertReal::wrap(Kind::Add(self, rhs)),
        }
    }
}

impl std::ops::Sub for CertReal {
    type Output = CertReal;
    fn sub(self, rhs: CertReal) -> CertReal {
        match (self.as_rat(), rhs.as_rat()) {
            (Some(a), Some(b)) => CertReal::from_rat(a - b),
            (Some(a), None) if a.is_zero() => -rhs,
            (None, Some(b)) if b.is_zero() => self,
            _ => CertReal::wrap(Kind::Sub(self, rhs)),
        }
    }
}

impl std::ops::Mul for CertReal {
    type Output = CertReal;
    fn mul(self, rhs: CertReal) -> CertReal {
        match (self.as_rat(), rhs.as_rat()) {
            (Some(a), Some(b)) => CertReal::from_rat(a * b),
            (Some(a), None) => {
                if a.is_zero() {
                    CertReal::zero()
                } else if a.is_one() {
                    rhs
                } else {
                    CertReal::wrap(Kind::Mul(self, rhs))
                }
            }
            (None, Some(b)) => {
                if b.is_zero() {
                    CertReal::zero()
                } else if b.is_one() {
                    self
                } else {
                    CertReal::wrap(Kind::Mul(self, rhs))
                }
            }
            _ => CertReal::wrap(Kind::Mul(self, rhs)),
        }
    }
}

impl std::ops::Div for CertReal {
    type Output = CertReal;
    fn div(self, rhs: CertReal) -> CertReal {
        match (self.as_rat(), rhs.as_rat()) {
            (Some(a), Some(b)) if !b.is_zero() => CertReal::from_rat(a / b),
            // 0 / x = 0 whenever the quotient is defined at all
            (Some(a), None) if a.is_zero() => CertReal::zero(),
            (None, Some(b)) if b.is_one() => self,
            _ => CertReal::wrap(Kind::Div(self, rhs)),
        }
    }
}

macro_rules! ref_binary_op {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &CertReal {
            type Output = CertReal;
            fn $method(self, rhs: &CertReal) -> CertReal {
                <CertReal as std::ops::$trait>::$method(self.clone(), rhs.clone())
            }
        }
    };
}

ref_binary_op!(Add, add);
ref_binary_op!(Sub, sub);
ref_binary_op!(Mul, mul);
ref_binary_op!(Div, div);

impl std::ops::Neg for CertReal {
    type Output = CertReal;
    fn neg(self) -> CertReal {
        if let Some(r) = self.as_rat() {
            return CertReal::from_rat(-r.clone());
        }
        CertReal::wrap(Kind::Neg(self))
    }
}

impl std::ops::Neg for &CertReal {
    type Output = CertReal;
    fn neg(self) -> CertReal {
        -self.clone()
    }
}

impl From<Rat> for CertReal {
    fn from(r: Rat) -> Self {
        CertReal::from_rat(r)
    }
}

impl From<i64> for CertReal {
    fn from(n: i64) -> Self {
        CertReal::from_int(n)
    }
}

impl From<&BigInt> for CertReal {
    fn from(n: &BigInt) -> Self {
        CertReal::from_rat(Rat::from_integer(n.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::interval::rat;

    #[test]
    fn rational_folding() {
        let x = CertReal::from_rat(rat(1, 3)) + CertReal::from_rat(rat(1, 6));
        assert_eq!(x.as_rat(), Some(&rat(1, 2)));
        let y = CertReal::sqrt_rat(rat(9, 4));
        assert_eq!(y.as_rat(), Some(&rat(3, 2)));
    }

    #[test]
    fn sqrt2_enclosure_nested() {
        let s = CertReal::sqrt_rat(rat_int(2));
        let a = s.enclosure(40).unwrap();
        let b = s.enclosure(120).unwrap();
        assert!(b.lo >= a.lo && b.hi <= a.hi, "enclosures must be nested");
        assert!(&b.lo * &b.lo <= rat_int(2));
        assert!(&b.hi * &b.hi >= rat_int(2));
    }

    #[test]
    fn phi_value() {
        let phi = CertReal::phi();
        let iv = phi.enclosure(80).unwrap();
        let mid = super::super::interval::rat_to_f64(&iv.midpoint());
        assert!((mid - 1.618033988749895).abs() < 1e-12);
        // phi^2 - phi - 1 = 0, checkable to any enclosure width
        let d = &phi * &phi - (&phi + &CertReal::one());
        let iv = d.enclosure(200).unwrap();
        assert!(iv.contains_zero());
        assert!(iv.width() <= pow2(-200));
    }

    #[test]
    fn liouville_enclosure_tail() {
        let l = CertReal::liouville(2);
        let iv = l.enclosure(100).unwrap();
        // 2^-1 + 2^-2 + 2^-6 + 2^-24 = 0.765625059604644775390625
        let lo = super::super::interval::rat_to_f64(&iv.lo);
        assert!((lo - 0.7656250596046448).abs() < 1e-9);
        assert!(iv.width() <= pow2(-100));
    }

    #[test]
    fn compare_exact_and_refined() {
        let s2 = CertReal::sqrt_rat(rat_int(2));
        let s8 = CertReal::sqrt_rat(rat_int(8));
        let two_s2 = CertReal::from_int(2) * s2.clone();
        // sqrt 8 = 2 sqrt 2, equal via pow-prod normal form
        assert_eq!(s8.compare(&two_s2).unwrap(), Ordering::Equal);
        assert_eq!(
            s2.compare_rat(&rat(141421356, 100000000)).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            s2.compare_rat(&rat(141421357, 100000000)).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn nearest_int_ties() {
        let half = CertReal::from_rat(rat(7, 2));
        let c = half.nearest_int_candidates(DEFAULT_CAP).unwrap();
        assert_eq!(c, vec![BigInt::from(3), BigInt::from(4)]);
        let s2 = CertReal::sqrt_rat(rat_int(2));
        let c = s2.nearest_int_candidates(DEFAULT_CAP).unwrap();
        assert_eq!(c, vec![BigInt::from(1)]);
    }

    #[test]
    fn division_by_zero_detected() {
        let z = CertReal::sqrt_rat(rat_int(2)) - CertReal::sqrt_rat(rat_int(2));
        // the expression is exactly zero but not syntactically rational;
        // division by it must exhaust precision rather than mis-decide
        let q = CertReal::one() / z;
        assert!(q.enclosure(64).is_err());
    }

    #[test]
    fn pow_rational_exponent() {
        let x = CertReal::from_int(4).pow(rat(3, 2));
        assert_eq!(x.compare_rat(&rat_int(8)).unwrap(), Ordering::Equal);
        let y = CertReal::from_int(2).pow(rat(1, 2));
        let s2 = CertReal::sqrt_rat(rat_int(2));
        assert_eq!(y.compare(&s2).unwrap(), Ordering::Equal);
    }
}
