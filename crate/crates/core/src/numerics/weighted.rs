//! Weight vectors and the weighted quasi-norms.
//!
//! A weight vector is a tuple of positive rationals summing to 1. The
//! associated quasi-norm of a vector is `max_i |x_i|^{1/w_i}`; its unit ball
//! is an axis-aligned box. Values of the norm are kept in a max-of-powers
//! form so that comparisons between norms of integer vectors stay exact.

use super::interval::{ln_bounds, Rat, RatInterval};
use super::real::CertReal;
use crate::error::NumError;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    weights: Vec<Rat>,
}

impl WeightVector {
    pub fn new(weights: Vec<Rat>) -> Result<Self, NumError> {
        if weights.is_empty() {
            return Err(NumError::BadWeights("empty weight vector".into()));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(NumError::BadWeights("weights must be strictly positive".into()));
        }
        let sum: Rat = weights.iter().sum();
        if !sum.is_one() {
            return Err(NumError::BadWeights(format!("weights sum to {sum}, not 1")));
        }
        Ok(WeightVector { weights })
    }

    pub fn uniform(dim: usize) -> Self {
        assert!(dim > 0);
        let w = Rat::new(BigInt::one(), BigInt::from(dim));
        WeightVector { weights: vec![w; dim] }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.weights[i]
    }

    /// `1 / w_i`, the exponent applied to the i-th coordinate.
    pub fn inv(&self, i: usize) -> Rat {
        self.weights[i].recip()
    }

    /// Largest weight.
    pub fn rho(&self) -> Rat {
        self.weights.iter().max().unwrap().clone()
    }

    /// Smallest weight.
    pub fn delta(&self) -> Rat {
        self.weights.iter().min().unwrap().clone()
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|w| w == &self.weights[0])
    }
}

/// A nonnegative value of the form `max_i base_i^{exp_i}` with certified
/// bases and exact rational exponents. A single term with exponent 1 carries
/// plain values (products, distances).
#[derive(Clone, Debug)]
pub struct WeightedValue {
    terms: Vec<(CertReal, Rat)>,
}

impl WeightedValue {
    pub fn zero() -> Self {
        WeightedValue { terms: vec![(CertReal::zero(), Rat::one())] }
    }

    pub fn from_cert(value: CertReal) -> Self {
        WeightedValue { terms: vec![(value, Rat::one())] }
    }

    pub fn from_rat(value: Rat) -> Self {
        debug_assert!(!value.is_negative());
        Self::from_cert(CertReal::from_rat(value))
    }

    pub fn from_terms(terms: Vec<(CertReal, Rat)>) -> Self {
        debug_assert!(!terms.is_empty());
        WeightedValue { terms }
    }

    pub fn terms(&self) -> &[(CertReal, Rat)] {
        &self.terms
    }

    /// Index of a maximal term. An undecided comparison at the cap is
    /// treated as a tie, keeping the earlier term.
    fn leader(&self, cap: u32) -> usize {
        let mut best = 0;
        for i in 1..self.terms.len() {
            let a = self.term_value(best);
            let b = self.term_value(i);
            if let Ok(Ordering::Less) = a.compare_cap(&b, cap) {
                best = i;
            }
        }
        best
    }

    fn term_value(&self, i: usize) -> CertReal {
        let (base, exp) = &self.terms[i];
        base.pow(exp.clone())
    }

    /// The value as a certified real (the maximal term).
    pub fn value_cert(&self) -> CertReal {
        self.term_value(self.leader(super::real::DEFAULT_CAP))
    }

    /// True when the value is syntactically zero (all bases exact zero).
    pub fn is_zero_exact(&self) -> bool {
        self.terms.iter().all(|(b, _)| b.is_zero_rat())
    }

    pub fn compare_cap(&self, other: &WeightedValue, cap: u32) -> Result<Ordering, NumError> {
        if self.is_zero_exact() && other.is_zero_exact() {
            return Ok(Ordering::Equal);
        }
        let a = self.term_value(self.leader(cap));
        let b = other.term_value(other.leader(cap));
        a.compare_cap(&b, cap)
    }

    pub fn compare(&self, other: &WeightedValue) -> Result<Ordering, NumError> {
        self.compare_cap(other, super::real::DEFAULT_CAP)
    }

    pub fn compare_rat(&self, r: &Rat) -> Result<Ordering, NumError> {
        self.compare(&WeightedValue::from_rat(r.clone().abs()))
    }

    /// Certified enclosure of the natural logarithm; `None` encodes the
    /// `-inf` sentinel for a zero value.
    pub fn ln_interval(&self, prec: u32) -> Result<Option<RatInterval>, NumError> {
        if self.is_zero_exact() {
            return Ok(None);
        }
        let lead = self.leader(super::real::DEFAULT_CAP);
        let (base, exp) = &self.terms[lead];
        if let Some(r) = base.as_rat() {
            if r.is_zero() {
                return Ok(None);
            }
            return Ok(Some(ln_bounds(&r.abs(), prec).mul_rat(exp)));
        }
        // refine the base until it is bounded away from zero
        let mut p = prec.max(32);
        loop {
            let iv = base.enclosure(p)?;
            if iv.lo.is_positive() {
                let lo = ln_bounds(&iv.lo, prec);
                let hi = ln_bounds(&iv.hi, prec);
                return Ok(Some(RatInterval::new(lo.lo, hi.hi).mul_rat(exp)));
            }
            if p >= 1 << 16 {
                return Err(NumError::PrecisionExhausted {
                    cap: p,
                    lhs: format!("{base:?}"),
                    rhs: "0".into(),
                });
            }
            p *= 2;
        }
    }

    /// Natural log as a float midpoint, `-inf` for zero.
    pub fn ln_f64(&self) -> f64 {
        match self.ln_interval(64) {
            Ok(Some(iv)) => iv.to_f64(),
            Ok(None) => f64::NEG_INFINITY,
            Err(_) => f64::NAN,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value_cert().to_f64()
    }
}

/// `max_i |x_i|^{1/w_i}` for certified coordinates.
pub fn weighted_norm(x: &[CertReal], w: &WeightVector) -> Result<WeightedValue, NumError> {
    if x.len() != w.dim() {
        return Err(NumError::DimensionMismatch(format!(
            "vector has dimension {}, weights {}",
            x.len(),
            w.dim()
        )));
    }
    let terms = x
        .iter()
        .enumerate()
        .map(|(i, xi)| (xi.abs(), w.inv(i)))
        .collect();
    Ok(WeightedValue::from_terms(terms))
}

/// Weighted norm of an integer vector; all comparisons stay exact.
pub fn weighted_norm_int(x: &[BigInt], w: &WeightVector) -> Result<WeightedValue, NumError> {
    let certs: Vec<CertReal> = x.iter().map(CertReal::from).collect();
    weighted_norm(&certs, w)
}

pub fn weighted_norm_rat(x: &[Rat], w: &WeightVector) -> Result<WeightedValue, NumError> {
    let certs: Vec<CertReal> = x.iter().map(|r| CertReal::from_rat(r.clone())).collect();
    weighted_norm(&certs, w)
}

/// The multiplicative quantities `Pi_+(q) = prod max(1, |q_j|)` and
/// `Pi(y) = prod |y_i|`.
pub fn mult_norms(q: &[BigInt], y: &[CertReal]) -> (WeightedValue, WeightedValue) {
    let mut plus = Rat::one();
    for qi in q {
        let a = qi.abs();
        if a > BigInt::one() {
            plus *= Rat::from_integer(a);
        }
    }
    let mut pi = CertReal::one();
    for yi in y {
        pi = pi * yi.abs();
    }
    (WeightedValue::from_rat(plus), WeightedValue::from_cert(pi))
}
