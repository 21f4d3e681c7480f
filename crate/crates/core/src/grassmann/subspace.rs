//! Rational projective subspaces, heights, and projective distances.

use super::multivector::Multivector;
use crate::error::NumError;
use crate::numerics::{CertReal, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A point of projective space lifted to `alpha' = (1, alpha)`.
#[derive(Clone, Debug)]
pub struct LiftedPoint {
    pub alpha: Vec<CertReal>,
}

impl LiftedPoint {
    pub fn new(alpha: Vec<CertReal>) -> Self {
        LiftedPoint { alpha }
    }

    /// `(1, alpha)` as a grade-1 multivector over `R^{n+1}`.
    pub fn lift(&self) -> Multivector {
        let mut v = Vec::with_capacity(self.alpha.len() + 1);
        v.push(CertReal::one());
        v.extend(self.alpha.iter().cloned());
        Multivector::from_vector(&v)
    }
}

/// A `d`-dimensional rational projective subspace with primitive integer
/// Pluecker coordinates and its Weil height.
#[derive(Clone, Debug)]
pub struct RationalSubspace {
    pub d: usize,
    pub pluecker: Vec<BigInt>,
    pub ambient: usize,
}

impl RationalSubspace {
    /// Construct from a rational basis of the `(d+1)`-dimensional lift in
    /// `Q^{n+1}`. Returns `None` when the basis is linearly dependent.
    pub fn from_basis(basis: &[Vec<Rat>]) -> Option<Self> {
        let dp1 = basis.len();
        assert!(dp1 >= 1);
        let np1 = basis[0].len();
        assert!(basis.iter().all(|b| b.len() == np1));
        let mut acc = Multivector::from_vector(
            &basis[0].iter().map(|x| CertReal::from_rat(x.clone())).collect::<Vec<_>>(),
        );
        for b in &basis[1..] {
            let v = Multivector::from_vector(
                &b.iter().map(|x| CertReal::from_rat(x.clone())).collect::<Vec<_>>(),
            );
            acc = acc.wedge(&v);
        }
        let coeffs = acc.as_rational().expect("rational wedge");
        if coeffs.iter().all(|c| c.is_zero()) {
            return None;
        }
        Some(Self::from_rational_pluecker(np1 - 1, dp1 - 1, &coeffs))
    }

    /// Normalize rational Pluecker coordinates to a primitive integer vector
    /// with positive leading coefficient.
    pub fn from_rational_pluecker(ambient: usize, d: usize, coeffs: &[Rat]) -> Self {
        let mut lcm = BigInt::one();
        for c in coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut gcd = BigInt::zero();
        for x in &ints {
            gcd = gcd.gcd(x);
        }
        if !gcd.is_zero() && !gcd.is_one() {
            for x in ints.iter_mut() {
                *x = &*x / &gcd;
            }
        }
        if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in ints.iter_mut() {
                    *x = -&*x;
                }
            }
        }
        RationalSubspace { d, pluecker: ints, ambient }
    }

    /// Weil height: sup-norm of the primitive coordinates.
    pub fn height(&self) -> BigInt {
        self.pluecker.iter().map(|x| x.abs()).max().unwrap()
    }

    pub fn pluecker_multivector(&self) -> Multivector {
        Multivector::from_int_coeffs(self.ambient + 1, self.d + 1, &self.pluecker)
    }
}

/// Projective distance `|x ^ y| / (|x| |y|)` between the lines spanned by
/// two nonzero vectors.
pub fn projective_distance(x: &[CertReal], y: &[CertReal]) -> Result<CertReal, NumError> {
    let mx = Multivector::from_vector(x);
    let my = Multivector::from_vector(y);
    if mx.is_zero_exact() || my.is_zero_exact() {
        return Err(NumError::DivisionByZero);
    }
    let num_sq = mx.wedge(&my).norm_sq();
    let den_sq = mx.norm_sq() * my.norm_sq();
    Ok(CertReal::sqrt(num_sq / den_sq))
}

/// Distance from the projective point `[1 : alpha]` to a rational subspace,
/// through the Pluecker form `|alpha' ^ X| / (|alpha'| |X|)`.
pub fn point_subspace_distance(
    alpha: &LiftedPoint,
    l: &RationalSubspace,
) -> Result<CertReal, NumError> {
    let x = l.pluecker_multivector();
    if x.is_zero_exact() {
        return Err(NumError::DivisionByZero);
    }
    let lifted = alpha.lift();
    let num_sq = lifted.wedge(&x).norm_sq();
    let den_sq = lifted.norm_sq() * x.norm_sq();
    Ok(CertReal::sqrt(num_sq / den_sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, rat_int, DEFAULT_CAP};
    use std::cmp::Ordering;

    fn certs(v: &[i64]) -> Vec<CertReal> {
        v.iter().map(|&x| CertReal::from_int(x)).collect()
    }

    #[test]
    fn distance_examples() {
        // d(P, P) = 0
        let x = certs(&[2, 3]);
        let d = projective_distance(&x, &x).unwrap();
        assert_eq!(d.compare_rat(&Rat::zero()).unwrap(), Ordering::Equal);
        // orthogonal unit vectors: distance 1
        let d = projective_distance(&certs(&[1, 0]), &certs(&[0, 1])).unwrap();
        assert_eq!(d.compare_rat(&rat_int(1)).unwrap(), Ordering::Equal);
        // x = (1,0), y = (1,1): 1/sqrt(2)
        let d = projective_distance(&certs(&[1, 0]), &certs(&[1, 1])).unwrap();
        let expect = CertReal::one() / CertReal::sqrt_rat(rat_int(2));
        assert_eq!(d.compare_cap(&expect, DEFAULT_CAP).unwrap(), Ordering::Equal);
        // scale invariance, exact
        let d2 = projective_distance(&certs(&[-7, 0]), &certs(&[3, 3])).unwrap();
        assert_eq!(d.compare_cap(&d2, DEFAULT_CAP).unwrap(), Ordering::Equal);
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(projective_distance(&certs(&[0, 0]), &certs(&[1, 0])).is_err());
    }

    #[test]
    fn primitive_pluecker_and_height() {
        // plane x1 = 0 in P^2: lift spanned by e0, e2 (ambient R^3)
        let l = RationalSubspace::from_basis(&[
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(1)],
        ])
        .unwrap();
        assert_eq!(l.height(), BigInt::from(1));
        // scaled dependent basis collapses
        assert!(RationalSubspace::from_basis(&[
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(3, 2), rat_int(1)],
        ])
        .is_none());
        // rational scaling yields the same primitive vector
        let a = RationalSubspace::from_basis(&[vec![rat(2, 3), rat(4, 3)]]).unwrap();
        assert_eq!(a.pluecker, vec![BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn point_on_subspace_has_distance_zero() {
        // alpha = (2, 5); the subspace spanned by (1, 2, 5) contains its lift
        let l = RationalSubspace::from_basis(&[vec![rat_int(1), rat_int(2), rat_int(5)]])
            .unwrap();
        let alpha = LiftedPoint::new(certs(&[2, 5]));
        let d = point_subspace_distance(&alpha, &l).unwrap();
        assert_eq!(d.compare_rat(&Rat::zero()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn n1_reduces_to_projective_distance() {
        // n = 1, d = 0: distance from [1 : a] to [p : q] in P^1
        let l = RationalSubspace::from_basis(&[vec![rat_int(2), rat_int(3)]]).unwrap();
        let alpha = LiftedPoint::new(vec![CertReal::from_rat(rat(1, 2))]);
        let d1 = point_subspace_distance(&alpha, &l).unwrap();
        let d2 = projective_distance(
            &[CertReal::one(), CertReal::from_rat(rat(1, 2))],
            &certs(&[2, 3]),
        )
        .unwrap();
        assert_eq!(d1.compare_cap(&d2, DEFAULT_CAP).unwrap(), Ordering::Equal);
    }

    #[test]
    fn distance_matches_min_over_sampled_points() {
        // dense-sampling oracle for the min-over-points definition on a line
        // in P^2: d([1:alpha], L) = min over points Q of L
        let l = RationalSubspace::from_basis(&[
            vec![rat_int(1), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(2)],
        ])
        .unwrap();
        let alpha = LiftedPoint::new(vec![
            CertReal::sqrt_rat(rat_int(2)),
            CertReal::sqrt_rat(rat_int(3)),
        ]);
        let d = point_subspace_distance(&alpha, &l).unwrap().to_f64();
        let lift = alpha.lift();
        let mut best = f64::INFINITY;
        for i in -40i64..=40 {
            for j in -40i64..=40 {
                if i == 0 && j == 0 {
                    continue;
                }
                // point i*b1 + j*b2 of the subspace
                let q = vec![
                    CertReal::from_int(i),
                    CertReal::from_int(j),
                    CertReal::from_int(i + 2 * j),
                ];
                let dist = projective_distance(&lift.coeffs, &q).unwrap().to_f64();
                if dist < best {
                    best = dist;
                }
            }
        }
        assert!((d - best).abs() < 0.02, "pluecker {d} vs sampled {best}");
    }
}
