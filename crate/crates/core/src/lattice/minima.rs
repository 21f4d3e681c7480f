//! Successive minima of a symmetric convex body with respect to a lattice.
//!
//! For box and cross-polytope bodies the gauge of a lattice point is exactly
//! computable, so the minima are obtained by enumerating a large enough
//! dilate, sorting points by gauge, and greedily extracting linearly
//! independent witnesses. Independence is tested on the exact integer
//! coordinates, never on the ambient reals.

use super::enumerate::{enumerate_in_box, LatticePoint};
use super::{Body, LatticeBasis, WeightedBox};
use crate::error::LatticeError;
use crate::linalg::{lex_cmp, RankTracker};
use crate::numerics::{Rat, WeightedValue};
use num_traits::One;
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub struct SuccessiveMinima {
    /// Certified values `mu_1 <= ... <= mu_k`.
    pub values: Vec<WeightedValue>,
    /// Linearly independent witnesses attaining the values.
    pub witnesses: Vec<LatticePoint>,
}

/// First `k` successive minima of `body` with respect to `l`.
pub fn successive_minima_body(
    l: &LatticeBasis,
    body: &Body,
    k: usize,
    budget: u64,
) -> Result<SuccessiveMinima, LatticeError> {
    assert!(k >= 1 && k <= l.dim(), "need 1 <= k <= dim");
    let mut lambda = Rat::one();
    loop {
        let bbox = WeightedBox::centered(body.bounding_half_widths(&lambda))?;
        let pts = enumerate_in_box(l, &bbox, false, budget)?;
        // gauge and filter: keep nonzero points inside lambda * body
        let lam_val = WeightedValue::from_rat(lambda.clone());
        let mut inside: Vec<(LatticePoint, WeightedValue)> = Vec::new();
        for p in pts {
            if p.is_zero() {
                continue;
            }
            let g = body.gauge(&p.point);
            if g.compare(&lam_val).map(|o| o != Ordering::Greater).unwrap_or(false) {
                inside.push((p, g));
            }
        }
        let mut tracker = RankTracker::new();
        for (p, _) in &inside {
            tracker.try_insert_int(&p.coords);
        }
        if tracker.rank() >= k {
            return Ok(extract(inside, k));
        }
        lambda *= Rat::from_integer(2.into());
    }
}

fn extract(mut inside: Vec<(LatticePoint, WeightedValue)>, k: usize) -> SuccessiveMinima {
    inside.sort_by(|(pa, ga), (pb, gb)| {
        ga.compare(gb)
            .unwrap_or(Ordering::Equal)
            .then_with(|| lex_cmp(&pa.coords, &pb.coords))
    });
    let mut tracker = RankTracker::new();
    let mut values = Vec::with_capacity(k);
    let mut witnesses = Vec::with_capacity(k);
    for (p, g) in inside {
        if tracker.try_insert_int(&p.coords) {
            values.push(g);
            witnesses.push(p);
            if values.len() == k {
                break;
            }
        }
    }
    debug_assert_eq!(values.len(), k);
    SuccessiveMinima { values, witnesses }
}

/// Spec-facing form: minima of a centered box body.
pub fn successive_minima(
    l: &LatticeBasis,
    body: &WeightedBox,
    k: usize,
    budget: u64,
) -> Result<SuccessiveMinima, LatticeError> {
    assert!(body.is_centered(), "body must be symmetric (center 0)");
    successive_minima_body(l, &Body::BoxBody(body.clone()), k, budget)
}

/// Exact first minimum strictly above a rational threshold?
pub fn mu1_exceeds(
    l: &LatticeBasis,
    body: &WeightedBox,
    threshold: &Rat,
    budget: u64,
) -> Result<(bool, Option<LatticePoint>), LatticeError> {
    let m = successive_minima(l, body, 1, budget)?;
    let ord = m.values[0].compare_rat(threshold)?;
    if ord == Ordering::Greater {
        Ok((true, None))
    } else {
        Ok((false, Some(m.witnesses[0].clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, rat_int};
    use num_traits::Zero;

    #[test]
    fn standard_cube_minima() {
        let z3 = LatticeBasis::standard(3);
        let m = successive_minima(&z3, &WeightedBox::unit_cube(3), 3, 100_000).unwrap();
        for v in &m.values {
            assert_eq!(v.compare_rat(&Rat::one()).unwrap(), Ordering::Equal);
        }
        // witnesses are the standard basis vectors up to sign/lex choice
        let mut t = RankTracker::new();
        for w in &m.witnesses {
            assert!(t.try_insert_int(&w.coords));
        }
    }

    #[test]
    fn diagonal_minima() {
        // lattice diag(1/2, 3), unit square: mu1 = 1/2, mu2 = 3
        let l = LatticeBasis::from_rational_cols(&[
            vec![rat(1, 2), Rat::zero()],
            vec![Rat::zero(), rat_int(3)],
        ])
        .unwrap();
        let m = successive_minima(&l, &WeightedBox::unit_cube(2), 2, 100_000).unwrap();
        assert_eq!(m.values[0].compare_rat(&rat(1, 2)).unwrap(), Ordering::Equal);
        assert_eq!(m.values[1].compare_rat(&rat_int(3)).unwrap(), Ordering::Equal);
    }

    #[test]
    fn cross_polytope_minima() {
        // polar of the unit cube in Z^2: gauge = |x| + |y|; mu1 = 1, mu2 = 1
        let z2 = LatticeBasis::standard(2);
        let body = Body::PolarOfBox(WeightedBox::unit_cube(2));
        let m = successive_minima_body(&z2, &body, 2, 100_000).unwrap();
        assert_eq!(m.values[0].compare_rat(&Rat::one()).unwrap(), Ordering::Equal);
        assert_eq!(m.values[1].compare_rat(&Rat::one()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn minima_witness_attains() {
        let l = LatticeBasis::from_rational_cols(&[
            vec![rat(2, 3), rat(1, 7)],
            vec![rat(-1, 5), rat(5, 4)],
        ])
        .unwrap();
        let body = WeightedBox::unit_cube(2);
        let m = successive_minima(&l, &body, 2, 1_000_000).unwrap();
        assert!(m.values[0].compare(&m.values[1]).unwrap() != Ordering::Greater);
        for (v, w) in m.values.iter().zip(&m.witnesses) {
            let g = Body::BoxBody(body.clone()).gauge(&w.point);
            assert_eq!(g.compare(v).unwrap(), Ordering::Equal);
        }
    }
}
