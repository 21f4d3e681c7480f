//! Exhaustive lattice-point enumeration in axis-aligned boxes, by integer
//! preimage search through the inverse basis. This is the brute-force oracle
//! behind the minima computations and the best-approximation engine.

use super::{LatticeBasis, WeightedBox};
use crate::error::LatticeError;
use crate::numerics::{CertReal, Rat};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;

pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

/// A lattice point: its integer coordinates in the given basis and its
/// ambient (certified) coordinates.
#[derive(Clone, Debug)]
pub struct LatticePoint {
    pub coords: Vec<BigInt>,
    pub point: Vec<CertReal>,
}

impl LatticePoint {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Integer ranges of the preimage bounding box of `box_` under the basis.
fn preimage_ranges(
    l: &LatticeBasis,
    box_: &WeightedBox,
) -> Result<Vec<(BigInt, BigInt)>, LatticeError> {
    let d = l.dim();
    assert_eq!(box_.dim(), d);
    let inv = l.inverse_matrix();
    let mut ranges = Vec::with_capacity(d);
    for i in 0..d {
        // z_i = sum_j inv[i][j] x_j over x in the box:
        // center part +/- sum_j |inv[i][j]| h_j
        let mut center = CertReal::zero();
        let mut radius = CertReal::zero();
        for j in 0..d {
            let e = inv.at(i, j);
            if !box_.center[j].is_zero() {
                center = center + e.clone() * CertReal::from_rat(box_.center[j].clone());
            }
            radius = radius + e.abs() * box_.half_widths[j].clone();
        }
        let lo = (center.clone() - radius.clone()).enclosure(32)?;
        let hi = (center + radius).enclosure(32)?;
        ranges.push((lo.lo.ceil().to_integer(), hi.hi.floor().to_integer()));
    }
    Ok(ranges)
}

fn range_count(ranges: &[(BigInt, BigInt)]) -> BigInt {
    let mut total = BigInt::one();
    for (lo, hi) in ranges {
        if hi < lo {
            return BigInt::zero();
        }
        total *= hi - lo + BigInt::one();
    }
    total
}

/// All lattice points of `l` inside the box (open when `strict`), in
/// lexicographic order of their integer coordinates.
pub fn enumerate_in_box(
    l: &LatticeBasis,
    box_: &WeightedBox,
    strict: bool,
    budget: u64,
) -> Result<Vec<LatticePoint>, LatticeError> {
    let ranges = preimage_ranges(l, box_)?;
    let candidates = range_count(&ranges);
    if candidates > BigInt::from(budget) {
        return Err(LatticeError::BudgetExceeded {
            examined: candidates.to_u64().unwrap_or(u64::MAX),
            budget,
        });
    }
    let mut out = Vec::new();
    let mut z: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
    if ranges.iter().any(|(lo, hi)| hi < lo) {
        return Ok(out);
    }
    let d = l.dim();
    'outer: loop {
        let point = l.point(&z);
        if member(&point, box_, strict)? {
            out.push(LatticePoint { coords: z.clone(), point });
        }
        // odometer increment, last coordinate fastest (lex order)
        let mut i = d;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            z[i] += BigInt::one();
            if z[i] <= ranges[i].1 {
                break;
            }
            z[i] = ranges[i].0.clone();
        }
    }
    Ok(out)
}

fn member(point: &[CertReal], box_: &WeightedBox, strict: bool) -> Result<bool, LatticeError> {
    for (j, x) in point.iter().enumerate() {
        let d = if box_.center[j].is_zero() {
            x.abs()
        } else {
            (x.clone() - CertReal::from_rat(box_.center[j].clone())).abs()
        };
        let ord = d.compare(&box_.half_widths[j])?;
        let inside = if strict {
            ord == Ordering::Less
        } else {
            ord != Ordering::Greater
        };
        if !inside {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience wrapper: centered box given by rational half-widths.
pub fn enumerate_in_rat_box(
    l: &LatticeBasis,
    half_widths: &[Rat],
    strict: bool,
    budget: u64,
) -> Result<Vec<LatticePoint>, LatticeError> {
    let hw = half_widths
        .iter()
        .map(|h| CertReal::from_rat(h.clone()))
        .collect();
    let box_ = WeightedBox::centered(hw)?;
    enumerate_in_box(l, &box_, strict, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::TargetMatrix;
    use crate::numerics::{rat, rat_int, WeightVector};
    use num_traits::Signed;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn unit_square_strict_vs_closed() {
        let z2 = LatticeBasis::standard(2);
        let b = WeightedBox::unit_cube(2);
        let strict = enumerate_in_box(&z2, &b, true, 1000).unwrap();
        assert_eq!(strict.len(), 1);
        assert!(strict[0].is_zero());
        let closed = enumerate_in_box(&z2, &b, false, 1000).unwrap();
        assert_eq!(closed.len(), 9);
    }

    #[test]
    fn three_halves_box() {
        let z2 = LatticeBasis::standard(2);
        let pts =
            enumerate_in_rat_box(&z2, &[rat(3, 2), rat(3, 2)], true, 1000).unwrap();
        assert_eq!(pts.len(), 9);
        // lex order check
        assert_eq!(pts[0].coords, ints(&[-1, -1]));
        assert_eq!(pts[8].coords, ints(&[1, 1]));
    }

    #[test]
    fn parametrized_lattice_enumeration() {
        // Lambda(1, 2, [1/2]) in [-1,1]^2: integer (p, q) with |p + q/2| <= 1
        // and |q/2| <= 1, i.e. q in {-2..2}
        let a = TargetMatrix::new(vec![vec![CertReal::from_rat(rat(1, 2))]]);
        let s = WeightVector::uniform(1);
        let r = WeightVector::uniform(1);
        let l = super::super::build_parametrized_lattice(
            &a,
            &CertReal::one(),
            &CertReal::from_int(2),
            &s,
            &r,
        )
        .unwrap();
        let pts = enumerate_in_box(&l, &WeightedBox::unit_cube(2), false, 10_000).unwrap();
        // brute-force oracle over the integer preimage
        let mut expect = Vec::new();
        for p in -3i64..=3 {
            for q in -3i64..=3 {
                let x = rat_int(p) + rat(q, 2);
                let y = rat(q, 2);
                if x.abs() <= rat_int(1) && y.abs() <= rat_int(1) {
                    expect.push((p, q));
                }
            }
        }
        assert_eq!(pts.len(), expect.len());
    }

    #[test]
    fn budget_guard() {
        let z3 = LatticeBasis::standard(3);
        let e = enumerate_in_rat_box(&z3, &[rat_int(100), rat_int(100), rat_int(100)], false, 1000);
        assert!(matches!(e, Err(LatticeError::BudgetExceeded { .. })));
    }

    #[test]
    fn shifted_box() {
        let z1 = LatticeBasis::standard(1);
        let b = WeightedBox::new(vec![rat(5, 2)], vec![CertReal::one()]).unwrap();
        let pts = enumerate_in_box(&z1, &b, false, 100).unwrap();
        let coords: Vec<i64> = pts
            .iter()
            .map(|p| p.coords[0].to_i64().unwrap())
            .collect();
        assert_eq!(coords, vec![2, 3]);
    }
}
