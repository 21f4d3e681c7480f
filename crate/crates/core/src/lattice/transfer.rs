//! Duality-transfer checks: the translate lemma for polar bodies of boxes
//! (dual points in `C R* + gamma`) and the second-theorem product bounds
//! between a body and its polar.

use super::enumerate::LatticePoint;
use super::minima::{successive_minima, successive_minima_body};
use super::{Body, LatticeBasis, WeightedBox};
use crate::error::LatticeError;
use crate::numerics::{rat, rat_int, CertReal, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// `C_d = d! (3/2)^{(d-1)/2} d`.
pub fn mahler_constant(d: usize) -> CertReal {
    let mut fact = BigInt::one();
    for i in 2..=d {
        fact *= BigInt::from(i);
    }
    let lead = CertReal::from_rat(Rat::from_integer(fact * BigInt::from(d)));
    lead * CertReal::from_rat(rat(3, 2)).pow(Rat::new(BigInt::from(d as i64 - 1), BigInt::from(2)))
}

#[derive(Clone, Debug)]
pub enum MahlerStatus {
    Ok,
    /// The hypothesis `R` contains a nonzero lattice point (that is,
    /// `mu_1(R) <= 1`); not a failure of the lemma.
    PreconditionViolated { witness: Vec<BigInt> },
}

#[derive(Clone, Debug)]
pub struct MahlerReport {
    pub dim: usize,
    pub status: MahlerStatus,
    pub c_value: f64,
    /// Nonzero dual point in `C R*`, when the precondition holds.
    pub origin_witness: Option<LatticePoint>,
    /// One dual point of `C R* + gamma` per requested shift.
    pub shift_witnesses: Vec<Option<LatticePoint>>,
}

impl MahlerReport {
    pub fn all_found(&self) -> bool {
        matches!(self.status, MahlerStatus::Ok)
            && self.origin_witness.is_some()
            && self.shift_witnesses.iter().all(|w| w.is_some())
    }
}

/// Search the dual lattice for a point of `C R* + gamma`; `R*` is the polar
/// of the box `r_box` (a weighted cross-polytope), so membership is the
/// exact weighted l1 condition checked over a bounding box. The scan stops
/// at the first certified witness (the translate lemma guarantees density,
/// so the hit comes early).
fn dual_point_in_shifted_polar(
    dual: &LatticeBasis,
    r_box: &WeightedBox,
    c: &CertReal,
    gamma: &[Rat],
    exclude_zero: bool,
    budget: u64,
) -> Result<Option<LatticePoint>, LatticeError> {
    let d = r_box.dim();
    // bounding box: |y_i - gamma_i| <= C / h_i
    let mut hw = Vec::with_capacity(d);
    for h in &r_box.half_widths {
        hw.push(c.clone() / h.clone());
    }
    let bbox = WeightedBox::new(gamma.to_vec(), hw)?;
    // integer preimage ranges of the bounding box under the dual basis
    let inv = dual.inverse_matrix();
    let mut ranges = Vec::with_capacity(d);
    for i in 0..d {
        let mut center = CertReal::zero();
        let mut radius = CertReal::zero();
        for j in 0..d {
            let e = inv.at(i, j);
            if !bbox.center[j].is_zero() {
                center = center + e.clone() * CertReal::from_rat(bbox.center[j].clone());
            }
            radius = radius + e.abs() * bbox.half_widths[j].clone();
        }
        let lo = (center.clone() - radius.clone()).enclosure(32)?;
        let hi = (center + radius).enclosure(32)?;
        ranges.push((lo.lo.ceil().to_integer(), hi.hi.floor().to_integer()));
    }
    if ranges.iter().any(|(lo, hi)| hi < lo) {
        return Ok(None);
    }
    let mut z: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
    let mut examined = 0u64;
    'outer: loop {
        examined += 1;
        if examined > budget {
            return Err(LatticeError::BudgetExceeded { examined, budget });
        }
        if !(exclude_zero && z.iter().all(|x| x.is_zero())) {
            let point = dual.point(&z);
            let mut acc = CertReal::zero();
            for (i, y) in point.iter().enumerate() {
                let diff = if gamma[i].is_zero() {
                    y.abs()
                } else {
                    (y.clone() - CertReal::from_rat(gamma[i].clone())).abs()
                };
                acc = acc + r_box.half_widths[i].clone() * diff;
            }
            match acc.compare(c) {
                Ok(Ordering::Greater) => {}
                Ok(_) => return Ok(Some(LatticePoint { coords: z, point })),
                Err(_) => {} // undecided at the cap: not a certified witness
            }
        }
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
    Ok(None)
}

/// Verify the translate lemma on a concrete instance: if the symmetric box
/// `R` meets the lattice only at zero, then every translate `C R* + gamma`
/// of the dilated polar body contains a dual point, and `C R*` itself
/// contains a nonzero one.
pub fn check_mahler_transfer(
    l: &LatticeBasis,
    r_box: &WeightedBox,
    gammas: &[Vec<Rat>],
    budget: u64,
) -> Result<MahlerReport, LatticeError> {
    assert!(r_box.is_centered(), "R must be symmetric (center 0)");
    let d = l.dim();
    let c = mahler_constant(d);
    // precondition: mu_1(R) > 1, i.e. no nonzero lattice point in closed R
    let m1 = successive_minima(l, r_box, 1, budget)?;
    if m1.values[0].compare_rat(&Rat::one())? != Ordering::Greater {
        return Ok(MahlerReport {
            dim: d,
            status: MahlerStatus::PreconditionViolated {
                witness: m1.witnesses[0].coords.clone(),
            },
            c_value: c.to_f64(),
            origin_witness: None,
            shift_witnesses: Vec::new(),
        });
    }
    let dual = l.dual()?;
    let zero = vec![Rat::zero(); d];
    let origin_witness = dual_point_in_shifted_polar(&dual, r_box, &c, &zero, true, budget)?;
    let mut shift_witnesses = Vec::with_capacity(gammas.len());
    for gamma in gammas {
        shift_witnesses.push(dual_point_in_shifted_polar(
            &dual, r_box, &c, gamma, false, budget,
        )?);
    }
    Ok(MahlerReport {
        dim: d,
        status: MahlerStatus::Ok,
        c_value: c.to_f64(),
        origin_witness,
        shift_witnesses,
    })
}

#[derive(Clone, Debug)]
pub struct SecondTheoremReport {
    pub dim: usize,
    pub mu1: f64,
    pub mu_d_dual: f64,
    /// `1 <= mu_1(L, B) * mu_d(L*, B*) <= d!`.
    pub product_in_bounds: bool,
    /// `mu_d(L*, B*) < d!` whenever `mu_1(L, B) > 1`; `None` when the
    /// hypothesis fails.
    pub strict_dual_bound: Option<bool>,
}

/// Compute `mu_1(L, B)` and `mu_d(L*, B*)` and check the product bounds.
pub fn second_theorem_dual_bound(
    l: &LatticeBasis,
    b_box: &WeightedBox,
    budget: u64,
) -> Result<SecondTheoremReport, LatticeError> {
    assert!(b_box.is_centered());
    let d = l.dim();
    let m1 = successive_minima(l, b_box, 1, budget)?;
    let dual = l.dual()?;
    let polar = Body::PolarOfBox(b_box.clone());
    let md = successive_minima_body(&dual, &polar, d, budget)?;
    let mu1 = m1.values[0].value_cert();
    let mud = md.values[d - 1].value_cert();
    let product = mu1.clone() * mud.clone();
    let mut fact = Rat::one();
    for i in 2..=d {
        fact *= rat_int(i as i64);
    }
    let lower_ok = product.compare_rat(&Rat::one())? != Ordering::Less;
    let upper_ok = product.compare_rat(&fact)? != Ordering::Greater;
    let mu1_above_one = mu1.compare_rat(&Rat::one())? == Ordering::Greater;
    let strict = if mu1_above_one {
        Some(mud.compare_rat(&fact)? == Ordering::Less)
    } else {
        None
    };
    Ok(SecondTheoremReport {
        dim: d,
        mu1: mu1.to_f64(),
        mu_d_dual: mud.to_f64(),
        product_in_bounds: lower_ok && upper_ok,
        strict_dual_bound: strict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_matches_displayed_form() {
        // C_2 = 2! (3/2)^{1/2} 2 = 4 sqrt(3/2)
        let c2 = mahler_constant(2);
        let expect = CertReal::from_int(4) * CertReal::sqrt_rat(rat(3, 2));
        assert_eq!(c2.compare(&expect).unwrap(), Ordering::Equal);
        // C_1 = 1, C_3 = 3! (3/2) 3 = 27
        assert_eq!(mahler_constant(1).compare(&CertReal::one()).unwrap(), Ordering::Equal);
        assert_eq!(
            mahler_constant(3).compare(&CertReal::from_int(27)).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn z2_open_unit_square() {
        // R barely smaller than the unit square so mu_1 > 1; gamma = 0
        let l = LatticeBasis::standard(2);
        let r = WeightedBox::centered(vec![
            CertReal::from_rat(rat(9, 10)),
            CertReal::from_rat(rat(9, 10)),
        ])
        .unwrap();
        let rep = check_mahler_transfer(&l, &r, &[vec![rat(1, 3), rat(2, 5)]], 100_000).unwrap();
        assert!(rep.all_found());
    }

    #[test]
    fn precondition_reported() {
        let l = LatticeBasis::standard(2);
        let r = WeightedBox::centered(vec![CertReal::from_int(2), CertReal::from_int(2)]).unwrap();
        let rep = check_mahler_transfer(&l, &r, &[], 100_000).unwrap();
        assert!(matches!(rep.status, MahlerStatus::PreconditionViolated { .. }));
    }

    #[test]
    fn second_theorem_on_z2() {
        let l = LatticeBasis::standard(2);
        let rep =
            second_theorem_dual_bound(&l, &WeightedBox::unit_cube(2), 100_000).unwrap();
        assert!(rep.product_in_bounds);
        assert!(rep.strict_dual_bound.is_none()); // mu_1 = 1 exactly
    }

    #[test]
    fn second_theorem_diagonal() {
        // diag(2,2): mu1 = 2 > 1; dual = diag(1/2, 1/2); B* gauge |x|+|y|;
        // dual minima 1/2, so mu_2(dual) = 1/2 < 2! and product = 1
        let l = LatticeBasis::from_rational_cols(&[
            vec![rat_int(2), Rat::zero()],
            vec![Rat::zero(), rat_int(2)],
        ])
        .unwrap();
        let rep =
            second_theorem_dual_bound(&l, &WeightedBox::unit_cube(2), 100_000).unwrap();
        assert!(rep.product_in_bounds);
        assert_eq!(rep.strict_dual_bound, Some(true));
        assert!((rep.mu1 - 2.0).abs() < 1e-9);
        assert!((rep.mu_d_dual - 0.5).abs() < 1e-9);
    }
}
