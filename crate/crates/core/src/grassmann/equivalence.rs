//! The split `X = e0 ^ Z - Y` of lifted multivectors and the sandwich
//! inequalities that make the two homogeneous definitions of intermediate
//! exponents equivalent, checked exactly on rational data.

use super::multivector::{binomial, subset_rank, subsets, Multivector};
use crate::numerics::{CertReal, Rat, DEFAULT_CAP};
use num_bigint::BigInt;
use std::cmp::Ordering;

/// Decompose a grade-`(d+1)` multivector over `Z^{n+1}` as
/// `X = e0 ^ Z - Y` with `Z` of grade `d` and `Y` of grade `d+1`, both over
/// the `e0`-free coordinates.
pub fn split_lifted(x: &Multivector) -> (Multivector, Multivector) {
    let np1 = x.n;
    let n = np1 - 1;
    let dp1 = x.k;
    let d = dp1 - 1;
    let mut z = Multivector::zero(n, d);
    let mut y = Multivector::zero(n, dp1);
    for (idx, set) in subsets(np1, dp1).iter().enumerate() {
        if set[0] == 0 {
            // e0 ^ e_S with S shifted down by one; the merge sign is +1
            // because 0 precedes everything
            let shifted: Vec<usize> = set[1..].iter().map(|&i| i - 1).collect();
            let zi = subset_rank(n, &shifted);
            z.coeffs[zi] = x.coeffs[idx].clone();
        } else {
            let shifted: Vec<usize> = set.iter().map(|&i| i - 1).collect();
            let yi = subset_rank(n, &shifted);
            y.coeffs[yi] = -x.coeffs[idx].clone();
        }
    }
    (z, y)
}

/// Rebuild `e0 ^ Z - Y` over `Z^{n+1}`.
pub fn join_lifted(z: &Multivector, y: &Multivector) -> Multivector {
    assert_eq!(z.n, y.n);
    assert_eq!(z.k + 1, y.k);
    let n = z.n;
    let mut x = Multivector::zero(n + 1, y.k);
    for (zi, set) in subsets(n, z.k).iter().enumerate() {
        let mut lifted = vec![0usize];
        lifted.extend(set.iter().map(|&i| i + 1));
        x.coeffs[subset_rank(n + 1, &lifted)] = z.coeffs[zi].clone();
    }
    for (yi, set) in subsets(n, y.k).iter().enumerate() {
        let lifted: Vec<usize> = set.iter().map(|&i| i + 1).collect();
        x.coeffs[subset_rank(n + 1, &lifted)] = -y.coeffs[yi].clone();
    }
    x
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub z: Multivector,
    pub y: Multivector,
    /// `|alpha ^ Z + Y| <= |alpha' ^ X|`
    pub lower_norm_ok: bool,
    /// `|alpha' ^ X| <= |alpha'| |alpha ^ Z + Y|`
    pub upper_norm_ok: bool,
    /// `max(|Z|, |Y|) <= |X|`
    pub lower_split_ok: bool,
    /// `|X| <= 2 max(|Z|, |Y|)`
    pub upper_split_ok: bool,
    /// `alpha' ^ X = -(e0 + alpha) ^ (alpha ^ Z + Y)` componentwise
    pub identity_ok: bool,
}

impl EquivalenceReport {
    pub fn all_ok(&self) -> bool {
        self.lower_norm_ok
            && self.upper_norm_ok
            && self.lower_split_ok
            && self.upper_split_ok
            && self.identity_ok
    }
}

/// Verify the four sandwich inequalities and the wedge identity for a given
/// rational point and integer multivector; everything is compared through
/// exact squares.
pub fn def_equivalence_check(alpha: &[Rat], x: &Multivector) -> EquivalenceReport {
    assert!(!x.is_zero_exact(), "X must be nonzero");
    assert_eq!(alpha.len() + 1, x.n);
    let n = alpha.len();
    let (z, y) = split_lifted(x);
    let alpha_mv = Multivector::from_vector(
        &alpha.iter().map(|a| CertReal::from_rat(a.clone())).collect::<Vec<_>>(),
    );
    // alpha ^ Z + Y and the lifted products
    let azy = alpha_mv.wedge(&z).add(&y);
    let alpha_lift = {
        let mut v = vec![CertReal::one()];
        v.extend(alpha.iter().map(|a| CertReal::from_rat(a.clone())));
        Multivector::from_vector(&v)
    };
    let ax = alpha_lift.wedge(x);

    let le = |a: &CertReal, b: &CertReal| {
        matches!(a.compare_cap(b, DEFAULT_CAP), Ok(Ordering::Less | Ordering::Equal))
    };
    let ax_sq = ax.norm_sq();
    let azy_sq = azy.norm_sq();
    let lower_norm_ok = le(&azy_sq, &ax_sq);
    let upper_norm_ok = le(&ax_sq, &(alpha_lift.norm_sq() * azy_sq.clone()));
    let x_sq = x.norm_sq();
    let z_sq = z.norm_sq();
    let y_sq = y.norm_sq();
    let max_sq = if le(&z_sq, &y_sq) { y_sq.clone() } else { z_sq.clone() };
    let lower_split_ok = le(&max_sq, &x_sq);
    let upper_split_ok = le(&x_sq, &(CertReal::from_int(4) * max_sq));

    // identity: alpha' ^ X = -(e0 + alpha) ^ (alpha ^ Z + Y), where the
    // right side lives in the lifted space with azy embedded e0-free
    let azy_lifted = {
        let mut m = Multivector::zero(n + 1, azy.k);
        for (i, set) in subsets(n, azy.k).iter().enumerate() {
            let lifted: Vec<usize> = set.iter().map(|&i| i + 1).collect();
            m.coeffs[subset_rank(n + 1, &lifted)] = azy.coeffs[i].clone();
        }
        m
    };
    let rhs = alpha_lift.wedge(&azy_lifted).neg();
    let identity_ok = ax
        .coeffs
        .iter()
        .zip(&rhs.coeffs)
        .all(|(a, b)| matches!(a.compare_cap(b, DEFAULT_CAP), Ok(Ordering::Equal)));

    EquivalenceReport {
        z,
        y,
        lower_norm_ok,
        upper_norm_ok,
        lower_split_ok,
        upper_split_ok,
        identity_ok,
    }
}

/// The transpose pairing of the wedge maps: for `beta` of grade `n-d-1` and
/// `gamma` of grade `d`, `|beta ^ (alpha ^ gamma)| = |(alpha ^ beta) ^ gamma|`
/// exactly (both are `+/- beta ^ alpha ^ gamma`).
pub fn transpose_identity_holds(
    alpha: &[Rat],
    beta: &Multivector,
    gamma: &Multivector,
) -> bool {
    let n = alpha.len();
    assert_eq!(beta.n, n);
    assert_eq!(gamma.n, n);
    assert_eq!(beta.k + gamma.k + 1, n);
    let alpha_mv = Multivector::from_vector(
        &alpha.iter().map(|a| CertReal::from_rat(a.clone())).collect::<Vec<_>>(),
    );
    let lhs = beta.wedge(&alpha_mv.wedge(gamma));
    let rhs = alpha_mv.wedge(beta).wedge(gamma);
    // both are grade-n: single coefficients
    let a = lhs.coeffs[0].abs();
    let b = rhs.coeffs[0].abs();
    matches!(a.compare_cap(&b, DEFAULT_CAP), Ok(Ordering::Equal))
}

/// Random integer multivector with coefficients in `[-bound, bound]`.
pub fn random_int_multivector(
    rng: &mut crate::sampling::SplitMix64,
    n: usize,
    k: usize,
    bound: i64,
) -> Multivector {
    let coeffs: Vec<BigInt> = (0..binomial(n, k))
        .map(|_| BigInt::from(rng.next_i64_range(-bound, bound)))
        .collect();
    Multivector::from_int_coeffs(n, k, &coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat_int;
    use crate::sampling::SplitMix64;

    #[test]
    fn split_basis_cases() {
        // X = e0 ^ e1 over Z^3: Z = e1 (index 0 downstairs), Y = 0
        let mut x = Multivector::zero(3, 2);
        x.coeffs[subset_rank(3, &[0, 1])] = CertReal::one();
        let (z, y) = split_lifted(&x);
        assert_eq!(z.coeffs[0].as_rat(), Some(&rat_int(1)));
        assert!(y.is_zero_exact());
        // X = e1 ^ e2 (0-free): Z = 0, Y = -e1^e2
        let mut x = Multivector::zero(3, 2);
        x.coeffs[subset_rank(3, &[1, 2])] = CertReal::one();
        let (z, y) = split_lifted(&x);
        assert!(z.is_zero_exact());
        assert_eq!(y.coeffs[0].as_rat(), Some(&rat_int(-1)));
        // round trip
        let rebuilt = join_lifted(&z, &y);
        assert_eq!(rebuilt.coeffs[subset_rank(3, &[1, 2])].as_rat(), Some(&rat_int(1)));
    }

    #[test]
    fn equivalence_tight_cases() {
        let mut rng = SplitMix64::new(2024);
        // X = e0 ^ e1: both sandwiches tight on the left
        let mut x = Multivector::zero(3, 2);
        x.coeffs[subset_rank(3, &[0, 1])] = CertReal::one();
        let alpha = vec![rng.next_rat(5, 3), rng.next_rat(5, 3)];
        let rep = def_equivalence_check(&alpha, &x);
        assert!(rep.all_ok());
        // X = e1 ^ e2: |X| = |Y|
        let mut x = Multivector::zero(3, 2);
        x.coeffs[subset_rank(3, &[1, 2])] = CertReal::one();
        let rep = def_equivalence_check(&alpha, &x);
        assert!(rep.all_ok());
        assert!(rep.z.is_zero_exact());
    }

    #[test]
    fn equivalence_random_family() {
        let mut rng = SplitMix64::new(321);
        let mut checked = 0;
        for _ in 0..300 {
            let n = 2 + rng.next_below(3) as usize; // ambient 2..4
            let d = rng.next_below(n.min(3) as u64) as usize; // 0..n-1
            let x = random_int_multivector(&mut rng, n + 1, d + 1, 6);
            if x.is_zero_exact() {
                continue;
            }
            let alpha: Vec<Rat> = (0..n).map(|_| rng.next_rat(7, 5)).collect();
            let rep = def_equivalence_check(&alpha, &x);
            assert!(rep.all_ok(), "violation at n={n} d={d}");
            checked += 1;
        }
        assert!(checked > 250);
    }

    #[test]
    fn transpose_identity_random() {
        let mut rng = SplitMix64::new(777);
        for _ in 0..200 {
            let n = 2 + rng.next_below(3) as usize;
            let d = rng.next_below(n as u64) as usize; // gamma grade d <= n-1
            let beta = random_int_multivector(&mut rng, n, n - d - 1, 5);
            let gamma = random_int_multivector(&mut rng, n, d, 5);
            let alpha: Vec<Rat> = (0..n).map(|_| rng.next_rat(6, 4)).collect();
            assert!(transpose_identity_holds(&alpha, &beta, &gamma));
        }
    }
}
