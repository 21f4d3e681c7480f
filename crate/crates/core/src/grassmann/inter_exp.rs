//! Intermediate Diophantine exponents: approximation of a point by integer
//! grade-`d` multivectors (decomposability dropped), with the normalisation
//! `|Z|^C(n,d) <= T`, `|alpha ^ Z + Y + theta|^C(n,d+1) <= T^{-omega}`.

use super::multivector::{binomial, subsets, Multivector};
use crate::error::NumError;
use crate::exponents::{
    bucket_of, cert_ln, estimate_from_series, BucketBest, ExponentEstimate, ExponentKind,
    GridParams, RatioPoint, RatioSeries, DEFAULT_RATIO_CAP,
};
use crate::numerics::{rat_to_f64_bounds, CertReal, Rat, RatInterval, WeightedValue};
use crate::sampling::low_discrepancy_points;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;

/// Default desk-scale limits; larger instances must opt in explicitly.
pub const MAX_AMBIENT: usize = 5;
pub const MAX_GRADE: usize = 3;

/// The matrix of the linear map `Z -> alpha ^ Z` from grade-`d` to
/// grade-`(d+1)` coefficients.
pub fn wedge_map(alpha: &[CertReal], d: usize) -> Vec<Vec<CertReal>> {
    let n = alpha.len();
    let rows = binomial(n, d + 1);
    let cols_sets = subsets(n, d);
    let mut mat = vec![vec![CertReal::zero(); cols_sets.len()]; rows];
    for j in 0..cols_sets.len() {
        let mut basis = Multivector::zero(n, d);
        basis.coeffs[j] = CertReal::one();
        let col = Multivector::from_vector(alpha).wedge(&basis);
        for (i, c) in col.coeffs.iter().enumerate() {
            mat[i][j] = c.clone();
        }
    }
    mat
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Ordinary,
    Uniform,
}

/// Witness-backed estimate of the `d`-th intermediate exponent by
/// enumerating integer grade-`d` multivectors in a coefficient box.
pub fn intermediate_exponent(
    alpha: &[CertReal],
    d: usize,
    theta: &[Rat],
    mode: Mode,
    grid: &GridParams,
    budget: u64,
) -> Result<ExponentEstimate, NumError> {
    let n = alpha.len();
    assert!(d < n, "need 0 <= d <= n-1");
    assert!(
        n <= MAX_AMBIENT && d <= MAX_GRADE,
        "desk-scale limits exceeded (n <= {MAX_AMBIENT}, d <= {MAX_GRADE})"
    );
    let k_scale = binomial(n, d) as i64;
    let k_err = binomial(n, d + 1) as i64;
    let z_dim = binomial(n, d);
    let y_dim = binomial(n, d + 1);
    assert_eq!(theta.len(), y_dim, "theta must have grade-(d+1) coefficients");

    // coefficient box: |Z| <= T^{1/C(n,d)} componentwise
    let t_max = Rat::from_integer(BigInt::from(grid.t_max()));
    let coeff_bound = crate::bestapprox::floor_rat_pow(
        &t_max,
        &Rat::new(BigInt::one(), BigInt::from(k_scale)),
    )
    .to_string()
    .parse::<i64>()
    .unwrap_or(i64::MAX);

    let mut count: u64 = 1;
    for _ in 0..z_dim {
        count = count.saturating_mul((2 * coeff_bound + 1) as u64);
    }
    if count > budget {
        return Err(NumError::ExponentOverflow(format!(
            "intermediate sweep candidate count {count} over budget {budget}"
        )));
    }

    let wmap = wedge_map(alpha, d);
    let prec = 192;
    let wmap_iv: Vec<Vec<RatInterval>> = wmap
        .iter()
        .map(|row| row.iter().map(|e| e.enclosure(prec)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;

    let mut buckets: Vec<Option<BucketBest>> = (0..grid_steps(grid)).map(|_| None).collect();
    let mut z = vec![-coeff_bound; z_dim];
    'outer: loop {
        if !z.iter().all(|&x| x == 0) {
            // scale value |Z|^C(n,d); bucket via f64 log
            let norm_sq: i64 = z.iter().map(|&x| x * x).sum();
            let scale_ln = (k_scale as f64 / 2.0) * (norm_sq as f64).ln();
            let bucket = bucket_of(scale_ln.exp(), grid);
            if bucket < buckets.len() {
                // alpha ^ Z + theta, then the nearest integer Y per
                // coordinate (the coordinatewise choice minimises the
                // Euclidean norm)
                let mut coords = Vec::with_capacity(y_dim);
                let mut p = Vec::with_capacity(y_dim);
                for i in 0..y_dim {
                    let mut acc = RatInterval::point(theta[i].clone());
                    for (j, &zj) in z.iter().enumerate() {
                        if zj != 0 {
                            acc = acc
                                .add(&wmap_iv[i][j].mul_rat(&Rat::from_integer(BigInt::from(zj))));
                        }
                    }
                    let near = nearest_int(&acc);
                    coords.push(RatInterval::new(
                        &acc.lo - Rat::from_integer(near.clone()),
                        &acc.hi - Rat::from_integer(near.clone()),
                    ));
                    p.push(-near);
                }
                let err_ln_hi = euclid_ln_hi(&coords) * k_err as f64;
                let better = match &buckets[bucket] {
                    None => true,
                    Some(b) => err_ln_hi < b.err_ln_hi,
                };
                if better {
                    buckets[bucket] =
                        Some(BucketBest { err_ln_hi, q: z.clone(), p });
                }
            }
        }
        let mut i = z_dim;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            z[i] += 1;
            if z[i] <= coeff_bound {
                break;
            }
            z[i] = -coeff_bound;
        }
    }

    // matched finalization with the scale |Z|^C(n,d) and error
    // |alpha ^ Z + Y + theta|^C(n,d+1), both carried as exact powers
    let series = finalize_intermediate(buckets, grid, &wmap, theta, k_scale, k_err)?;
    let inhom = theta.iter().any(|t| !t.is_zero());
    let kind = ExponentKind {
        uniform: mode == Mode::Uniform,
        multiplicative: false,
        inhomogeneous: inhom,
    };
    Ok(estimate_from_series(&series, kind, !inhom, DEFAULT_RATIO_CAP))
}

fn grid_steps(grid: &GridParams) -> usize {
    ((grid.max_octave - grid.min_octave) * grid.steps_per_octave) as usize + 1
}

fn nearest_int(iv: &RatInterval) -> BigInt {
    let mid = iv.midpoint();
    (mid + Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Certified f64 upper bound of `ln |v|` for an interval vector (Euclidean).
fn euclid_ln_hi(coords: &[RatInterval]) -> f64 {
    let mut sum_hi = Rat::zero();
    for c in coords {
        let a = c.abs();
        sum_hi += &a.hi * &a.hi;
    }
    let (_, hi) = rat_to_f64_bounds(&sum_hi);
    if hi <= 0.0 {
        f64::NEG_INFINITY
    } else {
        0.5 * hi.ln() + 1e-12
    }
}

fn finalize_intermediate(
    buckets: Vec<Option<BucketBest>>,
    grid: &GridParams,
    wmap: &[Vec<CertReal>],
    theta: &[Rat],
    k_scale: i64,
    k_err: i64,
) -> Result<RatioSeries, NumError> {
    let mut winners: Vec<(Vec<i64>, Vec<BigInt>)> = Vec::new();
    let mut best_hi = f64::INFINITY;
    for b in buckets.into_iter().flatten() {
        if b.err_ln_hi < best_hi {
            best_hi = b.err_ln_hi;
            winners.push((b.q, b.p));
        }
    }
    let scale_value = |z: &[i64]| -> WeightedValue {
        let norm_sq: i64 = z.iter().map(|&x| x * x).sum();
        WeightedValue::from_terms(vec![(
            CertReal::from_int(norm_sq),
            Rat::new(BigInt::from(k_scale), BigInt::from(2)),
        )])
    };
    let err_value = |z: &[i64], p: &[BigInt]| -> WeightedValue {
        let mut sq = CertReal::zero();
        for i in 0..theta.len() {
            let mut acc = CertReal::from_rat(theta[i].clone()) + CertReal::from(&p[i]);
            for (j, &zj) in z.iter().enumerate() {
                if zj != 0 {
                    acc = acc + wmap[i][j].clone() * CertReal::from_int(zj);
                }
            }
            sq = sq + acc.clone() * acc;
        }
        WeightedValue::from_terms(vec![(
            sq,
            Rat::new(BigInt::from(k_err), BigInt::from(2)),
        )])
    };
    let t_max_val = WeightedValue::from_rat(Rat::from_integer(BigInt::from(grid.t_max())));
    let mut points = Vec::new();
    let mut hit_zero = false;
    for i in 0..winners.len() {
        let (z, p) = &winners[i];
        let err = err_value(z, p);
        if err.is_zero_exact() {
            hit_zero = true;
            continue;
        }
        let (scale, anchored) = if i + 1 < winners.len() {
            (scale_value(&winners[i + 1].0), false)
        } else {
            (t_max_val.clone(), true)
        };
        match scale_value(z).compare(&scale) {
            Ok(Ordering::Less) => {}
            _ => continue,
        }
        let ln_err = match cert_ln(&err, 48) {
            Ok(iv) => iv,
            Err(NumError::PrecisionExhausted { .. }) | Err(NumError::DivisionByZero) => {
                hit_zero = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        let ln_scale = cert_ln(&scale, 48)?;
        if !ln_scale.hi.is_positive() {
            continue;
        }
        points.push(RatioPoint {
            ln_scale: ln_scale.to_f64(),
            neg_ln_err: -ln_err.to_f64(),
            cert_neg_ln_err_lo: -ln_err.hi.clone(),
            cert_ln_scale_hi: ln_scale.hi.clone(),
            q_desc: format!("{z:?}"),
            p_desc: format!("{p:?}"),
            anchored,
        });
    }
    Ok(RatioSeries { points, hit_zero })
}

#[derive(Clone, Debug, Serialize)]
pub struct BvSample {
    pub lower_bound: f64,
    pub point_estimate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BvValidation {
    pub d: usize,
    pub omega_hat_dual: f64,
    pub bound: f64,
    pub samples: Vec<BvSample>,
    pub transpose_identity_ok: bool,
    pub all_above: bool,
}

/// Validate the intermediate reciprocal transfer: estimate the uniform
/// exponent at complementary grade `n-1-d`, then check each sampled shift's
/// certified ordinary lower bound at grade `d` against the reciprocal.
#[allow(clippy::too_many_arguments)]
pub fn bv_transfer_check(
    alpha: &[CertReal],
    d: usize,
    theta_count: usize,
    seed: u64,
    grid: &GridParams,
    budget: u64,
    lb_slack: f64,
) -> Result<BvValidation, NumError> {
    let n = alpha.len();
    let comp = n - 1 - d;
    let zero_theta = vec![Rat::zero(); binomial(n, comp + 1)];
    let unif = intermediate_exponent(alpha, comp, &zero_theta, Mode::Uniform, grid, budget)?;
    let bound = if unif.capped { 0.0 } else { 1.0 / unif.point_estimate };

    let thetas = low_discrepancy_points(binomial(n, d + 1), theta_count, seed);
    let mut samples = Vec::with_capacity(theta_count);
    for theta in &thetas {
        let est = intermediate_exponent(alpha, d, theta, Mode::Ordinary, grid, budget)?;
        samples.push(BvSample {
            lower_bound: est.lower_bound_f64(),
            point_estimate: est.point_estimate,
        });
    }
    let all_above = samples.iter().all(|s| s.lower_bound >= bound - lb_slack);

    // the transpose pairing identity on random rational data
    let mut rng = crate::sampling::SplitMix64::new(seed ^ 0x5bd1e995);
    let mut identity_ok = true;
    for _ in 0..64 {
        let ra: Vec<Rat> = (0..n).map(|_| rng.next_rat(6, 4)).collect();
        let beta = super::equivalence::random_int_multivector(&mut rng, n, comp, 5);
        let gamma = super::equivalence::random_int_multivector(&mut rng, n, d, 5);
        if !super::equivalence::transpose_identity_holds(&ra, &beta, &gamma) {
            identity_ok = false;
        }
    }

    Ok(BvValidation {
        d,
        omega_hat_dual: unif.point_estimate,
        bound,
        samples,
        transpose_identity_ok: identity_ok,
        all_above,
    })
}
