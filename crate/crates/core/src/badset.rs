//! The constructive side of the twisted badly-approximable results: the
//! nested-box descent that exhibits shifts avoiding every fractional-part
//! neighbourhood, growth-subsequence plumbing, epsilon certificates with
//! exhaustive finite windows, and the summability experiment behind the
//! almost-everywhere equality.

use crate::bestapprox::{
    check_rank, compute_best_approx, floor_rat_pow, subsequence_extract, RankCheck,
};
use crate::error::{BadSetError, NumError};
use crate::linalg::TargetMatrix;
use crate::numerics::{
    rat, rat_int, weighted_norm, weighted_norm_int, CertReal, Rat, WeightVector, WeightedValue,
    DEFAULT_CAP,
};
use crate::sampling::{low_discrepancy_points, SplitMix64};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::cmp::Ordering;

/// Certified floor of a nonnegative certified real.
fn floor_cert(x: &CertReal) -> Result<BigInt, NumError> {
    if let Some(r) = x.as_rat() {
        return Ok(r.floor().to_integer());
    }
    let mut prec = 32u32;
    loop {
        let iv = x.enclosure(prec)?;
        let lo = iv.lo.floor().to_integer();
        let hi = iv.hi.floor().to_integer();
        if lo == hi {
            return Ok(lo);
        }
        // straddling an integer boundary: try to decide exactly
        let hi_cert = CertReal::from(&hi);
        match x.compare_cap(&hi_cert, DEFAULT_CAP) {
            Ok(Ordering::Less) => return Ok(lo),
            Ok(_) => return Ok(hi),
            Err(_) => {}
        }
        if prec >= 1 << 14 {
            return Err(NumError::PrecisionExhausted {
                cap: prec,
                lhs: format!("{x:?}"),
                rhs: "floor".into(),
            });
        }
        prec *= 4;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    First,
    Random(u64),
}

/// Per-level trace of the descent.
#[derive(Clone, Debug, Serialize)]
pub struct LevelTrace {
    pub level: usize,
    /// Children laid out inside the followed parent.
    pub children: u64,
    /// Children avoiding the slab neighbourhood.
    pub survivors: u64,
    /// The proof's lower bound `c Y_k^{-1} Y_{k+1}` (as a float for the
    /// report; the floor-adjusted comparison is done exactly).
    pub required: f64,
    /// `survivors >= floor(required)`.
    pub count_ok: bool,
}

#[derive(Clone, Debug)]
pub struct CantorResult {
    /// Lower corner of the surviving terminal box.
    pub theta: Vec<CertReal>,
    pub trace: Vec<LevelTrace>,
    /// `c = 1 - 2 alpha - 3 n R^{-delta_r}`.
    pub c_value: f64,
}

impl CantorResult {
    pub fn theta_rational(&self) -> Option<Vec<Rat>> {
        self.theta.iter().map(|t| t.as_rat().cloned()).collect()
    }
}

/// Nested-box descent: given vectors `y_1, ..., y_{depth+1}` whose weighted
/// norms grow by at least `R` per step, produce a point whose inner products
/// with every `y_k` (`k <= depth`) stay at distance at least `alpha` from
/// the integers. Children of a level-`k` box are pruned against the slab
/// family of `y_k`; the final box is a translate of the level-`(depth+1)`
/// box, so all `depth` constraints hold on it exactly.
pub fn cantor_descend(
    ys: &[Vec<BigInt>],
    alpha: &Rat,
    r: &WeightVector,
    r_factor: &Rat,
    depth: usize,
    selector: Selector,
) -> Result<CantorResult, BadSetError> {
    let n = r.dim();
    if !(alpha.is_positive() && alpha < &rat(1, 2)) {
        return Err(BadSetError::BadParameter(format!(
            "alpha must lie in (0, 1/2), got {alpha}"
        )));
    }
    if ys.len() < depth + 1 {
        return Err(BadSetError::Precondition(format!(
            "need {} vectors for depth {depth}, have {}",
            depth + 1,
            ys.len()
        )));
    }
    for y in ys {
        if y.len() != n {
            return Err(BadSetError::Precondition("vector dimension mismatch".into()));
        }
    }
    // norms and the ratio hypothesis
    let norms: Vec<WeightedValue> = ys
        .iter()
        .map(|y| weighted_norm_int(y, r).map_err(BadSetError::from))
        .collect::<Result<_, _>>()?;
    for k in 0..depth {
        let thr = norms[k].value_cert() * CertReal::from_rat(r_factor.clone());
        let ord = norms[k + 1]
            .value_cert()
            .compare(&thr)
            .map_err(BadSetError::from)?;
        if ord == Ordering::Less {
            return Err(BadSetError::Precondition(format!(
                "norm ratio below R = {r_factor} at step {}",
                k + 1
            )));
        }
    }
    // c = 1 - 2 alpha - 3 n R^{-delta_r} must be positive
    let c = CertReal::one()
        - CertReal::from_rat(alpha * rat_int(2))
        - CertReal::from_int(3 * n as i64)
            * CertReal::from_rat(r_factor.clone()).pow(-r.delta());
    if c.sign().map_err(BadSetError::from)? <= 0 {
        return Err(BadSetError::Precondition(
            "c = 1 - 2 alpha - 3 n R^{-delta_r} must be positive".into(),
        ));
    }

    let mut rng = match selector {
        Selector::First => None,
        Selector::Random(seed) => Some(SplitMix64::new(seed)),
    };
    // level-k boxes have sides Y_k^{-r_i}; level 0 is [0,1]^n (Y_0 = 1)
    let side = |level: usize, i: usize| -> CertReal {
        if level == 0 {
            CertReal::one()
        } else {
            norms[level - 1].value_cert().pow(-r.get(i).clone())
        }
    };
    let mut corner: Vec<CertReal> = vec![CertReal::zero(); n];
    let mut trace = Vec::with_capacity(depth);
    for level in 0..=depth {
        // children of the level box are translates of the level+1 box
        let mut counts = Vec::with_capacity(n);
        for i in 0..n {
            let ratio = side(level, i) / side(level + 1, i);
            let cnt = floor_cert(&ratio)
                .map_err(BadSetError::from)?
                .to_u64()
                .unwrap_or(0);
            if cnt == 0 {
                return Err(BadSetError::Precondition(format!(
                    "no room for children at level {level}, axis {i}"
                )));
            }
            counts.push(cnt);
        }
        if level == 0 {
            // no constraint yet: take the anchor child
            continue;
        }
        let y = &ys[level - 1];
        let child_sides: Vec<CertReal> = (0..n).map(|i| side(level + 1, i)).collect();
        let mut survivors: Vec<Vec<u64>> = Vec::new();
        let mut idx = vec![0u64; n];
        'grid: loop {
            // child corner and the range of <y, .> over the child
            let child_corner: Vec<CertReal> = (0..n)
                .map(|i| {
                    corner[i].clone()
                        + CertReal::from_int(idx[i] as i64) * child_sides[i].clone()
                })
                .collect();
            if child_avoids_slabs(y, &child_corner, &child_sides, alpha)? {
                survivors.push(idx.clone());
            }
            let mut i = n;
            loop {
                if i == 0 {
                    break 'grid;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < counts[i] {
                    break;
                }
                idx[i] = 0;
            }
        }
        if survivors.is_empty() {
            return Err(BadSetError::NoSurvivor { level });
        }
        // the proof's bound c Y_k^{-1} Y_{k+1}, floor-adjusted
        let required = c.clone() * norms[level].value_cert()
            / norms[level - 1].value_cert();
        let required_floor = floor_cert(&required).map_err(BadSetError::from)?;
        let count_ok = BigInt::from(survivors.len() as u64) >= required_floor;
        let children: u64 = counts.iter().product();
        trace.push(LevelTrace {
            level,
            children,
            survivors: survivors.len() as u64,
            required: required.to_f64(),
            count_ok,
        });
        let pick = match &mut rng {
            None => 0usize,
            Some(rng) => rng.next_below(survivors.len() as u64) as usize,
        };
        let chosen = &survivors[pick];
        for i in 0..n {
            corner[i] = corner[i].clone()
                + CertReal::from_int(chosen[i] as i64) * child_sides[i].clone();
        }
    }
    Ok(CantorResult {
        theta: corner,
        trace,
        c_value: c.to_f64(),
    })
}

/// A closed box avoids the open slab family `dist(<y, .>, Z) < alpha` iff
/// the range `[m, M]` of the linear functional over the box fits inside
/// `[j + alpha, j + 1 - alpha]` for some integer `j`; the candidate
/// `j = floor(m - alpha)` is the only one that can work.
fn child_avoids_slabs(
    y: &[BigInt],
    corner: &[CertReal],
    sides: &[CertReal],
    alpha: &Rat,
) -> Result<bool, BadSetError> {
    let mut m_lo = CertReal::zero();
    let mut m_hi = CertReal::zero();
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let a = CertReal::from(yi) * corner[i].clone();
        let b = CertReal::from(yi) * (corner[i].clone() + sides[i].clone());
        if yi.is_negative() {
            m_lo = m_lo + b;
            m_hi = m_hi + a;
        } else {
            m_lo = m_lo + a;
            m_hi = m_hi + b;
        }
    }
    let j = floor_cert(&(m_lo.clone() - CertReal::from_rat(alpha.clone())))
        .map_err(BadSetError::from)?;
    // j + alpha <= m_lo holds by the floor; check M <= j + 1 - alpha
    let rhs = CertReal::from(&j) + CertReal::from_rat(Rat::one() - alpha);
    match m_hi.compare_cap(&rhs, DEFAULT_CAP) {
        Ok(Ordering::Greater) => Ok(false),
        Ok(_) => Ok(true),
        Err(_) => Ok(false), // undecided at the cap: not a certified survivor
    }
}

/// Exact verification that a point satisfies all level constraints.
pub fn verify_distance_constraints(
    ys: &[Vec<BigInt>],
    theta: &[CertReal],
    alpha: &Rat,
    depth: usize,
) -> Result<bool, BadSetError> {
    for y in ys.iter().take(depth) {
        let mut ip = CertReal::zero();
        for (i, yi) in y.iter().enumerate() {
            if !yi.is_zero() {
                ip = ip + CertReal::from(yi) * theta[i].clone();
            }
        }
        let nearest = ip
            .nearest_int_candidates(DEFAULT_CAP)
            .map_err(BadSetError::from)?;
        for cand in nearest {
            let d = (ip.clone() - CertReal::from(&cand)).abs();
            match d.compare_rat(alpha) {
                Ok(Ordering::Less) => return Ok(false),
                Ok(_) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(true)
}

/// `epsilon = (1/R) (alpha^2 / (4 m n))^{1/delta}`.
pub fn epsilon_from_alpha(
    alpha: &Rat,
    r_factor: &Rat,
    m: usize,
    n: usize,
    delta: &Rat,
) -> Result<CertReal, BadSetError> {
    if !(alpha.is_positive() && alpha < &rat(1, 2)) {
        return Err(BadSetError::BadParameter(format!("alpha = {alpha}")));
    }
    if r_factor <= &Rat::one() {
        return Err(BadSetError::BadParameter(format!("R = {r_factor}")));
    }
    if !delta.is_positive() {
        return Err(BadSetError::BadParameter(format!("delta = {delta}")));
    }
    let base = alpha * alpha / rat_int(4 * (m * n) as i64);
    Ok(CertReal::from_rat(r_factor.recip())
        * CertReal::from_rat(base).pow(delta.recip()))
}

/// Smallest power of two `R` with `c = 1 - 2 alpha - 3 n R^{-delta_r}` at
/// least `1/10`.
pub fn r_of_alpha(alpha: &Rat, r: &WeightVector) -> Result<Rat, BadSetError> {
    let n = r.dim();
    if !(alpha.is_positive() && alpha < &rat(1, 2)) {
        return Err(BadSetError::BadParameter(format!("alpha = {alpha}")));
    }
    let slack = Rat::one() - alpha * rat_int(2) - rat(1, 10);
    if !slack.is_positive() {
        return Err(BadSetError::BadParameter(
            "alpha too close to 1/2 for c >= 1/10".into(),
        ));
    }
    let mut rf = rat_int(2);
    loop {
        // need 3 n R^{-delta_r} <= slack
        let lhs = CertReal::from_int(3 * n as i64)
            * CertReal::from_rat(rf.clone()).pow(-r.delta());
        if matches!(
            lhs.compare_rat(&slack),
            Ok(Ordering::Less | Ordering::Equal)
        ) {
            return Ok(rf);
        }
        rf *= rat_int(2);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowViolation {
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub product: f64,
}

/// Exhaustively check `||p||_s ||^tA p - q - theta||_r >= epsilon` over the
/// window `0 < ||p||_s <= check_bound` (with `q` the minimizing integer
/// vector). Returns all violations.
pub fn epsilon_window_check(
    a: &TargetMatrix,
    s: &WeightVector,
    r: &WeightVector,
    theta: &[CertReal],
    epsilon: &CertReal,
    check_bound: &Rat,
    budget: u64,
) -> Result<Vec<WindowViolation>, BadSetError> {
    assert_eq!(theta.len(), a.n);
    let bounds: Vec<BigInt> = (0..a.m)
        .map(|i| floor_rat_pow(check_bound, s.get(i)))
        .collect();
    let mut violations = Vec::new();
    let mut p: Vec<BigInt> = bounds.iter().map(|b| -b.clone()).collect();
    let mut examined = 0u64;
    'outer: loop {
        if !p.iter().all(|x| x.is_zero()) {
            examined += 1;
            if examined > budget {
                return Err(BadSetError::BestApprox(
                    crate::error::BestApproxError::BudgetExceeded { examined, budget },
                ));
            }
            let n_p = weighted_norm_int(&p, s).map_err(BadSetError::from)?;
            if n_p
                .compare_rat(check_bound)
                .map(|o| o != Ordering::Greater)
                .unwrap_or(false)
            {
                // v = ^tA p - theta; q = nearest integer vector
                let mut best: Option<(WeightedValue, Vec<BigInt>)> = None;
                let v: Vec<CertReal> = (0..a.n)
                    .map(|j| {
                        let mut acc = -theta[j].clone();
                        for (i, pi) in p.iter().enumerate() {
                            if !pi.is_zero() {
                                acc = acc + a.at(i, j).clone() * CertReal::from(pi);
                            }
                        }
                        acc
                    })
                    .collect();
                let mut cands = Vec::with_capacity(a.n);
                for coord in &v {
                    cands.push(coord.nearest_int_candidates(DEFAULT_CAP).map_err(BadSetError::from)?);
                }
                let mut combo = vec![0usize; a.n];
                loop {
                    let q: Vec<BigInt> = combo
                        .iter()
                        .enumerate()
                        .map(|(j, &c)| cands[j][c].clone())
                        .collect();
                    let diffs: Vec<CertReal> = v
                        .iter()
                        .zip(&q)
                        .map(|(vj, qj)| vj.clone() - CertReal::from(qj))
                        .collect();
                    let err = weighted_norm(&diffs, r).map_err(BadSetError::from)?;
                    best = match best {
                        None => Some((err, q)),
                        Some((b, bq)) => {
                            if err.compare(&b).map(|o| o == Ordering::Less).unwrap_or(false) {
                                Some((err, q))
                            } else {
                                Some((b, bq))
                            }
                        }
                    };
                    let mut j = a.n;
                    loop {
                        if j == 0 {
                            break;
                        }
                        j -= 1;
                        combo[j] += 1;
                        if combo[j] < cands[j].len() {
                            break;
                        }
                        combo[j] = 0;
                    }
                    if combo.iter().all(|&c| c == 0) {
                        break;
                    }
                }
                let (err, q) = best.unwrap();
                let product = n_p.value_cert() * err.value_cert();
                match product.compare(epsilon) {
                    Ok(Ordering::Less) => violations.push(WindowViolation {
                        p: p.iter().map(|x| x.to_string()).collect(),
                        q: q.iter().map(|x| x.to_string()).collect(),
                        product: product.to_f64(),
                    }),
                    Ok(_) => {}
                    Err(e) => return Err(BadSetError::Num(e)),
                }
            }
        }
        let mut i = a.m;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            p[i] += BigInt::one();
            if p[i] <= bounds[i] {
                break;
            }
            p[i] = -bounds[i].clone();
        }
    }
    Ok(violations)
}

#[derive(Clone, Debug, Serialize)]
pub struct BadCertificate {
    pub theta: Vec<String>,
    pub alpha: String,
    pub epsilon: f64,
    pub r_factor: String,
    pub depth: usize,
    pub check_bound: String,
    pub window_pass: bool,
    pub window_violations: Vec<WindowViolation>,
    pub levels: Vec<LevelTrace>,
    /// The growth-subsequence successor property could not be verified; the
    /// epsilon guarantee of the proof is then not underwritten by the data.
    pub caveats: Vec<String>,
}

/// Full certificate pipeline: rank check, best approximations of the
/// transpose, growth subsequence at `R(alpha)`, descent, and the
/// finite-window epsilon check.
#[allow(clippy::too_many_arguments)]
pub fn bad_certificate(
    a: &TargetMatrix,
    s: &WeightVector,
    r: &WeightVector,
    alpha: &Rat,
    depth: usize,
    check_bound: &Rat,
    selector: Selector,
    budget: u64,
) -> Result<BadCertificate, BadSetError> {
    if let RankCheck::Degenerate { witness } = check_rank(a, 16)? {
        return Err(BadSetError::BestApprox(
            crate::error::BestApproxError::DegenerateRank {
                witness: format!("{witness:?}"),
            },
        ));
    }
    let r_factor = r_of_alpha(alpha, r)?;
    let at = a.transpose();
    // grow the search bound until the subsequence is deep enough
    let mut n_bound = rat_int(1024);
    let (seq, sub) = loop {
        let seq = compute_best_approx(&at, r, s, &n_bound, budget)?;
        let sub = subsequence_extract(&seq, &r_factor)?;
        if sub.indices.len() >= depth + 1 {
            break (seq, sub);
        }
        n_bound *= rat_int(8);
    };
    let mut caveats = Vec::new();
    if !sub.successor_ok {
        caveats.push(
            "growth subsequence lacks the successor property; the epsilon \
             guarantee is not underwritten"
                .into(),
        );
    }
    caveats.push(
        "superexponential growth of the full sequence is only verified on \
         the computed window"
            .into(),
    );
    let ys: Vec<Vec<BigInt>> = sub.indices[..depth + 1]
        .iter()
        .map(|&i| seq.entries[i].x.clone())
        .collect();
    let descent = cantor_descend(&ys, alpha, r, &r_factor, depth, selector)?;
    if !verify_distance_constraints(&ys, &descent.theta, alpha, depth)? {
        return Err(BadSetError::Precondition(
            "descent produced a point violating its own constraints".into(),
        ));
    }
    let delta = crate::numerics::rat_min(s.delta(), r.delta());
    let epsilon = epsilon_from_alpha(alpha, &r_factor, a.m, a.n, &delta)?;
    let violations =
        epsilon_window_check(a, s, r, &descent.theta, &epsilon, check_bound, budget)?;
    Ok(BadCertificate {
        theta: descent
            .theta
            .iter()
            .map(|t| match t.as_rat() {
                Some(rr) => crate::numerics::format_rat(rr),
                None => format!("~{}", t.to_f64()),
            })
            .collect(),
        alpha: crate::numerics::format_rat(alpha),
        epsilon: epsilon.to_f64(),
        r_factor: crate::numerics::format_rat(&r_factor),
        depth,
        check_bound: crate::numerics::format_rat(check_bound),
        window_pass: violations.is_empty(),
        window_violations: violations,
        levels: descent.trace,
        caveats,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BcLevel {
    pub k: usize,
    pub y: f64,
    pub measure_bound: f64,
    pub hit_fraction: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BcReport {
    pub eta: String,
    pub levels: Vec<BcLevel>,
    /// Fraction of samples with no membership in the second half of the
    /// computed range (the finite-window proxy for "only finitely many").
    pub escaped_fraction: f64,
}

/// Membership statistics of sampled shifts in the neighbourhood sets
/// `S_k = { y : dist(<y, q_k>, Z) < Y_k^{-eta} }` with `eta = delta
/// epsilon / 2`, against the summable measure bound `2 n Y_k^{-eta}`.
pub fn borel_cantelli_experiment(
    a: &TargetMatrix,
    s: &WeightVector,
    r: &WeightVector,
    epsilon: &Rat,
    sample_count: usize,
    seed: u64,
    n_bound: &Rat,
    budget: u64,
) -> Result<BcReport, BadSetError> {
    let at = a.transpose();
    let seq = compute_best_approx(&at, r, s, n_bound, budget)?;
    let delta = crate::numerics::rat_min(s.delta(), r.delta());
    let eta = delta * epsilon / rat_int(2);
    let thetas = low_discrepancy_points(a.n, sample_count, seed);
    let mut levels = Vec::with_capacity(seq.entries.len());
    let mut last_hit: Vec<Option<usize>> = vec![None; sample_count];
    for (k, e) in seq.entries.iter().enumerate() {
        let y_val = e.y.value_cert();
        let threshold = y_val.pow(-eta.clone());
        let mut hits = 0usize;
        for (j, theta) in thetas.iter().enumerate() {
            // dist(<theta, q_k>, Z), exact rational
            let mut ip = Rat::zero();
            for (i, qi) in e.x.iter().enumerate() {
                if !qi.is_zero() {
                    ip += &theta[i] * Rat::from_integer(qi.clone());
                }
            }
            let frac = &ip - ip.floor();
            let d = crate::numerics::rat_min(frac.clone(), Rat::one() - &frac);
            if matches!(
                CertReal::from_rat(d).compare_cap(&threshold, DEFAULT_CAP),
                Ok(Ordering::Less)
            ) {
                hits += 1;
                last_hit[j] = Some(k);
            }
        }
        let bound = CertReal::from_int(2 * a.n as i64) * threshold;
        levels.push(BcLevel {
            k: k + 1,
            y: e.y.to_f64(),
            measure_bound: bound.to_f64(),
            hit_fraction: hits as f64 / sample_count.max(1) as f64,
        });
    }
    let half = seq.entries.len() / 2;
    let escaped = last_hit
        .iter()
        .filter(|h| h.map(|k| k < half).unwrap_or(true))
        .count();
    Ok(BcReport {
        eta: crate::numerics::format_rat(&eta),
        levels,
        escaped_fraction: escaped as f64 / sample_count.max(1) as f64,
    })
}
