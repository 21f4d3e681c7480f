//! Estimators for the ordinary/uniform, weighted/multiplicative,
//! homogeneous/inhomogeneous exponent families.
//!
//! Finite data can certify witnesses, not limits. The conventions used
//! throughout:
//!
//! * every per-scale ratio `u = -log(err) / log(T)` reported as certified is
//!   backed by an explicit witness whose defining inequalities hold under
//!   exact re-evaluation, with a `2^-32` margin absorbed into the exponent
//!   so the strict form holds;
//! * the uniform point estimate is the minimum of the per-scale ratios over
//!   the tail of the searched range;
//! * the ordinary point estimate is the maximum of the incremental slopes of
//!   `-log(err)` against `log(scale)` over the tail, floored by the uniform
//!   estimate (`liminf <= limsup` holds by construction);
//! * `lower_bound` is the minimum certified per-scale ratio (for
//!   inhomogeneous data: the ratio at the largest scale, where the search is
//!   exhaustive below the scale).

use crate::bestapprox::BestApproxSequence;
use crate::error::{BestApproxError, NumError};
use crate::numerics::{
    ln_bounds, pow2, rat_cmp, rat_to_f64, weighted_norm, CertReal, Rat, RatInterval,
    WeightVector, WeightedValue,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::cmp::Ordering;

/// Ratios above this value set the `capped` flag (an apparent infinity).
pub const DEFAULT_RATIO_CAP: f64 = 50.0;

/// Strictness margin subtracted from certified ratios so that the defining
/// inequalities hold strictly at the reported exponent.
fn strict_margin() -> Rat {
    pow2(-32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentKind {
    pub uniform: bool,
    pub multiplicative: bool,
    pub inhomogeneous: bool,
}

impl ExponentKind {
    pub fn label(&self) -> String {
        format!(
            "{}-{}-{}",
            if self.uniform { "uniform" } else { "ordinary" },
            if self.multiplicative { "multiplicative" } else { "weighted" },
            if self.inhomogeneous { "inhomogeneous" } else { "homogeneous" },
        )
    }
}

/// One certified data point of a ratio series: a witness at scale
/// `exp(ln_scale)` achieving error `exp(-neg_ln_err)`.
#[derive(Clone, Debug)]
pub struct RatioPoint {
    pub ln_scale: f64,
    pub neg_ln_err: f64,
    /// Conservative rational bounds used for the certified quotient:
    /// lower bound of `-ln err` and upper bound of `ln scale`.
    pub cert_neg_ln_err_lo: Rat,
    pub cert_ln_scale_hi: Rat,
    pub q_desc: String,
    pub p_desc: String,
    /// Scale is a search bound rather than the next witness threshold;
    /// excluded from slope estimation.
    pub anchored: bool,
}

impl RatioPoint {
    pub fn ratio(&self) -> f64 {
        self.neg_ln_err / self.ln_scale
    }

    /// Certified rational lower bound on the per-scale ratio.
    pub fn certified_ratio(&self) -> Rat {
        if !self.cert_ln_scale_hi.is_positive() {
            return Rat::zero();
        }
        &self.cert_neg_ln_err_lo / &self.cert_ln_scale_hi - strict_margin()
    }
}

/// A monotone series of best-so-far witnesses indexed by scale.
#[derive(Clone, Debug, Default)]
pub struct RatioSeries {
    pub points: Vec<RatioPoint>,
    /// An exact (or certified-beyond-cap) zero error was hit: the exponent
    /// is unbounded at that scale and the estimate reports as capped.
    pub hit_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessRecord {
    pub ln_scale: f64,
    pub ratio: f64,
    pub certified_ratio: String,
    pub q: String,
    pub p: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentEstimate {
    pub kind: ExponentKind,
    /// Certified rational lower-bound statement (see module docs for the
    /// exact finite-data semantics), rendered as `p/q`.
    pub lower_bound: String,
    #[serde(skip)]
    pub lower_bound_rat: Rat,
    pub point_estimate: f64,
    /// Natural-log range of scales actually searched.
    pub t_range: (f64, f64),
    pub witnesses: Vec<WitnessRecord>,
    pub capped: bool,
}

impl ExponentEstimate {
    pub fn lower_bound_f64(&self) -> f64 {
        rat_to_f64(&self.lower_bound_rat)
    }
}

fn tail_start(points: &[RatioPoint]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let max_ln = points.last().unwrap().ln_scale;
    let cut = max_ln / 2.0;
    let mut start = points.iter().position(|p| p.ln_scale >= cut).unwrap_or(0);
    if points.len() >= 3 {
        start = start.min(points.len() - 3);
    }
    start
}

/// Assemble an estimate from a ratio series.
pub fn estimate_from_series(
    series: &RatioSeries,
    kind: ExponentKind,
    homogeneous_dirichlet: bool,
    cap: f64,
) -> ExponentEstimate {
    let pts = &series.points;
    if pts.is_empty() {
        // a fully degenerate search (every record an exact hit)
        return ExponentEstimate {
            kind,
            lower_bound: "0".into(),
            lower_bound_rat: Rat::zero(),
            point_estimate: if series.hit_zero { cap } else { f64::NAN },
            t_range: (0.0, 0.0),
            witnesses: Vec::new(),
            capped: series.hit_zero,
        };
    }
    let start = tail_start(pts);
    let tail = &pts[start..];

    // uniform part: minimum per-scale ratio over the tail
    let mut unif_pe = f64::INFINITY;
    for p in tail {
        unif_pe = unif_pe.min(p.ratio());
    }
    // ordinary part: maximal chord slope between matched witness
    // transitions over the tail, using for each right endpoint the smallest
    // window of at least one natural-log unit (shorter windows are noise on
    // a step curve); anchored points carry a search bound, not a witness
    // threshold, and are excluded
    let mut max_slope = f64::NEG_INFINITY;
    for j in 1..tail.len() {
        if tail[j].anchored {
            continue;
        }
        let mut i = j;
        while i > 0 && tail[j].ln_scale - tail[i - 1].ln_scale < 1.0 {
            i -= 1;
        }
        if i == 0 {
            continue;
        }
        let base = &tail[i - 1];
        if base.anchored {
            continue;
        }
        let dx = tail[j].ln_scale - base.ln_scale;
        max_slope = max_slope.max((tail[j].neg_ln_err - base.neg_ln_err) / dx);
    }

    let point_estimate = if kind.uniform {
        unif_pe
    } else if kind.inhomogeneous {
        // equality-calibrated statistic: the per-scale ratio at the largest
        // exhaustively searched scale
        pts.last().unwrap().ratio()
    } else {
        unif_pe.max(max_slope)
    };

    // certified lower bound
    let mut min_cert: Option<Rat> = None;
    for p in pts {
        let c = p.certified_ratio();
        min_cert = Some(match min_cert {
            None => c,
            Some(m) => {
                if rat_cmp(&c, &m) == Ordering::Less {
                    c
                } else {
                    m
                }
            }
        });
    }
    let mut lower_bound = min_cert.unwrap_or_else(Rat::zero);
    if !kind.uniform {
        if homogeneous_dirichlet {
            // the weighted Dirichlet bound: omega >= 1 whenever the data
            // certifies every scale at ratio >= 1
            if !lower_bound.is_negative() && rat_cmp(&lower_bound, &Rat::one()) != Ordering::Less {
                lower_bound = Rat::one();
            }
        } else {
            // inhomogeneous ordinary: anchored at the largest exhaustively
            // searched scale
            lower_bound = pts.last().unwrap().certified_ratio();
        }
    }

    let capped =
        series.hit_zero || point_estimate > cap || pts.iter().any(|p| p.ratio() > cap);
    let point_estimate = if series.hit_zero { point_estimate.max(cap) } else { point_estimate };
    let witnesses = pts
        .iter()
        .map(|p| WitnessRecord {
            ln_scale: p.ln_scale,
            ratio: p.ratio(),
            certified_ratio: crate::numerics::format_rat(&p.certified_ratio()),
            q: p.q_desc.clone(),
            p: p.p_desc.clone(),
        })
        .collect();
    ExponentEstimate {
        kind,
        lower_bound: crate::numerics::format_rat(&lower_bound),
        lower_bound_rat: lower_bound,
        point_estimate,
        t_range: (pts[0].ln_scale, pts.last().unwrap().ln_scale),
        witnesses,
        capped,
    }
}

/// Conservative rational bounds of `ln` of a weighted value.
pub(crate) fn cert_ln(v: &WeightedValue, prec: u32) -> Result<RatInterval, NumError> {
    match v.ln_interval(prec)? {
        Some(iv) => Ok(iv),
        None => Err(NumError::DivisionByZero),
    }
}

/// Ratio series of a best-approximation sequence: point `k` pairs the error
/// `M_k` with the next threshold `Y_{k+1}` (the exhaustion bound for the
/// last entry), exactly the quantities of the exponent identities.
pub fn sequence_ratio_series(seq: &BestApproxSequence) -> Result<RatioSeries, BestApproxError> {
    let mut points = Vec::new();
    let n = seq.entries.len();
    for k in 0..n {
        let e = &seq.entries[k];
        let anchored = k + 1 >= n;
        let next_scale: WeightedValue = if k + 1 < n {
            seq.entries[k + 1].y.clone()
        } else {
            WeightedValue::from_rat(seq.exhausted_up_to.clone())
        };
        let ln_m = cert_ln(&e.m_val, 48).map_err(BestApproxError::from)?;
        let ln_y = cert_ln(&next_scale, 48).map_err(BestApproxError::from)?;
        if !ln_y.hi.is_positive() {
            continue; // scale 1: no information
        }
        points.push(RatioPoint {
            ln_scale: ln_y.to_f64(),
            neg_ln_err: -ln_m.to_f64(),
            cert_neg_ln_err_lo: -ln_m.hi.clone(),
            cert_ln_scale_hi: ln_y.hi.clone(),
            q_desc: format!("{:?}", e.x),
            p_desc: format!("{:?}", e.p_witness),
            anchored,
        });
    }
    Ok(RatioSeries { points, hit_zero: false })
}

/// Ordinary homogeneous estimate from a sequence (plus optional deep
/// probes).
pub fn estimate_ordinary_from_sequence(
    seq: &BestApproxSequence,
    probes: &[RatioPoint],
) -> Result<ExponentEstimate, BestApproxError> {
    let mut series = sequence_ratio_series(seq)?;
    series.points.extend(probes.iter().cloned());
    Ok(estimate_from_series(
        &series,
        ExponentKind { uniform: false, multiplicative: false, inhomogeneous: false },
        true,
        DEFAULT_RATIO_CAP,
    ))
}

pub fn estimate_uniform_from_sequence(
    seq: &BestApproxSequence,
) -> Result<ExponentEstimate, BestApproxError> {
    let series = sequence_ratio_series(seq)?;
    Ok(estimate_from_series(
        &series,
        ExponentKind { uniform: true, multiplicative: false, inhomogeneous: false },
        true,
        DEFAULT_RATIO_CAP,
    ))
}

/// Deep witnesses for the factorial series `sum base^{-j!}`: at level `k`
/// the denominator `q = base^{k!}` and truncation numerator give
/// `q L - p = q * tail` with `tail` in `(base^{-(k+1)!}, 2 base^{-(k+1)!})`,
/// so with `T = base^{k!+1}` the pair certifies the exact rational ratio
/// `((k+1)! - k! - 1) / (k! + 1)` through exponent arithmetic alone.
pub fn liouville_probes(base: u64, max_level: u32) -> Vec<RatioPoint> {
    assert!(base >= 2);
    let ln_b = ln_bounds(&Rat::from_integer(BigInt::from(base)), 64);
    let mut out = Vec::new();
    let mut fact: i64 = 1;
    for k in 1..=max_level as i64 {
        fact *= k;
        let next_fact = fact * (k + 1);
        // certified: -ln err >= (next_fact - fact - 1) ln base
        //            ln T    = (fact + 1) ln base
        let neg_err_exp = next_fact - fact - 1;
        let scale_exp = fact + 1;
        if neg_err_exp <= 0 {
            continue; // level 1 carries no information
        }
        let cert_err_lo = &ln_b.lo * Rat::from_integer(BigInt::from(neg_err_exp));
        let cert_scale_hi = &ln_b.hi * Rat::from_integer(BigInt::from(scale_exp));
        let lnb_mid = ln_b.to_f64();
        out.push(RatioPoint {
            ln_scale: scale_exp as f64 * lnb_mid,
            neg_ln_err: neg_err_exp as f64 * lnb_mid,
            cert_neg_ln_err_lo: cert_err_lo,
            cert_ln_scale_hi: cert_scale_hi,
            q_desc: format!("{base}^{fact}"),
            p_desc: format!("{base}^{fact} * S_{k}"),
            anchored: false,
        });
    }
    out
}

/// Exact witness data of a factorial-series probe at a small level, for
/// cross-checking the symbolic route against direct evaluation.
pub fn liouville_probe_witness(base: u64, level: u32) -> (BigInt, BigInt) {
    let mut fact: u64 = 1;
    for k in 1..=level as u64 {
        fact *= k;
    }
    let b = BigInt::from(base);
    let q = b.pow(fact as u32);
    let mut p = BigInt::zero();
    let mut jf: u64 = 1;
    for j in 1..=level as u64 {
        jf *= j;
        p += b.pow((fact - jf) as u32);
    }
    (q, p)
}

/// Geometric grid parameters: scales `2^{j/steps_per_octave}` running from
/// `2^{min_octave}` up to `2^{max_octave}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridParams {
    pub min_octave: u32,
    pub max_octave: u32,
    pub steps_per_octave: u32,
}

impl GridParams {
    pub fn new(min_octave: u32, max_octave: u32) -> Self {
        GridParams { min_octave, max_octave, steps_per_octave: 4 }
    }

    fn step_count(&self) -> usize {
        ((self.max_octave - self.min_octave) * self.steps_per_octave) as usize + 1
    }

    pub fn t_max(&self) -> u64 {
        1u64 << self.max_octave
    }
}

/// Running per-bucket best during a sweep, with certified f64 bounds of the
/// error; exact re-evaluation happens once per bucket at finalization.
pub(crate) struct BucketBest {
    pub(crate) err_ln_hi: f64,
    pub(crate) q: Vec<i64>,
    pub(crate) p: Vec<BigInt>,
}

pub struct SweepOutcome {
    pub series: RatioSeries,
    pub examined: u64,
}

/// Shared finalization: the distinct cumulative record holders, each paired
/// with the scale at which the next record appears (matched pairing, so
/// incremental slopes are unbiased); the final record is anchored at the
/// search bound. All logarithms are certified at the winners.
pub(crate) fn finalize_buckets(
    buckets: Vec<Option<BucketBest>>,
    grid: &GridParams,
    exact_err: &dyn Fn(&[i64], &[BigInt]) -> Result<WeightedValue, NumError>,
    scale_of: &dyn Fn(&[i64]) -> Result<WeightedValue, NumError>,
) -> Result<RatioSeries, NumError> {
    let mut winners: Vec<(Vec<i64>, Vec<BigInt>)> = Vec::new();
    let mut best_hi = f64::INFINITY;
    for b in buckets.into_iter().flatten() {
        if b.err_ln_hi < best_hi {
            best_hi = b.err_ln_hi;
            winners.push((b.q, b.p));
        }
    }
    let mut points = Vec::new();
    let mut hit_zero = false;
    let t_max_val = WeightedValue::from_rat(Rat::from_integer(BigInt::from(grid.t_max())));
    for i in 0..winners.len() {
        let (q, p) = &winners[i];
        let err = exact_err(q, p)?;
        if err.is_zero_exact() {
            hit_zero = true;
            continue;
        }
        let ln_err = match cert_ln(&err, 48) {
            Ok(iv) => iv,
            Err(NumError::PrecisionExhausted { .. }) | Err(NumError::DivisionByZero) => {
                // an error indistinguishable from zero at the cap
                hit_zero = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        let cur_scale = scale_of(q)?;
        let (scale, anchored) = if i + 1 < winners.len() {
            (scale_of(&winners[i + 1].0)?, false)
        } else {
            (t_max_val.clone(), true)
        };
        // the witness must lie strictly below the scale it certifies
        match cur_scale.compare(&scale) {
            Ok(Ordering::Less) => {}
            _ => continue,
        }
        let ln_scale = cert_ln(&scale, 48)?;
        if !ln_scale.hi.is_positive() {
            continue;
        }
        points.push(RatioPoint {
            ln_scale: ln_scale.to_f64(),
            neg_ln_err: -ln_err.to_f64(),
            cert_neg_ln_err_lo: -ln_err.hi.clone(),
            cert_ln_scale_hi: ln_scale.hi.clone(),
            q_desc: format!("{q:?}"),
            p_desc: format!("{p:?}"),
            anchored,
        });
    }
    Ok(RatioSeries { points, hit_zero })
}

/// Certified f64 upper bound of `ln` of the weighted max of interval
/// magnitudes, used only to rank candidates during sweeps.
fn ln_hi_of_norm(coords: &[RatInterval], weights: &WeightVector) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for (i, c) in coords.iter().enumerate() {
        let a = c.abs();
        let (_, hi) = crate::numerics::rat_to_f64_bounds(&a.hi);
        let w = rat_to_f64(weights.get(i));
        let l = if hi <= 0.0 { f64::NEG_INFINITY } else { hi.ln() / w };
        if l > best {
            best = l;
        }
    }
    best + 1e-12
}

/// Simultaneous-side sweep (`n = 1`): scalar `q` against the column
/// `alphas`, shift `theta`, error weights `s`. Scales are `|q|`.
pub fn sweep_simultaneous(
    alphas: &[CertReal],
    theta: &[Rat],
    s: &WeightVector,
    grid: &GridParams,
    budget: u64,
) -> Result<SweepOutcome, NumError> {
    let m = alphas.len();
    assert_eq!(theta.len(), m);
    assert_eq!(s.dim(), m);
    let t_max = grid.t_max();
    if t_max > budget {
        return Err(NumError::ExponentOverflow(format!(
            "sweep budget {budget} below scale {t_max}"
        )));
    }
    let prec = 160 + 64 - (t_max.leading_zeros().min(64));
    let enclosures: Vec<RatInterval> = alphas
        .iter()
        .map(|a| a.enclosure(prec))
        .collect::<Result<_, _>>()?;
    let mut buckets: Vec<Option<BucketBest>> = (0..grid.step_count()).map(|_| None).collect();
    let mut examined = 0u64;
    // accumulated q * alpha_i intervals, updated incrementally
    let mut acc: Vec<RatInterval> = (0..m).map(|_| RatInterval::point(Rat::zero())).collect();
    for q in 1..=t_max as i64 {
        examined += 1;
        for (i, e) in enclosures.iter().enumerate() {
            acc[i] = acc[i].add(e);
        }
        let bucket = bucket_of(q as f64, grid);
        if bucket >= buckets.len() {
            break;
        }
        for sign in [1i64, -1] {
            let mut coords = Vec::with_capacity(m);
            let mut p = Vec::with_capacity(m);
            for (i, a) in acc.iter().enumerate() {
                let v = if sign > 0 { a.clone() } else { a.neg() };
                let shifted = RatInterval::new(&v.lo - &theta[i], &v.hi - &theta[i]);
                let near = nearest_int_of_interval(&shifted);
                let d = RatInterval::new(
                    &shifted.lo - Rat::from_integer(near.clone()),
                    &shifted.hi - Rat::from_integer(near.clone()),
                );
                coords.push(d);
                p.push(near);
            }
            let ln_hi = ln_hi_of_norm(&coords, s);
            let better = match &buckets[bucket] {
                None => true,
                Some(b) => ln_hi < b.err_ln_hi,
            };
            if better {
                buckets[bucket] = Some(BucketBest { err_ln_hi: ln_hi, q: vec![sign * q], p });
            }
        }
    }
    let alphas = alphas.to_vec();
    let theta = theta.to_vec();
    let s_cl = s.clone();
    let exact = move |q: &[i64], p: &[BigInt]| -> Result<WeightedValue, NumError> {
        let diffs: Vec<CertReal> = alphas
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.clone() * CertReal::from_int(q[0])
                    - CertReal::from_rat(theta[i].clone())
                    - CertReal::from(&p[i])
            })
            .collect();
        weighted_norm(&diffs, &s_cl)
    };
    let scale_of = |q: &[i64]| -> Result<WeightedValue, NumError> {
        Ok(WeightedValue::from_rat(Rat::from_integer(BigInt::from(q[0].abs()))))
    };
    let series = finalize_buckets(buckets, grid, &exact, &scale_of)?;
    Ok(SweepOutcome { series, examined })
}

/// Dual-side sweep (`m = 1`): integer vectors `q` in the weighted box
/// against the row `alphas`, scalar shift `theta`, size weights `r`.
pub fn sweep_dual(
    alphas: &[CertReal],
    theta: &Rat,
    r: &WeightVector,
    grid: &GridParams,
    budget: u64,
) -> Result<SweepOutcome, NumError> {
    let n = alphas.len();
    assert_eq!(r.dim(), n);
    let t_max = Rat::from_integer(BigInt::from(grid.t_max()));
    let bounds: Vec<i64> = (0..n)
        .map(|i| {
            crate::bestapprox::floor_rat_pow(&t_max, r.get(i))
                .to_i64()
                .unwrap_or(i64::MAX)
        })
        .collect();
    let mut count: u64 = 1;
    for b in &bounds {
        count = count.saturating_mul((2 * *b + 1) as u64);
    }
    if count > budget {
        return Err(NumError::ExponentOverflow(format!(
            "sweep candidate count {count} over budget {budget}"
        )));
    }
    let prec = 192;
    let enclosures: Vec<RatInterval> = alphas
        .iter()
        .map(|a| a.enclosure(prec))
        .collect::<Result<_, _>>()?;
    let inv_w: Vec<f64> = (0..n).map(|i| 1.0 / rat_to_f64(r.get(i))).collect();
    let mut buckets: Vec<Option<BucketBest>> = (0..grid.step_count()).map(|_| None).collect();
    let mut q = vec![-bounds[0]; n];
    for (i, b) in bounds.iter().enumerate() {
        q[i] = -b;
    }
    let mut examined = 0u64;
    'outer: loop {
        if !q.iter().all(|&x| x == 0) {
            examined += 1;
            // ln ||q||_r = max_i ln|q_i| / r_i  (f64 with margin; boundary
            // cases resolved by bucket re-check at finalization scale)
            let mut ln_norm = f64::NEG_INFINITY;
            for (i, &x) in q.iter().enumerate() {
                if x != 0 {
                    ln_norm = ln_norm.max((x.abs() as f64).ln() * inv_w[i]);
                }
            }
            let bucket = bucket_of(ln_norm.exp(), grid);
            if bucket < buckets.len() {
                let mut acc = RatInterval::point(-theta.clone());
                for (i, &x) in q.iter().enumerate() {
                    if x != 0 {
                        acc = acc.add(&enclosures[i].mul_rat(&Rat::from_integer(BigInt::from(x))));
                    }
                }
                let near = nearest_int_of_interval(&acc);
                let d = RatInterval::new(
                    &acc.lo - Rat::from_integer(near.clone()),
                    &acc.hi - Rat::from_integer(near.clone()),
                );
                let ln_hi = ln_hi_of_norm(std::slice::from_ref(&d), &WeightVector::uniform(1));
                let better = match &buckets[bucket] {
                    None => true,
                    Some(b) => ln_hi < b.err_ln_hi,
                };
                if better {
                    buckets[bucket] = Some(BucketBest {
                        err_ln_hi: ln_hi,
                        q: q.clone(),
                        p: vec![near],
                    });
                }
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            q[i] += 1;
            if q[i] <= bounds[i] {
                break;
            }
            q[i] = -bounds[i];
        }
    }
    let alphas = alphas.to_vec();
    let theta = theta.clone();
    let exact = move |q: &[i64], p: &[BigInt]| -> Result<WeightedValue, NumError> {
        let mut acc = -CertReal::from_rat(theta.clone()) - CertReal::from(&p[0]);
        for (i, a) in alphas.iter().enumerate() {
            if q[i] != 0 {
                acc = acc + a.clone() * CertReal::from_int(q[i]);
            }
        }
        weighted_norm(std::slice::from_ref(&acc), &WeightVector::uniform(1))
    };
    let r_cl = r.clone();
    let scale_of = move |q: &[i64]| -> Result<WeightedValue, NumError> {
        let ints: Vec<BigInt> = q.iter().map(|&x| BigInt::from(x)).collect();
        crate::numerics::weighted_norm_int(&ints, &r_cl)
    };
    let series = finalize_buckets(buckets, grid, &exact, &scale_of)?;
    Ok(SweepOutcome { series, examined })
}

/// Multiplicative sweep for a single row (`m = 1`, `n <= 2`): the size is
/// `Pi_+(q) = prod max(1, |q_j|)` and the error is `|<alpha, q> - p - theta|`.
pub fn sweep_multiplicative(
    alphas: &[CertReal],
    theta: &Rat,
    grid: &GridParams,
    budget: u64,
) -> Result<SweepOutcome, NumError> {
    let n = alphas.len();
    assert!(n <= 2, "multiplicative sweep implemented for n <= 2");
    let t_max = grid.t_max() as i64;
    let prec = 192;
    let enclosures: Vec<RatInterval> = alphas
        .iter()
        .map(|a| a.enclosure(prec))
        .collect::<Result<_, _>>()?;
    let mut buckets: Vec<Option<BucketBest>> = (0..grid.step_count()).map(|_| None).collect();
    let mut examined = 0u64;
    let visit = |q: &[i64],
                     buckets: &mut Vec<Option<BucketBest>>,
                     examined: &mut u64|
     -> Result<(), NumError> {
        if q.iter().all(|&x| x == 0) {
            return Ok(());
        }
        *examined += 1;
        if *examined > budget {
            return Err(NumError::ExponentOverflow(format!(
                "multiplicative sweep over budget {budget}"
            )));
        }
        let pi_plus: i64 = q.iter().map(|&x| x.abs().max(1)).product();
        let bucket = bucket_of(pi_plus as f64, grid);
        if bucket >= buckets.len() {
            return Ok(());
        }
        let mut acc = RatInterval::point(-theta.clone());
        for (i, &x) in q.iter().enumerate() {
            if x != 0 {
                acc = acc.add(&enclosures[i].mul_rat(&Rat::from_integer(BigInt::from(x))));
            }
        }
        let near = nearest_int_of_interval(&acc);
        let d = RatInterval::new(
            &acc.lo - Rat::from_integer(near.clone()),
            &acc.hi - Rat::from_integer(near.clone()),
        );
        let ln_hi = ln_hi_of_norm(std::slice::from_ref(&d), &WeightVector::uniform(1));
        let better = match &buckets[bucket] {
            None => true,
            Some(b) => ln_hi < b.err_ln_hi,
        };
        if better {
            buckets[bucket] = Some(BucketBest { err_ln_hi: ln_hi, q: q.to_vec(), p: vec![near] });
        }
        Ok(())
    };
    if n == 1 {
        for q in -t_max..=t_max {
            visit(&[q], &mut buckets, &mut examined)?;
        }
    } else {
        for q1 in -t_max..=t_max {
            let b2 = t_max / q1.abs().max(1);
            for q2 in -b2..=b2 {
                visit(&[q1, q2], &mut buckets, &mut examined)?;
            }
        }
    }
    let alphas = alphas.to_vec();
    let theta = theta.clone();
    let exact = move |q: &[i64], p: &[BigInt]| -> Result<WeightedValue, NumError> {
        let mut acc = -CertReal::from_rat(theta.clone()) - CertReal::from(&p[0]);
        for (i, a) in alphas.iter().enumerate() {
            if q[i] != 0 {
                acc = acc + a.clone() * CertReal::from_int(q[i]);
            }
        }
        weighted_norm(std::slice::from_ref(&acc), &WeightVector::uniform(1))
    };
    let scale_of = |q: &[i64]| -> Result<WeightedValue, NumError> {
        let pi: i64 = q.iter().map(|&x| x.abs().max(1)).product();
        Ok(WeightedValue::from_rat(Rat::from_integer(BigInt::from(pi))))
    };
    let series = finalize_buckets(buckets, grid, &exact, &scale_of)?;
    Ok(SweepOutcome { series, examined })
}

/// Grid bucket of a scale value: the least grid index whose scale strictly
/// exceeds the value.
pub(crate) fn bucket_of(value: f64, grid: &GridParams) -> usize {
    if value <= 0.0 {
        return 0;
    }
    let l2 = value.log2();
    let steps = grid.steps_per_octave as f64;
    let j = ((l2 - grid.min_octave as f64) * steps).floor() + 1.0;
    if j < 0.0 {
        0
    } else {
        j as usize
    }
}

fn nearest_int_of_interval(iv: &RatInterval) -> BigInt {
    let mid = iv.midpoint();
    (mid + Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

pub fn estimate_from_grid_sweep(
    outcome: &SweepOutcome,
    kind: ExponentKind,
) -> ExponentEstimate {
    estimate_from_series(&outcome.series, kind, !kind.inhomogeneous, DEFAULT_RATIO_CAP)
}
