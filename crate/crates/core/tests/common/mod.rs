//! Shared test helpers: the independent continued-fraction oracle and
//! seeded random-instance generators. The oracle takes only the certified
//! enclosure API and classical recurrences; it never touches the
//! best-approximation engine it is used to check.

use diokit::numerics::{CertReal, Rat};
use diokit::sampling::SplitMix64;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Certified floor by enclosure refinement (irrational inputs only hit the
/// refinement path; rationals are exact).
fn floor_of(x: &CertReal) -> BigInt {
    if let Some(r) = x.as_rat() {
        return r.floor().to_integer();
    }
    let mut prec = 32;
    loop {
        let iv = x.enclosure(prec).expect("oracle enclosure");
        let lo = iv.lo.floor().to_integer();
        let hi = iv.hi.floor().to_integer();
        if lo == hi {
            return lo;
        }
        prec *= 2;
        assert!(prec < 1 << 14, "oracle floor did not converge");
    }
}

/// First `count` distinct continued-fraction convergent denominators of a
/// positive irrational, by the classical recurrence
/// `q_k = a_k q_{k-1} + q_{k-2}`.
pub fn cf_denominators(x: &CertReal, count: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::new();
    let mut q_prev = BigInt::zero(); // q_{-1}
    let mut q_cur = BigInt::one(); // q_0
    out.push(q_cur.clone());
    let mut cur = x.clone();
    let mut a = floor_of(&cur);
    while out.len() < count {
        // x_{k+1} = 1 / (x_k - a_k)
        cur = CertReal::one() / (cur - CertReal::from(&a));
        a = floor_of(&cur);
        let q_next = &a * &q_cur + &q_prev;
        q_prev = std::mem::replace(&mut q_cur, q_next);
        if q_cur != *out.last().unwrap() {
            out.push(q_cur.clone());
        }
    }
    out
}

/// Random nonsingular rational matrix, entries `p/q` with small parts.
pub fn random_rational_cols(rng: &mut SplitMix64, dim: usize) -> Vec<Vec<Rat>> {
    loop {
        let cols: Vec<Vec<Rat>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let mut r = rng.next_rat(4, 3);
                        if r.is_zero() {
                            r = Rat::one();
                        }
                        r
                    })
                    .collect()
            })
            .collect();
        let rows: Vec<Vec<Rat>> = (0..dim)
            .map(|i| (0..dim).map(|j| cols[j][i].clone()).collect())
            .collect();
        if !diokit::linalg::rational_det(&rows).is_zero() {
            return cols;
        }
    }
}

/// Random positive rational weight vector of the given dimension (sums to 1).
pub fn random_weights(rng: &mut SplitMix64, dim: usize) -> diokit::WeightVector {
    let parts: Vec<Rat> = (0..dim)
        .map(|_| Rat::from_integer(BigInt::from(1 + rng.next_below(9) as i64)))
        .collect();
    let total: Rat = parts.iter().sum();
    diokit::WeightVector::new(parts.into_iter().map(|p| p / &total).collect()).unwrap()
}

pub fn elapsed_line(name: &str, start: std::time::Instant, pass: bool) {
    println!(
        "acceptance {name}: {} ({:.2}s)",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
}
