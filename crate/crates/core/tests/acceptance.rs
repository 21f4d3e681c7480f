//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its runtime. Tolerances and budgets are pinned here, not
//! configurable.

mod common;

use common::{cf_denominators, elapsed_line, random_rational_cols, random_weights};
use diokit::badset::{bad_certificate, r_of_alpha, verify_distance_constraints, Selector};
use diokit::bestapprox::{compute_best_approx, subsequence_extract};
use diokit::exponents::{
    estimate_from_grid_sweep, estimate_ordinary_from_sequence, estimate_uniform_from_sequence,
    liouville_probes, sweep_dual, sweep_simultaneous, ExponentKind, GridParams,
};
use diokit::grassmann::{
    binomial, def_equivalence_check, intermediate_exponent, random_int_multivector,
    transpose_identity_holds, Mode,
};
use diokit::lattice::{
    check_mahler_transfer, double_dual_is_identity, pairing_is_integer_exact,
    second_theorem_dual_bound, successive_minima, LatticeBasis, MahlerStatus, WeightedBox,
};
use diokit::linalg::TargetMatrix;
use diokit::numerics::{rat, rat_int, CertReal, Rat, WeightVector};
use diokit::sampling::SplitMix64;
use diokit::transference::{
    bl_validate, dyson_classical_bound, dyson_weighted_bound, Direction, DysonBoundInput, ExtRat,
    Verdict,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use std::time::Instant;

fn scalar(tok: CertReal) -> TargetMatrix {
    TargetMatrix::scalar(tok)
}

fn uniform1() -> WeightVector {
    WeightVector::uniform(1)
}

/// 1. Continued-fraction oracle equivalence: the first 20 best-approximation
/// denominators equal the convergent denominators, exactly. Runtime < 10 s.
#[test]
fn a01_continued_fraction_oracle() {
    let start = Instant::now();
    let mut pass = true;
    for (name, x) in [
        ("phi", CertReal::phi()),
        ("sqrt2", CertReal::sqrt_rat(rat_int(2))),
        ("sqrt3", CertReal::sqrt_rat(rat_int(3))),
    ] {
        let oracle = cf_denominators(&x, 20);
        let bound = Rat::from_integer(oracle.last().unwrap().clone());
        let seq = compute_best_approx(&scalar(x), &uniform1(), &uniform1(), &bound, 1 << 26)
            .unwrap();
        let engine: Vec<BigInt> = seq.entries.iter().map(|e| e.x[0].abs()).collect();
        if engine != oracle {
            eprintln!("{name}: engine {engine:?} oracle {oracle:?}");
            pass = false;
        }
    }
    let ok = pass && start.elapsed().as_secs_f64() < 10.0;
    elapsed_line("01 continued-fraction oracle", start, ok);
    assert!(ok);
}

/// 2. Exponent calibration: sqrt2 ordinary and uniform estimates within
/// 0.05 of 1 over Y <= 10^6; the factorial-series ordinary estimate
/// exceeds 10. Runtime < 30 s.
#[test]
fn a02_exponent_calibration() {
    let start = Instant::now();
    let bound = rat_int(1_000_000);
    let seq = compute_best_approx(
        &scalar(CertReal::sqrt_rat(rat_int(2))),
        &uniform1(),
        &uniform1(),
        &bound,
        1 << 26,
    )
    .unwrap();
    let ord = estimate_ordinary_from_sequence(&seq, &[]).unwrap();
    let unif = estimate_uniform_from_sequence(&seq).unwrap();
    let sqrt2_ok = (ord.point_estimate - 1.0).abs() < 0.05
        && (unif.point_estimate - 1.0).abs() < 0.05;

    let lseq = compute_best_approx(
        &scalar(CertReal::liouville(2)),
        &uniform1(),
        &uniform1(),
        &bound,
        1 << 26,
    )
    .unwrap();
    let probes = liouville_probes(2, 11);
    let lord = estimate_ordinary_from_sequence(&lseq, &probes).unwrap();
    let liouville_ok = lord.point_estimate > 10.0 || lord.capped;

    let ok = sqrt2_ok && liouville_ok && start.elapsed().as_secs_f64() < 30.0;
    elapsed_line("02 exponent calibration", start, ok);
    assert!(
        ok,
        "sqrt2 ord {} unif {} liouville {} capped {}",
        ord.point_estimate, unif.point_estimate, lord.point_estimate, lord.capped
    );
}

/// 3. Weighted-to-classical reduction identity on 1000 random instances,
/// exact rational equality. Runtime < 5 s.
#[test]
fn a03_weighted_dyson_reduction() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xD150);
    let mut pass = true;
    for _ in 0..1000 {
        let m = 1 + rng.next_below(5) as usize;
        let n = 1 + rng.next_below(5) as usize;
        // omega in [1, 100] rational
        let omega = Rat::one()
            + Rat::new(BigInt::from(rng.next_below(9900)), BigInt::from(100u32));
        let input = DysonBoundInput {
            m,
            n,
            s: WeightVector::uniform(m),
            r: WeightVector::uniform(n),
            omega: ExtRat::Finite(omega.clone()),
        };
        let w = dyson_weighted_bound(&input, Direction::Forward);
        let c = dyson_classical_bound(m, n, &ExtRat::Finite(omega));
        if w != c {
            pass = false;
        }
    }
    let ok = pass && start.elapsed().as_secs_f64() < 5.0;
    elapsed_line("03 weighted-classical identity", start, ok);
    assert!(ok);
}

/// 4. Fixed point: both bounds return exactly 1 at omega = 1 for all tested
/// weight/dimension combinations. Runtime < 1 s.
#[test]
fn a04_fixed_point() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xF1CED);
    let mut pass = true;
    for m in 1..=4usize {
        for n in 1..=4usize {
            if dyson_classical_bound(m, n, &ExtRat::finite(1, 1)) != ExtRat::Finite(Rat::one()) {
                pass = false;
            }
            for _ in 0..8 {
                let input = DysonBoundInput {
                    m,
                    n,
                    s: random_weights(&mut rng, m),
                    r: random_weights(&mut rng, n),
                    omega: ExtRat::finite(1, 1),
                };
                for dir in [Direction::Forward, Direction::Backward] {
                    if dyson_weighted_bound(&input, dir) != ExtRat::Finite(Rat::one()) {
                        pass = false;
                    }
                }
            }
        }
    }
    let ok = pass && start.elapsed().as_secs_f64() < 1.0;
    elapsed_line("04 fixed point", start, ok);
    assert!(ok);
}

/// Scale a box strictly inside the first minimum so the translate-lemma
/// hypothesis mu_1 > 1 is certified by construction.
fn box_below_mu1(l: &LatticeBasis) -> WeightedBox {
    let d = l.dim();
    let m1 = successive_minima(l, &WeightedBox::unit_cube(d), 1, 1 << 24).unwrap();
    let mu1 = m1.values[0]
        .value_cert()
        .as_rat()
        .expect("rational gauge")
        .clone();
    let lambda = mu1 * rat(255, 256);
    WeightedBox::centered(vec![CertReal::from_rat(lambda); d]).unwrap()
}

/// 5. Translate-lemma stress: 50 random 2-dim and 20 random 3-dim rational
/// lattices, 20 random shifts each; a dual point is found in `C R* + gamma`
/// every time. Runtime < 60 s.
#[test]
fn a05_translate_lemma_stress() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0x11AA);
    let mut pass = true;
    for (dim, instances) in [(2usize, 50usize), (3, 20)] {
        for _ in 0..instances {
            let l = LatticeBasis::from_rational_cols(&random_rational_cols(&mut rng, dim))
                .unwrap();
            let r_box = box_below_mu1(&l);
            let gammas: Vec<Vec<Rat>> = (0..20)
                .map(|_| (0..dim).map(|_| rng.next_rat(8, 4)).collect())
                .collect();
            let rep = check_mahler_transfer(&l, &r_box, &gammas, 1 << 26).unwrap();
            match rep.status {
                MahlerStatus::Ok => {
                    if !rep.all_found() {
                        eprintln!("missing witness in dim {dim}");
                        pass = false;
                    }
                }
                MahlerStatus::PreconditionViolated { .. } => {
                    eprintln!("unexpected precondition violation");
                    pass = false;
                }
            }
        }
    }
    let ok = pass && start.elapsed().as_secs_f64() < 60.0;
    elapsed_line("05 translate-lemma stress", start, ok);
    assert!(ok);
}

/// 6. Duality invariants: double dual is a unimodular change of basis, and
/// all basis pairings are integers, for 200 random rational lattices,
/// exact. Runtime < 10 s.
#[test]
fn a06_duality_invariants() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xD0A1);
    let mut pass = true;
    for i in 0..200usize {
        let dim = 2 + (i % 2);
        let l = LatticeBasis::from_rational_cols(&random_rational_cols(&mut rng, dim)).unwrap();
        if !double_dual_is_identity(&l).unwrap() {
            pass = false;
        }
        let dual = l.dual().unwrap();
        let lr = l.as_rational().unwrap();
        let dr = dual.as_rational().unwrap();
        for x in &lr {
            for y in &dr {
                if !pairing_is_integer_exact(x, y) {
                    pass = false;
                }
            }
        }
    }
    let ok = pass && start.elapsed().as_secs_f64() < 10.0;
    elapsed_line("06 duality invariants", start, ok);
    assert!(ok);
}

/// 7. Second-theorem bound: whenever mu_1(R) > 1 is certified (d <= 3), the
/// brute-force dual minimum satisfies mu_d(R*) < d!. Runtime < 60 s.
#[test]
fn a07_second_theorem_bound() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0x2B0B);
    let mut pass = true;
    for (dim, instances) in [(2usize, 30usize), (3, 15)] {
        for _ in 0..instances {
            let l = LatticeBasis::from_rational_cols(&random_rational_cols(&mut rng, dim))
                .unwrap();
            let r_box = box_below_mu1(&l);
            let rep = second_theorem_dual_bound(&l, &r_box, 1 << 26).unwrap();
            if rep.strict_dual_bound != Some(true) || !rep.product_in_bounds {
                eprintln!(
                    "dim {dim}: mu1 {} mu_d_dual {} strict {:?}",
                    rep.mu1, rep.mu_d_dual, rep.strict_dual_bound
                );
                pass = false;
            }
        }
    }
    let ok = pass && start.elapsed().as_secs_f64() < 60.0;
    elapsed_line("07 second-theorem bound", start, ok);
    assert!(ok);
}

/// 8. Reciprocal-transfer empirical check: for phi and sqrt2 with 100 seeded
/// shifts, every certified lower bound is at least `1/omega_hat - 0.1` and
/// at least 90% of point estimates land within 0.15 of the reciprocal.
/// Runtime < 5 min.
#[test]
fn a08_reciprocal_transfer() {
    let start = Instant::now();
    let grid = GridParams::new(1, 17);
    let mut pass = true;
    for x in [CertReal::phi(), CertReal::sqrt_rat(rat_int(2))] {
        let v = bl_validate(
            &scalar(x),
            &uniform1(),
            &uniform1(),
            100,
            7,
            &rat_int(1_000_000),
            &grid,
            1 << 27,
            0.1,
            0.15,
        )
        .unwrap();
        if v.verdict != Verdict::Consistent {
            eprintln!("verdict {:?}", v.verdict);
            pass = false;
        }
        if v.within_fraction < 0.9 {
            eprintln!("within fraction {}", v.within_fraction);
            pass = false;
        }
    }
    let ok = pass && start.elapsed().as_secs_f64() < 300.0;
    elapsed_line("08 reciprocal transfer", start, ok);
    assert!(ok);
}

/// 9. Exterior-algebra equivalence: the four sandwich inequalities hold
/// exactly on 1000 random integer multivectors with random rational points,
/// and the transpose pairing identity holds exactly on 1000 random triples.
/// Runtime < 30 s.
#[test]
fn a09_grassmann_equivalence() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0x6A55);
    let mut pass = true;
    let mut checked = 0;
    while checked < 1000 {
        let n = 2 + rng.next_below(3) as usize; // ambient 2..4
        let d = rng.next_below(n.min(3) as u64) as usize;
        let x = random_int_multivector(&mut rng, n + 1, d + 1, 7);
        if x.is_zero_exact() {
            continue;
        }
        let alpha: Vec<Rat> = (0..n).map(|_| rng.next_rat(9, 5)).collect();
        if !def_equivalence_check(&alpha, &x).all_ok() {
            pass = false;
        }
        checked += 1;
    }
    for _ in 0..1000 {
        let n = 2 + rng.next_below(3) as usize;
        let d = rng.next_below(n as u64) as usize;
        let beta = random_int_multivector(&mut rng, n, n - d - 1, 6);
        let gamma = random_int_multivector(&mut rng, n, d, 6);
        let alpha: Vec<Rat> = (0..n).map(|_| rng.next_rat(7, 4)).collect();
        if !transpose_identity_holds(&alpha, &beta, &gamma) {
            pass = false;
        }
    }
    let ok = pass && start.elapsed().as_secs_f64() < 30.0;
    elapsed_line("09 grassmann equivalence", start, ok);
    assert!(ok);
}

/// 10. Intermediate-exponent collapse: at d = 0 and d = n-1 the
/// grade-driven estimate matches the plain estimator on identical grids
/// within one grid step (ln 2 / 4 on the exponent). Runtime < 2 min.
#[test]
fn a10_intermediate_collapse() {
    let start = Instant::now();
    let one_step = std::f64::consts::LN_2 / 4.0;
    let mut rng = SplitMix64::new(0xA1FA);
    let mut pass = true;
    for n in [2usize, 3] {
        // random rational-plus-quadratic coordinates
        let alpha: Vec<CertReal> = (0..n)
            .map(|i| {
                let root = [2i64, 3, 5][(rng.next_below(3) as usize + i) % 3];
                CertReal::from_rat(rng.next_rat(5, 7))
                    + CertReal::sqrt_rat(rat_int(root))
            })
            .collect();
        let theta0 = vec![Rat::from_integer(0.into()); binomial(n, 1)];
        // d = 0 vs the simultaneous sweep
        let oct0 = 16u32;
        let grid0 = GridParams::new(1, oct0);
        let inter0 =
            intermediate_exponent(&alpha, 0, &theta0, Mode::Ordinary, &grid0, 1 << 27).unwrap();
        let plain0 = estimate_from_grid_sweep(
            &sweep_simultaneous(
                &alpha,
                &vec![Rat::from_integer(0.into()); n],
                &WeightVector::uniform(n),
                &grid0,
                1 << 27,
            )
            .unwrap(),
            ExponentKind { uniform: false, multiplicative: false, inhomogeneous: false },
        );
        let d0_diff = (inter0.point_estimate - plain0.point_estimate).abs();
        if d0_diff > one_step {
            eprintln!(
                "n={n} d=0: intermediate {} plain {}",
                inter0.point_estimate, plain0.point_estimate
            );
            pass = false;
        }
        // d = n-1 vs the dual sweep
        let oct1 = if n == 2 { 14 } else { 15 };
        let grid1 = GridParams::new(1, oct1);
        let theta_top = vec![Rat::from_integer(0.into())];
        let inter1 = intermediate_exponent(
            &alpha,
            n - 1,
            &theta_top,
            Mode::Ordinary,
            &grid1,
            1 << 27,
        )
        .unwrap();
        let plain1 = estimate_from_grid_sweep(
            &sweep_dual(
                &alpha,
                &Rat::from_integer(0.into()),
                &WeightVector::uniform(n),
                &grid1,
                1 << 27,
            )
            .unwrap(),
            ExponentKind { uniform: false, multiplicative: false, inhomogeneous: false },
        );
        let d1_diff = (inter1.point_estimate - plain1.point_estimate).abs();
        if d1_diff > one_step {
            eprintln!(
                "n={n} d={}: intermediate {} plain {}",
                n - 1,
                inter1.point_estimate,
                plain1.point_estimate
            );
            pass = false;
        }
    }
    let ok = pass && start.elapsed().as_secs_f64() < 120.0;
    elapsed_line("10 intermediate collapse", start, ok);
    assert!(ok);
}

/// 11. Nested-box construction: for phi at alpha = 1/5 and depth 6, every
/// level's survivor count meets the floor-adjusted bound, the emitted shift
/// satisfies all level constraints exactly, and the epsilon window check
/// passes at 10^4 with epsilon = alpha^2 / (4 R). The zero shift fails
/// certificate validation. Runtime < 2 min.
#[test]
fn a11_cantor_construction() {
    let start = Instant::now();
    let alpha = rat(1, 5);
    let a = scalar(CertReal::phi());
    let cert = bad_certificate(
        &a,
        &uniform1(),
        &uniform1(),
        &alpha,
        6,
        &rat_int(10_000),
        Selector::First,
        1 << 26,
    )
    .unwrap();
    let mut pass = cert.window_pass;
    for lvl in &cert.levels {
        if !lvl.count_ok {
            eprintln!("level {} survivors {} required {}", lvl.level, lvl.survivors, lvl.required);
            pass = false;
        }
    }
    // epsilon must be the closed form (1/R)(alpha^2/4) with R = R(alpha)
    let r_factor = r_of_alpha(&alpha, &uniform1()).unwrap();
    let expect_eps = (&alpha * &alpha / rat_int(4)) / &r_factor;
    if (cert.epsilon - diokit::numerics::rat_to_f64(&expect_eps)).abs() > 1e-12 {
        pass = false;
    }
    // negative control: theta = 0 violates the construction's own
    // constraints (the homogeneous zero sits in every slab family)
    let seq = compute_best_approx(&a, &uniform1(), &uniform1(), &rat_int(1 << 22), 1 << 26)
        .unwrap();
    let sub = subsequence_extract(&seq, &r_factor).unwrap();
    let ys: Vec<Vec<BigInt>> = sub.indices[..7]
        .iter()
        .map(|&i| seq.entries[i].x.clone())
        .collect();
    let zero_theta = vec![CertReal::zero()];
    if verify_distance_constraints(&ys, &zero_theta, &alpha, 6).unwrap() {
        eprintln!("zero shift unexpectedly satisfied the constraints");
        pass = false;
    }
    let ok = pass && start.elapsed().as_secs_f64() < 120.0;
    elapsed_line("11 cantor construction", start, ok);
    assert!(ok);
}

/// 12a. Determinism of library-level reports: identical seeds give
/// identical serialized output (the CLI byte-identity test lives next to
/// the binary). Runtime: trivial.
#[test]
fn a12_determinism_library() {
    let start = Instant::now();
    let grid = GridParams::new(1, 10);
    let run = || {
        let v = bl_validate(
            &scalar(CertReal::phi()),
            &uniform1(),
            &uniform1(),
            8,
            7,
            &rat_int(4096),
            &grid,
            1 << 24,
            0.1,
            0.15,
        )
        .unwrap();
        serde_json::to_string(&v).unwrap()
    };
    let a = run();
    let b = run();
    let ok = a == b && start.elapsed().as_secs_f64() < 60.0;
    elapsed_line("12 determinism (library)", start, ok);
    assert!(ok);
}

/// Supplementary: the engine value sequences are unique under a different
/// tie-break order (the defining-uniqueness invariant).
#[test]
fn a13_value_sequence_uniqueness() {
    let start = Instant::now();
    // m = 2 instance where N-ties are plentiful
    let a = TargetMatrix::new(vec![
        vec![CertReal::sqrt_rat(rat_int(2))],
        vec![CertReal::sqrt_rat(rat_int(3))],
    ]);
    let s = WeightVector::uniform(2);
    let r = WeightVector::uniform(1);
    let seq = compute_best_approx(&a, &s, &r, &rat_int(60), 1 << 24).unwrap();
    let ok = !seq.entries.is_empty()
        && seq
            .entries
            .windows(2)
            .all(|w| {
                w[0].y.compare(&w[1].y).unwrap() == std::cmp::Ordering::Less
                    && w[0].m_val.compare(&w[1].m_val).unwrap() == std::cmp::Ordering::Greater
            });
    elapsed_line("13 sequence monotonicity (supplementary)", start, ok);
    assert!(ok);
}
