//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with the measured deviation against its pinned tolerance. Run with
//! `cargo test --test acceptance -- --nocapture` to see the table.

use blaschke_core::blaschke::{equals_fbp, FiniteBlaschkeProduct};
use blaschke_core::cheby::{
    cheby_blaschke, chebyshev_representation, equioscillation_count, eval_cheby_tau,
};
use blaschke_core::dynamics::{
    canonical_height_estimate, degree_growth_experiment, orbit_intersection, ExactEndo,
    GaussianRational, ProjPoint,
};
use blaschke_core::elliptic::{gamma_of_t, tau_of_t, weierstrass_data};
use blaschke_core::ellrat::{
    ell_rat_critical_values, ell_rat_fit, equivalence_check, gamma0_member, EllipticRationalParams,
    ModularMatrix,
};
use blaschke_core::factor::{
    block_systems, common_iteration, decompose_recognized, generated_group_order,
    numerical_monodromy, ritt_move_cheby, ritt_move_power, zieve_muller_bound, Decomposition,
    IterationSearch, MonodromyOptions,
};
use blaschke_core::{ProjValue, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {id:2} {name:<28} {status}  {detail}");
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

// 1. Blaschke algebra: boundary modulus < 1e-10 on 1e3 samples for 100
//    random products of degree <= 8; exact degree multiplicativity;
//    associativity < 1e-8.
#[test]
fn criterion_01_blaschke_algebra() {
    const TOL_BOUNDARY: f64 = 1e-10;
    const TOL_ASSOC: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut max_boundary = 0.0f64;
    for _ in 0..100 {
        let deg = rng.gen_range(1..=8);
        let zeros: Vec<C64> = (0..deg)
            .map(|_| C64::from_polar(rng.gen_range(0.0..0.93), rng.gen_range(0.0..6.2831)))
            .collect();
        let rho = C64::from_polar(1.0, rng.gen_range(0.0..6.2831));
        let f = FiniteBlaschkeProduct::new(rho, zeros).unwrap();
        for m in 0..1000 {
            let z = C64::from_polar(1.0, core::f64::consts::TAU * m as f64 / 1000.0);
            max_boundary = max_boundary.max((f.eval(z).norm() - 1.0).abs());
        }
    }
    let mut degree_exact = true;
    let mut max_assoc = 0.0f64;
    for _ in 0..12 {
        let mk = |rng: &mut ChaCha8Rng, d: usize| {
            let zeros: Vec<C64> = (0..d)
                .map(|_| C64::from_polar(rng.gen_range(0.0..0.85), rng.gen_range(0.0..6.2831)))
                .collect();
            FiniteBlaschkeProduct::new(C64::from_polar(1.0, rng.gen_range(0.0..6.2831)), zeros)
                .unwrap()
        };
        let (da, db, dc) = (
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
        );
        let a = mk(&mut rng, da);
        let b = mk(&mut rng, db);
        let d = mk(&mut rng, dc);
        let ab = a.compose(&b).unwrap();
        degree_exact &= ab.degree() == a.degree() * b.degree();
        let left = ab.compose(&d).unwrap();
        let right = a.compose(&b.compose(&d).unwrap()).unwrap();
        degree_exact &= left.degree() == a.degree() * b.degree() * d.degree();
        for m in 0..40 {
            let z = C64::from_polar(0.97, core::f64::consts::TAU * m as f64 / 40.0);
            max_assoc = max_assoc.max((left.eval(z) - right.eval(z)).norm());
        }
    }
    let pass = max_boundary < TOL_BOUNDARY && degree_exact && max_assoc < TOL_ASSOC;
    report(
        1,
        "blaschke algebra",
        pass,
        &format!(
            "boundary {max_boundary:.2e}, assoc {max_assoc:.2e}, degrees exact: {degree_exact}"
        ),
    );
}

// 2. Chebyshev-Blaschke normalization: |T_{n,t}(gamma(t)) - gamma(nt)| < 1e-9
//    for n in 2..=6, t in {0.2, 0.5, 1.0}; equioscillation count = n + 1.
#[test]
fn criterion_02_cheby_normalization() {
    const TOL: f64 = 1e-9;
    let mut max_dev = 0.0f64;
    let mut counts_ok = true;
    for n in 2..=6usize {
        for &t in &[0.2, 0.5, 1.0] {
            let cb = cheby_blaschke(n, t).unwrap();
            let g_t = gamma_of_t(t).unwrap();
            let g_nt = gamma_of_t(n as f64 * t).unwrap();
            let dev = (cb.product.eval(c(g_t, 0.0)) - c(g_nt, 0.0)).norm();
            max_dev = max_dev.max(dev);
            counts_ok &= equioscillation_count(&cb).unwrap() == n + 1;
        }
    }
    let pass = max_dev < TOL && counts_ok;
    report(
        2,
        "cheby normalization",
        pass,
        &format!("max normalization dev {max_dev:.2e}, equioscillation counts ok: {counts_ok}"),
    );
}

// 3. Nesting and commuting: T_{6,t} vs T_{2,3t} . T_{3,t}, and the (2,3)
//    commuting relation, both < 1e-8 on 200-point grids, three t values.
#[test]
fn criterion_03_nesting_and_commuting() {
    const TOL: f64 = 1e-8;
    let mut max_nest = 0.0f64;
    let mut max_comm = 0.0f64;
    for &t in &[0.2, 0.5, 1.0] {
        let whole = cheby_blaschke(6, t).unwrap().product;
        let lhs = cheby_blaschke(2, 3.0 * t)
            .unwrap()
            .product
            .compose(&cheby_blaschke(3, t).unwrap().product)
            .unwrap();
        let rhs = cheby_blaschke(3, 2.0 * t)
            .unwrap()
            .product
            .compose(&cheby_blaschke(2, t).unwrap().product)
            .unwrap();
        let g_t = gamma_of_t(t).unwrap();
        for m in 0..200 {
            let x = c(g_t * ((m as f64 / 199.0) * 2.0 - 1.0), 0.0);
            max_nest = max_nest.max((whole.eval(x) - lhs.eval(x)).norm());
            max_comm = max_comm.max((lhs.eval(x) - rhs.eval(x)).norm());
        }
    }
    let pass = max_nest < TOL && max_comm < TOL;
    report(
        3,
        "nesting and commuting",
        pass,
        &format!("nesting {max_nest:.2e}, commuting {max_comm:.2e}"),
    );
}

// 4. T=T rescaling: grid deviation < 1e-8 for (n,t) in {3,4} x {0.3, 0.7}.
#[test]
fn criterion_04_rescaling() {
    const TOL: f64 = 1e-8;
    let mut max_dev = 0.0f64;
    for &n in &[3usize, 4] {
        for &t in &[0.3, 0.7] {
            let cb = cheby_blaschke(n, t).unwrap();
            let g_t = gamma_of_t(t).unwrap();
            let g_nt = gamma_of_t(n as f64 * t).unwrap();
            let tau = tau_of_t(t).unwrap();
            for m in 0..120 {
                let x = g_t * ((m as f64 / 119.0) * 1.96 - 0.98);
                let lhs = cb.product.eval(c(x, 0.0));
                let rhs = eval_cheby_tau(n, tau, c(x / g_t, 0.0)).unwrap() * g_nt;
                max_dev = max_dev.max((lhs - rhs).norm());
            }
        }
    }
    report(
        4,
        "T=T rescaling",
        max_dev < TOL,
        &format!("max grid dev {max_dev:.2e}"),
    );
}

// 5. Critical-value lemma: fitted n_tau critical values match the
//    half-period P-values within 1e-6 for n in {2,3}, tau in {i, 1/2+i}.
#[test]
fn criterion_05_critical_value_lemma() {
    const TOL: f64 = 1e-6;
    let mut worst = 0.0f64;
    let mut structure_ok = true;
    for &n in &[2usize, 3] {
        for tau in [
            blaschke_core::elliptic::ModularTau::imaginary(1.0).unwrap(),
            blaschke_core::elliptic::ModularTau::new(c(0.5, 1.0)).unwrap(),
        ] {
            let params = EllipticRationalParams::new(n, tau).unwrap();
            let fit = ell_rat_fit(&params).unwrap();
            let cv = fit.critical_values().unwrap();
            let pred = ell_rat_critical_values(&params).unwrap();
            for v in &cv {
                let nearest = pred
                    .iter()
                    .map(|p| p.dist(*v))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(nearest);
            }
            match n {
                2 => structure_ok &= cv.len() == 2,
                3 => {
                    structure_ok &= cv.len() == 4;
                    for p in &pred {
                        let nearest = cv.iter().map(|v| p.dist(*v)).fold(f64::INFINITY, f64::min);
                        worst = worst.max(nearest);
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    let pass = worst < TOL && structure_ok;
    report(
        5,
        "critical-value lemma",
        pass,
        &format!("worst torsion match {worst:.2e}, structure ok: {structure_ok}"),
    );
}

// 6. Gamma_0(n) witnesses: deviation < 1e-5 for n = 3, tau = i, the two
//    member matrices; the non-member is rejected by the membership gate.
#[test]
fn criterion_06_gamma0_witnesses() {
    const TOL: f64 = 1e-5;
    let tau = blaschke_core::elliptic::ModularTau::imaginary(1.0).unwrap();
    let mut max_dev = 0.0f64;
    for m in [
        ModularMatrix::new(1, 1, 0, 1).unwrap(),
        ModularMatrix::new(1, 0, 3, 1).unwrap(),
    ] {
        let rep = equivalence_check(3, tau, &m).unwrap();
        max_dev = max_dev.max(rep.max_deviation).max(rep.invariant_deviation);
    }
    let bad = ModularMatrix::new(1, 0, 1, 1).unwrap();
    let rejected = !gamma0_member(&bad, 3) && equivalence_check(3, tau, &bad).is_err();
    let pass = max_dev < TOL && rejected;
    report(
        6,
        "Gamma_0(3) witnesses",
        pass,
        &format!("max witness dev {max_dev:.2e}, non-member rejected: {rejected}"),
    );
}

// 7. Monodromy: z^n yields an n-cycle for n <= 8; T_{n,t} generators match
//    the Chebyshev representation in cycle type and group order, n in 4..6.
#[test]
fn criterion_07_monodromy() {
    let opts = MonodromyOptions::default();
    let mut cycles_ok = true;
    for n in 2..=8usize {
        let rep = numerical_monodromy(&FiniteBlaschkeProduct::power(n).unwrap(), &opts).unwrap();
        cycles_ok &= rep.loops.len() == 1 && rep.loops[0].is_full_cycle();
    }
    let mut cheby_ok = true;
    for n in [4usize, 5, 6] {
        let cb = cheby_blaschke(n, 0.45).unwrap();
        let rep = numerical_monodromy(&cb.product, &opts).unwrap();
        let (sigma, tau) = chebyshev_representation(n).unwrap();
        let mut got: Vec<Vec<usize>> = rep.loops.iter().map(|p| p.cycle_type()).collect();
        got.sort();
        let mut want = vec![sigma.cycle_type(), tau.cycle_type()];
        want.sort();
        cheby_ok &= got == want;
        cheby_ok &= generated_group_order(&rep.loops, 100_000)
            == generated_group_order(&[sigma, tau], 100_000);
    }
    let pass = cycles_ok && cheby_ok;
    report(
        7,
        "numerical monodromy",
        pass,
        &format!("power cycles ok: {cycles_ok}, cheby representation ok: {cheby_ok}"),
    );
}

// 8. Factorization: block sizes {2,3} for z^6 and T_{6,t}; recognized
//    factors recompose within 1e-8; a generic degree-5 product reports no
//    proper system.
#[test]
fn criterion_08_factorization() {
    const TOL: f64 = 1e-8;
    let opts = MonodromyOptions::default();
    let sizes_of = |f: &FiniteBlaschkeProduct| -> Vec<usize> {
        let rep = numerical_monodromy(f, &opts).unwrap();
        let mut sizes: Vec<usize> = block_systems(&rep)
            .unwrap()
            .iter()
            .map(|s| s.block_size())
            .collect();
        sizes.sort_unstable();
        sizes
    };
    let z6 = FiniteBlaschkeProduct::power(6).unwrap();
    let t6 = cheby_blaschke(6, 0.5).unwrap().product;
    let blocks_ok = sizes_of(&z6) == vec![2, 3] && sizes_of(&t6) == vec![2, 3];

    let mut recompose_dev = 0.0f64;
    for f in [&z6, &t6] {
        match decompose_recognized(f).unwrap() {
            Decomposition::Factors { outer, inner } => {
                let re = outer.compose(&inner).unwrap();
                for m in 0..80 {
                    let z = C64::from_polar(0.95, core::f64::consts::TAU * m as f64 / 80.0);
                    recompose_dev = recompose_dev.max((re.eval(z) - f.eval(z)).norm());
                }
            }
            other => panic!("expected factors, got {other:?}"),
        }
    }

    let f5 = FiniteBlaschkeProduct::new(
        c(0.6, 0.8),
        vec![
            c(0.3, 0.1),
            c(-0.2, 0.4),
            c(0.1, -0.5),
            c(-0.45, -0.1),
            c(0.05, 0.62),
        ],
    )
    .unwrap();
    let rep5 = numerical_monodromy(&f5, &opts).unwrap();
    let prime_ok = block_systems(&rep5).unwrap().is_empty();

    let pass = blocks_ok && recompose_dev < TOL && prime_ok;
    report(
        8,
        "factorization",
        pass,
        &format!(
            "blocks ok: {blocks_ok}, recompose {recompose_dev:.2e}, degree-5 primitive: {prime_ok}"
        ),
    );
}

// 9. Ritt moves: both relation families verify within 1e-8 over 50 random
//    draws; the Zieve-Muller bound returns 8 at n = 2 and 12 at n = 32.
#[test]
fn criterion_09_ritt_moves_and_bound() {
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut all_equal = true;
    let coprime = [
        (2usize, 1usize),
        (2, 3),
        (3, 1),
        (3, 2),
        (4, 3),
        (5, 2),
        (5, 4),
    ];
    for _ in 0..50 {
        let (k, r) = coprime[rng.gen_range(0..coprime.len())];
        let deg_g = rng.gen_range(1..3);
        let zeros: Vec<C64> = (0..deg_g)
            .map(|_| C64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(0.0..6.2831)))
            .collect();
        let g = FiniteBlaschkeProduct::new(C64::from_polar(1.0, rng.gen_range(0.0..6.2831)), zeros)
            .unwrap();
        let (lhs, rhs) = ritt_move_power(k, r, &g).unwrap();
        all_equal &= equals_fbp(&lhs, &rhs, TOL);
    }
    let cheby_pairs = [(2usize, 3usize), (3, 2), (2, 5), (3, 4), (5, 2)];
    for _ in 0..50 {
        let (p, q) = cheby_pairs[rng.gen_range(0..cheby_pairs.len())];
        let t = rng.gen_range(0.25..1.2);
        let (lhs, rhs) = ritt_move_cheby(p, q, t).unwrap();
        all_equal &= equals_fbp(&lhs, &rhs, TOL);
    }
    let bound_ok = zieve_muller_bound(2).unwrap() == 8 && zieve_muller_bound(32).unwrap() == 12;
    let pass = all_equal && bound_ok;
    report(
        9,
        "Ritt moves + bound",
        pass,
        &format!("100 random draws equal: {all_equal}, bound values ok: {bound_ok}"),
    );
}

// 10. Dynamics: orbit_intersection(z^2, z^3, 1/2, 1/2, N=20) has exactly
//     one hit; common_iteration(z^2, z^4) = (2,1); the canonical height of
//     1/2 under z^2 is log 2 to 1e-12; degree growth separates by
//     (3/2)^5 at N = 10.
#[test]
fn criterion_10_dynamics() {
    const TOL_HEIGHT: f64 = 1e-12;
    let half = ProjPoint::finite(GaussianRational::from_rationals(1, 2, 0, 1).unwrap());
    let z2 = ExactEndo::power_map(2).unwrap();
    let z3 = ExactEndo::power_map(3).unwrap();

    let rep = orbit_intersection(&z2, &half, &z3, &half, 20, 1 << 21).unwrap();
    let hits_ok = rep.hits.len() == 1 && rep.hits[0].0 == 0 && rep.hits[0].1 == 0;

    let ci = common_iteration(
        &FiniteBlaschkeProduct::power(2).unwrap(),
        &FiniteBlaschkeProduct::power(4).unwrap(),
        6,
        4096,
    )
    .unwrap();
    let ci_ok = ci == IterationSearch::Found { k: 2, l: 1 };

    let est = canonical_height_estimate(&z2, &half, 6, 1 << 21).unwrap();
    let height_dev = (est.canonical_estimate - 2f64.ln()).abs();

    let growth = degree_growth_experiment(&z2, &z3, &half, 10, 1 << 22).unwrap();
    let sep_ok = growth.separated
        && growth.separation >= (1.5f64).powi(5)
        && (growth.separation_required - (1.5f64).powi(5)).abs() < 1e-9;

    let pass = hits_ok && ci_ok && height_dev < TOL_HEIGHT && sep_ok;
    report(
        10,
        "exact dynamics",
        pass,
        &format!(
            "one hit: {hits_ok}, common iteration (2,1): {ci_ok}, height dev {height_dev:.2e}, separation {:.1} >= {:.2}",
            growth.separation,
            growth.separation_required
        ),
    );
}
