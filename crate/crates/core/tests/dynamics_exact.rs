//! Exact Q(i) dynamics: heights, orbits, cycle detection, the growth cap,
//! orbit intersection and the degree-growth experiment.

use blaschke_core::dynamics::{
    canonical_height_estimate, degree_growth_experiment, naive_height, orbit, orbit_capped,
    orbit_intersection, ExactBlaschke, ExactEndo, GaussianInt, GaussianRational, ProjPoint,
};
use blaschke_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(p: i64, q_: i64) -> GaussianRational {
    GaussianRational::from_rationals(p, q_, 0, 1).unwrap()
}

fn pt(x: GaussianRational) -> ProjPoint {
    ProjPoint::finite(x)
}

const CAP: u64 = 1 << 20;

#[test]
fn naive_height_examples() {
    // h(3/5) = log 5 (half the log of the norm max)
    assert!((naive_height(&pt(q(3, 5))) - 5f64.ln()).abs() < 1e-14);
    // h(i/2) = log 2
    let i_half = GaussianRational::from_rationals(0, 1, 1, 2).unwrap();
    assert!((naive_height(&pt(i_half)) - 2f64.ln()).abs() < 1e-14);
    // h((1+i)/2) = (1/2) log 2 after the Gaussian gcd reduction
    let x = GaussianRational::from_parts(1, 1, 2, 0).unwrap();
    assert!((naive_height(&pt(x)) - 0.5 * 2f64.ln()).abs() < 1e-14);
    // h(0) = 0, h(infinity) = 0
    assert_eq!(naive_height(&pt(GaussianRational::zero())), 0.0);
    assert_eq!(naive_height(&ProjPoint::Infinity), 0.0);
}

#[test]
fn exact_blaschke_construction_gates() {
    // |rho| = 1 exactly: (3+4i)/5 works
    let rho = GaussianRational::from_parts(3, 4, 5, 0).unwrap();
    assert!(ExactBlaschke::new(rho.clone(), vec![q(1, 2)]).is_ok());
    // |rho| != 1 rejected
    assert!(ExactBlaschke::new(q(1, 2), vec![q(1, 2)]).is_err());
    // zero on the boundary rejected: |(3+4i)/5| = 1
    assert!(ExactBlaschke::new(GaussianRational::one(), vec![rho]).is_err());
}

#[test]
fn orbit_of_the_squaring_map() {
    let z2 = ExactEndo::power_map(2).unwrap();
    let orb = orbit(&z2, &pt(q(1, 2)), 3, CAP).unwrap();
    let expect = ["1/2", "1/4", "1/16", "1/256"];
    for (p, e) in orb.points.iter().zip(expect.iter()) {
        assert_eq!(format!("{p}"), *e);
    }
    assert!(orb.cycle.is_none());
}

#[test]
fn boundary_orbit_reaches_a_fixed_point() {
    let z2 = ExactEndo::power_map(2).unwrap();
    let orb = orbit(&z2, &pt(GaussianRational::i()), 4, CAP).unwrap();
    // i -> -1 -> 1 -> 1 -> 1
    assert_eq!(orb.points.len(), 5);
    assert_eq!(format!("{}", orb.points[1]), "-1");
    assert_eq!(format!("{}", orb.points[2]), "1");
    assert_eq!(format!("{}", orb.points[4]), "1");
    let cyc = orb.cycle.unwrap();
    assert_eq!((cyc.enter, cyc.period), (2, 1));
}

#[test]
fn conjugated_exact_map_stays_in_q_i() {
    // iota_{1/2} . z^2 . iota_{-1/2} evaluated exactly along a chain
    let a = q(1, 2);
    let f = ExactEndo::new(vec![
        ExactBlaschke::iota(&a).unwrap(),
        ExactBlaschke::power(2).unwrap(),
        ExactBlaschke::iota(&(-&a)).unwrap(),
    ])
    .unwrap();
    assert_eq!(f.degree(), 2);
    let orb = orbit(&f, &pt(GaussianRational::zero()), 6, CAP).unwrap();
    assert_eq!(orb.points.len(), 7);
    for p in &orb.points {
        match p {
            ProjPoint::Finite(x) => {
                assert_eq!(
                    x.abs_sqr_cmp_one(),
                    core::cmp::Ordering::Less,
                    "stays in the disk"
                );
            }
            ProjPoint::Infinity => panic!("orbit left the disk"),
        }
    }
}

#[test]
fn growth_cap_reports_the_index_reached() {
    let z3 = ExactEndo::power_map(3).unwrap();
    // (1/2)^{3^j}: caps quickly under a small bit budget
    match orbit(&z3, &pt(q(1, 2)), 12, 1 << 10) {
        Err(Error::GrowthCap { index, bits }) => {
            assert!(index <= 7, "index {index}");
            assert!(bits <= 1 << 10);
        }
        other => panic!("expected a growth cap, got {other:?}"),
    }
    // the tolerant variant truncates in-band
    let rep = orbit_capped(&z3, &pt(q(1, 2)), 12, 1 << 10).unwrap();
    assert!(rep.truncated_at.is_some());
    assert!(rep.points.len() < 13);
}

#[test]
fn canonical_height_of_power_maps() {
    let z2 = ExactEndo::power_map(2).unwrap();
    // x = 1/2: h((1/2)^{2^N}) = 2^N log 2, so the estimate is exactly log 2
    let est = canonical_height_estimate(&z2, &pt(q(1, 2)), 6, 1 << 21).unwrap();
    assert!((est.canonical_estimate - 2f64.ln()).abs() < 1e-12);
    assert_eq!(est.iterations_used, 6);
    // the trace is constant for exact powers
    for v in &est.trace {
        assert!((v - 2f64.ln()).abs() < 1e-12);
    }
    // x = 2 on P^1 (outside the disk) works the same way
    let est = canonical_height_estimate(&z2, &pt(q(2, 1)), 6, 1 << 21).unwrap();
    assert!((est.canonical_estimate - 2f64.ln()).abs() < 1e-12);
    // preperiodic points estimate to zero
    let est = canonical_height_estimate(&z2, &pt(GaussianRational::zero()), 6, CAP).unwrap();
    assert_eq!(est.canonical_estimate, 0.0);
    let est = canonical_height_estimate(&z2, &ProjPoint::Infinity, 6, CAP).unwrap();
    assert_eq!(est.canonical_estimate, 0.0);
}

#[test]
fn canonical_height_functional_equation() {
    // hhat(f, f(x), N-1) = deg f * hhat(f, x, N) for exact power maps
    let z2 = ExactEndo::power_map(2).unwrap();
    let x = pt(q(3, 5));
    let fx = z2.eval(&x);
    let lhs = canonical_height_estimate(&z2, &fx, 5, 1 << 21)
        .unwrap()
        .canonical_estimate;
    let rhs = canonical_height_estimate(&z2, &x, 6, 1 << 21)
        .unwrap()
        .canonical_estimate;
    assert!((lhs - 2.0 * rhs).abs() < 1e-12);
    // and within 1e-9 for a conjugated map
    let a = q(1, 3);
    let f = ExactEndo::new(vec![
        ExactBlaschke::iota(&a).unwrap(),
        ExactBlaschke::power(2).unwrap(),
        ExactBlaschke::iota(&(-&a)).unwrap(),
    ])
    .unwrap();
    let x = pt(q(1, 7));
    let fx = f.eval(&x);
    let lhs = canonical_height_estimate(&f, &fx, 11, 1 << 19)
        .unwrap()
        .canonical_estimate;
    let rhs = canonical_height_estimate(&f, &x, 12, 1 << 19)
        .unwrap()
        .canonical_estimate;
    assert!(
        (lhs - 2.0 * rhs).abs() < 1e-9,
        "functional equation: {lhs} vs 2 * {rhs}"
    );
}

#[test]
fn height_transformation_is_uniformly_bounded() {
    // |h(f(x)) - deg f * h(x)| <= C_f over random exact points; the measured
    // bound must stabilize rather than grow with the sample
    let a = q(1, 2);
    let f = ExactEndo::new(vec![
        ExactBlaschke::iota(&a).unwrap(),
        ExactBlaschke::power(2).unwrap(),
        ExactBlaschke::iota(&(-&a)).unwrap(),
    ])
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut c_running = 0.0f64;
    let mut c_at_60 = 0.0f64;
    for s in 0..100 {
        let num = GaussianInt::new(rng.gen_range(-40i64..40), rng.gen_range(-40i64..40));
        let den = GaussianInt::new(rng.gen_range(1i64..40), rng.gen_range(0i64..40));
        let x = match GaussianRational::new(num, den) {
            Ok(x) => x,
            Err(_) => continue,
        };
        let p = pt(x);
        let hf = naive_height(&f.eval(&p));
        let h = naive_height(&p);
        c_running = c_running.max((hf - 2.0 * h).abs());
        if s == 59 {
            c_at_60 = c_running;
        }
    }
    assert!(
        c_running < 6.0,
        "bound C_f = {c_running} unexpectedly large"
    );
    assert!(
        c_running <= c_at_60 * 1.25 + 0.7,
        "bound grew with the sample: {c_at_60} -> {c_running}"
    );
}

#[test]
fn orbit_intersection_power_maps() {
    let z2 = ExactEndo::power_map(2).unwrap();
    let z3 = ExactEndo::power_map(3).unwrap();
    let half = pt(q(1, 2));
    // 2^i = 3^j only at i = j = 0, so (0,0) is the single hit; the cubing
    // orbit truncates at its growth cap long before step 20 (3^20 bits
    // would be gigabytes), which cannot hide collisions: points beyond the
    // cap are too large to equal any stored one
    let rep = orbit_intersection(&z2, &half, &z3, &half, 20, 1 << 21).unwrap();
    assert_eq!(rep.hits.len(), 1);
    assert_eq!((rep.hits[0].0, rep.hits[0].1), (0, 0));
    assert!(rep.truncated_g && !rep.truncated_f);
    assert_eq!(rep.steps_f, 20);

    // common iteration: z^4 = (z^2)^2 gives the ladder (2j, j)
    let z4 = ExactEndo::power_map(4).unwrap();
    let rep = orbit_intersection(&z2, &half, &z4, &half, 12, 1 << 21).unwrap();
    let expected: Vec<(usize, usize)> = (0..=6).map(|j| (2 * j, j)).collect();
    let got: Vec<(usize, usize)> = rep.hits.iter().map(|&(i, j, _)| (i, j)).collect();
    assert_eq!(got, expected);

    // disjoint orbits: 0 is fixed, the orbit of 1/2 never reaches it
    let rep = orbit_intersection(&z2, &pt(GaussianRational::zero()), &z2, &half, 10, CAP).unwrap();
    assert!(rep.hits.is_empty());
}

#[test]
fn orbit_intersection_is_symmetric() {
    let z2 = ExactEndo::power_map(2).unwrap();
    let z4 = ExactEndo::power_map(4).unwrap();
    let half = pt(q(1, 2));
    let ab = orbit_intersection(&z2, &half, &z4, &half, 10, 1 << 21).unwrap();
    let ba = orbit_intersection(&z4, &half, &z2, &half, 10, 1 << 21).unwrap();
    let mut transposed: Vec<(usize, usize)> = ba.hits.iter().map(|&(i, j, _)| (j, i)).collect();
    transposed.sort_unstable();
    let got: Vec<(usize, usize)> = ab.hits.iter().map(|&(i, j, _)| (i, j)).collect();
    assert_eq!(got, transposed);
}

#[test]
fn degree_growth_separates_rates() {
    let z2 = ExactEndo::power_map(2).unwrap();
    let z3 = ExactEndo::power_map(3).unwrap();
    let report = degree_growth_experiment(&z2, &z3, &pt(q(1, 2)), 10, 1 << 22).unwrap();
    // rates approximate ln 2 and ln 3
    assert!((report.rate_f - 2f64.ln()).abs() < 1e-6);
    assert!((report.rate_g - 3f64.ln()).abs() < 1e-6);
    assert!(report.separated);
    assert!(report.separation >= report.separation_required);
    // equal degrees rejected
    assert!(matches!(
        degree_growth_experiment(&z2, &z2, &pt(q(1, 2)), 10, CAP),
        Err(Error::Domain(_))
    ));
    // preperiodic start rejected (0 is fixed)
    assert!(matches!(
        degree_growth_experiment(&z2, &z3, &pt(GaussianRational::zero()), 10, CAP),
        Err(Error::Domain(_))
    ));
}

#[test]
fn exact_parsing_of_cli_point_literals() {
    for (s, expect) in [
        ("1/2", "1/2"),
        ("1/2+1/3*i", "1/2+1/3*i"),
        ("-2/7-1/4*i", "-2/7-1/4*i"),
        ("i", "1*i"),
        ("3", "3"),
    ] {
        let x: GaussianRational = s.parse().unwrap();
        assert_eq!(format!("{x}"), expect);
    }
    assert!("1/0".parse::<GaussianRational>().is_err());
    assert!("".parse::<GaussianRational>().is_err());
}
