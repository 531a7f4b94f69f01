//! Elliptic rational functions: the Weierstrass-descent identity, torsion
//! critical values, rational fitting, Gamma_0(n) witnesses, the Jordan loop
//! and nesting, and the link to the Chebyshev-Blaschke critical geometry.

use blaschke_core::cheby::cheby_blaschke;
use blaschke_core::elliptic::{gamma_of_t, tau_of_t, weierstrass_data, weierstrass_p, ModularTau};
use blaschke_core::ellrat::{
    ell_rat_critical_values, ell_rat_eval, ell_rat_fit, equivalence_check, gamma0_apply,
    gamma0_member, jordan_loop, winding_number, EllipticRationalParams, ModularMatrix,
};
use blaschke_core::mobius::four_point_j_invariant;
use blaschke_core::{ProjValue, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn tau_i() -> ModularTau {
    ModularTau::imaginary(1.0).unwrap()
}

fn tau_h() -> ModularTau {
    ModularTau::new(c(0.5, 1.0)).unwrap()
}

#[test]
fn descent_identity_on_generic_samples() {
    // n_tau(P(z)) = P_{n tau}(n z)
    for n in [2usize, 3] {
        for tau in [tau_i(), tau_h()] {
            let params = EllipticRationalParams::new(n, tau).unwrap();
            let mut checked = 0;
            for j in 0..40 {
                let z = c(0.31 + 0.011 * j as f64 / 40.0, 0.0)
                    + tau.value() * (0.23 + 0.37 * j as f64 / 40.0);
                let x = weierstrass_p(z, tau);
                let lhs = match ell_rat_eval(&params, x).unwrap() {
                    ProjValue::Finite(v) => v,
                    ProjValue::Infinity => continue,
                };
                let rhs = match weierstrass_p(z * n as f64, tau.scaled(n)) {
                    ProjValue::Finite(v) => v,
                    ProjValue::Infinity => continue,
                };
                assert!(
                    (lhs - rhs).norm() < 1e-8 * (1.0 + rhs.norm()),
                    "descent at n = {n}, z = {z}"
                );
                checked += 1;
                if checked >= 32 {
                    break;
                }
            }
            assert!(checked >= 32, "not enough valid samples");
        }
    }
}

#[test]
fn two_torsion_maps_to_the_point_at_infinity() {
    // x = e-value at half period 1/2 of E_tau: 2z lands on the lattice
    let params = EllipticRationalParams::new(2, tau_i()).unwrap();
    let wd = weierstrass_data(tau_i()).unwrap();
    let img = ell_rat_eval(&params, ProjValue::Finite(wd.e_values[0])).unwrap();
    assert!(img.is_infinity());
    // infinity is fixed
    assert!(ell_rat_eval(&params, ProjValue::Infinity)
        .unwrap()
        .is_infinity());
}

#[test]
fn branch_independence_from_evenness() {
    // both preimages +/- z of x give the same output; sample via forward map
    let params = EllipticRationalParams::new(2, tau_i()).unwrap();
    let z = c(0.23, 0.11);
    let xp = weierstrass_p(z, tau_i());
    let xm = weierstrass_p(-z, tau_i());
    let a = ell_rat_eval(&params, xp).unwrap().finite().unwrap();
    let b = ell_rat_eval(&params, xm).unwrap().finite().unwrap();
    assert!((a - b).norm() < 1e-8 * (1.0 + a.norm()));
}

#[test]
fn doubling_oracle_at_a_real_point() {
    // n = 2, tau = i, x = P(0.3): output equals P_{2i}(0.6)
    let params = EllipticRationalParams::new(2, tau_i()).unwrap();
    let x = weierstrass_p(c(0.3, 0.0), tau_i());
    let lhs = ell_rat_eval(&params, x).unwrap().finite().unwrap();
    let rhs = weierstrass_p(c(0.6, 0.0), tau_i().scaled(2))
        .finite()
        .unwrap();
    assert!((lhs - rhs).norm() < 1e-8 * (1.0 + rhs.norm()));
}

#[test]
fn predicted_critical_values_for_degree_three() {
    // four values: the three e-values of E_{3i} plus infinity
    let params = EllipticRationalParams::new(3, tau_i()).unwrap();
    let cv = ell_rat_critical_values(&params).unwrap();
    assert_eq!(cv.len(), 4);
    assert_eq!(cv.iter().filter(|v| v.is_infinity()).count(), 1);
    let finite_sum: C64 = cv.iter().filter_map(|v| v.finite()).sum();
    assert!(
        finite_sum.norm() < 1e-10,
        "finite critical values sum to zero"
    );
    let wd3 = weierstrass_data(tau_i().scaled(3)).unwrap();
    for e in wd3.e_values.iter() {
        assert!(
            cv.iter().any(|v| v.dist(ProjValue::Finite(*e)) < 1e-12),
            "e-value {e} missing"
        );
    }
}

#[test]
fn fitted_rational_reproduces_descent_and_critical_values() {
    for n in [2usize, 3] {
        for tau in [tau_i(), tau_h()] {
            let params = EllipticRationalParams::new(n, tau).unwrap();
            let fit = ell_rat_fit(&params).unwrap();
            assert!(fit.holdout_residual < 1e-6);
            // degree check: plain coefficients of degree <= n, jointly nonzero lead
            let num = fit.numerator();
            let den = fit.denominator();
            assert!(num.len() <= n + 1 && den.len() <= n + 1);
            let lead = num
                .last()
                .map(|v| v.norm())
                .unwrap_or(0.0)
                .max(den.last().map(|v| v.norm()).unwrap_or(0.0));
            assert!(lead > 1e-12, "leading coefficients vanish");
            // fitted critical values land inside the predicted torsion set
            let cv = fit.critical_values().unwrap();
            let pred = ell_rat_critical_values(&params).unwrap();
            for v in &cv {
                let nearest = pred
                    .iter()
                    .map(|p| p.dist(*v))
                    .fold(f64::INFINITY, f64::min);
                assert!(
                    nearest < 1e-6,
                    "critical value {v:?} off the torsion set ({nearest:.2e})"
                );
            }
            match n {
                // degree 2 realizes exactly two of the four predicted values
                2 => assert_eq!(cv.len(), 2, "n = 2 critical values: {cv:?}"),
                // degree 3 realizes all four (including infinity)
                3 => {
                    assert_eq!(cv.len(), 4, "n = 3 critical values: {cv:?}");
                    assert!(cv.iter().any(|v| v.is_infinity()));
                    for p in &pred {
                        let nearest = cv.iter().map(|v| p.dist(*v)).fold(f64::INFINITY, f64::min);
                        assert!(nearest < 1e-6, "predicted value {p:?} not attained");
                    }
                }
                _ => unreachable!(),
            }
        }
    }
}

#[test]
fn gamma0_membership_and_action() {
    // [[1,1],[0,1]] is in Gamma_0(n) for every n
    let t_mat = ModularMatrix::new(1, 1, 0, 1).unwrap();
    for n in 1..=8 {
        assert!(gamma0_member(&t_mat, n));
    }
    // [[1,0],[1,1]] only for n = 1
    let l1 = ModularMatrix::new(1, 0, 1, 1).unwrap();
    assert!(gamma0_member(&l1, 1));
    for n in 2..=8 {
        assert!(!gamma0_member(&l1, n));
    }
    // [[1,0],[3,1]] in Gamma_0(3); the action lands in the upper half plane
    let l3 = ModularMatrix::new(1, 0, 3, 1).unwrap();
    assert!(gamma0_member(&l3, 3));
    let img = gamma0_apply(&l3, tau_i()).unwrap();
    let expect = c(0.0, 1.0) / c(1.0, 3.0);
    assert!((img.value() - expect).norm() < 1e-15);
    assert!(img.value().im > 0.0);
    // determinant gate
    assert!(ModularMatrix::new(1, 1, 1, 1).is_err());
}

#[test]
fn gamma0_witness_verification() {
    // identity: deviation 0
    let id = ModularMatrix::new(1, 0, 0, 1).unwrap();
    let rep = equivalence_check(3, tau_i(), &id).unwrap();
    assert!(rep.verified);
    assert!(rep.max_deviation < 1e-9);
    // translation and the lower-triangular member: verified at 1e-5
    for m in [
        ModularMatrix::new(1, 1, 0, 1).unwrap(),
        ModularMatrix::new(1, 0, 3, 1).unwrap(),
    ] {
        let rep = equivalence_check(3, tau_i(), &m).unwrap();
        assert!(
            rep.verified,
            "witness failed: dev {:.2e}",
            rep.max_deviation
        );
        assert!(rep.max_deviation < 1e-5);
        assert!(rep.invariant_deviation < 1e-6);
    }
    // the membership gate rejects non-members
    let bad = ModularMatrix::new(1, 0, 1, 1).unwrap();
    assert!(equivalence_check(3, tau_i(), &bad).is_err());
}

#[test]
fn jordan_loop_closure_and_forward_image() {
    let tau = tau_i();
    let lp = jordan_loop(tau, 64).unwrap();
    assert_eq!(lp.len(), 64);
    // closure: wrapping the real part returns to the start
    let wrap = weierstrass_p(c(1.0, 0.25), tau).finite().unwrap();
    assert!((lp[0] - wrap).norm() < 1e-9);
    assert!(jordan_loop(tau, 4).is_err());

    // forward image: n_tau maps C_tau onto C_{n tau}
    let n = 3usize;
    let params = EllipticRationalParams::new(n, tau).unwrap();
    for j in 0..16 {
        let z = c(j as f64 / 16.0, 0.25);
        let x = weierstrass_p(z, tau);
        let y = ell_rat_eval(&params, x).unwrap().finite().unwrap();
        let on_curve = weierstrass_p(z * n as f64, tau.scaled(n)).finite().unwrap();
        assert!(
            (y - on_curve).norm() < 1e-6,
            "image off C_{{n tau}} at z = {z}"
        );
    }
}

#[test]
fn winding_is_sampling_independent() {
    let tau = tau_i();
    let lp8 = jordan_loop(tau, 8).unwrap();
    let lp64 = jordan_loop(tau, 64).unwrap();
    let pred = ell_rat_critical_values(&EllipticRationalParams::new(2, tau).unwrap()).unwrap();
    for v in pred.iter().filter_map(|p| p.finite()) {
        assert_eq!(
            winding_number(&lp8, v),
            winding_number(&lp64, v),
            "winding around {v} changed with sampling"
        );
    }
}

#[test]
fn nesting_for_elliptic_rationals() {
    // (mn)_tau = m_{n tau} . n_tau on samples
    for &(m, n) in &[(2usize, 2usize), (2, 3)] {
        let tau = tau_i();
        let whole = EllipticRationalParams::new(m * n, tau).unwrap();
        let inner = EllipticRationalParams::new(n, tau).unwrap();
        let outer = EllipticRationalParams::new(m, tau.scaled(n)).unwrap();
        let mut checked = 0;
        for j in 0..24 {
            let z = c(0.27 + 0.003 * j as f64, 0.0) + tau.value() * (0.31 + 0.015 * j as f64);
            let x = weierstrass_p(z, tau);
            let lhs = match ell_rat_eval(&whole, x).unwrap() {
                ProjValue::Finite(v) => v,
                ProjValue::Infinity => continue,
            };
            let mid = ell_rat_eval(&inner, x).unwrap();
            let rhs = match ell_rat_eval(&outer, mid).unwrap() {
                ProjValue::Finite(v) => v,
                ProjValue::Infinity => continue,
            };
            assert!(
                (lhs - rhs).norm() < 1e-7 * (1.0 + lhs.norm()),
                "(mn)_tau nesting at (m, n) = ({m}, {n}), z = {z}: {:.2e}",
                (lhs - rhs).norm()
            );
            checked += 1;
        }
        assert!(checked >= 16);
    }
}

#[test]
fn cheby_blaschke_shares_critical_geometry_with_half_tau_descent() {
    // T_{n,t} ~ n_{tau/2} with tau = 4ti/pi: the four critical values of the
    // disk map (interior pair and its reflection) and the four torsion
    // values of the descent must agree in cross-ratio (compared through the
    // unordered j-invariant)
    for (n, t) in [(3usize, 0.4f64), (4, 0.5)] {
        let tau = tau_of_t(t).unwrap();
        let g_nt = gamma_of_t(n as f64 * t).unwrap();
        let _ = cheby_blaschke(n, t).unwrap();
        // critical values of T on the sphere: +/- gamma(nt) and reflections
        let cvals = [
            ProjValue::Finite(c(g_nt, 0.0)),
            ProjValue::Finite(c(-g_nt, 0.0)),
            ProjValue::Finite(c(1.0 / g_nt, 0.0)),
            ProjValue::Finite(c(-1.0 / g_nt, 0.0)),
        ];
        let j_disk = four_point_j_invariant(&cvals).unwrap();
        let half = ModularTau::new(tau.value() * 0.5).unwrap();
        let torsion =
            ell_rat_critical_values(&EllipticRationalParams::new(n, half).unwrap()).unwrap();
        let j_descent =
            four_point_j_invariant(&[torsion[0], torsion[1], torsion[2], torsion[3]]).unwrap();
        assert!(
            (j_disk - j_descent).norm() < 1e-6 * (1.0 + j_disk.norm()),
            "j-invariants differ at (n, t) = ({n}, {t}): {j_disk} vs {j_descent}"
        );
    }
}
