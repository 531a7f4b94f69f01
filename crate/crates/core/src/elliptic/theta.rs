//! Jacobi theta null values.
//!
//! Series are truncated once the next term drops below 1e-17 relative, which
//! the squared-exponent decay makes cheap for any |q| bounded away from 1.
//! The quarter power of the nome is taken as `exp(i pi tau / 4)`, so theta2
//! is single-valued as a function of tau.

use super::ModularTau;
use crate::C64;
#[allow(unused_imports)]
use num_traits::Float; // float methods in no_std builds

const TAIL: f64 = 1e-17;
const MAX_TERMS: usize = 4000;

/// `theta2(q) = 2 q^{1/4} sum_{j>=0} q^{j(j+1)}`.
pub fn theta2(tau: ModularTau) -> C64 {
    let q = tau.nome();
    let q4 = (C64::new(0.0, 1.0) * core::f64::consts::FRAC_PI_4 * tau.value()).exp();
    let q2 = q * q;
    let mut sum = C64::new(1.0, 0.0); // j = 0 term
    let mut cur = C64::new(1.0, 0.0); // q^{j(j+1)}
    let mut step = q2; // q^{2j+2}
    for _ in 0..MAX_TERMS {
        cur *= step;
        step *= q2;
        sum += cur;
        if cur.norm() < TAIL {
            break;
        }
    }
    q4 * sum * 2.0
}

/// `theta3(q) = 1 + 2 sum_{j>=1} q^{j^2}`.
pub fn theta3(tau: ModularTau) -> C64 {
    theta34(tau, false)
}

/// `theta4(q) = 1 + 2 sum_{j>=1} (-1)^j q^{j^2}`.
pub fn theta4(tau: ModularTau) -> C64 {
    theta34(tau, true)
}

fn theta34(tau: ModularTau, alternate: bool) -> C64 {
    let q = tau.nome();
    let q2 = q * q;
    let mut sum = C64::new(1.0, 0.0);
    let mut cur = C64::new(1.0, 0.0); // q^{j^2}
    let mut step = q; // q^{2j+1}
    let mut sign = 1.0;
    for _ in 0..MAX_TERMS {
        cur *= step;
        step *= q2;
        if alternate {
            sign = -sign;
        }
        sum += cur * 2.0 * if alternate { sign } else { 1.0 };
        if cur.norm() < TAIL {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::modulus_data;

    #[test]
    fn jacobi_identity_theta_fourth_powers() {
        // theta3^4 = theta2^4 + theta4^4
        for &(re, im) in &[(0.0, 1.0), (0.5, 1.0), (0.3, 0.7), (0.0, 0.2)] {
            let tau = ModularTau::new(C64::new(re, im)).unwrap();
            let t2 = theta2(tau).powu(4);
            let t3 = theta3(tau).powu(4);
            let t4 = theta4(tau).powu(4);
            assert!(
                (t3 - t2 - t4).norm() < 1e-12 * t3.norm(),
                "tau = {re}+{im}i"
            );
        }
    }

    #[test]
    fn quarter_period_matches_theta3_squared() {
        // K = (pi/2) theta3^2 must agree with the AGM route
        for &(re, im) in &[(0.0, 1.0), (0.5, 1.0), (0.0, 0.4)] {
            let tau = ModularTau::new(C64::new(re, im)).unwrap();
            let md = modulus_data(tau).unwrap();
            let t3 = theta3(tau);
            let k_theta = t3 * t3 * core::f64::consts::FRAC_PI_2;
            assert!((md.quarter_k - k_theta).norm() < 1e-12 * k_theta.norm());
        }
    }
}
