//! Numerical kernels for elliptic moduli, Jacobi elliptic functions and the
//! Weierstrass P-function, parameterized by a modular parameter in the upper
//! half plane.
//!
//! Conventions: the nome is `q = exp(i pi tau)`, the elliptic modulus is the
//! theta quotient `k = theta2(q)^2 / theta3(q)^2`, and the quarter periods
//! satisfy `K'/K = -i tau`. The scale function `gamma(t) = sqrt(k(4ti/pi))`
//! bounds the invariant interval of the Chebyshev-Blaschke products.

mod jacobi;
mod theta;
mod weierstrass;

pub use jacobi::{inverse_cd, jacobi_functions, JacobiKernel, JacobiValues};
pub use theta::{theta2, theta3, theta4};
pub use weierstrass::{inverse_p, weierstrass_p, weierstrass_p_prime, WeierstrassData};

use crate::{Error, ProjValue, Result, C64};
use alloc::format;
#[allow(unused_imports)]
use num_traits::Float; // float methods in no_std builds

/// Largest admissible nome magnitude; beyond it the theta series is treated
/// as nonconvergent and reported as a domain error.
pub const NOME_LIMIT: f64 = 0.999;

/// A modular parameter in the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularTau {
    value: C64,
}

impl ModularTau {
    pub fn new(value: C64) -> Result<Self> {
        if !(value.im > 0.0) || !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::domain(format!(
                "tau = {value} must lie in the upper half plane"
            )));
        }
        Ok(ModularTau { value })
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    /// The nome `q = exp(i pi tau)`.
    pub fn nome(&self) -> C64 {
        (C64::new(0.0, 1.0) * core::f64::consts::PI * self.value).exp()
    }

    /// `n * tau`, again in the upper half plane.
    pub fn scaled(&self, n: usize) -> ModularTau {
        ModularTau {
            value: self.value * n as f64,
        }
    }

    /// Purely imaginary `tau = i s`.
    pub fn imaginary(s: f64) -> Result<Self> {
        ModularTau::new(C64::new(0.0, s))
    }
}

/// Nome, modulus, complementary modulus and quarter periods attached to a
/// modular parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulusData {
    pub tau: ModularTau,
    pub nome_q: C64,
    pub modulus_k: C64,
    pub comp_modulus_kp: C64,
    pub quarter_k: C64,
    pub quarter_kp: C64,
}

/// The elliptic modulus and period data for `tau`.
///
/// `k = theta2^2/theta3^2`, `k' = theta4^2/theta3^2` (so `k^2 + k'^2 = 1`),
/// and the quarter periods come from the arithmetic-geometric mean,
/// `K = pi / (2 agm(1, k'))`.
pub fn modulus_data(tau: ModularTau) -> Result<EllipticModulusData> {
    let q = tau.nome();
    if q.norm() >= NOME_LIMIT {
        return Err(Error::domain(format!(
            "|q| = {:.6} >= {NOME_LIMIT}: theta series does not converge usefully",
            q.norm()
        )));
    }
    let t2 = theta2(tau);
    let t3 = theta3(tau);
    let t4 = theta4(tau);
    let k = (t2 / t3) * (t2 / t3);
    let kp = (t4 / t3) * (t4 / t3);
    let half_pi = core::f64::consts::FRAC_PI_2;
    let quarter_k = C64::new(half_pi, 0.0) / agm(C64::new(1.0, 0.0), kp);
    let quarter_kp = C64::new(half_pi, 0.0) / agm(C64::new(1.0, 0.0), k);
    Ok(EllipticModulusData {
        tau,
        nome_q: q,
        modulus_k: k,
        comp_modulus_kp: kp,
        quarter_k,
        quarter_kp,
    })
}

/// `gamma(t) = sqrt(k(4ti/pi))`, strictly decreasing from 1 to 0 on t > 0.
///
/// Near t -> 0 the modulus k approaches 1 within float noise, so gamma is
/// computed there through the (relatively accurate, tiny) complementary
/// modulus as `(1 - k'^2)^{1/4}`; it saturates at exactly 1.0 once
/// `1 - gamma` falls below f64 resolution.
pub fn gamma_of_t(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("gamma(t) needs t > 0, got {t}")));
    }
    let tau = tau_of_t(t)?;
    let md = modulus_data(tau)?;
    let k = md.modulus_k;
    debug_assert!(k.im.abs() < 1e-10);
    if !(k.re > 0.0) {
        return Err(Error::inconsistent(format!("k({t}) not positive: {k}")));
    }
    let kp2 = md.comp_modulus_kp.norm_sqr();
    if kp2 < 0.5 {
        Ok((0.25 * (-kp2).ln_1p()).exp())
    } else {
        Ok(k.re.sqrt().min(1.0))
    }
}

/// The modular parameter `4 t i / pi` attached to the real parameter `t`.
pub fn tau_of_t(t: f64) -> Result<ModularTau> {
    ModularTau::imaginary(4.0 * t / core::f64::consts::PI)
}

/// Arithmetic-geometric mean with the principal (right half plane) square
/// root selection, valid for complex arguments off the negative ray.
pub fn agm(a0: C64, b0: C64) -> C64 {
    let mut a = a0;
    let mut b = b0;
    for _ in 0..60 {
        let am = (a + b) * 0.5;
        let mut gm = (a * b).sqrt();
        if (am - gm).norm() > (am + gm).norm() {
            gm = -gm;
        }
        a = am;
        b = gm;
        if (a - b).norm() <= 1e-17 * a.norm() {
            break;
        }
    }
    a
}

/// Weierstrass data (`e`-values at the half periods and the invariants) for
/// the lattice spanned by `1` and `tau`.
pub fn weierstrass_data(tau: ModularTau) -> Result<WeierstrassData> {
    weierstrass::data(tau)
}

/// Convenience: the Weierstrass function as a sphere-valued map.
pub fn weierstrass_p_proj(z: C64, tau: ModularTau) -> ProjValue {
    weierstrass_p(z, tau)
}
