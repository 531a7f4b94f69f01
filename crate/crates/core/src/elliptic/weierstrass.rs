//! The Weierstrass P-function on the lattice spanned by 1 and tau.
//!
//! Evaluation uses the Eisenstein-accelerated row summation
//!
//! ```text
//! P(z) = pi^2/sin^2(pi z) - pi^2/3
//!      + sum_{n>=1} [ pi^2/sin^2(pi(z-n tau)) + pi^2/sin^2(pi(z+n tau))
//!                     - 2 pi^2/sin^2(pi n tau) ]
//! ```
//!
//! whose rows decay like exp(-2 pi n Im tau); the cutoff is chosen so the
//! dropped tail is below 1e-12.

use super::ModularTau;
use crate::{Error, ProjValue, Result, C64};
use alloc::{format, vec::Vec};
#[allow(unused_imports)]
use num_traits::Float; // float methods in no_std builds

/// Distance to the lattice below which evaluation reports the pole.
pub const POLE_TOL: f64 = 1e-8;

/// e-values at the half periods 1/2, tau/2, (1+tau)/2 and the invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassData {
    pub tau: ModularTau,
    pub e_values: [C64; 3],
    pub g2: C64,
    pub g3: C64,
}

fn row_terms(tau: ModularTau) -> usize {
    // tail ~ exp(-2 pi n Im tau) < 1e-16
    let n = (38.0 / (2.0 * core::f64::consts::PI * tau.value().im)).ceil() as usize;
    n.max(3) + 2
}

fn check_tau(tau: ModularTau) -> Result<()> {
    if tau.value().im < 0.004 {
        return Err(Error::domain(format!(
            "Im tau = {} too small for the accelerated lattice sum",
            tau.value().im
        )));
    }
    Ok(())
}

/// Reduce `z` to the lattice cell centered at the origin and report the
/// distance to the nearest lattice point.
fn reduce(z: C64, tau: C64) -> C64 {
    let b = z.im / tau.im;
    let a = z.re - b * tau.re;
    let af = a - a.round();
    let bf = b - b.round();
    af + bf * tau
}

fn inv_sin_sq(w: C64) -> C64 {
    let s = w.sin();
    (s * s).inv()
}

/// P(z) on the lattice `Z + tau Z`; the pole marker is returned within
/// `POLE_TOL` of a lattice point.
pub fn weierstrass_p(z: C64, tau: ModularTau) -> ProjValue {
    let t = tau.value();
    let zr = reduce(z, t);
    if zr.norm() < POLE_TOL {
        return ProjValue::Infinity;
    }
    let pi = core::f64::consts::PI;
    let pi2 = pi * pi;
    let mut acc = inv_sin_sq(zr * pi) * pi2 - pi2 / 3.0;
    for n in 1..=row_terms(tau) {
        let shift = t * n as f64;
        let row = inv_sin_sq((zr - shift) * pi) + inv_sin_sq((zr + shift) * pi)
            - inv_sin_sq(shift * pi) * 2.0;
        acc += row * pi2;
    }
    ProjValue::Finite(acc)
}

/// P'(z) by the term-wise differentiated row sum.
pub fn weierstrass_p_prime(z: C64, tau: ModularTau) -> ProjValue {
    let t = tau.value();
    let zr = reduce(z, t);
    if zr.norm() < POLE_TOL {
        return ProjValue::Infinity;
    }
    let pi = core::f64::consts::PI;
    let dterm = |w: C64| -> C64 {
        let s = (w * pi).sin();
        let c = (w * pi).cos();
        c / (s * s * s) * (-2.0 * pi * pi * pi)
    };
    let mut acc = dterm(zr);
    for n in 1..=row_terms(tau) {
        let shift = t * n as f64;
        acc += dterm(zr - shift) + dterm(zr + shift);
    }
    ProjValue::Finite(acc)
}

/// Half-period values and invariants.
pub(super) fn data(tau: ModularTau) -> Result<WeierstrassData> {
    check_tau(tau)?;
    let t = tau.value();
    let halves = [C64::new(0.5, 0.0), t * 0.5, (t + C64::new(1.0, 0.0)) * 0.5];
    let mut e = [C64::new(0.0, 0.0); 3];
    for (i, h) in halves.iter().enumerate() {
        match weierstrass_p(*h, tau) {
            ProjValue::Finite(v) => e[i] = v,
            ProjValue::Infinity => {
                return Err(Error::inconsistent("half period hit the pole tolerance"))
            }
        }
    }
    // 4 w^3 - g2 w - g3 = 4 (w-e1)(w-e2)(w-e3)
    let g2 = (e[0] * e[1] + e[0] * e[2] + e[1] * e[2]) * -4.0;
    let g3 = e[0] * e[1] * e[2] * 4.0;
    Ok(WeierstrassData {
        tau,
        e_values: e,
        g2,
        g3,
    })
}

/// One preimage of `x` under P (evenness makes the branch immaterial).
/// Accepts the pole marker, whose preimage is the origin.
pub fn inverse_p(x: ProjValue, tau: ModularTau) -> Result<C64> {
    check_tau(tau)?;
    let x = match x {
        ProjValue::Infinity => return Ok(C64::new(0.0, 0.0)),
        ProjValue::Finite(v) => v,
    };
    let t = tau.value();
    let wd = data(tau)?;
    let scale = wd.e_values.iter().map(|e| e.norm()).fold(1.0, f64::max);

    let mut seeds: Vec<(f64, C64)> = Vec::new();
    let push_seed = |seeds: &mut Vec<(f64, C64)>, z: C64| {
        if let ProjValue::Finite(v) = weierstrass_p(z, tau) {
            seeds.push(((v - x).norm(), z));
        }
    };
    let grid = 7;
    for i in 0..grid {
        for j in 0..grid {
            let z = C64::new((i as f64 + 0.4) / grid as f64, 0.0)
                + t * ((j as f64 + 0.35) / grid as f64);
            push_seed(&mut seeds, z);
        }
    }
    // near-pole seed: P(z) ~ 1/z^2
    if x.norm() > scale {
        push_seed(&mut seeds, x.sqrt().inv());
    }
    // near a half period e_i: P(h + d) ~ e_i + P''(h) d^2 / 2
    for (i, h) in [C64::new(0.5, 0.0), t * 0.5, (t + C64::new(1.0, 0.0)) * 0.5]
        .iter()
        .enumerate()
    {
        if (x - wd.e_values[i]).norm() < 0.3 * scale {
            if let ProjValue::Finite(ppp) = p_second(*h, tau) {
                if ppp.norm() > 1e-12 {
                    let d = ((x - wd.e_values[i]) * 2.0 / ppp).sqrt();
                    push_seed(&mut seeds, *h + d);
                }
            }
        }
    }
    seeds.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let target = 1e-10 * (1.0 + x.norm());
    for &(_, z0) in seeds.iter().take(8) {
        let mut z = z0;
        let mut ok = false;
        for _ in 0..60 {
            let (pv, dv) = match (weierstrass_p(z, tau), weierstrass_p_prime(z, tau)) {
                (ProjValue::Finite(p), ProjValue::Finite(d)) => (p, d),
                _ => break,
            };
            let resid = pv - x;
            if resid.norm() < target {
                ok = true;
                break;
            }
            if dv.norm() < 1e-14 * (1.0 + pv.norm()) {
                break;
            }
            let mut step = resid / dv;
            // keep Newton inside a neighborhood of the cell
            if step.norm() > 0.45 {
                step *= 0.45 / step.norm();
            }
            z -= step;
        }
        if ok {
            return Ok(z);
        }
    }
    Err(Error::nonconvergence(format!(
        "inverse_p failed for x = {x}, tau = {t}"
    )))
}

fn p_second(z: C64, tau: ModularTau) -> ProjValue {
    // P'' = 6 P^2 - g2/2; use the differential equation rather than a third sum
    match (weierstrass_p(z, tau), data(tau)) {
        (ProjValue::Finite(p), Ok(wd)) => ProjValue::Finite(p * p * 6.0 - wd.g2 * 0.5),
        _ => ProjValue::Infinity,
    }
}
