//! Jacobi elliptic functions by the descending Landen transformation.
//!
//! The modulus chain `k_{i+1} = (k_i / (1 + k'_i))^2` descends quadratically
//! to zero; at the bottom sn, cn, dn reduce to sin, cos, 1 and are lifted
//! back through the rational Gauss ascent
//!
//! ```text
//! sn -> (1+k) sn / (1 + k sn^2)
//! cn -> cn dn / (1 + k sn^2)
//! dn -> (1 - k sn^2) / (1 + k sn^2)
//! ```
//!
//! which keeps every step square-root free, so complex arguments carry no
//! branch ambiguity. Real moduli in (0,1) are the accurate regime; complex
//! moduli are admitted but degrade gracefully (see crate docs).

use crate::{Error, Result, C64};
use alloc::{format, vec::Vec};
#[allow(unused_imports)]
use num_traits::Float; // float methods in no_std builds

/// Values of the four Jacobi functions at one argument. `cd = cn/dn` is
/// `None` exactly when the argument sits at a pole of cd (the `i K'`
/// translates where dn vanishes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiValues {
    pub sn: C64,
    pub cn: C64,
    pub dn: C64,
    pub cd: Option<C64>,
}

/// Precomputed Landen chain for a fixed modulus.
#[derive(Debug, Clone)]
pub struct JacobiKernel {
    modulus: C64,
    chain: Vec<C64>, // k_1, k_2, ... descending, k_0 = modulus
    big_k: C64,
    big_kp: C64,
}

impl JacobiKernel {
    pub fn new(k: C64) -> Result<Self> {
        if (k - C64::new(1.0, 0.0)).norm() < 1e-12 || (k + C64::new(1.0, 0.0)).norm() < 1e-12 {
            return Err(Error::domain("modulus k = +/-1 is degenerate"));
        }
        let chain = landen_chain(k)?;
        let mut prod = C64::new(1.0, 0.0);
        for &ki in &chain {
            prod *= C64::new(1.0, 0.0) + ki;
        }
        let big_k = prod * core::f64::consts::FRAC_PI_2;
        let kp = (C64::new(1.0, 0.0) - k * k).sqrt();
        let big_kp = complete_integral(kp, k)?;
        Ok(JacobiKernel {
            modulus: k,
            chain,
            big_k,
            big_kp,
        })
    }

    pub fn modulus(&self) -> C64 {
        self.modulus
    }

    /// Complete elliptic integral K(k).
    pub fn big_k(&self) -> C64 {
        self.big_k
    }

    /// Complementary integral K'(k) = K(k').
    pub fn big_kp(&self) -> C64 {
        self.big_kp
    }

    /// sn, cn, dn, cd at `u`.
    pub fn eval(&self, u: C64) -> JacobiValues {
        let mut scale = C64::new(1.0, 0.0);
        for &ki in &self.chain {
            scale *= C64::new(1.0, 0.0) + ki;
        }
        let bottom = u / scale;
        let mut sn = bottom.sin();
        let mut cn = bottom.cos();
        let mut dn = C64::new(1.0, 0.0);
        for &ki in self.chain.iter().rev() {
            let s2 = sn * sn;
            let denom = C64::new(1.0, 0.0) + ki * s2;
            let new_sn = (C64::new(1.0, 0.0) + ki) * sn / denom;
            let new_cn = cn * dn / denom;
            let new_dn = (C64::new(1.0, 0.0) - ki * s2) / denom;
            sn = new_sn;
            cn = new_cn;
            dn = new_dn;
        }
        let cd = if dn.norm() < 1e-13 * (1.0 + cn.norm()) {
            None
        } else {
            Some(cn / dn)
        };
        JacobiValues { sn, cn, dn, cd }
    }

    /// One value `u` with `cd(u) = x`, found from the descending-Landen
    /// arccd seed polished by Newton on the full-precision kernel. Any
    /// preimage is acceptable; the deck symmetries make the branch choice
    /// immaterial downstream.
    pub fn inverse_cd(&self, x: C64) -> Result<C64> {
        let one = C64::new(1.0, 0.0);
        // analytic seed
        let mut w = x;
        let mut prev = self.modulus;
        for &ki in &self.chain {
            let root = (one - (prev * w) * (prev * w)).sqrt();
            w = w * 2.0 / ((one + ki) * (one + root));
            prev = ki;
        }
        let seed = w.acos() / core::f64::consts::FRAC_PI_2 * self.big_k;
        if let Some(u) = self.newton_cd(seed, x) {
            return Ok(u);
        }
        // coarse grid fallback over one period parallelogram
        let mut best: Option<(f64, C64)> = None;
        let mut seeds = Vec::new();
        for i in 0..12 {
            for j in 0..8 {
                let u = self.big_k * (4.0 * (i as f64 + 0.41) / 12.0)
                    + self.big_kp * C64::new(0.0, 2.0 * (j as f64 + 0.37) / 8.0);
                let jv = self.eval(u);
                if let Some(cd) = jv.cd {
                    let r = (cd - x).norm();
                    seeds.push((r, u));
                    if best.map_or(true, |(b, _)| r < b) {
                        best = Some((r, u));
                    }
                }
            }
        }
        seeds.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for &(_, u0) in seeds.iter().take(6) {
            if let Some(u) = self.newton_cd(u0, x) {
                return Ok(u);
            }
        }
        Err(Error::nonconvergence(format!(
            "inverse_cd failed for x = {x}, k = {}",
            self.modulus
        )))
    }

    fn newton_cd(&self, seed: C64, x: C64) -> Option<C64> {
        let kp2 = C64::new(1.0, 0.0) - self.modulus * self.modulus;
        let target = 1e-11 * (1.0 + x.norm());
        let mut u = seed;
        for _ in 0..30 {
            let jv = self.eval(u);
            let cd = jv.cd?;
            let resid = cd - x;
            if resid.norm() < target {
                return Some(u);
            }
            // d(cd)/du = -(1-k^2) sn / dn^2
            let deriv = -kp2 * jv.sn / (jv.dn * jv.dn);
            if deriv.norm() < 1e-300 {
                return None;
            }
            let step = resid / deriv;
            u -= step;
        }
        let jv = self.eval(u);
        match jv.cd {
            Some(cd) if (cd - x).norm() < 10.0 * target => Some(u),
            _ => None,
        }
    }
}

/// K(modulus) given the complementary modulus as well; switches to the
/// logarithmic asymptotic when the complement is so small that the modulus
/// itself rounds to 1 in floating point.
fn complete_integral(modulus: C64, complement: C64) -> Result<C64> {
    if complement.norm() < 1e-7 {
        // K(m) = ln(4/m') + (m'^2/4)(ln(4/m') - 1) + O(m'^4 ln m')
        let l = (C64::new(4.0, 0.0) / complement).ln();
        return Ok(l + complement * complement * 0.25 * (l - C64::new(1.0, 0.0)));
    }
    let chain = landen_chain(modulus)?;
    let mut prod = C64::new(1.0, 0.0);
    for &ki in &chain {
        prod *= C64::new(1.0, 0.0) + ki;
    }
    Ok(prod * core::f64::consts::FRAC_PI_2)
}

fn landen_chain(k: C64) -> Result<Vec<C64>> {
    let one = C64::new(1.0, 0.0);
    let mut chain = Vec::new();
    let mut ki = k;
    for _ in 0..60 {
        if ki.norm() < 1e-12 {
            return Ok(chain);
        }
        let kp = (one - ki * ki).sqrt();
        let next = (ki / (one + kp)) * (ki / (one + kp));
        chain.push(next);
        ki = next;
    }
    Err(Error::nonconvergence(format!(
        "Landen chain for k = {k} did not descend"
    )))
}

/// sn, cn, dn, cd at `u` for modulus `k`. Builds the Landen chain per call;
/// use [`JacobiKernel`] to amortize over a grid.
pub fn jacobi_functions(u: C64, k: C64) -> Result<JacobiValues> {
    Ok(JacobiKernel::new(k)?.eval(u))
}

/// One preimage of `x` under cd with modulus `k`.
pub fn inverse_cd(x: C64, k: C64) -> Result<C64> {
    JacobiKernel::new(k)?.inverse_cd(x)
}
