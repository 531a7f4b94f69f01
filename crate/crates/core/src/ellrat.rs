//! Elliptic rational functions `n_tau` by Weierstrass descent.
//!
//! `n_tau` is the rational map making `n_tau . P_tau = P_{n tau} . [n]`
//! commute, where `[n] : z -> n z` is the cyclic isogeny between the
//! lattices `Z + tau Z` and `Z + n tau Z`. Its critical values for n >= 3
//! are the images of the 2-torsion, `{e_1(n tau), e_2(n tau), e_3(n tau),
//! infinity}`; for n = 2 the set is strictly smaller (two of the finite
//! values) and callers are expected to treat the predicted set as an upper
//! bound.

use crate::elliptic::{inverse_p, weierstrass_data, weierstrass_p, ModularTau, WeierstrassData};
use crate::mobius::{four_point_j_invariant, smallest_singular_vector, Mobius};
use crate::{poly, Error, ProjValue, Result, C64};
use alloc::{format, vec, vec::Vec};
#[allow(unused_imports)]
use num_traits::Float; // float methods in no_std builds

/// Parameters of an elliptic rational function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticRationalParams {
    pub n: usize,
    pub tau: ModularTau,
}

impl EllipticRationalParams {
    pub fn new(n: usize, tau: ModularTau) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("elliptic rational functions need n >= 2"));
        }
        Ok(EllipticRationalParams { n, tau })
    }
}

/// Evaluate `n_tau(x) = P_{n tau}(n z)` where `P_tau(z) = x`; branch
/// independent because P is even and the scaling respects the lattices.
pub fn ell_rat_eval(params: &EllipticRationalParams, x: ProjValue) -> Result<ProjValue> {
    let z = inverse_p(x, params.tau)?;
    Ok(weierstrass_p(
        z * params.n as f64,
        params.tau.scaled(params.n),
    ))
}

/// Predicted critical values: P_{n tau} at the three half periods, plus the
/// point at infinity. Exact as a set for n >= 3 (for n = 2 it is an upper
/// bound; two of the finite values occur).
pub fn ell_rat_critical_values(params: &EllipticRationalParams) -> Result<Vec<ProjValue>> {
    let wd = weierstrass_data(params.tau.scaled(params.n))?;
    let mut out: Vec<ProjValue> = wd.e_values.iter().map(|&e| ProjValue::Finite(e)).collect();
    out.push(ProjValue::Infinity);
    Ok(out)
}

/// A degree n / degree n rational interpolant of `n_tau`, fitted by least
/// squares on a circle of samples; kept in circle-normalized coordinates
/// with plain-coordinate coefficients available on demand.
#[derive(Debug, Clone)]
pub struct RationalFit {
    pub n: usize,
    center_x: C64,
    scale_x: f64,
    center_y: C64,
    scale_y: f64,
    /// numerator coefficients in the normalized coordinate, ascending
    num: Vec<C64>,
    den: Vec<C64>,
    /// residual on the holdout samples
    pub holdout_residual: f64,
}

impl RationalFit {
    pub fn eval(&self, x: C64) -> ProjValue {
        let xn = (x - self.center_x) / self.scale_x;
        let num = poly::eval(&self.num, xn);
        let den = poly::eval(&self.den, xn);
        if den.norm() < 1e-14 * (1.0 + num.norm()) {
            return ProjValue::Infinity;
        }
        ProjValue::Finite(num / den * self.scale_y + self.center_y)
    }

    /// Numerator coefficients in the plain coordinate (ascending). The
    /// represented function is `y = scale_y * N(xn)/D(xn) + center_y`
    /// pushed through the de-normalization, so the plain numerator is
    /// `scale_y N + center_y D` composed with `(x - center_x)/scale_x`.
    pub fn numerator(&self) -> Vec<C64> {
        let scaled: Vec<C64> = self
            .num
            .iter()
            .zip(pad(&self.den, self.num.len()))
            .map(|(n, d)| n * self.scale_y + d * self.center_y)
            .collect();
        compose_affine(&scaled, self.center_x, self.scale_x)
    }

    pub fn denominator(&self) -> Vec<C64> {
        compose_affine(&self.den, self.center_x, self.scale_x)
    }

    /// Critical values of the fitted function: values at the roots of
    /// `N'D - ND'`, with the infinity marker added when the denominator has
    /// a multiple root (a multiple pole).
    pub fn critical_values(&self) -> Result<Vec<ProjValue>> {
        let w = poly::trim(
            &poly::sub(
                &poly::mul(&poly::derivative(&self.num), &self.den),
                &poly::mul(&self.num, &poly::derivative(&self.den)),
            ),
            1e-9,
        );
        let crit = poly::roots(&w)?;
        let mut out: Vec<ProjValue> = Vec::new();
        for z in crit {
            let num = poly::eval(&self.num, z);
            let den = poly::eval(&self.den, z);
            let v = if den.norm() < 1e-7 * (1.0 + num.norm()) {
                ProjValue::Infinity
            } else {
                ProjValue::Finite(num / den * self.scale_y + self.center_y)
            };
            if out.iter().all(|u| u.dist(v) > 1e-5) {
                out.push(v);
            }
        }
        // multiple poles put infinity among the critical values
        let dp = poly::trim(&self.den, 1e-10);
        if dp.len() >= 3 {
            let proots = poly::roots(&dp)?;
            let clustered = poly::cluster(&proots, 1e-5);
            if clustered.iter().any(|&(_, m)| m >= 2) && out.iter().all(|u| !u.is_infinity()) {
                out.push(ProjValue::Infinity);
            }
        }
        Ok(out)
    }
}

fn pad(p: &[C64], len: usize) -> Vec<C64> {
    let mut out = p.to_vec();
    out.resize(len.max(p.len()), C64::new(0.0, 0.0));
    out
}

/// Compose `p((x - c)/s)` into plain ascending coefficients.
fn compose_affine(p: &[C64], c: C64, s: f64) -> Vec<C64> {
    let mut acc = vec![C64::new(0.0, 0.0)];
    // Horner in the affine argument
    for &coef in p.iter().rev() {
        acc = poly::mul(&acc, &[-c / s, C64::new(1.0 / s, 0.0)]);
        acc[0] += coef;
    }
    poly::trim(&acc, 1e-12)
}

/// Fit `n_tau` by least-squares rational interpolation from `4n + 4`
/// samples on a generic circle; the holdout residual on `2n` extra points
/// must come in below 1e-6.
pub fn ell_rat_fit(params: &EllipticRationalParams) -> Result<RationalFit> {
    let n = params.n;
    if n > 8 {
        return Err(Error::domain("rational fit is conditioned for n <= 8 only"));
    }
    let wd = weierstrass_data(params.tau)?;
    let scale = wd.e_values.iter().map(|e| e.norm()).fold(1.0, f64::max);
    let center_x = C64::new(0.137, 0.291) * scale * 0.4;
    let radius = 1.7 * scale;

    let m = 4 * n + 4;
    let mut xs = Vec::with_capacity(m);
    let mut ys = Vec::with_capacity(m);
    for j in 0..m {
        let x = center_x
            + C64::from_polar(radius, core::f64::consts::TAU * (j as f64 + 0.3) / m as f64);
        match ell_rat_eval(params, ProjValue::Finite(x))? {
            ProjValue::Finite(y) => {
                xs.push(x);
                ys.push(y);
            }
            ProjValue::Infinity => continue,
        }
    }
    if xs.len() < 2 * n + 3 {
        return Err(Error::Conditioning {
            residual: f64::INFINITY,
        });
    }
    let center_y = ys.iter().sum::<C64>() / ys.len() as f64;
    let scale_y = ys
        .iter()
        .map(|y| (y - center_y).norm())
        .fold(0.0, f64::max)
        .max(1e-9);

    // rows: y' x'^j  (j = 0..n) | -x'^j (j = 0..n), unknowns (den | num)
    let mut rows: Vec<Vec<C64>> = Vec::with_capacity(xs.len());
    for (x, y) in xs.iter().zip(ys.iter()) {
        let xn = (x - center_x) / radius;
        let yn = (y - center_y) / scale_y;
        let mut row = Vec::with_capacity(2 * n + 2);
        let mut p = C64::new(1.0, 0.0);
        for _ in 0..=n {
            row.push(yn * p);
            p *= xn;
        }
        let mut p = C64::new(1.0, 0.0);
        for _ in 0..=n {
            row.push(-p);
            p *= xn;
        }
        rows.push(row);
    }
    let v = smallest_singular_vector(&rows)?;
    let den: Vec<C64> = v[..=n].to_vec();
    let num: Vec<C64> = v[n + 1..].to_vec();
    let lead = den
        .iter()
        .chain(num.iter())
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if lead < 1e-12 {
        return Err(Error::Conditioning {
            residual: f64::INFINITY,
        });
    }

    let fit = RationalFit {
        n,
        center_x,
        scale_x: radius,
        center_y,
        scale_y,
        num,
        den,
        holdout_residual: 0.0,
    };

    // holdout on a different circle
    let mut res = 0.0f64;
    let hold = 2 * n;
    let mut checked = 0;
    for j in 0..(2 * hold) {
        if checked >= hold {
            break;
        }
        let x = center_x
            + C64::from_polar(
                1.31 * radius,
                core::f64::consts::TAU * (j as f64 + 0.17) / hold as f64,
            );
        let truth = match ell_rat_eval(params, ProjValue::Finite(x))? {
            ProjValue::Finite(y) => y,
            ProjValue::Infinity => continue,
        };
        let fitted = match fit.eval(x) {
            ProjValue::Finite(y) => y,
            ProjValue::Infinity => continue,
        };
        res = res.max((truth - fitted).norm() / (1.0 + truth.norm()));
        checked += 1;
    }
    if res > 1e-6 {
        return Err(Error::Conditioning { residual: res });
    }
    Ok(RationalFit {
        holdout_residual: res,
        ..fit
    })
}

/// An integer matrix with determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl ModularMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::domain("matrix must have determinant 1"));
        }
        Ok(ModularMatrix { a, b, c, d })
    }
}

/// Membership in `Gamma_0(n)`: determinant one and `n | c`.
pub fn gamma0_member(m: &ModularMatrix, n: usize) -> bool {
    n > 0 && m.c.rem_euclid(n as i64) == 0
}

/// The Mobius action `tau -> (a tau + b)/(c tau + d)`.
pub fn gamma0_apply(m: &ModularMatrix, tau: ModularTau) -> Result<ModularTau> {
    let t = tau.value();
    let num = t * m.a as f64 + C64::new(m.b as f64, 0.0);
    let den = t * m.c as f64 + C64::new(m.d as f64, 0.0);
    ModularTau::new(num / den)
}

/// Witness report of the `Gamma_0(n)` equivalence `n_{M tau} ~ n_tau`.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub tau2: ModularTau,
    /// max over the sample grid of |eph(n_tau(x)) - n_{M tau}(eps(x))|
    pub max_deviation: f64,
    /// |j(critical values of n_tau) - j(critical values of n_{M tau})| scaled
    pub invariant_deviation: f64,
    pub verified: bool,
    pub eps: Mobius,
    pub eph: Mobius,
}

/// Build the Mobius conjugators predicted by the descent data
/// `gamma = c tau + d` (`z -> z / gamma` on both lattice levels) and verify
/// numerically that `eph . n_tau = n_{M tau} . eps` on a 32-point sample.
///
/// Deviations above 1e-5 yield `verified = false` in the report, not an
/// error.
pub fn equivalence_check(
    n: usize,
    tau: ModularTau,
    m: &ModularMatrix,
) -> Result<EquivalenceReport> {
    if !gamma0_member(m, n) {
        return Err(Error::domain(format!(
            "matrix with c = {} is not in Gamma_0({n})",
            m.c
        )));
    }
    let tau2 = gamma0_apply(m, tau)?;
    let gamma = tau.value() * m.c as f64 + C64::new(m.d as f64, 0.0);

    // descend z -> z/gamma through P at both levels
    let eps = descended_mobius(tau, tau2, gamma)?;
    let eph = descended_mobius(tau.scaled(n), tau2.scaled(n), gamma)?;

    let params1 = EllipticRationalParams::new(n, tau)?;
    let params2 = EllipticRationalParams::new(n, tau2)?;

    let wd = weierstrass_data(tau)?;
    let scale = wd.e_values.iter().map(|e| e.norm()).fold(1.0, f64::max);
    let mut max_dev = 0.0f64;
    let mut checked = 0;
    for j in 0..64 {
        if checked >= 32 {
            break;
        }
        let x = C64::new(0.21, 0.13) * scale * 0.3
            + C64::from_polar(
                1.45 * scale,
                core::f64::consts::TAU * (j as f64 + 0.41) / 32.0,
            );
        let lhs = match params1.pipe(&eph, x)? {
            Some(v) => v,
            None => continue,
        };
        let rhs = match params2.pipe_pre(&eps, x)? {
            Some(v) => v,
            None => continue,
        };
        max_dev = max_dev.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
        checked += 1;
    }

    // invariant cross-ratio of the four critical values, compared through
    // the unordered j-invariant
    let cv1 = ell_rat_critical_values(&params1)?;
    let cv2 = ell_rat_critical_values(&params2)?;
    let j1 = four_point_j_invariant(&[cv1[0], cv1[1], cv1[2], cv1[3]])?;
    let j2 = four_point_j_invariant(&[cv2[0], cv2[1], cv2[2], cv2[3]])?;
    let inv_dev = (j1 - j2).norm() / (1.0 + j1.norm());

    Ok(EquivalenceReport {
        tau2,
        max_deviation: max_dev,
        invariant_deviation: inv_dev,
        verified: max_dev < 1e-5 && inv_dev < 1e-6,
        eps,
        eph,
    })
}

impl EllipticRationalParams {
    /// `eph(n_tau(x))` when everything stays finite.
    fn pipe(&self, eph: &Mobius, x: C64) -> Result<Option<C64>> {
        match ell_rat_eval(self, ProjValue::Finite(x))? {
            ProjValue::Finite(y) => Ok(eph.apply(y).finite()),
            ProjValue::Infinity => Ok(eph.apply_proj(ProjValue::Infinity).finite()),
        }
    }

    /// `n_tau(eps(x))` when everything stays finite.
    fn pipe_pre(&self, eps: &Mobius, x: C64) -> Result<Option<C64>> {
        match eps.apply(x) {
            ProjValue::Finite(y) => Ok(ell_rat_eval(self, ProjValue::Finite(y))?.finite()),
            ProjValue::Infinity => Ok(None),
        }
    }
}

/// The Mobius map with `P_{tau2}(z / gamma) = mob(P_{tau1}(z))`, fitted from
/// three generic points of the torus.
fn descended_mobius(tau1: ModularTau, tau2: ModularTau, gamma: C64) -> Result<Mobius> {
    let t1 = tau1.value();
    let samples = [
        C64::new(0.231, 0.0) + t1 * 0.173,
        C64::new(0.411, 0.0) + t1 * 0.329,
        C64::new(0.137, 0.0) + t1 * 0.457,
    ];
    let mut pairs = [(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); 3];
    for (i, &z) in samples.iter().enumerate() {
        let x = match weierstrass_p(z, tau1) {
            ProjValue::Finite(v) => v,
            ProjValue::Infinity => return Err(Error::inconsistent("sample hit a pole")),
        };
        let y = match weierstrass_p(z / gamma, tau2) {
            ProjValue::Finite(v) => v,
            ProjValue::Infinity => return Err(Error::inconsistent("sample hit a pole")),
        };
        pairs[i] = (x, y);
    }
    Mobius::from_three_pairs(pairs)
}

/// `m` samples of the Jordan loop `C_tau = P_tau({Im z = Im tau / 4})`.
pub fn jordan_loop(tau: ModularTau, m: usize) -> Result<Vec<C64>> {
    if m < 8 {
        return Err(Error::domain("jordan_loop needs at least 8 samples"));
    }
    let t = tau.value();
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let z = C64::new(j as f64 / m as f64, 0.0) + t * C64::new(0.25, 0.0);
        match weierstrass_p(z, tau) {
            ProjValue::Finite(v) => out.push(v),
            ProjValue::Infinity => return Err(Error::inconsistent("Jordan loop hit a pole")),
        }
    }
    Ok(out)
}

/// Winding number of a closed sample polygon around `p`.
pub fn winding_number(loop_points: &[C64], p: C64) -> i32 {
    let mut total = 0.0f64;
    for w in 0..loop_points.len() {
        let a = loop_points[w] - p;
        let b = loop_points[(w + 1) % loop_points.len()] - p;
        let cross = a.re * b.im - a.im * b.re;
        let dot = a.re * b.re + a.im * b.im;
        total += cross.atan2(dot);
    }
    (total / core::f64::consts::TAU).round() as i32
}

/// Weierstrass data re-export tailored to this module's callers.
pub fn torsion_images(tau: ModularTau) -> Result<WeierstrassData> {
    weierstrass_data(tau)
}
