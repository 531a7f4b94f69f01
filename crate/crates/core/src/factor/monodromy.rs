//! Numerical monodromy of a finite Blaschke product.
//!
//! The fiber over a base point is continued along one loop per critical
//! value (straight segment toward the value, a circle around it, and back).
//! Continuation is predictor-corrector Newton with adaptive step halving; a
//! step is accepted only when every sheet's Newton run contracts within
//! three iterations and the sheets stay separated. Sheet labels are fixed by
//! sorting the base fiber lexicographically, so results are deterministic.

use super::perm::{is_transitive, Permutation};
use crate::blaschke::FiniteBlaschkeProduct;
use crate::{poly, Error, Result, C64};
use alloc::{format, vec, vec::Vec};
use num_traits::Float;

#[derive(Debug, Clone, Copy)]
pub struct MonodromyOptions {
    /// Loop radius as a fraction of the minimal pairwise critical-value
    /// distance.
    pub loop_radius_factor: f64,
    /// Endpoint matching / fiber collision radius.
    pub cluster_tol: f64,
    /// Maximum number of step halvings before reporting failure.
    pub max_halvings: u32,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        MonodromyOptions {
            loop_radius_factor: 0.25,
            cluster_tol: 1e-6,
            max_halvings: 26,
        }
    }
}

/// Base point, ordered critical values and one fiber permutation per loop.
#[derive(Debug, Clone)]
pub struct MonodromyRep {
    pub base_point: C64,
    pub critical_values: Vec<C64>,
    pub loops: Vec<Permutation>,
    pub degree: usize,
}

impl MonodromyRep {
    pub fn is_transitive(&self) -> bool {
        is_transitive(&self.loops)
    }

    /// Product of the loop permutations in listed order (angular order
    /// around the base point), i.e. the boundary monodromy for a petal
    /// system.
    pub fn ordered_product(&self) -> Permutation {
        let mut acc = Permutation::identity(self.degree);
        for p in &self.loops {
            acc = p.compose(&acc);
        }
        acc
    }

    /// Riemann-Hurwitz bookkeeping on the disk: the cycle deficiencies of
    /// the loops must sum to degree - 1.
    pub fn total_cycle_deficiency(&self) -> usize {
        self.loops
            .iter()
            .map(|p| self.degree - p.cycles().len())
            .sum()
    }
}

/// Monodromy representation of `f` (degree >= 2).
pub fn numerical_monodromy(
    f: &FiniteBlaschkeProduct,
    opts: &MonodromyOptions,
) -> Result<MonodromyRep> {
    let n = f.degree();
    if n < 2 {
        return Err(Error::domain("monodromy needs degree >= 2"));
    }
    let cd = f.critical_data()?;
    let mut values = cd.critical_values.clone();

    let mut radius = base_radius(&values, opts.loop_radius_factor);
    for _shrink in 0..3 {
        match try_run(f, &mut values, radius, opts) {
            Ok(rep) => return Ok(rep),
            Err(Error::Nonconvergence(_)) | Err(Error::Inconsistent(_)) => {
                radius *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
    try_run(f, &mut values, radius, opts)
}

fn base_radius(values: &[C64], factor: f64) -> f64 {
    let mut dmin = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            dmin = dmin.min((values[i] - values[j]).norm());
        }
    }
    let vmax = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    // keep loops inside the disk when there is a single critical value
    let room = (1.0 - vmax).max(0.05);
    if dmin.is_finite() {
        factor * dmin.min(room * 2.0)
    } else {
        factor * room * 2.0
    }
}

fn try_run(
    f: &FiniteBlaschkeProduct,
    values: &mut Vec<C64>,
    radius: f64,
    opts: &MonodromyOptions,
) -> Result<MonodromyRep> {
    let n = f.degree();
    let base = pick_base_point(values, radius).ok_or_else(|| {
        Error::nonconvergence(format!(
            "no admissible base point for radius {radius:.3e} (critical values {values:?})"
        ))
    })?;

    // order loops by angle around the base point so the ordered product is
    // the boundary monodromy
    values.sort_by(|a, b| {
        let ta = (a - base).arg();
        let tb = (b - base).arg();
        ta.partial_cmp(&tb).unwrap_or(core::cmp::Ordering::Equal)
    });

    // base fiber, labeled lexicographically
    let mut fiber = fiber_over(f, base)?;
    fiber.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    check_separation(&fiber, opts.cluster_tol)?;

    let mut loops = Vec::with_capacity(values.len());
    for &v in values.iter() {
        let perm = continue_loop(f, base, v, radius, &fiber, opts)?;
        loops.push(perm);
    }
    Ok(MonodromyRep {
        base_point: base,
        critical_values: values.clone(),
        loops,
        degree: n,
    })
}

fn pick_base_point(values: &[C64], radius: f64) -> Option<C64> {
    let centroid = if values.is_empty() {
        C64::new(0.0, 0.0)
    } else {
        values.iter().sum::<C64>() / values.len() as f64
    };
    let spread = values
        .iter()
        .map(|v| (v - centroid).norm())
        .fold(0.0, f64::max)
        .max(4.0 * radius);
    // golden-angle candidates on rings around the cloud
    for ring in 1..=4 {
        let r = spread * (0.6 + 0.45 * ring as f64);
        for j in 0..16 {
            let theta = 2.399963229728653 * (j as f64 + 0.5) + 0.21 * ring as f64;
            let q = centroid + C64::from_polar(r, theta);
            if q.norm() >= 0.995 {
                continue;
            }
            if admissible_base(q, values, radius) {
                return Some(q);
            }
        }
    }
    None
}

fn admissible_base(q: C64, values: &[C64], radius: f64) -> bool {
    for (i, &v) in values.iter().enumerate() {
        if (q - v).norm() < 2.5 * radius {
            return false;
        }
        // the segment q -> v must keep clear of every other critical value
        for (j, &w) in values.iter().enumerate() {
            if i == j {
                continue;
            }
            if segment_distance(q, v, w) < 1.6 * radius {
                return false;
            }
        }
    }
    true
}

fn segment_distance(a: C64, b: C64, p: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn fiber_over(f: &FiniteBlaschkeProduct, w: C64) -> Result<Vec<C64>> {
    let num = f.numerator();
    let den = f.denominator();
    let shifted = poly::sub(&num, &den.iter().map(|c| c * w).collect::<Vec<_>>());
    let mut roots = poly::roots(&shifted)?;
    if roots.len() != f.degree() {
        return Err(Error::inconsistent(format!(
            "fiber over {w} has {} points, expected {}",
            roots.len(),
            f.degree()
        )));
    }
    for z in roots.iter_mut() {
        newton_refine(f, z, w, 3);
    }
    Ok(roots)
}

fn newton_refine(f: &FiniteBlaschkeProduct, z: &mut C64, w: C64, iters: usize) -> bool {
    for _ in 0..iters {
        let resid = f.eval(*z) - w;
        if resid.norm() < 1e-13 * (1.0 + w.norm()) {
            return true;
        }
        let dv = f.eval_derivative(*z);
        if dv.norm() < 1e-300 {
            return false;
        }
        let step = resid / dv;
        if step.norm() > 0.5 {
            return false;
        }
        *z -= step;
    }
    (f.eval(*z) - w).norm() < 1e-11 * (1.0 + w.norm())
}

fn check_separation(fiber: &[C64], tol: f64) -> Result<()> {
    for i in 0..fiber.len() {
        for j in (i + 1)..fiber.len() {
            if (fiber[i] - fiber[j]).norm() < tol {
                return Err(Error::nonconvergence(format!(
                    "fiber collision: sheets {i} and {j} within {tol:.1e}"
                )));
            }
        }
    }
    Ok(())
}

/// Path for one loop: segment to the circle entry, full circle, segment back.
fn loop_point(base: C64, v: C64, radius: f64, s: f64) -> C64 {
    let dir = (base - v) / (base - v).norm();
    let entry = v + dir * radius;
    if s < 0.25 {
        let t = s / 0.25;
        base + (entry - base) * t
    } else if s < 0.75 {
        let t = (s - 0.25) / 0.5;
        let theta0 = dir.arg();
        v + C64::from_polar(radius, theta0 + core::f64::consts::TAU * t)
    } else {
        let t = (s - 0.75) / 0.25;
        entry + (base - entry) * t
    }
}

fn continue_loop(
    f: &FiniteBlaschkeProduct,
    base: C64,
    v: C64,
    radius: f64,
    base_fiber: &[C64],
    opts: &MonodromyOptions,
) -> Result<Permutation> {
    let n = base_fiber.len();
    let mut sheets = base_fiber.to_vec();
    let mut s = 0.0f64;
    let mut ds = 1.0 / 96.0;
    let min_ds = (1.0 / 96.0) / 2f64.powi(opts.max_halvings as i32);
    let mut halvings_left = opts.max_halvings;

    while s < 1.0 {
        let ds_eff = ds.min(1.0 - s);
        let target = loop_point(base, v, radius, s + ds_eff);
        let prev = loop_point(base, v, radius, s);
        let dw = target - prev;
        let mut trial = sheets.clone();
        let mut ok = true;
        for z in trial.iter_mut() {
            // predictor along dz = dw / f'(z)
            let dv = f.eval_derivative(*z);
            if dv.norm() > 1e-12 {
                *z += dw / dv;
            }
            if !newton_refine(f, z, target, 3) {
                ok = false;
                break;
            }
        }
        if ok {
            // sheets must stay separated to keep labels meaningful
            'sep: for i in 0..n {
                for j in (i + 1)..n {
                    if (trial[i] - trial[j]).norm() < 4.0 * opts.cluster_tol {
                        ok = false;
                        break 'sep;
                    }
                }
            }
        }
        if ok {
            sheets = trial;
            s += ds_eff;
            ds = (ds * 1.4).min(1.0 / 48.0);
        } else {
            if ds <= min_ds || halvings_left == 0 {
                return Err(Error::nonconvergence(format!(
                    "continuation around {v} stalled at s = {s:.4} (step {ds:.2e})"
                )));
            }
            ds *= 0.5;
            halvings_left -= 1;
        }
    }

    // read the permutation by endpoint matching
    let mut images = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for (i, z) in sheets.iter().enumerate() {
        let mut best = (f64::INFINITY, usize::MAX);
        for (j, b) in base_fiber.iter().enumerate() {
            let d = (z - b).norm();
            if d < best.0 {
                best = (d, j);
            }
        }
        if best.0 > opts.cluster_tol.max(1e-7 * 10.0) {
            return Err(Error::inconsistent(format!(
                "loop endpoint {z} matched no fiber point (distance {:.2e})",
                best.0
            )));
        }
        if taken[best.1] {
            return Err(Error::inconsistent("two sheets matched the same endpoint"));
        }
        taken[best.1] = true;
        images[i] = best.1;
    }
    Permutation::new(images)
}
