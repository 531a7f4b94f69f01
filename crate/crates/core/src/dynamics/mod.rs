//! Exact-arithmetic orbits over Q(i), naive and canonical heights, orbit
//! intersection and the degree-growth experiment.
//!
//! Orbits include the starting point (iterate zero). Everything here is
//! decided by exact rational arithmetic; floating point appears only in the
//! logarithmic heights derived from exact norms.

mod gaussian;

pub use gaussian::{ln_big, GaussianInt, GaussianRational};

use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::{format, vec, vec::Vec};
#[allow(unused_imports)]
use num_traits::Float; // float methods in no_std builds

/// Default cap on the bit size of orbit entries.
pub const DEFAULT_BIT_CAP: u64 = 1 << 20;

/// A point of P^1(Q(i)).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjPoint {
    Finite(GaussianRational),
    Infinity,
}

impl ProjPoint {
    pub fn finite(x: GaussianRational) -> Self {
        ProjPoint::Finite(x)
    }

    pub fn bits(&self) -> u64 {
        match self {
            ProjPoint::Finite(x) => x.bits(),
            ProjPoint::Infinity => 1,
        }
    }
}

impl core::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{x}"),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// An exact finite Blaschke product over Q(i): `|rho|^2 = 1` and
/// `|a_i|^2 < 1` hold exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactBlaschke {
    rho: GaussianRational,
    zeros: Vec<GaussianRational>,
}

impl ExactBlaschke {
    pub fn new(rho: GaussianRational, zeros: Vec<GaussianRational>) -> Result<Self> {
        if rho.abs_sqr_cmp_one() != core::cmp::Ordering::Equal {
            return Err(Error::domain("|rho| must equal 1 exactly"));
        }
        if zeros.is_empty() {
            return Err(Error::domain("an exact Blaschke product has degree >= 1"));
        }
        for a in &zeros {
            if a.abs_sqr_cmp_one() != core::cmp::Ordering::Less {
                return Err(Error::domain(format!("zero {a} not inside the unit disk")));
            }
        }
        Ok(ExactBlaschke { rho, zeros })
    }

    /// `z^d`.
    pub fn power(d: usize) -> Result<Self> {
        ExactBlaschke::new(GaussianRational::one(), vec![GaussianRational::zero(); d])
    }

    /// `mu z^d` with `|mu| = 1`.
    pub fn rotated_power(mu: GaussianRational, d: usize) -> Result<Self> {
        ExactBlaschke::new(mu, vec![GaussianRational::zero(); d])
    }

    /// The automorphism `iota_a(z) = (z + a)/(1 + conj(a) z)` as a degree-1
    /// product.
    pub fn iota(a: &GaussianRational) -> Result<Self> {
        ExactBlaschke::new(GaussianRational::one(), vec![-a])
    }

    pub fn rho(&self) -> &GaussianRational {
        &self.rho
    }

    pub fn zeros(&self) -> &[GaussianRational] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Exact evaluation on P^1.
    pub fn eval(&self, x: &ProjPoint) -> ProjPoint {
        match x {
            ProjPoint::Infinity => {
                // each factor sends infinity to -1/conj(a); a zero at the
                // origin keeps infinity fixed
                let mut acc = self.rho.clone();
                for a in &self.zeros {
                    if a.is_zero() {
                        return ProjPoint::Infinity;
                    }
                    let c = a.conj();
                    acc = &acc * &(-&c.inv().expect("nonzero"));
                }
                ProjPoint::Finite(acc)
            }
            ProjPoint::Finite(z) => {
                let one = GaussianRational::one();
                let mut num = self.rho.clone();
                let mut den = one.clone();
                for a in &self.zeros {
                    num = &num * &(z - a);
                    den = &den * &(&one - &(&a.conj() * z));
                }
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(&num / &den)
                }
            }
        }
    }
}

/// A finite composition of exact Blaschke products, outermost first. Lets
/// conjugated maps like `iota_a . z^d . iota_{-a}` stay exact even though
/// their zero form leaves Q(i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactEndo {
    factors: Vec<ExactBlaschke>,
}

impl ExactEndo {
    pub fn new(factors: Vec<ExactBlaschke>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::domain("an endomorphism needs at least one factor"));
        }
        Ok(ExactEndo { factors })
    }

    pub fn from_product(f: ExactBlaschke) -> Self {
        ExactEndo { factors: vec![f] }
    }

    /// `z^d` as a chain of one factor.
    pub fn power_map(d: usize) -> Result<Self> {
        Ok(ExactEndo::from_product(ExactBlaschke::power(d)?))
    }

    pub fn factors(&self) -> &[ExactBlaschke] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.degree()).product()
    }

    pub fn eval(&self, x: &ProjPoint) -> ProjPoint {
        let mut cur = x.clone();
        for f in self.factors.iter().rev() {
            cur = f.eval(&cur);
        }
        cur
    }
}

/// Naive logarithmic height on P^1(Q(i)): `h(x) = 1/2 log max(N(num), N(den))`,
/// `h(infinity) = 0`.
pub fn naive_height(x: &ProjPoint) -> f64 {
    match x {
        ProjPoint::Finite(v) => v.naive_height(),
        ProjPoint::Infinity => 0.0,
    }
}

/// Detected exact cycle: the orbit enters a cycle of length `period` at
/// index `enter`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleInfo {
    pub enter: usize,
    pub period: usize,
}

/// `[x, f(x), ..., f^N(x)]` with exact cycle detection.
#[derive(Debug, Clone)]
pub struct OrbitReport {
    pub points: Vec<ProjPoint>,
    pub cycle: Option<CycleInfo>,
    /// Index at which the growth cap stopped the computation, if it did.
    pub truncated_at: Option<usize>,
}

/// The orbit through `steps` iterates (so `steps + 1` points including the
/// start). Exceeding `bit_cap` is an error carrying the index reached; use
/// [`orbit_capped`] for the tolerant variant.
pub fn orbit(f: &ExactEndo, x: &ProjPoint, steps: usize, bit_cap: u64) -> Result<OrbitReport> {
    let report = orbit_capped(f, x, steps, bit_cap)?;
    if let Some(idx) = report.truncated_at {
        let bits = report.points.last().map(|p| p.bits()).unwrap_or(0);
        return Err(Error::GrowthCap { index: idx, bits });
    }
    Ok(report)
}

/// Like [`orbit`] but reporting cap truncation in-band.
pub fn orbit_capped(
    f: &ExactEndo,
    x: &ProjPoint,
    steps: usize,
    bit_cap: u64,
) -> Result<OrbitReport> {
    if f.degree() < 1 {
        return Err(Error::domain("orbit needs a nonconstant map"));
    }
    let mut points = Vec::with_capacity(steps + 1);
    let mut seen: BTreeMap<ProjPoint, usize> = BTreeMap::new();
    let mut cycle = None;
    points.push(x.clone());
    seen.insert(x.clone(), 0);
    let mut cur = x.clone();
    for idx in 1..=steps {
        cur = f.eval(&cur);
        if cur.bits() > bit_cap {
            return Ok(OrbitReport {
                points,
                cycle,
                truncated_at: Some(idx),
            });
        }
        if cycle.is_none() {
            if let Some(&first) = seen.get(&cur) {
                cycle = Some(CycleInfo {
                    enter: first,
                    period: idx - first,
                });
            } else {
                seen.insert(cur.clone(), idx);
            }
        }
        points.push(cur.clone());
        if let Some(info) = cycle {
            // the tail is periodic; fill the remaining entries exactly
            if points.len() <= steps {
                let mut j = points.len();
                while j <= steps {
                    let src = info.enter + (j - info.enter) % info.period;
                    points.push(points[src].clone());
                    j += 1;
                }
            }
            break;
        }
    }
    Ok(OrbitReport {
        points,
        cycle,
        truncated_at: None,
    })
}

/// Naive height, canonical-height estimate and its stabilization trace.
#[derive(Debug, Clone)]
pub struct HeightEstimate {
    pub naive: f64,
    pub canonical_estimate: f64,
    pub iterations_used: usize,
    /// `h(f^m(x)) / (deg f)^m` for m = 0..iterations_used.
    pub trace: Vec<f64>,
}

/// `h(f^N(x)) / (deg f)^N`, with the per-step trace showing monotone
/// stabilization.
pub fn canonical_height_estimate(
    f: &ExactEndo,
    x: &ProjPoint,
    steps: usize,
    bit_cap: u64,
) -> Result<HeightEstimate> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::domain("canonical height needs degree >= 2"));
    }
    let report = orbit(f, x, steps, bit_cap)?;
    let mut trace = Vec::with_capacity(report.points.len());
    let mut scale = 1.0f64;
    for (m, p) in report.points.iter().enumerate() {
        if m > 0 {
            scale *= d as f64;
        }
        trace.push(naive_height(p) / scale);
    }
    Ok(HeightEstimate {
        naive: naive_height(x),
        canonical_estimate: *trace.last().expect("nonempty orbit"),
        iterations_used: report.points.len() - 1,
        trace,
    })
}

/// Exact orbit-intersection report. `hits` lists all `(i, j)` with
/// `f^i(x) = g^j(y)` inside the searched rectangle; truncation flags record
/// where the growth cap cut either orbit short (points beyond the cap
/// cannot collide with stored ones, so `hits` is complete for the searched
/// rectangle).
#[derive(Debug, Clone)]
pub struct IntersectionReport {
    pub hits: Vec<(usize, usize, ProjPoint)>,
    pub steps_f: usize,
    pub steps_g: usize,
    pub truncated_f: bool,
    pub truncated_g: bool,
}

/// All exact coincidences `f^i(x) = g^j(y)` with `i, j <= steps`, by a
/// hash-join on canonical lowest-terms forms.
pub fn orbit_intersection(
    f: &ExactEndo,
    x: &ProjPoint,
    g: &ExactEndo,
    y: &ProjPoint,
    steps: usize,
    bit_cap: u64,
) -> Result<IntersectionReport> {
    let of = orbit_capped(f, x, steps, bit_cap)?;
    let og = orbit_capped(g, y, steps, bit_cap)?;
    let mut index: BTreeMap<&ProjPoint, Vec<usize>> = BTreeMap::new();
    for (i, p) in of.points.iter().enumerate() {
        index.entry(p).or_default().push(i);
    }
    let mut hits = Vec::new();
    for (j, q) in og.points.iter().enumerate() {
        if let Some(is) = index.get(q) {
            for &i in is {
                hits.push((i, j, q.clone()));
            }
        }
    }
    hits.sort_by_key(|&(i, j, _)| (i, j));
    Ok(IntersectionReport {
        hits,
        steps_f: of.points.len() - 1,
        steps_g: og.points.len() - 1,
        truncated_f: of.truncated_at.is_some(),
        truncated_g: og.truncated_at.is_some(),
    })
}

/// Height rows and fitted growth rates for two maps of different degree.
#[derive(Debug, Clone)]
pub struct DegreeGrowthReport {
    /// `(m, h(f^m x), h(g^m x))`.
    pub rows: Vec<(usize, f64, f64)>,
    /// Least-squares slope of `ln h` against `m` (approximates `ln deg`).
    pub rate_f: f64,
    pub rate_g: f64,
    /// Final-step height ratio `h_large / h_small`.
    pub separation: f64,
    /// The required separation `(deg_large / deg_small)^{N/2}`.
    pub separation_required: f64,
    pub separated: bool,
}

/// Track `h(f^m(x))` against `h(g^m(x))` and check that the larger-degree
/// map's heights run away at the expected exponential rate.
pub fn degree_growth_experiment(
    f: &ExactEndo,
    g: &ExactEndo,
    x: &ProjPoint,
    steps: usize,
    bit_cap: u64,
) -> Result<DegreeGrowthReport> {
    let df = f.degree();
    let dg = g.degree();
    if df == dg {
        return Err(Error::domain("degree growth needs deg f != deg g"));
    }
    if df < 2 || dg < 2 {
        return Err(Error::domain("degree growth needs degrees >= 2"));
    }
    let larger = if df > dg { f } else { g };
    // preperiodicity gate for the larger map: exact cycle detection first,
    // the canonical estimate as corroboration
    let probe = orbit(larger, x, steps.min(24), bit_cap)?;
    if probe.cycle.is_some() {
        return Err(Error::domain("x is preperiodic for the larger-degree map"));
    }
    let est = canonical_height_estimate(larger, x, steps.min(12), bit_cap)?;
    if est.canonical_estimate <= 1e-6 {
        return Err(Error::domain(
            "canonical height estimate vanishes: x is (numerically) preperiodic",
        ));
    }

    let of = orbit(f, x, steps, bit_cap)?;
    let og = orbit(g, x, steps, bit_cap)?;
    let mut rows = Vec::with_capacity(steps + 1);
    for m in 0..=steps {
        rows.push((m, naive_height(&of.points[m]), naive_height(&og.points[m])));
    }
    let rate = |sel: fn(&(usize, f64, f64)) -> f64, rows: &[(usize, f64, f64)]| -> f64 {
        // slope of ln h vs m over the tail where h > 0
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| sel(r) > 0.0)
            .map(|r| (r.0 as f64, sel(r).ln()))
            .collect();
        if pts.len() < 2 {
            return 0.0;
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    };
    let rate_f = rate(|r| r.1, &rows);
    let rate_g = rate(|r| r.2, &rows);

    let (h_small, h_large, d_small, d_large) = if df < dg {
        (rows[steps].1, rows[steps].2, df, dg)
    } else {
        (rows[steps].2, rows[steps].1, dg, df)
    };
    let separation = if h_small > 0.0 {
        h_large / h_small
    } else {
        f64::INFINITY
    };
    let separation_required = (d_large as f64 / d_small as f64).powf(steps as f64 / 2.0);
    Ok(DegreeGrowthReport {
        rows,
        rate_f,
        rate_g,
        separation,
        separation_required,
        separated: separation >= separation_required,
    })
}
