//! Finite Blaschke products and their algebra.
//!
//! The canonical representation is the zero form `(rho, {a_i})`: a
//! unimodular leading constant together with the multiset of zeros inside
//! the open unit disk. Numerator/denominator polynomials are derived on
//! demand and never stored, so boundary modulus and the reflection identity
//! are structural.

use crate::mobius::Mobius;
use crate::{poly, Error, ProjValue, Result, C64};
use alloc::{format, vec, vec::Vec};
#[allow(unused_imports)]
use num_traits::Float; // float methods in no_std builds

/// Constructor tolerance for |rho| = 1.
pub const RHO_TOL: f64 = 1e-12;
/// Clustering radius for multiplicity detection in critical data.
pub const CLUSTER_RADIUS: f64 = 1e-7;
/// Default cap on degrees produced by composition and iteration.
pub const DEGREE_CAP: usize = 4096;
/// Identity-check tolerance at moderate degree.
pub const IDENTITY_TOL: f64 = 1e-8;

/// `f(z) = rho prod (z - a_i)/(1 - conj(a_i) z)` with `|rho| = 1`, `|a_i| < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteBlaschkeProduct {
    rho: C64,
    zeros: Vec<C64>,
}

impl FiniteBlaschkeProduct {
    /// Validates `|rho| = 1` (then renormalizes it exactly) and `|a_i| < 1`.
    pub fn new(rho: C64, zeros: Vec<C64>) -> Result<Self> {
        if (rho.norm() - 1.0).abs() > RHO_TOL {
            return Err(Error::domain(format!(
                "|rho| = {} is not unimodular",
                rho.norm()
            )));
        }
        if zeros.is_empty() {
            return Err(Error::domain("a finite Blaschke product has degree >= 1"));
        }
        for a in &zeros {
            if a.norm() >= 1.0 {
                return Err(Error::domain(format!(
                    "zero {a} lies outside the open unit disk"
                )));
            }
        }
        Ok(FiniteBlaschkeProduct {
            rho: rho / rho.norm(),
            zeros,
        })
    }

    /// The power map `z^n`.
    pub fn power(n: usize) -> Result<Self> {
        FiniteBlaschkeProduct::new(C64::new(1.0, 0.0), vec![C64::new(0.0, 0.0); n])
    }

    /// `mu z^n` with unimodular `mu`.
    pub fn rotated_power(mu: C64, n: usize) -> Result<Self> {
        FiniteBlaschkeProduct::new(mu, vec![C64::new(0.0, 0.0); n])
    }

    pub fn rho(&self) -> C64 {
        self.rho
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// `-f`.
    pub fn negated(&self) -> Self {
        FiniteBlaschkeProduct {
            rho: -self.rho,
            zeros: self.zeros.clone(),
        }
    }

    /// Direct product evaluation. Finite for |z| <= 1; poles live at the
    /// reflected zeros outside the closed disk.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = self.rho;
        for a in &self.zeros {
            acc *= (z - a) / (C64::new(1.0, 0.0) - a.conj() * z);
        }
        acc
    }

    /// Sphere-valued evaluation (pole-aware).
    pub fn eval_proj(&self, z: ProjValue) -> ProjValue {
        match z {
            ProjValue::Infinity => {
                // each factor tends to -1/conj(a); a zero at the origin sends
                // infinity to infinity
                let mut acc = self.rho;
                for a in &self.zeros {
                    if a.norm() < 1e-300 {
                        return ProjValue::Infinity;
                    }
                    acc *= -a.conj().inv();
                }
                ProjValue::Finite(acc)
            }
            ProjValue::Finite(z) => {
                let mut num = self.rho;
                let mut den = C64::new(1.0, 0.0);
                for a in &self.zeros {
                    num *= z - a;
                    den *= C64::new(1.0, 0.0) - a.conj() * z;
                }
                if den.norm() < 1e-300 * (1.0 + num.norm()) {
                    ProjValue::Infinity
                } else {
                    ProjValue::Finite(num / den)
                }
            }
        }
    }

    /// Derivative by logarithmic differentiation of the product, with a
    /// product-rule fallback when `z` sits on a zero.
    pub fn eval_derivative(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        if let Some(hit) = self.zeros.iter().position(|a| (z - a).norm() < 1e-13) {
            // f = (z - a_hit)/(1 - conj(a_hit) z) * rest; at z = a_hit only the
            // term differentiating the vanishing factor survives
            let a = self.zeros[hit];
            let mut rest = self.rho;
            for (i, b) in self.zeros.iter().enumerate() {
                if i != hit {
                    rest *= (z - b) / (one - b.conj() * z);
                }
            }
            let dfac = (one - a.conj() * z + (z - a) * a.conj())
                / ((one - a.conj() * z) * (one - a.conj() * z));
            return rest * dfac;
        }
        let mut logd = C64::new(0.0, 0.0);
        for a in &self.zeros {
            logd += (z - a).inv() + a.conj() / (one - a.conj() * z);
        }
        self.eval(z) * logd
    }

    /// Numerator polynomial `rho prod (z - a_i)` (ascending coefficients).
    pub fn numerator(&self) -> Vec<C64> {
        let mut p = vec![self.rho];
        for a in &self.zeros {
            p = poly::mul(&p, &[-a, C64::new(1.0, 0.0)]);
        }
        p
    }

    /// Denominator polynomial `prod (1 - conj(a_i) z)`.
    pub fn denominator(&self) -> Vec<C64> {
        let mut p = vec![C64::new(1.0, 0.0)];
        for a in &self.zeros {
            p = poly::mul(&p, &[C64::new(1.0, 0.0), -a.conj()]);
        }
        p
    }

    /// `self` after `inner`: zeros are the disk solutions of
    /// `inner(z) = a` over the zeros `a` of `self`; rho is fixed by matching
    /// values at one interior test point.
    pub fn compose(&self, inner: &FiniteBlaschkeProduct) -> Result<FiniteBlaschkeProduct> {
        self.compose_capped(inner, DEGREE_CAP)
    }

    pub fn compose_capped(
        &self,
        inner: &FiniteBlaschkeProduct,
        cap: usize,
    ) -> Result<FiniteBlaschkeProduct> {
        let deg = self.degree() * inner.degree();
        if deg > cap {
            return Err(Error::DegreeCap {
                cap,
                requested: deg,
            });
        }
        let num_g = inner.numerator();
        let den_g = inner.denominator();
        let mut zeros = Vec::with_capacity(deg);
        for a in &self.zeros {
            // numerator of inner - a
            let shifted = poly::sub(&num_g, &den_g.iter().map(|c| c * a).collect::<Vec<_>>());
            let mut roots = poly::roots(&shifted)?;
            if roots.len() != inner.degree() {
                return Err(Error::inconsistent(format!(
                    "expected {} preimages of {a}, found {}",
                    inner.degree(),
                    roots.len()
                )));
            }
            // Newton refinement on the rational equation inner(z) = a
            for z in roots.iter_mut() {
                for _ in 0..3 {
                    let resid = inner.eval(*z) - a;
                    let dv = inner.eval_derivative(*z);
                    if dv.norm() > 1e-300 {
                        let step = resid / dv;
                        if step.norm() < 0.5 {
                            *z -= step;
                        }
                    }
                }
                if z.norm() >= 1.0 - 1e-12 {
                    return Err(Error::inconsistent(format!(
                        "composition zero {z} escaped the disk (root-finder trouble)"
                    )));
                }
            }
            zeros.extend(roots);
        }
        // fix rho at an interior point away from the computed zeros
        let candidates = [
            C64::new(0.987, 0.0),
            C64::new(0.0, 0.987),
            C64::new(-0.987, 0.0),
            C64::new(0.31, 0.67),
            C64::new(-0.53, -0.41),
        ];
        let z0 = candidates
            .iter()
            .copied()
            .find(|z0| zeros.iter().all(|a| (z0 - a).norm() > 0.05))
            .unwrap_or(candidates[0]);
        let lhs = self.eval(inner.eval(z0));
        let mut blaschke_part = C64::new(1.0, 0.0);
        for a in &zeros {
            blaschke_part *= (z0 - a) / (C64::new(1.0, 0.0) - a.conj() * z0);
        }
        let rho = lhs / blaschke_part;
        if (rho.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::inconsistent(format!(
                "composition leading constant |rho| = {} far from 1",
                rho.norm()
            )));
        }
        FiniteBlaschkeProduct::new(rho / rho.norm(), zeros)
    }

    /// `f^k` by repeated composition.
    pub fn iterate(&self, k: usize) -> Result<FiniteBlaschkeProduct> {
        self.iterate_capped(k, DEGREE_CAP)
    }

    pub fn iterate_capped(&self, k: usize, cap: usize) -> Result<FiniteBlaschkeProduct> {
        if k == 0 {
            return Err(Error::domain("iterate needs k >= 1"));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = self.compose_capped(&acc, cap)?;
        }
        Ok(acc)
    }

    /// Interior critical points (with multiplicity) and critical values.
    pub fn critical_data(&self) -> Result<CriticalData> {
        let n = self.degree();
        if n < 2 {
            return Err(Error::domain("critical data needs degree >= 2"));
        }
        let num = self.numerator();
        let den = self.denominator();
        let w = poly::sub(
            &poly::mul(&poly::derivative(&num), &den),
            &poly::mul(&num, &poly::derivative(&den)),
        );
        let w = poly::trim(&w, 1e-13);
        let roots = poly::roots(&w)?;
        let interior: Vec<C64> = roots.into_iter().filter(|z| z.norm() < 1.0).collect();
        let clustered = refine_critical_clusters(&w, &interior);
        let count: usize = clustered.iter().map(|&(_, m)| m).sum();
        if count != n - 1 {
            return Err(Error::inconsistent(format!(
                "found {count} interior critical points, expected {}",
                n - 1
            )));
        }
        let mut critical_points = clustered;
        critical_points.sort_by(|a, b| {
            (a.0.re, a.0.im)
                .partial_cmp(&(b.0.re, b.0.im))
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        let values: Vec<C64> = critical_points.iter().map(|&(z, _)| self.eval(z)).collect();
        let mut critical_values: Vec<C64> = Vec::new();
        for v in values {
            if critical_values.iter().all(|u| (u - v).norm() > 1e-8) {
                critical_values.push(v);
            }
        }
        Ok(CriticalData {
            critical_points,
            critical_values,
        })
    }

    /// True iff the interior critical divisor is one point of multiplicity
    /// `degree - 1` (the maps associated to `z^n`).
    pub fn is_totally_ramified(&self) -> Result<bool> {
        Ok(self.critical_data()?.critical_points.len() == 1)
    }

    /// Normal form of a totally ramified map: `f = iota_q . rho z^s . iota_{-p}`
    /// where `p` is the critical point and `q = f(p)` the critical value;
    /// `None` when `f` is not totally ramified.
    pub fn totally_ramified_normal_form(&self) -> Result<Option<TotallyRamifiedForm>> {
        let cd = self.critical_data()?;
        if cd.critical_points.len() != 1 {
            return Ok(None);
        }
        let s = self.degree();
        let p = cd.critical_points[0].0;
        let q = self.eval(p);
        // rho from F = iota_{-q} . f . iota_p = rho z^s at one sample point
        let iota_p = DiskAutomorphism::iota(p)?;
        let iota_mq = DiskAutomorphism::iota(-q)?;
        let x0 = C64::new(0.5, 0.31);
        let fval = iota_mq.apply(self.eval(iota_p.apply(x0)));
        let rho = fval / x0.powu(s as u32);
        if (rho.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::inconsistent(format!(
                "normal-form constant |rho| = {} far from 1",
                rho.norm()
            )));
        }
        let form = TotallyRamifiedForm {
            degree: s,
            rho: rho / rho.norm(),
            critical_point: p,
            critical_value: q,
        };
        // round-trip guard
        let rebuilt = form.reconstruct()?;
        if !equals_fbp(self, &rebuilt, IDENTITY_TOL) {
            return Err(Error::inconsistent(
                "totally ramified normal form failed its round-trip",
            ));
        }
        Ok(Some(form))
    }
}

/// Interior critical divisor and critical-value set.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalData {
    /// (point, multiplicity), total multiplicity = degree - 1.
    pub critical_points: Vec<(C64, usize)>,
    /// Deduplicated images of the critical points.
    pub critical_values: Vec<C64>,
}

/// `f = iota_q . rho z^s . iota_{-p}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotallyRamifiedForm {
    pub degree: usize,
    pub rho: C64,
    pub critical_point: C64,
    pub critical_value: C64,
}

impl TotallyRamifiedForm {
    /// Critical point coincides with the critical value (the fixed-point
    /// normal form `iota_p . rho z^s . iota_{-p}` of maps whose iterates stay
    /// totally ramified).
    pub fn self_conjugate(&self) -> bool {
        (self.critical_point - self.critical_value).norm() < 1e-8
    }

    /// The inner conjugator `iota_{-p}`.
    pub fn inner(&self) -> Result<DiskAutomorphism> {
        DiskAutomorphism::iota(-self.critical_point)
    }

    /// The outer conjugator `iota_q . (rho z)`.
    pub fn outer(&self) -> Result<DiskAutomorphism> {
        let rot = DiskAutomorphism::new(self.rho, C64::new(0.0, 0.0))?;
        DiskAutomorphism::iota(self.critical_value).map(|i| i.compose(&rot))
    }

    pub fn reconstruct(&self) -> Result<FiniteBlaschkeProduct> {
        let inner = self.inner()?.to_fbp()?;
        let outer = self.outer()?.to_fbp()?;
        let power = FiniteBlaschkeProduct::power(self.degree)?;
        outer.compose(&power)?.compose(&inner)
    }
}

/// A disk automorphism `z -> rotation (z + center)/(1 + conj(center) z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskAutomorphism {
    rotation: C64,
    center: C64,
}

impl DiskAutomorphism {
    pub fn new(rotation: C64, center: C64) -> Result<Self> {
        if (rotation.norm() - 1.0).abs() > RHO_TOL {
            return Err(Error::domain("automorphism rotation must be unimodular"));
        }
        if center.norm() >= 1.0 {
            return Err(Error::domain("automorphism center must lie in the disk"));
        }
        Ok(DiskAutomorphism {
            rotation: rotation / rotation.norm(),
            center,
        })
    }

    /// `iota_a(z) = (z + a)/(1 + conj(a) z)`.
    pub fn iota(a: C64) -> Result<Self> {
        DiskAutomorphism::new(C64::new(1.0, 0.0), a)
    }

    pub fn identity() -> Self {
        DiskAutomorphism {
            rotation: C64::new(1.0, 0.0),
            center: C64::new(0.0, 0.0),
        }
    }

    pub fn rotation(&self) -> C64 {
        self.rotation
    }

    pub fn center(&self) -> C64 {
        self.center
    }

    pub fn apply(&self, z: C64) -> C64 {
        self.rotation * (z + self.center) / (C64::new(1.0, 0.0) + self.center.conj() * z)
    }

    pub fn inverse(&self) -> DiskAutomorphism {
        DiskAutomorphism {
            rotation: self.rotation.conj(),
            center: -self.rotation * self.center,
        }
    }

    /// `self` after `rhs`.
    pub fn compose(&self, rhs: &DiskAutomorphism) -> DiskAutomorphism {
        let m = self.as_mobius().compose(&rhs.as_mobius());
        DiskAutomorphism::from_mobius(&m)
            .expect("composition of disk automorphisms is a disk automorphism")
    }

    pub fn as_mobius(&self) -> Mobius {
        Mobius::new(
            self.rotation,
            self.rotation * self.center,
            self.center.conj(),
            C64::new(1.0, 0.0),
        )
    }

    /// Recognize a Mobius matrix as a disk automorphism, within tolerance.
    pub fn from_mobius(m: &Mobius) -> Result<Self> {
        if m.d.norm() < 1e-14 {
            return Err(Error::domain("not a disk automorphism (d = 0)"));
        }
        let a = m.a / m.d;
        let b = m.b / m.d;
        let c = m.c / m.d;
        let center = c.conj();
        let rotation = a;
        if (rotation.norm() - 1.0).abs() > 1e-6 || center.norm() >= 1.0 {
            return Err(Error::domain("matrix does not preserve the unit disk"));
        }
        if (b - rotation * center).norm() > 1e-6 * (1.0 + b.norm()) {
            return Err(Error::domain("matrix does not preserve the unit disk"));
        }
        DiskAutomorphism::new(rotation / rotation.norm(), center)
    }

    /// As a degree-1 Blaschke product (zero at `-center`).
    pub fn to_fbp(&self) -> Result<FiniteBlaschkeProduct> {
        FiniteBlaschkeProduct::new(self.rotation, vec![-self.center])
    }
}

/// Equality of Blaschke products: equal degrees, rho within `tol`, and zero
/// multisets matching under a globally-closest assignment within `tol`.
pub fn equals_fbp(f: &FiniteBlaschkeProduct, g: &FiniteBlaschkeProduct, tol: f64) -> bool {
    if f.degree() != g.degree() {
        return false;
    }
    if (f.rho() - g.rho()).norm() > tol {
        return false;
    }
    let n = f.degree();
    let mut used_f = vec![false; n];
    let mut used_g = vec![false; n];
    for _ in 0..n {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            if used_f[i] {
                continue;
            }
            for j in 0..n {
                if used_g[j] {
                    continue;
                }
                let d = (f.zeros[i] - g.zeros[j]).norm();
                if best.map_or(true, |(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                }
            }
        }
        match best {
            Some((d, i, j)) if d <= tol => {
                used_f[i] = true;
                used_g[j] = true;
            }
            _ => return false,
        }
    }
    true
}

/// Association test: a witness pair `(eps, eph)` with `f = eph . g . eps`,
/// or `None`. See [`associated_witnesses`] for the multi-witness variant.
pub fn associated(
    f: &FiniteBlaschkeProduct,
    g: &FiniteBlaschkeProduct,
) -> Result<Option<(DiskAutomorphism, DiskAutomorphism)>> {
    Ok(associated_witnesses(f, g)?.into_iter().next())
}

/// All witnesses found for `f = eph . g . eps` (ambiguous matches within
/// tolerance are all reported; the caller picks).
pub fn associated_witnesses(
    f: &FiniteBlaschkeProduct,
    g: &FiniteBlaschkeProduct,
) -> Result<Vec<(DiskAutomorphism, DiskAutomorphism)>> {
    if f.degree() != g.degree() || f.degree() < 2 {
        return Err(Error::domain(
            "association is tested between maps of equal degree >= 2",
        ));
    }
    let tr_f = f.is_totally_ramified()?;
    let tr_g = g.is_totally_ramified()?;
    if tr_f != tr_g {
        return Ok(Vec::new());
    }
    let mut witnesses = Vec::new();
    if tr_f {
        // compare through normal forms; one witness suffices
        let nf = f.totally_ramified_normal_form()?.expect("totally ramified");
        let ng = g.totally_ramified_normal_form()?.expect("totally ramified");
        // f = Of . z^s . If^{-1}-style:  f = outer_f . z^s . inner_f
        // so f = (outer_f . outer_g^{-1}) . g . (inner_g^{-1} . inner_f)
        let eps = ng.inner()?.inverse().compose(&nf.inner()?);
        let eph = nf.outer()?.compose(&ng.outer()?.inverse());
        if verify_association(f, g, &eps, &eph) {
            witnesses.push((eps, eph));
        }
        return Ok(witnesses);
    }
    let cf = f.critical_data()?;
    let cg = g.critical_data()?;
    if cf.critical_points.len() != cg.critical_points.len() {
        return Ok(Vec::new());
    }
    let pf: Vec<C64> = cf.critical_points.iter().map(|&(z, _)| z).collect();
    let pg: Vec<C64> = cg.critical_points.iter().map(|&(z, _)| z).collect();
    // eps maps critical points of f onto critical points of g, and an
    // automorphism is pinned by an ordered pair of distinct points with equal
    // pseudo-hyperbolic separation
    for i1 in 0..pf.len() {
        for i2 in 0..pf.len() {
            if i1 == i2 {
                continue;
            }
            let m_f = pseudo_translate(pf[i1], pf[i2]);
            for j1 in 0..pg.len() {
                for j2 in 0..pg.len() {
                    if j1 == j2 {
                        continue;
                    }
                    let m_g = pseudo_translate(pg[j1], pg[j2]);
                    if (m_f.norm() - m_g.norm()).abs() > 1e-5 {
                        continue;
                    }
                    if m_f.norm() < 1e-9 {
                        continue;
                    }
                    let rot = m_g / m_f;
                    let rot = rot / rot.norm();
                    // eps = iota_{q1} . (rot z) . iota_{-p1}
                    let eps = match (
                        DiskAutomorphism::iota(pg[j1]),
                        DiskAutomorphism::iota(-pf[i1]),
                    ) {
                        (Ok(oq), Ok(op)) => {
                            let rotm = DiskAutomorphism::new(rot, C64::new(0.0, 0.0))?;
                            oq.compose(&rotm).compose(&op)
                        }
                        _ => continue,
                    };
                    if let Some(eph) = fit_outer(f, g, &eps)? {
                        if verify_association(f, g, &eps, &eph)
                            && !witnesses.iter().any(
                                |(e, h): &(DiskAutomorphism, DiskAutomorphism)| {
                                    (e.rotation - eps.rotation).norm() < 1e-6
                                        && (e.center - eps.center).norm() < 1e-6
                                        && (h.rotation - eph.rotation).norm() < 1e-6
                                        && (h.center - eph.center).norm() < 1e-6
                                },
                            )
                        {
                            witnesses.push((eps, eph));
                        }
                    }
                }
            }
        }
    }
    Ok(witnesses)
}

/// `iota_{-p}(q)`: the image of `q` after translating `p` to the origin.
fn pseudo_translate(p: C64, q: C64) -> C64 {
    (q - p) / (C64::new(1.0, 0.0) - p.conj() * q)
}

/// Cluster the interior roots of the derivative numerator `w` into critical
/// points with multiplicities.
///
/// An m-fold root of `w` scatters like eps^{1/m} under any simultaneous
/// solver, far wider than [`CLUSTER_RADIUS`]. Clusters are therefore formed
/// coarse-to-fine, and each multiplicity-m hypothesis is verified by
/// polishing on the (m-1)-th derivative (where the root is simple) and
/// checking that all lower derivatives vanish there. Verified centers are
/// accurate to working precision.
fn refine_critical_clusters(w: &[C64], interior: &[C64]) -> Vec<(C64, usize)> {
    const RADII: [f64; 3] = [8e-3, 1e-4, CLUSTER_RADIUS];
    let max_m = interior.len();
    let mut derivs: Vec<Vec<C64>> = vec![w.to_vec()];
    for _ in 0..max_m {
        derivs.push(poly::derivative(derivs.last().expect("nonempty")));
    }
    let scales: Vec<f64> = derivs
        .iter()
        .map(|p| p.iter().map(|c| c.norm()).sum::<f64>().max(1e-300))
        .collect();
    let mut out = Vec::new();
    recurse_clusters(&derivs, &scales, interior, 0, &RADII, &mut out);
    out
}

fn recurse_clusters(
    derivs: &[Vec<C64>],
    scales: &[f64],
    points: &[C64],
    level: usize,
    radii: &[f64],
    out: &mut Vec<(C64, usize)>,
) {
    for group in poly::cluster_groups(points, radii[level]) {
        let m = group.len();
        let centroid = group.iter().sum::<C64>() / m as f64;
        if m == 1 {
            out.push((newton_on(&derivs[0], &derivs[1], centroid), 1));
            continue;
        }
        // hypothesis: one root of multiplicity m; it is a simple root of
        // the (m-1)-th derivative
        let refined = newton_on(&derivs[m - 1], &derivs[m], centroid);
        let close = (refined - centroid).norm() <= 4.0 * radii[level] + 1e-9;
        let vanishing = (0..m).all(|j| poly::eval(&derivs[j], refined).norm() <= 1e-9 * scales[j]);
        if close && vanishing {
            out.push((refined, m));
        } else if level + 1 < radii.len() {
            recurse_clusters(derivs, scales, &group, level + 1, radii, out);
        } else {
            out.push((centroid, m));
        }
    }
}

fn newton_on(p: &[C64], dp: &[C64], start: C64) -> C64 {
    let mut z = start;
    for _ in 0..40 {
        let pv = poly::eval(p, z);
        let dv = poly::eval(dp, z);
        if dv.norm() < 1e-300 {
            break;
        }
        let step = pv / dv;
        if step.norm() < 1e-16 {
            break;
        }
        if step.norm() > 0.1 {
            break;
        }
        z -= step;
    }
    z
}

fn fit_outer(
    f: &FiniteBlaschkeProduct,
    g: &FiniteBlaschkeProduct,
    eps: &DiskAutomorphism,
) -> Result<Option<DiskAutomorphism>> {
    // sample three interior points, fit the Mobius map h(z) = g(eps z) -> f(z)
    let samples = [
        C64::new(0.3, 0.0),
        C64::new(-0.41, 0.2),
        C64::new(0.1, -0.55),
        C64::new(0.62, 0.33),
        C64::new(-0.15, -0.08),
    ];
    let mut pairs: Vec<(C64, C64)> = Vec::new();
    for &z in &samples {
        let x = g.eval(eps.apply(z));
        let y = f.eval(z);
        if pairs
            .iter()
            .all(|&(px, py)| (px - x).norm() > 1e-9 && (py - y).norm() > 1e-9)
        {
            pairs.push((x, y));
        }
        if pairs.len() == 3 {
            break;
        }
    }
    if pairs.len() < 3 {
        return Ok(None);
    }
    let m = match Mobius::from_three_pairs([pairs[0], pairs[1], pairs[2]]) {
        Ok(m) => m,
        Err(_) => return Ok(None),
    };
    Ok(DiskAutomorphism::from_mobius(&m).ok())
}

fn verify_association(
    f: &FiniteBlaschkeProduct,
    g: &FiniteBlaschkeProduct,
    eps: &DiskAutomorphism,
    eph: &DiskAutomorphism,
) -> bool {
    let n = f.degree();
    let samples = 2 * n + 1;
    for m in 0..samples {
        let z = C64::from_polar(1.0, core::f64::consts::TAU * m as f64 / samples as f64);
        let lhs = f.eval(z);
        let rhs = eph.apply(g.eval(eps.apply(z)));
        if (lhs - rhs).norm() > IDENTITY_TOL {
            return false;
        }
    }
    true
}
