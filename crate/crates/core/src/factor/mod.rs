//! Factorization toolkit for the composition monoid of disk endomorphisms:
//! numerical monodromy, block systems, recognized-family decomposition,
//! explicit Ritt moves, presentation lengths, the Zieve-Muller bound,
//! common-iteration search, and the five pair families.

mod blocks;
mod monodromy;
mod perm;

pub use blocks::{block_systems, factor_degree_lattice, join, minimal_block_system, BlockSystem};
pub use monodromy::{numerical_monodromy, MonodromyOptions, MonodromyRep};
pub use perm::{generated_group_order, is_transitive, Permutation};

use crate::blaschke::{
    associated, equals_fbp, DiskAutomorphism, FiniteBlaschkeProduct, IDENTITY_TOL,
};
use crate::cheby::cheby_blaschke;
use crate::elliptic::gamma_of_t;
use crate::{Error, Result, C64};
use alloc::collections::BTreeSet;
use alloc::{format, vec, vec::Vec};
#[allow(unused_imports)]
use num_traits::Float; // float methods in no_std builds

/// Outcome of the recognized-family decomposition.
#[derive(Debug, Clone)]
pub enum Decomposition {
    /// Explicit factors with `f = outer . inner`, revalidated by composition.
    Factors {
        outer: FiniteBlaschkeProduct,
        inner: FiniteBlaschkeProduct,
    },
    /// Monodromy certifies decomposability at these inner degrees, but no
    /// recognizer produced explicit factors.
    DegreesOnly { inner_degrees: Vec<usize> },
    /// No proper block system: numerically irreducible.
    Indecomposable,
}

/// A detected rotational symmetry of the zero multiset: after centering at
/// `center`, the multiset is invariant under multiplication by a primitive
/// `order`-th root of unity; `residue = degree mod order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationalSymmetry {
    pub order: usize,
    pub center: C64,
    pub residue: usize,
}

/// Largest-order rotational symmetry of the zero multiset after centering,
/// if any (order >= 2). This is the detection step behind the relation-(ii)
/// shape `z^r g(z^k)`; explicit factors exist only when `residue == 0`.
pub fn rotational_symmetry(f: &FiniteBlaschkeProduct) -> Result<Option<RotationalSymmetry>> {
    let n = f.degree();
    if n < 2 {
        return Ok(None);
    }
    for center in symmetry_centers(f) {
        let iota_inv = DiskAutomorphism::iota(-center)?;
        let centered: Vec<C64> = f.zeros().iter().map(|&a| iota_inv.apply(a)).collect();
        for order in (2..=n).rev() {
            let zeta = C64::from_polar(1.0, core::f64::consts::TAU / order as f64);
            if multiset_invariant(&centered, zeta) {
                return Ok(Some(RotationalSymmetry {
                    order,
                    center,
                    residue: n % order,
                }));
            }
        }
    }
    Ok(None)
}

fn symmetry_centers(f: &FiniteBlaschkeProduct) -> Vec<C64> {
    let mut centers = vec![C64::new(0.0, 0.0)];
    // a symmetric centered multiset has vanishing euclidean mean; iterate
    // toward the center that balances the pulled-back zeros
    let mut c = f.zeros().iter().sum::<C64>() / f.degree() as f64;
    for _ in 0..40 {
        let iota_inv = match DiskAutomorphism::iota(-c) {
            Ok(m) => m,
            Err(_) => break,
        };
        let mean = f.zeros().iter().map(|&a| iota_inv.apply(a)).sum::<C64>() / f.degree() as f64;
        if mean.norm() < 1e-12 {
            break;
        }
        let next = c + mean * (1.0 - c.norm_sqr()) * 0.7;
        if next.norm() >= 0.999 {
            break;
        }
        c = next;
    }
    if c.norm() < 0.999 && c.norm() > 1e-9 {
        centers.push(c);
    }
    centers
}

fn multiset_invariant(points: &[C64], zeta: C64) -> bool {
    let tol = 1e-7;
    let mut used = vec![false; points.len()];
    for &p in points {
        let target = p * zeta;
        let mut hit = false;
        for (j, &q) in points.iter().enumerate() {
            if !used[j] && (q - target).norm() < tol {
                used[j] = true;
                hit = true;
                break;
            }
        }
        if !hit {
            return false;
        }
    }
    true
}

/// Attempt to split a composite-degree map along the recognized
/// families: (a) totally ramified, (b) Chebyshev-Blaschke, (c) rotational
/// symmetry. Falls back to a degrees-only report when monodromy certifies
/// decomposability that no recognizer realizes.
pub fn decompose_recognized(f: &FiniteBlaschkeProduct) -> Result<Decomposition> {
    let n = f.degree();
    if n < 2 || smallest_prime_factor(n) == n {
        return Ok(Decomposition::Indecomposable);
    }

    // (a) totally ramified: iota_q . rho z^s . iota_{-p} splits through z^d
    if let Some(form) = f.totally_ramified_normal_form()? {
        let d = smallest_prime_factor(n);
        let outer = form
            .outer()?
            .to_fbp()?
            .compose(&FiniteBlaschkeProduct::power(d)?)?;
        let inner = FiniteBlaschkeProduct::power(n / d)?.compose(&form.inner()?.to_fbp()?)?;
        return finish_factors(f, outer, inner);
    }

    // (b) Chebyshev-Blaschke: probe the critical-value geometry for nt, then
    // test association and split along the nesting law
    if let Some((eps, eph, t)) = probe_cheby(f)? {
        let d = smallest_prime_factor(n);
        let outer_cb = cheby_blaschke(n / d, d as f64 * t)?;
        let inner_cb = cheby_blaschke(d, t)?;
        let outer = eph.to_fbp()?.compose(&outer_cb.product)?;
        let inner = inner_cb.product.compose(&eps.to_fbp()?)?;
        return finish_factors(f, outer, inner);
    }

    // (c) rotational symmetry with vanishing residue: f = G . (z^k . iota_{-c})
    if let Some(sym) = rotational_symmetry(f)? {
        if sym.residue == 0 {
            if let Some((outer, inner)) = split_rotational(f, &sym)? {
                return finish_factors(f, outer, inner);
            }
        }
    }

    // certificate-only fallback
    let rep = numerical_monodromy(f, &MonodromyOptions::default())?;
    let systems = block_systems(&rep)?;
    if systems.is_empty() {
        Ok(Decomposition::Indecomposable)
    } else {
        let mut degrees: Vec<usize> = systems.iter().map(|s| s.block_size()).collect();
        degrees.sort_unstable();
        degrees.dedup();
        Ok(Decomposition::DegreesOnly {
            inner_degrees: degrees,
        })
    }
}

fn finish_factors(
    f: &FiniteBlaschkeProduct,
    outer: FiniteBlaschkeProduct,
    inner: FiniteBlaschkeProduct,
) -> Result<Decomposition> {
    let recomposed = outer.compose(&inner)?;
    if !equals_fbp(f, &recomposed, IDENTITY_TOL) {
        return Err(Error::inconsistent(
            "recognized factors failed to recompose to f",
        ));
    }
    Ok(Decomposition::Factors { outer, inner })
}

fn probe_cheby(
    f: &FiniteBlaschkeProduct,
) -> Result<Option<(DiskAutomorphism, DiskAutomorphism, f64)>> {
    let n = f.degree();
    let cd = f.critical_data()?;
    if cd.critical_values.len() != 2 {
        return Ok(None);
    }
    let (v1, v2) = (cd.critical_values[0], cd.critical_values[1]);
    // pseudo-hyperbolic separation matches |2 gamma / (1 + gamma^2)| for the
    // model critical values +/- gamma(nt)
    let d = ((v2 - v1) / (C64::new(1.0, 0.0) - v1.conj() * v2)).norm();
    if !(d > 0.0 && d < 1.0) {
        return Ok(None);
    }
    let gamma = (1.0 - (1.0 - d * d).sqrt()) / d;
    let nt = match solve_gamma(gamma) {
        Some(nt) => nt,
        None => return Ok(None),
    };
    let t = nt / n as f64;
    let model = match cheby_blaschke(n, t) {
        Ok(cb) => cb,
        Err(_) => return Ok(None),
    };
    match associated(f, &model.product)? {
        // f = eph . T_{n,t} . eps
        Some((eps, eph)) => Ok(Some((eps, eph, t))),
        None => Ok(None),
    }
}

/// Solve gamma(x) = gamma by bisection (gamma is strictly decreasing).
fn solve_gamma(target: f64) -> Option<f64> {
    if !(target > 0.0 && target < 1.0) {
        return None;
    }
    // gamma saturates at 1.0 well above t = 0.01 and gamma(60) ~ 4e-53
    // bounds everything a critical-value pair can encode
    let (mut lo, mut hi) = (0.01, 60.0);
    let glo = gamma_of_t(lo).ok()?;
    let ghi = gamma_of_t(hi).ok()?;
    if !(target <= glo && target >= ghi) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g = gamma_of_t(mid).ok()?;
        if g > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * (1.0 + hi) {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

fn split_rotational(
    f: &FiniteBlaschkeProduct,
    sym: &RotationalSymmetry,
) -> Result<Option<(FiniteBlaschkeProduct, FiniteBlaschkeProduct)>> {
    let k = sym.order;
    let iota_inv = DiskAutomorphism::iota(-sym.center)?;
    let centered: Vec<C64> = f.zeros().iter().map(|&a| iota_inv.apply(a)).collect();
    // group the centered zeros into zeta-orbits; every orbit must be full
    let zeta = C64::from_polar(1.0, core::f64::consts::TAU / k as f64);
    let mut remaining = centered;
    let mut orbit_reps: Vec<C64> = Vec::new();
    'outer: while let Some(&p) = remaining.first() {
        if p.norm() < 1e-9 {
            // zeros at the center must come in multiples of k
            let zeros_at_center = remaining.iter().filter(|q| q.norm() < 1e-9).count();
            if zeros_at_center % k != 0 {
                return Ok(None);
            }
            for _ in 0..(zeros_at_center / k) {
                orbit_reps.push(C64::new(0.0, 0.0));
            }
            remaining.retain(|q| q.norm() >= 1e-9);
            continue 'outer;
        }
        let mut orbit_idx = Vec::new();
        for j in 0..k {
            let target = p * zeta.powu(j as u32);
            match remaining
                .iter()
                .enumerate()
                .filter(|(idx, q)| !orbit_idx.contains(idx) && (**q - target).norm() < 1e-6)
                .map(|(idx, _)| idx)
                .next()
            {
                Some(idx) => orbit_idx.push(idx),
                None => return Ok(None),
            }
        }
        orbit_reps.push(p);
        let mut keep = Vec::new();
        for (idx, q) in remaining.iter().enumerate() {
            if !orbit_idx.contains(&idx) {
                keep.push(*q);
            }
        }
        remaining = keep;
    }
    // G has zeros at the k-th powers of the orbit representatives
    let g_zeros: Vec<C64> = orbit_reps.iter().map(|p| p.powu(k as u32)).collect();
    let trial = FiniteBlaschkeProduct::new(C64::new(1.0, 0.0), g_zeros.clone())?;
    // rho of G by matching one sample of f . iota_c against G(w^k)
    let w0 = C64::new(0.77, 0.13);
    let iota_c = DiskAutomorphism::iota(sym.center)?;
    let lhs = f.eval(iota_c.apply(w0));
    let base = trial.eval(w0.powu(k as u32));
    if base.norm() < 1e-12 {
        return Ok(None);
    }
    let rho = lhs / base;
    if (rho.norm() - 1.0).abs() > 1e-6 {
        return Ok(None);
    }
    let outer = FiniteBlaschkeProduct::new(rho / rho.norm(), g_zeros)?;
    let inner = FiniteBlaschkeProduct::power(k)?.compose(&iota_inv.to_fbp()?)?;
    Ok(Some((outer, inner)))
}

fn smallest_prime_factor(n: usize) -> usize {
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return p;
        }
        p += 1;
    }
    n
}

/// Relation (ii) of the monoid presentation:
/// `z^r g(z)^k . z^k = z^k . z^r g(z^k)` with `(k, r) = 1`.
///
/// Both sides are built explicitly and asserted equal before returning.
pub fn ritt_move_power(
    k: usize,
    r: usize,
    g: &FiniteBlaschkeProduct,
) -> Result<(FiniteBlaschkeProduct, FiniteBlaschkeProduct)> {
    if k < 1 || r < 1 || gcd(k, r) != 1 {
        return Err(Error::domain(format!(
            "(k, r) = ({k}, {r}) must be coprime"
        )));
    }
    // A = z^r g(z)^k : zeros {0^r} + each zero of g with multiplicity k
    let mut a_zeros = vec![C64::new(0.0, 0.0); r];
    for &b in g.zeros() {
        for _ in 0..k {
            a_zeros.push(b);
        }
    }
    let a = FiniteBlaschkeProduct::new(g.rho().powu(k as u32), a_zeros)?;
    // C = z^r g(z^k) : zeros {0^r} + all k-th roots of each zero of g
    let mut c_zeros = vec![C64::new(0.0, 0.0); r];
    for &b in g.zeros() {
        let root = b.powf(1.0 / k as f64);
        for j in 0..k {
            c_zeros.push(root * C64::from_polar(1.0, core::f64::consts::TAU * j as f64 / k as f64));
        }
    }
    let c = FiniteBlaschkeProduct::new(g.rho(), c_zeros)?;
    let power = FiniteBlaschkeProduct::power(k)?;
    let lhs = a.compose(&power)?;
    let rhs = power.compose(&c)?;
    if !equals_fbp(&lhs, &rhs, IDENTITY_TOL) {
        return Err(Error::inconsistent("power Ritt relation sides differ"));
    }
    Ok((lhs, rhs))
}

/// Relation (iii): `T_{p,qt} . T_{q,t} = T_{q,pt} . T_{p,t}`.
pub fn ritt_move_cheby(
    p: usize,
    q: usize,
    t: f64,
) -> Result<(FiniteBlaschkeProduct, FiniteBlaschkeProduct)> {
    if p < 2 || q < 2 {
        return Err(Error::domain("Chebyshev move needs p, q >= 2"));
    }
    if !(t > 0.0) {
        return Err(Error::domain("Chebyshev move needs t > 0"));
    }
    let lhs = cheby_blaschke(p, q as f64 * t)?
        .product
        .compose(&cheby_blaschke(q, t)?.product)?;
    let rhs = cheby_blaschke(q, p as f64 * t)?
        .product
        .compose(&cheby_blaschke(p, t)?.product)?;
    if !equals_fbp(&lhs, &rhs, IDENTITY_TOL) {
        return Err(Error::inconsistent("Chebyshev Ritt relation sides differ"));
    }
    Ok((lhs, rhs))
}

fn gcd(a: usize, b: usize) -> usize {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// An ordered tuple of irreducible factors presenting their composition.
#[derive(Debug, Clone)]
pub struct CompletePresentation {
    factors: Vec<FiniteBlaschkeProduct>,
}

impl CompletePresentation {
    /// Factors are outermost first: the presented map is
    /// `factors[0] . factors[1] . ... . factors[r-1]`.
    pub fn new(factors: Vec<FiniteBlaschkeProduct>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::domain("a presentation needs at least one factor"));
        }
        if factors.iter().any(|f| f.degree() < 2) {
            return Err(Error::domain("presentation factors must be nonlinear"));
        }
        Ok(CompletePresentation { factors })
    }

    pub fn factors(&self) -> &[FiniteBlaschkeProduct] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn compose_all(&self) -> Result<FiniteBlaschkeProduct> {
        let mut acc = self.factors.last().expect("nonempty").clone();
        for f in self.factors.iter().rev().skip(1) {
            acc = f.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Does the composition reproduce `f` within `tol`?
    pub fn presents(&self, f: &FiniteBlaschkeProduct, tol: f64) -> Result<bool> {
        Ok(equals_fbp(&self.compose_all()?, f, tol))
    }
}

/// The length `h(u_index) = prod_{i < index} deg u_i` (1-based index;
/// `h(u_1) = 1` as the empty product).
pub fn presentation_length(pres: &CompletePresentation, index: usize) -> Result<u128> {
    if index == 0 || index > pres.len() {
        return Err(Error::domain(format!(
            "index {index} out of range 1..={}",
            pres.len()
        )));
    }
    let mut h: u128 = 1;
    for f in &pres.factors[..index - 1] {
        h = h
            .checked_mul(f.degree() as u128)
            .ok_or_else(|| Error::domain("presentation length overflow"))?;
    }
    Ok(h)
}

/// `floor(max(8, 2 + 2 log2 n))`: the bound on iterate exponents admitting
/// factorizations not passing through the map itself.
pub fn zieve_muller_bound(n: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::domain("bound needs degree n >= 2"));
    }
    let val = 2.0 + 2.0 * (n as f64).log2();
    Ok(val.max(8.0).floor() as u64)
}

/// Outcome of the common-iteration search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationSearch {
    /// `f^k = g^l`.
    Found { k: u32, l: u32 },
    /// No hit with exponents up to `max_exponent`.
    Exhausted { max_exponent: u32 },
    /// The degree cap stopped the search at exponent `k`.
    DegreeCapped { k: u32 },
}

/// Search for `f^k = g^l` with `k <= max_exponent`, testing only exponent
/// pairs that satisfy the degree equation `(deg f)^k = (deg g)^l`.
pub fn common_iteration(
    f: &FiniteBlaschkeProduct,
    g: &FiniteBlaschkeProduct,
    max_exponent: u32,
    degree_cap: usize,
) -> Result<IterationSearch> {
    if f.degree() < 2 || g.degree() < 2 {
        return Err(Error::domain("common iteration needs degrees >= 2"));
    }
    let df = f.degree() as u128;
    let dg = g.degree() as u128;
    // iterates are built lazily: only exponents satisfying the degree
    // equation (deg f)^k = (deg g)^l trigger a composition
    let mut f_pow: Option<(u32, FiniteBlaschkeProduct)> = None;
    for k in 1..=max_exponent {
        let target = match df.checked_pow(k) {
            Some(v) => v,
            None => return Ok(IterationSearch::DegreeCapped { k }),
        };
        // find l with dg^l = df^k
        let mut l = 0u32;
        let mut dgl: u128 = 1;
        while dgl < target {
            dgl = match dgl.checked_mul(dg) {
                Some(v) => v,
                None => break,
            };
            l += 1;
        }
        if dgl != target {
            continue;
        }
        if target > degree_cap as u128 {
            return Ok(IterationSearch::DegreeCapped { k });
        }
        let (mut cur_k, mut cur) = match f_pow.take() {
            Some((e, p)) => (e, p),
            None => (1, f.clone()),
        };
        while cur_k < k {
            cur = f.compose_capped(&cur, degree_cap)?;
            cur_k += 1;
        }
        let g_pow = g.iterate_capped(l as usize, degree_cap)?;
        let hit = equals_fbp(&cur, &g_pow, IDENTITY_TOL);
        f_pow = Some((cur_k, cur));
        if hit {
            return Ok(IterationSearch::Found { k, l });
        }
    }
    Ok(IterationSearch::Exhausted { max_exponent })
}

/// The five pair families of the disk Bilu-Tichy theorem (constructors
/// only; the classification algorithm is out of scope).
#[derive(Debug, Clone)]
pub enum BiluTichyCase {
    /// (i) `{z^m, z^r p(z)^m}` with `r >= 1`, `(r, m) = 1`; `p` optional
    /// (absent means the constant 1).
    PowerPair {
        m: usize,
        r: usize,
        p: Option<FiniteBlaschkeProduct>,
    },
    /// (ii) `{z^2, z (z-a)/(1-conj(a) z) p(z)^2}` with `a != 0`.
    SquareFamily {
        a: C64,
        p: Option<FiniteBlaschkeProduct>,
    },
    /// (iii) `{T_{m,nt}, T_{n,mt}}` with `(m, n) = 1`.
    ChebyCoprime { m: usize, n: usize, t: f64 },
    /// (iv) `{T_{m,nt}, -T_{n,mt}}` with `(m, n) > 1`.
    ChebyNegated { m: usize, n: usize, t: f64 },
    /// (v) `{((z^2-a^2)/(1-conj(a)^2 z^2))^3, z^3 (z-b)/(1-conj(b) z)}`.
    SpecialSextic { a: C64, b: C64 },
}

/// Construct the pair for one case, validating its side conditions.
pub fn bilu_tichy_pair(
    case: &BiluTichyCase,
) -> Result<(FiniteBlaschkeProduct, FiniteBlaschkeProduct)> {
    let one = C64::new(1.0, 0.0);
    match case {
        BiluTichyCase::PowerPair { m, r, p } => {
            if *m < 1 || *r < 1 {
                return Err(Error::domain("case (i) needs m, r >= 1"));
            }
            if gcd(*m, *r) != 1 {
                return Err(Error::domain("case (i) violated: (r, m) must be coprime"));
            }
            let f1 = FiniteBlaschkeProduct::power(*m)?;
            let mut zeros = vec![C64::new(0.0, 0.0); *r];
            let mut rho = one;
            if let Some(p) = p {
                for &b in p.zeros() {
                    for _ in 0..*m {
                        zeros.push(b);
                    }
                }
                rho = p.rho().powu(*m as u32);
            }
            let g1 = FiniteBlaschkeProduct::new(rho, zeros)?;
            Ok((f1, g1))
        }
        BiluTichyCase::SquareFamily { a, p } => {
            if a.norm() >= 1.0 || a.norm() < 1e-12 {
                return Err(Error::domain("case (ii) needs a in the punctured disk"));
            }
            let f1 = FiniteBlaschkeProduct::power(2)?;
            let mut zeros = vec![C64::new(0.0, 0.0), *a];
            let mut rho = one;
            if let Some(p) = p {
                for &b in p.zeros() {
                    zeros.push(b);
                    zeros.push(b);
                }
                rho = p.rho() * p.rho();
            }
            let g1 = FiniteBlaschkeProduct::new(rho, zeros)?;
            Ok((f1, g1))
        }
        BiluTichyCase::ChebyCoprime { m, n, t } => {
            if gcd(*m, *n) != 1 {
                return Err(Error::domain("case (iii) violated: (m, n) must be coprime"));
            }
            let f1 = cheby_blaschke(*m, *n as f64 * t)?.product;
            let g1 = cheby_blaschke(*n, *m as f64 * t)?.product;
            Ok((f1, g1))
        }
        BiluTichyCase::ChebyNegated { m, n, t } => {
            if gcd(*m, *n) <= 1 {
                return Err(Error::domain(
                    "case (iv) violated: (m, n) must share a factor",
                ));
            }
            let f1 = cheby_blaschke(*m, *n as f64 * t)?.product;
            let g1 = cheby_blaschke(*n, *m as f64 * t)?.product.negated();
            Ok((f1, g1))
        }
        BiluTichyCase::SpecialSextic { a, b } => {
            if a.norm() >= 1.0 || b.norm() >= 1.0 {
                return Err(Error::domain("case (v) needs a, b in the disk"));
            }
            let f1 = FiniteBlaschkeProduct::new(one, vec![*a, -*a, *a, -*a, *a, -*a])?;
            let g1 = FiniteBlaschkeProduct::new(
                one,
                vec![
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    *b,
                ],
            )?;
            Ok((f1, g1))
        }
    }
}

/// Degrees certified decomposable for `f` (monodromy route), as a set.
pub fn certified_inner_degrees(f: &FiniteBlaschkeProduct) -> Result<BTreeSet<usize>> {
    let rep = numerical_monodromy(f, &MonodromyOptions::default())?;
    factor_degree_lattice(&rep)
}
