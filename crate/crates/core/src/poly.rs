//! Dense complex polynomials and a simultaneous root finder.
//!
//! Coefficients are stored in ascending order: `p[k]` multiplies `z^k`.
//! Roots are found by Aberth-Ehrlich iteration followed by two Newton
//! polishing steps; multiple roots are recovered by clustering.

use crate::{Error, Result, C64};
use alloc::{format, vec, vec::Vec};
#[allow(unused_imports)]
use num_traits::Float; // float methods in no_std builds

/// Horner evaluation.
pub fn eval(p: &[C64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Formal derivative.
pub fn derivative(p: &[C64]) -> Vec<C64> {
    if p.len() <= 1 {
        return vec![C64::new(0.0, 0.0)];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// Product of two polynomials.
pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `a - b`, padded as needed.
pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len().max(b.len());
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

/// Drop leading coefficients that are negligible relative to the largest one.
pub fn trim(p: &[C64], rel_tol: f64) -> Vec<C64> {
    let scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return vec![C64::new(0.0, 0.0)];
    }
    let mut deg = 0;
    for (k, c) in p.iter().enumerate() {
        if c.norm() > rel_tol * scale {
            deg = k;
        }
    }
    p[..=deg].to_vec()
}

/// All complex roots of `p`, with multiplicity (list length = degree).
///
/// The polynomial is deflated at the origin first, scaled, then solved by
/// Aberth-Ehrlich from a staggered circle of initial guesses. Two Newton
/// steps polish each root.
pub fn roots(p: &[C64]) -> Result<Vec<C64>> {
    let p = trim(p, 1e-14);
    let deg = p.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }

    // deflate exact zeros at the origin
    let scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut low = 0;
    while low < deg && p[low].norm() <= 1e-300 * scale {
        low += 1;
    }
    let mut out = vec![C64::new(0.0, 0.0); low];
    let q: Vec<C64> = p[low..].to_vec();
    let d = q.len() - 1;
    if d == 0 {
        return Ok(out);
    }
    if d == 1 {
        out.push(-q[0] / q[1]);
        return Ok(out);
    }

    let lead = q[d];
    let qn: Vec<C64> = q.iter().map(|c| c / lead).collect();
    let dq = derivative(&qn);

    // initial guesses on a circle sized by the root-magnitude heuristic
    let r0 = qn[0].norm().powf(1.0 / d as f64).max(1e-3).min(1e3);
    let mut zs: Vec<C64> = (0..d)
        .map(|j| {
            let th = core::f64::consts::TAU * (j as f64 + 0.25) / d as f64 + 0.43;
            C64::from_polar(r0.max(0.5), th)
        })
        .collect();

    let mut converged = false;
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let zi = zs[i];
            let pv = eval(&qn, zi);
            let dv = eval(&dq, zi);
            if pv.norm() == 0.0 {
                continue;
            }
            let newton = if dv.norm() > 0.0 { pv / dv } else { pv };
            let mut s = C64::new(0.0, 0.0);
            for (j, &zj) in zs.iter().enumerate() {
                if j != i {
                    let diff = zi - zj;
                    if diff.norm() > 1e-300 {
                        s += diff.inv();
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - newton * s;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            zs[i] = zi - step;
            max_step = max_step.max(step.norm() / (1.0 + zs[i].norm()));
        }
        if max_step < 1e-14 {
            converged = true;
            break;
        }
    }

    // polish
    for z in zs.iter_mut() {
        for _ in 0..2 {
            let pv = eval(&qn, *z);
            let dv = eval(&dq, *z);
            if dv.norm() > 1e-300 {
                let step = pv / dv;
                if step.norm() < 1.0 {
                    *z -= step;
                }
            }
        }
    }

    if !converged {
        // accept anyway if the residuals are already tiny (clustered roots
        // stall the step criterion without hurting accuracy)
        let bad = zs
            .iter()
            .any(|&z| eval(&qn, z).norm() > 1e-8 * (1.0 + z.norm().powi(d as i32)));
        if bad {
            return Err(Error::nonconvergence(format!(
                "root finder stalled at degree {d}"
            )));
        }
    }

    out.extend(zs);
    Ok(out)
}

/// Cluster points within `radius` (chain linking), returning the groups.
pub fn cluster_groups(points: &[C64], radius: f64) -> Vec<Vec<C64>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: Vec<Vec<C64>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(points[i]);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

/// Cluster points within `radius`, returning (centroid, multiplicity) pairs.
pub fn cluster(points: &[C64], radius: f64) -> Vec<(C64, usize)> {
    cluster_groups(points, radius)
        .into_iter()
        .map(|g| {
            let m = g.len();
            (g.into_iter().sum::<C64>() / m as f64, m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn roots_of_cubic() {
        // (z-1)(z-2i)(z+3) = z^3 + (2 - 2i) z^2 + (-3 - 4i) z + 6i... build by mul
        let p = mul(
            &mul(&[c(-1.0, 0.0), c(1.0, 0.0)], &[c(0.0, -2.0), c(1.0, 0.0)]),
            &[c(3.0, 0.0), c(1.0, 0.0)],
        );
        let mut rs = roots(&p).unwrap();
        rs.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((rs[0] - c(-3.0, 0.0)).norm() < 1e-12);
        assert!((rs[1] - c(0.0, 2.0)).norm() < 1e-12);
        assert!((rs[2] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn multiple_root_clusters() {
        // (z - 0.5)^4; a quadruple root scatters like eps^{1/4}, so the
        // centroid is only coarse here (consumers refine via derivatives)
        let lin = [c(-0.5, 0.0), c(1.0, 0.0)];
        let p = mul(&mul(&lin, &lin), &mul(&lin, &lin));
        let rs = roots(&p).unwrap();
        let cl = cluster(&rs, 1e-3);
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].1, 4);
        assert!((cl[0].0 - c(0.5, 0.0)).norm() < 1e-3);
    }

    #[test]
    fn origin_deflation() {
        // z^5 + z^3 = z^3 (z^2 + 1)
        let p = [
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ];
        let rs = roots(&p).unwrap();
        assert_eq!(rs.len(), 5);
        let zeros = rs.iter().filter(|z| z.norm() < 1e-12).count();
        assert_eq!(zeros, 3);
    }
}
