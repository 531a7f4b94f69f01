//! Mobius transformations and small dense complex linear algebra.

use crate::{Error, ProjValue, Result, C64};
use alloc::{vec, vec::Vec};
#[allow(unused_imports)]
use num_traits::Float; // float methods in no_std builds

/// A Mobius transformation `z -> (a z + b) / (c z + d)` stored as a 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Mobius {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mobius { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mobius::new(
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        )
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: C64) -> ProjValue {
        let den = self.c * z + self.d;
        if den.norm() < 1e-300 {
            ProjValue::Infinity
        } else {
            ProjValue::Finite((self.a * z + self.b) / den)
        }
    }

    pub fn apply_proj(&self, z: ProjValue) -> ProjValue {
        match z {
            ProjValue::Finite(z) => self.apply(z),
            ProjValue::Infinity => {
                if self.c.norm() < 1e-300 {
                    ProjValue::Infinity
                } else {
                    ProjValue::Finite(self.a / self.c)
                }
            }
        }
    }

    /// `self` after `rhs` (matrix product).
    pub fn compose(&self, rhs: &Mobius) -> Mobius {
        Mobius::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }

    pub fn inverse(&self) -> Mobius {
        Mobius::new(self.d, -self.b, -self.c, self.a)
    }

    /// The transformation sending `(x1, x2, x3)` to `(0, 1, infinity)`.
    fn to_zero_one_inf(x1: C64, x2: C64, x3: C64) -> Mobius {
        Mobius::new(x2 - x3, -x1 * (x2 - x3), x2 - x1, -x3 * (x2 - x1))
    }

    /// The unique Mobius transformation with `x_i -> y_i` for three distinct
    /// points; fails when either triple is degenerate.
    pub fn from_three_pairs(pairs: [(C64, C64); 3]) -> Result<Mobius> {
        let [(x1, y1), (x2, y2), (x3, y3)] = pairs;
        let sep = |p: C64, q: C64| (p - q).norm() > 1e-12;
        if !(sep(x1, x2) && sep(x1, x3) && sep(x2, x3) && sep(y1, y2) && sep(y1, y3) && sep(y2, y3))
        {
            return Err(Error::domain("degenerate triple for Mobius interpolation"));
        }
        let fwd = Mobius::to_zero_one_inf(x1, x2, x3);
        let bwd = Mobius::to_zero_one_inf(y1, y2, y3).inverse();
        Ok(bwd.compose(&fwd))
    }
}

/// j-invariant of an unordered 4-point set on the sphere, one of which may be
/// infinity. Invariant under Mobius transformations and relabeling; used to
/// compare critical-value constellations.
pub fn four_point_j_invariant(points: &[ProjValue; 4]) -> Result<C64> {
    let finite: Vec<C64> = points.iter().filter_map(|p| p.finite()).collect();
    let lambda = match finite.len() {
        4 => {
            let (a, b, c, d) = (finite[0], finite[1], finite[2], finite[3]);
            ((a - c) * (b - d)) / ((a - d) * (b - c))
        }
        3 => {
            // cross ratio (a, b; c, inf) = (a - c)/(b - c)
            let (a, b, c) = (finite[0], finite[1], finite[2]);
            (a - c) / (b - c)
        }
        _ => {
            return Err(Error::domain(
                "four-point invariant needs at most one infinity",
            ))
        }
    };
    let num = lambda * lambda - lambda + C64::new(1.0, 0.0);
    let den = lambda * lambda * (C64::new(1.0, 0.0) - lambda) * (C64::new(1.0, 0.0) - lambda);
    if den.norm() < 1e-300 {
        return Err(Error::domain("degenerate four-point configuration"));
    }
    Ok(num * num * num / den * 256.0)
}

/// Solve `A x = b` in place by Gaussian elimination with partial pivoting.
pub fn solve(a: &mut [Vec<C64>], b: &mut [C64]) -> Result<Vec<C64>> {
    let n = b.len();
    for col in 0..n {
        let (piv, best) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best < 1e-300 {
            return Err(Error::inconsistent("singular matrix in linear solve"));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..n {
            let factor = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= factor * v;
            }
            let bv = b[col];
            b[r] -= factor * bv;
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in (row + 1)..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// The (approximate) right singular vector of `A` with smallest singular
/// value, by inverse power iteration on `A^H A + shift I`.
pub fn smallest_singular_vector(rows: &[Vec<C64>]) -> Result<Vec<C64>> {
    let m = rows.len();
    let n = rows[0].len();
    // gram = A^H A
    let mut gram = vec![vec![C64::new(0.0, 0.0); n]; n];
    let mut scale = 0.0f64;
    for r in rows {
        for v in r {
            scale = scale.max(v.norm());
        }
    }
    if scale == 0.0 {
        return Err(Error::inconsistent("zero matrix"));
    }
    for i in 0..n {
        for j in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for r in 0..m {
                s += rows[r][i].conj() * rows[r][j] / (scale * scale);
            }
            gram[i][j] = s;
        }
    }
    let shift = 1e-14;
    for i in 0..n {
        gram[i][i] += C64::new(shift, 0.0);
    }
    let mut v: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + (i as f64) * 0.013, 0.7 - (i as f64) * 0.029))
        .collect();
    normalize(&mut v);
    for _ in 0..60 {
        let mut a = gram.clone();
        let mut b = v.clone();
        let w = solve(&mut a, &mut b)?;
        let mut w = w;
        normalize(&mut w);
        let delta: f64 = v
            .iter()
            .zip(w.iter())
            .map(|(x, y)| (*x - *y).norm())
            .fold(0.0, f64::max);
        let delta_neg: f64 = v
            .iter()
            .zip(w.iter())
            .map(|(x, y)| (*x + *y).norm())
            .fold(0.0, f64::max);
        v = w;
        if delta.min(delta_neg) < 1e-14 {
            break;
        }
    }
    Ok(v)
}

fn normalize(v: &mut [C64]) {
    let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        // fix the overall phase so iteration comparisons are meaningful
        let pivot = v.iter().cloned().fold(C64::new(0.0, 0.0), |acc, x| {
            if x.norm() > acc.norm() {
                x
            } else {
                acc
            }
        });
        let phase = pivot / pivot.norm();
        for x in v.iter_mut() {
            *x = *x / norm / phase;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn three_point_interpolation() {
        let m = Mobius::from_three_pairs([
            (c(0.0, 0.0), c(1.0, 0.0)),
            (c(1.0, 0.0), c(0.0, 1.0)),
            (c(0.0, 1.0), c(-1.0, 0.0)),
        ])
        .unwrap();
        for (x, y) in [
            (c(0.0, 0.0), c(1.0, 0.0)),
            (c(1.0, 0.0), c(0.0, 1.0)),
            (c(0.0, 1.0), c(-1.0, 0.0)),
        ] {
            assert!((m.apply(x).finite().unwrap() - y).norm() < 1e-12);
        }
    }

    #[test]
    fn j_invariant_mobius_invariance() {
        let pts = [
            ProjValue::Finite(c(0.3, 0.1)),
            ProjValue::Finite(c(-1.2, 0.4)),
            ProjValue::Finite(c(2.0, -0.7)),
            ProjValue::Infinity,
        ];
        let j0 = four_point_j_invariant(&pts).unwrap();
        let m = Mobius::new(c(1.0, 0.5), c(0.3, 0.0), c(0.2, -0.1), c(1.0, 0.0));
        let moved = [
            m.apply_proj(pts[0]),
            m.apply_proj(pts[1]),
            m.apply_proj(pts[2]),
            m.apply_proj(pts[3]),
        ];
        let j1 = four_point_j_invariant(&moved).unwrap();
        assert!((j0 - j1).norm() < 1e-8 * (1.0 + j0.norm()));
    }

    #[test]
    fn smallest_singular_vector_finds_kernel() {
        // rows orthogonal to (1, -2, 1)
        let rows = vec![
            vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(2.0, 0.0), c(1.5, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 1.0), c(0.5, 0.5), c(1.0, 0.0)],
        ];
        // make row space rank 2: replace third row by combo of first two
        let rows = vec![
            rows[0].clone(),
            rows[1].clone(),
            rows[0]
                .iter()
                .zip(rows[1].iter())
                .map(|(a, b)| *a * 2.0 + *b * 3.0)
                .collect::<Vec<_>>(),
        ];
        let v = smallest_singular_vector(&rows).unwrap();
        for r in rows {
            let dot: C64 = r.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            assert!(dot.norm() < 1e-8);
        }
    }
}
