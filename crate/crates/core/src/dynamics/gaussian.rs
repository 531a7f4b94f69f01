//! Exact arithmetic in Z[i] and Q(i).
//!
//! Gaussian integers use arbitrary-precision components; the Euclidean
//! algorithm with rounding to the nearest Gaussian integer computes gcds,
//! and fractions are kept in lowest terms with the denominator normalized
//! to the canonical associate (argument in [0, pi/2)), so equality, hashing
//! and ordering are structural.

use crate::{Error, Result};
use alloc::format;
use alloc::string::String;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use num_bigint::BigInt;
use num_integer::Integer;
#[allow(unused_imports)]
use num_traits::Float; // float methods in no_std builds
use num_traits::{Signed, ToPrimitive, Zero};

/// A Gaussian integer `re + im i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        GaussianInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussianInt::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianInt {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// The norm `re^2 + im^2`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == BigInt::from(1)
    }

    /// Bit size of the larger component.
    pub fn bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }

    /// Quotient with both components rounded to nearest, so the remainder
    /// norm is at most half the divisor norm.
    pub fn div_round(&self, d: &GaussianInt) -> GaussianInt {
        debug_assert!(!d.is_zero());
        let num = self * &d.conj();
        let den = d.norm();
        GaussianInt {
            re: round_div(&num.re, &den),
            im: round_div(&num.im, &den),
        }
    }

    /// Euclidean gcd (defined up to units).
    pub fn gcd(a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let q = x.div_round(&y);
            let r = &x - &(&q * &y);
            x = y;
            y = r;
        }
        x
    }

    /// Exact division (panics in debug if not divisible).
    pub fn div_exact(&self, d: &GaussianInt) -> GaussianInt {
        let num = self * &d.conj();
        let den = d.norm();
        let (qr, rr) = num.re.div_rem(&den);
        let (qi, ri) = num.im.div_rem(&den);
        debug_assert!(rr.is_zero() && ri.is_zero(), "non-exact Gaussian division");
        GaussianInt { re: qr, im: qi }
    }

    /// The unit `u` making `self * u` canonical: argument in `[0, pi/2)`,
    /// i.e. `re > 0, im >= 0`. Zero maps to the unit 1.
    pub fn canonical_unit(&self) -> GaussianInt {
        if self.is_zero() {
            return GaussianInt::one();
        }
        for u in [
            GaussianInt::one(),
            GaussianInt::new(0, -1),
            GaussianInt::new(-1, 0),
            GaussianInt::i(),
        ] {
            let v = self * &u;
            if v.re.is_positive() && !v.im.is_negative() {
                return u;
            }
        }
        unreachable!("one of the four units canonicalizes a nonzero Gaussian integer")
    }
}

fn round_div(x: &BigInt, y: &BigInt) -> BigInt {
    // y > 0 here (norms); either tie direction keeps the Euclidean bound
    debug_assert!(y.is_positive());
    let two_x: BigInt = x * BigInt::from(2);
    let two_y: BigInt = y * BigInt::from(2);
    if x.is_negative() {
        let num: BigInt = two_x - y;
        num.div_floor(&two_y) + BigInt::from(1)
    } else {
        let num: BigInt = two_x + y;
        num.div_floor(&two_y)
    }
}

impl Add for &GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

/// An exact element of Q(i): `num / den` in lowest terms, denominator
/// normalized to its canonical associate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussianRational {
    num: GaussianInt,
    den: GaussianInt,
}

impl GaussianRational {
    pub fn new(num: GaussianInt, den: GaussianInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("zero denominator in Q(i)"));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: GaussianInt, den: GaussianInt) -> Self {
        if num.is_zero() {
            return GaussianRational {
                num: GaussianInt::zero(),
                den: GaussianInt::one(),
            };
        }
        let g = GaussianInt::gcd(&num, &den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        let u = den.canonical_unit();
        num = &num * &u;
        den = &den * &u;
        GaussianRational { num, den }
    }

    pub fn from_integer(n: i64) -> Self {
        GaussianRational {
            num: GaussianInt::new(n, 0),
            den: GaussianInt::one(),
        }
    }

    /// `(a + b i) / (c + d i)`.
    pub fn from_parts(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        GaussianRational::new(GaussianInt::new(a, b), GaussianInt::new(c, d))
    }

    /// `p/q + (r/s) i` from rational real and imaginary parts.
    pub fn from_rationals(p: i64, q: i64, r: i64, s: i64) -> Result<Self> {
        if q == 0 || s == 0 {
            return Err(Error::domain("zero denominator in Q(i)"));
        }
        // p/q + r/s i = (p s + r q i) / (q s)
        GaussianRational::new(
            GaussianInt::new(
                BigInt::from(p) * BigInt::from(s),
                BigInt::from(r) * BigInt::from(q),
            ),
            GaussianInt::new(BigInt::from(q) * BigInt::from(s), 0),
        )
    }

    pub fn zero() -> Self {
        GaussianRational::from_integer(0)
    }

    pub fn one() -> Self {
        GaussianRational::from_integer(1)
    }

    pub fn i() -> Self {
        GaussianRational {
            num: GaussianInt::i(),
            den: GaussianInt::one(),
        }
    }

    pub fn numerator(&self) -> &GaussianInt {
        &self.num
    }

    pub fn denominator(&self) -> &GaussianInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::reduce(self.num.conj(), self.den.conj())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("inverse of zero"));
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    /// Compare `|self|^2` with 1 exactly: Less, Equal or Greater.
    pub fn abs_sqr_cmp_one(&self) -> core::cmp::Ordering {
        self.num.norm().cmp(&self.den.norm())
    }

    /// Bit size of the largest component.
    pub fn bits(&self) -> u64 {
        self.num.bits().max(self.den.bits())
    }

    /// Approximate complex value (for diagnostics only).
    pub fn to_c64(&self) -> crate::C64 {
        let nr = big_to_f64(&self.num.re);
        let ni = big_to_f64(&self.num.im);
        let dr = big_to_f64(&self.den.re);
        let di = big_to_f64(&self.den.im);
        let den = dr * dr + di * di;
        crate::C64::new((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
    }

    /// 1/2 log max(Norm(num), Norm(den)): the logarithmic Weil height of a
    /// lowest-terms point of Q(i).
    pub fn naive_height(&self) -> f64 {
        let hn = ln_big(&self.num.norm());
        let hd = ln_big(&self.den.norm());
        0.5 * hn.max(hd)
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// ln of a nonnegative BigInt, stable for values far beyond f64 range.
pub fn ln_big(x: &BigInt) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let bits = x.bits();
    if bits <= 52 {
        return big_to_f64(x).ln();
    }
    let shift = bits - 53;
    let top = x >> shift;
    big_to_f64(&top).ln() + (shift as f64) * core::f64::consts::LN_2
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::reduce(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        debug_assert!(!rhs.is_zero());
        GaussianRational::reduce(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for GaussianRational {
    /// Serialized as `a/b+c/d*i` over the rationals (components reduced
    /// separately for readability).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re_n, re_d, im_n, im_d) = self.components();
        let fr = |n: &BigInt, d: &BigInt| -> String {
            if d == &BigInt::from(1) {
                format!("{n}")
            } else {
                format!("{n}/{d}")
            }
        };
        if im_n.is_zero() {
            write!(f, "{}", fr(&re_n, &re_d))
        } else if re_n.is_zero() {
            write!(f, "{}*i", fr(&im_n, &im_d))
        } else if im_n.is_negative() {
            write!(f, "{}{}*i", fr(&re_n, &re_d), fr(&im_n, &im_d))
        } else {
            write!(f, "{}+{}*i", fr(&re_n, &re_d), fr(&im_n, &im_d))
        }
    }
}

impl GaussianRational {
    /// Rational real and imaginary parts `(re_n, re_d, im_n, im_d)`,
    /// reduced, denominators positive.
    pub fn components(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        // x = num * conj(den) / Norm(den)
        let spread = &self.num * &self.den.conj();
        let den = self.den.norm();
        let reduce_pair = |n: &BigInt, d: &BigInt| -> (BigInt, BigInt) {
            if n.is_zero() {
                return (BigInt::zero(), BigInt::from(1));
            }
            let g = n.gcd(d);
            (n / &g, d / &g)
        };
        let (rn, rd) = reduce_pair(&spread.re, &den);
        let (in_, id) = reduce_pair(&spread.im, &den);
        (rn, rd, in_, id)
    }

    /// From rational parts as big integers.
    pub fn from_big_rationals(p: BigInt, q: BigInt, r: BigInt, s: BigInt) -> Result<Self> {
        if q.is_zero() || s.is_zero() {
            return Err(Error::domain("zero denominator in Q(i)"));
        }
        GaussianRational::new(
            GaussianInt {
                re: &p * &s,
                im: &r * &q,
            },
            GaussianInt {
                re: &q * &s,
                im: BigInt::zero(),
            },
        )
    }
}

/// Parse `a/b`, `a/b+c/d*i`, `c/d*i`, `i`, `-i`, with integer parts allowed
/// (the CLI point format).
impl core::str::FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::domain("empty point literal"));
        }
        // split into real and imaginary summands at a +/- that is not leading
        let bytes = compact.as_bytes();
        let mut split_at: Option<usize> = None;
        for (i, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && bytes[i - 1] != b'+' && bytes[i - 1] != b'-' {
                split_at = Some(i);
            }
        }
        let (real_part, imag_part) = match split_at {
            Some(i) if compact[i..].contains('i') => (&compact[..i], &compact[i..]),
            _ if compact.contains('i') => ("", compact.as_str()),
            _ => (compact.as_str(), ""),
        };
        let parse_side = |side: &str, imaginary: bool| -> Result<(BigInt, BigInt)> {
            if side.is_empty() {
                return Ok((BigInt::zero(), BigInt::from(1)));
            }
            let mut body = side;
            if imaginary {
                body = body
                    .strip_suffix("*i")
                    .or_else(|| body.strip_suffix('i'))
                    .ok_or_else(|| Error::domain(format!("bad imaginary part: {side}")))?;
                if body.is_empty() || body == "+" {
                    return Ok((BigInt::from(1), BigInt::from(1)));
                }
                if body == "-" {
                    return Ok((BigInt::from(-1), BigInt::from(1)));
                }
            }
            let (n, d) = match body.split_once('/') {
                Some((n, d)) => (n, d),
                None => (body, "1"),
            };
            let n: BigInt = n
                .parse()
                .map_err(|_| Error::domain(format!("bad integer: {n}")))?;
            let d: BigInt = d
                .parse()
                .map_err(|_| Error::domain(format!("bad integer: {d}")))?;
            Ok((n, d))
        };
        let (p, q) = parse_side(real_part, false)?;
        let (r, s) = parse_side(imag_part, true)?;
        GaussianRational::from_big_rationals(p, q, r, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_reduction() {
        // (1+i)/2 reduces to 1/(1-i), i.e. den canonicalized to 1+i... check height
        let x = GaussianRational::from_parts(1, 1, 2, 0).unwrap();
        // lowest terms: norm(num) and norm(den) coprime-ish: |num|^2 = 1, |den|^2 = 2
        assert_eq!(x.numerator().norm(), BigInt::from(1));
        assert_eq!(x.denominator().norm(), BigInt::from(2));
    }

    #[test]
    fn canonical_denominator_quadrant() {
        for (c, d) in [(-2i64, 0i64), (0, 3), (0, -3), (5, 0), (3, -4)] {
            let x = GaussianRational::from_parts(7, 3, c, d).unwrap();
            assert!(x.denominator().re.is_positive());
            assert!(!x.denominator().im.is_negative());
        }
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["1/2", "-3/7+2/5*i", "i", "-i", "3", "2/3*i", "1/2 + 1/3 i"] {
            let x: GaussianRational = s.parse().unwrap();
            let printed = format!("{x}");
            let y: GaussianRational = printed.parse().unwrap();
            assert_eq!(x, y, "{s} -> {printed}");
        }
    }

    #[test]
    fn ln_big_large() {
        let x = BigInt::from(2).pow(1000u32);
        let expected = 1000.0 * core::f64::consts::LN_2;
        assert!((ln_big(&x) - expected).abs() < 1e-9 * expected);
    }
}
