//! Exact scalars: arbitrary-precision rationals, optionally extended by a
//! single integer square root.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// An element `u + v·√d` of a quadratic field with `v ≠ 0`.
///
/// `d` is an integer that is not a perfect square, with small square factors
/// removed. Negative `d` is allowed: specializing a polynomial radicand can
/// land on either side of zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    u: BigRational,
    v: BigRational,
    d: BigInt,
}

/// Exact scalar. A `Quad` value never has a zero radical part; such values
/// collapse to `Rat` so that structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Quad(QuadNum),
}

impl QuadNum {
    pub fn u(&self) -> &BigRational {
        &self.u
    }
    pub fn v(&self) -> &BigRational {
        &self.v
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
}

/// Splits `n` as `s²·m`, pulling out every square of a prime below a fixed
/// trial-division bound plus a perfect-square cofactor. `s > 0`; `m` keeps
/// the sign of `n`.
pub fn split_square_int(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::one(), BigInt::zero());
    }
    let neg = n.is_negative();
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut p: u64 = 2;
    while p < 20_000 {
        let pp = BigInt::from(p * p);
        if pp > m {
            break;
        }
        let pb = BigInt::from(p);
        while (&m % &pp).is_zero() {
            m /= &pp;
            s *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = m.sqrt();
    if &r * &r == m {
        s *= &r;
        m = BigInt::one();
    }
    if neg {
        m = -m;
    }
    (s, m)
}

/// Square root of a rational, if the rational is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(rat(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::Rat(BigRational::from_integer(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `u + v·√d`. Square factors of `d` are pulled into `v`; a perfect
    /// square `d` yields a rational.
    pub fn quad(u: BigRational, v: BigRational, d: &BigInt) -> Self {
        if v.is_zero() || d.is_zero() {
            return Scalar::Rat(u);
        }
        let (s, m) = split_square_int(d);
        let v = v * BigRational::from_integer(s);
        if m.is_one() {
            return Scalar::Rat(u + v);
        }
        Scalar::Quad(QuadNum { u, v, d: m })
    }

    /// `√r` for a rational `r`, as a (possibly quadratic) scalar.
    pub fn sqrt_of(r: &BigRational) -> Self {
        // √(p/q) = √(p·q)/q
        let pq = r.numer() * r.denom();
        Scalar::quad(
            BigRational::zero(),
            BigRational::new(BigInt::one(), r.denom().clone()),
            &pq,
        )
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Quad(_) => None,
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            Scalar::Rat(r) if r.is_integer() => Some(r.numer()),
            _ => None,
        }
    }

    /// Rational part `u` of `u + v√d`.
    pub fn rational_part(&self) -> BigRational {
        match self {
            Scalar::Rat(r) => r.clone(),
            Scalar::Quad(q) => q.u.clone(),
        }
    }

    /// Coefficient `v` of `√d` (zero for rationals).
    pub fn radical_part(&self) -> BigRational {
        match self {
            Scalar::Rat(_) => BigRational::zero(),
            Scalar::Quad(q) => q.v.clone(),
        }
    }

    /// Radicand of the extension this scalar lives in, if irrational.
    pub fn extension(&self) -> Option<&BigInt> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Quad(q) => Some(&q.d),
        }
    }

    /// Galois conjugate `u − v√d`.
    pub fn conj(&self) -> Self {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Quad(q) => Scalar::Quad(QuadNum {
                u: q.u.clone(),
                v: -q.v.clone(),
                d: q.d.clone(),
            }),
        }
    }

    /// Field norm `u² − d·v²`.
    pub fn norm(&self) -> BigRational {
        match self {
            Scalar::Rat(r) => r * r,
            Scalar::Quad(q) => &q.u * &q.u - BigRational::from_integer(q.d.clone()) * &q.v * &q.v,
        }
    }

    /// Sign used by canonical normalization: the sign of the rational part,
    /// falling back to the radical part when the rational part vanishes.
    pub fn signum(&self) -> i32 {
        let s = |r: &BigRational| {
            if r.is_positive() {
                1
            } else if r.is_negative() {
                -1
            } else {
                0
            }
        };
        match self {
            Scalar::Rat(r) => s(r),
            Scalar::Quad(q) => match s(&q.u) {
                0 => s(&q.v),
                x => x,
            },
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Quad(q) => {
                let n = self.norm();
                Scalar::Quad(QuadNum {
                    u: &q.u / &n,
                    v: -(&q.v / &n),
                    d: q.d.clone(),
                })
            }
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn powi(&self, e: i64) -> Result<Self, Error> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            let inv = self.inv().ok_or(Error::DivisionByZero)?;
            Ok(inv.pow((-e) as u32))
        }
    }

    pub fn compatible(&self, other: &Scalar) -> bool {
        match (self.extension(), other.extension()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, Error> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, Error> {
        self.check(other)?;
        Ok(self * other)
    }

    fn check(&self, other: &Scalar) -> Result<(), Error> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::ExtensionMismatch {
                left: self.extension().cloned().unwrap_or_default(),
                right: other.extension().cloned().unwrap_or_default(),
            })
        }
    }

    /// Lowest common multiple of the denominators of both components.
    pub fn denom_lcm(&self) -> BigInt {
        match self {
            Scalar::Rat(r) => r.denom().clone(),
            Scalar::Quad(q) => q.u.denom().lcm(q.v.denom()),
        }
    }

    /// Gcd of the numerators of both components (assumes integral after
    /// scaling by `denom_lcm`).
    pub fn numer_gcd(&self) -> BigInt {
        match self {
            Scalar::Rat(r) => r.numer().abs(),
            Scalar::Quad(q) => q.u.numer().gcd(q.v.numer()),
        }
    }

    fn from_parts(u: BigRational, v: BigRational, d: &BigInt) -> Scalar {
        if v.is_zero() {
            Scalar::Rat(u)
        } else {
            Scalar::Quad(QuadNum { u, v, d: d.clone() })
        }
    }
}

fn mismatch(a: &BigInt, b: &BigInt) -> ! {
    panic!("arithmetic across distinct quadratic extensions √{a} and √{b}")
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Rat(a), Scalar::Quad(q)) | (Scalar::Quad(q), Scalar::Rat(a)) => {
                Scalar::Quad(QuadNum {
                    u: &q.u + a,
                    v: q.v.clone(),
                    d: q.d.clone(),
                })
            }
            (Scalar::Quad(p), Scalar::Quad(q)) => {
                if p.d != q.d {
                    mismatch(&p.d, &q.d)
                }
                Scalar::from_parts(&p.u + &q.u, &p.v + &q.v, &p.d)
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Rat(a), Scalar::Quad(q)) | (Scalar::Quad(q), Scalar::Rat(a)) => {
                Scalar::from_parts(&q.u * a, &q.v * a, &q.d)
            }
            (Scalar::Quad(p), Scalar::Quad(q)) => {
                if p.d != q.d {
                    mismatch(&p.d, &q.d)
                }
                let d = BigRational::from_integer(p.d.clone());
                let u = &p.u * &q.u + &p.v * &q.v * d;
                let v = &p.u * &q.v + &p.v * &q.u;
                Scalar::from_parts(u, v, &p.d)
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("scalar division by zero");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Quad(q) => Scalar::Quad(QuadNum {
                u: -q.u.clone(),
                v: -q.v.clone(),
                d: q.d.clone(),
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Rationals print as `p/q`; quadratic values as `u+v*sqrt(d)` with the
    /// coefficient of the root written as a product or quotient so the text
    /// parses back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => f.write_str(&fmt_rational(r)),
            Scalar::Quad(q) => {
                let mut out = String::new();
                if !q.u.is_zero() {
                    out.push_str(&fmt_rational(&q.u));
                }
                let neg = q.v.is_negative();
                let av = q.v.abs();
                if neg {
                    out.push('-');
                } else if !out.is_empty() {
                    out.push('+');
                }
                let root = format!("sqrt({})", q.d);
                let num = av.numer();
                let den = av.denom();
                if !num.is_one() {
                    out.push_str(&format!("{num}*"));
                }
                out.push_str(&root);
                if !den.is_one() {
                    out.push_str(&format!("/{den}"));
                }
                f.write_str(&out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(u: i64, v: i64, d: i64) -> Scalar {
        Scalar::quad(rat(u), rat(v), &BigInt::from(d))
    }

    #[test]
    fn conjugate_product_is_rational() {
        let x = q(3, 2, 2);
        let p = &x * &x.conj();
        assert_eq!(p, Scalar::one());
    }

    #[test]
    fn square_factors_are_pulled_out() {
        // √8 = 2√2
        assert_eq!(q(0, 1, 8), q(0, 2, 2));
        assert_eq!(q(1, 1, 9), Scalar::from_int(4));
        let (s, m) = split_square_int(&BigInt::from(-72));
        assert_eq!((s, m), (BigInt::from(6), BigInt::from(-2)));
    }

    #[test]
    fn inverse_and_division() {
        let x = q(3, 2, 2);
        assert_eq!(&x * &x.inv().unwrap(), Scalar::one());
        assert_eq!(x.inv().unwrap(), q(3, -2, 2));
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn sqrt_of_rational() {
        let r = BigRational::new(BigInt::from(19), BigInt::from(3));
        let s = Scalar::sqrt_of(&r);
        assert_eq!(&s * &s, Scalar::Rat(r));
        assert_eq!(Scalar::sqrt_of(&BigRational::new(4.into(), 9.into())), Scalar::from_frac(2, 3));
        let neg = Scalar::sqrt_of(&rat(-11));
        assert_eq!(&neg * &neg, Scalar::from_int(-11));
    }

    #[test]
    fn mismatched_extensions_error() {
        let a = q(0, 1, 2);
        let b = q(0, 1, 3);
        assert!(a.try_add(&b).is_err());
        assert!(a.try_mul(&Scalar::from_int(2)).is_ok());
    }

    #[test]
    fn display_round_trips_shape() {
        assert_eq!(q(3, 2, 2).to_string(), "3+2*sqrt(2)");
        assert_eq!(Scalar::quad(rat(0), BigRational::new((-1).into(), 2.into()), &3.into()).to_string(), "-sqrt(3)/2");
        assert_eq!(Scalar::from_frac(-3, 4).to_string(), "-3/4");
    }
}
