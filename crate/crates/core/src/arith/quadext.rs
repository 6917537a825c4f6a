use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::gcd::squarefree_factors;
use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::scalar::{rational_sqrt, split_square_int, Scalar};
use crate::Error;

/// `u + v·√D` with `u, v` rational functions and `D` a polynomial radicand
/// free of square factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtElem {
    u: RatFunc,
    v: RatFunc,
    d: MultiPoly,
}

impl QuadExtElem {
    /// Canonicalizes the radicand: square factors (polynomial and integer)
    /// move into `v`; a perfect-square radicand collapses to `v = 0`.
    pub fn new(u: RatFunc, v: RatFunc, d: MultiPoly) -> Result<Self, Error> {
        let vars = u.vars().clone();
        if d.is_zero() || v.is_zero() {
            return Ok(QuadExtElem::rational(u));
        }
        if !d.is_rational() {
            return Err(Error::Invalid("radicand must have rational coefficients".into()));
        }
        let (unit, fs) = squarefree_factors(&d);
        let unit = unit.as_rational().expect("rational radicand").clone();
        let mut square = MultiPoly::one(&vars);
        let mut rest = MultiPoly::one(&vars);
        for (f, m) in fs {
            square = &square * &f.pow(m / 2);
            if m % 2 == 1 {
                rest = &rest * &f;
            }
        }
        let (scale, m) = split_rational_radicand(&unit);
        let factor = Scalar::Rat(scale);
        let v = &v * &RatFunc::from_poly(square.scale(&factor));
        let d = rest.scale(&Scalar::from_bigint(m));
        if d.is_one() {
            return Ok(QuadExtElem::rational(&u + &v));
        }
        Ok(QuadExtElem { u, v, d })
    }

    pub fn rational(u: RatFunc) -> Self {
        let vars = u.vars().clone();
        QuadExtElem {
            u,
            v: RatFunc::zero(&vars),
            d: MultiPoly::zero(&vars),
        }
    }

    pub fn u(&self) -> &RatFunc {
        &self.u
    }

    pub fn v(&self) -> &RatFunc {
        &self.v
    }

    pub fn d(&self) -> &MultiPoly {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadExtElem {
            u: self.u.clone(),
            v: -&self.v,
            d: self.d.clone(),
        }
    }

    /// Value at a rational point of the parameters.
    pub fn specialize(&self, values: &[Option<Scalar>]) -> Result<Scalar, Error> {
        let u = self.u.eval(values)?;
        if self.v.is_zero() {
            return Ok(u);
        }
        let v = self.v.eval(values)?;
        let d = self.d.eval(values)?;
        let d = d
            .as_rational()
            .ok_or_else(|| Error::Invalid("radicand does not specialize to a rational".into()))?;
        let root = Scalar::sqrt_of(d);
        u.try_add(&v.try_mul(&root)?)
    }

    /// `(x - self)(x - conj)` as `x^2 - 2u·x + (u^2 - v^2·D)`; returns the
    /// two coefficients `(-2u, u^2 - v^2 D)`.
    pub fn min_poly_coeffs(&self) -> (RatFunc, RatFunc) {
        let two = Scalar::from_int(2);
        let p = self.u.scale(&two);
        let q = &(&self.u * &self.u) - &(&(&self.v * &self.v) * &RatFunc::from_poly(self.d.clone()));
        (-&p, q)
    }
}

impl fmt::Display for QuadExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = wrap(&self.u);
        if self.v.is_zero() {
            return write!(f, "{}", self.u);
        }
        let (neg, vabs) = if self.v.num().lc().signum() < 0 { (true, -&self.v) } else { (false, self.v.clone()) };
        let root = format!("sqrt({})", self.d);
        let vpart = if let Some(c) = vabs.constant_value().and_then(|c| c.as_rational().cloned()) {
            let mut s = String::new();
            if !c.numer().is_one() {
                s.push_str(&format!("{}*", c.numer()));
            }
            s.push_str(&root);
            if !c.denom().is_one() {
                s.push_str(&format!("/{}", c.denom()));
            }
            s
        } else if vabs.is_polynomial() {
            format!("{}*{root}", wrap(&vabs))
        } else {
            let num = vabs.num();
            let den = vabs.den();
            let ds = den.to_string();
            let ds = if ds.contains(['+', '-', '*', '^']) { format!("({ds})") } else { ds };
            if num.is_one() {
                format!("{root}/{ds}")
            } else {
                format!("{}*{root}/{ds}", wrap(&RatFunc::from_poly(num.clone())))
            }
        };
        let sign = if neg { "-" } else { "+" };
        if self.u.is_zero() {
            if neg {
                write!(f, "-{vpart}")
            } else {
                write!(f, "{vpart}")
            }
        } else {
            write!(f, "{u}{sign}{vpart}")
        }
    }
}

fn wrap(r: &RatFunc) -> String {
    let s = r.to_string();
    if r.num().len() <= 1 {
        s
    } else {
        format!("({s})")
    }
}

/// Square root of a polynomial with rational coefficients, if it is a
/// perfect square.
pub fn poly_sqrt(p: &MultiPoly) -> Option<MultiPoly> {
    if p.is_zero() {
        return Some(p.clone());
    }
    let (unit, fs) = squarefree_factors(p);
    let r = rational_sqrt(unit.as_rational()?)?;
    let mut acc = MultiPoly::constant(p.vars(), Scalar::Rat(r));
    for (f, m) in fs {
        if m % 2 == 1 {
            return None;
        }
        acc = &acc * &f.pow(m / 2);
    }
    Some(acc)
}

/// Squarefree integer radicand `m` and scale `s` with `r = s^2·m`.
pub fn split_rational_radicand(r: &BigRational) -> (BigRational, BigInt) {
    let (num, den) = (r.numer().abs(), r.denom().clone());
    let (t, m) = split_square_int(&(&num * &den));
    let m = if r.is_negative() { -m } else { m };
    (BigRational::new(t, den), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::vars::VarTable;

    #[test]
    fn radicand_is_canonicalized() {
        let v = VarTable::params(&["a"]).unwrap();
        let a = MultiPoly::var(&v, 0);
        let d = &MultiPoly::from_int(&v, 9) - &a.scale(&Scalar::from_int(8));
        let half = RatFunc::constant(&v, Scalar::from_frac(1, 2));
        // sqrt(4(9-8a))/4 = sqrt(9-8a)/2
        let e = QuadExtElem::new(RatFunc::zero(&v), RatFunc::constant(&v, Scalar::from_frac(1, 4)), d.scale(&Scalar::from_int(4)))
            .unwrap();
        assert_eq!(*e.v(), half);
        assert_eq!(*e.d(), d);
        let sq = QuadExtElem::new(RatFunc::zero(&v), RatFunc::one(&v), a.pow(2)).unwrap();
        assert!(sq.is_rational());
        assert_eq!(*sq.u(), RatFunc::from_poly(a.clone()));
        assert_eq!(e.to_string(), "sqrt(-8*a+9)/2");
    }

    #[test]
    fn perfect_square_detection() {
        let v = VarTable::params(&["a", "b"]).unwrap();
        let a = MultiPoly::var(&v, 0);
        let b = MultiPoly::var(&v, 1);
        let s = &(&a + &b) + &MultiPoly::from_int(&v, 3);
        assert_eq!(poly_sqrt(&s.pow(2).scale(&Scalar::from_frac(9, 4))).map(|x| x.normalize()), Some(s.normalize()));
        assert!(poly_sqrt(&(&a * &b)).is_none());
    }
}
