use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::gcd::gcd;
use super::poly::MultiPoly;
use super::scalar::Scalar;
use super::vars::Vars;
use crate::Error;

/// Reduced quotient of polynomials. The denominator is normalized and any
/// scalar factor lives in the numerator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero(num.vars()));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Ok(Self::from_coprime(num, den))
    }

    /// Skips the gcd; caller guarantees `gcd(num, den) = 1`.
    pub fn from_coprime(num: MultiPoly, den: MultiPoly) -> Self {
        let (c, den) = den.unit_normal();
        let num = num.scale(&c.inv().expect("nonzero unit"));
        RatFunc { num, den }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.vars());
        RatFunc { num: p, den }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(MultiPoly::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(MultiPoly::one(vars))
    }

    pub fn constant(vars: &Vars, c: Scalar) -> Self {
        Self::from_poly(MultiPoly::constant(vars, c))
    }

    pub fn var(vars: &Vars, idx: usize) -> Self {
        Self::from_poly(MultiPoly::var(vars, idx))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly, MultiPoly) {
        (self.num, self.den)
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if !self.den.is_constant() {
            return None;
        }
        let d = self.den.constant_value()?;
        Some(&self.num.constant_value()? / &d)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.num.uses_var(var) || self.den.uses_var(var)
    }

    pub fn extension(&self) -> Option<num_bigint::BigInt> {
        self.num.extension().or_else(|| self.den.extension())
    }

    pub fn is_rational(&self) -> bool {
        self.num.is_rational() && self.den.is_rational()
    }

    pub fn scale(&self, c: &Scalar) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc::from_coprime(self.num.pow(e), self.den.pow(e))
    }

    pub fn powi(&self, e: i64) -> Result<RatFunc, Error> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow((-e) as u32))
        }
    }

    pub fn try_div(&self, other: &RatFunc) -> Result<RatFunc, Error> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &other.inv()?)
    }

    /// Substitutes a polynomial for a variable.
    pub fn substitute(&self, var: usize, value: &MultiPoly) -> Result<RatFunc, Error> {
        RatFunc::new(self.num.substitute(var, value), self.den.substitute(var, value))
    }

    pub fn shift(&self, var: usize, by: &Scalar) -> RatFunc {
        // A shift is a ring automorphism, so coprimality survives.
        RatFunc::from_coprime(self.num.shift(var, by), self.den.shift(var, by))
    }

    pub fn shift_int(&self, var: usize, by: i64) -> RatFunc {
        self.shift(var, &Scalar::from_int(by))
    }

    /// Evaluates at scalars; errors if the denominator vanishes.
    pub fn eval_partial(&self, values: &[Option<Scalar>]) -> Result<RatFunc, Error> {
        let d = self.den.eval_partial(values);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.num.eval_partial(values), d)
    }

    pub fn eval(&self, values: &[Option<Scalar>]) -> Result<Scalar, Error> {
        let d = self.den.eval(values)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.num.eval(values)? / &d)
    }

    pub fn rebase(&self, target: &Vars) -> Result<RatFunc, Error> {
        Ok(RatFunc {
            num: self.num.rebase(target)?,
            den: self.den.rebase(target)?,
        })
    }

    pub fn conj(&self) -> RatFunc {
        RatFunc::from_coprime(self.num.conj(), self.den.conj())
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

fn add_sub(a: &RatFunc, b: &RatFunc, negate: bool) -> RatFunc {
    let bn = if negate { -&b.num } else { b.num.clone() };
    if a.is_zero() {
        return RatFunc { num: bn, den: b.den.clone() };
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        let num = &a.num + &bn;
        return RatFunc::new(num, a.den.clone()).expect("nonzero denominator");
    }
    let g = gcd(&a.den, &b.den);
    let ad = a.den.div_exact(&g).expect("gcd divides");
    let bd = b.den.div_exact(&g).expect("gcd divides");
    let t = &(&a.num * &bd) + &(&bn * &ad);
    if t.is_zero() {
        return RatFunc::zero(a.vars());
    }
    let g2 = gcd(&t, &g);
    let num = t.div_exact(&g2).expect("gcd divides");
    let den = &ad * &b.den.div_exact(&g2).expect("gcd divides");
    RatFunc::from_coprime(num, den)
}

fn mul(a: &RatFunc, b: &RatFunc) -> RatFunc {
    if a.is_zero() || b.is_zero() {
        return RatFunc::zero(a.vars());
    }
    let g1 = gcd(&a.num, &b.den);
    let g2 = gcd(&b.num, &a.den);
    let an = a.num.div_exact(&g1).expect("gcd divides");
    let bd = b.den.div_exact(&g1).expect("gcd divides");
    let bn = b.num.div_exact(&g2).expect("gcd divides");
    let ad = a.den.div_exact(&g2).expect("gcd divides");
    RatFunc::from_coprime(&an * &bn, &ad * &bd)
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &'a RatFunc) -> RatFunc {
        add_sub(self, rhs, false)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &'a RatFunc) -> RatFunc {
        add_sub(self, rhs, true)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &'a RatFunc) -> RatFunc {
        mul(self, rhs)
    }
}

/// Panics on division by zero; use [`RatFunc::try_div`] otherwise.
impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &'a RatFunc) -> RatFunc {
        self.try_div(rhs).expect("rational function division by zero")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        let ds = self.den.to_string();
        let den = if ds.contains(['+', '-', '*', '/', '^']) { format!("({ds})") } else { ds };
        write!(f, "{num}/{den}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::vars::VarTable;

    #[test]
    fn reduces_products_and_sums() {
        let v = VarTable::params(&["k", "n"]).unwrap();
        let k = MultiPoly::var(&v, 0);
        let one = MultiPoly::one(&v);
        let r = RatFunc::new(one.clone(), &k + &one).unwrap();
        let s = RatFunc::new(&k + &one, &k + &MultiPoly::from_int(&v, 2)).unwrap();
        let p = &r * &s;
        assert!(p.num().is_one());
        assert_eq!(*p.den(), &k + &MultiPoly::from_int(&v, 2));

        let a = RatFunc::new(one.clone(), k.clone()).unwrap();
        let b = RatFunc::new(one.clone(), &k + &one).unwrap();
        let d = &a - &b;
        assert!(d.num().is_one());
        assert_eq!(*d.den(), &(&k * &k) + &k);
    }

    #[test]
    fn scalar_moves_to_numerator() {
        let v = VarTable::params(&["k"]).unwrap();
        let k = MultiPoly::var(&v, 0);
        let r = RatFunc::new(MultiPoly::one(&v), k.scale(&Scalar::from_int(-2))).unwrap();
        assert_eq!(r.num().constant_value(), Some(Scalar::from_frac(-1, 2)));
        assert_eq!(*r.den(), k);
        assert!(r.inv().unwrap().inv().unwrap() == r);
    }
}
