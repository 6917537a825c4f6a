use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{Monomial, MultiPoly, Scalar, Vars};
use crate::Error;

/// `constant + Σ coeff[i]·var[i]` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    vars: Vars,
    coeffs: Vec<BigRational>,
    constant: BigRational,
}

impl Affine {
    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        Affine {
            vars: vars.clone(),
            coeffs: vec![BigRational::zero(); vars.len()],
            constant: c,
        }
    }

    pub fn from_int(vars: &Vars, c: i64) -> Self {
        Self::constant(vars, BigRational::from_integer(c.into()))
    }

    pub fn var(vars: &Vars, idx: usize) -> Self {
        let mut a = Self::from_int(vars, 0);
        a.coeffs[idx] = BigRational::one();
        a
    }

    /// Reads an affine polynomial with rational coefficients.
    pub fn from_poly(p: &MultiPoly) -> Result<Self, Error> {
        let mut a = Self::from_int(p.vars(), 0);
        for (m, c) in p.terms() {
            let c = c.as_rational().ok_or_else(|| Error::NonAffine(p.to_string()))?.clone();
            match m.degree() {
                0 => a.constant = c,
                1 => {
                    let v = (0..p.vars().len()).find(|&v| m.exp(v) == 1).unwrap();
                    a.coeffs[v] = c;
                }
                _ => return Err(Error::NonAffine(p.to_string())),
            }
        }
        Ok(a)
    }

    pub fn to_poly(&self) -> MultiPoly {
        let mut terms: Vec<(Monomial, Scalar)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial::var(i), Scalar::Rat(c.clone())))
            .collect();
        if !self.constant.is_zero() {
            terms.push((Monomial::one(), Scalar::Rat(self.constant.clone())));
        }
        MultiPoly::from_terms(&self.vars, terms)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn coeff(&self, var: usize) -> &BigRational {
        &self.coeffs[var]
    }

    pub fn constant_term(&self) -> &BigRational {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn uses_var(&self, var: usize) -> bool {
        !self.coeffs[var].is_zero()
    }

    /// Integer coefficient of `var`, or the not-hypergeometric error.
    pub fn int_coeff(&self, var: usize) -> Result<i64, Error> {
        let c = &self.coeffs[var];
        if !c.is_integer() {
            return Err(Error::NotHypergeometric {
                var: self.vars.name(var).to_string(),
                detail: format!("coefficient {c} of {} in {self} is not an integer", self.vars.name(var)),
            });
        }
        i64::try_from(c.to_integer()).map_err(|_| Error::Invalid(format!("shift coefficient {c} too large")))
    }

    pub fn add(&self, o: &Affine) -> Affine {
        Affine {
            vars: self.vars.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
            constant: &self.constant + &o.constant,
        }
    }

    pub fn sub(&self, o: &Affine) -> Affine {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Affine {
        Affine {
            vars: self.vars.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            constant: &self.constant * s,
        }
    }

    pub fn add_const(&self, c: &BigRational) -> Affine {
        let mut a = self.clone();
        a.constant += c;
        a
    }

    pub fn add_int(&self, c: i64) -> Affine {
        self.add_const(&BigRational::from_integer(c.into()))
    }

    /// Replaces `var` by another affine form.
    pub fn substitute(&self, var: usize, value: &Affine) -> Affine {
        let c = self.coeffs[var].clone();
        if c.is_zero() {
            return self.clone();
        }
        let mut a = self.clone();
        a.coeffs[var] = BigRational::zero();
        a.add(&value.scale(&c))
    }

    pub fn shift(&self, var: usize, by: i64) -> Affine {
        let c = &self.coeffs[var] * BigRational::from_integer(by.into());
        self.add_const(&c)
    }

    pub fn eval(&self, values: &[Option<Scalar>]) -> Result<BigRational, Error> {
        let mut acc = self.constant.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = values
                .get(i)
                .and_then(|v| v.as_ref())
                .ok_or_else(|| Error::Invalid(format!("no value for `{}`", self.vars.name(i))))?;
            let v = v
                .as_rational()
                .ok_or_else(|| Error::Invalid(format!("value of `{}` must be rational", self.vars.name(i))))?;
            acc += c * v;
        }
        Ok(acc)
    }

    /// Evaluates to an integer, or reports which factor failed.
    pub fn eval_int(&self, values: &[Option<Scalar>], what: &str) -> Result<BigInt, Error> {
        let v = self.eval(values)?;
        if !v.is_integer() {
            return Err(Error::Eval {
                factor: what.to_string(),
                reason: format!("{self} = {v} is not an integer"),
            });
        }
        Ok(v.to_integer())
    }

    pub fn rebase(&self, target: &Vars) -> Result<Affine, Error> {
        Affine::from_poly(&self.to_poly().rebase(target)?)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}
