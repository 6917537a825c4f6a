//! Sparse multivariate polynomials over [`Scalar`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::Scalar;
use super::vars::{same_vars, Vars, MAX_VARS};
use crate::Error;

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then the earliest variable of the table decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u16; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_VARS])
    }

    pub fn var(idx: usize) -> Self {
        let mut m = Monomial::one();
        m.0[idx] = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, idx: usize) -> u16 {
        self.0[idx]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = [0u16; MAX_VARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i] + other.0[i];
        }
        Monomial(out)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = [0u16; MAX_VARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].checked_sub(other.0[i])?;
        }
        Some(Monomial(out))
    }

    pub fn with_exp(mut self, idx: usize, e: u16) -> Monomial {
        self.0[idx] = e;
        self
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial: terms sorted by decreasing monomial, no zero
/// coefficients. The zero polynomial has no terms.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vars,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl std::hash::Hash for MultiPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state)
    }
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Scalar::one())
    }

    pub fn constant(vars: &Vars, c: Scalar) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(), c)]
        };
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_int(vars: &Vars, c: i64) -> Self {
        Self::constant(vars, Scalar::from_int(c))
    }

    pub fn var(vars: &Vars, idx: usize) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: vec![(Monomial::var(idx), Scalar::one())],
        }
    }

    /// Variable by name; panics if absent.
    pub fn named(vars: &Vars, name: &str) -> Self {
        let idx = vars.index(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        Self::var(vars, idx)
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(vars);
        }
        MultiPoly {
            vars: vars.clone(),
            terms: vec![(m, c)],
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(vars: &Vars, terms: Vec<(Monomial, Scalar)>) -> Self {
        let mut map: HashMap<Monomial, Scalar> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(acc) => *acc = &*acc + &c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self::from_map(vars, map)
    }

    fn from_map(vars: &Vars, map: HashMap<Monomial, Scalar>) -> Self {
        let mut terms: Vec<(Monomial, Scalar)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// Terms already sorted descending, unique, nonzero.
    fn from_sorted(vars: &Vars, terms: Vec<(Monomial, Scalar)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    /// Leading coefficient under graded-lex order (zero for the zero polynomial).
    pub fn lc(&self) -> Scalar {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Scalar::zero)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.first().map(|t| t.0.degree() as i64).unwrap_or(-1)
    }

    /// Degree in one variable; -1 for the zero polynomial.
    pub fn degree(&self, var: usize) -> i64 {
        if self.terms.is_empty() {
            return -1;
        }
        self.terms.iter().map(|t| t.0.exp(var) as i64).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|t| t.0.exp(var) > 0)
    }

    /// Indices of variables that occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&v| self.uses_var(v)).collect()
    }

    /// Radicand of the quadratic extension the coefficients live in.
    pub fn extension(&self) -> Option<BigInt> {
        self.terms.iter().find_map(|t| t.1.extension().cloned())
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|t| t.1.is_rational())
    }

    fn check_compat(&self, other: &MultiPoly) -> Result<(), Error> {
        if !same_vars(&self.vars, &other.vars) {
            return Err(Error::Invalid(format!(
                "polynomials over different variable tables {} and {}",
                self.vars, other.vars
            )));
        }
        match (self.extension(), other.extension()) {
            (Some(a), Some(b)) if a != b => Err(Error::ExtensionMismatch { left: a, right: b }),
            _ => Ok(()),
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, Error> {
        self.check_compat(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, Error> {
        self.check_compat(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, Error> {
        self.check_compat(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        if c.is_one() {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, x)| {
                let y = x * c;
                (!y.is_zero()).then_some((*m, y))
            })
            .collect();
        MultiPoly::from_sorted(&self.vars, terms)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(t, x)| {
                let y = x * c;
                (!y.is_zero()).then(|| (t.mul(m), y))
            })
            .collect();
        MultiPoly::from_sorted(&self.vars, terms)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
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

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(MultiPoly::zero(&self.vars));
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.inv().expect("nonzero")));
        }
        for v in divisor.used_vars() {
            if self.degree(v) < divisor.degree(v) {
                return None;
            }
        }
        let (dlm, dlc) = divisor.terms[0].clone();
        let dlc_inv = dlc.inv().expect("nonzero leading coefficient");
        if divisor.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                out.push((m.div(&dlm)?, c * &dlc_inv));
            }
            return Some(MultiPoly::from_sorted(&self.vars, out));
        }
        let mut rem: BTreeMap<Monomial, Scalar> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, Scalar)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(&dlm)?;
            let qc = &c * &dlc_inv;
            for (dm, dc) in divisor.terms.iter().skip(1) {
                let pm = dm.mul(&qm);
                let pc = dc * &qc;
                match rem.get_mut(&pm) {
                    Some(x) => {
                        *x = &*x - &pc;
                        if x.is_zero() {
                            rem.remove(&pm);
                        }
                    }
                    None => {
                        rem.insert(pm, -pc);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(MultiPoly::from_sorted(&self.vars, quot))
    }

    /// Substitutes a scalar for one variable.
    pub fn eval_var(&self, var: usize, value: &Scalar) -> MultiPoly {
        let mut powers: Vec<Scalar> = vec![Scalar::one()];
        let mut map: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let nm = m.with_exp(var, 0);
            let add = c * &powers[e];
            match map.get_mut(&nm) {
                Some(acc) => *acc = &*acc + &add,
                None => {
                    map.insert(nm, add);
                }
            }
        }
        MultiPoly::from_map(&self.vars, map)
    }

    /// Substitutes scalars for every variable that has `Some` value.
    pub fn eval_partial(&self, values: &[Option<Scalar>]) -> MultiPoly {
        let mut p = self.clone();
        for (i, v) in values.iter().enumerate() {
            if let Some(v) = v {
                if p.uses_var(i) {
                    p = p.eval_var(i, v);
                }
            }
        }
        p
    }

    /// Full evaluation; every used variable must have a value.
    pub fn eval(&self, values: &[Option<Scalar>]) -> Result<Scalar, Error> {
        let p = self.eval_partial(values);
        p.constant_value().ok_or_else(|| {
            let missing: Vec<&str> = p.used_vars().into_iter().map(|v| self.vars.name(v)).collect();
            Error::Invalid(format!("unassigned variables {missing:?}"))
        })
    }

    /// Coefficients with respect to `var`: `result[i]` multiplies `var^i`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree(var);
        if deg < 0 {
            return Vec::new();
        }
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); deg as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            buckets[e].push((m.with_exp(var, 0), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                // Stripping one variable can reorder monomials.
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MultiPoly::from_sorted(&self.vars, t)
            })
            .collect()
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs(vars: &Vars, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                debug_assert_eq!(m.exp(var), 0);
                terms.push((m.with_exp(var, i as u16), x.clone()));
            }
        }
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly::from_sorted(vars, terms)
    }

    /// Coefficient of `var^e`.
    pub fn coeff_of(&self, var: usize, e: u16) -> MultiPoly {
        let t: Vec<(Monomial, Scalar)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) == e)
            .map(|(m, c)| (m.with_exp(var, 0), c.clone()))
            .collect();
        let mut t = t;
        t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly::from_sorted(&self.vars, t)
    }

    /// Leading coefficient in `var` (a polynomial in the other variables).
    pub fn lc_in(&self, var: usize) -> MultiPoly {
        let d = self.degree(var);
        if d < 0 {
            return self.clone();
        }
        self.coeff_of(var, d as u16)
    }

    /// Replaces `var` by the polynomial `value`.
    pub fn substitute(&self, var: usize, value: &MultiPoly) -> MultiPoly {
        if !self.uses_var(var) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(var);
        let mut acc = MultiPoly::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// `p(var + shift)`.
    pub fn shift(&self, var: usize, shift: &Scalar) -> MultiPoly {
        if shift.is_zero() || !self.uses_var(var) {
            return self.clone();
        }
        let lin = &MultiPoly::var(&self.vars, var) + &MultiPoly::constant(&self.vars, shift.clone());
        self.substitute(var, &lin)
    }

    pub fn shift_int(&self, var: usize, shift: i64) -> MultiPoly {
        self.shift(var, &Scalar::from_int(shift))
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .map(|(m, c)| {
                let e = m.exp(var);
                (m.with_exp(var, e - 1), c * &Scalar::from_int(e as i64))
            })
            .collect();
        // Lowering one exponent by one preserves the relative order.
        MultiPoly::from_sorted(&self.vars, terms)
    }

    /// Same polynomial re-expressed over another table that contains every
    /// used variable.
    pub fn rebase(&self, target: &Vars) -> Result<MultiPoly, Error> {
        if same_vars(&self.vars, target) {
            return Ok(MultiPoly {
                vars: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let mut map = Vec::new();
        for v in self.used_vars() {
            map.push((v, target.require(self.vars.name(v))?));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut nm = Monomial::one();
                for &(from, to) in &map {
                    nm.0[to] = m.exp(from);
                }
                (nm, c.clone())
            })
            .collect();
        Ok(MultiPoly::from_terms(target, terms))
    }

    /// Splits `self = c · q` where `q` has integer coefficients with gcd 1
    /// and a positive leading coefficient (for quadratic coefficients: `q`
    /// is first made monic, then scaled to integral components with gcd 1).
    pub fn unit_normal(&self) -> (Scalar, MultiPoly) {
        if self.is_zero() {
            return (Scalar::one(), self.clone());
        }
        let lc = self.lc();
        if self.is_rational() {
            let mut den = BigInt::one();
            let mut num = BigInt::zero();
            for (_, c) in &self.terms {
                let r = c.as_rational().unwrap();
                den = num_integer::lcm(den, r.denom().clone());
                num = num_integer::gcd(num, r.numer().clone());
            }
            let mut content = BigRational::new(num, den);
            if lc.signum() < 0 {
                content = -content;
            }
            let c = Scalar::Rat(content);
            if c.is_one() {
                return (c, self.clone());
            }
            let inv = c.inv().unwrap();
            return (c, self.scale(&inv));
        }
        let monic = self.scale(&lc.inv().unwrap());
        let mut den = BigInt::one();
        for (_, c) in &monic.terms {
            den = num_integer::lcm(den, c.denom_lcm());
        }
        let scaled = monic.scale(&Scalar::from_bigint(den.clone()));
        let mut g = BigInt::zero();
        for (_, c) in &scaled.terms {
            g = num_integer::gcd(g, c.numer_gcd());
        }
        let factor = Scalar::Rat(BigRational::new(den, g));
        let q = monic.scale(&factor);
        (&lc / &factor, q)
    }

    /// Canonical associate; see [`unit_normal`](Self::unit_normal).
    pub fn normalize(&self) -> MultiPoly {
        self.unit_normal().1
    }

    /// Integer-content and sign normalization of a rational polynomial is
    /// the identity.
    pub fn is_normalized(&self) -> bool {
        self.unit_normal().0.is_one()
    }

    /// Multiplies by the lcm of coefficient denominators so all
    /// coefficients become integral (components, in the quadratic case).
    pub fn clear_denominators(&self) -> (BigInt, MultiPoly) {
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            den = num_integer::lcm(den, c.denom_lcm());
        }
        let p = self.scale(&Scalar::from_bigint(den.clone()));
        (den, p)
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect();
        MultiPoly::from_sorted(&self.vars, terms)
    }

    /// Drops every term of total degree above `d`.
    pub fn truncate(&self, d: u32) -> MultiPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() <= d).cloned().collect();
        MultiPoly::from_sorted(&self.vars, terms)
    }

    pub fn conj(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (*m, c.conj())).collect();
        MultiPoly::from_sorted(&self.vars, terms)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let y = f(c);
                (!y.is_zero()).then_some((*m, y))
            })
            .collect();
        MultiPoly::from_sorted(&self.vars, terms)
    }
}

fn merge(a: &MultiPoly, b: &MultiPoly, negate_b: bool) -> MultiPoly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < b.terms.len() {
        let (ma, ca) = &a.terms[i];
        let (mb, cb) = &b.terms[j];
        match ma.cmp(mb) {
            Ordering::Greater => {
                out.push((*ma, ca.clone()));
                i += 1;
            }
            Ordering::Less => {
                out.push((*mb, if negate_b { -cb } else { cb.clone() }));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { ca - cb } else { ca + cb };
                if !c.is_zero() {
                    out.push((*ma, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    for (m, c) in &b.terms[j..] {
        out.push((*m, if negate_b { -c } else { c.clone() }));
    }
    MultiPoly::from_sorted(&a.vars, out)
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        merge(self, rhs, false)
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        merge(self, rhs, true)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        if rhs.terms.len() == 1 {
            return self.mul_monomial(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut map: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match map.get_mut(&m) {
                    Some(acc) => *acc = &*acc + &c,
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        MultiPoly::from_map(&self.vars, map)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (*m, -c)).collect();
        MultiPoly::from_sorted(&self.vars, terms)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

fn monomial_text(vars: &Vars, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for i in 0..vars.len() {
        match m.exp(i) {
            0 => {}
            1 => parts.push(vars.name(i).to_string()),
            e => parts.push(format!("{}^{}", vars.name(i), e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    /// Expanded form in decreasing graded-lex order with explicit `*` and `^`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mono = monomial_text(&self.vars, m);
            match c {
                Scalar::Rat(r) => {
                    let neg = r.numer() < &BigInt::zero();
                    if neg {
                        out.push('-');
                    } else if idx > 0 {
                        out.push('+');
                    }
                    let a = if neg { -r.clone() } else { r.clone() };
                    if mono.is_empty() {
                        out.push_str(&super::scalar::fmt_rational(&a));
                    } else if a.is_one() {
                        out.push_str(&mono);
                    } else {
                        out.push_str(&super::scalar::fmt_rational(&a));
                        out.push('*');
                        out.push_str(&mono);
                    }
                }
                Scalar::Quad(_) => {
                    if idx > 0 {
                        out.push('+');
                    }
                    out.push_str(&format!("({c})"));
                    if !mono.is_empty() {
                        out.push('*');
                        out.push_str(&mono);
                    }
                }
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::vars::VarTable;

    fn vars() -> Vars {
        VarTable::params(&["n", "k", "a"]).unwrap()
    }

    #[test]
    fn cancellation_and_product() {
        let v = vars();
        let n = MultiPoly::named(&v, "n");
        let one = MultiPoly::one(&v);
        let s = &(&n + &one) + &(&n - &one);
        assert_eq!(s, n.scale(&Scalar::from_int(2)));
        let four = Scalar::from_int(4);
        let p = &(&n.scale(&four) + &MultiPoly::from_int(&v, 5)) * &(&n.scale(&four) + &MultiPoly::from_int(&v, 3));
        assert_eq!(p.to_string(), "16*n^2+32*n+15");
    }

    #[test]
    fn exact_division() {
        let v = vars();
        let n = MultiPoly::named(&v, "n");
        let k = MultiPoly::named(&v, "k");
        let f = &(&n + &k) * &(&n - &k.scale(&Scalar::from_int(3)));
        assert_eq!(f.div_exact(&(&n + &k)).unwrap(), &n - &k.scale(&Scalar::from_int(3)));
        assert!(f.div_exact(&(&n + &MultiPoly::one(&v))).is_none());
    }

    #[test]
    fn substitution_and_shift() {
        let v = vars();
        let k = MultiPoly::named(&v, "k");
        let p = &k * &k;
        let shifted = p.shift_int(1, 1);
        assert_eq!(shifted.to_string(), "k^2+2*k+1");
        assert_eq!(shifted.eval_var(1, &Scalar::from_int(2)), MultiPoly::from_int(&v, 9));
    }

    #[test]
    fn unit_normal_fixes_sign_and_content() {
        let v = vars();
        let n = MultiPoly::named(&v, "n");
        let p = &n.scale(&Scalar::from_frac(-2, 3)) + &MultiPoly::from_int(&v, 4);
        let (c, q) = p.unit_normal();
        assert_eq!(q.to_string(), "n-6");
        assert_eq!(c, Scalar::from_frac(-2, 3));
        assert_eq!(q.scale(&c), p);
    }

    #[test]
    fn quadratic_conjugates_multiply_out() {
        let v = vars();
        let k = MultiPoly::named(&v, "k");
        let r2 = Scalar::quad(BigRational::zero(), BigRational::one(), &BigInt::from(2));
        let a = &k + &MultiPoly::constant(&v, r2.clone());
        let b = &k - &MultiPoly::constant(&v, r2);
        assert_eq!((&a * &b).to_string(), "k^2-2");
    }

    #[test]
    fn coefficient_views_round_trip() {
        let v = vars();
        let n = MultiPoly::named(&v, "n");
        let k = MultiPoly::named(&v, "k");
        let a = MultiPoly::named(&v, "a");
        let p = &(&(&n * &k) + &(&a * &k.pow(2))) + &n.pow(3);
        let cs = p.coeffs_in(1);
        assert_eq!(cs.len(), 3);
        assert_eq!(MultiPoly::from_coeffs(&v, 1, &cs), p);
    }
}
