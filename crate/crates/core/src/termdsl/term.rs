use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::affine::Affine;
use crate::arith::quadext::QuadExtElem;
use crate::arith::{MultiPoly, RatFunc, Scalar, Vars};
use crate::Error;

/// One multiplicative factor of a summand. Exponents `exp` are ±1 (or
/// small integers after merging).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `(base)_len = Γ(base+len)/Γ(base)`.
    Poch { base: Affine, len: Affine, exp: i32 },
    /// `arg! = Γ(arg+1)`.
    Fact { arg: Affine, exp: i32 },
    /// `base^exp`; the base must not involve shifted variables.
    Power { base: RatFunc, exp: Affine },
    /// `(-1)^exp`.
    Sign { exp: Affine },
    Rat(RatFunc),
    /// `(u+v√d)_len · (u-v√d)_len`, or `(u)_len` when `v = 0`.
    PairPoch { elem: QuadExtElem, len: Affine, exp: i32 },
}

impl Factor {
    fn kind(&self) -> u8 {
        match self {
            Factor::Rat(_) => 0,
            Factor::Sign { .. } => 1,
            Factor::Power { .. } => 2,
            Factor::Poch { .. } => 3,
            Factor::PairPoch { .. } => 4,
            Factor::Fact { .. } => 5,
        }
    }
}

/// Product of factors over a shared variable table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermExpr {
    vars: Vars,
    factors: Vec<Factor>,
}

/// Γ(x+c)/Γ(x) as numerator and denominator factor lists.
fn gamma_ratio(x: &MultiPoly, c: i64, num: &mut Vec<MultiPoly>, den: &mut Vec<MultiPoly>) {
    let vars = x.vars();
    if c >= 0 {
        for i in 0..c {
            num.push(x + &MultiPoly::from_int(vars, i));
        }
    } else {
        for i in 1..=(-c) {
            den.push(x - &MultiPoly::from_int(vars, i));
        }
    }
}

/// Builds a reduced rational function from factor lists, cancelling equal
/// factors first; products of distinct linear factors are already coprime.
pub(crate) fn assemble(vars: &Vars, num: Vec<MultiPoly>, den: Vec<MultiPoly>) -> Result<RatFunc, Error> {
    let mut unit = Scalar::one();
    let split = |fs: Vec<MultiPoly>, unit: &mut Scalar, inv: bool| -> Result<Vec<MultiPoly>, Error> {
        let mut out = Vec::with_capacity(fs.len());
        for f in fs {
            if f.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let (c, q) = f.unit_normal();
            *unit = if inv { &*unit / &c } else { &*unit * &c };
            if !q.is_one() {
                out.push(q);
            }
        }
        Ok(out)
    };
    let mut n = split(num, &mut unit, false)?;
    let d = split(den, &mut unit, true)?;
    let mut d_left = Vec::with_capacity(d.len());
    for f in d {
        if let Some(pos) = n.iter().position(|g| *g == f) {
            n.swap_remove(pos);
        } else {
            d_left.push(f);
        }
    }
    let linear = n.iter().chain(d_left.iter()).all(|f| f.total_degree() <= 1);
    let mut np = MultiPoly::constant(vars, unit);
    for f in &n {
        np = &np * f;
    }
    let mut dp = MultiPoly::one(vars);
    for f in &d_left {
        dp = &dp * f;
    }
    if linear {
        Ok(RatFunc::from_coprime(np, dp))
    } else {
        RatFunc::new(np, dp)
    }
}

fn push_ratfunc(r: &RatFunc, e: i64, num: &mut Vec<MultiPoly>, den: &mut Vec<MultiPoly>) {
    let (a, b) = if e >= 0 { (r.num(), r.den()) } else { (r.den(), r.num()) };
    for _ in 0..e.unsigned_abs() {
        num.push(a.clone());
        den.push(b.clone());
    }
}

fn not_hyper(vars: &Vars, var: usize, what: &str) -> Error {
    Error::NotHypergeometric {
        var: vars.name(var).to_string(),
        detail: format!("{what} depends on {}", vars.name(var)),
    }
}

/// Rising factorial `x(x+1)…(x+n-1)`, or `Γ(x+n)/Γ(x)` for negative `n`.
fn rising_scalar(x: &Scalar, n: &BigInt, what: &str) -> Result<Scalar, Error> {
    let n = n.to_i64().ok_or_else(|| Error::Invalid(format!("length {n} too large")))?;
    let mut acc = Scalar::one();
    if n >= 0 {
        for i in 0..n {
            acc = &acc * &(x + &Scalar::from_int(i));
        }
        Ok(acc)
    } else {
        for i in 1..=(-n) {
            acc = &acc * &(x - &Scalar::from_int(i));
        }
        acc.inv().ok_or_else(|| Error::Eval {
            factor: what.to_string(),
            reason: "pole of the gamma function".into(),
        })
    }
}

fn invert(v: Scalar, exp: i32, what: &str) -> Result<Scalar, Error> {
    if exp >= 0 {
        return Ok(v.pow(exp as u32));
    }
    let inv = v.inv().ok_or_else(|| Error::Eval {
        factor: what.to_string(),
        reason: "vanishes in a denominator".into(),
    })?;
    Ok(inv.pow((-exp) as u32))
}

impl TermExpr {
    pub fn new(vars: &Vars, factors: Vec<Factor>) -> Self {
        TermExpr {
            vars: vars.clone(),
            factors,
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::new(vars, Vec::new())
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn poch(base: Affine, len: Affine) -> Factor {
        Factor::Poch { base, len, exp: 1 }
    }

    pub fn factorial(arg: Affine) -> Factor {
        Factor::Fact { arg, exp: 1 }
    }

    /// `C(top, bottom) = (top-bottom+1)_bottom / bottom!`.
    pub fn binomial(top: &Affine, bottom: &Affine) -> Vec<Factor> {
        vec![
            Factor::Poch {
                base: top.sub(bottom).add_int(1),
                len: bottom.clone(),
                exp: 1,
            },
            Factor::Fact {
                arg: bottom.clone(),
                exp: -1,
            },
        ]
    }

    pub fn mul(&self, o: &TermExpr) -> TermExpr {
        let mut f = self.factors.clone();
        f.extend(o.factors.iter().cloned());
        TermExpr::new(&self.vars, f)
    }

    pub fn inv(&self) -> TermExpr {
        let factors = self
            .factors
            .iter()
            .map(|f| match f {
                Factor::Poch { base, len, exp } => Factor::Poch {
                    base: base.clone(),
                    len: len.clone(),
                    exp: -exp,
                },
                Factor::Fact { arg, exp } => Factor::Fact { arg: arg.clone(), exp: -exp },
                Factor::Power { base, exp } => Factor::Power {
                    base: base.clone(),
                    exp: exp.scale(&-BigRational::one()),
                },
                Factor::Sign { exp } => Factor::Sign { exp: exp.clone() },
                Factor::Rat(r) => Factor::Rat(r.inv().expect("nonzero rational factor")),
                Factor::PairPoch { elem, len, exp } => Factor::PairPoch {
                    elem: elem.clone(),
                    len: len.clone(),
                    exp: -exp,
                },
            })
            .collect();
        TermExpr::new(&self.vars, factors)
    }

    pub fn pow(&self, e: i32) -> TermExpr {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut f = Vec::new();
        for _ in 0..e.unsigned_abs() {
            f.extend(base.factors.iter().cloned());
        }
        TermExpr::new(&self.vars, f)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.factors.iter().any(|f| match f {
            Factor::Poch { base, len, .. } => base.uses_var(var) || len.uses_var(var),
            Factor::Fact { arg, .. } => arg.uses_var(var),
            Factor::Power { base, exp } => base.uses_var(var) || exp.uses_var(var),
            Factor::Sign { exp } => exp.uses_var(var),
            Factor::Rat(r) => r.uses_var(var),
            Factor::PairPoch { elem, len, .. } => {
                elem.u().uses_var(var) || elem.v().uses_var(var) || elem.d().uses_var(var) || len.uses_var(var)
            }
        })
    }

    /// `t(var+1)/t(var)` as a reduced rational function.
    pub fn shift_ratio(&self, var: usize) -> Result<RatFunc, Error> {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for f in &self.factors {
            let (mut n, mut d) = (Vec::new(), Vec::new());
            let e = match f {
                Factor::Poch { base, len, exp } => {
                    let cb = base.int_coeff(var)?;
                    let cl = len.int_coeff(var)?;
                    let top = base.add(len).to_poly();
                    gamma_ratio(&top, cb + cl, &mut n, &mut d);
                    gamma_ratio(&base.to_poly(), cb, &mut d, &mut n);
                    *exp as i64
                }
                Factor::Fact { arg, exp } => {
                    let c = arg.int_coeff(var)?;
                    gamma_ratio(&arg.add_int(1).to_poly(), c, &mut n, &mut d);
                    *exp as i64
                }
                Factor::Power { base, exp } => {
                    if base.uses_var(var) {
                        return Err(not_hyper(&self.vars, var, "power base"));
                    }
                    push_ratfunc(base, exp.int_coeff(var)?, &mut n, &mut d);
                    1
                }
                Factor::Sign { exp } => {
                    if exp.int_coeff(var)? % 2 != 0 {
                        n.push(MultiPoly::from_int(&self.vars, -1));
                    }
                    1
                }
                Factor::Rat(r) => {
                    if r.uses_var(var) {
                        let s = r.shift_int(var, 1);
                        push_ratfunc(&s, 1, &mut n, &mut d);
                        push_ratfunc(r, -1, &mut n, &mut d);
                    }
                    1
                }
                Factor::PairPoch { elem, len, exp } => {
                    let depends = elem.u().uses_var(var) || elem.v().uses_var(var) || elem.d().uses_var(var);
                    if depends {
                        return Err(not_hyper(&self.vars, var, "radical Pochhammer parameter"));
                    }
                    let c = len.int_coeff(var)?;
                    let l = RatFunc::from_poly(len.to_poly());
                    let step = |i: i64| -> RatFunc {
                        let x = &(&l + &RatFunc::constant(&self.vars, Scalar::from_int(i))) + elem.u();
                        if elem.is_rational() {
                            x
                        } else {
                            let vv = elem.v() * elem.v();
                            &(&x * &x) - &(&vv * &RatFunc::from_poly(elem.d().clone()))
                        }
                    };
                    if c >= 0 {
                        for i in 0..c {
                            push_ratfunc(&step(i), 1, &mut n, &mut d);
                        }
                    } else {
                        for i in 1..=(-c) {
                            push_ratfunc(&step(-i), -1, &mut n, &mut d);
                        }
                    }
                    *exp as i64
                }
            };
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    num.extend(n.iter().cloned());
                    den.extend(d.iter().cloned());
                } else {
                    num.extend(d.iter().cloned());
                    den.extend(n.iter().cloned());
                }
            }
        }
        assemble(&self.vars, num, den)
    }

    /// Exact value at a point; every variable of the term needs a value.
    pub fn eval(&self, values: &[Option<Scalar>]) -> Result<Scalar, Error> {
        let mut acc = Scalar::one();
        for f in &self.factors {
            let v = self.eval_factor(f, values)?;
            acc = acc.try_mul(&v)?;
        }
        Ok(acc)
    }

    fn eval_factor(&self, f: &Factor, values: &[Option<Scalar>]) -> Result<Scalar, Error> {
        let name = || render_factor(f, false);
        match f {
            Factor::Poch { base, len, exp } => {
                let b = Scalar::Rat(base.eval(values)?);
                let l = len.eval_int(values, &name())?;
                invert(rising_scalar(&b, &l, &name())?, *exp, &name())
            }
            Factor::Fact { arg, exp } => {
                let x = arg.eval_int(values, &name())?;
                if x.is_negative() {
                    return Err(Error::Eval {
                        factor: name(),
                        reason: format!("negative factorial argument {x}"),
                    });
                }
                let v = rising_scalar(&Scalar::one(), &x, &name())?;
                invert(v, *exp, &name())
            }
            Factor::Power { base, exp } => {
                let b = base.eval(values)?;
                let e = exp.eval_int(values, &name())?;
                let e = e.to_i64().ok_or_else(|| Error::Invalid("exponent too large".into()))?;
                b.powi(e).map_err(|_| Error::Eval {
                    factor: name(),
                    reason: "zero to a negative power".into(),
                })
            }
            Factor::Sign { exp } => {
                let e = exp.eval_int(values, &name())?;
                Ok(if e.is_even() { Scalar::one() } else { Scalar::from_int(-1) })
            }
            Factor::Rat(r) => r.eval(values).map_err(|_| Error::Eval {
                factor: name(),
                reason: "denominator vanishes".into(),
            }),
            Factor::PairPoch { elem, len, exp } => {
                let l = len.eval_int(values, &name())?;
                let x = elem.specialize(values)?;
                let mut v = rising_scalar(&x, &l, &name())?;
                if !elem.is_rational() {
                    let y = elem.conj().specialize(values)?;
                    v = v.try_mul(&rising_scalar(&y, &l, &name())?)?;
                    if !v.is_rational() {
                        return Err(Error::Eval {
                            factor: name(),
                            reason: "conjugate pair product is not rational".into(),
                        });
                    }
                }
                invert(v, *exp, &name())
            }
        }
    }

    /// Replaces `var` by an affine form everywhere.
    pub fn substitute(&self, var: usize, value: &Affine) -> Result<TermExpr, Error> {
        let p = value.to_poly();
        let sub_rf = |r: &RatFunc| r.substitute(var, &p);
        let mut out = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            out.push(match f {
                Factor::Poch { base, len, exp } => Factor::Poch {
                    base: base.substitute(var, value),
                    len: len.substitute(var, value),
                    exp: *exp,
                },
                Factor::Fact { arg, exp } => Factor::Fact {
                    arg: arg.substitute(var, value),
                    exp: *exp,
                },
                Factor::Power { base, exp } => Factor::Power {
                    base: sub_rf(base)?,
                    exp: exp.substitute(var, value),
                },
                Factor::Sign { exp } => Factor::Sign {
                    exp: exp.substitute(var, value),
                },
                Factor::Rat(r) => Factor::Rat(sub_rf(r)?),
                Factor::PairPoch { elem, len, exp } => {
                    let elem = QuadExtElem::new(sub_rf(elem.u())?, sub_rf(elem.v())?, elem.d().substitute(var, &p))?;
                    Factor::PairPoch {
                        elem,
                        len: len.substitute(var, value),
                        exp: *exp,
                    }
                }
            });
        }
        Ok(TermExpr::new(&self.vars, out))
    }

    pub fn rebase(&self, target: &Vars) -> Result<TermExpr, Error> {
        let mut out = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            out.push(match f {
                Factor::Poch { base, len, exp } => Factor::Poch {
                    base: base.rebase(target)?,
                    len: len.rebase(target)?,
                    exp: *exp,
                },
                Factor::Fact { arg, exp } => Factor::Fact {
                    arg: arg.rebase(target)?,
                    exp: *exp,
                },
                Factor::Power { base, exp } => Factor::Power {
                    base: base.rebase(target)?,
                    exp: exp.rebase(target)?,
                },
                Factor::Sign { exp } => Factor::Sign { exp: exp.rebase(target)? },
                Factor::Rat(r) => Factor::Rat(r.rebase(target)?),
                Factor::PairPoch { elem, len, exp } => Factor::PairPoch {
                    elem: QuadExtElem::new(elem.u().rebase(target)?, elem.v().rebase(target)?, elem.d().rebase(target)?)?,
                    len: len.rebase(target)?,
                    exp: *exp,
                },
            });
        }
        Ok(TermExpr::new(target, out))
    }

    /// Expands factors with constant integer lengths into rational
    /// factors, merges `(p+c)_L / (p)_L`, collects rational factors, and
    /// sorts the rest canonically.
    pub fn simplify(&self) -> Result<TermExpr, Error> {
        let vars = &self.vars;
        let mut num = Vec::new();
        let mut den = Vec::new();
        let mut rest: Vec<Factor> = Vec::new();
        let mut sign_exp = Affine::from_int(vars, 0);
        for f in &self.factors {
            match f {
                Factor::Poch { base, len, exp } if len.is_constant() && len.constant_term().is_integer() => {
                    let c = len.constant_term().to_integer().to_i64().unwrap();
                    let (mut n, mut d) = (Vec::new(), Vec::new());
                    gamma_ratio(&base.to_poly(), c, &mut n, &mut d);
                    if *exp < 0 {
                        std::mem::swap(&mut n, &mut d);
                    }
                    for _ in 0..exp.unsigned_abs() {
                        num.extend(n.iter().cloned());
                        den.extend(d.iter().cloned());
                    }
                }
                Factor::Fact { arg, exp } if arg.is_constant() && arg.constant_term().is_integer() && !arg.constant_term().is_negative() => {
                    let v = rising_scalar(&Scalar::one(), &arg.constant_term().to_integer(), "factorial")?;
                    let v = invert(v, *exp, "factorial")?;
                    num.push(MultiPoly::constant(vars, v));
                }
                Factor::Power { base, exp } if base.is_one() || exp.is_constant() && exp.constant_term().is_zero() => {}
                Factor::Power { base, exp } if exp.is_constant() && exp.constant_term().is_integer() => {
                    let e = exp.constant_term().to_integer().to_i64().unwrap();
                    push_ratfunc(base, e, &mut num, &mut den);
                }
                Factor::Power { base, exp } if base.constant_value().is_some_and(|c| c == Scalar::from_int(-1)) => {
                    sign_exp = sign_exp.add(exp);
                }
                Factor::Sign { exp } => sign_exp = sign_exp.add(exp),
                Factor::Rat(r) => push_ratfunc(r, 1, &mut num, &mut den),
                Factor::PairPoch { len, .. } if len.is_constant() && len.constant_term().is_zero() => {}
                other => rest.push(other.clone()),
            }
        }
        // (p+c)_L / (p)_L = Γ(p+c+L)Γ(p) / (Γ(p+c)Γ(p+L)) for integer c.
        let mut i = 0;
        while i < rest.len() {
            let mut merged = false;
            if let Factor::Poch { base: b1, len: l1, exp: 1 } = &rest[i] {
                for j in 0..rest.len() {
                    if let Factor::Poch { base: b2, len: l2, exp: -1 } = &rest[j] {
                        let diff = b1.sub(b2);
                        if l1 == l2 && diff.is_constant() && diff.constant_term().is_integer() {
                            let c = diff.constant_term().to_integer().to_i64().unwrap();
                            let top2 = b2.add(l2).to_poly();
                            gamma_ratio(&top2, c, &mut num, &mut den);
                            gamma_ratio(&b2.to_poly(), c, &mut den, &mut num);
                            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                            rest.remove(hi);
                            rest.remove(lo);
                            merged = true;
                            break;
                        }
                    }
                }
            }
            if merged {
                i = 0;
            } else {
                i += 1;
            }
        }
        let mut factors = Vec::new();
        let sign_exp = Affine::from_poly(&sign_exp.to_poly().map_coeffs(|c| {
            // (-1)^(2m) = 1: reduce integer coefficients mod 2.
            let r = c.as_rational().unwrap();
            if r.is_integer() {
                Scalar::Rat(BigRational::from_integer(r.to_integer().mod_floor(&BigInt::from(2))))
            } else {
                c.clone()
            }
        }))?;
        if !sign_exp.to_poly().is_zero() {
            factors.push(Factor::Sign { exp: sign_exp });
        }
        let r = assemble(vars, num, den)?;
        if !r.is_one() {
            factors.insert(0, Factor::Rat(r));
        }
        rest.sort_by_cached_key(|f| (f.kind(), render_factor(f, false)));
        factors.extend(rest);
        Ok(TermExpr::new(vars, factors))
    }
}

fn render_ratfunc(r: &RatFunc) -> String {
    let s = r.to_string();
    if s.contains(['+', '-', '/', '*']) {
        format!("({s})")
    } else {
        s
    }
}

/// Grammar-compatible rendering of one factor; with `inverse` the
/// exponent sign is flipped (the caller writes a `/`).
fn render_factor(f: &Factor, inverse: bool) -> String {
    let pow = |s: String, e: i32| {
        let e = if inverse { -e } else { e };
        if e == 1 {
            s
        } else {
            format!("{s}^({e})")
        }
    };
    match f {
        Factor::Poch { base, len, exp } => pow(format!("poch({base},{len})"), *exp),
        Factor::Fact { arg, exp } => pow(format!("factorial({arg})"), *exp),
        Factor::Power { base, exp } => {
            let e = if inverse { exp.scale(&-BigRational::one()) } else { exp.clone() };
            format!("{}^({})", render_ratfunc(base), e)
        }
        Factor::Sign { exp } => format!("(-1)^({exp})"),
        Factor::Rat(r) => {
            let r = if inverse { r.inv().expect("nonzero") } else { r.clone() };
            render_ratfunc(&r)
        }
        Factor::PairPoch { elem, len, exp } => {
            let s = if elem.is_rational() {
                format!("poch({},{len})", elem)
            } else {
                format!("(poch({},{len})*poch({},{len}))", elem, elem.conj())
            };
            let e = if inverse { -exp } else { *exp };
            if e == 1 {
                s
            } else {
                format!("({s})^({e})")
            }
        }
    }
}

fn factor_exp(f: &Factor) -> i32 {
    match f {
        Factor::Poch { exp, .. } | Factor::Fact { exp, .. } | Factor::PairPoch { exp, .. } => *exp,
        _ => 1,
    }
}

impl fmt::Display for TermExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for fac in &self.factors {
            if factor_exp(fac) < 0 {
                den.push(render_factor(fac, true));
            } else {
                num.push(render_factor(fac, false));
            }
        }
        if num.is_empty() {
            num.push("1".into());
        }
        write!(f, "{}", num.join("*"))?;
        for d in den {
            write!(f, "/{d}")?;
        }
        Ok(())
    }
}
