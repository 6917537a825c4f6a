//! Creative telescoping: recurrences for definite sums of hypergeometric
//! terms, with the rational certificate.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::gcd::gcd_all;
use crate::arith::{lcm, MultiPoly, RatFunc, Scalar, Vars};
use crate::gosper::{gosper_key_solve, gosper_normal_form};
use crate::termdsl::TermExpr;
use crate::Error;

pub const DEFAULT_MAX_ORDER: usize = 4;

/// `Σ_{i=0}^{J} σ_i·S(n+i) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Recurrence {
    vars: Vars,
    rec_var: usize,
    coeffs: Vec<MultiPoly>,
}

impl Recurrence {
    /// Requires a nonzero leading coefficient; stores the canonical form.
    pub fn new(vars: &Vars, rec_var: usize, coeffs: Vec<MultiPoly>) -> Result<Self, Error> {
        Ok(Self::new_scaled(vars, rec_var, coeffs)?.0)
    }

    fn new_scaled(vars: &Vars, rec_var: usize, coeffs: Vec<MultiPoly>) -> Result<(Self, RatFunc), Error> {
        match coeffs.last() {
            None => return Err(Error::Invalid("empty recurrence".into())),
            Some(c) if c.is_zero() => return Err(Error::Invalid("leading recurrence coefficient is zero".into())),
            _ => {}
        }
        let (scale, coeffs) = normalize_coeffs(&coeffs);
        Ok((
            Recurrence {
                vars: vars.clone(),
                rec_var,
                coeffs,
            },
            scale,
        ))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn rec_var(&self) -> usize {
        self.rec_var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    /// `-σ_0/σ_1`, i.e. `S(n+1)/S(n)`.
    pub fn first_order_ratio(&self) -> Result<RatFunc, Error> {
        if self.order() != 1 {
            return Err(Error::OrderMismatch(self.order()));
        }
        RatFunc::new(-&self.coeffs[0], self.coeffs[1].clone())
    }

    pub fn rebase(&self, target: &Vars) -> Result<Recurrence, Error> {
        let coeffs = self.coeffs.iter().map(|c| c.rebase(target)).collect::<Result<Vec<_>, _>>()?;
        let rec_var = target.require(self.vars.name(self.rec_var))?;
        Recurrence::new(target, rec_var, coeffs)
    }
}

/// Divides by the polynomial gcd and the numeric content and fixes the
/// sign (positive leading coefficient of the last entry). Returns the
/// factor that was applied.
pub fn normalize_coeffs(coeffs: &[MultiPoly]) -> (RatFunc, Vec<MultiPoly>) {
    let vars = coeffs[0].vars().clone();
    let g = gcd_all(coeffs.iter().filter(|c| !c.is_zero())).unwrap_or_else(|| MultiPoly::one(&vars));
    let mut out: Vec<MultiPoly> = coeffs
        .iter()
        .map(|c| if c.is_zero() { c.clone() } else { c.div_exact(&g).expect("gcd divides") })
        .collect();
    let lead = out.iter().rev().find(|c| !c.is_zero()).expect("nonzero entry").lc();
    let mut unit = Scalar::one();
    if !lead.is_rational() {
        let inv = lead.inv().expect("nonzero");
        out = out.iter().map(|c| c.scale(&inv)).collect();
        unit = inv;
    }
    let mut den = BigInt::one();
    let mut num = BigInt::from(0);
    for c in &out {
        for (_, x) in c.terms() {
            den = num_integer::lcm(den, x.denom_lcm());
            num = num_integer::gcd(num, x.numer_gcd());
        }
    }
    let mut s = Scalar::Rat(BigRational::new(den, num));
    if out.iter().rev().find(|c| !c.is_zero()).unwrap().lc().signum() < 0 {
        s = -s;
    }
    out = out.iter().map(|c| c.scale(&s)).collect();
    let unit = &unit * &s;
    let scale = RatFunc::new(MultiPoly::constant(&vars, unit), g).expect("nonzero gcd");
    (scale, out)
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.vars.name(self.rec_var);
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = if i == 0 { format!("S({n})") } else { format!("S({n}+{i})") };
            parts.push(format!("({c})*{s}"));
        }
        write!(f, "{} = 0", parts.join(" + "))
    }
}

/// Telescoping result: recurrence plus certificate `R` with
/// `Σ σ_i·F(n+i,k) = R(k+1)·F(n,k+1) - R(k)·F(n,k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Telescoper {
    pub recurrence: Recurrence,
    pub certificate: RatFunc,
    pub sum_var: usize,
}

/// `F(n+i,k)/F(n,k)` for `i = 0..=order`.
fn shift_quotients(rn: &RatFunc, rec: usize, order: usize) -> Vec<RatFunc> {
    let mut out = vec![RatFunc::one(rn.vars())];
    for i in 1..=order {
        let next = &out[i - 1] * &rn.shift_int(rec, (i - 1) as i64);
        out.push(next);
    }
    out
}

/// Tries orders `1..=max_order` and returns the first recurrence found.
pub fn sumrecursion(term: &TermExpr, sum_var: usize, rec_var: usize, max_order: usize) -> Result<Telescoper, Error> {
    let rk = term.shift_ratio(sum_var)?;
    let rn = term.shift_ratio(rec_var)?;
    for order in 1..=max_order {
        if let Some(t) = telescope(&rk, &rn, sum_var, rec_var, order)? {
            return Ok(t);
        }
    }
    Err(Error::NoRecurrence(max_order))
}

/// Recurrence of exactly the given order from the two shift ratios.
pub fn telescope(rk: &RatFunc, rn: &RatFunc, k: usize, n: usize, order: usize) -> Result<Option<Telescoper>, Error> {
    let vars = rk.vars().clone();
    let quots = shift_quotients(rn, n, order);
    let mut l = MultiPoly::one(&vars);
    for q in &quots {
        l = lcm(&l, q.den());
    }
    let ps: Vec<MultiPoly> = quots
        .iter()
        .map(|q| q.num() * &l.div_exact(q.den()).expect("lcm divisible"))
        .collect();
    // T = F/L is hypergeometric in k; the sum is (Σσ_i·P_i)·T.
    let tratio = rk * &RatFunc::new(l.clone(), l.shift_int(k, 1))?;
    let form = gosper_normal_form(&tratio, k)?;
    let (q, r) = form.scaled_qr();
    let ps: Vec<MultiPoly> = ps.iter().map(|p| p * &form.p).collect();
    let sol = gosper_key_solve(&q, &r, &ps, k);
    let Some(sol) = sol else {
        return Ok(None);
    };
    if sol.sigma.last().is_none_or(|s| s.is_zero()) || sol.sigma[0].is_zero() {
        return Ok(None);
    }
    let (recurrence, scale) = Recurrence::new_scaled(&vars, n, sol.sigma)?;
    let num = &(&r * sol.f.num()) * scale.num();
    let den = &(&(&form.p * &l) * sol.f.den()) * scale.den();
    let cert = RatFunc::new(num, den)?;
    Ok(Some(Telescoper {
        recurrence,
        certificate: cert,
        sum_var: k,
    }))
}

/// `Σ σ_i·F(n+i,k)/F(n,k) - (R(k+1)·F(n,k+1)/F(n,k) - R(k))`; zero exactly
/// when the certificate is valid.
pub fn certificate_residual(term: &TermExpr, rec: &Recurrence, cert: &RatFunc, sum_var: usize) -> Result<RatFunc, Error> {
    let rk = term.shift_ratio(sum_var)?;
    let rn = term.shift_ratio(rec.rec_var())?;
    let quots = shift_quotients(&rn, rec.rec_var(), rec.order());
    let mut lhs = RatFunc::zero(term.vars());
    for (s, q) in rec.coeffs().iter().zip(&quots) {
        lhs = &lhs + &(&RatFunc::from_poly(s.clone()) * q);
    }
    let rhs = &(&cert.shift_int(sum_var, 1) * &rk) - cert;
    Ok(&lhs - &rhs)
}

pub fn verify_certificate(term: &TermExpr, rec: &Recurrence, cert: &RatFunc, sum_var: usize) -> Result<bool, Error> {
    Ok(certificate_residual(term, rec, cert, sum_var)?.is_zero())
}
