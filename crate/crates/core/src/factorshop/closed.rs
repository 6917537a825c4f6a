use super::linear::{extract_linear_forms, FactorReport};
use super::quadratic::{quadratic_factor, split_quartic};
use crate::arith::quadext::QuadExtElem;
use crate::arith::{content_in, MultiPoly, RatFunc, Role, Scalar};
use crate::termdsl::{Affine, HyperTerm, TermExpr};
use crate::zeilberger::Recurrence;
use crate::Error;

/// Linear forms first, then quadratic (and quartic) residual pieces in
/// `var`; a leftover that still involves `var` stays in the residual.
pub fn factor_in(p: &MultiPoly, var: usize) -> Result<FactorReport, Error> {
    let mut rep = extract_linear_forms(p, var);
    if rep.residual.degree(var) <= 0 {
        return Ok(rep);
    }
    let (c, pp) = content_in(&rep.residual, var);
    let mut left = pp.clone();
    match pp.degree(var) {
        2 => {
            rep.quadratic.push(quadratic_factor(&pp, var, 1)?);
            left = MultiPoly::one(p.vars());
        }
        4 => {
            if let Some((q1, q2)) = split_quartic(&pp, var) {
                if q1 == q2 {
                    rep.quadratic.push(quadratic_factor(&q1, var, 2)?);
                } else {
                    rep.quadratic.push(quadratic_factor(&q1, var, 1)?);
                    rep.quadratic.push(quadratic_factor(&q2, var, 1)?);
                }
                left = MultiPoly::one(p.vars());
            }
        }
        _ => {}
    }
    rep.residual = (&c * &left).normalize();
    let mut rest = rep.clone();
    rest.scalar = Scalar::one();
    rep.scalar = p
        .div_exact(&rest.expand())
        .and_then(|x| x.constant_value())
        .expect("factors reproduce the input");
    Ok(rep)
}

fn neg(e: &QuadExtElem) -> Result<QuadExtElem, Error> {
    QuadExtElem::new(-e.u(), -e.v(), e.d().clone())
}

/// Parameters `λ` with `∏(var+λ)` the monic part of the report in `var`,
/// and that monic product.
fn parameters(rep: &FactorReport, var: usize) -> Result<(Vec<QuadExtElem>, RatFunc), Error> {
    let vars = rep.residual.vars();
    if rep.residual.degree(var) > 0 {
        return Err(Error::CannotRepresent(rep.residual.to_string()));
    }
    let x = RatFunc::var(vars, var);
    let mut out = Vec::new();
    let mut monic = RatFunc::one(vars);
    for (f, m) in &rep.linear {
        let Some(root) = f.root_in(var) else { continue };
        let lam = QuadExtElem::rational(RatFunc::from_poly(-&root));
        for _ in 0..*m {
            monic = &monic * &(&x + lam.u());
            out.push(lam.clone());
        }
    }
    for q in &rep.quadratic {
        let (a, b) = (neg(&q.roots.0)?, neg(&q.roots.1)?);
        let lc = RatFunc::from_poly(q.poly.lc_in(var));
        let qm = RatFunc::from_poly(q.poly.clone()).try_div(&lc)?;
        for _ in 0..q.mult {
            monic = &monic * &qm;
            out.push(a.clone());
            out.push(b.clone());
        }
    }
    Ok((out, monic))
}

/// Hypergeometric term `T` in `var` with `T(0) = 1` and term ratio
/// `ratio`.
pub fn hyperterm_from_ratio(ratio: &RatFunc, var: usize) -> Result<HyperTerm, Error> {
    let vars = ratio.vars();
    if ratio.is_zero() {
        return Err(Error::Invalid("zero term ratio".into()));
    }
    let (upper, un) = parameters(&factor_in(ratio.num(), var)?, var)?;
    let (mut lower, ln) = parameters(&factor_in(ratio.den(), var)?, var)?;
    let z = &(ratio * &ln).try_div(&un)?;
    if z.uses_var(var) {
        return Err(Error::CannotRepresent(z.to_string()));
    }
    let one = QuadExtElem::rational(RatFunc::one(vars));
    let mut upper = upper;
    match lower.iter().position(|p| *p == one) {
        Some(i) => {
            lower.remove(i);
        }
        None => upper.push(one),
    }
    Ok(HyperTerm::new(vars, upper, lower, z.clone(), var))
}

/// `S(n) = S(0)·T(n)` for a first-order recurrence.
pub fn closedform(rec: &Recurrence) -> Result<HyperTerm, Error> {
    hyperterm_from_ratio(&rec.first_order_ratio()?, rec.rec_var())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Rational { num: FactorReport, den: FactorReport },
    Nonrational { num: FactorReport, den: FactorReport },
}

impl Verdict {
    pub fn is_rational(&self) -> bool {
        matches!(self, Verdict::Rational { .. })
    }

    pub fn reports(&self) -> (&FactorReport, &FactorReport) {
        match self {
            Verdict::Rational { num, den } | Verdict::Nonrational { num, den } => (num, den),
        }
    }

    /// Non-constant residuals of numerator and denominator.
    pub fn witnesses(&self) -> Vec<&MultiPoly> {
        let (n, d) = self.reports();
        [&n.residual, &d.residual].into_iter().filter(|r| !r.is_constant()).collect()
    }
}

/// Whether `S(n+1)/S(n)` is a quotient of products of linear forms over ℤ.
pub fn koornwinder_check(rec: &Recurrence) -> Result<Verdict, Error> {
    let ratio = rec.first_order_ratio()?;
    let num = extract_linear_forms(ratio.num(), rec.rec_var());
    let den = extract_linear_forms(ratio.den(), rec.rec_var());
    Ok(if num.is_complete() && den.is_complete() {
        Verdict::Rational { num, den }
    } else {
        Verdict::Nonrational { num, den }
    })
}

/// `Σ_j t(j) = prefactor · Σ_m T(m)` with `j = offset + m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumToHyper {
    pub prefactor: TermExpr,
    pub hyper: HyperTerm,
    pub offset: i64,
}

fn probe_values(t: &TermExpr, sum_var: usize, seed: i64) -> Vec<Option<Scalar>> {
    let vars = t.vars();
    (0..vars.len())
        .map(|i| {
            if i == sum_var {
                None
            } else if vars.role(i) == Role::Recurrence {
                Some(Scalar::from_int(9 + seed))
            } else {
                Some(Scalar::from_frac(3 * i as i64 + 2 * seed + 1, 7 + seed))
            }
        })
        .collect()
}

fn vanishes_at(t: &TermExpr, sum_var: usize, j: i64) -> bool {
    (0..2).all(|seed| {
        let mut vals = probe_values(t, sum_var, seed);
        vals[sum_var] = Some(Scalar::from_int(j));
        matches!(t.eval(&vals), Ok(v) if v.is_zero())
    })
}

/// Hypergeometric notation for a sum over `sum_var` from 0: the prefactor
/// is the first nonvanishing term, the series its normalized continuation.
pub fn sum_to_hyper(t: &TermExpr, sum_var: usize) -> Result<SumToHyper, Error> {
    let vars = t.vars();
    let offset = (0..16)
        .find(|&j| !vanishes_at(t, sum_var, j))
        .ok_or_else(|| Error::Invalid("summand vanishes identically".into()))?;
    let shifted = if offset == 0 {
        t.clone()
    } else {
        t.substitute(sum_var, &Affine::var(vars, sum_var).add_int(offset))?
    };
    let prefactor = shifted.substitute(sum_var, &Affine::from_int(vars, 0))?.simplify()?;
    let hyper = hyperterm_from_ratio(&shifted.shift_ratio(sum_var)?, sum_var)?;
    Ok(SumToHyper { prefactor, hyper, offset })
}
