use std::fmt;

use super::affine::Affine;
use super::term::{Factor, TermExpr};
use crate::arith::quadext::QuadExtElem;
use crate::arith::{RatFunc, Scalar, Vars};
use crate::Error;

/// `∏(upper)_m / ∏(lower)_m · z^m / m!` in the index variable `var`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperTerm {
    vars: Vars,
    upper: Vec<QuadExtElem>,
    lower: Vec<QuadExtElem>,
    z: RatFunc,
    var: usize,
}

impl HyperTerm {
    /// Cancels parameters common to both lists and sorts each list by its
    /// rendering.
    pub fn new(vars: &Vars, mut upper: Vec<QuadExtElem>, mut lower: Vec<QuadExtElem>, z: RatFunc, var: usize) -> Self {
        let mut i = 0;
        while i < upper.len() {
            if let Some(j) = lower.iter().position(|l| *l == upper[i]) {
                upper.remove(i);
                lower.remove(j);
            } else {
                i += 1;
            }
        }
        upper.sort_by_cached_key(|p| p.to_string());
        lower.sort_by_cached_key(|p| p.to_string());
        HyperTerm {
            vars: vars.clone(),
            upper,
            lower,
            z,
            var,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn upper(&self) -> &[QuadExtElem] {
        &self.upper
    }

    pub fn lower(&self) -> &[QuadExtElem] {
        &self.lower
    }

    pub fn z(&self) -> &RatFunc {
        &self.z
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn var_name(&self) -> &str {
        self.vars.name(self.var)
    }

    /// Summand with the index replaced by the affine form `len`.
    pub fn to_termexpr_at(&self, len: &Affine) -> Result<TermExpr, Error> {
        let mut factors = Vec::new();
        let one = QuadExtElem::rational(RatFunc::one(&self.vars));
        let mut upper = self.upper.clone();
        let drop_factorial = match upper.iter().position(|p| *p == one) {
            Some(i) => {
                upper.remove(i);
                true
            }
            None => false,
        };
        push_params(&self.vars, &upper, len, 1, &mut factors)?;
        push_params(&self.vars, &self.lower, len, -1, &mut factors)?;
        if !self.z.is_one() {
            if self.z.constant_value() == Some(Scalar::from_int(-1)) {
                factors.push(Factor::Sign { exp: len.clone() });
            } else {
                factors.push(Factor::Power {
                    base: self.z.clone(),
                    exp: len.clone(),
                });
            }
        }
        if !drop_factorial {
            factors.push(Factor::Fact {
                arg: len.clone(),
                exp: -1,
            });
        }
        Ok(TermExpr::new(&self.vars, factors))
    }

    pub fn to_termexpr(&self) -> Result<TermExpr, Error> {
        self.to_termexpr_at(&Affine::var(&self.vars, self.var))
    }

    /// Value at index `m` with parameters taken from `values`.
    pub fn value(&self, values: &[Option<Scalar>], m: i64) -> Result<Scalar, Error> {
        let mut vals = values.to_vec();
        vals.resize(self.vars.len(), None);
        vals[self.var] = Some(Scalar::from_int(m));
        self.to_termexpr()?.eval(&vals)
    }

    pub fn rebase(&self, target: &Vars) -> Result<HyperTerm, Error> {
        let rb = |p: &QuadExtElem| QuadExtElem::new(p.u().rebase(target)?, p.v().rebase(target)?, p.d().rebase(target)?);
        let upper = self.upper.iter().map(rb).collect::<Result<Vec<_>, _>>()?;
        let lower = self.lower.iter().map(rb).collect::<Result<Vec<_>, _>>()?;
        let var = target.require(self.var_name())?;
        Ok(HyperTerm::new(target, upper, lower, self.z.rebase(target)?, var))
    }
}

fn push_params(vars: &Vars, params: &[QuadExtElem], len: &Affine, exp: i32, out: &mut Vec<Factor>) -> Result<(), Error> {
    let mut used = vec![false; params.len()];
    for i in 0..params.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let p = &params[i];
        if p.is_rational() {
            if p.u().is_polynomial() {
                if let Ok(base) = Affine::from_poly(p.u().num()) {
                    out.push(Factor::Poch {
                        base,
                        len: len.clone(),
                        exp,
                    });
                    continue;
                }
            }
            out.push(Factor::PairPoch {
                elem: p.clone(),
                len: len.clone(),
                exp,
            });
            continue;
        }
        let conj = p.conj();
        let j = (0..params.len())
            .find(|&j| !used[j] && params[j] == conj)
            .ok_or_else(|| Error::Invalid(format!("radical parameter {p} has no conjugate partner in {vars}")))?;
        used[j] = true;
        out.push(Factor::PairPoch {
            elem: p.clone(),
            len: len.clone(),
            exp,
        });
    }
    Ok(())
}

fn join(ps: &[QuadExtElem]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for HyperTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hyperterm([{}],[{}],{},{})",
            join(&self.upper),
            join(&self.lower),
            self.z,
            self.var_name()
        )
    }
}

/// `f(j)·g(k-j)`, or `f(j)·g(2k-j)` for the even variant.
pub fn cauchy_summand(f: &TermExpr, g: &TermExpr, j: usize, k: usize, even: bool) -> Result<TermExpr, Error> {
    let vars = f.vars();
    let kk = Affine::var(vars, k).scale(&num_rational::BigRational::from_integer(if even { 2 } else { 1 }.into()));
    let shifted = g.substitute(j, &kk.sub(&Affine::var(vars, j)))?;
    Ok(f.mul(&shifted))
}
