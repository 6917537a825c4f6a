use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::quadext::QuadExtElem;
use crate::arith::univariate::UPoly;
use crate::arith::{content_in, MultiPoly, Scalar, Vars};

/// `c₀ + c₁x₁ + … ` with integer coefficients of gcd 1 and a positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    poly: MultiPoly,
}

impl LinearForm {
    /// Canonical associate of a total-degree-1 polynomial.
    pub fn from_poly(p: &MultiPoly) -> Option<(Scalar, LinearForm)> {
        if p.total_degree() != 1 || !p.is_rational() {
            return None;
        }
        let (unit, poly) = p.unit_normal();
        Some((unit, LinearForm { poly }))
    }

    pub fn to_poly(&self) -> MultiPoly {
        self.poly.clone()
    }

    pub fn vars(&self) -> &Vars {
        self.poly.vars()
    }

    pub fn coeff(&self, var: usize) -> BigInt {
        let c = self.poly.coeff_of(var, 1);
        let lin = c.eval_partial(&vec![Some(Scalar::zero()); self.vars().len()]);
        lin.constant_value()
            .and_then(|s| s.as_integer().cloned())
            .unwrap_or_else(BigInt::zero)
    }

    pub fn constant(&self) -> BigRational {
        let vals = vec![Some(Scalar::zero()); self.vars().len()];
        self.poly.eval(&vals).ok().and_then(|s| s.as_rational().cloned()).unwrap_or_else(BigRational::zero)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.poly.uses_var(var)
    }

    /// Value of `var` at which the form vanishes, as a polynomial in the
    /// other variables.
    pub fn root_in(&self, var: usize) -> Option<MultiPoly> {
        let c = self.coeff(var);
        if c.is_zero() {
            return None;
        }
        let x = MultiPoly::var(self.vars(), var).scale(&Scalar::from_bigint(c.clone()));
        let rest = &self.poly - &x;
        Some(rest.scale(&Scalar::Rat(BigRational::new(-BigInt::one(), c))))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// A quadratic factor in the main variable with its conjugate roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFactor {
    pub poly: MultiPoly,
    pub roots: (QuadExtElem, QuadExtElem),
    pub mult: u32,
}

/// `scalar · ∏ linear^m · ∏ quadratic^m · residual`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorReport {
    pub scalar: Scalar,
    pub linear: Vec<(LinearForm, u32)>,
    pub quadratic: Vec<QuadraticFactor>,
    pub residual: MultiPoly,
}

impl FactorReport {
    pub fn expand(&self) -> MultiPoly {
        let mut acc = self.residual.scale(&self.scalar);
        for (f, m) in &self.linear {
            acc = &acc * &f.to_poly().pow(*m);
        }
        for q in &self.quadratic {
            acc = &acc * &q.poly.pow(q.mult);
        }
        acc
    }

    pub fn is_complete(&self) -> bool {
        self.residual.is_constant()
    }

    fn push_linear(&mut self, f: LinearForm) {
        match self.linear.iter_mut().find(|(g, _)| *g == f) {
            Some((_, m)) => *m += 1,
            None => self.linear.push((f, 1)),
        }
    }

    /// Recomputes the scalar so that the reconstruction is exact.
    fn settle(&mut self, p: &MultiPoly) {
        self.scalar = Scalar::one();
        let rest = self.expand();
        self.scalar = p
            .div_exact(&rest)
            .and_then(|c| c.constant_value())
            .expect("factors reproduce the input");
    }
}

const PRIMES: [i64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn univariate(p: &MultiPoly, var: usize, vals: &[Option<Scalar>]) -> UPoly {
    UPoly::from_multi(&p.eval_partial(vals), var).expect("univariate after specialization")
}

/// Deterministic parameter values (every variable but `var`) keeping the
/// leading coefficient in `var` nonzero, with extra points moving one
/// parameter at a time by `+1` and `+3`.
fn probe_points(p: &MultiPoly, var: usize, params: &[usize]) -> (Vec<Option<Scalar>>, Vec<[Vec<Option<Scalar>>; 2]>) {
    let lc = p.lc_in(var);
    let n = p.vars().len();
    for attempt in 0.. {
        let mut base = vec![None; n];
        for (t, &i) in params.iter().enumerate() {
            let pr = PRIMES[(t + attempt) % PRIMES.len()];
            base[i] = Some(Scalar::from_frac(pr * 11 + 2 * attempt as i64 + 1, 4 + 2 * t as i64));
        }
        let moved: Vec<[Vec<Option<Scalar>>; 2]> = params
            .iter()
            .map(|&i| {
                [1, 3].map(|d| {
                    let mut v = base.clone();
                    v[i] = Some(v[i].as_ref().unwrap() + &Scalar::from_int(d));
                    v
                })
            })
            .collect();
        let ok = std::iter::once(&base)
            .chain(moved.iter().flatten())
            .all(|v| !lc.eval_partial(v).is_zero());
        if ok {
            return (base, moved);
        }
    }
    unreachable!()
}

/// One linear factor of `p` in `var` (coefficient of `var` constant),
/// found by following the rational roots of specializations.
fn find_linear(p: &MultiPoly, var: usize) -> Option<MultiPoly> {
    let vars = p.vars();
    let params: Vec<usize> = p.used_vars().into_iter().filter(|&v| v != var).collect();
    let (base, moved) = probe_points(p, var, &params);
    let roots0 = univariate(p, var, &base).rational_roots();
    let moved_roots: Vec<[Vec<BigRational>; 2]> = moved
        .iter()
        .map(|[a, b]| [univariate(p, var, a).rational_roots(), univariate(p, var, b).rational_roots()])
        .collect();
    for r0 in &roots0 {
        let mut slopes: Vec<Vec<BigRational>> = Vec::new();
        for [ra, rb] in &moved_roots {
            let three = BigRational::from_integer(BigInt::from(3));
            let sa: Vec<BigRational> = ra.iter().map(|r| r - r0).collect();
            let s: Vec<BigRational> = rb.iter().map(|r| (r - r0) / &three).filter(|s| sa.contains(s)).collect();
            slopes.push(s);
        }
        if slopes.iter().any(|s| s.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; slopes.len()];
        loop {
            let mut root = MultiPoly::constant(vars, Scalar::Rat(r0.clone()));
            for (t, &i) in params.iter().enumerate() {
                let s = &slopes[t][idx[t]];
                let x = base[i].as_ref().unwrap();
                let term = &MultiPoly::var(vars, i) - &MultiPoly::constant(vars, x.clone());
                root = &root + &term.scale(&Scalar::Rat(s.clone()));
            }
            let cand = (&MultiPoly::var(vars, var) - &root).normalize();
            if p.div_exact(&cand).is_some() {
                return Some(cand);
            }
            let mut t = 0;
            while t < idx.len() {
                idx[t] += 1;
                if idx[t] < slopes[t].len() {
                    break;
                }
                idx[t] = 0;
                t += 1;
            }
            if t == idx.len() {
                break;
            }
        }
    }
    None
}

fn peel(p: &MultiPoly, var: usize, report: &mut FactorReport) {
    if p.is_constant() {
        return;
    }
    if p.degree(var) <= 0 {
        let next = p.used_vars()[0];
        peel(p, next, report);
        return;
    }
    let (c, mut pp) = content_in(p, var);
    while pp.degree(var) > 0 {
        let Some(f) = find_linear(&pp, var) else { break };
        while let Some(q) = pp.div_exact(&f) {
            pp = q;
            let (_, form) = LinearForm::from_poly(&f).expect("linear");
            report.push_linear(form);
        }
    }
    if !pp.is_constant() {
        report.residual = &report.residual * &pp;
    }
    if !c.is_constant() {
        let next = c.used_vars()[0];
        peel(&c, next, report);
    }
}

/// Removes every factor of `p` that is a linear form over ℤ in `main_var`
/// and the other variables; what remains is the residual.
pub fn extract_linear_forms(p: &MultiPoly, main_var: usize) -> FactorReport {
    let vars = p.vars();
    let mut report = FactorReport {
        scalar: Scalar::one(),
        linear: Vec::new(),
        quadratic: Vec::new(),
        residual: MultiPoly::one(vars),
    };
    if p.is_zero() || !p.is_rational() {
        report.residual = p.clone();
        return report;
    }
    let (_, q) = p.unit_normal();
    peel(&q, main_var, &mut report);
    report.residual = report.residual.normalize();
    report.linear.sort_by_cached_key(|(f, m)| (!f.uses_var(main_var), f.to_string(), *m));
    report.settle(p);
    report
}
