use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::linear::QuadraticFactor;
use crate::arith::quadext::QuadExtElem;
use crate::arith::scalar::rational_sqrt;
use crate::arith::univariate::UPoly;
use crate::arith::{content_in, MultiPoly, RatFunc, Scalar};
use crate::Error;

/// Conjugate roots `(-P ± √(P²-4AQ))/(2A)` of `A·x² + P·x + Q` in `var`,
/// the one with positive radical coefficient first.
pub fn split_quadratic(p: &MultiPoly, var: usize) -> Result<(QuadExtElem, QuadExtElem), Error> {
    if p.degree(var) != 2 {
        return Err(Error::Invalid(format!("expected degree 2 in {}, got {}", p.vars().name(var), p.degree(var))));
    }
    let c = p.coeffs_in(var);
    let (q, pl, a) = (&c[0], &c[1], &c[2]);
    let disc = &(pl * pl) - &(&(a * q) * &MultiPoly::from_int(p.vars(), 4));
    let two_a = RatFunc::from_poly(a.scale(&Scalar::from_int(2)));
    let u = (&RatFunc::from_poly(-pl)).try_div(&two_a)?;
    let v = RatFunc::one(p.vars()).try_div(&two_a)?;
    let r = QuadExtElem::new(u, v, disc)?;
    if r.is_rational() {
        // Perfect-square discriminant: the radical collapsed into u.
        let sum = (&RatFunc::from_poly(-pl)).try_div(&RatFunc::from_poly(a.clone()))?;
        let other = &sum - r.u();
        return Ok((r, QuadExtElem::rational(other)));
    }
    if r.v().num().lc().signum() > 0 {
        Ok((r.clone(), r.conj()))
    } else {
        Ok((r.conj(), r))
    }
}

pub(crate) fn quadratic_factor(p: &MultiPoly, var: usize, mult: u32) -> Result<QuadraticFactor, Error> {
    Ok(QuadraticFactor {
        poly: p.clone(),
        roots: split_quadratic(p, var)?,
        mult,
    })
}

fn solve_dense(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let t = &a[col][c] * &f;
                    a[r][c] -= t;
                }
                let t = &b[col] * &f;
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// `σ·f + τ·g = e` with `deg σ < deg g`, `deg τ < deg f`.
fn diophantine(f: &UPoly, g: &UPoly, e: &UPoly) -> Option<(UPoly, UPoly)> {
    let (df, dg) = (f.degree() as usize, g.degree() as usize);
    let n = df + dg;
    let mut a = vec![vec![BigRational::zero(); n]; n];
    for i in 0..dg {
        for (j, c) in f.0.iter().enumerate() {
            a[i + j][i] = c.clone();
        }
    }
    for i in 0..df {
        for (j, c) in g.0.iter().enumerate() {
            a[i + j][dg + i] = c.clone();
        }
    }
    let mut b = vec![BigRational::zero(); n];
    for (i, c) in e.0.iter().enumerate() {
        if i >= n {
            if !c.is_zero() {
                return None;
            }
            continue;
        }
        b[i] = c.clone();
    }
    let x = solve_dense(a, b)?;
    Some((UPoly::new(x[..dg].to_vec()), UPoly::new(x[dg..].to_vec())))
}

/// Splittings of a quartic over ℚ into two monic quadratics.
fn rational_quadratic_pairs(f: &UPoly) -> Vec<(UPoly, UPoly)> {
    let m = f.monic();
    let c: Vec<BigRational> = m.0.clone();
    let (c0, c1, c2, c3) = (&c[0], &c[1], &c[2], &c[3]);
    let four = BigRational::from_integer(BigInt::from(4));
    // y = β + δ solves y³ - c2·y² + (c1·c3 - 4c0)·y - (c3²·c0 - 4c2·c0 + c1²).
    let res = UPoly::new(vec![
        -(c3 * c3 * c0 - &four * c2 * c0 + c1 * c1),
        c1 * c3 - &four * c0,
        -c2.clone(),
        BigRational::one(),
    ]);
    let mut out = Vec::new();
    for y in res.rational_roots() {
        let Some(sb) = rational_sqrt(&(&y * &y - &four * c0)) else { continue };
        let Some(sa) = rational_sqrt(&(c3 * c3 - &four * (c2 - &y))) else { continue };
        let two = BigRational::from_integer(BigInt::from(2));
        let (beta, delta) = ((&y + &sb) / &two, (&y - &sb) / &two);
        for (alpha, gamma) in [((c3 + &sa) / &two, (c3 - &sa) / &two), ((c3 - &sa) / &two, (c3 + &sa) / &two)] {
            if &alpha * &delta + &beta * &gamma == *c1 {
                let q1 = UPoly::new(vec![beta.clone(), alpha.clone(), BigRational::one()]);
                let q2 = UPoly::new(vec![delta.clone(), gamma, BigRational::one()]);
                if q1.mul(&q2) == m {
                    out.push((q1, q2));
                }
            }
        }
    }
    out
}

fn upoly_to_multi(u: &UPoly, vars: &crate::arith::Vars, var: usize) -> MultiPoly {
    let coeffs: Vec<MultiPoly> = u.0.iter().map(|c| MultiPoly::constant(vars, Scalar::Rat(c.clone()))).collect();
    MultiPoly::from_coeffs(vars, var, &coeffs)
}

/// Part of `p` of total degree `d` in `params`.
fn param_degree_part(p: &MultiPoly, params: &[usize], d: u32) -> MultiPoly {
    let terms = p
        .terms()
        .iter()
        .filter(|(m, _)| params.iter().map(|&i| m.exp(i) as u32).sum::<u32>() == d)
        .cloned()
        .collect();
    MultiPoly::from_terms(p.vars(), terms)
}

fn param_degree(p: &MultiPoly, params: &[usize]) -> u32 {
    p.terms()
        .iter()
        .map(|(m, _)| params.iter().map(|&i| m.exp(i) as u32).sum::<u32>())
        .max()
        .unwrap_or(0)
}

/// Lifts `lc·p ≡ f1·f2` from the point where every parameter is zero,
/// with both leading coefficients pinned to `lc`.
fn lift(p: &MultiPoly, var: usize, params: &[usize], f1: &UPoly, f2: &UPoly) -> Option<(MultiPoly, MultiPoly)> {
    let vars = p.vars();
    let lc = p.lc_in(var);
    let target = &lc * p;
    let lc0 = lc.eval_partial(&params_zero(vars.len(), params)).constant_value()?;
    let lc0 = lc0.as_rational()?.clone();
    let x2 = MultiPoly::var(vars, var).pow(2);
    let lower = |f: &UPoly| upoly_to_multi(&UPoly::new(f.scale(&lc0).0[..2].to_vec()), vars, var);
    let mut g1 = &(&lc * &x2) + &lower(f1);
    let mut g2 = &(&lc * &x2) + &lower(f2);
    let (b1, b2) = (f1.scale(&lc0), f2.scale(&lc0));
    let bound = param_degree(&target, params);
    for d in 1..=bound {
        let err = param_degree_part(&(&target - &(&g1 * &g2)), params, d);
        if err.is_zero() {
            continue;
        }
        let mut buckets: Vec<(crate::arith::Monomial, Vec<(u16, BigRational)>)> = Vec::new();
        for (m, c) in err.terms() {
            let e = m.exp(var);
            let key = m.clone().with_exp(var, 0);
            let c = c.as_rational()?.clone();
            match buckets.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push((e, c)),
                None => buckets.push((key, vec![(e, c)])),
            }
        }
        for (mono, cs) in buckets {
            let deg = cs.iter().map(|(e, _)| *e as usize).max().unwrap_or(0);
            let mut dense = vec![BigRational::zero(); deg + 1];
            for (e, c) in cs {
                dense[e as usize] = c;
            }
            let (s, t) = diophantine(&b1, &b2, &UPoly::new(dense))?;
            let mono = MultiPoly::monomial(vars, mono, Scalar::one());
            g2 = &g2 + &(&upoly_to_multi(&s, vars, var) * &mono);
            g1 = &g1 + &(&upoly_to_multi(&t, vars, var) * &mono);
        }
    }
    if &g1 * &g2 == target {
        Some((g1, g2))
    } else {
        None
    }
}

fn params_zero(n: usize, params: &[usize]) -> Vec<Option<Scalar>> {
    let mut v = vec![None; n];
    for &i in params {
        v[i] = Some(Scalar::zero());
    }
    v
}

/// Factors a quartic in `var` into two quadratics over the field of the
/// other variables; `None` when no such splitting exists.
pub fn split_quartic(p: &MultiPoly, var: usize) -> Option<(MultiPoly, MultiPoly)> {
    if p.degree(var) != 4 || !p.is_rational() {
        return None;
    }
    let vars = p.vars();
    let (_, pp) = content_in(p, var);
    let params: Vec<usize> = pp.used_vars().into_iter().filter(|&v| v != var).collect();
    let primes = [3i64, 5, 7, 11, 13, 17, 19, 23];
    for attempt in 0..8 {
        let point: Vec<Scalar> = (0..params.len())
            .map(|t| Scalar::from_frac(primes[(t + attempt) % primes.len()] * 2 + 1, 3 + t as i64 + attempt as i64))
            .collect();
        let mut vals = vec![None; vars.len()];
        for (t, &i) in params.iter().enumerate() {
            vals[i] = Some(point[t].clone());
        }
        if pp.lc_in(var).eval_partial(&vals).is_zero() {
            continue;
        }
        let u = UPoly::from_multi(&pp.eval_partial(&vals), var)?;
        if u.gcd(&u.derivative()).degree() > 0 {
            continue;
        }
        let mut shifted = pp.clone();
        for (t, &i) in params.iter().enumerate() {
            shifted = shifted.shift(i, &point[t]);
        }
        for (q1, q2) in rational_quadratic_pairs(&u) {
            if let Some((g1, g2)) = lift(&shifted, var, &params, &q1, &q2) {
                let mut h1 = g1;
                let mut h2 = g2;
                for (t, &i) in params.iter().enumerate() {
                    h1 = h1.shift(i, &-&point[t]);
                    h2 = h2.shift(i, &-&point[t]);
                }
                let h1 = content_in(&h1, var).1.normalize();
                let h2 = content_in(&h2, var).1.normalize();
                if pp.div_exact(&(&h1 * &h2)).is_some_and(|c| c.is_constant()) {
                    return Some(if h1.to_string() <= h2.to_string() { (h1, h2) } else { (h2, h1) });
                }
            }
        }
        return None;
    }
    None
}
