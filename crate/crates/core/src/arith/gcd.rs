//! Multivariate gcd by subresultant PRS, recursing on a main variable, and
//! the content / squarefree machinery built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::poly::MultiPoly;
use super::scalar::Scalar;

/// Greatest common divisor, normalized (integer content 1, positive leading
/// coefficient). `gcd(p, 0) = normalize(p)`.
pub fn gcd(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        return q.normalize();
    }
    if q.is_zero() {
        return p.normalize();
    }
    if p.is_constant() || q.is_constant() {
        return MultiPoly::one(p.vars());
    }
    let pn = p.normalize();
    let qn = q.normalize();
    if pn == qn {
        return pn;
    }
    if pn.is_rational() && qn.is_rational() {
        if let Some(g) = heu_gcd(&pn, &qn, 0) {
            return g.normalize();
        }
    }
    gcd_rec(&pn, &qn).normalize()
}

fn max_norm(p: &MultiPoly) -> BigInt {
    p.terms()
        .iter()
        .map(|(_, c)| c.as_integer().expect("integral coefficients").abs())
        .max()
        .unwrap_or_default()
}

/// Gcd by evaluation at a large integer and ξ-adic reconstruction, for
/// integer coefficients. `None` when every attempt fails the division test.
fn heu_gcd(p: &MultiPoly, q: &MultiPoly, depth: usize) -> Option<MultiPoly> {
    let vars = p.vars().clone();
    if p.is_constant() || q.is_constant() {
        let (a, b) = (p.constant_value(), q.constant_value());
        let c = match (a, b) {
            (Some(a), Some(b)) => num_integer::gcd(a.as_integer()?.clone(), b.as_integer()?.clone()),
            (Some(a), None) | (None, Some(a)) => {
                let other = if p.is_constant() { q } else { p };
                other
                    .terms()
                    .iter()
                    .fold(a.as_integer()?.clone(), |g, (_, c)| num_integer::gcd(g, c.as_integer().unwrap().clone()))
            }
            (None, None) => unreachable!(),
        };
        return Some(MultiPoly::constant(&vars, Scalar::from_bigint(c)));
    }
    if depth > 12 {
        return None;
    }
    let (cp, p) = p.unit_normal();
    let (cq, q) = q.unit_normal();
    let (p, q) = (&p, &q);
    let content = num_integer::gcd(cp.as_integer()?.clone(), cq.as_integer()?.clone());
    let pv = p.used_vars();
    let qv = q.used_vars();
    let var = *pv.iter().chain(qv.iter()).max().unwrap();
    let bound = max_norm(p).min(max_norm(q));
    let mut xi: BigInt = &bound * 2 + 29;
    for _ in 0..6 {
        let x = Scalar::from_bigint(xi.clone());
        let pe = p.eval_var(var, &x);
        let qe = q.eval_var(var, &x);
        if !pe.is_zero() && !qe.is_zero() {
            if let Some(h) = heu_gcd(&pe, &qe, depth + 1) {
                let cand = xi_adic(&h, var, &xi).normalize();
                if !cand.is_zero() && p.div_exact(&cand).is_some() && q.div_exact(&cand).is_some() {
                    return Some(cand.scale(&Scalar::from_bigint(content)));
                }
            }
        }
        xi = &xi * 73794 / 27011 + 1;
    }
    None
}

/// Rebuilds a polynomial in `var` from its value at `xi`, digit by digit
/// with symmetric remainders.
fn xi_adic(h: &MultiPoly, var: usize, xi: &BigInt) -> MultiPoly {
    let half = xi / 2;
    let mut terms = Vec::new();
    for (m, c) in h.terms() {
        let mut c = c.as_integer().expect("integral").clone();
        let mut e = 0u16;
        while !c.is_zero() {
            let mut d = c.mod_floor(xi);
            if d > half {
                d -= xi;
            }
            if !d.is_zero() {
                terms.push((m.clone().with_exp(var, e), Scalar::from_bigint(d.clone())));
            }
            c = (c - d) / xi;
            e += 1;
        }
    }
    MultiPoly::from_terms(h.vars(), terms)
}

/// Gcd of a list; stops early once the running gcd is 1.
pub fn gcd_all<'a>(polys: impl IntoIterator<Item = &'a MultiPoly>) -> Option<MultiPoly> {
    let mut acc: Option<MultiPoly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.normalize(),
            Some(g) => gcd(&g, p),
        });
        if acc.as_ref().is_some_and(|g| g.is_constant()) {
            break;
        }
    }
    acc
}

pub fn lcm(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() || q.is_zero() {
        return MultiPoly::zero(p.vars());
    }
    let g = gcd(p, q);
    (p * &q.div_exact(&g).expect("gcd divides")).normalize()
}

/// Content with respect to `var`: the normalized gcd of the coefficients of
/// `p` viewed as a polynomial in `var`, together with `p / content`.
pub fn content_in(p: &MultiPoly, var: usize) -> (MultiPoly, MultiPoly) {
    if p.is_zero() {
        return (MultiPoly::one(p.vars()), p.clone());
    }
    let coeffs = p.coeffs_in(var);
    let c = gcd_all(coeffs.iter()).unwrap_or_else(|| MultiPoly::one(p.vars()));
    let pp = p.div_exact(&c).expect("content divides");
    (c, pp)
}

fn gcd_rec(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_constant() || q.is_constant() {
        return MultiPoly::one(p.vars());
    }
    let pv = p.used_vars();
    let qv = q.used_vars();
    // A variable occurring in only one argument cannot occur in the gcd.
    if let Some(&v) = pv.iter().find(|v| !qv.contains(v)) {
        let (c, _) = content_in(p, v);
        return gcd(&c, q);
    }
    if let Some(&v) = qv.iter().find(|v| !pv.contains(v)) {
        let (c, _) = content_in(q, v);
        return gcd(p, &c);
    }
    let var = *pv
        .iter()
        .min_by_key(|&&v| (p.degree(v).min(q.degree(v)), p.degree(v).max(q.degree(v)), v))
        .unwrap();

    let (cp, pp) = content_in(p, var);
    let (cq, qp) = content_in(q, var);
    let c = gcd(&cp, &cq);

    let (big, small) = if pp.degree(var) >= qp.degree(var) { (&pp, &qp) } else { (&qp, &pp) };
    let g = if big.div_exact(small).is_some() {
        small.clone()
    } else {
        let g = subresultant_prs(big, small, var);
        content_in(&g, var).1
    };
    &c * &g
}

/// Last nonzero subresultant of `a` and `b` (`deg a ≥ deg b`) as
/// polynomials in `var` over the remaining variables.
fn subresultant_prs(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let vars = a.vars().clone();
    let mut a = a.coeffs_in(var);
    let mut b = b.coeffs_in(var);
    let mut g = MultiPoly::one(&vars);
    let mut h = MultiPoly::one(&vars);
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return MultiPoly::from_coeffs(&vars, var, &b);
        }
        if r.len() == 1 {
            return MultiPoly::one(&vars);
        }
        let divisor = &g * &h.pow(delta);
        let r: Vec<MultiPoly> = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        a = std::mem::replace(&mut b, r);
        g = a.last().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => g.pow(d).div_exact(&h.pow(d - 1)).expect("subresultant h update is exact"),
        };
    }
}

/// Pseudo-remainder of dense coefficient vectors (lowest degree first).
fn pseudo_rem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<MultiPoly> = a.to_vec();
    let mut e = (a.len() - b.len() + 1) as u32;
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let s = r.len() - 1 - db;
        let top = r.len() - 1;
        for (i, ri) in r.iter_mut().enumerate().take(top) {
            let mut v = lb * &*ri;
            if i >= s {
                v = &v - &(&lr * &b[i - s]);
            }
            *ri = v;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lb.pow(e);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

/// Squarefree decomposition: `p = unit · ∏ fᵢ^mᵢ` with each `fᵢ`
/// squarefree and normalized. Factors sharing a multiplicity may appear
/// separately.
pub fn squarefree_factors(p: &MultiPoly) -> (Scalar, Vec<(MultiPoly, u32)>) {
    let (unit, q) = p.unit_normal();
    let mut out = Vec::new();
    squarefree_rec(&q, &mut out);
    out.retain(|(f, _)| !f.is_constant());
    // Absorb any scalar drift from normalization into the unit.
    let mut prod = MultiPoly::one(p.vars());
    for (f, m) in &out {
        prod = &prod * &f.pow(*m);
    }
    let unit = if p.is_zero() {
        unit
    } else {
        p.div_exact(&prod)
            .and_then(|c| c.constant_value())
            .expect("squarefree factors reproduce the input")
    };
    (unit, out)
}

fn squarefree_rec(p: &MultiPoly, out: &mut Vec<(MultiPoly, u32)>) {
    if p.is_constant() {
        return;
    }
    let var = p.used_vars()[0];
    let (c, pp) = content_in(p, var);
    yun(&pp, var, out);
    squarefree_rec(&c, out);
}

fn yun(f: &MultiPoly, var: usize, out: &mut Vec<(MultiPoly, u32)>) {
    let df = f.derivative(var);
    let a0 = gcd(f, &df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let c = df.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative(var);
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("gcd divides");
        let c = d.div_exact(&a).expect("gcd divides");
        d = &c - &b.derivative(var);
        i += 1;
    }
}

/// Squarefree part (product of the distinct squarefree factors).
pub fn squarefree_part(p: &MultiPoly) -> MultiPoly {
    let (_, fs) = squarefree_factors(p);
    let mut acc = MultiPoly::one(p.vars());
    for (f, _) in fs {
        acc = &acc * &f;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::vars::{VarTable, Vars};

    fn vars() -> Vars {
        VarTable::params(&["n", "a", "b"]).unwrap()
    }

    fn lin(v: &Vars, c: &[i64]) -> MultiPoly {
        let mut p = MultiPoly::from_int(v, c[0]);
        for (i, &x) in c[1..].iter().enumerate() {
            p = &p + &MultiPoly::var(v, i).scale(&Scalar::from_int(x));
        }
        p
    }

    #[test]
    fn simple_univariate_gcds() {
        let v = vars();
        let n = MultiPoly::var(&v, 0);
        let one = MultiPoly::one(&v);
        let p = &(&n * &n) - &one;
        assert_eq!(gcd(&p, &(&n + &one)), &n + &one);
        let q = &lin(&v, &[5, 4]) * &lin(&v, &[3, 4]);
        assert_eq!(gcd(&q, &lin(&v, &[5, 4])), lin(&v, &[5, 4]));
        assert_eq!(gcd(&q, &MultiPoly::zero(&v)), q);
    }

    #[test]
    fn multivariate_common_factor() {
        let v = vars();
        let f = lin(&v, &[1, 2, 3, -1]);
        let g = lin(&v, &[-2, 1, 0, 5]);
        let h = &lin(&v, &[0, 1, 1, 1]) * &lin(&v, &[7, 0, 1, 0]);
        let p = &(&f * &f) * &h;
        let q = &(&g * &f) * &h;
        let expect = (&f * &h).normalize();
        assert_eq!(gcd(&p, &q), expect);
    }

    #[test]
    fn content_with_respect_to_variable() {
        let v = VarTable::params(&["k", "a"]).unwrap();
        let k = MultiPoly::var(&v, 0);
        let a = MultiPoly::var(&v, 1);
        let one = MultiPoly::one(&v);
        let p = &(&(&a - &one) * &k) + &(&a - &one);
        let (c, pp) = content_in(&p, 0);
        assert_eq!(c, &a - &one);
        assert_eq!(pp, &k + &one);
        let q = &(&k * &k) + &(&a * &k);
        let (c, pp) = content_in(&q, 0);
        assert!(c.is_one());
        assert_eq!(pp, q);
    }

    #[test]
    fn squarefree_decomposition_reconstructs() {
        let v = vars();
        let f = lin(&v, &[1, 2, 3, -1]);
        let g = lin(&v, &[-2, 1, 0, 5]);
        let p = (&(&f.pow(3) * &g.pow(2)) * &lin(&v, &[3, 0, 1, 0])).scale(&Scalar::from_int(-12));
        let (u, fs) = squarefree_factors(&p);
        let mut prod = MultiPoly::constant(&v, u);
        for (x, m) in &fs {
            prod = &prod * &x.pow(*m);
        }
        assert_eq!(prod, p);
        assert!(fs.iter().any(|(x, m)| *m == 3 && *x == f.normalize()));
        assert!(fs.iter().any(|(x, m)| *m == 2 && *x == g.normalize()));
    }
}
