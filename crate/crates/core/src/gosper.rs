//! Gosper's algorithm: normal form, degree bound and the key equation
//! `q(k)·f(k+1) - r(k)·f(k) = p(k)`, with optional unknowns entering `p`
//! linearly (the parameterized form used by Zeilberger's algorithm).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::arith::linsolve::{nullspace, primitive_vector};
use crate::arith::univariate::UPoly;
use crate::arith::{content_in, gcd, MultiPoly, RatFunc, Scalar, Vars};
use crate::Error;

/// `ratio(k) = z · p(k+1)/p(k) · q(k)/r(k+1)` with `gcd(q(k), r(k+j)) = 1`
/// for every integer `j ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GosperForm {
    pub var: usize,
    pub z: RatFunc,
    pub p: MultiPoly,
    pub q: MultiPoly,
    pub r: MultiPoly,
}

impl GosperForm {
    /// Reassembles the ratio.
    pub fn ratio(&self) -> RatFunc {
        let k = self.var;
        let num = &(&self.p.shift_int(k, 1) * &self.q) * self.z.num();
        let den = &(&self.p * &self.r.shift_int(k, 1)) * self.z.den();
        RatFunc::new(num, den).expect("nonzero denominator")
    }

    /// `z·q` and `r` with the constant folded in: `(z_num·q, z_den·r)`.
    pub fn scaled_qr(&self) -> (MultiPoly, MultiPoly) {
        (&self.q * self.z.num(), &self.r * self.z.den())
    }
}

fn split_unit(p: &MultiPoly) -> (Scalar, MultiPoly) {
    p.unit_normal()
}

pub fn gosper_normal_form(ratio: &RatFunc, var: usize) -> Result<GosperForm, Error> {
    if ratio.is_zero() {
        return Err(Error::Invalid("zero term ratio".into()));
    }
    let vars = ratio.vars().clone();
    let (cn, qn) = content_in(ratio.num(), var);
    let (cd, rd) = content_in(ratio.den(), var);
    let (un, mut q) = split_unit(&qn);
    let (ud, rd) = split_unit(&rd);
    let mut r = rd.shift_int(var, -1);
    let z = RatFunc::new(cn.scale(&un), cd.scale(&ud))?;
    let mut p = MultiPoly::one(&vars);
    for h in shift_candidates(&q, &r, var) {
        if h < 1 {
            continue;
        }
        let g = gcd(&q, &r.shift_int(var, h));
        if g.degree(var) <= 0 {
            continue;
        }
        q = q.div_exact(&g).expect("gcd divides");
        r = r.div_exact(&g.shift_int(var, -h)).expect("shifted gcd divides");
        for i in 1..h {
            p = &p * &g.shift_int(var, -i);
        }
    }
    let (u1, p) = split_unit(&p);
    let (u2, q) = split_unit(&q);
    let (u3, r) = split_unit(&r);
    // p is determined up to a constant; its unit cancels in p(k+1)/p(k).
    let _ = u1;
    let z = z.scale(&(&u2 / &u3));
    Ok(GosperForm { var, z, p, q, r })
}

/// Norm down to rational coefficients: `p·conj(p)` when `p` has radicals.
fn rational_norm(p: &MultiPoly) -> MultiPoly {
    if p.is_rational() {
        p.clone()
    } else {
        p * &p.conj()
    }
}

/// Values for every variable but `var` at which the leading coefficients
/// in `var` of all `polys` stay nonzero.
fn specialization(vars: &Vars, var: usize, polys: &[&MultiPoly]) -> Vec<Option<Scalar>> {
    let primes = [
        101i64, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197,
    ];
    for attempt in 0.. {
        let vals: Vec<Option<Scalar>> = (0..vars.len())
            .map(|i| {
                if i == var {
                    None
                } else {
                    let a = primes[(i * 7 + attempt * 3) % primes.len()];
                    let b = primes[(i * 11 + attempt * 5 + 1) % primes.len()] + attempt as i64;
                    Some(Scalar::from_frac(a + 17 * i as i64, b))
                }
            })
            .collect();
        let ok = polys.iter().all(|p| !p.lc_in(var).eval_partial(&vals).is_zero());
        if ok {
            return vals;
        }
    }
    unreachable!()
}

/// Nonnegative integers `h` for which `q(k)` and `r(k+h)` may share a
/// factor, ascending (a superset, from a specialized resultant in `h`).
pub fn shift_candidates(q: &MultiPoly, r: &MultiPoly, var: usize) -> Vec<i64> {
    if q.degree(var) <= 0 || r.degree(var) <= 0 {
        return Vec::new();
    }
    let (qq, rr) = (rational_norm(q), rational_norm(r));
    let vals = specialization(q.vars(), var, &[&qq, &rr]);
    let qu = UPoly::from_multi(&qq.eval_partial(&vals), var).expect("univariate after specialization");
    let ru = UPoly::from_multi(&rr.eval_partial(&vals), var).expect("univariate after specialization");
    let deg = (qu.degree() * ru.degree()) as usize;
    let points: Vec<(BigRational, BigRational)> = (0..=deg)
        .map(|h| {
            let h = BigRational::from_integer(BigInt::from(h));
            let v = qu.resultant(&ru.shift(&h));
            (h, v)
        })
        .collect();
    let res = UPoly::interpolate(&points);
    if res.is_zero() {
        return Vec::new();
    }
    res.nonnegative_integer_roots()
        .into_iter()
        .filter_map(|h| i64::try_from(h).ok())
        .collect()
}

/// Upper bound for `deg f` in `q·f(k+1) - r·f(k) = p`, or `None` when no
/// polynomial solution is possible.
pub fn degree_bound(q: &MultiPoly, r: &MultiPoly, deg_p: i64, var: usize) -> Option<i64> {
    let plus = q + r;
    let minus = q - r;
    let (dp, dm) = (plus.degree(var), minus.degree(var));
    let mut best: Option<i64> = None;
    if dp <= dm {
        if deg_p >= 0 {
            best = Some(deg_p - dm);
        }
    } else {
        if deg_p >= 0 {
            best = Some(deg_p - dp + 1);
        }
        let a = plus.coeff_of(var, dp as u16);
        let b = if dp >= 1 { minus.coeff_of(var, (dp - 1) as u16) } else { MultiPoly::zero(q.vars()) };
        let cand = RatFunc::new(b.scale(&Scalar::from_int(-2)), a).ok().and_then(|x| x.constant_value());
        if let Some(c) = cand.as_ref().and_then(|c| c.as_rational()) {
            if c.is_integer() && !c.is_negative() {
                let c = i64::try_from(c.to_integer()).ok()?;
                best = Some(best.map_or(c, |b| b.max(c)));
            }
        }
    }
    best.filter(|&d| d >= 0)
}

/// Solution of the key equation: `f` and the multipliers of the
/// right-hand sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeySolution {
    pub f: RatFunc,
    pub sigma: Vec<MultiPoly>,
}

/// Solves `q(k)·f(k+1) - r(k)·f(k) = Σ σ_i·ps[i](k)` for a polynomial `f`
/// in `k` (coefficients in the other variables) and `σ` not all zero.
/// Among several solutions, the one whose `σ` has the smallest degree is
/// taken.
pub fn gosper_key_solve(q: &MultiPoly, r: &MultiPoly, ps: &[MultiPoly], var: usize) -> Option<KeySolution> {
    let vars = q.vars().clone();
    let deg_p = ps.iter().map(|p| p.degree(var)).max().unwrap_or(-1);
    let bound = degree_bound(q, r, deg_p, var).unwrap_or(-1);
    let nf = (bound + 1) as usize;
    let mut cols: Vec<MultiPoly> = Vec::with_capacity(nf + ps.len());
    let kpoly = MultiPoly::var(&vars, var);
    let k1 = &kpoly + &MultiPoly::one(&vars);
    for m in (0..nf).rev() {
        let m = m as u32;
        cols.push(&(q * &k1.pow(m)) - &(r * &kpoly.pow(m)));
    }
    for p in ps {
        cols.push(-p);
    }
    let col_coeffs: Vec<Vec<MultiPoly>> = cols.iter().map(|c| c.coeffs_in(var)).collect();
    let nrows = col_coeffs.iter().map(|c| c.len()).max().unwrap_or(0);
    let zero = MultiPoly::zero(&vars);
    let rows: Vec<Vec<MultiPoly>> = (0..nrows)
        .map(|e| col_coeffs.iter().map(|c| c.get(e).cloned().unwrap_or_else(|| zero.clone())).collect())
        .filter(|row: &Vec<MultiPoly>| row.iter().any(|x| !x.is_zero()))
        .collect();
    let ncols = cols.len();
    let basis = nullspace(rows, ncols, &vars);
    let mut best: Option<(i64, KeySolution)> = None;
    for v in basis {
        if v[nf..].iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut w = primitive_vector(&v);
        let sigma = w.split_off(nf);
        let mut fnum = MultiPoly::zero(&vars);
        for (i, m) in (0..nf).rev().enumerate() {
            if !w[i].is_zero() {
                fnum = &fnum + &(&w[i] * &kpoly.pow(m as u32));
            }
        }
        let f = RatFunc::from_poly(fnum);
        let deg = sigma.iter().map(|s| s.total_degree()).max().unwrap_or(0);
        if best.as_ref().is_none_or(|(d, _)| deg < *d) {
            best = Some((deg, KeySolution { f, sigma }));
        }
    }
    best.map(|(_, s)| s)
}

/// Antidifference certificate `R` with `R(k+1)·ratio(k) - R(k) = 1`, or
/// `None` when the term is not Gosper-summable.
pub fn gosper_solve(ratio: &RatFunc, var: usize) -> Result<Option<RatFunc>, Error> {
    let form = gosper_normal_form(ratio, var)?;
    let (q, r) = form.scaled_qr();
    let Some(sol) = gosper_key_solve(&q, &r, std::slice::from_ref(&form.p), var) else {
        return Ok(None);
    };
    // σ is a nonzero constant in k; divide it out.
    let s = RatFunc::from_poly(sol.sigma[0].clone());
    let f = sol.f.try_div(&s)?;
    let cert = &(&RatFunc::from_poly(r) * &f) / &RatFunc::from_poly(form.p.clone());
    Ok(Some(cert))
}

/// `R(k+1)·ratio(k) - R(k) - 1`; zero exactly when `R` is a certificate.
pub fn certificate_residual(ratio: &RatFunc, cert: &RatFunc, var: usize) -> RatFunc {
    let one = RatFunc::one(ratio.vars());
    &(&(&cert.shift_int(var, 1) * ratio) - cert) - &one
}
