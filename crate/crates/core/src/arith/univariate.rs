//! Dense univariate polynomials over ℚ: resultants, interpolation and
//! p-adic integer root finding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::MultiPoly;

/// Coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<BigRational>);

impl UPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn lc(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Univariate view of a polynomial that uses no variable but `var` and
    /// has rational coefficients.
    pub fn from_multi(p: &MultiPoly, var: usize) -> Option<UPoly> {
        let mut c = vec![BigRational::zero(); (p.degree(var) + 1).max(0) as usize];
        for (m, x) in p.terms() {
            if m.degree() != m.exp(var) as u32 {
                return None;
            }
            c[m.exp(var) as usize] = x.as_rational()?.clone();
        }
        Some(UPoly::new(c))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        UPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }

    pub fn scale(&self, s: &BigRational) -> UPoly {
        UPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero());
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let inv = d.lc().recip();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[i + j] -= &c * dj;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.degree() <= 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// `p(x + h)`.
    pub fn shift(&self, h: &BigRational) -> UPoly {
        let lin = UPoly::new(vec![h.clone(), BigRational::one()]);
        let mut acc = UPoly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(&lin).add(&UPoly::new(vec![c.clone()]));
        }
        acc
    }

    /// Primitive integer multiple (positive leading coefficient).
    pub fn to_integer(&self) -> Vec<BigInt> {
        let mut den = BigInt::one();
        for c in &self.0 {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * &den).to_integer()).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        if g.is_zero() {
            return ints;
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        ints.into_iter().map(|x| x / &g).collect()
    }

    /// Resultant with respect to the single variable.
    pub fn resultant(&self, o: &UPoly) -> BigRational {
        if self.is_zero() || o.is_zero() {
            return BigRational::zero();
        }
        let (m, n) = (self.degree(), o.degree());
        if n == 0 {
            return pow(&o.lc(), m as u32);
        }
        if m == 0 {
            return pow(&self.lc(), n as u32);
        }
        let r = self.div_rem(o).1;
        if r.is_zero() {
            return BigRational::zero();
        }
        let s = r.degree();
        let sign = if (m * n) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
        sign * pow(&o.lc(), (m - s) as u32) * o.resultant(&r)
    }

    /// Newton interpolation through `(x_i, y_i)`.
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> UPoly {
        let n = points.len();
        let mut coef: Vec<BigRational> = points.iter().map(|p| p.1.clone()).collect();
        for j in 1..n {
            for i in (j..n).rev() {
                coef[i] = (&coef[i] - &coef[i - 1]) / (&points[i].0 - &points[i - j].0);
            }
        }
        let mut acc = UPoly::zero();
        for i in (0..n).rev() {
            let lin = UPoly::new(vec![-points[i].0.clone(), BigRational::one()]);
            acc = acc.mul(&lin).add(&UPoly::new(vec![coef[i].clone()]));
        }
        acc
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.degree() <= 0 {
            return Vec::new();
        }
        let f = self.to_integer();
        let mut out = Vec::new();
        let mut lo = 0;
        while f[lo].is_zero() {
            lo += 1;
        }
        if lo > 0 {
            out.push(BigRational::zero());
        }
        let f = &f[lo..];
        let n = f.len() - 1;
        if n == 0 {
            return out;
        }
        // y = lc·x turns f into a monic integer polynomial.
        let lc = f[n].clone();
        // g[i] = f[i]·lc^(n-1-i) for i < n, g[n] = 1.
        let mut g = vec![BigInt::zero(); n + 1];
        g[n] = BigInt::one();
        let mut p = BigInt::one();
        for i in (0..n).rev() {
            g[i] = &f[i] * &p;
            p *= &lc;
        }
        for r in integer_roots(&g) {
            out.push(BigRational::new(r, lc.clone()));
        }
        out.sort();
        out.dedup();
        out
    }

    /// Distinct nonnegative integer roots, ascending.
    pub fn nonnegative_integer_roots(&self) -> Vec<BigInt> {
        if self.degree() <= 0 {
            return Vec::new();
        }
        let mut r: Vec<BigInt> = integer_roots(&self.to_integer()).into_iter().filter(|x| !x.is_negative()).collect();
        r.sort();
        r
    }
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

fn eval_int(f: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn eval_mod(f: &[BigInt], x: u64, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut acc: u64 = 0;
    for c in f.iter().rev() {
        let cm = c.mod_floor(&pb).to_u64().unwrap();
        acc = ((acc as u128 * x as u128 + cm as u128) % p as u128) as u64;
    }
    acc
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Distinct integer roots of an integer polynomial (lowest degree first),
/// by Hensel lifting the simple roots modulo a prime at which every root
/// is simple.
pub fn integer_roots(f: &[BigInt]) -> Vec<BigInt> {
    let f: Vec<BigInt> = {
        let mut v = f.to_vec();
        while v.last().is_some_and(|x| x.is_zero()) {
            v.pop();
        }
        v
    };
    if f.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut lo = 0;
    while f[lo].is_zero() {
        lo += 1;
    }
    if lo > 0 {
        out.push(BigInt::zero());
    }
    let f = &f[lo..];
    if f.len() == 1 {
        return out;
    }
    let q: Vec<BigRational> = f.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let sf = UPoly::new(q).squarefree_part().to_integer();
    let n = sf.len() - 1;
    if n == 1 {
        let (a, b) = (&sf[1], &sf[0]);
        if (b % a).is_zero() {
            out.push(-(b / a));
        }
        return out;
    }
    let df: Vec<BigInt> = sf.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    // Cauchy bound on root size.
    let lc = sf[n].abs();
    let maxc = sf[..n].iter().map(|c| c.abs()).max().unwrap();
    let bound = maxc / &lc + 2;
    let target = &bound * 2 + 1;

    let mut chosen = None;
    for p in small_primes().take(200) {
        if (&lc % p).is_zero() {
            continue;
        }
        let roots: Vec<u64> = (0..p).filter(|&x| eval_mod(&sf, x, p) == 0).collect();
        if roots.iter().all(|&r| eval_mod(&df, r, p) != 0) {
            chosen = Some((p, roots));
            break;
        }
    }
    let (p, roots) = chosen.expect("a prime with only simple roots exists for a squarefree polynomial");
    let pb = BigInt::from(p);
    for r0 in roots {
        let r0b = BigInt::from(r0);
        let inv = eval_int(&df, &r0b)
            .mod_floor(&pb)
            .extended_gcd(&pb)
            .x
            .mod_floor(&pb);
        let mut r = r0b;
        let mut pe = pb.clone();
        while pe < target {
            let v = eval_int(&sf, &r);
            debug_assert!((&v % &pe).is_zero());
            let t = (-(v / &pe) * &inv).mod_floor(&pb);
            r += t * &pe;
            pe *= &pb;
        }
        let half = &pe / 2;
        let cand = if r > half { r - &pe } else { r };
        if cand.abs() <= bound && eval_int(&sf, &cand).is_zero() {
            out.push(cand);
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn roots_of_products() {
        // (x-3)(x+5)(2x-7)(x^2+1)
        let f = UPoly::from_ints(&[-3, 1])
            .mul(&UPoly::from_ints(&[5, 1]))
            .mul(&UPoly::from_ints(&[-7, 2]))
            .mul(&UPoly::from_ints(&[1, 0, 1]));
        assert_eq!(f.rational_roots(), vec![q(-5, 1), q(3, 1), q(7, 2)]);
        assert_eq!(f.nonnegative_integer_roots(), vec![BigInt::from(3)]);
        let g = UPoly::from_ints(&[0, 0, -1000, 1]);
        assert_eq!(g.rational_roots(), vec![q(0, 1), q(1000, 1)]);
        let h = UPoly::from_ints(&[9, -6, 1]);
        assert_eq!(h.rational_roots(), vec![q(3, 1)]);
        assert!(UPoly::from_ints(&[-2, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn resultant_detects_common_roots() {
        let a = UPoly::from_ints(&[-1, 0, 1]);
        let b = UPoly::from_ints(&[1, 1]);
        assert!(a.resultant(&b).is_zero());
        // Res(x^2+1, x-2) = 5
        assert_eq!(UPoly::from_ints(&[1, 0, 1]).resultant(&UPoly::from_ints(&[-2, 1])), q(5, 1));
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let f = UPoly::from_ints(&[4, -1, 0, 3]);
        let pts: Vec<_> = (0..4).map(|i| (q(i, 1), f.eval(&q(i, 1)))).collect();
        assert_eq!(UPoly::interpolate(&pts), f);
    }
}
