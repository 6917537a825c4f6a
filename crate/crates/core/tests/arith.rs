use hypersum::arith::{gcd, lcm, Monomial, MultiPoly, RatFunc, Scalar, VarTable, Vars};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn vars() -> Vars {
    VarTable::params(&["k", "n", "a"]).unwrap()
}

fn build(vars: &Vars, terms: &[(u16, u16, u16, i64)]) -> MultiPoly {
    let t = terms
        .iter()
        .map(|&(e0, e1, e2, c)| {
            let m = Monomial::one().with_exp(0, e0).with_exp(1, e1).with_exp(2, e2);
            (m, Scalar::from_int(c))
        })
        .collect();
    MultiPoly::from_terms(vars, t)
}

fn poly() -> impl Strategy<Value = Vec<(u16, u16, u16, i64)>> {
    proptest::collection::vec((0u16..3, 0u16..3, 0u16..2, -5i64..=5), 1..5)
}

fn quad() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5)
        .prop_map(|(a, b, c, d)| Scalar::quad(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()), &BigInt::from(2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ring_and_gcd(p in poly(), q in poly(), r in poly()) {
        let v = vars();
        let (p, q, r) = (build(&v, &p), build(&v, &q), build(&v, &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p + &q) - &q, p.clone());
        if !q.is_zero() {
            prop_assert_eq!((&p * &q).div_exact(&q), Some(p.clone()));
        }
        prop_assume!(!p.is_zero() && !q.is_zero() && !r.is_zero());
        let (pr, qr) = (&p * &r, &q * &r);
        let g = gcd(&pr, &qr);
        prop_assert!(pr.div_exact(&g).is_some());
        prop_assert!(qr.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&r.normalize()).is_some(), "gcd {} misses common factor {}", g, r);
        // Cofactors are coprime.
        let (cp, cq) = (pr.div_exact(&g).unwrap(), qr.div_exact(&g).unwrap());
        prop_assert!(gcd(&cp, &cq).is_constant());
        let l = lcm(&pr, &qr);
        prop_assert!(l.div_exact(&pr).is_some() && l.div_exact(&qr).is_some());
    }

    #[test]
    fn rational_functions(p in poly(), q in poly(), r in poly()) {
        let v = vars();
        let (p, q, r) = (build(&v, &p), build(&v, &q), build(&v, &r));
        prop_assume!(!q.is_zero() && !r.is_zero());
        let x = RatFunc::new(p.clone(), q.clone()).unwrap();
        let y = RatFunc::new(r.clone(), q.clone()).unwrap();
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x * &RatFunc::new(q.clone(), r.clone()).unwrap(), RatFunc::new(p.clone(), r.clone()).unwrap());
        prop_assert_eq!(x.shift_int(0, 3).shift_int(0, -3), x);
    }

    #[test]
    fn quadratic_scalars(x in quad(), y in quad(), z in quad()) {
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x * &x.conj()) - &Scalar::Rat(x.norm()), Scalar::zero());
        if !x.is_zero() {
            prop_assert_eq!(&(&y / &x) * &x, y);
        }
    }
}

#[test]
fn gcd_examples() {
    let v = vars();
    let k = MultiPoly::var(&v, 0);
    let a = MultiPoly::var(&v, 2);
    let one = MultiPoly::one(&v);
    let f = &(&k + &a) * &(&k - &one);
    let g = &(&k + &a) * &(&k + &one);
    assert_eq!(gcd(&f, &g), (&k + &a).normalize());
    assert!(gcd(&(&k + &one), &(&k - &one)).is_constant());
}
