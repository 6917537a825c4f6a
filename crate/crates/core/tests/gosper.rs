use hypersum::arith::{MultiPoly, RatFunc, Scalar, VarTable, Vars};
use hypersum::gosper::{certificate_residual, gosper_key_solve, gosper_normal_form, gosper_solve, shift_candidates};
use hypersum::termdsl::{parse_ratfunc, parse_term_with};
use proptest::prelude::*;

fn kvars() -> Vars {
    VarTable::problem("k", None, &[] as &[&str]).unwrap()
}

fn rf(text: &str, vars: &Vars) -> RatFunc {
    parse_ratfunc(text, vars).unwrap()
}

fn poly(text: &str, vars: &Vars) -> MultiPoly {
    let r = rf(text, vars);
    assert!(r.is_polynomial());
    r.num().clone()
}

#[test]
fn normal_form_examples() {
    let v = kvars();
    let f = gosper_normal_form(&rf("k+1", &v), 0).unwrap();
    assert!(f.z.is_one() && f.p.is_one() && f.r.is_one());
    assert_eq!(f.q, poly("k+1", &v));

    let f = gosper_normal_form(&rf("2", &v), 0).unwrap();
    assert_eq!(f.z, rf("2", &v));
    assert!(f.p.is_one() && f.q.is_one() && f.r.is_one());

    for text in ["k/(k+2)", "(k+1)^2/k", "(k+3)*(2*k+1)/((k+7)*(k+2))", "3*(k+1/2)/(k+5)^2"] {
        let r = rf(text, &v);
        let f = gosper_normal_form(&r, 0).unwrap();
        assert_eq!(f.ratio(), r, "{text}");
        for h in shift_candidates(&f.q, &f.r, 0).into_iter().filter(|&h| h >= 1) {
            let g = hypersum::arith::gcd(&f.q, &f.r.shift_int(0, h));
            assert!(g.degree(0) <= 0, "{text}: shift {h}");
        }
    }
}

#[test]
fn normal_form_absorbs_shifted_factors() {
    let v = kvars();
    // (k+3)/(k+1): q(k)=k+3 and r(k+1)=k+1 share a shift of 2.
    let f = gosper_normal_form(&rf("(k+3)/(k+1)", &v), 0).unwrap();
    assert!(f.q.is_one() && f.r.is_one());
    assert_eq!(f.p, poly("(k+1)*(k+2)", &v));
}

#[test]
fn solve_examples() {
    let v = kvars();
    let cert = gosper_solve(&rf("2", &v), 0).unwrap().unwrap();
    assert!(cert.is_one());

    let ratio = rf("(k+1)^2/k", &v);
    let cert = gosper_solve(&ratio, 0).unwrap().unwrap();
    assert!(certificate_residual(&ratio, &cert, 0).is_zero());
    assert_eq!(cert, rf("1/k", &v));
    // G = R·t = (k-1)! ... telescoped: Σ_{k=1}^{10} k·k! = 11! - 1
    let t = parse_term_with("k*k!", &v).unwrap();
    let mut sum = Scalar::zero();
    for k in 1..=10 {
        sum = &sum + &t.eval(&[Some(Scalar::from_int(k))]).unwrap();
    }
    let g = |k: i64| &cert.eval(&[Some(Scalar::from_int(k))]).unwrap() * &t.eval(&[Some(Scalar::from_int(k))]).unwrap();
    assert_eq!(sum, &g(11) - &g(1));
    assert_eq!(sum, Scalar::from_int(39916800 - 1));

    assert!(gosper_solve(&rf("k/(k+1)", &v), 0).unwrap().is_none());
}

#[test]
fn key_equation_examples() {
    let v = kvars();
    let f = gosper_key_solve(&MultiPoly::one(&v), &MultiPoly::one(&v), &[MultiPoly::one(&v)], 0).unwrap();
    assert_eq!(f.f.try_div(&RatFunc::from_poly(f.sigma[0].clone())).unwrap(), rf("k", &v));

    // (k+1)f(k+1) - f(k) = k+1 has no polynomial solution.
    assert!(gosper_key_solve(&poly("k+1", &v), &MultiPoly::one(&v), &[poly("k+1", &v)], 0).is_none());
}

#[test]
fn parameterized_first_example() {
    let vars = VarTable::problem("k", Some("n"), &[] as &[&str]).unwrap();
    let (n, k) = (vars.index("n").unwrap(), vars.index("k").unwrap());
    let t = parse_term_with("hyperterm([1/2,-2*n],[2*n+3/2],3+2*sqrt(2),k)", &vars).unwrap();
    let rn = t.shift_ratio(n).unwrap();
    let rk = t.shift_ratio(k).unwrap();
    // t(n+1,k)/t(n,k) = N/D; σ0·t(n,k) + σ1·t(n+1,k) = (σ0·D + σ1·N)·t(n,k)/D
    let inner = rk
        .try_div(&RatFunc::new(rn.den().shift_int(k, 1), rn.den().clone()).unwrap())
        .unwrap();
    let form = gosper_normal_form(&inner, k).unwrap();
    let (q, r) = form.scaled_qr();
    let ps = [rn.den() * &form.p, rn.num() * &form.p];
    let sol = gosper_key_solve(&q, &r, &ps, k).unwrap();
    let ratio = RatFunc::new(-&sol.sigma[0], sol.sigma[1].clone()).unwrap();
    assert_eq!(ratio, rf("4*(4*n+5)*(4*n+3)/((8*n+9)*(8*n+7))", &vars));
}

fn poly_from(coeffs: &[i64], vars: &Vars) -> MultiPoly {
    let k = MultiPoly::var(vars, 0);
    let mut acc = MultiPoly::zero(vars);
    for c in coeffs.iter().rev() {
        acc = &(&acc * &k) + &MultiPoly::from_int(vars, *c);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn summable_family(coeffs in proptest::collection::vec(-9i64..=9, 1..5), base in 2i64..5) {
        let v = kvars();
        let p = poly_from(&coeffs, &v);
        prop_assume!(!p.is_zero());
        // t(k) = G(k+1) - G(k) with G = P(k)·base^k, so t = (base·P(k+1) - P(k))·base^k.
        let b = Scalar::from_int(base);
        let s = &p.shift_int(0, 1).scale(&b) - &p;
        prop_assume!(!s.is_zero());
        let ratio = &RatFunc::new(s.shift_int(0, 1), s.clone()).unwrap() * &RatFunc::constant(&v, b);
        let cert = gosper_solve(&ratio, 0).unwrap();
        prop_assert!(cert.is_some());
        prop_assert!(certificate_residual(&ratio, &cert.unwrap(), 0).is_zero());
    }
}

#[test]
fn unsummable_family() {
    let v = kvars();
    let mut cases = Vec::new();
    for m in 1..=10 {
        // 1/(k+m)
        cases.push(format!("(k+{m})/(k+{m}+1)"));
    }
    for m in 1..=5 {
        // m^k/k!
        cases.push(format!("{m}/(k+1)"));
        // k!·m^k
        cases.push(format!("{m}*(k+1)"));
    }
    assert_eq!(cases.len(), 20);
    for c in cases {
        assert!(gosper_solve(&rf(&c, &v), 0).unwrap().is_none(), "{c}");
    }
}
