use hypersum::arith::{RatFunc, Scalar, VarTable, Vars};
use hypersum::termdsl::{cauchy_summand, parse_hyperterm, parse_ratfunc, parse_recurrence, parse_term, parse_term_with, Affine, TermExpr};
use hypersum::Error;

fn rf(text: &str, vars: &Vars) -> RatFunc {
    parse_ratfunc(text, vars).unwrap()
}

fn at(vars: &Vars, pairs: &[(&str, Scalar)]) -> Vec<Option<Scalar>> {
    let mut v = vec![None; vars.len()];
    for (n, s) in pairs {
        v[vars.index(n).unwrap()] = Some(s.clone());
    }
    v
}

#[test]
fn first_example_ratio() {
    let t = parse_term("hyperterm([1/2,-2*n],[2*n+3/2],3+2*sqrt(2),k)", "k", Some("n")).unwrap();
    let vars = t.vars().clone();
    let k = vars.index("k").unwrap();
    let want = rf("(k+1/2)*(k-2*n)*(3+2*sqrt(2))/((k+2*n+3/2)*(k+1))", &vars);
    assert_eq!(t.shift_ratio(k).unwrap(), want);
}

#[test]
fn binomial_form_gives_same_ratio() {
    let b = parse_term(
        "(-1)^k*binomial(2*n,k)*binomial(2*n+k+1,k)/binomial(4*n+2*k+2,2*k)*(3+2*sqrt(2))^k",
        "k",
        Some("n"),
    )
    .unwrap();
    let vars = b.vars().clone();
    let h = parse_term_with("hyperterm([1/2,-2*n],[2*n+3/2],3+2*sqrt(2),k)", &vars).unwrap();
    let k = vars.index("k").unwrap();
    let n = vars.index("n").unwrap();
    assert_eq!(b.shift_ratio(k).unwrap(), h.shift_ratio(k).unwrap());
    assert_eq!(b.shift_ratio(n).unwrap(), h.shift_ratio(n).unwrap());
}

#[test]
fn factorial_ratio() {
    let t = parse_term("k!", "k", None).unwrap();
    assert_eq!(t.shift_ratio(0).unwrap(), rf("k+1", t.vars()));
    let t = parse_term("factorial(k)", "k", None).unwrap();
    assert_eq!(t.shift_ratio(0).unwrap(), rf("k+1", t.vars()));
}

#[test]
fn poch_with_double_length() {
    let t = parse_term("poch(a,2*k-j)", "j", Some("k")).unwrap();
    let vars = t.vars().clone();
    let k = vars.index("k").unwrap();
    let r = t.shift_ratio(k).unwrap();
    assert_eq!(r, rf("(a+2*k-j)*(a+2*k-j+1)", &vars));
    let p = at(&vars, &[("a", Scalar::from_frac(1, 3)), ("k", Scalar::from_int(2)), ("j", Scalar::from_int(1))]);
    let p1 = at(&vars, &[("a", Scalar::from_frac(1, 3)), ("k", Scalar::from_int(3)), ("j", Scalar::from_int(1))]);
    let direct = &t.eval(&p1).unwrap() / &t.eval(&p).unwrap();
    assert_eq!(r.eval(&p).unwrap(), direct);
}

#[test]
fn evaluation_examples() {
    let t = parse_term("poch(a,k)", "k", None).unwrap();
    let v = t.vars().clone();
    assert_eq!(t.eval(&at(&v, &[("a", Scalar::from_frac(3, 4)), ("k", Scalar::from_int(2))])).unwrap(), Scalar::from_frac(21, 16));

    // (-1)·C(2,1)·C(4,1)/C(8,2) = -2/7
    let t = parse_term("(-1)^k*binomial(2*n,k)*binomial(2*n+k+1,k)/binomial(4*n+2*k+2,2*k)*(3+2*sqrt(2))^k", "k", Some("n")).unwrap();
    let v = t.vars().clone();
    let val = t.eval(&at(&v, &[("n", Scalar::from_int(1)), ("k", Scalar::from_int(1))])).unwrap();
    let want = Scalar::from_frac(-2, 7).try_mul(&Scalar::quad(num_rational::BigRational::from_integer(3.into()), num_rational::BigRational::from_integer(2.into()), &2.into())).unwrap();
    assert_eq!(val, want);

    let e = TermExpr::one(&v);
    assert_eq!(e.eval(&vec![None; v.len()]).unwrap(), Scalar::one());
}

#[test]
fn evaluation_errors() {
    let t = parse_term("1/factorial(k-3)", "k", None).unwrap();
    let v = t.vars().clone();
    assert!(matches!(t.eval(&at(&v, &[("k", Scalar::from_int(1))])), Err(Error::Eval { .. })));
    let t = parse_term("1/poch(a,k)", "k", None).unwrap();
    let v = t.vars().clone();
    let r = t.eval(&at(&v, &[("a", Scalar::from_int(-1)), ("k", Scalar::from_int(3))]));
    assert!(matches!(r, Err(Error::Eval { .. }) | Err(Error::DivisionByZero)));
}

#[test]
fn non_integer_shift_is_rejected() {
    let t = parse_term("poch(a,k/2)", "k", None).unwrap();
    let k = t.vars().index("k").unwrap();
    assert!(matches!(t.shift_ratio(k), Err(Error::NotHypergeometric { .. })));
}

#[test]
fn hyperterm_expansions() {
    let vars = VarTable::problem("k", None, &["a", "b", "x"]).unwrap();
    let h = parse_hyperterm("hyperterm([a],[b],x,k)", &vars).unwrap();
    assert_eq!(h.to_termexpr().unwrap().to_string(), "poch(a,k)*x^(k)/poch(b,k)/factorial(k)");
    let h = parse_hyperterm("hyperterm([],[],x,k)", &vars).unwrap();
    assert_eq!(h.to_termexpr().unwrap().to_string(), "x^(k)/factorial(k)");
    let h = parse_hyperterm("hyperterm([1],[],x,k)", &vars).unwrap();
    assert_eq!(h.to_termexpr().unwrap().to_string(), "x^(k)");
}

#[test]
fn cauchy_products() {
    let vars = VarTable::problem("j", Some("k"), &["a", "b", "x", "y"]).unwrap();
    let (j, k) = (vars.index("j").unwrap(), vars.index("k").unwrap());
    let f = parse_term_with("x^j/j!", &vars).unwrap();
    let g = parse_term_with("y^j/j!", &vars).unwrap();
    let c = cauchy_summand(&f, &g, j, k, false).unwrap();
    let want = parse_term_with("x^j*y^(k-j)/(j!*(k-j)!)", &vars).unwrap();
    assert_eq!(c.shift_ratio(j).unwrap(), want.shift_ratio(j).unwrap());
    assert_eq!(c.shift_ratio(k).unwrap(), want.shift_ratio(k).unwrap());

    let f = parse_term_with("hyperterm([a],[b],x,j)", &vars).unwrap();
    let g = parse_term_with("hyperterm([a],[b],-x,j)", &vars).unwrap();
    let c = cauchy_summand(&f, &g, j, k, true).unwrap();
    let want = parse_term_with("hyperterm([a],[b],x,j)*hyperterm([a],[b],-x,2*k-j)", &vars).unwrap();
    assert_eq!(c.shift_ratio(j).unwrap(), want.shift_ratio(j).unwrap());
    assert_eq!(c.shift_ratio(k).unwrap(), want.shift_ratio(k).unwrap());
    let p = at(&vars, &[("a", Scalar::from_frac(1, 3)), ("b", Scalar::from_frac(3, 7)), ("x", Scalar::from_frac(7, 3)), ("j", Scalar::from_int(2)), ("k", Scalar::from_int(3))]);
    assert_eq!(c.eval(&p).unwrap(), want.eval(&p).unwrap());
}

#[test]
fn absent_variable_ratio_is_one() {
    let t = parse_term("poch(a,k)*x^k", "k", Some("n")).unwrap();
    let n = t.vars().index("n").unwrap();
    assert!(t.shift_ratio(n).unwrap().is_one());
}

#[test]
fn binomial_matches_poch_form() {
    let vars = VarTable::problem("k", Some("n"), &[] as &[&str]).unwrap();
    let b = parse_term_with("binomial(n,k)", &vars).unwrap();
    let p = parse_term_with("poch(n-k+1,k)/k!", &vars).unwrap();
    for n in 0..15i64 {
        for k in 0..=n {
            let pt = at(&vars, &[("n", Scalar::from_int(n)), ("k", Scalar::from_int(k))]);
            assert_eq!(b.eval(&pt).unwrap(), p.eval(&pt).unwrap());
        }
    }
}

#[test]
fn parse_errors_carry_positions() {
    match parse_term("poch(a,,k)", "k", None) {
        Err(Error::Parse { line: 1, col: 8, .. }) => {}
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_term("foo(k)", "k", None), Err(Error::UnknownFunction(_))));
    assert!(matches!(parse_term("poch(k^2,k)", "k", None), Err(Error::NonAffine(_))));
}

#[test]
fn precedence() {
    let vars = VarTable::params(&["a"]).unwrap();
    assert_eq!(rf("-2^2", &vars), rf("-4", &vars));
    assert_eq!(rf("2^-1", &vars), rf("1/2", &vars));
    assert_eq!(rf("2^3^2", &vars), rf("512", &vars));
    assert_eq!(rf("1-a*2/4+3", &vars), rf("4-a/2", &vars));
}

#[test]
fn recurrence_text() {
    let vars = VarTable::problem("k", Some("n"), &[] as &[&str]).unwrap();
    let n = vars.index("n").unwrap();
    let rec = parse_recurrence("-(8*n+9)*(8*n+7)*S(n+1)+4*S(n)*(4*n+5)*(4*n+3)=0", &vars, n).unwrap();
    assert_eq!(rec.len(), 2);
    assert_eq!(rec[1].to_string(), "-64*n^2-128*n-63");
    let shifted = parse_recurrence("S(n) = 3*S(n-1)", &vars, n).unwrap();
    assert_eq!(shifted.len(), 2);
    assert_eq!(RatFunc::from_poly(shifted[0].clone()).try_div(&RatFunc::from_poly(shifted[1].clone())).unwrap(), rf("-3", &vars));
}

#[test]
fn radical_poch_roundtrip() {
    let vars = VarTable::problem("k", None, &["a"]).unwrap();
    let t = parse_term_with("hyperterm([2*a-3/2+sqrt(9-8*a)/2,2*a-3/2-sqrt(9-8*a)/2],[],2,k)", &vars).unwrap();
    let text = t.to_string();
    let back = parse_term_with(&text, &vars).unwrap();
    let k = vars.index("k").unwrap();
    assert_eq!(back.shift_ratio(k).unwrap(), t.shift_ratio(k).unwrap());
    let p = at(&vars, &[("a", Scalar::from_frac(1, 3)), ("k", Scalar::from_int(4))]);
    assert_eq!(back.eval(&p).unwrap(), t.eval(&p).unwrap());
}

#[test]
fn substitution_of_affine() {
    let vars = VarTable::problem("j", Some("k"), &["a"]).unwrap();
    let (j, k) = (vars.index("j").unwrap(), vars.index("k").unwrap());
    let t = parse_term_with("poch(a,j)", &vars).unwrap();
    let s = t.substitute(j, &Affine::var(&vars, k).sub(&Affine::var(&vars, j))).unwrap();
    assert_eq!(s.to_string(), "poch(a,k-j)");
}
