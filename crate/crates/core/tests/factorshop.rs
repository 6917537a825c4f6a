use hypersum::arith::quadext::QuadExtElem;
use hypersum::arith::{MultiPoly, RatFunc, Scalar, VarTable, Vars};
use hypersum::factorshop::{
    closedform, extract_linear_forms, factor_in, koornwinder_check, split_quadratic, split_quartic, sum_to_hyper,
};
use hypersum::termdsl::{parse_hyperterm, parse_quad, parse_ratfunc, parse_recurrence, parse_term, HyperTerm};
use hypersum::zeilberger::Recurrence;
use proptest::prelude::*;

fn poly(text: &str, vars: &Vars) -> MultiPoly {
    let r = parse_ratfunc(text, vars).unwrap();
    assert!(r.is_polynomial(), "{text}");
    r.num().clone()
}

fn forms(p: &MultiPoly, var: usize) -> Vec<String> {
    let rep = extract_linear_forms(p, var);
    let mut out: Vec<String> = rep
        .linear
        .iter()
        .flat_map(|(f, m)| std::iter::repeat_n(f.to_string(), *m as usize))
        .collect();
    out.sort();
    out
}

fn rec(text: &str, vars: &Vars, n: usize) -> Recurrence {
    Recurrence::new(vars, n, parse_recurrence(text, vars, n).unwrap()).unwrap()
}

fn quad(text: &str, vars: &Vars) -> QuadExtElem {
    parse_quad(text, vars).unwrap()
}

#[test]
fn linear_forms_of_first_example_coefficient() {
    let v = VarTable::params(&["n"]).unwrap();
    let p = poly("16*n^2+32*n+15", &v);
    assert_eq!(forms(&p, 0), ["4*n+3", "4*n+5"]);
    assert!(extract_linear_forms(&p, 0).is_complete());
}

#[test]
fn linear_forms_of_clausen_coefficient() {
    let v = VarTable::params(&["k", "a", "b"]).unwrap();
    let p = poly("-(k+1)*(2*a+k+2*b)*(2*a+2*b+1+2*k)", &v);
    let rep = extract_linear_forms(&p, 0);
    assert!(rep.is_complete());
    assert_eq!(rep.expand(), p);
    assert_eq!(rep.linear.len(), 3);
    let names = forms(&p, 0);
    for f in ["k+1", "k+2*a+2*b", "2*k+2*a+2*b+1"] {
        assert!(names.contains(&f.to_string()), "{f} missing from {names:?}");
    }
}

#[test]
fn irreducible_quadratic_is_residual() {
    let v = VarTable::params(&["n"]).unwrap();
    let p = poly("n^2+1", &v);
    let rep = extract_linear_forms(&p, 0);
    assert!(rep.linear.is_empty());
    assert_eq!(rep.residual, p);
}

#[test]
fn quadratic_roots() {
    let v = VarTable::params(&["k"]).unwrap();
    let (r1, r2) = split_quadratic(&poly("k^2-3/4", &v), 0).unwrap();
    assert_eq!(r1, quad("sqrt(3)/2", &v));
    assert_eq!(r2, quad("-sqrt(3)/2", &v));

    let (r1, r2) = split_quadratic(&poly("k^2-2*k+1", &v), 0).unwrap();
    assert!(r1.is_rational() && r2.is_rational());
    assert_eq!(r1, quad("1", &v));
    assert_eq!(r2, quad("1", &v));

    assert!(split_quadratic(&poly("k^3-1", &v), 0).is_err());
}

#[test]
fn radical_roots_with_parameter() {
    let v = VarTable::params(&["k", "a"]).unwrap();
    // Numerator residual of the square of 1F1(a;a-1;x).
    let (r1, r2) = split_quadratic(&poly("k^2+4*k*a+4*a^2-3*k-4*a", &v), 0).unwrap();
    let want = [quad("-2*a+3/2+sqrt(9-8*a)/2", &v), quad("-2*a+3/2-sqrt(9-8*a)/2", &v)];
    assert_eq!([r1.clone(), r2.clone()], want);
    assert_eq!(r1.conj(), r2);
}

#[test]
fn quartic_splitting() {
    let v = VarTable::params(&["x"]).unwrap();
    let (q1, q2) = split_quartic(&poly("(x^2-2)*(x^2-3)", &v), 0).unwrap();
    assert_eq!((q1, q2), (poly("x^2-2", &v), poly("x^2-3", &v)));
    assert!(split_quartic(&poly("x^4+1", &v), 0).is_none());
}

#[test]
fn quartic_with_parameters() {
    let v = VarTable::params(&["k", "a", "b"]).unwrap();
    let a = "(b^2+8+5*b-2*a*b+a^2-7*a)";
    let q1 = poly(&format!("{a}*k^2+(21*a+4*a*b-12-2*a^2*b-13*a^2+2*a^3-5*b-b^2)*k+4-12*a+a^4-6*a^3+13*a^2"), &v);
    let q2 = poly("k^2+(2*a^3-11*a^2-2*a^2*b+7*a+5*b+b^2+4)*k+(a^4-4*a^3-2*a^2*b+a^2+2*a+2*a*b)", &v);
    let prod = &q1 * &q2;
    let (f1, f2) = split_quartic(&prod, 0).expect("splits");
    let mut got = [f1, f2];
    got.sort_by_key(|p| p.to_string());
    let mut want = [q1.normalize(), q2.normalize()];
    want.sort_by_key(|p| p.to_string());
    assert_eq!(got, want);
}

#[test]
fn koornwinder_first_example() {
    let v = VarTable::params(&["n"]).unwrap();
    let r = rec("-(8*n+9)*(8*n+7)*S(n+1)+4*S(n)*(4*n+5)*(4*n+3)=0", &v, 0);
    let verdict = koornwinder_check(&r).unwrap();
    assert!(verdict.is_rational());
    let (num, den) = verdict.reports();
    let names = |rep: &hypersum::factorshop::FactorReport| {
        let mut s: Vec<String> = rep.linear.iter().map(|(f, _)| f.to_string()).collect();
        s.sort();
        s
    };
    assert_eq!(names(num), ["4*n+3", "4*n+5"]);
    assert_eq!(names(den), ["8*n+7", "8*n+9"]);
    let cf = closedform(&r).unwrap();
    assert_eq!(cf, parse_hyperterm("hyperterm([3/4,5/4,1],[7/8,9/8],1,n)", &v).unwrap());
}

#[test]
fn koornwinder_counterexample() {
    let v = VarTable::params(&["k", "a"]).unwrap();
    let r = rec(
        "-(k+1)*(k^2+(4*a-5)*k+4*a^2-8*a+4)*S(k+1)+2*(k^2+(4*a-3)*k+4*a^2-4*a)*S(k)=0",
        &v,
        0,
    );
    let verdict = koornwinder_check(&r).unwrap();
    assert!(!verdict.is_rational());
    let w = verdict.witnesses();
    assert_eq!(w.len(), 2);
    for p in w {
        assert_eq!(p.degree(0), 2);
        let (r1, _) = split_quadratic(p, 0).unwrap();
        assert_eq!(r1.d(), &poly("9-8*a", &v));
    }
}

#[test]
fn closedform_refuses_unfactored_residual() {
    let v = VarTable::params(&["k", "a"]).unwrap();
    let r = rec("-(k+1)*(k^3+a*k+1)*S(k+1)+(k^3+a*k+2)*S(k)=0", &v, 0);
    assert!(matches!(closedform(&r), Err(hypersum::Error::CannotRepresent(_))));
}

#[test]
fn verdict_invariant_under_scaling() {
    let v = VarTable::params(&["k", "a"]).unwrap();
    for text in [
        "-(k+1)*(k+a)*S(k+1)+(2*k+a)*S(k)=0",
        "-(k+1)*(k^2+(4*a-5)*k+4*a^2-8*a+4)*S(k+1)+2*(k^2+(4*a-3)*k+4*a^2-4*a)*S(k)=0",
    ] {
        let c = parse_recurrence(text, &v, 0).unwrap();
        let s = poly("k^2+a+3", &v);
        let scaled: Vec<MultiPoly> = c.iter().map(|p| p * &s).collect();
        let r1 = Recurrence::new(&v, 0, c).unwrap();
        let r2 = Recurrence::new(&v, 0, scaled).unwrap();
        assert_eq!(koornwinder_check(&r1).unwrap().is_rational(), koornwinder_check(&r2).unwrap().is_rational());
    }
}

#[test]
fn rational_verdict_gives_rational_parameters() {
    let v = VarTable::params(&["k", "a", "b"]).unwrap();
    let r = rec("-(k+1)*(2*a+k+2*b)*(2*a+2*b+1+2*k)*S(k+1)+2*S(k)*(2*b+k)*(k+2*a)*(a+k+b)=0", &v, 0);
    assert!(koornwinder_check(&r).unwrap().is_rational());
    let cf = closedform(&r).unwrap();
    assert!(cf.upper().iter().chain(cf.lower()).all(QuadExtElem::is_rational));
}

fn round_trip(h: &HyperTerm, r: &Recurrence) {
    let ratio = h.to_termexpr().unwrap().shift_ratio(h.var()).unwrap();
    assert_eq!(ratio, r.first_order_ratio().unwrap());
}

#[test]
fn closedform_ratio_round_trip() {
    let v = VarTable::params(&["k", "a"]).unwrap();
    for text in [
        "-(k+1)*(k^2+(4*a-5)*k+4*a^2-8*a+4)*S(k+1)+2*(k^2+(4*a-3)*k+4*a^2-4*a)*S(k)=0",
        "-(k+1)*(k+a)*S(k+1)+(2*k+a)*(k-3)*S(k)=0",
        "-(2*k+3)*S(k+1)+5*S(k)=0",
    ] {
        let r = rec(text, &v, 0);
        round_trip(&closedform(&r).unwrap(), &r);
    }
}

#[test]
fn factor_in_handles_quartic_residual() {
    let v = VarTable::params(&["x", "a"]).unwrap();
    let p = poly("3*(x+a)*(x^2-2)*(x^2-a)", &v);
    let rep = factor_in(&p, 0).unwrap();
    assert_eq!(rep.expand(), p);
    assert_eq!(rep.linear.len(), 1);
    assert_eq!(rep.quadratic.len(), 2);
    assert!(rep.residual.is_constant());
}

#[test]
fn sum_to_hyper_of_binomial_theorem() {
    let t = parse_term("x^j/j!*y^(k-j)/(k-j)!", "j", None).unwrap();
    let v = t.vars().clone();
    let j = v.index("j").unwrap();
    let s = sum_to_hyper(&t, j).unwrap();
    assert_eq!(s.offset, 0);
    let want = parse_hyperterm("hyperterm([-k],[],-x/y,j)", &v).unwrap();
    assert_eq!(s.hyper, want);
    let (x, y, k) = (v.index("x").unwrap(), v.index("y").unwrap(), v.index("k").unwrap());
    for kv in 0..=8i64 {
        let mut vals = vec![None; v.len()];
        vals[x] = Some(Scalar::from_int(2));
        vals[y] = Some(Scalar::from_int(3));
        vals[k] = Some(Scalar::from_int(kv));
        let pre = s.prefactor.eval(&vals).unwrap();
        let mut acc = Scalar::zero();
        for m in 0..=kv {
            acc = &acc + &s.hyper.value(&vals, m).unwrap();
        }
        let fact: i64 = (1..=kv).product();
        let want = Scalar::from_frac(5i64.pow(kv as u32), fact);
        assert_eq!(&pre * &acc, want, "k={kv}");
    }
}

#[test]
fn sum_to_hyper_of_constant() {
    let t = parse_term("1+0*k", "j", None).unwrap();
    let v = t.vars().clone();
    let s = sum_to_hyper(&t, v.index("j").unwrap()).unwrap();
    assert_eq!(s.hyper, parse_hyperterm("hyperterm([1],[],1,j)", &v).unwrap());
    let k = v.index("k").unwrap();
    for kv in 0..6 {
        let mut vals = vec![None; v.len()];
        vals[k] = Some(Scalar::from_int(kv));
        let mut acc = Scalar::zero();
        for m in 0..=kv {
            acc = &acc + &s.hyper.value(&vals, m).unwrap();
        }
        assert_eq!(&s.prefactor.eval(&vals).unwrap() * &acc, Scalar::from_int(kv + 1));
    }
}

#[test]
fn sum_to_hyper_skips_leading_zeros() {
    let t = parse_term("binomial(k,j)*j", "j", None).unwrap();
    let v = t.vars().clone();
    let s = sum_to_hyper(&t, v.index("j").unwrap()).unwrap();
    assert_eq!(s.offset, 1);
}

fn linear_poly(vars: &Vars, c: &[i64]) -> MultiPoly {
    let mut acc = MultiPoly::from_int(vars, c[0]);
    for (i, &x) in c[1..].iter().enumerate() {
        acc = &acc + &MultiPoly::var(vars, i).scale(&Scalar::from_int(x));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reconstruction(
        lins in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 0..4),
        extra in proptest::collection::vec(-3i64..=3, 3),
        scale in 1i64..6,
    ) {
        let v = VarTable::params(&["k", "a"]).unwrap();
        let k = MultiPoly::var(&v, 0);
        let mut p = MultiPoly::from_int(&v, scale);
        for c in &lins {
            p = &p * &linear_poly(&v, c);
        }
        // A quadratic tail with no rational root in k for generic a.
        let tail = &(&k * &k) + &linear_poly(&v, &[extra[0].abs() + 1, 0, extra[1]]);
        let p = &p * &tail;
        prop_assume!(!p.is_zero());
        let rep = extract_linear_forms(&p, 0);
        prop_assert_eq!(rep.expand(), p.clone());
        let rep = factor_in(&p, 0).unwrap();
        prop_assert_eq!(rep.expand(), p);
    }

    #[test]
    fn conjugate_pochhammer_products_are_rational(m in 0i64..=10, an in -20i64..20, ad in 1i64..9) {
        let v = VarTable::params(&["k", "a"]).unwrap();
        let a = v.index("a").unwrap();
        let h = parse_hyperterm("hyperterm([2*a-3/2+sqrt(9-8*a)/2,2*a-3/2-sqrt(9-8*a)/2],[],1,k)", &v).unwrap();
        let av = Scalar::from_frac(an, ad);
        let mut vals = vec![None; v.len()];
        vals[a] = Some(av.clone());
        let got = h.value(&vals, m).unwrap();
        prop_assert!(got.is_rational());
        // ∏ ((u+i)² - v²D) with u = 2a-3/2, v²D = (9-8a)/4
        let u = &(&Scalar::from_int(2) * &av) - &Scalar::from_frac(3, 2);
        let vd = &(&Scalar::from_int(9) - &(&Scalar::from_int(8) * &av)) / &Scalar::from_int(4);
        let mut want = Scalar::one();
        for i in 0..m {
            let ui = &u + &Scalar::from_int(i);
            want = &want * &(&(&ui * &ui) - &vd);
        }
        let fact: i64 = (1..=m).product();
        prop_assert_eq!(got, &want / &Scalar::from_int(fact));
    }
}

#[test]
fn radical_parameter_field() {
    let v = VarTable::params(&["k", "a"]).unwrap();
    let e = quad("2*a-3/2+sqrt(9-8*a)/2", &v);
    assert_eq!(e.u(), &parse_ratfunc("2*a-3/2", &v).unwrap());
    assert_eq!(e.v(), &RatFunc::constant(&v, Scalar::from_frac(1, 2)));
    assert_eq!(e.d(), &poly("9-8*a", &v));
}
