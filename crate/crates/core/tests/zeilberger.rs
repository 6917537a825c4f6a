use hypersum::arith::{MultiPoly, RatFunc, VarTable, Vars};
use hypersum::termdsl::{parse_ratfunc, parse_recurrence, parse_term, TermExpr};
use hypersum::zeilberger::{certificate_residual, sumrecursion, verify_certificate, Recurrence};
use hypersum::Error;

fn setup(summand: &str, sum_var: &str, rec_var: &str) -> (TermExpr, Vars, usize, usize) {
    let t = parse_term(summand, sum_var, Some(rec_var)).unwrap();
    let vars = t.vars().clone();
    let (k, n) = (vars.index(sum_var).unwrap(), vars.index(rec_var).unwrap());
    (t, vars, k, n)
}

fn expected(text: &str, vars: &Vars, n: usize) -> Recurrence {
    Recurrence::new(vars, n, parse_recurrence(text, vars, n).unwrap()).unwrap()
}

fn check(summand: &str, sum_var: &str, rec_var: &str, want: &str) -> Recurrence {
    let (t, vars, k, n) = setup(summand, sum_var, rec_var);
    let res = sumrecursion(&t, k, n, 4).unwrap();
    assert_eq!(res.recurrence, expected(want, &vars, n), "{summand}");
    assert!(verify_certificate(&t, &res.recurrence, &res.certificate, k).unwrap());
    res.recurrence
}

#[test]
fn radical_argument_example() {
    let want = "-(8*n+9)*(8*n+7)*S(n+1)+4*S(n)*(4*n+5)*(4*n+3)=0";
    let a = check("hyperterm([1/2,-2*n],[2*n+3/2],3+2*sqrt(2),k)", "k", "n", want);
    let b = check(
        "(-1)^k*binomial(2*n,k)*binomial(2*n+k+1,k)/binomial(4*n+2*k+2,2*k)*(3+2*sqrt(2))^k",
        "k",
        "n",
        want,
    );
    assert_eq!(a.to_string(), b.to_string());
    assert_eq!(a.to_string(), "(64*n^2+128*n+63)*S(n+1) + (-64*n^2-128*n-60)*S(n) = 0");
    let ratio = a.first_order_ratio().unwrap();
    assert_eq!(ratio, parse_ratfunc("4*(4*n+5)*(4*n+3)/((8*n+9)*(8*n+7))", a.vars()).unwrap());
}

#[test]
fn clausen() {
    let r = check(
        "hyperterm([a,b],[a+b+1/2],1,j)*hyperterm([a,b],[a+b+1/2],1,k-j)",
        "j",
        "k",
        "-(k+1)*(2*a+k+2*b)*(2*a+2*b+1+2*k)*S(k+1)+2*S(k)*(2*b+k)*(k+2*a)*(a+k+b)=0",
    );
    let want = parse_ratfunc("2*(2*b+k)*(k+2*a)*(a+k+b)/((k+1)*(2*a+k+2*b)*(2*a+2*b+1+2*k))", r.vars()).unwrap();
    assert_eq!(r.first_order_ratio().unwrap(), want);
}

#[test]
fn even_product_needs_order_two() {
    let summand = "hyperterm([a],[b],x,j)*hyperterm([a],[b],-x,k-j)";
    check(summand, "j", "k", "(k+2)*(k+1+b)*(k+b)*(k+2*b)*S(k+2)+S(k)*(2*a+k)*x^2*(2*a-k-2*b)=0");
    let (t, _, k, n) = setup(summand, "j", "k");
    assert_eq!(sumrecursion(&t, k, n, 1), Err(Error::NoRecurrence(1)));
}

#[test]
fn normalization() {
    let vars = VarTable::problem("k", Some("n"), &[] as &[&str]).unwrap();
    let n = vars.index("n").unwrap();
    let p = |s: &str| parse_ratfunc(s, &vars).unwrap().num().clone();
    let r = Recurrence::new(&vars, n, vec![p("-2*(n+1)"), p("2*(n+1)*(n+2)")]).unwrap();
    assert_eq!(r.coeffs(), &[p("-1"), p("n+2")]);
    assert_eq!(Recurrence::new(&vars, n, r.coeffs().to_vec()).unwrap(), r);
    let want = expected("-(8*n+9)*(8*n+7)*S(n+1)+4*S(n)*(4*n+5)*(4*n+3)=0", &vars, n);
    let scaled: Vec<MultiPoly> = want.coeffs().iter().map(|c| c.scale(&hypersum::arith::Scalar::from_int(7))).collect();
    assert_eq!(Recurrence::new(&vars, n, scaled).unwrap(), want);
    assert!(Recurrence::new(&vars, n, vec![MultiPoly::zero(&vars)]).is_err());
    let constant = Recurrence::new(&vars, n, vec![p("-1"), p("1")]).unwrap();
    assert!(constant.first_order_ratio().unwrap().is_one());
}

#[test]
fn corrupted_recurrence_fails() {
    let (t, vars, k, n) = setup("hyperterm([1/2,-2*n],[2*n+3/2],3+2*sqrt(2),k)", "k", "n");
    let res = sumrecursion(&t, k, n, 4).unwrap();
    let mut c = res.recurrence.coeffs().to_vec();
    c[0] = &c[0] + &MultiPoly::one(&vars);
    let bad = Recurrence::new(&vars, n, c).unwrap();
    let residual: RatFunc = certificate_residual(&t, &bad, &res.certificate, k).unwrap();
    assert!(!residual.is_zero());
}
