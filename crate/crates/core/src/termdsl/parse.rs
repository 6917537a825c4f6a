//! Term grammar: `hyperterm([..],[..],z,idx)`, `poch(x,n)`, `binomial(n,k)`,
//! `factorial(x)` or `x!`, `(-1)^e`, `sqrt(r)`, rationals, `+ - * / ^` and
//! parentheses. Precedence: `!` > `^` (right associative) > unary minus >
//! `* /` > `+ -`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::affine::Affine;
use super::hyper::HyperTerm;
use super::term::{Factor, TermExpr};
use crate::arith::quadext::QuadExtElem;
use crate::arith::{MultiPoly, RatFunc, Scalar, VarTable, Vars};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, Error> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Num(s.parse().unwrap()),
                line: l0,
                col: c0,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(s),
                line: l0,
                col: c0,
            });
            continue;
        }
        if "+-*/^!()[],=".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: l0,
                col: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Parse {
            line,
            col,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Num(BigInt),
    Var(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Box<Ast>),
    Fact(Box<Ast>),
    Call(String, Vec<Ast>),
    List(Vec<Ast>),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end);
        Error::Parse { line, col, msg: msg.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Ast, Error> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast, Error> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, Error> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, Error> {
        let base = self.postfix()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Ast::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Ast, Error> {
        let mut a = self.primary()?;
        while self.eat('!') {
            a = Ast::Fact(Box::new(a));
        }
        Ok(a)
    }

    fn primary(&mut self) -> Result<Ast, Error> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Ast::Num(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let mut args = Vec::new();
                    if !self.eat(')') {
                        loop {
                            args.push(self.expr()?);
                            if self.eat(')') {
                                break;
                            }
                            self.expect(',')?;
                        }
                    }
                    Ok(Ast::Call(name, args))
                } else {
                    Ok(Ast::Var(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let mut items = Vec::new();
                if !self.eat(']') {
                    loop {
                        items.push(self.expr()?);
                        if self.eat(']') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Ast::List(items))
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn end_pos(text: &str) -> (usize, usize) {
    let line = text.lines().count().max(1);
    let col = text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    (line, col)
}

/// Parses an expression, or an equation `lhs = rhs` (returned as `lhs - rhs`).
pub fn parse_ast(text: &str) -> Result<Ast, Error> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: end_pos(text),
    };
    let mut e = p.expr()?;
    if p.eat('=') {
        let rhs = p.expr()?;
        e = Ast::Sub(Box::new(e), Box::new(rhs));
    }
    if p.pos < p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

const FUNCTIONS: &[&str] = &["hyperterm", "Hyperterm", "poch", "pochhammer", "binomial", "factorial", "sqrt", "S"];

/// Free identifiers (variables), in first-seen order without duplicates.
pub fn identifiers(ast: &Ast) -> Vec<String> {
    fn walk(a: &Ast, out: &mut Vec<String>) {
        match a {
            Ast::Num(_) => {}
            Ast::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Ast::Neg(x) | Ast::Fact(x) => walk(x, out),
            Ast::Add(x, y) | Ast::Sub(x, y) | Ast::Mul(x, y) | Ast::Div(x, y) | Ast::Pow(x, y) => {
                walk(x, out);
                walk(y, out);
            }
            Ast::Call(_, args) | Ast::List(args) => args.iter().for_each(|x| walk(x, out)),
        }
    }
    let mut out = Vec::new();
    walk(ast, &mut out);
    out
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn const_rat(a: &Ast) -> Option<BigRational> {
    match a {
        Ast::Num(n) => Some(BigRational::from_integer(n.clone())),
        Ast::Neg(x) => const_rat(x).map(|v| -v),
        Ast::Add(x, y) => Some(const_rat(x)? + const_rat(y)?),
        Ast::Sub(x, y) => Some(const_rat(x)? - const_rat(y)?),
        Ast::Mul(x, y) => Some(const_rat(x)? * const_rat(y)?),
        Ast::Div(x, y) => {
            let d = const_rat(y)?;
            if d.is_zero() {
                None
            } else {
                Some(const_rat(x)? / d)
            }
        }
        Ast::Pow(x, y) => {
            let b = const_rat(x)?;
            let e = const_int(y)?;
            if b.is_zero() && e < 0 || e.abs() > 4096 {
                return None;
            }
            Some(num_traits::pow::Pow::pow(&b, e as i32))
        }
        _ => None,
    }
}

fn const_int(a: &Ast) -> Option<i64> {
    let r = const_rat(a)?;
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

fn has_sqrt(a: &Ast) -> bool {
    match a {
        Ast::Call(n, args) => n == "sqrt" || args.iter().any(has_sqrt),
        Ast::Num(_) | Ast::Var(_) => false,
        Ast::Neg(x) | Ast::Fact(x) => has_sqrt(x),
        Ast::Add(x, y) | Ast::Sub(x, y) | Ast::Mul(x, y) | Ast::Div(x, y) | Ast::Pow(x, y) => has_sqrt(x) || has_sqrt(y),
        Ast::List(xs) => xs.iter().any(has_sqrt),
    }
}

/// Rational function value of a call-free expression (`sqrt` of a
/// rational constant allowed).
pub fn to_ratfunc(a: &Ast, vars: &Vars) -> Result<RatFunc, Error> {
    Ok(match a {
        Ast::Num(n) => RatFunc::constant(vars, Scalar::from_bigint(n.clone())),
        Ast::Var(v) => RatFunc::var(vars, vars.require(v)?),
        Ast::Neg(x) => -&to_ratfunc(x, vars)?,
        Ast::Add(x, y) | Ast::Sub(x, y) | Ast::Mul(x, y) | Ast::Div(x, y) => {
            let (p, q) = (to_ratfunc(x, vars)?, to_ratfunc(y, vars)?);
            if let (Some(l), Some(r)) = (p.extension(), q.extension()) {
                if l != r {
                    return Err(Error::ExtensionMismatch { left: l, right: r });
                }
            }
            match a {
                Ast::Add(..) => &p + &q,
                Ast::Sub(..) => &p - &q,
                Ast::Mul(..) => &p * &q,
                _ => p.try_div(&q)?,
            }
        }
        Ast::Pow(x, y) => {
            let e = const_int(y).ok_or_else(|| Error::NonAffine("non-integer exponent in a rational expression".into()))?;
            to_ratfunc(x, vars)?.powi(e)?
        }
        Ast::Call(name, args) if name == "sqrt" && args.len() == 1 => {
            let r = to_ratfunc(&args[0], vars)?;
            let c = r
                .constant_value()
                .and_then(|c| c.as_rational().cloned())
                .ok_or_else(|| invalid("sqrt needs a rational constant here"))?;
            RatFunc::constant(vars, Scalar::sqrt_of(&c))
        }
        Ast::Call(name, _) if FUNCTIONS.contains(&name.as_str()) => {
            return Err(invalid(format!("`{name}` is not allowed in a rational expression")))
        }
        Ast::Call(name, _) => return Err(Error::UnknownFunction(name.clone())),
        Ast::Fact(x) => {
            let n = const_int(x).filter(|&n| n >= 0).ok_or_else(|| invalid("factorial of a non-constant in a rational expression"))?;
            let mut v = BigInt::from(1);
            for i in 1..=n {
                v *= i;
            }
            RatFunc::constant(vars, Scalar::from_bigint(v))
        }
        Ast::List(_) => return Err(invalid("unexpected list")),
    })
}

pub fn to_affine(a: &Ast, vars: &Vars) -> Result<Affine, Error> {
    let r = to_ratfunc(a, vars).map_err(|e| match e {
        Error::NonAffine(_) => Error::NonAffine(format!("{a:?}")),
        other => other,
    })?;
    if !r.is_polynomial() {
        return Err(Error::NonAffine(r.to_string()));
    }
    Affine::from_poly(r.num())
}

/// `u + v·√D` value of an expression with polynomial radicands.
pub fn to_quad(a: &Ast, vars: &Vars) -> Result<QuadExtElem, Error> {
    #[derive(Clone)]
    struct Q {
        u: RatFunc,
        v: RatFunc,
        d: Option<MultiPoly>,
    }
    fn merge_d(a: &Option<MultiPoly>, b: &Option<MultiPoly>) -> Result<Option<MultiPoly>, Error> {
        match (a, b) {
            (Some(x), Some(y)) if x != y => Err(invalid("mixed radicands")),
            (Some(x), _) | (None, Some(x)) => Ok(Some(x.clone())),
            _ => Ok(None),
        }
    }
    fn go(a: &Ast, vars: &Vars) -> Result<Q, Error> {
        let zero = RatFunc::zero(vars);
        Ok(match a {
            Ast::Call(name, args) if name == "sqrt" && args.len() == 1 => {
                let r = to_ratfunc(&args[0], vars)?;
                if !r.is_polynomial() {
                    // sqrt(p/q) = sqrt(p·q)/q
                    let d = r.num() * r.den();
                    let v = RatFunc::new(MultiPoly::one(vars), r.den().clone())?;
                    return Ok(Q { u: zero, v, d: Some(d) });
                }
                let e = QuadExtElem::new(zero.clone(), RatFunc::one(vars), r.num().clone())?;
                let d = if e.is_rational() { None } else { Some(e.d().clone()) };
                Q {
                    u: e.u().clone(),
                    v: e.v().clone(),
                    d,
                }
            }
            Ast::Neg(x) => {
                let q = go(x, vars)?;
                Q { u: -&q.u, v: -&q.v, d: q.d }
            }
            Ast::Add(x, y) | Ast::Sub(x, y) => {
                let (p, q) = (go(x, vars)?, go(y, vars)?);
                let d = merge_d(&p.d, &q.d)?;
                if matches!(a, Ast::Add(..)) {
                    Q { u: &p.u + &q.u, v: &p.v + &q.v, d }
                } else {
                    Q { u: &p.u - &q.u, v: &p.v - &q.v, d }
                }
            }
            Ast::Mul(x, y) => {
                let (p, q) = (go(x, vars)?, go(y, vars)?);
                let d = merge_d(&p.d, &q.d)?;
                let dd = RatFunc::from_poly(d.clone().unwrap_or_else(|| MultiPoly::zero(vars)));
                Q {
                    u: &(&p.u * &q.u) + &(&(&p.v * &q.v) * &dd),
                    v: &(&p.u * &q.v) + &(&p.v * &q.u),
                    d,
                }
            }
            Ast::Div(x, y) => {
                let (p, q) = (go(x, vars)?, go(y, vars)?);
                let d = merge_d(&p.d, &q.d)?;
                let dd = RatFunc::from_poly(d.clone().unwrap_or_else(|| MultiPoly::zero(vars)));
                let norm = &(&q.u * &q.u) - &(&(&q.v * &q.v) * &dd);
                // (pu + pv√D)(qu - qv√D) / norm
                let u = &(&p.u * &q.u) - &(&(&p.v * &q.v) * &dd);
                let v = &(&p.v * &q.u) - &(&p.u * &q.v);
                Q {
                    u: u.try_div(&norm)?,
                    v: v.try_div(&norm)?,
                    d,
                }
            }
            other => Q {
                u: to_ratfunc(other, vars)?,
                v: zero,
                d: None,
            },
        })
    }
    let q = go(a, vars)?;
    match q.d {
        Some(d) => QuadExtElem::new(q.u, q.v, d),
        None => Ok(QuadExtElem::rational(q.u)),
    }
}

fn is_pure(a: &Ast) -> bool {
    match a {
        Ast::Num(_) | Ast::Var(_) => true,
        Ast::Neg(x) => is_pure(x),
        Ast::Add(x, y) | Ast::Sub(x, y) | Ast::Mul(x, y) | Ast::Div(x, y) => is_pure(x) && is_pure(y),
        Ast::Pow(x, y) => is_pure(x) && const_int(y).is_some(),
        Ast::Call(n, args) => n == "sqrt" && args.len() == 1 && is_pure(&args[0]),
        Ast::Fact(x) => const_int(x).is_some(),
        Ast::List(_) => false,
    }
}

fn params(a: &Ast, vars: &Vars) -> Result<Vec<QuadExtElem>, Error> {
    match a {
        Ast::List(items) => items.iter().map(|x| to_quad(x, vars)).collect(),
        _ => Err(invalid("expected a parameter list `[...]`")),
    }
}

pub fn to_hyperterm(a: &Ast, vars: &Vars) -> Result<HyperTerm, Error> {
    match a {
        Ast::Call(name, args) if (name == "hyperterm" || name == "Hyperterm") && args.len() == 4 => {
            let var = match &args[3] {
                Ast::Var(v) => vars.require(v)?,
                _ => return Err(invalid("hyperterm index must be a variable here")),
            };
            Ok(HyperTerm::new(vars, params(&args[0], vars)?, params(&args[1], vars)?, to_ratfunc(&args[2], vars)?, var))
        }
        _ => Err(invalid("expected hyperterm([...],[...],z,var)")),
    }
}

/// Radical `poch(u+v*sqrt(D), L)^exp` waiting for its conjugate partner.
type Half = (QuadExtElem, Affine, i32);

/// Summand expression to a term.
pub fn to_term(a: &Ast, vars: &Vars) -> Result<TermExpr, Error> {
    let (t, mut halves) = term_inner(a, vars)?;
    let mut factors = t.factors().to_vec();
    while let Some((e, len, exp)) = halves.pop() {
        let c = e.conj();
        let j = halves
            .iter()
            .position(|(f, l, x)| *f == c && *l == len && *x == exp)
            .ok_or_else(|| invalid(format!("poch({e},{len}) has no conjugate partner")))?;
        halves.remove(j);
        factors.push(Factor::PairPoch { elem: e, len, exp });
    }
    Ok(TermExpr::new(vars, factors))
}

fn term_inner(a: &Ast, vars: &Vars) -> Result<(TermExpr, Vec<Half>), Error> {
    let plain = |t: TermExpr| Ok((t, Vec::new()));
    if is_pure(a) {
        let r = to_ratfunc(a, vars)?;
        return plain(TermExpr::new(vars, if r.is_one() { vec![] } else { vec![Factor::Rat(r)] }));
    }
    let arity = |name: &str, args: &[Ast], n: usize| -> Result<(), Error> {
        if args.len() == n {
            Ok(())
        } else {
            Err(invalid(format!("`{name}` takes {n} arguments, got {}", args.len())))
        }
    };
    let invert = |(t, h): (TermExpr, Vec<Half>)| (t.inv(), h.into_iter().map(|(e, l, x)| (e, l, -x)).collect::<Vec<_>>());
    match a {
        Ast::Neg(x) => {
            let (t, h) = term_inner(x, vars)?;
            let m = TermExpr::new(vars, vec![Factor::Rat(RatFunc::constant(vars, Scalar::from_int(-1)))]);
            Ok((m.mul(&t), h))
        }
        Ast::Mul(x, y) | Ast::Div(x, y) => {
            let (t1, mut h1) = term_inner(x, vars)?;
            let mut rhs = term_inner(y, vars)?;
            if matches!(a, Ast::Div(..)) {
                rhs = invert(rhs);
            }
            h1.extend(rhs.1);
            Ok((t1.mul(&rhs.0), h1))
        }
        Ast::Pow(x, y) => {
            if let Some(e) = const_int(y) {
                let base = term_inner(x, vars)?;
                let base = if e < 0 { invert(base) } else { base };
                let n = e.unsigned_abs() as usize;
                let t = base.0.pow(n as i32);
                let h = base.1.iter().cloned().cycle().take(base.1.len() * n).collect();
                return Ok((t, h));
            }
            if !is_pure(x) {
                return Err(invalid("only rational bases may carry a symbolic exponent"));
            }
            let base = to_ratfunc(x, vars)?;
            let exp = to_affine(y, vars)?;
            let f = if base.constant_value() == Some(Scalar::from_int(-1)) {
                Factor::Sign { exp }
            } else {
                Factor::Power { base, exp }
            };
            plain(TermExpr::new(vars, vec![f]))
        }
        Ast::Fact(x) => plain(TermExpr::new(vars, vec![TermExpr::factorial(to_affine(x, vars)?)])),
        Ast::Call(name, args) => match name.as_str() {
            "factorial" => {
                arity(name, args, 1)?;
                plain(TermExpr::new(vars, vec![TermExpr::factorial(to_affine(&args[0], vars)?)]))
            }
            "poch" | "pochhammer" => {
                arity(name, args, 2)?;
                let len = to_affine(&args[1], vars)?;
                if !has_sqrt(&args[0]) {
                    return plain(TermExpr::new(vars, vec![TermExpr::poch(to_affine(&args[0], vars)?, len)]));
                }
                let e = to_quad(&args[0], vars)?;
                if e.is_rational() {
                    return plain(TermExpr::new(vars, vec![Factor::PairPoch { elem: e, len, exp: 1 }]));
                }
                Ok((TermExpr::one(vars), vec![(e, len, 1)]))
            }
            "binomial" => {
                arity(name, args, 2)?;
                plain(TermExpr::new(vars, TermExpr::binomial(&to_affine(&args[0], vars)?, &to_affine(&args[1], vars)?)))
            }
            "hyperterm" | "Hyperterm" => {
                arity(name, args, 4)?;
                let len = to_affine(&args[3], vars)?;
                let h = HyperTerm::new(vars, params(&args[0], vars)?, params(&args[1], vars)?, to_ratfunc(&args[2], vars)?, 0);
                plain(h.to_termexpr_at(&len)?)
            }
            "sqrt" => Err(invalid("sqrt needs a constant argument")),
            _ => Err(Error::UnknownFunction(name.clone())),
        },
        Ast::Add(..) | Ast::Sub(..) => Err(invalid("sums of non-rational terms are not hypergeometric terms")),
        _ => Err(invalid(format!("cannot interpret {a:?} as a term"))),
    }
}

/// Variable table for a problem: declared summation and recurrence
/// variables plus every other identifier as a parameter (sorted).
pub fn problem_vars(ast: &Ast, sum_var: &str, rec_var: Option<&str>) -> Result<Vars, Error> {
    let mut ps: BTreeSet<String> = identifiers(ast).into_iter().collect();
    ps.remove(sum_var);
    if let Some(r) = rec_var {
        ps.remove(r);
    }
    let ps: Vec<String> = ps.into_iter().collect();
    VarTable::problem(sum_var, rec_var, &ps)
}

pub fn parse_term(text: &str, sum_var: &str, rec_var: Option<&str>) -> Result<TermExpr, Error> {
    let ast = parse_ast(text)?;
    let vars = problem_vars(&ast, sum_var, rec_var)?;
    to_term(&ast, &vars)
}

pub fn parse_term_with(text: &str, vars: &Vars) -> Result<TermExpr, Error> {
    to_term(&parse_ast(text)?, vars)
}

pub fn parse_hyperterm(text: &str, vars: &Vars) -> Result<HyperTerm, Error> {
    to_hyperterm(&parse_ast(text)?, vars)
}

/// Linear combination of `S(rec+i)`; key `None` collects the inhomogeneous part.
fn linear_in_s(a: &Ast, vars: &Vars, rec: usize) -> Result<BTreeMap<Option<i64>, RatFunc>, Error> {
    let single = |k: Option<i64>, r: RatFunc| {
        let mut m = BTreeMap::new();
        if !r.is_zero() {
            m.insert(k, r);
        }
        m
    };
    let combine = |mut x: BTreeMap<Option<i64>, RatFunc>, y: BTreeMap<Option<i64>, RatFunc>, sign: i64| {
        for (k, v) in y {
            let v = if sign < 0 { -&v } else { v };
            let e = x.entry(k).or_insert_with(|| RatFunc::zero(vars));
            *e = &*e + &v;
        }
        x.retain(|_, v| !v.is_zero());
        x
    };
    let scalar_of = |m: &BTreeMap<Option<i64>, RatFunc>| -> Option<RatFunc> {
        if m.is_empty() {
            return Some(RatFunc::zero(vars));
        }
        if m.len() == 1 {
            return m.get(&None).cloned();
        }
        None
    };
    Ok(match a {
        Ast::Call(name, args) if name == "S" => {
            if args.len() != 1 {
                return Err(invalid("S takes one argument"));
            }
            let aff = to_affine(&args[0], vars)?;
            let shift = aff.add(&Affine::var(vars, rec).scale(&-BigRational::from_integer(1.into())));
            if !shift.is_constant() || !shift.constant_term().is_integer() {
                return Err(invalid(format!("S argument must be {} plus an integer", vars.name(rec))));
            }
            single(Some(shift.constant_term().to_integer().to_i64().unwrap()), RatFunc::one(vars))
        }
        Ast::Add(x, y) => combine(linear_in_s(x, vars, rec)?, linear_in_s(y, vars, rec)?, 1),
        Ast::Sub(x, y) => combine(linear_in_s(x, vars, rec)?, linear_in_s(y, vars, rec)?, -1),
        Ast::Neg(x) => combine(BTreeMap::new(), linear_in_s(x, vars, rec)?, -1),
        Ast::Mul(x, y) => {
            let (p, q) = (linear_in_s(x, vars, rec)?, linear_in_s(y, vars, rec)?);
            let (s, other) = match (scalar_of(&p), scalar_of(&q)) {
                (Some(s), _) => (s, q),
                (_, Some(s)) => (s, p),
                _ => return Err(invalid("product of two S terms")),
            };
            other.into_iter().map(|(k, v)| (k, &v * &s)).filter(|(_, v)| !v.is_zero()).collect()
        }
        Ast::Div(x, y) => {
            let q = linear_in_s(y, vars, rec)?;
            let s = scalar_of(&q).ok_or_else(|| invalid("division by an S term"))?;
            linear_in_s(x, vars, rec)?
                .into_iter()
                .map(|(k, v)| v.try_div(&s).map(|r| (k, r)))
                .collect::<Result<_, _>>()?
        }
        other => single(None, to_ratfunc(other, vars)?),
    })
}

/// Parses `Σ c_i·S(n+i) = 0` into polynomial coefficients `σ_0..σ_J`
/// (shifted so the lowest index is 0; denominators cleared).
pub fn parse_recurrence(text: &str, vars: &Vars, rec: usize) -> Result<Vec<MultiPoly>, Error> {
    let ast = parse_ast(text)?;
    let m = linear_in_s(&ast, vars, rec)?;
    if m.contains_key(&None) {
        return Err(invalid("recurrence has an inhomogeneous part"));
    }
    if m.is_empty() {
        return Err(invalid("recurrence has no S terms"));
    }
    let lo = m.keys().next().unwrap().unwrap();
    let hi = m.keys().last().unwrap().unwrap();
    let mut row = vec![RatFunc::zero(vars); (hi - lo + 1) as usize];
    for (k, v) in m {
        let i = (k.unwrap() - lo) as usize;
        row[i] = if lo == 0 {
            v
        } else {
            // Re-index so the lowest shift is S(n).
            v.shift_int(rec, -lo)
        };
    }
    let polys = crate::arith::linsolve::clear_row(&row);
    Ok(polys.into_iter().map(|p| if p.is_zero() { MultiPoly::zero(vars) } else { p }).collect())
}

pub fn parse_ratfunc(text: &str, vars: &Vars) -> Result<RatFunc, Error> {
    to_ratfunc(&parse_ast(text)?, vars)
}

pub fn parse_quad(text: &str, vars: &Vars) -> Result<QuadExtElem, Error> {
    to_quad(&parse_ast(text)?, vars)
}
