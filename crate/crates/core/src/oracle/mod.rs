//! Brute-force verification by exact evaluation: partial sums, identity
//! checks at rational parameter values and recurrence shadows. Only
//! arithmetic and term evaluation are used here.

mod golden;
mod suite;

pub use golden::{load_golden_dir, parse_golden, GoldenCase, BUILTIN_GOLDEN};
pub use suite::{paper_suite, run_case, CaseReport, Check, SuiteOptions, SuiteReport};

use num_rational::BigRational;

use crate::arith::{Role, Scalar, Vars};
use crate::termdsl::{Affine, TermExpr};
use crate::zeilberger::Recurrence;
use crate::Error;

pub const DEFAULT_K: i64 = 25;
pub const DEFAULT_N_MAX: i64 = 10;

/// Values for the variables of a problem, by index; `None` leaves a
/// variable free.
pub type Assignment = Vec<Option<Scalar>>;

fn with_value(assign: &Assignment, var: usize, v: i64) -> Assignment {
    let mut a = assign.clone();
    a[var] = Some(Scalar::from_int(v));
    a
}

/// `Σ_{var=lo}^{hi} t`.
pub fn partial_sum(t: &TermExpr, var: usize, lo: i64, hi: i64, assign: &Assignment) -> Result<Scalar, Error> {
    let mut acc = Scalar::zero();
    for i in lo..=hi {
        let v = t.eval(&with_value(assign, var, i)).map_err(|e| Error::Eval {
            factor: format!("{}={i}", t.vars().name(var)),
            reason: e.to_string(),
        })?;
        acc = acc.try_add(&v)?;
    }
    Ok(acc)
}

fn upper_at(upper: &Affine, rec: usize, n: i64) -> Result<i64, Error> {
    let mut vals = vec![None; upper.vars().len()];
    vals[rec] = Some(Scalar::from_int(n));
    let v = upper.eval(&vals)?;
    if !v.is_integer() {
        return Err(Error::Invalid(format!("summation bound {upper} is not an integer at {n}")));
    }
    i64::try_from(v.to_integer()).map_err(|_| Error::Invalid("summation bound too large".into()))
}

/// `S(n) = Σ_{j=0}^{upper(n)} t(n, j)` at the given parameters.
pub fn definite_sum(t: &TermExpr, sum_var: usize, rec_var: usize, upper: &Affine, n: i64, assign: &Assignment) -> Result<Scalar, Error> {
    let a = with_value(assign, rec_var, n);
    partial_sum(t, sum_var, 0, upper_at(upper, rec_var, n)?, &a)
}

/// `Σ_j left(j, k) = scale · right(k)` for `k = 0..=max_k`.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub name: String,
    pub left: TermExpr,
    pub sum_var: usize,
    pub rec_var: usize,
    pub upper: Affine,
    pub right: TermExpr,
    /// Multiply `right` by the left sum at `k = 0` (for terms normalized to
    /// `T(0) = 1`).
    pub normalize_at_zero: bool,
    pub specializations: Vec<Assignment>,
    pub max_k: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityOutcome {
    Pass { checked: usize, skipped: Vec<String> },
    Fail { specialization: String, k: i64, left: Scalar, right: Scalar },
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, IdentityOutcome::Pass { checked, .. } if *checked > 0)
    }
}

pub fn render_assignment(vars: &Vars, a: &Assignment) -> String {
    let parts: Vec<String> = a
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.as_ref().map(|v| format!("{}={v}", vars.name(i))))
        .collect();
    parts.join(",")
}

/// Compares both sides exactly; a specialization at which either side
/// cannot be evaluated is skipped and reported.
pub fn check_identity(c: &IdentityCase) -> IdentityOutcome {
    let vars = c.left.vars();
    let mut checked = 0;
    let mut skipped = Vec::new();
    'spec: for a in &c.specializations {
        let mut rows = Vec::new();
        let mut scale = Scalar::one();
        for k in 0..=c.max_k {
            let left = definite_sum(&c.left, c.sum_var, c.rec_var, &c.upper, k, a);
            let right = c.right.eval(&with_value(a, c.rec_var, k));
            match (left, right) {
                (Ok(l), Ok(r)) => {
                    if k == 0 && c.normalize_at_zero {
                        scale = l.clone();
                    }
                    rows.push((k, l, r));
                }
                (Err(e), _) | (_, Err(e)) => {
                    skipped.push(format!("{}: {e}", render_assignment(vars, a)));
                    continue 'spec;
                }
            }
        }
        for (k, l, r) in rows {
            let r = match scale.try_mul(&r) {
                Ok(r) => r,
                Err(e) => {
                    skipped.push(format!("{}: {e}", render_assignment(vars, a)));
                    continue 'spec;
                }
            };
            if l != r {
                return IdentityOutcome::Fail {
                    specialization: render_assignment(vars, a),
                    k,
                    left: l,
                    right: r,
                };
            }
        }
        checked += 1;
    }
    IdentityOutcome::Pass { checked, skipped }
}

/// Checks `Σ σ_i(n)·S(n+i) = 0` for `n = 0..=n_max` with `S` computed by
/// direct summation. `Ok(None)` on success, otherwise the first failing `n`.
pub fn recurrence_shadow_check(
    rec: &Recurrence,
    t: &TermExpr,
    sum_var: usize,
    upper: &Affine,
    assign: &Assignment,
    n_max: i64,
) -> Result<Option<i64>, Error> {
    let r = rec.rec_var();
    let j = rec.order() as i64;
    let sums = (0..=n_max + j)
        .map(|n| definite_sum(t, sum_var, r, upper, n, assign))
        .collect::<Result<Vec<_>, _>>()?;
    for n in 0..=n_max {
        let mut acc = Scalar::zero();
        for (i, c) in rec.coeffs().iter().enumerate() {
            let s = c.eval(&with_value(assign, r, n))?;
            acc = acc.try_add(&s.try_mul(&sums[(n + i as i64) as usize])?)?;
        }
        if !acc.is_zero() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

const A_VALUES: [(i64, i64); 3] = [(1, 3), (1, 7), (5, 2)];
const B_VALUES: [(i64, i64); 2] = [(1, 5), (3, 7)];
const XY_VALUES: [(i64, i64); 2] = [(7, 3), (-2, 5)];
const OTHER_VALUES: [(i64, i64); 3] = [(2, 9), (11, 4), (-3, 8)];

/// The `i`-th default assignment of the parameters (every variable with
/// the parameter role).
pub fn default_specialization(vars: &Vars, i: usize) -> Assignment {
    (0..vars.len())
        .map(|v| {
            if vars.role(v) != Role::Parameter {
                return None;
            }
            let (n, d) = match vars.name(v) {
                "a" => A_VALUES[i % 3],
                "b" => B_VALUES[(i + i / 3) % 2],
                "x" => XY_VALUES[(i + i / 6) % 2],
                "y" => XY_VALUES[(i + 1 + i / 6) % 2],
                _ => {
                    let k = v + i;
                    OTHER_VALUES[k % 3]
                }
            };
            Some(Scalar::from_frac(n, d))
        })
        .collect()
}

/// Parses `a=1/3,b=1/5` into an assignment; unknown names are ignored.
pub fn parse_assignment(text: &str, vars: &Vars) -> Result<Assignment, Error> {
    let mut out = vec![None; vars.len()];
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("expected name=value, got `{part}`")))?;
        let value: BigRational = value
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad rational `{}`", value.trim())))?;
        if let Some(i) = vars.index(name.trim()) {
            out[i] = Some(Scalar::Rat(value));
        }
    }
    Ok(out)
}
