use std::path::PathBuf;
use std::time::{Duration, Instant};

use super::golden::{load_golden_dir, parse_golden, GoldenCase, BUILTIN_GOLDEN};
use super::{
    check_identity, default_specialization, parse_assignment, recurrence_shadow_check, render_assignment, Assignment,
    IdentityCase, IdentityOutcome, DEFAULT_K, DEFAULT_N_MAX,
};
use crate::arith::{Role, Vars};
use crate::factorshop::{closedform, koornwinder_check, sum_to_hyper};
use crate::termdsl::parse::{parse_ast, to_affine};
use crate::termdsl::{parse_hyperterm, parse_recurrence, parse_term, parse_term_with, Affine, HyperTerm, TermExpr};
use crate::zeilberger::{sumrecursion, verify_certificate, Recurrence, DEFAULT_MAX_ORDER};
use crate::Error;

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub only: Option<String>,
    /// Read cases from this directory instead of the built-in set.
    pub golden_dir: Option<PathBuf>,
    pub jobs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub elapsed: Duration,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub cases: Vec<CaseReport>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(CaseReport::passed)
    }

    pub fn case(&self, name: &str) -> Option<&CaseReport> {
        self.cases.iter().find(|c| c.name == name)
    }
}

struct Ctx {
    checks: Vec<Check>,
    warnings: Vec<String>,
}

impl Ctx {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    fn fail(&mut self, name: &str, e: &Error) -> bool {
        self.push(name, false, e.to_string())
    }
}

fn verdict(ok: bool, expected: &str, got: &str) -> String {
    if ok {
        got.to_string()
    } else {
        diff(expected, got)
    }
}

fn diff(expected: &str, got: &str) -> String {
    format!("\n  - expected: {expected}\n  + got:      {got}")
}

fn specializations(case: &GoldenCase, vars: &Vars) -> Result<Vec<Assignment>, Error> {
    let mut out: Vec<Assignment> = if case.specialize.is_empty() {
        (0..3).map(|i| default_specialization(vars, i)).collect()
    } else {
        case.specialize.iter().map(|s| parse_assignment(s, vars)).collect::<Result<_, _>>()?
    };
    for a in &out {
        for (i, v) in a.iter().enumerate() {
            if vars.role(i) == Role::Parameter && v.is_none() {
                return Err(Error::Invalid(format!("specialization leaves `{}` free", vars.name(i))));
            }
        }
    }
    out.dedup();
    Ok(out)
}

fn ratio_equal(expected: &HyperTerm, got: &HyperTerm) -> Result<bool, Error> {
    let v = expected.var();
    Ok(expected.to_termexpr()?.shift_ratio(v)? == got.to_termexpr()?.shift_ratio(v)?)
}

fn identity(ctx: &mut Ctx, case: &GoldenCase, base: IdentityCase, what: &str) {
    let outcome = check_identity(&base);
    for s in match &outcome {
        IdentityOutcome::Pass { skipped, .. } => skipped.clone(),
        _ => Vec::new(),
    } {
        ctx.warnings.push(format!("{what}: degenerate specialization skipped ({s})"));
    }
    match outcome {
        IdentityOutcome::Pass { checked, .. } => {
            ctx.push(what, checked > 0, format!("{checked} specialization(s), k <= {}", base.max_k));
        }
        IdentityOutcome::Fail { specialization, k, left, right } => {
            ctx.push(what, false, format!("{} at {specialization}, k={k}: left {left}, right {right}", case.name));
        }
    }
}

/// Runs every check that applies to one golden case.
pub fn run_case(case: &GoldenCase) -> CaseReport {
    let start = Instant::now();
    let mut ctx = Ctx {
        checks: Vec::new(),
        warnings: Vec::new(),
    };
    run_inner(case, &mut ctx);
    CaseReport {
        name: case.name.clone(),
        checks: ctx.checks,
        warnings: ctx.warnings,
        elapsed: start.elapsed(),
    }
}

fn run_inner(case: &GoldenCase, ctx: &mut Ctx) {
    let parsed = (|| -> Result<(TermExpr, usize, usize, Affine, Recurrence), Error> {
        let t = parse_term(&case.summand, &case.sum_var, Some(&case.rec_var))?;
        let vars = t.vars().clone();
        let (k, n) = (vars.require(&case.sum_var)?, vars.require(&case.rec_var)?);
        let upper = match &case.upper {
            Some(u) => to_affine(&parse_ast(u)?, &vars)?,
            None => Affine::var(&vars, n),
        };
        let rec = Recurrence::new(&vars, n, parse_recurrence(&case.recurrence, &vars, n)?)?;
        Ok((t, k, n, upper, rec))
    })();
    let (t, k, n, upper, expected) = match parsed {
        Ok(x) => x,
        Err(e) => {
            ctx.fail("parse", &e);
            return;
        }
    };
    ctx.push("parse", true, "");
    let vars = t.vars().clone();
    let specs = match specializations(case, &vars) {
        Ok(s) => s,
        Err(e) => {
            ctx.fail("specialize", &e);
            return;
        }
    };

    let tel = match sumrecursion(&t, k, n, case.max_order.unwrap_or(DEFAULT_MAX_ORDER)) {
        Ok(tel) => tel,
        Err(e) => {
            ctx.fail("recurrence", &e);
            return;
        }
    };
    let rec = tel.recurrence.clone();
    ctx.push(
        "recurrence",
        rec == expected,
        verdict(rec == expected, &expected.to_string(), &rec.to_string()),
    );
    match verify_certificate(&t, &rec, &tel.certificate, k) {
        Ok(ok) => ctx.push("certificate", ok, if ok { "" } else { "residual is nonzero" }),
        Err(e) => ctx.fail("certificate", &e),
    };

    let n_max = case.n_max.unwrap_or(DEFAULT_N_MAX);
    let mut shadows = 0;
    for a in &specs {
        match recurrence_shadow_check(&expected, &t, k, &upper, a, n_max) {
            Ok(None) => shadows += 1,
            Ok(Some(bad)) => {
                ctx.push("shadow", false, format!("fails at {} with {}={bad}", render_assignment(&vars, a), case.rec_var));
                break;
            }
            Err(e) => ctx.warnings.push(format!("shadow: degenerate specialization skipped ({}: {e})", render_assignment(&vars, a))),
        }
    }
    if !ctx.checks.iter().any(|c| c.name == "shadow") {
        ctx.push("shadow", shadows > 0, format!("{shadows} specialization(s), {} <= {n_max}", case.rec_var));
    }

    let max_k = case.max_k.unwrap_or(DEFAULT_K);
    let base = |right: TermExpr, normalize_at_zero: bool| IdentityCase {
        name: case.name.clone(),
        left: t.clone(),
        sum_var: k,
        rec_var: n,
        upper: upper.clone(),
        right,
        normalize_at_zero,
        specializations: specs.clone(),
        max_k,
    };

    if let Some(cf) = &case.closedform {
        let got = if rec.order() == 1 { closedform(&rec) } else { Err(Error::OrderMismatch(rec.order())) };
        if cf == "none" {
            match got {
                Err(Error::CannotRepresent(_)) | Err(Error::OrderMismatch(_)) => ctx.push("closedform", true, "no hypergeometric closed form"),
                Err(e) => ctx.fail("closedform", &e),
                Ok(h) => ctx.push("closedform", false, diff("none", &h.to_string())),
            };
        } else {
            match parse_hyperterm(cf, &vars).and_then(|exp| Ok((ratio_equal(&exp, got.as_ref().map_err(Clone::clone)?)?, exp))) {
                Ok((true, exp)) => {
                    ctx.push("closedform", true, got.as_ref().map(|h| h.to_string()).unwrap_or_default());
                    match exp.to_termexpr() {
                        Ok(right) => identity(ctx, case, base(right, true), "identity"),
                        Err(e) => {
                            ctx.fail("identity", &e);
                        }
                    }
                }
                Ok((false, _)) => {
                    ctx.push("closedform", false, diff(cf, &got.map(|h| h.to_string()).unwrap_or_default()));
                }
                Err(e) => {
                    ctx.fail("closedform", &e);
                }
            }
        }
    }

    if let Some(rhs) = &case.rhs {
        match parse_term_with(rhs, &vars) {
            Ok(right) => identity(ctx, case, base(right, false), "rhs"),
            Err(e) => {
                ctx.fail("rhs", &e);
            }
        }
    }

    if case.koornwinder.is_some() || case.residual_degrees.is_some() {
        match koornwinder_check(&rec) {
            Ok(v) => {
                if let Some(want) = case.koornwinder {
                    let label = |r: bool| if r { "rational" } else { "nonrational" };
                    let ok = v.is_rational() == want;
                    ctx.push("koornwinder", ok, verdict(ok, label(want), label(v.is_rational())));
                }
                if let Some(want) = &case.residual_degrees {
                    let mut got: Vec<i64> = v.witnesses().iter().map(|w| w.degree(n) as i64).collect();
                    got.sort_unstable();
                    let mut want = want.clone();
                    want.sort_unstable();
                    ctx.push("residual_degrees", got == want, verdict(got == want, &format!("{want:?}"), &format!("{got:?}")));
                }
            }
            Err(e) => {
                ctx.fail("koornwinder", &e);
            }
        }
    }

    if case.prefactor.is_some() || case.sumtohyper.is_some() {
        sumtohyper_checks(ctx, case, &t, k, n, &specs, max_k);
    }
}

fn sumtohyper_checks(ctx: &mut Ctx, case: &GoldenCase, t: &TermExpr, k: usize, n: usize, specs: &[Assignment], max_k: i64) {
    let vars = t.vars();
    let got = match sum_to_hyper(t, k) {
        Ok(g) => g,
        Err(e) => {
            ctx.fail("sumtohyper", &e);
            return;
        }
    };
    if let Some(h) = &case.sumtohyper {
        match parse_hyperterm(h, vars).and_then(|exp| ratio_equal(&exp, &got.hyper)) {
            Ok(ok) => ctx.push("sumtohyper", ok, verdict(ok, h, &got.hyper.to_string())),
            Err(e) => ctx.fail("sumtohyper", &e),
        };
    }
    if let Some(p) = &case.prefactor {
        let exp = match parse_term_with(p, vars) {
            Ok(e) => e,
            Err(e) => {
                ctx.fail("prefactor", &e);
                return;
            }
        };
        let mut bad = None;
        'outer: for a in specs {
            for m in 0..=max_k {
                let mut a = a.clone();
                a[n] = Some(crate::arith::Scalar::from_int(m));
                if let (Ok(x), Ok(y)) = (exp.eval(&a), got.prefactor.eval(&a)) {
                    if x != y {
                        bad = Some(format!("{} at {}", diff(p, &got.prefactor.to_string()), render_assignment(vars, &a)));
                        break 'outer;
                    }
                }
            }
        }
        let ok = bad.is_none();
        ctx.push("prefactor", ok, bad.unwrap_or_else(|| got.prefactor.to_string()));
    }
}

fn load(opts: &SuiteOptions) -> Result<Vec<GoldenCase>, Error> {
    let cases = match &opts.golden_dir {
        Some(dir) => load_golden_dir(dir)?,
        None => BUILTIN_GOLDEN
            .iter()
            .map(|(file, text)| parse_golden(text).map_err(|e| Error::Invalid(format!("{file}: {e}"))))
            .collect::<Result<_, _>>()?,
    };
    let cases: Vec<_> = cases.into_iter().filter(|c| opts.only.as_ref().is_none_or(|o| &c.name == o)).collect();
    if cases.is_empty() {
        return Err(Error::Invalid(match &opts.only {
            Some(o) => format!("no golden case named `{o}`"),
            None => "no golden cases".into(),
        }));
    }
    Ok(cases)
}

/// Runs the golden cases, in parallel when `jobs > 1`; the report keeps
/// the input order.
pub fn paper_suite(opts: &SuiteOptions) -> Result<SuiteReport, Error> {
    let start = Instant::now();
    let cases = load(opts)?;
    let jobs = opts.jobs.max(1).min(cases.len());
    let mut slots: Vec<Option<CaseReport>> = vec![None; cases.len()];
    if jobs == 1 {
        for (slot, c) in slots.iter_mut().zip(&cases) {
            *slot = Some(run_case(c));
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let done = std::sync::Mutex::new(&mut slots);
        std::thread::scope(|s| {
            for _ in 0..jobs {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    let Some(c) = cases.get(i) else { break };
                    let r = run_case(c);
                    done.lock().expect("no poisoned lock")[i] = Some(r);
                });
            }
        });
    }
    Ok(SuiteReport {
        cases: slots.into_iter().map(|r| r.expect("every case ran")).collect(),
        elapsed: start.elapsed(),
    })
}
