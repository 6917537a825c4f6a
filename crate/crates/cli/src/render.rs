use hypersum::arith::quadext::QuadExtElem;
use hypersum::factorshop::{FactorReport, SumToHyper, Verdict};
use hypersum::oracle::{CaseReport, SuiteReport};
use hypersum::termdsl::HyperTerm;
use hypersum::zeilberger::Telescoper;
use serde_json::{json, Value};

pub fn param(p: &QuadExtElem) -> Value {
    json!({ "u": p.u().to_string(), "v": p.v().to_string(), "D": p.d().to_string() })
}

pub fn hyperterm(h: &HyperTerm) -> Value {
    json!({
        "text": h.to_string(),
        "upper": h.upper().iter().map(param).collect::<Vec<_>>(),
        "lower": h.lower().iter().map(param).collect::<Vec<_>>(),
        "z": h.z().to_string(),
        "var": h.var_name(),
    })
}

pub fn telescoper(t: &Telescoper, certificate: bool) -> Value {
    let rec = &t.recurrence;
    let mut v = json!({
        "recurrence": rec.to_string(),
        "order": rec.order(),
        "coefficients": rec.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    });
    if certificate {
        v["certificate"] = json!(t.certificate.to_string());
    }
    v
}

pub fn factor_report(r: &FactorReport) -> Value {
    json!({
        "scalar": r.scalar.to_string(),
        "linear": r.linear.iter().map(|(f, m)| json!({ "form": f.to_string(), "mult": m })).collect::<Vec<_>>(),
        "quadratic": r.quadratic.iter().map(|q| json!({
            "poly": q.poly.to_string(),
            "roots": [param(&q.roots.0), param(&q.roots.1)],
            "mult": q.mult,
        })).collect::<Vec<_>>(),
        "residual": r.residual.to_string(),
        "complete": r.is_complete(),
    })
}

pub fn verdict(v: &Verdict) -> Value {
    let (num, den) = v.reports();
    json!({
        "verdict": if v.is_rational() { "rational" } else { "nonrational" },
        "numerator": factor_report(num),
        "denominator": factor_report(den),
    })
}

pub fn verdict_text(v: &Verdict) -> String {
    let (num, den) = v.reports();
    let mut out = String::from(if v.is_rational() { "rational" } else { "nonrational" });
    for (label, r) in [("numerator", num), ("denominator", den)] {
        let forms: Vec<String> = r
            .linear
            .iter()
            .map(|(f, m)| if *m == 1 { format!("({f})") } else { format!("({f})^{m}") })
            .collect();
        out.push_str(&format!("\n{label}: {}", r.scalar));
        if !forms.is_empty() {
            out.push_str(&format!(" * {}", forms.join(" * ")));
        }
        for q in &r.quadratic {
            out.push_str(&format!(" * ({})", q.poly));
        }
        if !r.residual.is_constant() {
            out.push_str(&format!("\n  residual: {}", r.residual));
        }
    }
    out
}

pub fn sum_to_hyper(s: &SumToHyper) -> Value {
    json!({
        "prefactor": s.prefactor.to_string(),
        "offset": s.offset,
        "hyperterm": hyperterm(&s.hyper),
    })
}

pub fn case_text(c: &CaseReport) -> String {
    let mut out = format!(
        "{} {} ({} ms)",
        if c.passed() { "PASS" } else { "FAIL" },
        c.name,
        c.elapsed.as_millis()
    );
    for ch in &c.checks {
        if !ch.passed {
            out.push_str(&format!("\n  {}: {}", ch.name, ch.detail));
        }
    }
    for w in &c.warnings {
        out.push_str(&format!("\n  warning: {w}"));
    }
    out
}

pub fn suite(r: &SuiteReport) -> Value {
    json!({
        "passed": r.passed(),
        "elapsed_ms": r.elapsed.as_millis() as u64,
        "cases": r.cases.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed(),
            "elapsed_ms": c.elapsed.as_millis() as u64,
            "checks": c.checks.iter().map(|ch| json!({
                "name": ch.name, "passed": ch.passed, "detail": ch.detail,
            })).collect::<Vec<_>>(),
            "warnings": c.warnings,
        })).collect::<Vec<_>>(),
    })
}
