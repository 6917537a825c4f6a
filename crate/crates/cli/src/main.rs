//! `hypersum`: recurrences, closed forms and hypergeometric notation for
//! definite sums of hypergeometric terms.

mod render;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypersum::factorshop::{closedform, koornwinder_check, sum_to_hyper};
use hypersum::gosper::gosper_solve;
use hypersum::oracle::{paper_suite, SuiteOptions};
use hypersum::termdsl::{parse_term, TermExpr};
use hypersum::zeilberger::{sumrecursion, Telescoper, DEFAULT_MAX_ORDER};
use hypersum::Error;
use serde_json::json;

#[derive(Parser)]
#[command(name = "hypersum", version, about = "Exact symbolic summation of hypergeometric terms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Problem {
    /// Summand in the term grammar, or `-` to read it from stdin.
    summand: String,
    sum_var: String,
    rec_var: String,
    #[arg(long, env = "HYPERSUM_MAX_ORDER", default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Recurrence for the sum over the summation variable.
    Sumrecursion {
        #[command(flatten)]
        p: Problem,
        /// Also print the rational certificate.
        #[arg(long)]
        certificate: bool,
    },
    /// Hypergeometric term solving a first-order recurrence.
    Closedform {
        #[command(flatten)]
        p: Problem,
    },
    /// Whether the term ratio factors into linear forms over the integers.
    Koornwinder {
        #[command(flatten)]
        p: Problem,
    },
    /// The sum written as prefactor times a hypergeometric series.
    Sumtohyper {
        summand: String,
        sum_var: String,
        #[arg(long)]
        json: bool,
    },
    /// Indefinite summation certificate.
    Gosper {
        summand: String,
        var: String,
        #[arg(long)]
        json: bool,
    },
    /// Runs the golden regression cases.
    Verify {
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        json: bool,
        /// Directory of `*.case` files replacing the built-in set.
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long, env = "HYPERSUM_JOBS", default_value_t = 1)]
        jobs: usize,
    },
}

enum Failure {
    /// Bad input: exit code 2.
    Usage(String),
    /// No result or a failed check: exit code 1.
    Result(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::UnknownFunction(_) | Error::NonAffine(_) | Error::UnknownVariable(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Result(e.to_string()),
        }
    }
}

fn read_arg(text: &str) -> Result<String, Failure> {
    if text != "-" {
        return Ok(text.to_string());
    }
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
    Ok(s.trim().to_string())
}

fn term(text: &str, sum_var: &str, rec_var: Option<&str>) -> Result<TermExpr, Failure> {
    Ok(parse_term(&read_arg(text)?, sum_var, rec_var)?)
}

fn telescope(p: &Problem) -> Result<(TermExpr, Telescoper), Failure> {
    let t = term(&p.summand, &p.sum_var, Some(&p.rec_var))?;
    let (k, n) = (t.vars().require(&p.sum_var)?, t.vars().require(&p.rec_var)?);
    let tel = sumrecursion(&t, k, n, p.max_order)?;
    Ok((t, tel))
}

fn emit(json: bool, value: serde_json::Value, text: String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        println!("{text}");
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Sumrecursion { p, certificate } => {
            let (_, tel) = telescope(&p)?;
            let mut text = tel.recurrence.to_string();
            if certificate {
                text.push_str(&format!("\ncertificate: {}", tel.certificate));
            }
            emit(p.json, render::telescoper(&tel, certificate), text);
        }
        Command::Closedform { p } => {
            let (_, tel) = telescope(&p)?;
            let h = closedform(&tel.recurrence)?;
            emit(p.json, render::hyperterm(&h), h.to_string());
        }
        Command::Koornwinder { p } => {
            let (_, tel) = telescope(&p)?;
            let v = koornwinder_check(&tel.recurrence)?;
            emit(p.json, render::verdict(&v), render::verdict_text(&v));
        }
        Command::Sumtohyper { summand, sum_var, json } => {
            let t = term(&summand, &sum_var, None)?;
            let s = sum_to_hyper(&t, t.vars().require(&sum_var)?)?;
            let mut text = format!("{} * {}", s.prefactor, s.hyper);
            if s.offset != 0 {
                text.push_str(&format!("\noffset: {}", s.offset));
            }
            emit(json, render::sum_to_hyper(&s), text);
        }
        Command::Gosper { summand, var, json } => {
            let t = term(&summand, &var, None)?;
            let k = t.vars().require(&var)?;
            let Some(cert) = gosper_solve(&t.shift_ratio(k)?, k)? else {
                return Err(Failure::Result(format!("not Gosper-summable in {var}")));
            };
            let anti = format!("({cert})*({t})");
            emit(
                json,
                json!({ "certificate": cert.to_string(), "antidifference": anti }),
                format!("certificate: {cert}\nantidifference: {anti}"),
            );
        }
        Command::Verify { only, json, golden, jobs } => {
            let report = paper_suite(&SuiteOptions {
                only,
                golden_dir: golden,
                jobs,
            })
            .map_err(|e| Failure::Usage(e.to_string()))?;
            let text: Vec<String> = report.cases.iter().map(render::case_text).collect();
            let summary = format!(
                "{} of {} cases passed ({} ms)",
                report.cases.iter().filter(|c| c.passed()).count(),
                report.cases.len(),
                report.elapsed.as_millis()
            );
            emit(json, render::suite(&report), format!("{}\n{summary}", text.join("\n")));
            if !report.passed() {
                return Err(Failure::Result(summary));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Result(msg)) => {
            eprintln!("hypersum: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("hypersum: {msg}");
            ExitCode::from(2)
        }
    }
}
