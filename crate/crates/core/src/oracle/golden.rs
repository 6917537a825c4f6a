use std::path::Path;

use crate::Error;

/// One regression case in `key: value` form. Lines starting with
/// whitespace continue the previous value; `#` starts a comment line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoldenCase {
    pub name: String,
    pub summand: String,
    pub sum_var: String,
    pub rec_var: String,
    /// Upper summation bound in the recurrence variable; defaults to it.
    pub upper: Option<String>,
    pub max_order: Option<usize>,
    pub recurrence: String,
    /// Expected closed form; `none` when no hypergeometric term exists.
    pub closedform: Option<String>,
    /// Right-hand side term in the recurrence variable.
    pub rhs: Option<String>,
    pub koornwinder: Option<bool>,
    pub residual_degrees: Option<Vec<i64>>,
    pub prefactor: Option<String>,
    pub sumtohyper: Option<String>,
    pub specialize: Vec<String>,
    pub max_k: Option<i64>,
    pub n_max: Option<i64>,
}

pub const BUILTIN_GOLDEN: &[(&str, &str)] = &[
    ("first-example.case", include_str!("../../golden/first-example.case")),
    ("first-example-binomial.case", include_str!("../../golden/first-example-binomial.case")),
    ("clausen.case", include_str!("../../golden/clausen.case")),
    ("exp-addition.case", include_str!("../../golden/exp-addition.case")),
    ("kummer.case", include_str!("../../golden/kummer.case")),
    ("even-product-cauchy.case", include_str!("../../golden/even-product-cauchy.case")),
    ("even-product.case", include_str!("../../golden/even-product.case")),
    ("square-a-minus-1.case", include_str!("../../golden/square-a-minus-1.case")),
    ("square-three-quarters.case", include_str!("../../golden/square-three-quarters.case")),
    ("square-a-minus-2.case", include_str!("../../golden/square-a-minus-2.case")),
    ("square-a-minus-3.case", include_str!("../../golden/square-a-minus-3.case")),
    ("even-a-minus-2.case", include_str!("../../golden/even-a-minus-2.case")),
    ("even-a-minus-3.case", include_str!("../../golden/even-a-minus-3.case")),
    ("a-plus-3.case", include_str!("../../golden/a-plus-3.case")),
];

fn int_field(key: &str, v: &str) -> Result<i64, Error> {
    v.trim().parse().map_err(|_| Error::Invalid(format!("{key}: expected an integer, got `{v}`")))
}

pub fn parse_golden(text: &str) -> Result<GoldenCase, Error> {
    let mut entries: Vec<(String, String)> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        if line.starts_with([' ', '\t']) {
            let last = entries
                .last_mut()
                .ok_or_else(|| Error::Invalid(format!("line {}: continuation without a key", no + 1)))?;
            last.1.push_str(line.trim());
            continue;
        }
        let (k, v) = line
            .split_once(':')
            .ok_or_else(|| Error::Invalid(format!("line {}: expected `key: value`", no + 1)))?;
        entries.push((k.trim().to_string(), v.trim().to_string()));
    }
    let mut c = GoldenCase::default();
    for (k, v) in entries {
        match k.as_str() {
            "name" => c.name = v,
            "summand" => c.summand = v,
            "sum_var" => c.sum_var = v,
            "rec_var" => c.rec_var = v,
            "upper" => c.upper = Some(v),
            "max_order" => c.max_order = Some(int_field(&k, &v)? as usize),
            "recurrence" => c.recurrence = v,
            "closedform" => c.closedform = Some(v),
            "rhs" => c.rhs = Some(v),
            "koornwinder" => {
                c.koornwinder = Some(match v.as_str() {
                    "rational" => true,
                    "nonrational" => false,
                    _ => return Err(Error::Invalid(format!("koornwinder: expected rational or nonrational, got `{v}`"))),
                })
            }
            "residual_degrees" => {
                c.residual_degrees = Some(v.split_whitespace().map(|d| int_field(&k, d)).collect::<Result<_, _>>()?)
            }
            "prefactor" => c.prefactor = Some(v),
            "sumtohyper" => c.sumtohyper = Some(v),
            "specialize" => c.specialize = v.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
            "K" => c.max_k = Some(int_field(&k, &v)?),
            "n_max" => c.n_max = Some(int_field(&k, &v)?),
            _ => return Err(Error::Invalid(format!("unknown key `{k}`"))),
        }
    }
    for (key, val) in [("name", &c.name), ("summand", &c.summand), ("sum_var", &c.sum_var), ("rec_var", &c.rec_var), ("recurrence", &c.recurrence)] {
        if val.is_empty() {
            return Err(Error::Invalid(format!("missing `{key}`")));
        }
    }
    Ok(c)
}

/// Every `*.case` file of a directory, sorted by file name.
pub fn load_golden_dir(dir: &Path) -> Result<Vec<GoldenCase>, Error> {
    let rd = std::fs::read_dir(dir).map_err(|e| Error::Invalid(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "case"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
            parse_golden(&text).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))
        })
        .collect()
}
