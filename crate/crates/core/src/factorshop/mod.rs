//! Linear-form factorization of term ratios, radical parameters from
//! quadratic residuals, and conversion of first-order recurrences and sums
//! into hypergeometric notation.

mod closed;
mod linear;
mod quadratic;

pub use closed::{closedform, factor_in, hyperterm_from_ratio, koornwinder_check, sum_to_hyper, SumToHyper, Verdict};
pub use linear::{extract_linear_forms, FactorReport, LinearForm, QuadraticFactor};
pub use quadratic::{split_quadratic, split_quartic};
