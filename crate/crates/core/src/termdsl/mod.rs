pub mod affine;
pub mod hyper;
pub mod parse;
pub mod term;

pub use affine::Affine;
pub use hyper::{cauchy_summand, HyperTerm};
pub use parse::{parse_hyperterm, parse_quad, parse_ratfunc, parse_recurrence, parse_term, parse_term_with};
pub use term::{Factor, TermExpr};
