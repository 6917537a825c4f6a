//! Exact arithmetic substrate.

pub mod gcd;
pub mod linsolve;
pub mod poly;
pub mod quadext;
pub mod ratfunc;
pub mod scalar;
pub mod univariate;
pub mod vars;

pub use gcd::{content_in, gcd, lcm, squarefree_factors};
pub use poly::{Monomial, MultiPoly};
pub use ratfunc::RatFunc;
pub use scalar::Scalar;
pub use vars::{Role, VarTable, Vars};
