//! Exact symbolic scalars for tensor calculus.
//!
//! An [`Expr`] is a rational function over symbols and calls of
//! `exp`, `sinh`, `cosh`, `sin`, `cos` and `sqrt`, kept in a canonical
//! form so that structurally different inputs with the same value compare
//! equal whenever the value is a rational function.

mod diff;
mod display;
mod error;
mod eval;
mod expr;
mod gcd;
mod parse;
mod poly;
mod sample;
mod symbol;
mod zero;

pub use diff::differentiate;
pub use error::{EvalError, ParseError, ParseErrorKind, SymbolError};
pub use eval::{
    bits_for_digits, eval_exact, eval_numeric, float_to_string, rational_sqrt, rational_to_float,
    Assignment,
};
pub use expr::Expr;
pub use gcd::{div_exact as poly_div_exact, gcd as poly_gcd, lcm as poly_lcm};
pub use parse::parse_expr;
pub use poly::{Atom, Kernel, Monomial, Poly};
pub use sample::{mix_seed, sample_assignment, sample_rational, stream_of, GenericPoint};
pub use symbol::{Assumption, Symbol, SymbolKind, SymbolTable};
pub use zero::{is_zero, zero_test, ZeroCertificate, ZeroTestConfig};

pub use astro_float::BigFloat;
pub use num_rational::BigRational;
