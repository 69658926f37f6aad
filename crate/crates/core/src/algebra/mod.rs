//! Exact arithmetic: rationals, sparse polynomials, rational functions,
//! Gröbner bases and linear algebra over function fields.

pub mod field;
pub mod gcd;
pub mod groebner;
pub mod matrix;
pub mod monomial;
pub mod poly;
pub mod ratfunc;
pub mod var;

pub use field::{rat, rat2, Field, Rational};
pub use groebner::{eliminate, groebner, normal_form, saturate, BlockKind, Budget, TermOrder};
pub use matrix::{rank_probabilistic, rank_symbolic, Matrix};
pub use monomial::Monomial;
pub use poly::{Poly, Polynomial};
pub use ratfunc::{RatFunc, RfPoly};
pub use var::Var;
