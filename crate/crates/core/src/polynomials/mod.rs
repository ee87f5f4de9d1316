//! Sparse rational polynomials, Bernoulli polynomials and constant-coefficient differential operators.

pub mod pipoly;
pub mod poly;

pub use pipoly::PiPolynomial;
pub use poly::{
    apply_diff_operator, bernoulli_numbers, bernoulli_polynomial, exponents_up_to, interpolate,
    MultiPolyQ,
};
