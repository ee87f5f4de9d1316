//! Multivariate splines, their convolutions with polynomial densities on affine subspaces,
//! and the decomposition of a Bernoulli series into such pieces.

pub mod affine;
pub mod polytope;
pub mod spline;

pub use affine::{
    affine_term, chamber_polynomial, contributing_affines, decomposition_eval, decomposition_terms,
    sufficient_radius, AffineTerm, Gram,
};
pub use polytope::{simplex_integral, Polytope};
pub use spline::{
    conv_eval, conv_eval_with_basis, fiber, is_pointed, on_linear_wall, polarized_spline_eval, spline_eval,
    valid_bases, Fiber, SplineSpec,
};
