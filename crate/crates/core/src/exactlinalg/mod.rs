//! Exact rational scalars, dense matrices and integer lattice algorithms.

pub mod lattice;
pub mod matrix;
pub mod rat;

pub use lattice::{
    coset_representatives, hermite_normal_form, lattice_intersect, lattice_quotient,
    primitive_equation, smith_normal_form, LatticeQuotient,
};
pub use matrix::{rank_of, rank_of_z, Mat, MatQ, MatZ};
pub use rat::*;
