//! Exact computation of multiple Bernoulli series attached to a list of lattice vectors:
//! tope polynomials, wall-crossing jumps, spline decompositions, Euler-MacLaurin checks
//! and the affine (exponential) variant.

pub mod error;
pub mod exactlinalg;
pub mod polynomials;
pub mod arrangement;
pub mod berseries;
pub mod wallcross;
pub mod splines;
pub mod eulermaclaurin;
pub mod affineseries;
pub mod cli;

pub use error::{Error, Result};
