//! Tope polynomials of multiple Bernoulli series: partial fractions, independent lists with
//! coset averaging, inclusion-exclusion over the regular set, and generalized prefactors.

pub mod generalized;
pub mod partial;
pub mod series;

pub use generalized::{
    fourier_partial_sum, fourier_partial_sum_q, poly_prefactor_series, quotient_system,
    theta_series_tope_poly, QuotientSystem,
};
pub use partial::{partial_fractions, verify_partial_fractions, PartialFractionTerm};
pub use series::{ber_eval, ber_tope_poly, independent_tope_poly, rescale_to_primitive, series};
