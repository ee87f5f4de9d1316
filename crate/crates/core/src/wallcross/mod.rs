//! Jumps of tope polynomials across walls, via residues of truncated Laurent expansions.

pub mod jump;
pub mod laurent;

pub use jump::{
    extend_from_wall, jump, jump_at, jump_by_subtraction, residue_pol, residue_pol_extended,
    vanishes_to_order_on_wall,
};
pub use laurent::{residue_kernel, TruncatedLaurent};
