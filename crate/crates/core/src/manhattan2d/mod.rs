//! Two-dimensional Manhattan systems on staircase regions, solved level by
//! level through conditional moment polynomials along zigzag chains.

mod polynomial;
mod recursion;
mod zigzag;

pub use polynomial::{indexed_variables, Exponents, SparsePolynomial, DEFAULT_TERM_CAP};
pub use recursion::{
    advance_r, advance_r_with_cap, delta_product_moment, expected_r, r0_polynomial, r_polynomial, MAX_MOMENT_SLOTS,
};
pub use zigzag::{delta_region, gamma_set, level_set, ZigzagChain};
