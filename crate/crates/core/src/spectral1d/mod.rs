//! One-dimensional Manhattan systems through the transfer operator in the
//! Hermite basis.

mod eigen;
mod hermite;
mod transfer;

pub use eigen::{
    leading_eigenvalue, mle_1d, mle_upper_bound, operator_norm_bound, EigenResult, SolverParams, UpperBound,
    DEFAULT_TRUNCATION, MAX_TRUNCATION, SLOW_RHO, SLOW_TRUNCATION,
};
pub use hermite::{gauss_hermite_expectation, hermite_monomial_table, hermite_polynomial, hermite_to_monomial};
pub use transfer::{
    advance_q, advance_q_truncated, log_product_moment_1d, moment_ratio, product_moment_1d, q_sequence,
    transfer_matrix, HermiteVector, ScaledRecursion, TransferMatrix,
};
