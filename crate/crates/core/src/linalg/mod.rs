//! Dense complex linear algebra.

mod eig;
mod json;
mod matrix;
mod ops;
#[cfg(test)]
pub(crate) mod testutil;
mod validate;

pub use eig::{herm_eig, singular_values, spectral_norm, trace_norm, unitary_from_generator, HermitianEig};
pub use matrix::{ComplexMatrix, C64, I, ONE, ZERO};
pub use ops::{
    commutator, flip_operator, kron, partial_trace, permutation_matrix, permute_second_factor,
    tensor_sum_diagonal, BipartiteShape, Side,
};
pub use validate::{validate, MatrixKind, ValidationReport};

/// Default tolerance for structural predicates.
pub const DEFAULT_TOL: f64 = 1e-9;
