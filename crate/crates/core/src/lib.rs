//! Implement sparse unitaries through their Hermitian dilation.
//!
//! A unitary `U` with few nonzeros per row and column is embedded into the
//! Hermitian matrix `H = [[0, U], [U^dagger, 0]]`. Since `H^2 = I`, evolving
//! for time `pi/2` gives `exp(-i H pi/2) = -i H`, so an input placed in the
//! lower block comes out in the upper block as `-i U psi`. The evolution is
//! realized by splitting `H` into one-sparse terms (an edge coloring of its
//! sparsity graph), exponentiating each term exactly, and composing them with
//! a first- or second-order product formula whose error is certified in
//! operator norm.
//!
//! The [`models`] module provides sparse unitaries worth feeding through the
//! pipeline: truncated quantum Turing machines, the Hadamard-coined walk on a
//! cycle and Young's orthogonal form for the symmetric group.

pub mod cli;
pub mod decompose;
pub mod dilation;
mod error;
pub mod models;
pub mod sparse;
pub mod trotter;

pub use error::{Error, Result};
pub use sparse::{
    apply, check_unitary, distance, random_sparse_unitary, row_nonzeros, spectral_norm, to_dense, DenseMatrix,
    RowAccess, RowOracle, SparseMatrix, StateVector, C64,
};
