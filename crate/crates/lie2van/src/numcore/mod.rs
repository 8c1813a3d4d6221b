//! Dense matrix utilities, exact differentials of matrix-built maps, the
//! scalar curve-derivative engine and permutation/shuffle combinatorics.
//!
//! Everything downstream funnels its numerics through two primitives: exact
//! product-rule tangents ([`JMat`]) and the scalar derivative engine
//! ([`curve_derivative`]). All other operations are exact at double precision.

mod deriv;
mod mat;
mod perm;
mod tensor;

pub use deriv::{curve_derivative, curve_derivative_tuned};
pub use mat::{JMat, Mat, TangentAt};
pub use perm::{block_sign, perm_sign, permutations, BlockPermutation, MAX_PERM_DEGREE};
pub use tensor::Tensor;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("singular matrix in solve/inverse")]
    Singular,
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}
