//! Exact scalars and the dense linear algebra everything else reduces to.

pub mod linsys;
pub mod matrix;
pub mod scalar;
pub mod space;

pub use linsys::{Equation, MatrixSystem, Term};
pub use matrix::{
    add_vec, axpy, image, is_zero_vec, kernel, rref, scale, solve, solve_many, sub_vec,
    unit_vector, zeros, Matrix, Rref, Vector,
};
pub use scalar::{Field, Scalar};
pub use space::{kron_all, kron_vec, tensor_k, FinSpace, LinMap, QuotientSpace, TensorIndex};
