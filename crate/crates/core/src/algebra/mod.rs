//! Algebras by structure constants, bimodules by action matrices, balanced
//! tensor products and module hom spaces.

#[allow(clippy::module_inception)]
mod algebra;
mod bimodule;
mod hom;
mod tensor;

pub use algebra::{Algebra, AlgebraMap};
pub use bimodule::Bimodule;
pub use hom::{
    centralizer, centralizer_of_element, has_retraction, is_projective, module_hom_space,
    projectivity_with, verify_free_basis, Projectivity, Side,
};
pub use tensor::{BalancedTensor, TensorChain};
