mod comodule;
#[allow(clippy::module_inception)]
mod coring;
mod dual;
mod entwining;
mod grouplike;
mod structure;

pub use comodule::{comodule_hom_space, Comodule};
pub use coring::Coring;
pub use dual::{
    augmentation, check_dual_action, dual_action, dual_product, dual_ring, endomorphism_map, Augmentation, DualRing,
    EndomorphismMap,
};
pub use entwining::{Coalgebra, EntwiningData};
pub use grouplike::{classify, coinvariant_subring, format_vec, search_grouplikes, Grouplike, GrouplikeKind, SEARCH_LIMIT};
pub use structure::{
    adjunction_dims, decomposition_maps, free_coinvariant_module, grouplike_maps, grouplike_ring_structure,
    hom_coinv_iso, verify_coinv_c_iso, CoinvariantIso, Decomposition, GrouplikeRing, HomCoinvariants,
};
