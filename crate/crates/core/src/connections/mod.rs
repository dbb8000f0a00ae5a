//! Connections with values in `Ω(C/S)`, curvature, the bijection between
//! flat connections and comodule structures, and projectivity.

mod connection;
mod entwined;
mod projective;

pub use connection::{
    coaction_to_connection, connection_exists, connection_from_section, connection_from_values, counit_map,
    flat_round_trip, morphism_correspondence, non_flat_perturbation, Connection, MorphismCorrespondence,
};
pub use entwined::{entwining_flat_connection_ac, entwining_flat_connection_ca, EntwinedConnection};
pub use projective::{cuntz_quillen_check, universal_complex, CuntzQuillen};
