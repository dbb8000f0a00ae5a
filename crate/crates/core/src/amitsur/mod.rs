//! The Amitsur differential graded ring of a coring with a grouplike
//! element, its cohomology, Galois corings and universal differential forms.

mod complex;
mod entwined;
mod forms;
mod from_dg;
mod galois;

pub use complex::{check_restriction, AmitsurComplex, CohomologySummary, DegreeSummary};
pub use entwined::{coaction_from_grouplike, EntwinedForms};
pub use forms::{theta_iso, ThetaIso, UniversalForms};
pub use from_dg::{coring_from_dg, reconstruct, DgCoring, DgData};
pub use galois::{
    acyclicity, contracting_homotopy, find_free_basis, galois_map, verify_star_identity, Acyclicity, GaloisMap, Homotopy,
};
