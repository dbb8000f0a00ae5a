//! Instance files: a JSON description of algebras, a coring (explicit or
//! built by a constructor), grouplike candidates and modules, and the
//! verification suites run on them.

mod build;
mod raw;
mod suite;

pub use build::{Candidate, Construction, Instance, InstanceModule};
pub use raw::{parse_raw, RawInstance};
pub use suite::*;
