use thiserror::Error;

use crate::exactla::Field;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("mixed scalar kinds: expected {expected}, found {found}")]
    MixedScalars { expected: Field, found: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("rings do not match: {0}")]
    RingMismatch(String),
    #[error("action axioms fail: {0}")]
    ActionAxioms(String),
    #[error("not a subspace: {0}")]
    NotClosed(String),
    #[error("{0} is not a grouplike element")]
    NotGrouplike(String),
    #[error("entwining data does not define a coring: {0}")]
    NotEntwining(String),
    #[error("invalid coaction: {0}")]
    InvalidComodule(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("degree {degree} exceeds the maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("the coring is not Galois")]
    NotGalois,
    #[error("search space too large: {0}")]
    SearchTooLarge(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("connection is not flat: {0}")]
    NotFlat(String),
    #[error("map is not a section: {0}")]
    NotSection(String),
}

pub type Result<T> = std::result::Result<T, Error>;
