pub mod algebra;
pub mod amitsur;
pub mod connections;
pub mod coring;
pub mod error;
pub mod exactla;
pub mod instance;
pub mod par;
pub mod report;
