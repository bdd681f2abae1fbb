//! Exact, depth-bounded constructions around paradoxical decompositions:
//! an exact quadratic ring, the free group on two letters and a free
//! rotation pair, equidecomposition certificates with their algebra, and
//! the absorption and doubling pipelines built on top.

pub mod doubling;
pub mod error;
pub mod report;

pub mod absorption;
pub mod actions;
pub mod equideco;
pub mod exactring;
pub mod freegroup;
pub mod rotact;

pub use error::{Error, Result};
pub use report::VerificationReport;
