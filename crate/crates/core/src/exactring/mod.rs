//! Exact arithmetic over `Z[√2][1/6]`: scalars `(p + q√2)/(2^a·3^b)`,
//! 3-vectors, 3×3 matrices and rigid motions built from them.
//!
//! Nothing in here touches floating point except the explicit
//! approximation helpers used by exporters.

mod linalg;
mod scalar;

pub use linalg::{IsometryE, Mat3E, Vec3E};
pub use scalar::RingScalar;
