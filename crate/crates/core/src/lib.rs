//! Cayley coordinates and Bruhat diagonals on compact symmetric spaces.

pub mod bruhat;
pub mod cayley;
pub mod components;
pub mod error;
pub mod golden;
pub mod linalg;
pub mod rep_compat;
pub mod sample;
pub mod space;

pub use bruhat::{d_via_cayley, d_via_coroots, d_via_fredholm, d_via_minors, ldu, DiagonalReport, LduFactorization, Method};
pub use cayley::{cayley, cayley_inverse, verify_image};
pub use components::{construct_witness, enumerate_components, limit_check, ComponentRep};
pub use error::{Error, Result};
pub use linalg::{CMatrix, IndexSet, SignatureSpec, C64};
pub use space::{build_tangent, validate_tangent, Coordinates, Family, SpaceSpec};
