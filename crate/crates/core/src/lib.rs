//! Exact structure theory for the symmetric space GL_m over a quadratic
//! extension of a p-adic field modulo a quasi-split unitary group: Hermitian
//! form orbits, the induced involution on root data and parabolic
//! subgroups, Weyl double cosets, valuation cones with containment
//! certificates, and an exponent-decay certifier for relative discrete
//! series built on parabolically induced representations.

mod error;

pub mod certify;
pub mod cone;
pub mod linalg;
pub mod mat;
pub mod quad;
pub mod report;
pub mod root;
pub mod theta;

pub use error::{Error, Result};
