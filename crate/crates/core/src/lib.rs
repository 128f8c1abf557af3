//! Decompositions of single-qutrit gates.

pub mod cartan;
pub mod cost;
pub mod dod;
pub mod error;
pub mod gates;
pub mod gellmann;
pub mod mat3;
pub mod report;
pub mod scalar;
pub mod symmetry;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision aliases.
pub type Mat3 = mat3::CMat3<f64>;
pub type Params = dod::DodParams<f64>;
pub type Solutions = dod::SolutionSet<f64>;
pub type Factors = cartan::CartanFactors<f64>;
pub type Chain = cartan::GivensChain<f64>;
pub type Relation = symmetry::RelationReport<f64>;
