//! Lattice-counting orbital integrals for unitary groups over `F_q((t))`.

pub mod chardata;
pub mod corpus;
pub mod error;
pub mod geometry;
pub mod instance;
pub mod lattice;
pub mod local;
pub mod orbital;
pub mod report;
pub mod transform;

pub use error::{Result, UflError};

/// Polynomials over `F' = F_{q^2}((t))`.
pub type SeriesPoly = local::Poly<local::Series>;
/// Matrices over `F'`.
pub type SeriesMatrix = local::Matrix<local::Series>;
/// Polynomials with rational coefficients.
pub type RationalPoly = local::Poly<num_rational::BigRational>;
