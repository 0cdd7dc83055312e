//! Lattices in `E'_J`, hermitian forms and enumeration of self-dual lattices.

pub mod enumerate;
pub mod linalg;
pub mod space;

pub use enumerate::{enumerate_selfdual, enumerate_selfdual_naive, Enumeration};
pub use space::{HermitianForm, Lattice, Space};
