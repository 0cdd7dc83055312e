//! Exact local arithmetic: finite fields, truncated Laurent series, tame
//! extensions and generic polynomial/matrix algebra.

pub mod fqlinalg;
pub mod gf;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod tame;

pub use gf::{Gf, GfCtx};
pub use matrix::Matrix;
pub use poly::Poly;
pub use scalar::Ring;
pub use series::{Series, EXACT};
pub use tame::{Tame, TameExt};
