//! Substochastic matrices with fixed element sum or fixed sub-defect:
//! exact classification, extreme-point tests, constructive vertices,
//! convex decompositions and diagonal/permanent bounds.

pub mod bigraph;
pub mod bounds;
pub mod construction;
pub mod decomposition;
pub mod error;
pub mod exec;
pub mod extremality;
pub mod ratmat;
pub mod sample;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Execution;
pub use ratmat::{parse_matrix, Rational, RowColProfile, SubstochMatrix};
