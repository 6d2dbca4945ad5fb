//! Exact rationals, substochastic matrices and partition labels.

mod completion;
mod matrix;
mod parse;
pub mod rational;

pub use completion::{minimal_completion_order, sub_defect_witness};
pub(crate) use matrix::check_permutation;
pub use matrix::{PartitionLabel, RowColProfile, SubstochMatrix};
pub use parse::{format_matrix, parse_matrix};
pub use rational::Rational;
