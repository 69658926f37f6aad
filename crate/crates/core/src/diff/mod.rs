//! Differential polynomials, rankings and Ritt reduction.

pub mod diffpoly;
pub mod ranking;
pub mod ritt;

pub use diffpoly::{derive, initial, leader, rank, separant};
pub use ranking::Ranking;
pub use ritt::{compare_autoreduced, ritt_reduce, strip_factors, AutoreducedSet, Reduction};
