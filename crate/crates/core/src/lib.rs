//! Identifiable parameter functions of rational ODE models.

pub mod algebra;
pub mod diff;
pub mod error;
pub mod fields;
pub mod io_elim;
pub mod model;
pub mod multi_exp;
pub mod pipeline;
pub mod wronskian;

pub use error::{Error, Result};
