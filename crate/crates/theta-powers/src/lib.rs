pub mod arith;
pub mod asymptotics;
pub mod cli;
pub mod coeff;
pub mod error;
pub mod lattice;
pub mod suites;
pub mod theta;
pub mod zeros;

pub use error::{Error, Result};
