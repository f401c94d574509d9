//! Error-tracked arithmetic: complex balls, magnitudes, nome handling and tail bounds.

mod ball;
mod bounds;
mod mag;
mod tau;

pub use ball::{DecimalValue, ErrValue, Precision};
pub use bounds::{geometric_tail, geometric_tail_bound, pow2_up};
pub use mag::Mag;
pub use tau::{qpow, TauPoint};
