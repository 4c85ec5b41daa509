//! Dense state-vector simulation of which-path marking, quantum erasure,
//! delayed-choice arrangements, the no-communication theorem, detection
//! densities under continuous evolution, and consistent histories.

pub mod error;
pub mod hilbert;

pub use error::{Error, Result};
pub mod catalog;
pub mod optics;
pub mod random;
pub mod experiments;
pub mod nocomm;
pub mod temporal;
pub mod histories;
