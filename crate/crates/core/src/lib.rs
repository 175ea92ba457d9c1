pub mod cli;
pub mod config;
pub mod equilibrium;
pub mod error;
pub mod extremal;
pub mod factors;
pub mod numerics;
pub mod sets;

pub use error::{Error, Result};
