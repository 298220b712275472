pub mod cli;
pub mod clustering;
pub mod coreset;
pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod io;
pub mod metrics;
mod rng;
pub mod sensitivity;

pub use error::{Error, ObjectKind, Result};
