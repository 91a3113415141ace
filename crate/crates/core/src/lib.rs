pub mod circuits;
pub mod cli;
pub mod error;
pub mod holonomy;
pub mod linalg;
pub mod spectral;
pub mod subsetsum;

pub use error::{Error, Result};
