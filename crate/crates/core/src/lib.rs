pub mod cli;
pub mod error;
pub mod exact;
pub mod links;
pub mod minors;
pub mod pipeline;
pub mod poly;
pub mod recognition;
pub mod scaling;
pub mod symmetry;
pub mod tables;

pub use error::{Error, Result};
