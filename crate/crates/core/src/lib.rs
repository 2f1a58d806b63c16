pub mod classifier;
pub mod cli;
pub mod datagen;
pub mod error;
pub mod experiment;
pub mod numerics;
pub mod optim;
pub mod theory;

pub use error::{Error, Result};
