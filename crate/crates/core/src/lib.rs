pub mod cli;
pub mod corpus;
pub mod error;
pub mod finiteness;
pub mod lambda;
pub mod names;
pub mod resource;
pub mod taylor;
pub mod types;

pub use error::{Error, Result};
