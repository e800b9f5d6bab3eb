pub mod error;
pub mod linalg;
pub mod monotone;
pub mod state;
pub mod covariance;
pub mod inequalities;
pub mod campaign;
pub mod instance;
pub mod report;
pub mod selftest;

pub use error::{Error, Result};
