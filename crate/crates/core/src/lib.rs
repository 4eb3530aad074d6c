pub mod convolution;
pub mod error;
pub mod estimator;
pub mod exponents;
pub mod grid;
pub mod group;
pub mod measure;
pub mod numeric;
pub mod riesz;
pub mod verify;

pub use error::{Error, Result};
