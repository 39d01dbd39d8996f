pub mod analytic;
pub mod error;
pub mod model;
pub mod numerics;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
