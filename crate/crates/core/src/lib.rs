pub mod error;
pub mod estimate;
pub mod mixing;
pub mod orthant;
pub mod qmc;
pub mod rankcorr;
pub mod sampler;
pub mod specfun;

pub use error::{Error, Result};
