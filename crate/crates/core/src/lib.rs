pub mod arith;
pub mod cli;
pub mod congruence;
pub mod error;
pub mod geometry;
pub mod pipelines;
pub mod poly;
pub mod rationality;
pub mod series;

pub use error::{Error, Result};
pub use poly::IntPoly;
