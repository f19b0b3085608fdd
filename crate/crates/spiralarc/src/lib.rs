//! Biarc and triarc approximation of planar spirals with length preservation.

pub mod approx;
pub mod biarc;
pub mod bounds;
pub mod bilens;
pub mod curve;
pub mod error;
pub mod exec;
pub mod fit;
pub mod geom;
pub mod mobius;
pub mod model;
pub mod oval;
pub mod region;
pub mod roots;
pub mod triarc;

pub use error::{Error, Result};
pub use exec::Exec;
