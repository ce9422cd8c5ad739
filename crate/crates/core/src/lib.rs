//! Multiple zeta values computed through rapidly converging polylogarithm
//! series at `1/2`, on top of an exact shuffle Hopf algebra of words in
//! `a`, `b`.

pub mod cli;
pub mod error;
pub mod group;
pub mod numerics;
pub mod series;
pub mod transforms;
pub mod words;
pub mod zeta;

pub use error::{Error, Result};
