#![allow(clippy::needless_range_loop, clippy::explicit_counter_loop)]

pub mod abelian;
pub mod arith;
pub mod cli;
pub mod error;
pub mod numberfield;
pub mod polya;
pub mod quadratic;
pub mod verify;

pub use error::{Error, Result};
