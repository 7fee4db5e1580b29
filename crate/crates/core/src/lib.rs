pub mod algebra;
pub mod cli;
pub mod error;
pub mod frontend;
pub mod limits;
pub mod logics;
pub mod primitive;
pub mod selftest;
pub mod semantics;
pub mod structures;
pub mod universe;

pub use error::{Error, Result};
