pub mod error;
pub mod intlin;
pub mod perm;

pub use error::{Error, Result};
pub mod census;
pub mod cli;
pub mod constructions;
pub mod haupt;
pub mod invariants;
pub mod render;
pub mod surface;
pub mod surgery;
pub mod targeting;
