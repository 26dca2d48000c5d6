//! Exact computations for cubical homotopy theory over prime fields.

pub mod barcobar;
pub mod cat;
pub mod chain;
pub mod cset;
pub mod cube;
pub mod error;
pub mod field;
pub mod linalg;
pub mod square;
pub mod sset;
pub mod suite;

pub use error::{Error, Result};
pub use field::Fp;
