//! Syzygies, stable module categories and adjoint search for finite
//! dimensional algebras over prime fields.

pub mod adjoint;
pub mod algebra;
pub mod catalog;
pub mod error;
pub mod input;
pub mod krull_schmidt;
pub mod linalg;
pub mod module;
pub mod nonneg;
pub mod projectives;
pub mod reproduce;
pub mod stable;

pub use error::{Error, Result};
