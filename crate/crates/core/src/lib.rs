#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barrier;
pub mod bounds;
pub mod config;
pub mod error;
pub mod format;
pub mod linalg;
pub mod model;
pub mod quadrature;
pub mod solver;
pub mod sweep;
pub mod verify;
pub mod xi_suite;

pub use error::{Error, Result};
