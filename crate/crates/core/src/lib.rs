#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod boundary_layer;
pub mod characteristic_bc;
pub mod config;
pub mod driver;
pub mod error;
pub mod gas;
pub mod oracles;
pub mod output;
pub mod scheme;

pub use error::{Error, Result};
