//! Exact calculus of Weil cochains on Lie algebroids presented by polynomial
//! structure data over a coordinate chart.

pub mod algebroid;
pub mod connections;
pub mod error;
pub mod fixtures;
pub mod ideals;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod spec;
pub mod weil;

pub use error::{Error, Result};
