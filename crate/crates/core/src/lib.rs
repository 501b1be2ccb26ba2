//! Weighted graded roots and two-variable series for negative definite
//! plumbed 3-manifolds.

pub mod admissible;
pub mod cli;
pub mod error;
pub mod fuzz;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod plumbing;
pub mod poly;
pub mod rational;
pub mod root;
pub mod series;
pub mod spinc;

pub use error::{Error, Result};
pub use plumbing::{IndexMap, IntersectionMatrix, NeumannMove, Plumbing};
pub use rational::Q;
