//! Enumeration of minimal connected dominating sets by branch and reduce,
//! with an exhaustive oracle, instance generators and the arithmetic of the
//! running-time analysis.

pub mod analysis;
pub mod catalog;
pub mod engine;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
