//! Deterministic CONGEST simulation of K-backup placement and the two
//! virtual-memory schedulers built on it.

pub mod cli;
pub mod coloring;
pub mod error;
pub mod generators;
pub mod graph;
pub mod kbp;
pub mod oracle;
pub mod sim;
pub mod structure;
pub mod vm;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
