//! Rigidity, canonical labeling and reconstruction of sparse random graphs.

pub mod canon;
pub mod config;
pub mod cycles;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod par;
pub mod prob;
pub mod recon;
pub mod sample;
pub mod signature;
pub mod structure;
pub mod trees;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex, VertexSet};
