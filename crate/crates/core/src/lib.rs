//! Degree-sequence resilience experiments on random graphs.

pub mod adversary;
pub mod degree;
pub mod error;
pub mod expansion;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod matching;
pub mod random;
pub mod rotation;

pub use error::{Error, Result};
pub use graph::{Components, DegreeSequence, EdgeCounts, Graph, VertexSet};
