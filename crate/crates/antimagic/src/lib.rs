//! Constructive antimagic edge labellings of (k,2)-biregular bipartite
//! graphs: builders for the connected odd-k, connected even-k, and
//! disconnected odd-k cases, plus independent verification and a
//! brute-force oracle for small instances.

pub mod cli;
pub mod dot;
pub mod error;
pub mod even;
pub mod generate;
pub mod graph;
pub mod labelling;
pub mod layering;
pub mod multi;
pub mod odd;
pub mod steps;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{BiregularGraph, Side, VertexRef};
pub use labelling::Labelling;
