//! Cross-ratio degrees of 4-uniform hypergraphs.

pub mod classify;
pub mod hypergraph;
pub mod polya;
pub mod reduce;
pub mod solver;
