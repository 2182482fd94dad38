//! Computable side of pochette surgery on closed 4-manifolds: gluing words
//! from slopes, homology of handle diagrams, and the homology of the surgered
//! manifold.

pub mod cli;
pub mod diagram;
pub mod gluing;
pub mod intlin;
pub mod slope;
pub mod surgery;
pub mod template;
