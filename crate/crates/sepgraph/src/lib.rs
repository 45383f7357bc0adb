//! Symbolic computation for finitely separated graphs.
//!
//! * [`graph`]: separated graphs, morphisms, complete subobjects and derived graphs.
//! * [`algebra`]: normal forms and homomorphisms in Cohn-Leavitt algebras.
//! * [`monoid`]: graph monoids, their word problem and refinements.
//! * [`lattice`]: admissible pairs, simplicity and cofinality.
//! * [`resolution`]: staged resolutions and their monoid-level certificates.
//! * [`cli`]: the `sepgraph` command line.

pub mod algebra;
pub mod cli;
pub mod fixtures;
pub mod graph;
pub mod lattice;
pub mod monoid;
pub mod resolution;
pub mod scalar;
