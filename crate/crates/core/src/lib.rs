pub mod cox;
pub mod error;
pub mod golden;
pub mod graph;
pub mod invariants;
pub mod lattice;
pub mod linalg;
pub mod ring;
pub mod reduction;
