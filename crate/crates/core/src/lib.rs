pub mod bundle;
pub mod catalog;
pub mod error;
pub mod existence;
pub mod expr;
pub mod geometry;
pub mod lattice;
pub mod singularity;
pub mod surface;
pub mod verdict;
