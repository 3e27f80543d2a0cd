//! Exact Steiner geodecity toolkit.

pub mod constructions;
pub mod cyclespace;
pub mod error;
pub mod geodesic;
pub mod graph;
pub mod harness;
pub mod lp;
pub mod planarity;
pub mod shortcut;
pub mod random;
pub mod rational;
pub mod steiner;

pub use error::{Error, Result};
pub use graph::{EdgeId, SubgraphRef, VertexId, VertexSet, WeightedMultigraph};
pub use rational::{Distance, Rational};
