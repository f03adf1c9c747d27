//! Randomized low-stretch spanning trees built from hierarchical star
//! partitions with strong-diameter cone cuts.
//!
//! The entry point is [`build_low_stretch_tree`]; [`harness`] measures and
//! audits what it produces.

pub mod cli;
pub mod cone;
pub mod cone_cut;
pub mod error;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod hierarchy;
pub mod io;
pub mod report;
pub mod rng;
pub mod schedule;
pub mod star;
pub mod tree;
pub mod weighted;

pub use error::{Error, Result};
pub use graph::{ball, radius, shortest_path, shortest_path_tree, sssp, DistanceMap, Graph, VertexSet};
pub use hierarchy::{
    build_low_stretch_forest, build_low_stretch_tree, hierarchical_star_partition, BuildTrace,
};
pub use schedule::{Mode, Params, Schedule};
pub use tree::{tree_distance, SpanningTree};
