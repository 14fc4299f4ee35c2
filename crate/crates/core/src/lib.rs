//! Sociogram analytics over directed communication graphs harvested from
//! social media: structural metrics, centrality, greedy modularity grouping,
//! archetype classification of subgroups, degree-law fitting, lexicon-based
//! text scoring and force-directed layout.

pub mod canonical;
pub mod centrality;
pub mod classify;
pub mod community;
pub mod error;
pub mod export;
pub mod graph;
pub mod layout;
pub mod metrics;
pub mod outcome;
pub mod pipeline;
pub mod report;
pub mod statfit;
pub mod text;

pub use error::{Error, Result, Undefined};
pub use graph::{
    build_graph, parse_edge_csv, Dedup, DegreeMode, Edge, EdgeKind, Sociogram, UndirectedGraph,
};
pub use outcome::Metric;
