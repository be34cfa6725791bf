//! Query-driven discovery of interesting subgraphs in social-media graphs.
//!
//! The pipeline ingests post records into a heterogeneous temporal property
//! graph, derives a background graph from a user interest query, generates
//! candidate subgraphs through a generalized graph group-by, and ranks the
//! candidates by how far their structural metric distributions diverge from
//! the background (Jensen–Shannon divergence over compatible histograms).
//!
//! Modules follow the pipeline order:
//!
//! - [`graph`] — typed property graph storage, snapshots, basic topology
//! - [`ingest`] — post parsing, base graph, conversation contexts, computed edges
//! - [`query`] — interest queries producing the initial post set and narrowed graph
//! - [`grouping`] — attribute/pattern group-by with knee-based auto generation
//! - [`construct`] — candidate subgraph construction (G1/G2/G3) and filtering
//! - [`metrics`] — the six structural metrics per sealed graph
//! - [`interestingness`] — cut2bin, JS divergence, background sampling, discovery
//! - [`validate`] — core–periphery profiling against random-walk baselines
//! - [`synth`] — synthetic corpus generation with planted structures
//! - [`pipeline`] — end-to-end orchestration with a run manifest

pub mod construct;
pub mod graph;
pub mod grouping;
pub mod ingest;
pub mod interestingness;
pub mod metrics;
pub mod pipeline;
pub mod query;
pub mod synth;
pub mod validate;

pub use graph::{AttrValue, EdgeId, EdgeKind, GraphError, NodeId, NodeKind, PropertyGraph};
