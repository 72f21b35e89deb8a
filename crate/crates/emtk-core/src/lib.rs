//! Exact matching (EM) toolkit.
//!
//! Everything here revolves around one question: given a graph whose edges are
//! colored red or blue and an integer `k`, is there a perfect matching with
//! exactly `k` red edges? The crate provides two solving frameworks plus the
//! shared machinery they stand on:
//!
//! * [`local_search`] walks from a minimum-red perfect matching towards `k`
//!   through bounded-distance neighborhoods.
//! * [`karzanov`] decides EM through bounded-color perfect matchings and
//!   produces certificates by rank-reducing a sandwich of matchings, on graph
//!   classes whose even cycles carry enough chords.
//! * [`structure`] analyses alternating paths: path-shortening witnesses,
//!   critical sets, and weight-balanced modifying sets.
//! * [`generators`] builds the graph classes of interest with membership
//!   certificates, and [`oracle`] brute-forces ground truth at desk scale.
//!
//! All public entry points are deterministic: identical inputs (including
//! seeds) produce identical outputs, regardless of the execution mode chosen
//! in [`exec`].

pub mod exec;
pub mod generators;
pub mod graph;
pub mod karzanov;
pub mod local_search;
pub mod matching;
pub mod oracle;
pub mod structure;

use graph::{Edge, Vertex};
use structure::PshortQuery;

/// Exact arithmetic for interval data and matching ranks.
pub type Rational = num_rational::Ratio<i64>;

/// Crate-wide error type. Domain errors are constructed eagerly at API
/// boundaries; internal invariant breaks are `debug_assert`ed instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("edge {0} joins two vertices on the same side of the bipartition")]
    IntraSideEdge(Edge),
    #[error("bipartition lists {got} vertices, expected {expected}")]
    BipartitionSize { expected: usize, got: usize },
    #[error("not a perfect matching: {0}")]
    NotPerfectMatching(String),
    #[error("invalid alternating structure: {0}")]
    InvalidStructure(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("no path-shortening witness for the query; the host graph violates the assumed property")]
    MissingWitness(Box<PshortQuery>),
    #[error("structural assumption violated: {0}")]
    StructuralViolation(String),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("certificate does not match the instance: {0}")]
    CertificateMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
