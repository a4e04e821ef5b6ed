//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the library.
///
/// Validation failures carry the offending data so callers (and the CLI) can
/// report where an input left the domain of an operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("self-loop ({0},{0}) is not a valid edge")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertices {0} and {1} lie in different components")]
    Disconnected(usize, usize),
    #[error("multiplication oracle failed on element {0}")]
    OracleFailure(String),
    #[error("subgraph family is empty")]
    EmptyFamily,
    #[error("boundary of a degree-0 chain is undefined")]
    DegreeZero,
    #[error("chain is not a cycle (nonzero boundary)")]
    NotACycle,
    #[error("chain has a tuple at distance >= 2: ({0},{1})")]
    NotC11(usize, usize),
    #[error("boundary of the chain is supported outside T (vertex {0})")]
    BoundaryOffT(usize),
    #[error("filling problem exceeds the configured cap ({variables} variables > {cap})")]
    GraphTooLarge { variables: usize, cap: usize },
    #[error("subdivided triple ({0},{1},{2}) has no filling of diameter <= R")]
    TripleNotFillable(usize, usize, usize),
    #[error("boundary of the input chain has a long side ({0},{1}) with nonzero coefficient")]
    LongBoundary(usize, usize),
    #[error("chain diameter {0} exceeds the allowed bound {1}")]
    DiameterTooLarge(u32, u32),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("horoball base is disconnected")]
    DisconnectedBase,
    #[error("family member {0} is disconnected in its induced subgraph")]
    DisconnectedMember(usize),
    #[error("member {member} is unreachable from vertex {vertex}")]
    UnreachableMember { member: usize, vertex: usize },
    #[error("projection order on Rel({w},{y}) is not total (members {u} and {v})")]
    OrderNotTotal { w: usize, y: usize, u: usize, v: usize },
    #[error("inductive extension has no defined predecessor for member {0}")]
    InductionGap(usize),
    #[error("cochain is not a cocycle (violated on the tuple {0:?})")]
    NotACocycle(Vec<usize>),
    #[error("two fillings of the same chain evaluate differently under f")]
    NotWellDefined,
    #[error("graph is not saturated at R0={r0}: generator cycle through ({u},{v}) has no filling")]
    Unsaturated { r0: usize, u: usize, v: usize },
    #[error("map is not relatively coarsely uniform: {0}")]
    NotRelativelyUniform(String),
    #[error("homotopy operator requires equal member maps")]
    MismatchedSharp,
    #[error("excision hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
}
