use thiserror::Error;

/// Errors raised while reading or validating an input graph.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("edge {edge} names vertex {vertex}, but the graph has {vertex_count} vertices")]
    VertexOutOfRange { edge: usize, vertex: usize, vertex_count: usize },
    #[error("vertex {vertex} has degree {degree}, maximum is {max}")]
    DegreeTooHigh { vertex: usize, degree: usize, max: usize },
    #[error("input must be a simple graph (no self-loops or parallel edges)")]
    NotSimple,
    #[error("graph too large")]
    TooLarge,
}

/// Errors raised when a generator is given parameters outside its range.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("{family}: {message}")]
    BadParameters { family: String, message: String },
}

/// The oracle refuses instances beyond its guard rails.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {vertices} vertices, oracle limit is {limit}")]
    TooLarge { vertices: usize, limit: usize },
}
