use alloc::string::String;
use core::fmt;

use crate::graph::VertexId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    VertexOutOfRange {
        vertex: VertexId,
        count: usize,
    },
    SelfLoop {
        vertex: VertexId,
    },
    NegativeWeight {
        x: VertexId,
        y: VertexId,
        weight: f64,
    },
    NonFinite {
        what: &'static str,
        index: usize,
    },
    NonPositiveMeasure {
        vertex: VertexId,
        value: f64,
    },
    AsymmetricDuplicate {
        x: VertexId,
        y: VertexId,
        first: f64,
        second: f64,
    },
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    NotInterior {
        vertex: VertexId,
    },
    InvalidExponent {
        p: f64,
        reason: &'static str,
    },
    NegativeFunction {
        vertex: VertexId,
        value: f64,
    },
    NotStrictlyPositive {
        vertex: VertexId,
        value: f64,
    },
    NotSuperharmonic {
        vertex: VertexId,
        value: f64,
    },
    NotHarmonic {
        vertex: VertexId,
        value: f64,
    },
    OutsideSupport {
        vertex: VertexId,
    },
    NotInSubset {
        vertex: VertexId,
    },
    Disconnected,
    /// `deg + c - f m < 0` at a vertex of the Harnack set.
    NegativeHarnackDefect {
        vertex: VertexId,
        value: f64,
    },
    /// A supersolution hypothesis `Hu >= f u^(p-1)` fails at a vertex.
    SupersolutionViolated {
        vertex: VertexId,
        excess: f64,
    },
    NotProperSubset,
    EmptyGrid,
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VertexOutOfRange { vertex, count } => {
                write!(f, "vertex {vertex} out of range (graph has {count} vertices)")
            }
            Error::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            Error::NegativeWeight { x, y, weight } => {
                write!(f, "negative weight {weight} on edge ({x}, {y})")
            }
            Error::NonFinite { what, index } => write!(f, "non-finite {what} at index {index}"),
            Error::NonPositiveMeasure { vertex, value } => {
                write!(f, "measure must be positive, got {value} at vertex {vertex}")
            }
            Error::AsymmetricDuplicate { x, y, first, second } => {
                write!(f, "asymmetric duplicate edge ({x}, {y}): weights {first} and {second}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "function has {found} values, graph has {expected} vertices")
            }
            Error::NotInterior { vertex } => write!(f, "vertex {vertex} is not an interior vertex"),
            Error::InvalidExponent { p, reason } => write!(f, "invalid exponent p = {p}: {reason}"),
            Error::NegativeFunction { vertex, value } => {
                write!(f, "function must be nonnegative, got {value} at vertex {vertex}")
            }
            Error::NotStrictlyPositive { vertex, value } => {
                write!(f, "function must be strictly positive, got {value} at vertex {vertex}")
            }
            Error::NotSuperharmonic { vertex, value } => {
                write!(f, "not superharmonic: Hu = {value} at vertex {vertex}")
            }
            Error::NotHarmonic { vertex, value } => {
                write!(f, "not harmonic: Hu = {value} at vertex {vertex}")
            }
            Error::OutsideSupport { vertex } => {
                write!(f, "test function is nonzero at vertex {vertex} outside the allowed support")
            }
            Error::NotInSubset { vertex } => write!(f, "vertex {vertex} is not in the subset"),
            Error::Disconnected => f.write_str("vertex subset is not connected"),
            Error::NegativeHarnackDefect { vertex, value } => {
                write!(f, "deg + c - f m = {value} < 0 at vertex {vertex}")
            }
            Error::SupersolutionViolated { vertex, excess } => {
                write!(f, "Hu >= f u^(p-1) fails at vertex {vertex} by {excess}")
            }
            Error::NotProperSubset => f.write_str("subset must be a proper subset of the window"),
            Error::EmptyGrid => f.write_str("scan grid has no admissible points"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
