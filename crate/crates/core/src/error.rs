use alloc::string::String;
use core::fmt;

/// Errors reported by the exact layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two operands live over different genera.
    GenusMismatch { left: u32, right: u32 },
    /// A matrix has the wrong dimension for the operation.
    DimensionMismatch { expected: usize, got: usize },
    /// A matrix required to be symmetric is not.
    NotSymmetric,
    /// A matrix required to be unitary is not.
    NotUnitary,
    /// A matrix required to be symplectic is not.
    NotSymplectic,
    /// The operation only accepts even-degree (or even-integer) input.
    OddDegree(usize),
    /// The input polynomial is not homogeneous.
    NotHomogeneous,
    /// A feasibility guard fired (enumeration or closure too large).
    SizeGuard(String),
    /// An unknown named object was requested.
    UnknownName(String),
    /// A self-check of a canonical construction failed.
    ConstructionCheck(String),
    /// Input could not be parsed.
    Parse(String),
    /// Generic precondition violation.
    Precondition(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GenusMismatch { left, right } => {
                write!(f, "genus mismatch: {left} vs {right}")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NotSymmetric => write!(f, "matrix is not symmetric"),
            Error::NotUnitary => write!(f, "matrix is not unitary"),
            Error::NotSymplectic => write!(f, "matrix is not symplectic"),
            Error::OddDegree(d) => write!(f, "operation requires even degree, got {d}"),
            Error::NotHomogeneous => write!(f, "polynomial is not homogeneous"),
            Error::SizeGuard(msg) => write!(f, "size guard: {msg}"),
            Error::UnknownName(name) => write!(f, "unknown name: {name}"),
            Error::ConstructionCheck(msg) => write!(f, "construction self-check failed: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
