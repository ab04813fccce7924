use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidMesh(&'static str),
    MeshMismatch { expected: usize, found: usize },
    NumericError(&'static str),
    NewtonDiverged { iterations: usize, residual: f64 },
    SingularJacobian { row: usize },
    NoConvergence { iterations: usize },
    PicardStalled { iterations: usize, increment: f64 },
    InvalidSubdomain { margin: f64 },
    DomainError(&'static str),
    InteriorZero { node: usize },
    OutOfRegime(&'static str),
    InvalidProblem(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidMesh(why) => write!(f, "invalid mesh: {why}"),
            Error::MeshMismatch { expected, found } => {
                write!(
                    f,
                    "grid function has {found} values, mesh has {expected} nodes"
                )
            }
            Error::NumericError(why) => write!(f, "non-finite value: {why}"),
            Error::NewtonDiverged {
                iterations,
                residual,
            } => write!(
                f,
                "Newton iteration failed after {iterations} steps (residual {residual:e})"
            ),
            Error::SingularJacobian { row } => write!(f, "zero pivot in Jacobian row {row}"),
            Error::NoConvergence { iterations } => {
                write!(f, "no convergence within {iterations} iterations")
            }
            Error::PicardStalled {
                iterations,
                increment,
            } => write!(
                f,
                "Picard iteration stalled after {iterations} steps (increment {increment:e})"
            ),
            Error::InvalidSubdomain { margin } => {
                write!(f, "interior margin {margin} leaves an empty subdomain")
            }
            Error::DomainError(why) => write!(f, "argument outside domain: {why}"),
            Error::InteriorZero { node } => {
                write!(f, "grid function vanishes at interior node {node}")
            }
            Error::OutOfRegime(why) => write!(f, "parameters outside regime: {why}"),
            Error::InvalidProblem(why) => write!(f, "invalid problem: {why}"),
        }
    }
}

impl core::error::Error for Error {}
