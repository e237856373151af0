use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Which state invariant a running integration broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    Trace,
    Hermiticity,
    Positivity,
    NonFinite,
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvariantKind::Trace => "trace",
            InvariantKind::Hermiticity => "hermiticity",
            InvariantKind::Positivity => "positivity",
            InvariantKind::NonFinite => "finiteness",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A state (Bloch vector or density matrix) outside the physical set.
    InvalidState(String),
    /// A model or configuration parameter outside its allowed range.
    InvalidParameter(String),
    /// A special function evaluated outside its domain.
    Domain { function: &'static str, x: f64 },
    /// Adaptive quadrature ran out of subdivisions.
    Quadrature {
        a: f64,
        b: f64,
        estimate: f64,
        abs_error: f64,
        intervals: usize,
    },
    /// A state invariant was violated during time stepping.
    Integration {
        t: f64,
        kind: InvariantKind,
        deviation: f64,
    },
    /// The geometric phase is not defined for this path.
    UndefinedPhase(String),
    /// An eigenvalue below the positivity tolerance.
    NegativeEigenvalue { value: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidState(msg) => write!(f, "invalid state: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Domain { function, x } => write!(f, "{function}({x}) is outside the domain"),
            Error::Quadrature {
                a,
                b,
                estimate,
                abs_error,
                intervals,
            } => write!(
                f,
                "quadrature on [{a}, {b}] did not converge: estimate {estimate}, \
                 error {abs_error:e} after {intervals} intervals"
            ),
            Error::Integration { t, kind, deviation } => write!(
                f,
                "{kind} invariant violated at t = {t} (deviation {deviation:e})"
            ),
            Error::UndefinedPhase(msg) => write!(f, "geometric phase undefined: {msg}"),
            Error::NegativeEigenvalue { value } => {
                write!(f, "density matrix eigenvalue {value:e} below tolerance")
            }
        }
    }
}

impl core::error::Error for Error {}
