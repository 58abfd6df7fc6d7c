//! Error type shared across the crate.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Gamma evaluated at zero or a negative integer.
    GammaPole {
        x: f64,
    },
    /// Kummer parameter `c` is zero or a negative integer.
    InvalidKummerC {
        c: f64,
    },
    /// Kummer `U` requires `b > 0`.
    NonPositiveB {
        b: f64,
    },
    /// Argument outside the operation's domain.
    DomainError {
        what: &'static str,
        value: f64,
    },
    /// Result magnitude exceeds the representable range; `log_value` is the
    /// natural log of the true magnitude.
    Overflow {
        log_value: f64,
    },
    /// Series did not converge within the term cap.
    SeriesNonConvergence {
        terms: usize,
    },
    /// Adaptive quadrature stopped before reaching the requested tolerance.
    QuadratureNonConvergence {
        achieved: f64,
        requested: f64,
    },
    /// Parameter outside the regime where the quantity is defined
    /// (e.g. lower envelope constant for beta >= (N-alpha)/(2-alpha)).
    RegimeError {
        what: &'static str,
        value: f64,
        bound: f64,
    },
    /// Time step violates the CFL restriction dt <= 0.9 dr.
    CflViolation {
        dt: f64,
        dr: f64,
    },
    /// A field became non-finite during time stepping.
    NonFiniteField {
        time: f64,
    },
    /// Resolution too coarse (dr > 0.25).
    ResolutionTooCoarse {
        dr: f64,
    },
    /// Two trajectories were produced on different grids.
    GridMismatch,
    /// Invalid model or experiment configuration.
    InvalidConfig(String),
    /// Unparseable initial-data descriptor.
    BadDescriptor(String),
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GammaPole { x } => write!(f, "gamma pole at non-positive integer x = {x}"),
            Error::InvalidKummerC { c } => {
                write!(f, "Kummer parameter c = {c} is zero or a negative integer")
            }
            Error::NonPositiveB { b } => write!(f, "Kummer U requires b > 0, got b = {b}"),
            Error::DomainError { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::Overflow { log_value } => {
                write!(f, "result overflows f64 (ln|value| = {log_value:.3})")
            }
            Error::SeriesNonConvergence { terms } => {
                write!(f, "series did not converge within {terms} terms")
            }
            Error::QuadratureNonConvergence {
                achieved,
                requested,
            } => write!(
                f,
                "quadrature reached tolerance {achieved:.3e}, requested {requested:.3e}"
            ),
            Error::RegimeError { what, value, bound } => {
                write!(f, "{what} = {value} outside regime bound {bound}")
            }
            Error::CflViolation { dt, dr } => {
                write!(
                    f,
                    "CFL violation: dt = {dt} exceeds 0.9 * dr = {}",
                    0.9 * dr
                )
            }
            Error::NonFiniteField { time } => {
                write!(f, "non-finite field value detected at t = {time}")
            }
            Error::ResolutionTooCoarse { dr } => {
                write!(f, "resolution too coarse: dr = {dr} > 0.25")
            }
            Error::GridMismatch => write!(f, "trajectories live on different grids"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::BadDescriptor(msg) => write!(f, "bad initial-data descriptor: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
