use alloc::string::String;
use core::fmt;

/// Failures reported by the numerical core.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An operation that needs a square matrix got a `rows x cols` one.
    NotSquare { rows: usize, cols: usize },
    DimensionMismatch {
        context: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    NonFinite(&'static str),
    InvalidSpace(String),
    UnknownSubsystem(String),
    NotUnitary { context: &'static str, defect: f64 },
    NotHermitian { context: &'static str, defect: f64 },
    InvalidModel(String),
    InvalidPartition(String),
    InvalidConnection(String),
    /// `1 - V_sr T` is (numerically) singular.
    IllPosed { sigma_min: f64 },
    Singular { context: &'static str, sigma_min: f64 },
    /// Evaluation point lies on (or too close to) a pole.
    Pole { re: f64, im: f64 },
    /// Frequency too close to the exceptional set `-spec(Ω)`.
    SpectrumProximity { omega: f64, eigenvalue: f64 },
    NoConvergence(&'static str),
    OutOfRange(String),
    /// Two routes that must agree did not.
    CrossCheck { context: &'static str, discrepancy: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare { rows, cols } => write!(f, "expected a square matrix, got {rows}x{cols}"),
            Error::DimensionMismatch { context, expected, found } => write!(
                f,
                "{context}: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::NonFinite(what) => write!(f, "{what} contains NaN or infinite entries"),
            Error::InvalidSpace(msg) => write!(f, "invalid Hilbert space: {msg}"),
            Error::UnknownSubsystem(label) => write!(f, "unknown subsystem '{label}'"),
            Error::NotUnitary { context, defect } => {
                write!(f, "{context} is not unitary (defect {defect:.3e})")
            }
            Error::NotHermitian { context, defect } => {
                write!(f, "{context} is not Hermitian (defect {defect:.3e})")
            }
            Error::InvalidModel(msg) => write!(f, "invalid model: {msg}"),
            Error::InvalidPartition(msg) => write!(f, "invalid lead partition: {msg}"),
            Error::InvalidConnection(msg) => write!(f, "invalid connection: {msg}"),
            Error::IllPosed { sigma_min } => write!(
                f,
                "ill-posed network: loop operator singular (smallest singular value {sigma_min:.3e})"
            ),
            Error::Singular { context, sigma_min } => {
                write!(f, "{context} is singular (smallest singular value {sigma_min:.3e})")
            }
            Error::Pole { re, im } => write!(f, "evaluation point {re}{im:+}i is on a pole"),
            Error::SpectrumProximity { omega, eigenvalue } => write!(
                f,
                "frequency {omega} is within tolerance of the exceptional point {eigenvalue}"
            ),
            Error::NoConvergence(what) => write!(f, "{what} did not converge"),
            Error::OutOfRange(msg) => write!(f, "out of range: {msg}"),
            Error::CrossCheck { context, discrepancy } => {
                write!(f, "{context}: cross-check failed (discrepancy {discrepancy:.3e})")
            }
        }
    }
}

impl core::error::Error for Error {}
