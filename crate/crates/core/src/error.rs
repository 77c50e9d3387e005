use alloc::string::String;
use core::fmt;

/// Everything that can go wrong while building spaces or evaluating
/// transport, semigroup and inequality quantities.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    TooFewNodes { required: usize, got: usize },
    OddNodeCount(usize),
    /// Truncating the line at `half_width` discards more Gaussian mass than allowed.
    TailMassTooLarge { half_width: f64, tail: f64, required_half_width: f64 },
    NonFinite { what: &'static str, index: usize },
    NegativeValue { index: usize, value: f64 },
    NotNormalizable(f64),
    NonPositiveWeight { index: usize },
    MassMismatch { source: f64, target: f64 },
    NonzeroTotalMass(f64),
    SpaceMismatch,
    WrongSpaceKind { expected: &'static str },
    OutOfRange { name: &'static str, value: f64, expected: &'static str },
    ProblemTooLarge { n: usize, max: usize },
    /// Iterative solver stopped at its iteration cap.
    NoConvergence { solver: &'static str, iterations: usize, violation: f64 },
    DegenerateGap(f64),
    EmptyFamily,
    /// The elementary ratio sequence did not settle within the requested horizon.
    SequenceNotSettled { k_max: usize, last_difference: f64, bound: f64 },
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// True for failures of an iterative numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::DegenerateGap(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TooFewNodes { required, got } => {
                write!(f, "need at least {required} nodes, got {got}")
            }
            Error::OddNodeCount(n) => write!(f, "circle node count must be even, got {n}"),
            Error::TailMassTooLarge { half_width, tail, required_half_width } => write!(
                f,
                "half-width {half_width} drops Gaussian tail mass {tail:e} (limit 1e-12); use L >= {required_half_width:.3}"
            ),
            Error::NonFinite { what, index } => write!(f, "{what} is not finite at node {index}"),
            Error::NegativeValue { index, value } => {
                write!(f, "negative value {value} at node {index}")
            }
            Error::NotNormalizable(total) => {
                write!(f, "function integrates to {total}, cannot normalize")
            }
            Error::NonPositiveWeight { index } => {
                write!(f, "quadrature weight underflows to zero at node {index}")
            }
            Error::MassMismatch { source, target } => {
                write!(f, "total masses differ: {source} vs {target}")
            }
            Error::NonzeroTotalMass(m) => write!(f, "signed measure has total mass {m:e}, expected 0"),
            Error::SpaceMismatch => f.write_str("operands live on different spaces"),
            Error::WrongSpaceKind { expected } => write!(f, "operation requires a {expected} space"),
            Error::OutOfRange { name, value, expected } => {
                write!(f, "{name} = {value} out of range (expected {expected})")
            }
            Error::ProblemTooLarge { n, max } => {
                write!(f, "problem size {n} exceeds the cap of {max}")
            }
            Error::NoConvergence { solver, iterations, violation } => write!(
                f,
                "{solver} did not converge after {iterations} iterations (violation {violation:e})"
            ),
            Error::DegenerateGap(g) => write!(f, "spectral gap {g:e} is degenerate"),
            Error::EmptyFamily => f.write_str("density family is empty"),
            Error::SequenceNotSettled { k_max, last_difference, bound } => write!(
                f,
                "ratio sequence moved by {last_difference:e} at k = {k_max} (bound {bound:e})"
            ),
            Error::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}
