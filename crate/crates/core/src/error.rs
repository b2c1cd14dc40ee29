use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A point passed to a disk operation is not in the open unit disk.
    OutsideDisk { re: f64, im: f64 },
    /// Evaluation at the logarithmic pole of a Green function.
    Pole,
    /// A scalar argument violates its documented range.
    InvalidArgument { name: &'static str, value: f64 },
    UnknownMap(String),
    ParameterRange { map: &'static str, value: f64 },
    /// The inverse was asked for a point outside the image domain.
    OutsideImage { re: f64, im: f64 },
    MissingInverse(&'static str),
    EmptyLevelSet { alpha: f64 },
    /// Adaptive quadrature exhausted its subdivision budget.
    Quadrature { estimate: f64, error: f64 },
    /// An iterative solver failed to converge.
    NoConvergence(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutsideDisk { re, im } => {
                write!(f, "point {re}{im:+}i is not in the open unit disk")
            }
            Error::Pole => f.write_str("green function evaluated at its pole"),
            Error::InvalidArgument { name, value } => {
                write!(f, "argument `{name}` out of range: {value}")
            }
            Error::UnknownMap(name) => write!(f, "unknown catalog map `{name}`"),
            Error::ParameterRange { map, value } => {
                write!(f, "parameter {value} out of range for map `{map}`")
            }
            Error::OutsideImage { re, im } => {
                write!(f, "point {re}{im:+}i is outside the image domain")
            }
            Error::MissingInverse(name) => write!(f, "map `{name}` has no closed-form inverse"),
            Error::EmptyLevelSet { alpha } => write!(f, "level set |ψ| = {alpha} is empty"),
            Error::Quadrature { estimate, error } => write!(
                f,
                "quadrature did not reach tolerance (estimate {estimate}, error {error})"
            ),
            Error::NoConvergence(what) => write!(f, "{what} did not converge"),
        }
    }
}

impl core::error::Error for Error {}
