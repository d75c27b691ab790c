use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Which light-cone coordinate an error refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coordinate {
    Plus,
    Minus,
    Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A flow or formula was evaluated outside its domain, e.g. an
    /// inadmissible `(t, x)` pair for the thermal flow.
    Domain {
        what: &'static str,
        coordinate: Coordinate,
        t: f64,
        x: f64,
    },
    /// Two sampled objects live on incompatible grids, or a grid is invalid.
    Shape(&'static str),
    /// A non-finite or otherwise unusable intermediate value.
    Numerical(&'static str),
    /// A test function's declared support violates a precondition.
    Support(&'static str),
    /// An argument outside the documented range (n < 1, beta <= 0, ...).
    InvalidParameter(&'static str),
}

impl Error {
    pub(crate) fn domain(what: &'static str, t: f64, x: f64) -> Self {
        Error::Domain {
            what,
            coordinate: Coordinate::Scalar,
            t,
            x,
        }
    }

    pub(crate) fn on_coordinate(self, coordinate: Coordinate) -> Self {
        match self {
            Error::Domain { what, t, x, .. } => Error::Domain { what, coordinate, t, x },
            other => other,
        }
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, coordinate, t, x } => {
                write!(f, "domain error in {what} at t={t}, x={x}")?;
                match coordinate {
                    Coordinate::Plus => write!(f, " (x_plus)"),
                    Coordinate::Minus => write!(f, " (x_minus)"),
                    Coordinate::Scalar => Ok(()),
                }
            }
            Error::Shape(msg) => write!(f, "shape error: {msg}"),
            Error::Numerical(msg) => write!(f, "numerical error: {msg}"),
            Error::Support(msg) => write!(f, "support error: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
