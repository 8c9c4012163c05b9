use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::fan::ValidationReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A vector does not have the ambient dimension.
    DimensionMismatch { expected: usize, found: usize },
    RayIndexOutOfRange { index: usize, rays: usize },
    ConeSize { cone: Vec<usize>, expected: usize },
    RepeatedRayInCone { cone: Vec<usize> },
    DuplicateCone { cone: Vec<usize> },
    ZeroRay { index: usize },
    NonPrimitiveRay { index: usize },
    DuplicateRay { first: usize, second: usize },
    TooManyRays { count: usize, limit: usize },
    LabelCount { labels: usize, rays: usize },
    /// An exact integer left the representable range.
    Overflow,
    /// The fan is not smooth and complete.
    InvalidFan(ValidationReport),
    /// `locate` was asked for the origin.
    Origin,
    /// No cone contains the point.
    NotLocated,
    NotPrimitiveCollection(Vec<usize>),
    Presentation(PresentationError),
    Parameter(String),
    UnknownFamily(String),
    NotACone(Vec<usize>),
    BlowDown(String),
    Oracle(OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresentationError {
    /// Malformed presentation data.
    Malformed(String),
    /// The relations have rank below `#rays - dim`.
    Underdetermined { rank: usize, expected: usize },
    NoSeedCone,
    NonIntegral,
    /// The presentation disagrees with the fan it describes.
    Inconsistent(String),
    /// The realized fan failed validation.
    NotSmoothComplete(ValidationReport),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    TooManyRays { count: usize, limit: usize },
    NotFullDimensional,
    NotPointed,
    Empty,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "vector of length {found} in a fan of dimension {expected}")
            }
            Error::RayIndexOutOfRange { index, rays } => {
                write!(f, "ray index {index} out of range ({rays} rays)")
            }
            Error::ConeSize { cone, expected } => {
                write!(f, "maximal cone {cone:?} does not have {expected} generators")
            }
            Error::RepeatedRayInCone { cone } => write!(f, "cone {cone:?} repeats a ray"),
            Error::DuplicateCone { cone } => write!(f, "cone {cone:?} listed twice"),
            Error::ZeroRay { index } => write!(f, "ray {index} is zero"),
            Error::NonPrimitiveRay { index } => write!(f, "ray {index} is not primitive"),
            Error::DuplicateRay { first, second } => {
                write!(f, "rays {first} and {second} coincide")
            }
            Error::TooManyRays { count, limit } => {
                write!(f, "{count} rays exceeds the limit of {limit}")
            }
            Error::LabelCount { labels, rays } => {
                write!(f, "{labels} labels given for {rays} rays")
            }
            Error::Overflow => write!(f, "integer overflow in exact arithmetic"),
            Error::InvalidFan(report) => write!(f, "fan is not smooth and complete: {report}"),
            Error::Origin => write!(f, "the origin lies in every cone"),
            Error::NotLocated => write!(f, "point lies in no cone of the fan"),
            Error::NotPrimitiveCollection(s) => write!(f, "{s:?} is not a primitive collection"),
            Error::Presentation(e) => fmt::Display::fmt(e, f),
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::UnknownFamily(id) => write!(f, "unknown family id {id:?}"),
            Error::NotACone(s) => write!(f, "{s:?} does not span a cone of the fan"),
            Error::BlowDown(msg) => write!(f, "cannot blow down: {msg}"),
            Error::Oracle(e) => fmt::Display::fmt(e, f),
        }
    }
}

impl fmt::Display for PresentationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationError::Malformed(msg) => write!(f, "malformed presentation: {msg}"),
            PresentationError::Underdetermined { rank, expected } => {
                write!(f, "underdetermined: relations have rank {rank}, need {expected}")
            }
            PresentationError::NoSeedCone => write!(f, "no seed cone"),
            PresentationError::NonIntegral => write!(f, "non-realizable over Z"),
            PresentationError::Inconsistent(msg) => write!(f, "presentation inconsistent: {msg}"),
            PresentationError::NotSmoothComplete(report) => {
                write!(f, "realized fan is not smooth and complete: {report}")
            }
        }
    }
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyRays { count, limit } => {
                write!(f, "brute force refused: {count} rays (limit {limit})")
            }
            OracleError::NotFullDimensional => write!(f, "cone is not full-dimensional in its span"),
            OracleError::NotPointed => write!(f, "cone is not pointed"),
            OracleError::Empty => write!(f, "no generators"),
        }
    }
}

impl From<PresentationError> for Error {
    fn from(e: PresentationError) -> Self {
        Error::Presentation(e)
    }
}

impl From<OracleError> for Error {
    fn from(e: OracleError) -> Self {
        Error::Oracle(e)
    }
}

impl core::error::Error for Error {}
