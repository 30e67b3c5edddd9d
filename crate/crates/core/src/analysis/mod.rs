//! Parameter-space procedures over families: omitted-value tests, the
//! circle-mean inequality for `log r`, semicontinuity of the omitted set on
//! the sphere, tracking of a known exceptional value, and grid scans.

mod mean;
mod scan;
mod semicontinuity;
mod sphere;
mod track;

use serde::Serialize;
use thiserror::Error;

use crate::families::FamilyError;
use crate::zeros::{ZeroError, ZeroError as Z};

pub use mean::{superharmonic_mean_check, MeanInequalityReport};
pub use scan::{exceptional_set_scan, FpValues, GridSpec, ScanRecord, ScanReport};
pub use semicontinuity::{
    attains_within, omitted_set, semicontinuity_check, SemicontinuityReport, Violation,
};
pub use sphere::{chordal_distance, SphereValue};
pub use track::{
    holomorphy_residual, omitted_value_test, track_exceptional_value, PathSample, PathTrace, TrackOptions,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Zero(#[from] ZeroError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("family `{0}` has no known exceptional value")]
    MissingMetadata(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid contains the point at infinity")]
    InfinityInGrid,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Per-point failure classes recorded in scans and traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorTag {
    ContourZero,
    NonConvergence,
    OriginZero,
    Cluster,
}

impl ErrorTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorTag::ContourZero => "contour_zero",
            ErrorTag::NonConvergence => "non_convergence",
            ErrorTag::OriginZero => "origin_zero",
            ErrorTag::Cluster => "cluster",
        }
    }
}

impl std::fmt::Display for ErrorTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<&ZeroError> for ErrorTag {
    fn from(e: &ZeroError) -> Self {
        match e {
            Z::ZeroNearContour { .. } => ErrorTag::ContourZero,
            Z::OriginIsZero | Z::NoZeroFreeDisk | Z::ZeroAtOrigin => ErrorTag::OriginZero,
            Z::UnresolvedCluster { .. } | Z::TooManyZeros { .. } => ErrorTag::Cluster,
            Z::Quadrature(_) | Z::NotValidated | Z::InvalidArgument(_) => ErrorTag::NonConvergence,
        }
    }
}
