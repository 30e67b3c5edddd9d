//! Numerical tools for omitted values of holomorphic families of entire
//! functions `f(z, w)`: zero counting by the argument principle, the
//! first-zero radius `r(w)`, the Taylor-coefficient detection functionals
//! of the logarithmic derivative, and parameter-space procedures built on
//! them.

pub mod analysis;
pub mod checks;
pub mod contour;
pub mod erf;
pub mod families;
pub mod fiber;
pub mod zeros;

pub use num_complex::Complex64;

pub use analysis::{
    chordal_distance, exceptional_set_scan, holomorphy_residual, omitted_value_test, semicontinuity_check,
    superharmonic_mean_check, track_exceptional_value, AnalysisError, ErrorTag, GridSpec,
    MeanInequalityReport, PathTrace, ScanRecord, ScanReport, SphereValue, Verdict,
};
pub use contour::{cauchy_coeff, circle_integral, CircleContour, ContourError, QuadratureOptions};
pub use erf::{complex_erf, complex_erfc};
pub use families::{
    make_discrete_exceptional_family, FamilyError, FamilySpec, OrderBound, ParamValue, ParametricFamily,
};
pub use fiber::Fiber;
pub use zeros::{
    count_zeros, detection_functional, first_zero_radius, functional_from_zeros, locate_zeros,
    DetectionValue, FirstZeroRadius, ZeroCountResult, ZeroError, ZeroInventory,
};
