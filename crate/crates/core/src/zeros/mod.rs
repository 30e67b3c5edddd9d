//! Argument-principle analysis of a single fiber `z -> f(z, w)`.
//!
//! Every quantity here is derived from one primitive, [`count_in_disk`]:
//! `(1/2 pi i) oint f'/f dz` on a circle, rounded to the nearest integer.
//! When a zero sits too close to the circle the radius is perturbed along
//! a fixed schedule, so reruns are bit-identical.

mod detect;
mod locate;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::contour::{circle_moments, ContourError, QuadratureOptions};
use crate::families::ParametricFamily;
use crate::fiber::Fiber;

pub use detect::{
    detection_functional, detection_functionals, functional_from_zeros, DetectionOptions, DetectionValue,
    ZERO_SUM_SIGN,
};
pub use locate::{locate_fiber_zeros, locate_zeros, ZeroInventory};

/// Multiplicative radius perturbations tried after the nominal radius.
pub const JITTER_SCHEDULE: [f64; 8] = [
    1.0 + 1.25e-4,
    1.0 - 2.5e-4,
    1.0 + 3.75e-4,
    1.0 - 5.0e-4,
    1.0 + 6.25e-4,
    1.0 - 7.5e-4,
    1.0 + 8.75e-4,
    1.0 - 1.0e-3,
];

/// Largest distance of the raw winding number from an integer that still
/// counts as a clean result.
pub const MAX_COUNT_RESIDUAL: f64 = 0.01;

const SPLIT_NODES: usize = 8192;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZeroError {
    #[error("zero near contour of radius {radius} after {} jittered retries", JITTER_SCHEDULE.len())]
    ZeroNearContour { radius: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] ContourError),
    #[error("origin is a zero of the fiber")]
    OriginIsZero,
    #[error("no zero-free disk around any candidate origin")]
    NoZeroFreeDisk,
    #[error("unresolved cluster of {count} zeros near {center}")]
    UnresolvedCluster { center: Complex64, count: u32 },
    #[error("{count} zeros in the search disk exceeds the limit of {limit}")]
    TooManyZeros { count: u32, limit: u32 },
    #[error("inventory is not validated")]
    NotValidated,
    #[error("zero at the origin in inventory")]
    ZeroAtOrigin,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroCountResult {
    pub count: u32,
    /// Distance of the raw integral / (2 pi i) from `count`.
    pub residual: f64,
    pub radius_used: f64,
}

/// `r(w)`: the smallest modulus of a zero, or a marker that none was found
/// within the search bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FirstZeroRadius {
    Finite(f64),
    ExceedsSearchBound(f64),
}

impl FirstZeroRadius {
    pub fn finite(self) -> Option<f64> {
        match self {
            FirstZeroRadius::Finite(r) => Some(r),
            FirstZeroRadius::ExceedsSearchBound(_) => None,
        }
    }

    /// `log r`, `+inf` past the search bound.
    pub fn ln(self) -> f64 {
        match self {
            FirstZeroRadius::Finite(r) => r.ln(),
            FirstZeroRadius::ExceedsSearchBound(_) => f64::INFINITY,
        }
    }
}

/// Counts zeros of `fiber` in `|z - center| < radius`, perturbing the
/// radius by [`JITTER_SCHEDULE`] when the nominal circle is unusable.
pub fn count_in_disk<F: Fiber + ?Sized>(
    fiber: &F,
    center: Complex64,
    radius: f64,
    opts: &QuadratureOptions,
) -> Result<ZeroCountResult, ZeroError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(ZeroError::InvalidArgument(format!("radius {radius} must be positive")));
    }
    for factor in std::iter::once(1.0).chain(JITTER_SCHEDULE) {
        if let Some(res) = count_on_circle(fiber, center, radius * factor, opts)? {
            return Ok(res);
        }
    }
    Err(ZeroError::ZeroNearContour { radius })
}

/// One circle, no jitter. `Ok(None)` when the circle is unusable.
fn count_on_circle<F: Fiber + ?Sized>(
    fiber: &F,
    center: Complex64,
    r: f64,
    opts: &QuadratureOptions,
) -> Result<Option<ZeroCountResult>, ZeroError> {
    // f'/f is analytic off the zero set, so a circle that fails to converge
    // or to round cleanly has a zero close to it. Only overflow of f itself
    // is reported as a quadrature failure.
    match circle_moments(|z| fiber.log_derivative(z), center, r, 0, opts) {
        Ok(m) => {
            let raw = m[0];
            let count = raw.re.round();
            let residual = (raw - count).norm();
            Ok((count >= 0.0 && residual <= MAX_COUNT_RESIDUAL).then_some(ZeroCountResult {
                count: count as u32,
                residual,
                radius_used: r,
            }))
        }
        Err(ContourError::IntegrandBlowUp { z, node }) if !fiber.value(z).is_finite() => {
            Err(ContourError::IntegrandBlowUp { z, node }.into())
        }
        Err(_) => Ok(None),
    }
}

/// Count on some circle strictly inside the bracket `(lo, hi)`. Off-centre
/// splits on a small node budget come first, so a zero sitting on the
/// midpoint circle costs little.
fn split_count<F: Fiber + ?Sized>(
    fiber: &F,
    lo: f64,
    hi: f64,
    opts: &QuadratureOptions,
) -> Result<ZeroCountResult, ZeroError> {
    let origin = Complex64::new(0.0, 0.0);
    let cheap = QuadratureOptions { max_nodes: opts.max_nodes.min(SPLIT_NODES), ..*opts };
    for s in [0.5, 0.4, 0.6, 0.3, 0.7] {
        if let Some(res) = count_on_circle(fiber, origin, lo + s * (hi - lo), &cheap)? {
            return Ok(res);
        }
    }
    count_in_disk(fiber, origin, 0.5 * (lo + hi), opts)
}

/// Zeros of `z -> f(z, w)` in `|z| < R`.
pub fn count_zeros(
    family: &ParametricFamily,
    w: Complex64,
    radius: f64,
) -> Result<ZeroCountResult, ZeroError> {
    count_in_disk(&family.fiber(w), Complex64::new(0.0, 0.0), radius, &QuadratureOptions::default())
}

/// `1 + max |g|` over 64 nodes of the unit circle.
pub(crate) fn unit_circle_scale<F: Fiber + ?Sized>(fiber: &F) -> f64 {
    1.0 + (0..64)
        .map(|k| fiber.value(Complex64::cis(std::f64::consts::TAU * k as f64 / 64.0)).norm())
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max)
}

/// `r` for an arbitrary fiber; see [`first_zero_radius`].
pub fn first_zero_radius_fiber<F: Fiber + ?Sized>(
    fiber: &F,
    r_max: f64,
    opts: &QuadratureOptions,
) -> Result<FirstZeroRadius, ZeroError> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(ZeroError::InvalidArgument(format!("search bound {r_max} must be positive")));
    }
    let origin = Complex64::new(0.0, 0.0);
    if fiber.value(origin).norm() <= 1e-12 * unit_circle_scale(fiber) {
        return Ok(FirstZeroRadius::Finite(0.0));
    }

    // Doubling probe until the first circle that encloses a zero.
    let mut lo = 0.0;
    let mut probe: f64 = 1.0 / 64.0;
    let (mut hi, mut hi_count) = loop {
        let target = probe.min(r_max);
        let res = count_in_disk(fiber, origin, target, opts)?;
        if res.count >= 1 {
            break (res.radius_used, res.count);
        }
        lo = res.radius_used;
        if target >= r_max {
            return Ok(FirstZeroRadius::ExceedsSearchBound(r_max));
        }
        probe *= 2.0;
    };

    // Narrow the bracket by counting until the jitter scale is reached
    // or few enough zeros remain, then resolve them directly.
    while hi - lo > 0.125 * hi || hi_count > 4 {
        if hi - lo <= 4e-3 * hi {
            break;
        }
        let res = split_count(fiber, lo, hi, opts)?;
        if res.count >= 1 {
            hi = res.radius_used;
            hi_count = res.count;
        } else {
            lo = res.radius_used;
        }
    }
    let zeros = locate::explore_disk(fiber, origin, hi, hi_count, opts)?;
    let r = zeros.iter().map(|&(z, _)| z.norm()).filter(|&m| m <= hi).fold(f64::INFINITY, f64::min);
    if !r.is_finite() {
        return Err(ZeroError::UnresolvedCluster { center: origin, count: hi_count });
    }
    Ok(FirstZeroRadius::Finite(r))
}

/// `r(w)`, the smallest modulus of a zero of `z -> f(z, w)`, searched up
/// to `r_max`.
pub fn first_zero_radius(
    family: &ParametricFamily,
    w: Complex64,
    r_max: f64,
) -> Result<FirstZeroRadius, ZeroError> {
    first_zero_radius_fiber(&family.fiber(w), r_max, &QuadratureOptions::default())
}
