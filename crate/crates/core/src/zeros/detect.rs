use num_complex::Complex64;
use serde::Serialize;

use super::{first_zero_radius_fiber, unit_circle_scale, FirstZeroRadius, ZeroError, ZeroInventory};
use crate::contour::{cauchy_coeffs_adaptive, QuadratureOptions};
use crate::families::ParametricFamily;
use crate::fiber::{FamilyFiber, Fiber};

/// Sign relating the Taylor coefficients of `f'/f` to the zero sum:
/// `d^p/dz^p (f'/f)(0) = -p! sum_a a^{-p-1}` plus the contribution of the
/// exponential factor, which vanishes for `p` above the order. Pinned by
/// `(z^2 - 1)'/(z^2 - 1) = 2z/(z^2 - 1)`, whose first derivative at 0 is -2.
pub const ZERO_SUM_SIGN: f64 = -1.0;

const RECENTRE_CANDIDATES: usize = 16;

/// `F_p(w)`: the `p`-th derivative of `f_z/f` at the (possibly shifted)
/// origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionValue {
    pub p: u32,
    pub value: Complex64,
    pub contour_radius: f64,
    pub origin_shift: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionOptions {
    /// Search bound for the first-zero radius at the origin.
    pub r_max: f64,
    pub recentre: bool,
    pub quadrature: QuadratureOptions,
}

impl Default for DetectionOptions {
    fn default() -> Self {
        DetectionOptions { r_max: 64.0, recentre: true, quadrature: QuadratureOptions::default() }
    }
}

/// `F_p(w)` for a single order `p >= 1`.
pub fn detection_functional(
    family: &ParametricFamily,
    w: Complex64,
    p: u32,
) -> Result<DetectionValue, ZeroError> {
    let values = detection_functionals(family.fiber(w), &[p], None, &DetectionOptions::default())?;
    Ok(values[0])
}

/// `F_p` for every order in `ps`, sharing one contour. `known_radius` is
/// the first-zero radius at the unshifted origin when the caller already
/// has it.
pub fn detection_functionals(
    fiber: FamilyFiber<'_>,
    ps: &[u32],
    known_radius: Option<FirstZeroRadius>,
    opts: &DetectionOptions,
) -> Result<Vec<DetectionValue>, ZeroError> {
    if let Some(&p) = ps.iter().find(|&&p| p == 0) {
        return Err(ZeroError::InvalidArgument(format!("order p = {p} must be >= 1")));
    }
    let (fiber, radius) = zero_free_origin(fiber, known_radius, opts)?;
    let contour_radius = match radius {
        FirstZeroRadius::Finite(r) => (0.5 * r).min(1.0),
        FirstZeroRadius::ExceedsSearchBound(b) => (0.5 * b).min(1.0),
    };
    let coeffs = cauchy_coeffs_adaptive(
        |z| fiber.log_derivative(z),
        Complex64::new(0.0, 0.0),
        contour_radius,
        ps,
        &opts.quadrature,
    )?;
    Ok(ps
        .iter()
        .zip(coeffs)
        .map(|(&p, value)| DetectionValue { p, value, contour_radius, origin_shift: fiber.origin })
        .collect())
}

/// Picks the expansion point: the origin unless the fiber vanishes there,
/// otherwise the best of 16 points on `|z| = 1/2` with a zero-free disk.
fn zero_free_origin<'a>(
    fiber: FamilyFiber<'a>,
    known_radius: Option<FirstZeroRadius>,
    opts: &DetectionOptions,
) -> Result<(FamilyFiber<'a>, FirstZeroRadius), ZeroError> {
    let origin = Complex64::new(0.0, 0.0);
    let at_origin = fiber.value(origin).norm() <= 1e-12 * unit_circle_scale(&fiber);
    if !at_origin {
        let r = match known_radius {
            Some(FirstZeroRadius::Finite(r)) if r > 0.0 => FirstZeroRadius::Finite(r),
            Some(r @ FirstZeroRadius::ExceedsSearchBound(_)) => r,
            _ => first_zero_radius_fiber(&fiber, opts.r_max, &opts.quadrature)?,
        };
        if r != FirstZeroRadius::Finite(0.0) {
            return Ok((fiber, r));
        }
    }
    if !opts.recentre {
        return Err(ZeroError::OriginIsZero);
    }
    let mut candidates: Vec<(Complex64, f64)> = (0..RECENTRE_CANDIDATES)
        .map(|k| {
            let c = Complex64::from_polar(0.5, std::f64::consts::TAU * k as f64 / RECENTRE_CANDIDATES as f64);
            (c, fiber.value(c).norm())
        })
        .collect();
    // stable: ties keep index order
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (shift, _) in candidates {
        let moved = fiber.recentred(fiber.origin + shift);
        match first_zero_radius_fiber(&moved, opts.r_max, &opts.quadrature)? {
            FirstZeroRadius::Finite(0.0) => continue,
            r => return Ok((moved, r)),
        }
    }
    Err(ZeroError::NoZeroFreeDisk)
}

/// `sign * p! * sum_a m_a a^{-p-1}` over a validated inventory.
pub fn functional_from_zeros(inventory: &ZeroInventory, p: u32) -> Result<Complex64, ZeroError> {
    if !inventory.validated {
        return Err(ZeroError::NotValidated);
    }
    if p == 0 {
        return Err(ZeroError::InvalidArgument("order p must be >= 1".into()));
    }
    let factorial = (1..=p).fold(1.0, |acc, k| acc * k as f64);
    let mut sum = Complex64::new(0.0, 0.0);
    for &(a, m) in &inventory.zeros {
        if a.norm() <= 1e-300 {
            return Err(ZeroError::ZeroAtOrigin);
        }
        sum += a.powi(-(p as i32) - 1) * m as f64;
    }
    Ok(sum * (ZERO_SUM_SIGN * factorial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::locate_zeros;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn family(key: &str) -> ParametricFamily {
        ParametricFamily::by_key(key).unwrap()
    }

    /// d^p/dz^p of 2z/(z^2-1) = 1/(z-1) + 1/(z+1) at 0:
    /// (-1)^p p! ((-1)^{-p-1} + 1^{-p-1}) = -p! (1 + (-1)^{p+1}) ... by hand:
    /// d^p/dz^p (z-a)^{-1} = (-1)^p p! (z-a)^{-p-1}.
    fn quadratic_oracle(p: u32) -> f64 {
        let fact = (1..=p).fold(1.0, |acc, k| acc * k as f64);
        let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
        let term = |a: f64| sign * fact * (-a).powi(-(p as i32) - 1);
        term(1.0) + term(-1.0)
    }

    #[test]
    fn symbolic_oracle_values() {
        assert_eq!(quadratic_oracle(1), -2.0);
        assert_eq!(quadratic_oracle(2), 0.0);
        assert_eq!(quadratic_oracle(3), -12.0);
    }

    #[test]
    fn quadratic_detection_values() {
        let f = family("quadratic");
        for p in 1..=4 {
            let v = detection_functional(&f, c(1.0, 0.0), p).unwrap();
            assert!((v.value - quadratic_oracle(p)).norm() <= 1e-8, "p={p}: {v:?}");
            assert_eq!(v.origin_shift, c(0.0, 0.0));
            assert_eq!(v.contour_radius, 0.5);
        }
    }

    #[test]
    fn sign_pinned_against_zero_sum() {
        let f = family("quadratic");
        let inv = locate_zeros(&f, c(1.0, 0.0), 2.0).unwrap();
        for p in 1..=3 {
            let from_zeros = functional_from_zeros(&inv, p).unwrap();
            let direct = detection_functional(&f, c(1.0, 0.0), p).unwrap().value;
            assert!((from_zeros - direct).norm() < 1e-10);
        }
        assert!((functional_from_zeros(&inv, 1).unwrap() - ZERO_SUM_SIGN * 2.0).norm() < 1e-12);
        assert!(functional_from_zeros(&inv, 2).unwrap().norm() < 1e-12);
    }

    #[test]
    fn empty_inventory_gives_zero() {
        let inv = ZeroInventory { zeros: vec![], search_radius: 1.0, total_count: 0, validated: true };
        assert_eq!(functional_from_zeros(&inv, 3).unwrap(), c(0.0, 0.0));
        let bad = ZeroInventory { validated: false, ..inv.clone() };
        assert_eq!(functional_from_zeros(&bad, 3), Err(ZeroError::NotValidated));
        let origin = ZeroInventory { zeros: vec![(c(0.0, 0.0), 1)], total_count: 1, ..inv };
        assert_eq!(functional_from_zeros(&origin, 1), Err(ZeroError::ZeroAtOrigin));
    }

    #[test]
    fn zero_free_fiber_has_vanishing_functionals() {
        let f = family("example1");
        for p in 1..=5 {
            let v = detection_functional(&f, c(0.0, 0.0), p).unwrap();
            assert!(v.value.norm() <= 1e-9, "p={p} {v:?}");
            assert_eq!(v.contour_radius, 1.0);
        }
    }

    #[test]
    fn recentres_when_origin_is_a_zero() {
        let f = family("example2");
        let v = detection_functional(&f, c(1.0, 0.0), 2).unwrap();
        assert_ne!(v.origin_shift, c(0.0, 0.0));
        assert!((v.origin_shift.norm() - 0.5).abs() < 1e-15);
        // e^z - 1 has zeros 2 pi i k; check against the recentred zero sum
        let shift = v.origin_shift;
        let want: Complex64 = (-60..=60)
            .map(|k| c(0.0, std::f64::consts::TAU * k as f64) - shift)
            .map(|a| -2.0 * a.powi(-3))
            .sum();
        assert!((v.value - want).norm() < 1e-5, "{} vs {}", v.value, want);

        let no = detection_functionals(
            f.fiber(c(1.0, 0.0)),
            &[1],
            None,
            &DetectionOptions { recentre: false, ..Default::default() },
        );
        assert_eq!(no.unwrap_err(), ZeroError::OriginIsZero);
    }

    #[test]
    fn cross_check_on_example1() {
        let f = family("example1");
        let w = c(1.0, 0.0);
        let inv = locate_zeros(&f, w, 50.0).unwrap();
        assert!(inv.validated);
        let direct = detection_functional(&f, w, 3).unwrap().value;
        let from_zeros = functional_from_zeros(&inv, 3).unwrap();
        assert!((direct - from_zeros).norm() <= 1e-4, "{direct} vs {from_zeros}");
    }
}
