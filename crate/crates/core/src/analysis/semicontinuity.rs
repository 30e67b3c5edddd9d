use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{chordal_distance, AnalysisError, SphereValue, Verdict};
use crate::contour::QuadratureOptions;
use crate::families::ParametricFamily;
use crate::zeros::{count_in_disk, ZeroError};

const PROBES: usize = 8;
const MAX_REJECTIONS: usize = 100_000;

/// A sampled value that some fiber failed to attain within the radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub a: Complex64,
    pub w: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemicontinuityReport {
    pub w0: Complex64,
    pub epsilon: f64,
    pub delta: f64,
    pub radius: f64,
    /// `A(w0)`: the omitted values of the centre fiber.
    pub omitted: Vec<SphereValue>,
    pub samples: Vec<Complex64>,
    pub violations: Vec<Violation>,
    pub verdict: Verdict,
}

/// Omitted values of the fiber over `w`: infinity, plus the family's
/// known finite exceptional value there.
pub fn omitted_set(family: &ParametricFamily, w: Complex64) -> Vec<SphereValue> {
    let mut set = vec![SphereValue::Infinity];
    if let Some(a @ SphereValue::Finite(_)) = family.known_exceptional(w) {
        set.push(a);
    }
    set
}

/// Whether `f(z, w) = a` has a solution in `|z| < radius`, probing
/// circles of doubling radius from `1/2` and stopping at the first hit.
pub fn attains_within(
    family: &ParametricFamily,
    w: Complex64,
    a: Complex64,
    radius: f64,
) -> Result<bool, ZeroError> {
    let fiber = family.fiber(w).shifted(a);
    let opts = QuadratureOptions::default();
    let mut rho = 0.5f64.min(radius);
    loop {
        if count_in_disk(&fiber, Complex64::new(0.0, 0.0), rho, &opts)?.count >= 1 {
            return Ok(true);
        }
        if rho >= radius {
            return Ok(false);
        }
        rho = (2.0 * rho).min(radius);
    }
}

/// Samples `n_samples` points of the sphere, uniformly by area, at chordal
/// distance more than `epsilon` from `A(w0)`, and checks that each is
/// attained within `radius` by the fiber over `w0` and over 8 parameters
/// on `|w - w0| = delta`.
pub fn semicontinuity_check(
    family: &ParametricFamily,
    w0: Complex64,
    epsilon: f64,
    delta: f64,
    radius: f64,
    n_samples: usize,
    seed: u64,
) -> Result<SemicontinuityReport, AnalysisError> {
    if !(epsilon > 0.0 && epsilon < 2.0) {
        return Err(AnalysisError::InvalidArgument(format!("epsilon {epsilon} not in (0, 2)")));
    }
    if !(delta >= 0.0 && delta.is_finite() && radius > 0.0 && radius.is_finite()) {
        return Err(AnalysisError::InvalidArgument(format!(
            "need delta >= 0 and radius > 0, got {delta} and {radius}"
        )));
    }
    let omitted = omitted_set(family, w0);
    let samples = sample_sphere(&omitted, epsilon, n_samples, seed)?;
    let params: Vec<Complex64> = std::iter::once(w0)
        .chain(
            (0..PROBES)
                .map(|k| w0 + Complex64::from_polar(delta, std::f64::consts::TAU * k as f64 / PROBES as f64)),
        )
        .collect();

    let jobs: Vec<(Complex64, Complex64)> =
        samples.iter().flat_map(|&a| params.iter().map(move |&w| (a, w))).collect();
    let attained: Vec<bool> =
        jobs.par_iter().map(|&(a, w)| attains_within(family, w, a, radius)).collect::<Result<_, _>>()?;
    let violations: Vec<Violation> =
        jobs.iter().zip(attained).filter(|(_, hit)| !hit).map(|(&(a, w), _)| Violation { a, w }).collect();
    let verdict = if violations.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(SemicontinuityReport { w0, epsilon, delta, radius, omitted, samples, violations, verdict })
}

fn sample_sphere(
    avoid: &[SphereValue],
    epsilon: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<Complex64>, AnalysisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut tries = 0;
    while out.len() < n {
        tries += 1;
        if tries > MAX_REJECTIONS {
            return Err(AnalysisError::InvalidArgument(format!(
                "no sphere points found outside the {epsilon}-neighbourhood"
            )));
        }
        let z: f64 = rng.random_range(-1.0..1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let s = (1.0 - z * z).sqrt();
        let SphereValue::Finite(a) = SphereValue::from_unit_sphere(s * phi.cos(), s * phi.sin(), z) else {
            continue;
        };
        if avoid.iter().all(|&b| chordal_distance(a.into(), b) > epsilon) {
            out.push(a);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(key: &str) -> ParametricFamily {
        ParametricFamily::by_key(key).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn omitted_sets() {
        assert_eq!(omitted_set(&family("example1"), c(0.0, 0.0)).len(), 2);
        assert_eq!(omitted_set(&family("example1"), c(1.0, 0.0)), vec![SphereValue::Infinity]);
        assert_eq!(
            omitted_set(&family("example4"), c(2.0, 0.0)),
            vec![SphereValue::Infinity, SphereValue::Finite(c(-0.5, 0.0))]
        );
        assert_eq!(omitted_set(&family("linear"), c(3.0, 1.0)), vec![SphereValue::Infinity]);
    }

    #[test]
    fn sampling_is_uniform_and_avoids_the_set() {
        let avoid = [SphereValue::Infinity, SphereValue::Finite(c(0.0, 0.0))];
        let pts = sample_sphere(&avoid, 0.5, 4000, 3).unwrap();
        assert!(pts.iter().all(|&a| avoid.iter().all(|&b| chordal_distance(a.into(), b) > 0.5)));
        // by symmetry of the excluded caps, half the mass lies inside |a| < 1
        let inside = pts.iter().filter(|a| a.norm() < 1.0).count() as f64 / pts.len() as f64;
        assert!((inside - 0.5).abs() < 0.04, "{inside}");
        assert_eq!(pts, sample_sphere(&avoid, 0.5, 4000, 3).unwrap());
    }

    #[test]
    fn spec_examples_pass() {
        let rep = semicontinuity_check(&family("example1"), c(0.0, 0.0), 0.5, 1e-2, 30.0, 8, 1).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep:?}");
        let rep = semicontinuity_check(&family("linear"), c(0.7, -0.2), 0.5, 1e-2, 100.0, 8, 2).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        let rep = semicontinuity_check(&family("example2"), c(0.0, 0.0), 0.5, 1e-2, 30.0, 8, 3).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn nearby_exceptional_values_approach_infinity() {
        let f = family("example2");
        for t in [1e-2, 1e-3] {
            let a = f.known_exceptional(c(t, 0.0)).unwrap();
            assert!(chordal_distance(a, SphereValue::Infinity) < 0.5);
        }
    }

    #[test]
    fn missing_a_value_is_a_violation() {
        // the sampled set must avoid 0 for the probes to attain it; forcing
        // the centre fiber's omitted value in shows up as a violation
        let f = family("example1");
        assert!(!attains_within(&f, c(0.0, 0.0), c(0.0, 0.0), 20.0).unwrap());
        assert!(attains_within(&f, c(1e-2, 0.0), c(0.0, 0.0), 20.0).unwrap());
    }
}
