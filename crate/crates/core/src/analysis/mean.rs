use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{AnalysisError, Verdict};
use crate::families::ParametricFamily;
use crate::zeros::{first_zero_radius, FirstZeroRadius};

const SEARCH_BOUND: f64 = 64.0;

/// Circle mean of `log r` around `w0` against its centre value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanInequalityReport {
    pub w0: Complex64,
    pub delta: f64,
    /// Trapezoidal mean of `log r` over the finite nodes.
    pub circle_mean: f64,
    /// `log r(w0)`, `+inf` for a zero-free centre fiber.
    pub center_value: f64,
    pub n_theta: usize,
    /// Nodes whose fiber had no zero within the search bound.
    pub skipped_nodes: usize,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Checks `mean_theta log r(w0 + delta e^{i theta}) <= log r(w0) + tol`
/// with `tol = 1e-6 + delta^2`. Any node or centre beyond the search bound
/// makes the comparison undefined and the verdict inconclusive.
pub fn superharmonic_mean_check(
    family: &ParametricFamily,
    w0: Complex64,
    delta: f64,
    n_theta: usize,
) -> Result<MeanInequalityReport, AnalysisError> {
    if !(delta > 0.0 && delta.is_finite()) || n_theta < 3 {
        return Err(AnalysisError::InvalidArgument(format!(
            "need delta > 0 and n_theta >= 3, got {delta} and {n_theta}"
        )));
    }
    let center = first_zero_radius(family, w0, SEARCH_BOUND)?;
    let nodes: Vec<FirstZeroRadius> = (0..n_theta)
        .into_par_iter()
        .map(|k| {
            let w = w0 + Complex64::from_polar(delta, std::f64::consts::TAU * k as f64 / n_theta as f64);
            first_zero_radius(family, w, SEARCH_BOUND)
        })
        .collect::<Result<_, _>>()?;

    let finite: Vec<f64> = nodes.iter().filter_map(|r| r.finite()).map(f64::ln).collect();
    let skipped_nodes = n_theta - finite.len();
    let circle_mean =
        if finite.is_empty() { f64::INFINITY } else { finite.iter().sum::<f64>() / finite.len() as f64 };
    let center_value = center.ln();
    let tolerance = 1e-6 + delta * delta;
    let verdict = if skipped_nodes > 0 || !center_value.is_finite() {
        Verdict::Inconclusive
    } else if circle_mean <= center_value + tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(MeanInequalityReport {
        w0,
        delta,
        circle_mean,
        center_value,
        n_theta,
        skipped_nodes,
        tolerance,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(key: &str) -> ParametricFamily {
        ParametricFamily::by_key(key).unwrap()
    }

    #[test]
    fn harmonic_case_is_an_equality() {
        // r(w) = |w|^{1/2}, so log r is harmonic off the origin
        let rep = superharmonic_mean_check(&family("quadratic"), Complex64::new(1.0, 0.0), 0.25, 64).unwrap();
        assert_eq!(rep.center_value, 0.0);
        assert!((rep.circle_mean - rep.center_value).abs() <= 1e-6, "{rep:?}");
        assert_eq!(rep.verdict, Verdict::Pass);
        assert_eq!(rep.skipped_nodes, 0);
    }

    #[test]
    fn example1_satisfies_the_inequality() {
        let rep = superharmonic_mean_check(&family("example1"), Complex64::new(1.0, 0.0), 0.25, 64).unwrap();
        assert!(rep.circle_mean <= rep.center_value + 1e-6, "{rep:?}");
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn zero_free_centre_is_inconclusive() {
        let rep = superharmonic_mean_check(&family("example1"), Complex64::new(0.0, 0.0), 0.1, 16).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        assert_eq!(rep.center_value, f64::INFINITY);
    }

    #[test]
    fn rejects_bad_arguments() {
        let f = family("quadratic");
        assert!(superharmonic_mean_check(&f, Complex64::new(1.0, 0.0), 0.0, 64).is_err());
        assert!(superharmonic_mean_check(&f, Complex64::new(1.0, 0.0), 0.1, 2).is_err());
    }
}
