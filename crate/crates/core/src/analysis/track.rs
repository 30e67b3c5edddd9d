use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{AnalysisError, ErrorTag, SphereValue};
use crate::contour::QuadratureOptions;
use crate::families::ParametricFamily;
use crate::zeros::{count_in_disk, ZeroError};

/// `f(z, w) = a` has no solution in `|z| < radius`. Only a `false` answer
/// is conclusive for the whole plane.
pub fn omitted_value_test(
    family: &ParametricFamily,
    w: Complex64,
    a: Complex64,
    radius: f64,
) -> Result<bool, ZeroError> {
    let fiber = family.fiber(w).shifted(a);
    Ok(count_in_disk(&fiber, Complex64::new(0.0, 0.0), radius, &QuadratureOptions::default())?.count == 0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackOptions {
    /// Value checked at every path point instead of the family metadata.
    pub candidate: Option<SphereValue>,
    /// `|a| > 1 / pole_tol` marks a pole outright.
    pub pole_tol: f64,
    /// Largest distance from the `|a|`-maximizer at which a pole predicted
    /// by a Newton step on `1/a` is accepted.
    pub pole_reach: f64,
    /// Holomorphy cells closer than this to a pole are left out.
    pub pole_exclusion: f64,
    /// Spacing of the 3x3 holomorphy cells around each path point.
    pub cr_spacing: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            candidate: None,
            pole_tol: 1e-3,
            pole_reach: 0.25,
            pole_exclusion: 0.05,
            cr_spacing: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSample {
    pub w: Complex64,
    pub a: SphereValue,
    pub omitted_verified: bool,
    pub search_radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorTag>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathTrace {
    pub samples: Vec<PathSample>,
    pub poles: Vec<Complex64>,
    pub cr_residual: f64,
}

impl PathTrace {
    pub fn has_errors(&self) -> bool {
        self.samples.iter().any(|s| s.error.is_some())
    }
}

/// Checks a claimed exceptional value `a(w)` at every point of `path`,
/// locates poles of `a` along it and measures how far `a` is from
/// holomorphic near the path.
pub fn track_exceptional_value(
    family: &ParametricFamily,
    path: &[Complex64],
    radius: f64,
    opts: &TrackOptions,
) -> Result<PathTrace, AnalysisError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(AnalysisError::InvalidArgument(format!("radius {radius} must be positive")));
    }
    if opts.candidate.is_none() && !family.has_exceptional_metadata() {
        return Err(AnalysisError::MissingMetadata(family.key().to_string()));
    }
    let value_at = |w: Complex64| -> SphereValue {
        opts.candidate.or_else(|| family.known_exceptional(w)).unwrap_or(SphereValue::Infinity)
    };

    let samples: Vec<PathSample> = path
        .par_iter()
        .map(|&w| {
            let a = value_at(w);
            let (omitted_verified, error) = match a {
                SphereValue::Infinity => (true, None),
                SphereValue::Finite(a) => match omitted_value_test(family, w, a, radius) {
                    Ok(v) => (v, None),
                    Err(e) => (false, Some(ErrorTag::from(&e))),
                },
            };
            PathSample { w, a, omitted_verified, search_radius: radius, error }
        })
        .collect();

    let poles = detect_poles(&samples, opts);
    let h = opts.cr_spacing;
    let cr_residual = samples
        .par_iter()
        .filter(|s| poles.iter().all(|p| (s.w - p).norm() > opts.pole_exclusion))
        .filter_map(|s| {
            let grid: Vec<Vec<SphereValue>> = (-1..=1)
                .map(|k| (-1..=1).map(|j| value_at(s.w + Complex64::new(j as f64, k as f64) * h)).collect())
                .collect();
            holomorphy_residual(&grid, h).ok()
        })
        .reduce(|| 0.0, f64::max);

    Ok(PathTrace { samples, poles, cr_residual })
}

/// Pole candidates: points where `a` is infinite, the `|a|`-maximizer of
/// every run with `|a| > 1/pole_tol`, and the zero of `1/a` predicted by
/// a Newton step from a path end where `|a|` is still growing.
fn detect_poles(samples: &[PathSample], opts: &TrackOptions) -> Vec<Complex64> {
    let mut poles: Vec<Complex64> = Vec::new();
    let push = |p: Complex64, poles: &mut Vec<Complex64>| {
        if poles.iter().all(|q| (p - q).norm() > opts.pole_exclusion) {
            poles.push(p);
        }
    };
    let modulus = |s: &PathSample| s.a.finite().map_or(f64::INFINITY, |a| a.norm());

    let mut run: Option<usize> = None;
    for (i, s) in samples.iter().enumerate() {
        let m = modulus(s);
        if m > 1.0 / opts.pole_tol {
            match run {
                Some(j) if modulus(&samples[j]) >= m => {}
                _ => run = Some(i),
            }
        } else if let Some(j) = run.take() {
            push(samples[j].w, &mut poles);
        }
    }
    if let Some(j) = run {
        push(samples[j].w, &mut poles);
    }

    for ends in
        [samples.iter().take(3).rev().collect::<Vec<_>>(), samples.iter().rev().take(3).rev().collect()]
    {
        // `ends` runs towards the path end being examined
        if ends.len() < 3 {
            continue;
        }
        let vals: Option<Vec<Complex64>> = ends.iter().map(|s| s.a.finite()).collect();
        let Some(vals) = vals else { continue };
        let growing = vals.windows(2).all(|p| p[1].norm() > p[0].norm());
        if !growing || vals.iter().any(|a| a.norm() == 0.0) {
            continue;
        }
        let (w1, w2) = (ends[1].w, ends[2].w);
        let (g1, g2) = (vals[1].inv(), vals[2].inv());
        let slope = (g2 - g1) / (w2 - w1);
        if slope.norm() == 0.0 || !slope.is_finite() {
            continue;
        }
        let pole = w2 - g2 / slope;
        if (pole - w2).norm() <= opts.pole_reach {
            push(pole, &mut poles);
        }
    }
    poles
}

/// Largest discrete Cauchy-Riemann residual
/// `|da/dx + i da/dy|` over the interior of a grid indexed `[im][re]`
/// with spacing `h`, using central differences.
pub fn holomorphy_residual(values: &[Vec<SphereValue>], h: f64) -> Result<f64, AnalysisError> {
    let rows = values.len();
    let cols = values.first().map_or(0, Vec::len);
    if rows < 3 || cols < 3 || values.iter().any(|r| r.len() != cols) {
        return Err(AnalysisError::InvalidGrid(
            "holomorphy grid must be rectangular and at least 3x3".into(),
        ));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(AnalysisError::InvalidArgument(format!("spacing {h} must be positive")));
    }
    let grid: Vec<Vec<Complex64>> = values
        .iter()
        .map(|r| r.iter().map(|v| v.finite().ok_or(AnalysisError::InfinityInGrid)).collect())
        .collect::<Result<_, _>>()?;
    let mut worst = 0.0f64;
    for k in 1..rows - 1 {
        for j in 1..cols - 1 {
            let dx = (grid[k][j + 1] - grid[k][j - 1]) / (2.0 * h);
            let dy = (grid[k + 1][j] - grid[k - 1][j]) / (2.0 * h);
            worst = worst.max((dx + Complex64::i() * dy).norm());
        }
    }
    Ok(worst)
}
