use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AnalysisError, ErrorTag};
use crate::contour::QuadratureOptions;
use crate::families::{FamilySpec, ParametricFamily};
use crate::zeros::{
    count_in_disk, detection_functionals, first_zero_radius_fiber, DetectionOptions, DetectionValue,
    FirstZeroRadius, ZeroError,
};

/// Largest `|F_p|` still read as zero by the candidate rule.
pub const CANDIDATE_TOL: f64 = 1e-8;

/// Rectangular parameter grid with inclusive end points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        let finite = [self.re0, self.re1, self.im0, self.im1].iter().all(|v| v.is_finite());
        if !finite {
            return Err(AnalysisError::InvalidGrid("bounds must be finite".into()));
        }
        if self.n_re < 2 || self.n_im < 2 {
            return Err(AnalysisError::InvalidGrid("need at least 2 points per axis".into()));
        }
        if self.re0 >= self.re1 || self.im0 >= self.im1 {
            return Err(AnalysisError::InvalidGrid("need re0 < re1 and im0 < im1".into()));
        }
        Ok(())
    }

    fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    /// Grid points, imaginary part outer, real part inner.
    pub fn points(&self) -> Vec<Complex64> {
        (0..self.n_im)
            .flat_map(|k| {
                let im = Self::axis(self.im0, self.im1, self.n_im, k);
                (0..self.n_re).map(move |j| Complex64::new(Self::axis(self.re0, self.re1, self.n_re, j), im))
            })
            .collect()
    }
}

/// Detection functionals of one record.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FpValues {
    /// The family's order is unknown, so no `p` is admissible.
    Skipped,
    Values(Vec<DetectionValue>),
    Failed(ErrorTag),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub w: Complex64,
    pub zero_count: Result<u32, ErrorTag>,
    pub r: Result<FirstZeroRadius, ErrorTag>,
    pub fp: FpValues,
    pub candidate: bool,
    /// First failure among the fields, if any.
    pub error: Option<ErrorTag>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub family: FamilySpec,
    pub grid: GridSpec,
    pub radius: f64,
    pub p_list: Vec<u32>,
    pub records: Vec<ScanRecord>,
}

impl ScanReport {
    pub fn has_errors(&self) -> bool {
        self.records.iter().any(|r| r.error.is_some())
    }

    pub fn candidates(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.records.iter().filter(|r| r.candidate).map(|r| r.w)
    }
}

/// Zero count in `|z| < radius`, `r(w)` bounded by `radius`, and `F_p`
/// at every grid point. A point is a candidate for the exceptional set
/// when its fiber has no zero in the disk and every requested `|F_p|` is
/// at most `1e-8`. Per-point failures are recorded, not raised.
pub fn exceptional_set_scan(
    family: &ParametricFamily,
    grid: &GridSpec,
    radius: f64,
    p_list: &[u32],
) -> Result<ScanReport, AnalysisError> {
    grid.validate()?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(AnalysisError::InvalidArgument(format!("radius {radius} must be positive")));
    }
    let first_p = family.order_bound().first_detection_order();
    if let (Some(min_p), Some(&bad)) = (first_p, p_list.iter().find(|&&p| Some(p) < first_p)) {
        return Err(AnalysisError::InvalidArgument(format!(
            "p = {bad} does not exceed the order bound {} of `{}`; need p >= {min_p}",
            family.order_bound(),
            family.key()
        )));
    }
    let detect = first_p.is_some();
    let records =
        grid.points().into_par_iter().map(|w| scan_point(family, w, radius, p_list, detect)).collect();
    Ok(ScanReport { family: family.spec(), grid: *grid, radius, p_list: p_list.to_vec(), records })
}

fn scan_point(
    family: &ParametricFamily,
    w: Complex64,
    radius: f64,
    p_list: &[u32],
    detect: bool,
) -> ScanRecord {
    let fiber = family.fiber(w);
    let quad = QuadratureOptions::default();
    let tag = |e: ZeroError| ErrorTag::from(&e);

    let zero_count = count_in_disk(&fiber, Complex64::new(0.0, 0.0), radius, &quad).map(|c| c.count);
    let r = match zero_count {
        Ok(0) => Ok(FirstZeroRadius::ExceedsSearchBound(radius)),
        _ => first_zero_radius_fiber(&fiber, radius, &quad),
    }
    .map_err(tag);
    let zero_count = zero_count.map_err(tag);

    let fp = if !detect {
        FpValues::Skipped
    } else if p_list.is_empty() {
        FpValues::Values(Vec::new())
    } else {
        let opts = DetectionOptions { r_max: radius, ..Default::default() };
        match detection_functionals(fiber, p_list, r.ok(), &opts) {
            Ok(v) => FpValues::Values(v),
            Err(e) => FpValues::Failed(tag(e)),
        }
    };

    let fp_error = match fp {
        FpValues::Failed(t) => Some(t),
        _ => None,
    };
    let error = zero_count.err().or(r.err()).or(fp_error);
    let fp_small = match &fp {
        FpValues::Skipped => true,
        FpValues::Values(v) => v.iter().all(|d| d.value.norm() <= CANDIDATE_TOL),
        FpValues::Failed(_) => false,
    };
    let candidate = zero_count == Ok(0) && fp_small && error.is_none();
    ScanRecord { w, zero_count, r, fp, candidate, error }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(key: &str) -> ParametricFamily {
        ParametricFamily::by_key(key).unwrap()
    }

    fn grid(lo: f64, hi: f64, n: usize) -> GridSpec {
        GridSpec { re0: lo, re1: hi, im0: lo, im1: hi, n_re: n, n_im: n }
    }

    #[test]
    fn grid_validation_and_order() {
        assert!(grid(-1.0, 1.0, 2).validate().is_ok());
        assert!(grid(1.0, -1.0, 5).validate().is_err());
        assert!(grid(-1.0, 1.0, 1).validate().is_err());
        assert!(GridSpec { im1: -1.0, ..grid(-1.0, 1.0, 3) }.validate().is_err());
        let pts = GridSpec { re0: 0.0, re1: 1.0, im0: 5.0, im1: 6.0, n_re: 3, n_im: 2 }.points();
        let expect = [(0.0, 5.0), (0.5, 5.0), (1.0, 5.0), (0.0, 6.0), (0.5, 6.0), (1.0, 6.0)];
        assert_eq!(pts, expect.map(|(a, b)| Complex64::new(a, b)));
        // centre and end points land exactly
        let pts = grid(-1.0, 1.0, 41).points();
        assert!(pts.contains(&Complex64::new(0.0, 0.0)));
        assert_eq!(pts[40], Complex64::new(1.0, -1.0));
    }

    #[test]
    fn quadratic_has_two_zeros_everywhere() {
        let rep = exceptional_set_scan(&family("quadratic"), &grid(-1.0, 1.0, 5), 4.0, &[1, 2]).unwrap();
        assert!(!rep.has_errors());
        for rec in &rep.records {
            assert_eq!(rec.zero_count, Ok(2), "{rec:?}");
            assert!(!rec.candidate);
        }
    }

    #[test]
    fn example1_flags_the_origin() {
        let rep = exceptional_set_scan(&family("example1"), &grid(-1.0, 1.0, 9), 10.0, &[2, 3]).unwrap();
        assert!(!rep.has_errors());
        assert_eq!(rep.candidates().collect::<Vec<_>>(), vec![Complex64::new(0.0, 0.0)]);
        let origin = rep.records.iter().find(|r| r.w == Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(origin.r, Ok(FirstZeroRadius::ExceedsSearchBound(10.0)));
    }

    #[test]
    fn unknown_order_skips_detection() {
        let rep = exceptional_set_scan(&family("example4"), &grid(-1.0, 1.0, 3), 3.0, &[2]).unwrap();
        assert!(rep.records.iter().all(|r| r.fp == FpValues::Skipped));
    }

    #[test]
    fn config_errors() {
        let f = family("example1");
        assert!(exceptional_set_scan(&f, &grid(-1.0, 1.0, 3), 10.0, &[1]).is_err());
        assert!(exceptional_set_scan(&f, &grid(-1.0, 1.0, 3), -1.0, &[2]).is_err());
        assert!(exceptional_set_scan(&f, &grid(1.0, 1.0, 3), 1.0, &[2]).is_err());
    }
}
