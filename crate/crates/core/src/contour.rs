//! Trapezoidal quadrature on circles.
//!
//! For an integrand analytic on an annulus around the circle the
//! equispaced trapezoidal rule converges geometrically in the node count,
//! so every adaptive routine here doubles the node count (reusing the
//! samples it already has) until two successive results agree.

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("integrand blow-up at node {node} (z = {z})")]
    IntegrandBlowUp { node: usize, z: Complex64 },
    #[error("quadrature did not converge with {nodes} nodes (last change {change:e})")]
    NonConvergence { nodes: usize, change: f64 },
    #[error("invalid contour: {0}")]
    InvalidContour(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleContour {
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

impl CircleContour {
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self, ContourError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(ContourError::InvalidContour(format!("radius {radius} must be positive")));
        }
        if nodes < 16 || !nodes.is_power_of_two() {
            return Err(ContourError::InvalidContour(format!(
                "node count {nodes} must be a power of two >= 16"
            )));
        }
        Ok(CircleContour { center, radius, nodes })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub initial_nodes: usize,
    pub rel_tol: f64,
    pub max_nodes: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { initial_nodes: 512, rel_tol: 1e-10, max_nodes: 1 << 16 }
    }
}

fn node(k: usize, n: usize) -> Complex64 {
    Complex64::cis(TAU * k as f64 / n as f64)
}

/// Samples of `g` on `center + radius * e^{2 pi i k / n}`.
struct CircleSamples {
    center: Complex64,
    radius: f64,
    values: Vec<Complex64>,
    /// `units[k] = node(k, n)`.
    units: Vec<Complex64>,
    abs_mean: f64,
}

impl CircleSamples {
    fn sample<G>(g: &G, center: Complex64, radius: f64, n: usize) -> Result<Self, ContourError>
    where
        G: Fn(Complex64) -> Complex64 + ?Sized,
    {
        let units: Vec<Complex64> = (0..n).map(|k| node(k, n)).collect();
        let mut values = Vec::with_capacity(n);
        for (k, &u) in units.iter().enumerate() {
            let z = center + radius * u;
            let v = g(z);
            if !v.is_finite() {
                return Err(ContourError::IntegrandBlowUp { node: k, z });
            }
            values.push(v);
        }
        let mut s = CircleSamples { center, radius, values, units, abs_mean: 0.0 };
        s.refresh_scale();
        Ok(s)
    }

    fn refine<G>(&mut self, g: &G) -> Result<(), ContourError>
    where
        G: Fn(Complex64) -> Complex64 + ?Sized,
    {
        let n = self.values.len() * 2;
        let mut values = Vec::with_capacity(n);
        let mut units = Vec::with_capacity(n);
        for (j, (&old, &u)) in self.values.iter().zip(&self.units).enumerate() {
            values.push(old);
            units.push(u);
            let k = 2 * j + 1;
            let unit = node(k, n);
            let z = self.center + self.radius * unit;
            let v = g(z);
            if !v.is_finite() {
                return Err(ContourError::IntegrandBlowUp { node: k, z });
            }
            values.push(v);
            units.push(unit);
        }
        self.values = values;
        self.units = units;
        self.refresh_scale();
        Ok(())
    }

    fn refresh_scale(&mut self) {
        self.abs_mean = self.values.iter().map(|v| v.norm()).sum::<f64>() / self.values.len() as f64;
    }

    fn len(&self) -> usize {
        self.values.len()
    }

    /// `(1/N) sum g_k e^{i j theta_k}`.
    fn fourier(&self, j: i64) -> Complex64 {
        let n = self.len();
        let step = j.rem_euclid(n as i64) as usize;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut idx = 0;
        for &v in &self.values {
            sum += v * self.units[idx];
            idx += step;
            if idx >= n {
                idx -= n;
            }
        }
        sum / n as f64
    }
}

/// Runs `reduce` on successively doubled sample sets until every component
/// changes by at most `rel_tol * max(|value|, scale)`.
fn adaptive<G, R>(
    g: &G,
    center: Complex64,
    radius: f64,
    opts: &QuadratureOptions,
    reduce: R,
) -> Result<Vec<Complex64>, ContourError>
where
    G: Fn(Complex64) -> Complex64 + ?Sized,
    R: Fn(&CircleSamples) -> (Vec<Complex64>, f64),
{
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(ContourError::InvalidContour(format!("radius {radius} must be positive")));
    }
    let start = opts.initial_nodes.max(16).next_power_of_two();
    let mut samples = CircleSamples::sample(g, center, radius, start)?;
    let (mut prev, _) = reduce(&samples);
    let mut change = f64::INFINITY;
    loop {
        if samples.len() * 2 > opts.max_nodes {
            return Err(ContourError::NonConvergence { nodes: samples.len(), change });
        }
        samples.refine(g)?;
        let (cur, scale) = reduce(&samples);
        change = cur
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).norm() / a.norm().max(scale).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        if change <= opts.rel_tol {
            return Ok(cur);
        }
        prev = cur;
    }
}

/// `oint g(z) dz` on a fixed-size trapezoidal rule.
pub fn circle_integral<G>(g: G, contour: &CircleContour) -> Result<Complex64, ContourError>
where
    G: Fn(Complex64) -> Complex64,
{
    let samples = CircleSamples::sample(&g, contour.center, contour.radius, contour.nodes)?;
    Ok(Complex64::new(0.0, TAU * contour.radius) * samples.fourier(1))
}

/// `oint g(z) dz`, doubling nodes until converged.
pub fn circle_integral_adaptive<G>(
    g: G,
    center: Complex64,
    radius: f64,
    opts: &QuadratureOptions,
) -> Result<Complex64, ContourError>
where
    G: Fn(Complex64) -> Complex64,
{
    let moments = circle_moments(g, center, radius, 0, opts)?;
    Ok(Complex64::new(0.0, TAU * radius) * moments[0])
}

/// Normalised moments `(1/2 pi i) oint ((z - c)/rho)^j g(z) dz` for
/// `j = 0..=max_power`, sharing one adaptive sample set.
pub fn circle_moments<G>(
    g: G,
    center: Complex64,
    radius: f64,
    max_power: usize,
    opts: &QuadratureOptions,
) -> Result<Vec<Complex64>, ContourError>
where
    G: Fn(Complex64) -> Complex64,
{
    adaptive(&g, center, radius, opts, |s| {
        let values = (0..=max_power).map(|j| s.fourier(j as i64 + 1) * radius).collect();
        (values, s.abs_mean * radius)
    })
}

/// `p`-th derivative of `g` at `center` from the Cauchy integral on a
/// fixed `nodes`-point circle of the given radius.
pub fn cauchy_coeff<G>(
    g: G,
    center: Complex64,
    radius: f64,
    p: u32,
    nodes: usize,
) -> Result<Complex64, ContourError>
where
    G: Fn(Complex64) -> Complex64,
{
    let contour = CircleContour::new(center, radius, nodes)?;
    let samples = CircleSamples::sample(&g, contour.center, contour.radius, contour.nodes)?;
    Ok(samples.fourier(-(p as i64)) * taylor_scale(radius, p))
}

/// Derivatives of orders `ps` at `center`, adaptive in the node count.
pub fn cauchy_coeffs_adaptive<G>(
    g: G,
    center: Complex64,
    radius: f64,
    ps: &[u32],
    opts: &QuadratureOptions,
) -> Result<Vec<Complex64>, ContourError>
where
    G: Fn(Complex64) -> Complex64,
{
    let coeffs = adaptive(&g, center, radius, opts, |s| {
        (ps.iter().map(|&p| s.fourier(-(p as i64))).collect(), s.abs_mean)
    })?;
    Ok(coeffs.into_iter().zip(ps).map(|(a, &p)| a * taylor_scale(radius, p)).collect())
}

/// `p! / rho^p`.
fn taylor_scale(radius: f64, p: u32) -> f64 {
    (1..=p).fold(1.0, |acc, k| acc * k as f64 / radius)
}
