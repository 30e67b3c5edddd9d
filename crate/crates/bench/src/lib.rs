//! Shared inputs for the benchmarks.

use num_complex::Complex64;

/// `n` parameters spread over the disk of radius `radius` on a golden-angle
/// spiral, so every run sees the same points.
pub fn spiral_points(n: usize, radius: f64) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let r = radius * ((k as f64 + 0.5) / n as f64).sqrt();
            Complex64::from_polar(r, golden * k as f64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_stay_in_the_disk() {
        let pts = spiral_points(100, 2.0);
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|p| p.norm() < 2.0));
    }
}
