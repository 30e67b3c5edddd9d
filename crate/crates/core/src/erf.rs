//! Complex error function.
//!
//! Two regimes cover the working window:
//!
//! * `|Re z| < 2`: the Maclaurin series. Its terms alternate in the real
//!   direction, so the cancellation loss is bounded by roughly `exp(2 x^2)`
//!   regardless of the imaginary part.
//! * `|Re z| >= 2`: the Laplace continued fraction for `erfc`, evaluated
//!   with the modified Lentz algorithm, and mirrored through
//!   `erf(-z) = -erf(z)` for the left half-plane.
//!
//! The switchover sits where the two error curves cross (see the
//! `switchover_error_curves` test). Accuracy is ~1e-12 relative for
//! `|z| <= 12` and the functions stay usable up to `|z| ~ 26`, beyond
//! which `erf` itself leaves the `f64` range near the imaginary axis.

use std::f64::consts::FRAC_2_SQRT_PI;

use num_complex::Complex64;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const SERIES_LIMIT: f64 = 2.0;
const MAX_CF_TERMS: usize = 20_000;

/// `erf(z) = (2/sqrt(pi)) * integral_0^z exp(-t^2) dt`.
pub fn complex_erf(z: Complex64) -> Complex64 {
    if z.re.abs() < SERIES_LIMIT {
        erf_series(z)
    } else if z.re > 0.0 {
        Complex64::new(1.0, 0.0) - erfc_continued_fraction(z)
    } else {
        erfc_continued_fraction(-z) - Complex64::new(1.0, 0.0)
    }
}

/// `erfc(z) = 1 - erf(z)`, computed without cancellation in the right
/// half-plane where `erfc` is small.
pub fn complex_erfc(z: Complex64) -> Complex64 {
    if z.re >= SERIES_LIMIT {
        erfc_continued_fraction(z)
    } else if z.re <= -SERIES_LIMIT {
        Complex64::new(2.0, 0.0) - erfc_continued_fraction(-z)
    } else {
        Complex64::new(1.0, 0.0) - erf_series(z)
    }
}

fn erf_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut power = z; // (-1)^n z^(2n+1) / n!
    let mut sum = z;
    let peak = z2.norm();
    let mut n = 0usize;
    loop {
        n += 1;
        power = -power * z2 / n as f64;
        let term = power / (2 * n + 1) as f64;
        sum += term;
        if n as f64 > peak && term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        if !sum.is_finite() || n > 100_000 {
            break;
        }
    }
    sum * FRAC_2_SQRT_PI
}

/// Laplace continued fraction, valid for `Re z > 0`:
/// `erfc z = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))`.
fn erfc_continued_fraction(z: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let tiny = Complex64::new(TINY, 0.0);
    let mut f = z;
    if f.norm() < TINY {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..=MAX_CF_TERMS {
        let a = n as f64 * 0.5;
        d = z + d * a;
        if d.norm() < TINY {
            d = tiny;
        }
        c = z + a / c;
        if c.norm() < TINY {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (-z * z).exp() * FRAC_1_SQRT_PI / f
}

/// `sqrt(pi / 2)`, used by the Gaussian-integral family.
pub(crate) const SQRT_FRAC_PI_2: f64 = 1.253_314_137_315_500_3;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Composite 3-point Gauss-Legendre of `(2z/sqrt(pi)) * int_0^1 exp(-s^2 z^2) ds`.
    fn quadrature_oracle(z: Complex64, panels: usize) -> Complex64 {
        let nodes = [-(0.6f64).sqrt(), 0.0, (0.6f64).sqrt()];
        let weights = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
        let h = 1.0 / panels as f64;
        let z2 = z * z;
        let mut sum = c(0.0, 0.0);
        for k in 0..panels {
            let mid = (k as f64 + 0.5) * h;
            for (x, wt) in nodes.iter().zip(weights) {
                let s = mid + 0.5 * h * x;
                sum += (-z2 * (s * s)).exp() * (wt * 0.5 * h);
            }
        }
        sum * z * FRAC_2_SQRT_PI
    }

    #[test]
    fn zero_maps_to_zero() {
        assert_eq!(complex_erf(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn frozen_reference_values() {
        // mpmath, 30 digits
        let cases = [
            (c(1.0, 0.0), c(0.842_700_792_949_714_9, 0.0)),
            (c(0.0, 1.0), c(0.0, 1.650_425_758_797_542_9)),
            (c(3.0, 4.0), c(-120.186_991_395_079_44, -27.750_337_293_623_9)),
            (c(0.5, -7.0), c(7.244_141_241_089_819e19, -9.649_107_367_735_166e19)),
            (c(6.0, 2.0), c(0.999_999_999_999_999_2, -8.164_448_699_433_854e-16)),
        ];
        for (z, want) in cases {
            let got = complex_erf(z);
            assert!((got - want).norm() <= 1e-12 * want.norm(), "erf({z}) = {got}, want {want}");
        }
        assert_eq!(complex_erf(c(0.0, 1.0)).re, 0.0);
    }

    #[test]
    fn odd_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let z = c(rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0));
            let a = complex_erf(z);
            let b = complex_erf(-z);
            assert!((a + b).norm() <= 1e-13 * a.norm().max(1.0), "{z}");
        }
    }

    #[test]
    fn matches_quadrature_on_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 40 {
            let r = 12.0 * rng.random::<f64>().sqrt();
            let t = rng.random_range(0.0..2.0 * PI);
            let z = Complex64::from_polar(r, t);
            let want = quadrature_oracle(z, 20_000);
            if want.norm() < 1e-3 {
                continue;
            }
            let got = complex_erf(z);
            let rel = (got - want).norm() / want.norm();
            assert!(rel <= 1e-10, "z={z} got={got} want={want} rel={rel:e}");
            checked += 1;
        }
    }

    #[test]
    fn erfc_is_complement_without_cancellation() {
        // erfc(6) = 2.1519736712498913e-17 (mpmath)
        let got = complex_erfc(c(6.0, 0.0));
        assert!((got.re - 2.151_973_671_249_891_3e-17).abs() <= 1e-12 * 2.15e-17);
        let z = c(-0.7, 1.3);
        assert!((complex_erfc(z) - (1.0 - complex_erf(z))).norm() < 1e-14);
    }

    #[test]
    fn switchover_error_curves() {
        // Both regimes agree with the oracle on either side of Re z = 2.
        for &y in &[0.0, 1.0, 4.0, 9.0] {
            for &x in &[1.8, 1.99, 2.0, 2.2] {
                let z = c(x, y);
                let want = quadrature_oracle(z, 20_000);
                let series = erf_series(z);
                let cf = 1.0 - erfc_continued_fraction(z);
                assert!((series - want).norm() <= 1e-11 * want.norm(), "series {z}");
                assert!((cf - want).norm() <= 1e-11 * want.norm(), "cf {z}");
            }
        }
    }
}
