use num_complex::Complex64;
use serde::Serialize;

use super::{count_in_disk, ZeroError};
use crate::contour::{circle_moments, QuadratureOptions};
use crate::families::ParametricFamily;
use crate::fiber::Fiber;

/// Disks holding at most this many zeros are solved from their power sums.
const DIRECT_SOLVE_MAX: u32 = 4;
/// Zeros closer than this (relative to `1 + |z|`) are one location.
const MERGE_TOL: f64 = 1e-6;
/// Subdivision stops at disks of this diameter.
const DIAMETER_FLOOR: f64 = 1e-6;
const MAX_ZEROS: u32 = 512;
/// Child disks are enlarged past the circumscribed radius so that jittered
/// circles still cover the parent square.
const COVER_FACTORS: [f64; 3] = [1.1, 1.17, 1.25];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroInventory {
    /// `(location, multiplicity)`, sorted by modulus then argument.
    pub zeros: Vec<(Complex64, u32)>,
    pub search_radius: f64,
    pub total_count: u32,
    pub validated: bool,
}

impl ZeroInventory {
    pub fn multiplicity_sum(&self) -> u32 {
        self.zeros.iter().map(|z| z.1).sum()
    }
}

/// Locates the zeros of `z -> f(z, w)` in `|z| < R`.
pub fn locate_zeros(
    family: &ParametricFamily,
    w: Complex64,
    radius: f64,
) -> Result<ZeroInventory, ZeroError> {
    locate_fiber_zeros(&family.fiber(w), radius, &QuadratureOptions::default())
}

pub fn locate_fiber_zeros<F: Fiber + ?Sized>(
    fiber: &F,
    radius: f64,
    opts: &QuadratureOptions,
) -> Result<ZeroInventory, ZeroError> {
    let origin = Complex64::new(0.0, 0.0);
    let total = count_in_disk(fiber, origin, radius, opts)?;
    if total.count > MAX_ZEROS {
        return Err(ZeroError::TooManyZeros { count: total.count, limit: MAX_ZEROS });
    }
    let search_radius = total.radius_used;
    let mut zeros: Vec<(Complex64, u32)> = explore_disk(fiber, origin, search_radius, total.count, opts)?
        .into_iter()
        .filter(|z| z.0.norm() < search_radius)
        .collect();
    zeros.sort_by(|a, b| a.0.norm().total_cmp(&b.0.norm()).then(a.0.arg().total_cmp(&b.0.arg())));
    let validated = zeros.iter().map(|z| z.1).sum::<u32>() == total.count;
    Ok(ZeroInventory { zeros, search_radius, total_count: total.count, validated })
}

/// Distinct zeros found while covering the disk `|z - center| < radius`
/// known to hold `count` zeros. The result can include zeros slightly
/// outside the disk.
pub(crate) fn explore_disk<F: Fiber + ?Sized>(
    fiber: &F,
    center: Complex64,
    radius: f64,
    count: u32,
    opts: &QuadratureOptions,
) -> Result<Vec<(Complex64, u32)>, ZeroError> {
    let mut found = Vec::new();
    explore(fiber, center, radius, count, opts, &mut found)?;
    Ok(found)
}

fn explore<F: Fiber + ?Sized>(
    fiber: &F,
    center: Complex64,
    radius: f64,
    count: u32,
    opts: &QuadratureOptions,
    found: &mut Vec<(Complex64, u32)>,
) -> Result<(), ZeroError> {
    if count == 0 {
        return Ok(());
    }
    // Already resolved by an overlapping sibling.
    let known: u32 = found.iter().filter(|(z, _)| (z - center).norm() < radius).map(|z| z.1).sum();
    if known == count {
        return Ok(());
    }

    if count <= DIRECT_SOLVE_MAX {
        if let Some(zeros) = direct_solve(fiber, center, radius, count, opts)? {
            for z in zeros {
                insert(found, z);
            }
            return Ok(());
        }
    }

    if 2.0 * radius <= DIAMETER_FLOOR * (1.0 + center.norm()) {
        return match polish(fiber, center) {
            Some(z) if (z - center).norm() <= radius => {
                insert(found, (z, count));
                Ok(())
            }
            _ => Err(ZeroError::UnresolvedCluster { center, count }),
        };
    }

    let half = 0.5 * radius;
    for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
        let child = center + Complex64::new(dx * half, dy * half);
        let res = count_child(fiber, child, half * std::f64::consts::SQRT_2, opts)?;
        explore(fiber, child, res.radius_used, res.count, opts, found)?;
    }
    Ok(())
}

/// Counts a child disk covering a quadrant of side `half`, widening the
/// cover when a zero sits on the circle.
fn count_child<F: Fiber + ?Sized>(
    fiber: &F,
    center: Complex64,
    half_diagonal: f64,
    opts: &QuadratureOptions,
) -> Result<super::ZeroCountResult, ZeroError> {
    let mut last = None;
    for factor in COVER_FACTORS {
        match count_in_disk(fiber, center, factor * half_diagonal, opts) {
            Err(e @ ZeroError::ZeroNearContour { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one cover factor"))
}

fn insert(found: &mut Vec<(Complex64, u32)>, zero: (Complex64, u32)) {
    let tol = MERGE_TOL * (1.0 + zero.0.norm());
    if !found.iter().any(|(z, _)| (z - zero.0).norm() <= tol) {
        found.push(zero);
    }
}

/// Power sums of the zeros in the disk, roots of the matching polynomial,
/// Newton polish on the fiber, and multiplicities from small-disk counts.
/// `Ok(None)` means the disk must be subdivided.
fn direct_solve<F: Fiber + ?Sized>(
    fiber: &F,
    center: Complex64,
    radius: f64,
    count: u32,
    opts: &QuadratureOptions,
) -> Result<Option<Vec<(Complex64, u32)>>, ZeroError> {
    let k = count as usize;
    // power sums of (z - c)/rho over the zeros in the disk
    let moments = match circle_moments(|z| fiber.log_derivative(z), center, radius, k, opts) {
        Ok(m) => m,
        Err(_) => return Ok(None),
    };
    let approx: Vec<Complex64> = polynomial_roots(&elementary_from_power_sums(&moments[1..=k]))
        .into_iter()
        .map(|t| center + radius * t)
        .collect();
    if approx.iter().any(|a| (a - center).norm() >= radius) {
        return Ok(None);
    }
    // Newton positions where they stay in the disk near their start; a
    // multiple zero stalls at a distance of order eps^(1/m).
    let polished: Vec<(Complex64, bool)> = approx
        .iter()
        .map(|&a| match polish_full(fiber, a) {
            Some((z, full)) if (z - center).norm() < radius && (z - a).norm() <= 0.25 * radius => (z, full),
            _ => (a, false),
        })
        .collect();
    // The approximations of an m-fold zero scatter like the m-th root of
    // the moment error, so grouping is retried at widening tolerances.
    for tol in [1e-3, 1e-2, 5e-2] {
        if let Some(zeros) = resolve_groups(fiber, center, radius, &polished, tol * radius, opts) {
            if zeros.iter().map(|z| z.1).sum::<u32>() == count {
                return Ok(Some(zeros));
            }
        }
    }
    Ok(None)
}

fn resolve_groups<F: Fiber + ?Sized>(
    fiber: &F,
    center: Complex64,
    radius: f64,
    polished: &[(Complex64, bool)],
    tol: f64,
    opts: &QuadratureOptions,
) -> Option<Vec<(Complex64, u32)>> {
    let positions: Vec<Complex64> = polished.iter().map(|p| p.0).collect();
    let groups = single_linkage(&positions, tol);
    let centroids: Vec<Complex64> =
        groups.iter().map(|g| g.iter().map(|&i| positions[i]).sum::<Complex64>() / g.len() as f64).collect();
    let mut zeros = Vec::with_capacity(polished.len());
    for (gi, group) in groups.iter().enumerate() {
        let centroid = centroids[gi];
        let neighbour = centroids
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != gi)
            .map(|(_, c)| (c - centroid).norm())
            .fold(f64::INFINITY, f64::min);
        let boundary = radius - (centroid - center).norm();
        if boundary <= 0.0 {
            return None;
        }
        let limit = (0.4 * neighbour).min(0.5 * boundary);

        // Members polished to full precision at distinct points are
        // separate simple zeros; otherwise the group is one multiple zero
        // or an unresolved cluster at its centroid.
        let mut points: Vec<Complex64> = Vec::new();
        if group.iter().all(|&i| polished[i].1) {
            for &i in group {
                let z = positions[i];
                if !points.iter().any(|p| (p - z).norm() <= MERGE_TOL * (1.0 + z.norm())) {
                    points.push(z);
                }
            }
        }
        let simple = (points.len() == group.len())
            .then(|| verify_simple(fiber, &points, limit, radius, opts))
            .flatten();
        if let Some(simple) = simple {
            zeros.extend(simple);
            continue;
        }
        // The counting disk stays well above the rounding-noise scale of
        // the fiber around a multiple zero.
        let spread = group.iter().map(|&i| (positions[i] - centroid).norm()).fold(0.0, f64::max);
        let small = (4.0 * spread).max(1e-2 * radius).min(limit);
        if small <= spread {
            return None;
        }
        match count_in_disk(fiber, centroid, small, opts) {
            Ok(res) if res.count as usize == group.len() => zeros.push((centroid, res.count)),
            _ => return None,
        }
    }
    Some(zeros)
}

/// Each point is a simple zero: exactly one zero in a disk around it
/// that excludes the other points.
fn verify_simple<F: Fiber + ?Sized>(
    fiber: &F,
    points: &[Complex64],
    limit: f64,
    radius: f64,
    opts: &QuadratureOptions,
) -> Option<Vec<(Complex64, u32)>> {
    points
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let sep = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| (p - z).norm())
                .fold(limit, f64::min);
            let small = (0.4 * sep).min(limit).min(1e-2 * radius);
            match count_in_disk(fiber, z, small, opts) {
                Ok(res) if res.count == 1 => Some((z, 1)),
                _ => None,
            }
        })
        .collect()
}

/// Index groups of points connected by links shorter than `tol`.
fn single_linkage(points: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..points.len()).collect();
    for i in 0..points.len() {
        for j in 0..i {
            if (points[i] - points[j]).norm() <= tol {
                let (from, to) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (i, &l) in label.iter().enumerate() {
        match seen.iter().position(|&s| s == l) {
            Some(g) => groups[g].push(i),
            None => {
                seen.push(l);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Newton on `f / f'`, returning the point and whether the last step
/// reached machine precision. Multiple zeros converge linearly and stall
/// near `eps^(1/m)`.
fn polish_full<F: Fiber + ?Sized>(fiber: &F, start: Complex64) -> Option<(Complex64, bool)> {
    let mut z = start;
    let mut last_step = f64::INFINITY;
    for _ in 0..200 {
        let g = fiber.log_derivative(z);
        if !g.is_finite() || g == Complex64::new(0.0, 0.0) {
            return (fiber.value(z) == Complex64::new(0.0, 0.0)).then_some((z, true));
        }
        let step = g.inv();
        z -= step;
        if !z.is_finite() {
            return None;
        }
        last_step = step.norm();
        if last_step <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            return Some((z, true));
        }
    }
    (last_step <= MERGE_TOL * (1.0 + z.norm())).then_some((z, false))
}

pub(crate) fn polish<F: Fiber + ?Sized>(fiber: &F, start: Complex64) -> Option<Complex64> {
    polish_full(fiber, start).map(|p| p.0)
}

/// `e_1..e_k` from power sums `s_1..s_k` by Newton's identities.
fn elementary_from_power_sums(s: &[Complex64]) -> Vec<Complex64> {
    let k = s.len();
    let mut e = vec![Complex64::new(1.0, 0.0); k + 1];
    for m in 1..=k {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=m {
            let term = e[m - i] * s[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e[m] = acc / m as f64;
    }
    e
}

/// Roots of `t^k - e_1 t^{k-1} + e_2 t^{k-2} - ...` by Durand-Kerner.
fn polynomial_roots(e: &[Complex64]) -> Vec<Complex64> {
    let k = e.len() - 1;
    if k == 0 {
        return Vec::new();
    }
    // descending coefficients
    let coeffs: Vec<Complex64> = (0..=k).map(|m| if m % 2 == 0 { e[m] } else { -e[m] }).collect();
    let eval = |t: Complex64| coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..k).map(|i| seed.powu(i as u32 + 1)).collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..k {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..k {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom == Complex64::new(0.0, 0.0) {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::Polynomial;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn family(key: &str) -> ParametricFamily {
        ParametricFamily::by_key(key).unwrap()
    }

    #[test]
    fn newton_identities_round_trip() {
        let roots = [c(0.3, 0.1), c(-0.5, 0.2), c(0.0, -0.6)];
        let s: Vec<Complex64> = (1..=3).map(|j| roots.iter().map(|r| r.powu(j)).sum()).collect();
        let mut found = polynomial_roots(&elementary_from_power_sums(&s));
        found.sort_by(|a, b| a.re.total_cmp(&b.re));
        let mut want = roots.to_vec();
        want.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (a, b) in found.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn simple_pair() {
        let inv = locate_zeros(&family("quadratic"), c(1.0, 0.0), 2.0).unwrap();
        assert!(inv.validated);
        assert_eq!(inv.zeros.len(), 2);
        let mut xs: Vec<f64> = inv.zeros.iter().map(|z| z.0.re).collect();
        xs.sort_by(f64::total_cmp);
        assert!((xs[0] + 1.0).abs() < 1e-14 && (xs[1] - 1.0).abs() < 1e-14);
        assert!(inv.zeros.iter().all(|z| z.1 == 1));
    }

    #[test]
    fn double_root() {
        let inv = locate_zeros(&family("quadratic"), c(0.0, 0.0), 1.0).unwrap();
        assert!(inv.validated);
        assert_eq!(inv.zeros.len(), 1);
        assert_eq!(inv.zeros[0].1, 2);
        assert!(inv.zeros[0].0.norm() < 1e-6);
    }

    #[test]
    fn example1_zeros_against_dense_newton_oracle() {
        let f = family("example1");
        let w = c(1.0, 0.0);
        let inv = locate_zeros(&f, w, 8.0).unwrap();
        assert!(inv.validated);
        assert_eq!(inv.multiplicity_sum(), super::super::count_zeros(&f, w, 8.0).unwrap().count);

        // oracle: Newton from a dense grid of seeds, keep converged distinct roots
        let mut oracle: Vec<Complex64> = Vec::new();
        for i in -40..=40 {
            for j in -40..=40 {
                let mut z = c(i as f64 * 0.2, j as f64 * 0.2);
                for _ in 0..100 {
                    z -= (z.exp() + z) / (z.exp() + 1.0);
                }
                if (z.exp() + z).norm() < 1e-12
                    && z.norm() < inv.search_radius
                    && !oracle.iter().any(|o| (o - z).norm() < 1e-8)
                {
                    oracle.push(z);
                }
            }
        }
        assert_eq!(oracle.len(), inv.zeros.len());
        for o in &oracle {
            assert!(inv.zeros.iter().any(|z| (z.0 - o).norm() < 1e-10), "missing {o}");
        }
        assert!(inv.zeros.iter().any(|z| (z.0 - c(-0.567_143_290_409_784, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn residuals_small_relative_to_circle_scale() {
        let f = family("example1");
        let w = c(0.4, -0.7);
        let inv = locate_zeros(&f, w, 30.0).unwrap();
        assert!(inv.validated);
        let max_on_circle = (0..512)
            .map(|k| f.value(Complex64::from_polar(inv.search_radius, k as f64 * 0.0122718), w).norm())
            .fold(0.0, f64::max);
        for (z, _) in &inv.zeros {
            assert!(f.value(*z, w).norm() <= 1e-8 * (1.0 + max_on_circle));
        }
    }

    #[test]
    fn many_zeros_via_subdivision() {
        let roots: Vec<Complex64> =
            (0..12).map(|k| Complex64::from_polar(0.5 + 0.03 * k as f64, 0.9 * k as f64)).collect();
        let poly = Polynomial::from_roots(&roots);
        let inv = locate_fiber_zeros(&poly, 1.5, &QuadratureOptions::default()).unwrap();
        assert!(inv.validated);
        assert_eq!(inv.zeros.len(), 12);
        for r in &roots {
            assert!(inv.zeros.iter().any(|z| (z.0 - r).norm() < 1e-10));
        }
    }

    #[test]
    fn triple_and_simple_cluster() {
        let roots = [c(0.2, 0.1), c(0.2, 0.1), c(0.2, 0.1), c(-0.4, 0.0)];
        let poly = Polynomial::from_roots(&roots);
        let inv = locate_fiber_zeros(&poly, 1.0, &QuadratureOptions::default()).unwrap();
        assert!(inv.validated);
        assert_eq!(inv.zeros.len(), 2);
        let triple = inv.zeros.iter().find(|z| z.1 == 3).unwrap();
        assert!((triple.0 - c(0.2, 0.1)).norm() < 1e-4);
    }
}
