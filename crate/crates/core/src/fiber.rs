use num_complex::Complex64;

use crate::families::ParametricFamily;

/// A single entire function `z -> g(z)`, typically one fiber of a family,
/// possibly shifted in value or recentred.
pub trait Fiber: Sync {
    fn value(&self, z: Complex64) -> Complex64;

    fn derivative(&self, z: Complex64) -> Complex64;

    /// `g'(z) / g(z)`. Implementations override this where the quotient can
    /// be formed without overflowing either factor.
    fn log_derivative(&self, z: Complex64) -> Complex64 {
        self.derivative(z) / self.value(z)
    }
}

/// The fiber `z -> f(z + origin, w) - offset` of a parametric family.
#[derive(Clone, Copy, Debug)]
pub struct FamilyFiber<'a> {
    pub family: &'a ParametricFamily,
    pub w: Complex64,
    pub offset: Complex64,
    pub origin: Complex64,
}

impl<'a> FamilyFiber<'a> {
    pub fn new(family: &'a ParametricFamily, w: Complex64) -> Self {
        FamilyFiber { family, w, offset: Complex64::new(0.0, 0.0), origin: Complex64::new(0.0, 0.0) }
    }

    pub fn shifted(mut self, offset: Complex64) -> Self {
        self.offset = offset;
        self
    }

    pub fn recentred(mut self, origin: Complex64) -> Self {
        self.origin = origin;
        self
    }
}

impl Fiber for FamilyFiber<'_> {
    fn value(&self, z: Complex64) -> Complex64 {
        self.family.value(z + self.origin, self.w) - self.offset
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.family.dz(z + self.origin, self.w)
    }

    fn log_derivative(&self, z: Complex64) -> Complex64 {
        self.family.shifted_log_derivative(z + self.origin, self.w, self.offset)
    }
}

/// Adapter turning a pair of closures into a [`Fiber`].
pub struct FnFiber<F, D> {
    pub f: F,
    pub df: D,
}

impl<F, D> Fiber for FnFiber<F, D>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    D: Fn(Complex64) -> Complex64 + Sync,
{
    fn value(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        (self.df)(z)
    }
}

/// Polynomial fiber from coefficients in ascending order.
#[derive(Clone, Debug)]
pub struct Polynomial(pub Vec<Complex64>);

impl Polynomial {
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Polynomial(coeffs)
    }
}

impl Fiber for Polynomial {
    fn value(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * z + c * k as f64)
    }
}
