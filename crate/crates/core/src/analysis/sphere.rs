use num_complex::Complex64;
use serde::{Serialize, Serializer};

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereValue {
    Finite(Complex64),
    Infinity,
}

impl SphereValue {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            SphereValue::Finite(a) => Some(a),
            SphereValue::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == SphereValue::Infinity
    }

    /// Stereographic image of a point on the unit sphere, projecting from
    /// the north pole.
    pub fn from_unit_sphere(x: f64, y: f64, z: f64) -> Self {
        if z >= 1.0 {
            return SphereValue::Infinity;
        }
        SphereValue::from(Complex64::new(x, y) / (1.0 - z))
    }
}

impl From<Complex64> for SphereValue {
    fn from(a: Complex64) -> Self {
        if a.is_finite() {
            SphereValue::Finite(a)
        } else {
            SphereValue::Infinity
        }
    }
}

impl std::fmt::Display for SphereValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SphereValue::Finite(a) => write!(f, "{a}"),
            SphereValue::Infinity => f.write_str("inf"),
        }
    }
}

/// `[re, im]`, or the string `"inf"`.
impl Serialize for SphereValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SphereValue::Finite(a) => [a.re, a.im].serialize(s),
            SphereValue::Infinity => s.serialize_str("inf"),
        }
    }
}

/// `2|a - b| / (sqrt(1 + |a|^2) sqrt(1 + |b|^2))`, extended to infinity.
pub fn chordal_distance(a: SphereValue, b: SphereValue) -> f64 {
    match (a, b) {
        (SphereValue::Infinity, SphereValue::Infinity) => 0.0,
        (SphereValue::Finite(a), SphereValue::Infinity) | (SphereValue::Infinity, SphereValue::Finite(a)) => {
            2.0 / a.norm().hypot(1.0)
        }
        (SphereValue::Finite(a), SphereValue::Finite(b)) => {
            2.0 * (a - b).norm() / (a.norm().hypot(1.0) * b.norm().hypot(1.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fin(re: f64, im: f64) -> SphereValue {
        SphereValue::Finite(Complex64::new(re, im))
    }

    #[test]
    fn examples() {
        assert_eq!(chordal_distance(fin(0.0, 0.0), SphereValue::Infinity), 2.0);
        assert_eq!(chordal_distance(fin(1.0, 0.0), fin(1.0, 0.0)), 0.0);
        assert!((chordal_distance(fin(0.0, 0.0), fin(1.0, 0.0)) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(chordal_distance(SphereValue::Infinity, SphereValue::Infinity), 0.0);
    }

    #[test]
    fn non_finite_maps_to_infinity() {
        assert_eq!(SphereValue::from(Complex64::new(f64::INFINITY, 0.0)), SphereValue::Infinity);
        assert_eq!(SphereValue::from(Complex64::new(0.0, f64::NAN)), SphereValue::Infinity);
        assert_eq!(SphereValue::from_unit_sphere(0.0, 0.0, 1.0), SphereValue::Infinity);
        assert_eq!(SphereValue::from_unit_sphere(0.0, 0.0, -1.0), fin(0.0, 0.0));
    }

    #[test]
    fn serializes_infinity_as_string() {
        assert_eq!(serde_json::to_string(&SphereValue::Infinity).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&fin(1.0, -2.0)).unwrap(), "[1.0,-2.0]");
    }

    /// Chordal distance is the Euclidean chord between the preimages on
    /// the unit sphere.
    fn chord_oracle(a: Complex64, b: Complex64) -> f64 {
        let lift = |a: Complex64| {
            let n = a.norm_sqr();
            [2.0 * a.re / (1.0 + n), 2.0 * a.im / (1.0 + n), (n - 1.0) / (n + 1.0)]
        };
        let (p, q) = (lift(a), lift(b));
        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
    }

    proptest! {
        #[test]
        fn metric_properties(
            ar in -50.0..50.0f64, ai in -50.0..50.0f64,
            br in -50.0..50.0f64, bi in -50.0..50.0f64,
            cr in -50.0..50.0f64, ci in -50.0..50.0f64,
        ) {
            let (a, b, c) = (fin(ar, ai), fin(br, bi), fin(cr, ci));
            let d = chordal_distance(a, b);
            prop_assert!((0.0..=2.0 + 1e-15).contains(&d));
            prop_assert_eq!(d, chordal_distance(b, a));
            prop_assert_eq!(chordal_distance(a, a), 0.0);
            prop_assert!(d <= chordal_distance(a, c) + chordal_distance(c, b) + 1e-12);
            let oracle = chord_oracle(Complex64::new(ar, ai), Complex64::new(br, bi));
            prop_assert!((d - oracle).abs() <= 1e-12);
        }

        #[test]
        fn inversion_is_an_isometry(
            ar in -5.0..5.0f64, ai in -5.0..5.0f64, br in -5.0..5.0f64, bi in -5.0..5.0f64,
        ) {
            let (a, b) = (Complex64::new(ar, ai), Complex64::new(br, bi));
            prop_assume!(a.norm() > 1e-3 && b.norm() > 1e-3);
            let d = chordal_distance(a.into(), b.into());
            let inv = chordal_distance((-a.inv()).into(), (-b.inv()).into());
            prop_assert!((d - inv).abs() <= 1e-12);
        }
    }
}
