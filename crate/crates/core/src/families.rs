//! Parametric families `f(z, w)` of entire functions: the built-in catalog
//! and the discrete exceptional-set constructor.
//!
//! Catalog keys:
//!
//! | key                    | f(z, w)                                   | order |
//! |------------------------|-------------------------------------------|-------|
//! | `example1`             | `e^z + w z`                               | 1     |
//! | `example2`             | `(e^{wz} - 1)/w`, `z` at `w = 0`          | 1     |
//! | `example3`             | `int_{-inf}^z (t + w) e^{-t^2/2} dt`      | 2     |
//! | `example4`             | `(e^{w e^z} - 1)/w`, `e^z` at `w = 0`     | ?     |
//! | `linear`               | `z - w`                                   | 0     |
//! | `quadratic`            | `z^2 - w`                                 | 0     |
//! | `discrete_exceptional` | `e^z + z prod (w - p_i)^{m_i}`            | 1     |

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::SphereValue;
use crate::erf::{complex_erfc, SQRT_FRAC_PI_2};
use crate::fiber::FamilyFiber;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("unknown family key `{0}`")]
    UnknownKey(String),
    #[error("parameter outside domain: z = {z}, w = {w}")]
    OutsideDomain { z: Complex64, w: Complex64 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },
    #[error("duplicate exceptional point {0}")]
    DuplicatePoint(Complex64),
}

/// A named family constant: a real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Pair([f64; 2]),
}

impl ParamValue {
    pub fn as_complex(self) -> Complex64 {
        match self {
            ParamValue::Number(x) => Complex64::new(x, 0.0),
            ParamValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// The JSON form `{ "key": ..., "params": { name: [re, im] | number } }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub key: String,
    #[serde(default)]
    pub params: BTreeMap<String, ParamValue>,
}

impl FamilySpec {
    pub fn new(key: impl Into<String>) -> Self {
        FamilySpec { key: key.into(), params: BTreeMap::new() }
    }

    pub fn build(&self) -> Result<ParametricFamily, FamilyError> {
        let kind = match self.key.as_str() {
            "example1" => Kind::Example1,
            "example2" => Kind::Example2,
            "example3" => Kind::Example3,
            "example4" => Kind::Example4,
            "linear" => Kind::Linear,
            "quadratic" => Kind::Quadratic,
            "discrete_exceptional" => {
                return make_discrete_exceptional_family(&parse_points(&self.params)?);
            }
            other => return Err(FamilyError::UnknownKey(other.to_string())),
        };
        if let Some(name) = self.params.keys().next() {
            return Err(FamilyError::InvalidParam {
                name: name.clone(),
                reason: format!("family `{}` takes no parameters", self.key),
            });
        }
        Ok(ParametricFamily { key: self.key.clone(), params: BTreeMap::new(), kind })
    }
}

fn parse_points(params: &BTreeMap<String, ParamValue>) -> Result<Vec<(Complex64, u32)>, FamilyError> {
    let bad = |name: &str, reason: &str| FamilyError::InvalidParam {
        name: name.to_string(),
        reason: reason.to_string(),
    };
    let mut points: BTreeMap<usize, Complex64> = BTreeMap::new();
    let mut mults: BTreeMap<usize, u32> = BTreeMap::new();
    for (name, value) in params {
        let (prefix, index) = name.split_at(1.min(name.len()));
        let index: usize = index.parse().map_err(|_| bad(name, "expected p<i> or m<i>"))?;
        match prefix {
            "p" => {
                points.insert(index, value.as_complex());
            }
            "m" => match *value {
                ParamValue::Number(m) if m >= 1.0 && m.fract() == 0.0 && m <= u32::MAX as f64 => {
                    mults.insert(index, m as u32);
                }
                _ => return Err(bad(name, "multiplicity must be a positive integer")),
            },
            _ => return Err(bad(name, "expected p<i> or m<i>")),
        }
    }
    if let Some(i) = mults.keys().find(|i| !points.contains_key(i)) {
        return Err(bad(&format!("m{i}"), "multiplicity without a matching point"));
    }
    Ok(points.into_iter().map(|(i, p)| (p, mults.get(&i).copied().unwrap_or(1))).collect())
}

/// Upper bound on the order of every fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderBound {
    Finite(f64),
    Unknown,
}

impl OrderBound {
    /// Smallest admissible `p` for detection, `floor(lambda) + 1`.
    pub fn first_detection_order(self) -> Option<u32> {
        match self {
            OrderBound::Finite(l) => Some(l.floor() as u32 + 1),
            OrderBound::Unknown => None,
        }
    }
}

impl fmt::Display for OrderBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderBound::Finite(l) => write!(f, "{l}"),
            OrderBound::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Example1,
    Example2,
    Example3,
    Example4,
    Linear,
    Quadratic,
    Discrete { points: Vec<(Complex64, u32)> },
}

/// A holomorphic family of entire functions `z -> f(z, w)`.
///
/// Families are immutable; every method is a pure function of its inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricFamily {
    key: String,
    params: BTreeMap<String, ParamValue>,
    kind: Kind,
}

/// Every catalog key, sorted.
pub const CATALOG_KEYS: [&str; 7] =
    ["discrete_exceptional", "example1", "example2", "example3", "example4", "linear", "quadratic"];

impl ParametricFamily {
    pub fn by_key(key: &str) -> Result<Self, FamilyError> {
        FamilySpec::new(key).build()
    }

    /// The catalog with default parameters, sorted by key. The discrete
    /// constructor appears with the points `{1, -1}`.
    pub fn catalog() -> Vec<ParametricFamily> {
        CATALOG_KEYS
            .iter()
            .map(|&key| match key {
                "discrete_exceptional" => make_discrete_exceptional_family(&[
                    (Complex64::new(1.0, 0.0), 1),
                    (Complex64::new(-1.0, 0.0), 1),
                ])
                .expect("distinct points"),
                _ => ParametricFamily::by_key(key).expect("catalog key"),
            })
            .collect()
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn params(&self) -> &BTreeMap<String, ParamValue> {
        &self.params
    }

    pub fn spec(&self) -> FamilySpec {
        FamilySpec { key: self.key.clone(), params: self.params.clone() }
    }

    pub fn order_bound(&self) -> OrderBound {
        match self.kind {
            Kind::Linear | Kind::Quadratic => OrderBound::Finite(0.0),
            Kind::Example1 | Kind::Example2 | Kind::Discrete { .. } => OrderBound::Finite(1.0),
            Kind::Example3 => OrderBound::Finite(2.0),
            Kind::Example4 => OrderBound::Unknown,
        }
    }

    pub fn param_schema(&self) -> &'static str {
        match self.kind {
            Kind::Discrete { .. } => "p<i>: [re, im] exceptional point; m<i>: multiplicity (default 1)",
            _ => "none",
        }
    }

    pub fn formula(&self) -> &'static str {
        match self.kind {
            Kind::Example1 => "e^z + w z",
            Kind::Example2 => "(e^(w z) - 1) / w",
            Kind::Example3 => "int_(-inf)^z (t + w) e^(-t^2/2) dt",
            Kind::Example4 => "(e^(w e^z) - 1) / w",
            Kind::Linear => "z - w",
            Kind::Quadratic => "z^2 - w",
            Kind::Discrete { .. } => "e^z + z prod (w - p_i)^m_i",
        }
    }

    pub fn domain_note(&self) -> &'static str {
        match self.kind {
            Kind::Example1 => "D = C",
            Kind::Example2 => "D = C; w = 0 uses the limiting fiber f(z,0) = z",
            Kind::Example3 => "D = C; path from -inf along the negative ray, then 0 -> z",
            Kind::Example4 => "D = C; w = 0 uses the limiting fiber f(z,0) = e^z",
            Kind::Linear | Kind::Quadratic => "D = C",
            Kind::Discrete { .. } => "D = C; fibers over the points p_i are e^z",
        }
    }

    /// Description of the closed-form omitted value, if the family has one.
    pub fn exceptional_note(&self) -> Option<&'static str> {
        match self.kind {
            Kind::Example1 => Some("a(0) = 0; no finite omitted value for w != 0"),
            Kind::Example2 => Some("a(w) = -1/w for w != 0; none at w = 0"),
            Kind::Example3 => Some("a(0) = 0; no finite omitted value for w != 0"),
            Kind::Example4 => Some("a(w) = -1/w for w != 0; a(0) = 0"),
            Kind::Discrete { .. } => Some("a(p_i) = 0; no finite omitted value elsewhere"),
            Kind::Linear | Kind::Quadratic => None,
        }
    }

    pub fn has_exceptional_metadata(&self) -> bool {
        self.exceptional_note().is_some()
    }

    /// The closed-form finite omitted value at `w`, or `Infinity` when the
    /// fiber omits no finite value. `None` when the family carries no
    /// metadata.
    pub fn known_exceptional(&self, w: Complex64) -> Option<SphereValue> {
        let zero = SphereValue::Finite(Complex64::new(0.0, 0.0));
        let value = match &self.kind {
            Kind::Example1 | Kind::Example3 => {
                if w == Complex64::new(0.0, 0.0) {
                    zero
                } else {
                    SphereValue::Infinity
                }
            }
            Kind::Example2 => {
                if w == Complex64::new(0.0, 0.0) {
                    SphereValue::Infinity
                } else {
                    SphereValue::from(-w.inv())
                }
            }
            Kind::Example4 => {
                if w == Complex64::new(0.0, 0.0) {
                    zero
                } else {
                    SphereValue::from(-w.inv())
                }
            }
            Kind::Discrete { points } => {
                if discrete_weight(points, w) == Complex64::new(0.0, 0.0) {
                    zero
                } else {
                    SphereValue::Infinity
                }
            }
            Kind::Linear | Kind::Quadratic => return None,
        };
        Some(value)
    }

    /// Points `w` where a documented non-generic fiber sits.
    pub fn singular_parameters(&self) -> Vec<Complex64> {
        match &self.kind {
            Kind::Example2 | Kind::Example4 => vec![Complex64::new(0.0, 0.0)],
            Kind::Discrete { points } => points.iter().map(|p| p.0).collect(),
            _ => Vec::new(),
        }
    }

    pub fn fiber(&self, w: Complex64) -> FamilyFiber<'_> {
        FamilyFiber::new(self, w)
    }

    /// Checked `f(z, w)`.
    pub fn eval(&self, z: Complex64, w: Complex64) -> Result<Complex64, FamilyError> {
        check_domain(z, w)?;
        Ok(self.value(z, w))
    }

    /// Checked `df/dz (z, w)`.
    pub fn eval_dz(&self, z: Complex64, w: Complex64) -> Result<Complex64, FamilyError> {
        check_domain(z, w)?;
        Ok(self.dz(z, w))
    }

    /// `f(z, w)` without domain checks.
    pub fn value(&self, z: Complex64, w: Complex64) -> Complex64 {
        match &self.kind {
            Kind::Example1 => z.exp() + w * z,
            Kind::Example2 => z * expm1_ratio(w * z),
            Kind::Example3 => {
                let gauss = (-0.5 * z * z).exp();
                w * SQRT_FRAC_PI_2 * complex_erfc(-z * FRAC_1_SQRT_2) - gauss
            }
            Kind::Example4 => {
                let ez = z.exp();
                ez * expm1_ratio(w * ez)
            }
            Kind::Linear => z - w,
            Kind::Quadratic => z * z - w,
            Kind::Discrete { points } => z.exp() + z * discrete_weight(points, w),
        }
    }

    /// `df/dz (z, w)` without domain checks.
    pub fn dz(&self, z: Complex64, w: Complex64) -> Complex64 {
        match &self.kind {
            Kind::Example1 => z.exp() + w,
            Kind::Example2 => (w * z).exp(),
            Kind::Example3 => (z + w) * (-0.5 * z * z).exp(),
            Kind::Example4 => {
                let ez = z.exp();
                ez * (w * ez).exp()
            }
            Kind::Linear => Complex64::new(1.0, 0.0),
            Kind::Quadratic => 2.0 * z,
            Kind::Discrete { points } => z.exp() + discrete_weight(points, w),
        }
    }

    /// `f_z / (f - a)` at `(z, w)`, arranged so that neither factor
    /// overflows on its own. For the `(e^t - 1)/w` families an `a` that
    /// matches `-1/w` to working precision is treated as the omitted value
    /// itself.
    pub fn shifted_log_derivative(&self, z: Complex64, w: Complex64, a: Complex64) -> Complex64 {
        match &self.kind {
            Kind::Example1 => exp_plus_linear_log_derivative(z, w, a),
            Kind::Discrete { points } => exp_plus_linear_log_derivative(z, discrete_weight(points, w), a),
            Kind::Example2 => expm1_family_log_derivative(w * z, z, Complex64::new(1.0, 0.0), w, a),
            Kind::Example4 => {
                let ez = z.exp();
                expm1_family_log_derivative(w * ez, ez, ez, w, a)
            }
            _ => self.dz(z, w) / (self.value(z, w) - a),
        }
    }
}

fn check_domain(z: Complex64, w: Complex64) -> Result<(), FamilyError> {
    if z.is_finite() && w.is_finite() {
        Ok(())
    } else {
        Err(FamilyError::OutsideDomain { z, w })
    }
}

fn discrete_weight(points: &[(Complex64, u32)], w: Complex64) -> Complex64 {
    points.iter().fold(Complex64::new(1.0, 0.0), |acc, &(p, m)| acc * (w - p).powu(m))
}

/// `(e^z + g z)' / (e^z + g z - a)`.
fn exp_plus_linear_log_derivative(z: Complex64, g: Complex64, a: Complex64) -> Complex64 {
    if z.re > 0.0 {
        let decay = (-z).exp();
        (1.0 + g * decay) / (1.0 + (g * z - a) * decay)
    } else {
        (z.exp() + g) / (z.exp() + g * z - a)
    }
}

/// Log derivative of `(e^t - 1)/w - a` where `t = w s(z)` and `s' = ds`.
fn expm1_family_log_derivative(
    t: Complex64,
    s: Complex64,
    ds: Complex64,
    w: Complex64,
    a: Complex64,
) -> Complex64 {
    if t.norm() <= 1.0 {
        return t.exp() * ds / (s * expm1_ratio(t) - a);
    }
    let wa = w * a;
    let mut c = 1.0 + wa;
    if c.norm() <= 16.0 * f64::EPSILON * (1.0 + wa.norm()) {
        c = Complex64::new(0.0, 0.0);
    }
    let wds = w * ds;
    if c == Complex64::new(0.0, 0.0) {
        wds
    } else if t.re > 0.0 {
        wds / (1.0 - c * (-t).exp())
    } else {
        let et = t.exp();
        wds * et / (et - c)
    }
}

/// `(e^t - 1)/t`, equal to 1 at `t = 0`.
pub(crate) fn expm1_ratio(t: Complex64) -> Complex64 {
    if t.norm() < 0.1 {
        // sum t^k / (k+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..20 {
            term = term * t / (k + 1) as f64;
            sum += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        complex_expm1(t) / t
    }
}

fn complex_expm1(t: Complex64) -> Complex64 {
    let half_sin = (0.5 * t.im).sin();
    Complex64::new(t.re.exp_m1() * t.im.cos() - 2.0 * half_sin * half_sin, t.re.exp() * t.im.sin())
}

/// Builds `f(z, w) = e^z + z prod (w - p_i)^{m_i}`, whose zero-free fibers
/// sit exactly over the points `p_i`.
pub fn make_discrete_exceptional_family(
    points: &[(Complex64, u32)],
) -> Result<ParametricFamily, FamilyError> {
    for (i, &(p, m)) in points.iter().enumerate() {
        if !p.is_finite() {
            return Err(FamilyError::InvalidParam {
                name: format!("p{i}"),
                reason: "point must be finite".into(),
            });
        }
        if m == 0 {
            return Err(FamilyError::InvalidParam {
                name: format!("m{i}"),
                reason: "multiplicity must be positive".into(),
            });
        }
        if points[..i].iter().any(|&(q, _)| (q - p).norm() <= 1e-12 * (1.0 + p.norm())) {
            return Err(FamilyError::DuplicatePoint(p));
        }
    }
    let mut params = BTreeMap::new();
    for (i, &(p, m)) in points.iter().enumerate() {
        params.insert(format!("p{i}"), ParamValue::Pair([p.re, p.im]));
        if m != 1 {
            params.insert(format!("m{i}"), ParamValue::Number(m as f64));
        }
    }
    Ok(ParametricFamily {
        key: "discrete_exceptional".to_string(),
        params,
        kind: Kind::Discrete { points: points.to_vec() },
    })
}
