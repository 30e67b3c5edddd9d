use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use picard_core::{FamilySpec, GridSpec, ParamValue, ParametricFamily, SphereValue};
use serde::Deserialize;

use crate::args::{Format, PathSpec, ScanArgs, TrackArgs};
use crate::CliError;

/// Contents of a `--config` file. Every field can also be given as a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub family: Option<FamilySpec>,
    pub grid: Option<GridSpec>,
    pub radius: Option<f64>,
    pub p_list: Option<Vec<u32>>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub path: Option<PathSpec>,
    /// `[re, im]` or `"inf"`.
    pub candidate: Option<serde_json::Value>,
    pub pole_tol: Option<f64>,
    pub pole_exclusion: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(ConfigFile::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }
}

#[derive(Debug)]
pub struct ScanConfig {
    pub family: ParametricFamily,
    pub grid: GridSpec,
    pub radius: f64,
    pub p_list: Vec<u32>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug)]
pub struct TrackConfig {
    pub family: ParametricFamily,
    pub path: PathSpec,
    pub radius: f64,
    pub candidate: Option<SphereValue>,
    pub pole_tol: Option<f64>,
    pub pole_exclusion: Option<f64>,
    pub output: Option<PathBuf>,
}

fn missing(what: &str) -> CliError {
    CliError::Config(format!("missing {what}"))
}

fn family(
    key: Option<&String>,
    params: Option<&String>,
    file: Option<FamilySpec>,
) -> Result<ParametricFamily, CliError> {
    let mut spec = match (key, file) {
        (Some(k), Some(f)) if *k == f.key => f,
        (Some(k), _) => FamilySpec::new(k.clone()),
        (None, Some(f)) => f,
        (None, None) => return Err(missing("--family")),
    };
    if let Some(p) = params {
        spec.params = serde_json::from_str::<BTreeMap<String, ParamValue>>(p)
            .map_err(|e| CliError::Config(format!("bad --params: {e}")))?;
    }
    spec.build().map_err(|e| CliError::Config(e.to_string()))
}

fn positive(radius: Option<f64>) -> Result<f64, CliError> {
    let r = radius.ok_or_else(|| missing("--radius"))?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(CliError::Config(format!("radius {r} must be positive")));
    }
    Ok(r)
}

impl ScanConfig {
    pub fn resolve(args: &ScanArgs) -> Result<Self, CliError> {
        let file = ConfigFile::load(args.config.as_deref())?;
        let family = family(args.family.as_ref(), args.params.as_ref(), file.family)?;
        let grid = args.grid.or(file.grid).ok_or_else(|| missing("--grid"))?;
        grid.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let radius = positive(args.radius.or(file.radius))?;
        // default orders floor(lambda)+1 .. floor(lambda)+4
        let p_list = match args.fp.clone().or(file.p_list) {
            Some(p) => p,
            None => {
                family.order_bound().first_detection_order().map_or_else(Vec::new, |p| (p..p + 4).collect())
            }
        };
        Ok(ScanConfig {
            family,
            grid,
            radius,
            p_list,
            output: args.out.clone().or(file.output),
            format: args.format.or(file.format).unwrap_or(Format::Csv),
        })
    }
}

impl TrackConfig {
    pub fn resolve(args: &TrackArgs) -> Result<Self, CliError> {
        let file = ConfigFile::load(args.config.as_deref())?;
        let family = family(args.family.as_ref(), args.params.as_ref(), file.family)?;
        let path = args.path.or(file.path).ok_or_else(|| missing("--path"))?;
        if path.n < 2 {
            return Err(CliError::Config("path needs at least 2 points".into()));
        }
        let radius = positive(args.radius.or(file.radius))?;
        let candidate = match (args.candidate, file.candidate) {
            (Some(c), _) => Some(c),
            (None, Some(v)) => Some(sphere_from_json(&v)?),
            (None, None) => None,
        };
        Ok(TrackConfig {
            family,
            path,
            radius,
            candidate,
            pole_tol: args.pole_tol.or(file.pole_tol),
            pole_exclusion: args.pole_exclusion.or(file.pole_exclusion),
            output: args.out.clone().or(file.output),
        })
    }
}

fn sphere_from_json(v: &serde_json::Value) -> Result<SphereValue, CliError> {
    if v.as_str() == Some("inf") {
        return Ok(SphereValue::Infinity);
    }
    let pair: [f64; 2] = serde_json::from_value(v.clone())
        .map_err(|_| CliError::Config(format!("candidate must be [re, im] or \"inf\", got {v}")))?;
    Ok(SphereValue::Finite(num_complex::Complex64::new(pair[0], pair[1])))
}
