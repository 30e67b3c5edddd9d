use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use picard_core::{GridSpec, SphereValue};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "picard", version, about = "Scan holomorphic families for omitted values")]
pub struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zero counts, first-zero radius and F_p over a parameter grid.
    Scan(ScanArgs),
    /// Verify a known exceptional value along a parameter path.
    Track(TrackArgs),
    /// Run a named property suite.
    Check(CheckArgs),
    /// List the family catalog.
    Families,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Default, Args)]
pub struct ScanArgs {
    /// JSON config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameters as a JSON object.
    #[arg(long)]
    pub params: Option<String>,
    /// re0,re1,im0,im1,nre,nim
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// Orders p of the detection functionals, e.g. 2,3.
    #[arg(long, value_delimiter = ',')]
    pub fp: Option<Vec<u32>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// A straight parameter path with `n` points, end points included.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct PathSpec {
    pub re0: f64,
    pub im0: f64,
    pub re1: f64,
    pub im1: f64,
    pub n: usize,
}

impl PathSpec {
    pub fn points(&self) -> Vec<Complex64> {
        let (a, b) = (Complex64::new(self.re0, self.im0), Complex64::new(self.re1, self.im1));
        (0..self.n)
            .map(|i| if i + 1 == self.n { b } else { a + (b - a) * (i as f64 / (self.n - 1) as f64) })
            .collect()
    }
}

#[derive(Debug, Default, Args)]
pub struct TrackArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub params: Option<String>,
    /// re0,im0,re1,im1,n
    #[arg(long, value_parser = parse_path, allow_hyphen_values = true)]
    pub path: Option<PathSpec>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// Value to verify instead of the family's own, as re,im or inf.
    #[arg(long, value_parser = parse_sphere, allow_hyphen_values = true)]
    pub candidate: Option<SphereValue>,
    /// |a| above 1/pole-tol marks a pole.
    #[arg(long)]
    pub pole_tol: Option<f64>,
    /// Holomorphy cells closer than this to a pole are skipped.
    #[arg(long)]
    pub pole_exclusion: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// superharmonic | semicontinuity | fp-crosscheck | erf | example3
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Full JSON report destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn numbers<T: std::str::FromStr>(s: &str, n: usize, what: &str) -> Result<Vec<T>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(format!("{what} needs {n} comma-separated values, got {}", parts.len()));
    }
    parts.iter().map(|p| p.parse().map_err(|_| format!("bad number `{p}` in {what}"))).collect()
}

pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let v: Vec<f64> = numbers(s, 6, "grid")?;
    let count =
        |x: f64| (x >= 0.0 && x.fract() == 0.0).then_some(x as usize).ok_or(format!("bad point count {x}"));
    Ok(GridSpec { re0: v[0], re1: v[1], im0: v[2], im1: v[3], n_re: count(v[4])?, n_im: count(v[5])? })
}

pub fn parse_path(s: &str) -> Result<PathSpec, String> {
    let v: Vec<f64> = numbers(s, 5, "path")?;
    if !(v[4] >= 2.0 && v[4].fract() == 0.0) {
        return Err(format!("path needs at least 2 points, got {}", v[4]));
    }
    Ok(PathSpec { re0: v[0], im0: v[1], re1: v[2], im1: v[3], n: v[4] as usize })
}

pub fn parse_sphere(s: &str) -> Result<SphereValue, String> {
    if s.trim() == "inf" {
        return Ok(SphereValue::Infinity);
    }
    let v: Vec<f64> = numbers(s, 2, "candidate")?;
    Ok(SphereValue::Finite(Complex64::new(v[0], v[1])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        let g = parse_grid("-1,1,-1,1,41,41").unwrap();
        assert_eq!((g.re0, g.im1, g.n_re), (-1.0, 1.0, 41));
        assert!(parse_grid("-1,1,-1,1,41").is_err());
        assert!(parse_grid("-1,1,-1,1,4.5,3").is_err());
        let p = parse_path("0.1,0,2,0,96").unwrap();
        let pts = p.points();
        assert_eq!(pts.len(), 96);
        assert_eq!(pts[0], Complex64::new(0.1, 0.0));
        assert_eq!(pts[95], Complex64::new(2.0, 0.0));
        assert_eq!(parse_sphere("inf").unwrap(), SphereValue::Infinity);
        assert_eq!(parse_sphere("0,-1").unwrap(), SphereValue::Finite(Complex64::new(0.0, -1.0)));
    }
}
