//! Scan, trace and catalog serialization. Infinity is the literal `inf`
//! in CSV and the string `"inf"` in JSON; floats use the shortest
//! representation that round-trips.

use std::fmt::Write as _;

use num_complex::Complex64;
use picard_core::analysis::FpValues;
use picard_core::{FirstZeroRadius, ParametricFamily, PathTrace, ScanRecord, ScanReport, SphereValue};
use serde_json::{json, Map, Value};

fn num(x: f64) -> String {
    if x.is_infinite() && x > 0.0 {
        "inf".into()
    } else {
        format!("{x:?}")
    }
}

pub fn scan_header(p_list: &[u32]) -> Vec<String> {
    let mut cols: Vec<String> = ["re_w", "im_w", "zero_count", "r"].map(String::from).to_vec();
    for p in p_list {
        cols.push(format!("F_{p}_re"));
        cols.push(format!("F_{p}_im"));
    }
    cols.push("candidate".into());
    cols.push("error".into());
    cols
}

/// One record as (column, value) cells in header order.
fn cells(rec: &ScanRecord, p_list: &[u32]) -> Vec<Value> {
    let mut out = vec![json!(rec.w.re), json!(rec.w.im)];
    out.push(match rec.zero_count {
        Ok(n) => json!(n),
        Err(tag) => json!(tag.as_str()),
    });
    out.push(match rec.r {
        Ok(FirstZeroRadius::Finite(r)) => json!(r),
        Ok(FirstZeroRadius::ExceedsSearchBound(_)) => json!("inf"),
        Err(tag) => json!(tag.as_str()),
    });
    for (i, _) in p_list.iter().enumerate() {
        let (re, im) = match &rec.fp {
            FpValues::Skipped => (json!("skipped"), json!("skipped")),
            FpValues::Failed(tag) => (json!(tag.as_str()), json!(tag.as_str())),
            FpValues::Values(v) => (json!(v[i].value.re), json!(v[i].value.im)),
        };
        out.push(re);
        out.push(im);
    }
    out.push(json!(rec.candidate));
    out.push(rec.error.map_or(Value::Null, |t| json!(t.as_str())));
    out
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => n.as_f64().map_or_else(
            || n.to_string(),
            |x| {
                if n.is_f64() {
                    num(x)
                } else {
                    n.to_string()
                }
            },
        ),
        other => other.to_string(),
    }
}

pub fn scan_csv(report: &ScanReport) -> String {
    let mut out = scan_header(&report.p_list).join(",");
    out.push('\n');
    for rec in &report.records {
        let row: Vec<String> = cells(rec, &report.p_list).iter().map(csv_cell).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn scan_json(report: &ScanReport) -> String {
    let header = scan_header(&report.p_list);
    let records: Vec<Value> = report
        .records
        .iter()
        .map(|rec| Value::Object(header.iter().cloned().zip(cells(rec, &report.p_list)).collect()))
        .collect();
    let doc = json!({
        "family": report.family,
        "grid": report.grid,
        "radius": report.radius,
        "p_list": report.p_list,
        "records": records,
    });
    pretty(&doc)
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn trace_json(trace: &PathTrace) -> String {
    let samples: Vec<Value> = trace
        .samples
        .iter()
        .map(|s| {
            let mut m = Map::new();
            m.insert("w".into(), pair(s.w));
            m.insert(
                "a".into(),
                match s.a {
                    SphereValue::Finite(a) => pair(a),
                    SphereValue::Infinity => json!("inf"),
                },
            );
            m.insert("omitted_verified".into(), json!(s.omitted_verified));
            m.insert("search_radius".into(), json!(s.search_radius));
            m.insert("error".into(), s.error.map_or(Value::Null, |t| json!(t.as_str())));
            Value::Object(m)
        })
        .collect();
    let doc = json!({
        "samples": samples,
        "poles": trace.poles.iter().copied().map(pair).collect::<Vec<_>>(),
        "cr_residual": trace.cr_residual,
    });
    pretty(&doc)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Catalog listing, one family per block, sorted by key.
pub fn families_listing(catalog: &[ParametricFamily]) -> String {
    let mut sorted: Vec<&ParametricFamily> = catalog.iter().collect();
    sorted.sort_by(|a, b| a.key().cmp(b.key()));
    let mut out = String::new();
    let _ = writeln!(out, "{:<22} {:<13} formula", "key", "order_bound");
    for f in sorted {
        let _ = writeln!(out, "{:<22} {:<13} {}", f.key(), f.order_bound().to_string(), f.formula());
        let _ = writeln!(out, "{:<22} params: {}", "", f.param_schema());
        let _ = writeln!(out, "{:<22} domain: {}", "", f.domain_note());
        let _ = writeln!(out, "{:<22} exceptional: {}", "", f.exceptional_note().unwrap_or("none"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use picard_core::{exceptional_set_scan, GridSpec};

    #[test]
    fn header_layout() {
        assert_eq!(
            scan_header(&[2, 3]).join(","),
            "re_w,im_w,zero_count,r,F_2_re,F_2_im,F_3_re,F_3_im,candidate,error"
        );
        assert_eq!(scan_header(&[]).join(","), "re_w,im_w,zero_count,r,candidate,error");
    }

    #[test]
    fn csv_and_json_agree() {
        let f = ParametricFamily::by_key("example1").unwrap();
        let grid = GridSpec { re0: -1.0, re1: 1.0, im0: -1.0, im1: 1.0, n_re: 3, n_im: 3 };
        let rep = exceptional_set_scan(&f, &grid, 10.0, &[2]).unwrap();
        let csv = scan_csv(&rep);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 10);
        let centre: Vec<&str> = lines[5].split(',').collect();
        assert_eq!(&centre[..4], &["0.0", "0.0", "0", "inf"]);
        assert_eq!(centre[6], "true");
        assert_eq!(centre[7], "");

        let doc: Value = serde_json::from_str(&scan_json(&rep)).unwrap();
        let rec = &doc["records"][4];
        assert_eq!(rec["r"], "inf");
        assert_eq!(rec["zero_count"], 0);
        assert_eq!(rec["candidate"], true);
        let keys: Vec<&String> = rec.as_object().unwrap().keys().collect();
        assert_eq!(keys, scan_header(&[2]).iter().collect::<Vec<_>>());
    }

    #[test]
    fn number_format() {
        assert_eq!(num(0.1), "0.1");
        assert_eq!(num(1e-300), "1e-300");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(2.0), "2.0");
    }

    #[test]
    fn listing_is_sorted() {
        let text = families_listing(&ParametricFamily::catalog());
        let keys: Vec<&str> = text
            .lines()
            .skip(1)
            .filter(|l| !l.starts_with(' '))
            .map(|l| l.split_whitespace().next().unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(text.contains("example4               unknown"));
    }
}
