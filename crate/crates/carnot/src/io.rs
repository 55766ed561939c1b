//! File formats: group and chart definition files (JSON), point-cloud and
//! sample CSVs, and JSON views of the result types. Numeric CSV output
//! carries 17 significant digits.

use crate::algebra::{BracketSpec, GroupPoint, StratifiedAlgebra};
use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::gmt::{BlowupTrace, CharsetBound, CharsetExperiment, DimEstimate};
use crate::manifold::{Chart, CharSample};
use crate::metric::CoverReport;
use crate::poly::Poly;
use crate::scalar::{rational_from_f64, RealScalar, Scalar};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Full-precision float formatting for CSV diffing (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

// ---------------------------------------------------------------------------
// group files
// ---------------------------------------------------------------------------

/// `{"layers": [n_1, ...], "brackets": [{"i": 1, "j": 2, "coeffs": {"3": 1.0}}]}`
/// with 1-based basis indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub layers: Vec<usize>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, f64>,
}

pub fn group_from_json<S: Scalar>(text: &str) -> Result<StratifiedAlgebra<S>> {
    let file: GroupFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("group file: {e}")))?;
    group_from_file(&file)
}

pub fn group_from_file<S: Scalar>(file: &GroupFile) -> Result<StratifiedAlgebra<S>> {
    let mut raw = Vec::new();
    for entry in &file.brackets {
        if entry.i == 0 || entry.j == 0 {
            return Err(Error::Parse("bracket indices are 1-based".into()));
        }
        for (k_str, c) in &entry.coeffs {
            let k: usize = k_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad bracket target index '{k_str}'")))?;
            if k == 0 {
                return Err(Error::Parse("bracket indices are 1-based".into()));
            }
            let c = rational_from_f64(*c)
                .ok_or_else(|| Error::Parse(format!("non-finite coefficient {c}")))?;
            raw.push(BracketSpec { i: entry.i - 1, j: entry.j - 1, k: k - 1, c });
        }
    }
    StratifiedAlgebra::from_layers_and_brackets(file.layers.clone(), raw)
}

pub fn group_to_file<S: Scalar>(alg: &StratifiedAlgebra<S>) -> GroupFile {
    let mut brackets: Vec<BracketEntry> = Vec::new();
    for spec in alg.raw_brackets() {
        let c = spec.c.to_f64_lossy();
        match brackets.iter_mut().find(|b| b.i == spec.i + 1 && b.j == spec.j + 1) {
            Some(b) => {
                b.coeffs.insert((spec.k + 1).to_string(), c);
            }
            None => {
                let mut coeffs = BTreeMap::new();
                coeffs.insert((spec.k + 1).to_string(), c);
                brackets.push(BracketEntry { i: spec.i + 1, j: spec.j + 1, coeffs });
            }
        }
    }
    GroupFile { layers: alg.layer_dims().to_vec(), brackets }
}

/// Resolves a group source: a builtin name first, else a file path.
pub fn resolve_group<S: Scalar>(source: &str) -> Result<StratifiedAlgebra<S>> {
    match StratifiedAlgebra::builtin(source) {
        Ok(alg) => Ok(alg),
        Err(builtin_err) => {
            if std::path::Path::new(source).exists() {
                group_from_json(&std::fs::read_to_string(source)?)
            } else {
                Err(builtin_err)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// chart files
// ---------------------------------------------------------------------------

/// `{"group": "heisenberg:1", "type": "polynomial", "p": 1,
///   "coords": [[{"c": 1.0, "e": [1]}], ...], "domain": [[-1.0, 1.0]]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChartFile {
    #[serde(default)]
    pub group: Option<String>,
    #[serde(rename = "type")]
    pub kind: String,
    pub p: usize,
    pub coords: Vec<Vec<MonomialEntry>>,
    pub domain: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonomialEntry {
    pub c: f64,
    pub e: Vec<u16>,
}

pub fn chart_from_json<S: Scalar>(text: &str, n: usize) -> Result<(Chart<S>, Option<String>)> {
    let file: ChartFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("chart file: {e}")))?;
    Ok((chart_from_file(&file, n)?, file.group))
}

pub fn chart_from_file<S: Scalar>(file: &ChartFile, n: usize) -> Result<Chart<S>> {
    if file.kind != "polynomial" {
        return Err(Error::Parse(format!(
            "unsupported chart type '{}' (only 'polynomial' files exist)",
            file.kind
        )));
    }
    if file.coords.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "chart has {} coordinates, group has dimension {n}",
            file.coords.len()
        )));
    }
    let mut coords = Vec::with_capacity(n);
    for monos in &file.coords {
        let mut poly = Poly::zero(file.p);
        for m in monos {
            if m.e.len() != file.p {
                return Err(Error::Parse(format!(
                    "monomial exponent list {:?} does not have {} entries",
                    m.e, file.p
                )));
            }
            let c = rational_from_f64(m.c)
                .ok_or_else(|| Error::Parse(format!("non-finite coefficient {}", m.c)))?;
            let mut term = Poly::constant(file.p, S::from_rational(&c));
            for (v, &exp) in m.e.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&Poly::var(file.p, v));
                }
            }
            poly = poly.add(&term);
        }
        coords.push(poly);
    }
    let domain = file
        .domain
        .iter()
        .map(|[lo, hi]| {
            let lo = rational_from_f64(*lo).ok_or_else(|| Error::Parse("bad bound".into()))?;
            let hi = rational_from_f64(*hi).ok_or_else(|| Error::Parse("bad bound".into()))?;
            Ok((S::from_rational(&lo), S::from_rational(&hi)))
        })
        .collect::<Result<Vec<_>>>()?;
    Chart::polynomial(coords, domain)
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Point cloud: header `x1,...,xn`, one point per row.
pub fn points_to_csv(points: &[GroupPoint<f64>]) -> String {
    let n = points.first().map_or(0, GroupPoint::dim);
    let mut out = String::new();
    out.push_str(&(1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>().join(","));
    out.push('\n');
    for p in points {
        let row: Vec<String> = p.coords().iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn points_from_csv(text: &str, n: usize) -> Result<Vec<GroupPoint<f64>>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty point-cloud file".into()))?;
    let cols = header.split(',').count();
    if cols != n {
        return Err(Error::DimensionMismatch(format!(
            "point-cloud file has {cols} columns, group has dimension {n}"
        )));
    }
    let mut points = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let vals: Vec<f64> = line
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| {
                    Error::Parse(format!("bad number '{f}' on data row {}", lineno + 1))
                })
            })
            .collect::<Result<_>>()?;
        if vals.len() != n {
            return Err(Error::Parse(format!("row {} has {} fields", lineno + 1, vals.len())));
        }
        points.push(GroupPoint::new(vals));
    }
    Ok(points)
}

/// Characteristic samples: `t1..tp, x1..xn, degree, class`.
pub fn char_samples_to_csv(samples: &[CharSample<f64>]) -> String {
    let p = samples.first().map_or(0, |s| s.t.len());
    let n = samples.first().map_or(0, |s| s.x.len());
    let mut out = String::new();
    let mut header: Vec<String> = (1..=p).map(|i| format!("t{i}")).collect();
    header.extend((1..=n).map(|i| format!("x{i}")));
    header.push("degree".into());
    header.push("class".into());
    out.push_str(&header.join(","));
    out.push('\n');
    for s in samples {
        let mut row: Vec<String> = s.t.iter().map(|v| fmt_f64(*v)).collect();
        row.extend(s.x.iter().map(|v| fmt_f64(*v)));
        row.push(s.degree.map_or(String::new(), |d| d.to_string()));
        row.push(s.class.to_string());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Plot-ready two-column CSV.
pub fn two_column_csv(xlabel: &str, ylabel: &str, rows: &[(f64, f64)]) -> String {
    let mut out = format!("{xlabel},{ylabel}\n");
    for (x, y) in rows {
        out.push_str(&format!("{},{}\n", fmt_f64(*x), fmt_f64(*y)));
    }
    out
}

// ---------------------------------------------------------------------------
// JSON views
// ---------------------------------------------------------------------------

pub fn cover_report_json(report: &CoverReport<f64>, include_centers: bool) -> Value {
    let mut v = json!({
        "r": report.scale,
        "K": report.quasi_k,
        "count": report.count(),
        "covering_radius": report.covering_radius,
    });
    if include_centers {
        let centers: Vec<Vec<f64>> = report.centers.iter().map(|c| c.coords().to_vec()).collect();
        v["centers"] = json!(centers);
    }
    v
}

pub fn dim_estimate_json(est: &DimEstimate<f64>) -> Value {
    json!({
        "scales": est.scales,
        "counts": est.counts,
        "slope": est.slope,
        "slope_half_width": est.half_width,
        "residual": est.residual,
    })
}

pub fn blowup_trace_json(trace: &BlowupTrace<f64>) -> Value {
    json!({
        "radii": trace.radii,
        "hausdorff": trace.hausdorff,
        "density_ratio": trace.density_ratio,
        "predicted_limit": trace.predicted_limit,
        "subgroup_rotated": trace.subgroup_rotated,
    })
}

pub fn charset_bound_json(bound: &CharsetBound<f64>) -> Value {
    json!({
        "p": bound.p,
        "ell": bound.ell,
        "lambda": bound.lambda,
        "bound": bound.bound,
    })
}

pub fn charset_experiment_json(exp: &CharsetExperiment<f64>) -> Value {
    let audit = |audits: &[crate::gmt::ClassAudit<f64>]| -> Vec<Value> {
        audits
            .iter()
            .map(|a| {
                json!({
                    "class": a.class.to_string(),
                    "probe_t": a.probe_t,
                    "count": a.count,
                    "radius": a.radius,
                    "exponent": a.exponent,
                    "normalized": a.normalized,
                })
            })
            .collect()
    };
    json!({
        "empty": exp.is_empty(),
        "class_a": audit(&exp.class_a),
        "class_b": audit(&exp.class_b),
    })
}

/// Multivector as a JSON map from 1-based index strings `"i1,i2"` to
/// coefficients.
pub fn multivector_to_json<R: RealScalar>(mv: &Multivector<R>) -> Value {
    let mut map = serde_json::Map::new();
    for (alpha, c) in mv.coeffs() {
        let key = alpha.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        map.insert(key, json!(c.to_f64_lossy()));
    }
    Value::Object(map)
}

pub fn multivector_from_json(value: &Value, n: usize, p: usize) -> Result<Multivector<f64>> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("multivector JSON must be an object".into()))?;
    let mut mv = Multivector::zero(n, p);
    for (key, val) in obj {
        let alpha: Vec<usize> = key
            .split(',')
            .map(|s| {
                let i: usize =
                    s.trim().parse().map_err(|_| Error::Parse(format!("bad index '{s}'")))?;
                if i == 0 || i > n {
                    return Err(Error::Parse(format!("index {i} out of 1..={n}")));
                }
                Ok(i - 1)
            })
            .collect::<Result<_>>()?;
        let c = val
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("coefficient of '{key}' is not a number")))?;
        if alpha.len() != p {
            return Err(Error::Parse(format!("index '{key}' does not have grade {p}")));
        }
        mv.set_coeff(alpha, c);
    }
    Ok(mv)
}
