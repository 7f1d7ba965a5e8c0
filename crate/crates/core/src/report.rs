//! Serialization of command results as JSON, CSV or plain text.
//!
//! Every float is rounded to 15 significant digits before it is written, and
//! exact bounds are written as fraction strings.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::certify::{CertificationReport, ExtremalCandidate, ExtremalReport};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "text" => Ok(Self::Text),
            other => Err(format!(
                "unknown format '{other}' (expected json, csv or text)"
            )),
        }
    }
}

/// `x` rounded to 15 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    json!(rounded)
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

pub fn complex_list(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().copied().map(complex).collect())
}

pub fn certification_value(report: &CertificationReport) -> Value {
    let w = &report.witness;
    let g = &report.grid_meta;
    let diagnostics: Vec<Value> = report
        .diagnostics
        .iter()
        .map(|d| {
            json!({
                "tau1": num(d.tau1),
                "slice_max": num(d.slice_max),
                "envelope": num(d.envelope),
                "case": d.case,
            })
        })
        .collect();
    json!({
        "class": report.class.slug(),
        "bound_exact": report.bound.to_string(),
        "theoretical_bound": report.bound.to_string(),
        "bound_float": num(report.bound.value()),
        "search_max": num(report.search_max),
        "gap": num(report.gap),
        "witness": {
            "tau1": num(w.tau1()),
            "tau2_re": num(w.tau2().re),
            "tau2_im": num(w.tau2().im),
            "tau3_re": num(w.tau3().re),
            "tau3_im": num(w.tau3().im),
        },
        "witness_value": num(report.witness_value),
        "max_excess": num(report.max_excess),
        "sound": report.sound(),
        "attained": report.attained(),
        "grid": {
            "n_tau1": g.grid.n_tau1,
            "n_tau2_modulus": g.grid.n_tau2_modulus,
            "n_tau2_phase": g.grid.n_tau2_phase,
            "n_tau3_phase": g.grid.n_tau3_phase,
            "refinement_rounds": g.refinement_rounds,
            "zoom_factor": num(g.zoom_factor),
            "points_evaluated": g.points_evaluated,
            "tau3_domain": g.tau3_domain,
            "tau3_justification": g.tau3_justification,
        },
        "diagnostics": diagnostics,
    })
}

fn candidate_value(c: &ExtremalCandidate) -> Value {
    json!({
        "label": c.label,
        "driver": c.driver,
        "a2": complex(c.a2),
        "a3": complex(c.a3),
        "a4": complex(c.a4),
        "h21": complex(c.h21),
        "h21_abs": num(c.h21_abs),
        "h21_gamma_path": complex(c.h21_gamma_path),
        "matches_bound": c.matches_bound,
        "driver_min_re": c.driver_min_re.map_or(Value::Null, num),
        "interior_pole": c.interior_pole.map_or(Value::Null, complex),
        "class_min_margin": c.class_min_margin.map_or(Value::Null, num),
        "membership_ok": c.membership_ok,
    })
}

pub fn extremal_value(report: &ExtremalReport) -> Value {
    json!({
        "class": report.class.slug(),
        "bound_exact": report.bound.to_string(),
        "bound_float": num(report.bound.value()),
        "candidates": report.candidates.iter().map(candidate_value).collect::<Vec<_>>(),
    })
}

/// Serializes a certification report. CSV output is a single row with the
/// witness flattened; the per-slice diagnostics are only in JSON and text.
pub fn emit_report(report: &CertificationReport, format: OutputFormat) -> Vec<u8> {
    let mut value = certification_value(report);
    if format == OutputFormat::Csv {
        if let Value::Object(map) = &mut value {
            map.shift_remove("diagnostics");
        }
    }
    render(&value, format)
}

/// Renders any command result.
///
/// CSV: if the object holds exactly one array of objects, one row is written
/// per element (top-level scalars repeated); otherwise a single row.
pub fn render(value: &Value, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("values serialize");
            s.push('\n');
            s.into_bytes()
        }
        OutputFormat::Csv => render_csv(value),
        OutputFormat::Text => render_text(value).into_bytes(),
    }
}

fn flatten_into(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}_{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten_into(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten_into(&key(&i.to_string()), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn is_row_array(v: &Value) -> bool {
    matches!(v, Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object))
}

fn render_csv(value: &Value) -> Vec<u8> {
    let mut rows: Vec<Vec<(String, String)>> = Vec::new();
    match value {
        Value::Object(map) => {
            let row_fields: Vec<&String> = map
                .iter()
                .filter(|(_, v)| is_row_array(v))
                .map(|(k, _)| k)
                .collect();
            let mut scalars = Map::new();
            for (k, v) in map {
                if !is_row_array(v) {
                    scalars.insert(k.clone(), v.clone());
                }
            }
            let mut base = Vec::new();
            flatten_into("", &Value::Object(scalars), &mut base);
            if let [field] = row_fields.as_slice() {
                for item in map[field.as_str()].as_array().expect("row array") {
                    let mut row = base.clone();
                    flatten_into("", item, &mut row);
                    rows.push(row);
                }
            } else {
                rows.push(base);
            }
        }
        other => {
            let mut row = Vec::new();
            flatten_into("value", other, &mut row);
            rows.push(row);
        }
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        writer
            .write_record(first.iter().map(|(k, _)| k.as_str()))
            .expect("in-memory csv");
    }
    for row in &rows {
        writer
            .write_record(row.iter().map(|(_, v)| v.as_str()))
            .expect("in-memory csv");
    }
    writer.into_inner().expect("in-memory csv")
}

fn render_text(value: &Value) -> String {
    let mut out = String::new();
    text_into(&mut out, value, 0);
    out
}

fn text_into(out: &mut String, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(inner) if is_complex(inner) => {
                        let _ = writeln!(out, "{pad}{k}: {}", complex_text(inner));
                    }
                    Value::Object(_) | Value::Array(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        text_into(out, v, depth + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", scalar_text(v));
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                match v {
                    Value::Object(inner) if is_complex(inner) => {
                        let _ = writeln!(out, "{pad}[{i}] {}", complex_text(inner));
                    }
                    Value::Object(_) | Value::Array(_) => {
                        let _ = writeln!(out, "{pad}[{i}]");
                        text_into(out, v, depth + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}[{i}] {}", scalar_text(v));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other));
        }
    }
}

fn is_complex(map: &Map<String, Value>) -> bool {
    map.len() == 2 && map.contains_key("re") && map.contains_key("im")
}

fn complex_text(map: &Map<String, Value>) -> String {
    let re = map["re"].as_f64().unwrap_or(f64::NAN);
    let im = map["im"].as_f64().unwrap_or(f64::NAN);
    if im < 0.0 {
        format!("{re} - {}i", -im)
    } else {
        format!("{re} + {im}i")
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(num(19.0 / 288.0).to_string(), "0.0659722222222222");
        assert_eq!(num(1.0 / 3.0).to_string(), "0.333333333333333");
        assert_eq!(num(2.0).to_string(), "2.0");
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn csv_single_row_and_rows() {
        let v = json!({ "a": num(1.5), "w": { "x": 1, "y": "s" } });
        let text = String::from_utf8(render(&v, OutputFormat::Csv)).unwrap();
        assert_eq!(text, "a,w_x,w_y\n1.5,1,s\n");
        let v = json!({ "class": "c", "items": [{ "k": 1 }, { "k": 2 }] });
        let text = String::from_utf8(render(&v, OutputFormat::Csv)).unwrap();
        assert_eq!(text, "class,k\nc,1\nc,2\n");
    }

    #[test]
    fn text_shows_complex_inline() {
        let v = json!({ "z": complex(Complex64::new(1.0, -2.0)) });
        assert_eq!(render_text(&v), "z: 1 - 2i\n");
    }
}
