//! Deterministic rendering of analysis reports as JSON, text or CSV.
//!
//! Floats are written in fixed-point notation at the configured precision so
//! output bytes do not depend on platform float formatting.

use std::fmt::Write as _;

use crate::config::ReportFormat;
use crate::model::GroupProfile;
use crate::pipeline::{AnalysisReport, SCHEMA_VERSION};
use crate::scalar::Scalar;

/// Fixed-point rendering; negative zero prints as zero.
pub fn format_float(x: f64, precision: usize) -> String {
    let s = format!("{x:.precision$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub fn render<T: Scalar>(report: &AnalysisReport<T>, format: ReportFormat) -> Vec<u8> {
    let text = match format {
        ReportFormat::Json => render_json(report),
        ReportFormat::Text => render_text(report),
        ReportFormat::Csv => render_csv(report),
    };
    text.into_bytes()
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization")
}

struct Components {
    rows: [(&'static str, f64); 6],
}

fn components<T: Scalar>(report: &AnalysisReport<T>) -> Components {
    let c = &report.components;
    Components {
        rows: [
            ("cosine", c.cosine.to_f64_lossy()),
            ("eigen_shift_raw", c.eigen_shift_raw.to_f64_lossy()),
            ("eigen_shift_normalized", c.eigen_shift_normalized.to_f64_lossy()),
            ("euclidean", c.euclidean.to_f64_lossy()),
            ("harmonic_mean", c.harmonic_mean.to_f64_lossy()),
            ("gpi_diff", c.gpi_diff.to_f64_lossy()),
        ],
    }
}

fn json_array<T: Scalar>(values: &[T], precision: usize) -> String {
    let items: Vec<String> = values
        .iter()
        .map(|v| format_float(v.to_f64_lossy(), precision))
        .collect();
    format!("[{}]", items.join(", "))
}

fn json_profile<T: Scalar>(out: &mut String, p: &GroupProfile<T>, precision: usize) {
    out.push_str("    {\n");
    let _ = writeln!(out, "      \"group_id\": {},", json_str(&p.group_id));
    let _ = writeln!(out, "      \"doc_count\": {},", p.doc_count);
    let _ = writeln!(out, "      \"mean_raw\": {},", json_array(&p.mean_raw, precision));
    let _ = writeln!(out, "      \"mean_norm\": {},", json_array(&p.mean_norm, precision));
    let _ = writeln!(
        out,
        "      \"eigen_spectrum\": {}",
        json_array(&p.eigen_spectrum, precision)
    );
    out.push_str("    }");
}

fn render_json<T: Scalar>(report: &AnalysisReport<T>) -> String {
    let precision = report.components.config.float_precision;
    let c = &report.components;
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"schema_version\": {SCHEMA_VERSION},");

    out.push_str("  \"components\": {\n");
    for (name, value) in components(report).rows {
        let _ = writeln!(out, "    \"{name}\": {},", format_float(value, precision));
    }
    let _ = writeln!(out, "    \"n\": {},", c.n);
    let _ = writeln!(
        out,
        "    \"doc_counts\": [{}, {}]",
        c.doc_counts.0, c.doc_counts.1
    );
    out.push_str("  },\n");

    out.push_str("  \"profiles\": [\n");
    json_profile(&mut out, &report.profiles.0, precision);
    out.push_str(",\n");
    json_profile(&mut out, &report.profiles.1, precision);
    out.push_str("\n  ],\n");

    let warnings: Vec<String> = report.warnings.iter().map(|w| json_str(w)).collect();
    if warnings.is_empty() {
        out.push_str("  \"warnings\": [],\n");
    } else {
        let _ = writeln!(out, "  \"warnings\": [\n    {}\n  ],", warnings.join(",\n    "));
    }

    let p = &report.provenance;
    out.push_str("  \"provenance\": {\n");
    let inputs: Vec<String> = p.inputs.iter().map(|s| json_str(s)).collect();
    let _ = writeln!(out, "    \"inputs\": [{}],", inputs.join(", "));
    let _ = writeln!(
        out,
        "    \"label_fingerprint\": {},",
        json_str(p.label_fingerprint.as_str())
    );
    out.push_str("    \"config\": {\n");
    let echo = p.config.echo();
    for (i, (k, v)) in echo.iter().enumerate() {
        let sep = if i + 1 < echo.len() { "," } else { "" };
        let value = if *k == "float_precision" {
            v.clone()
        } else {
            json_str(v)
        };
        let _ = writeln!(out, "      \"{k}\": {value}{sep}");
    }
    out.push_str("    },\n");
    let _ = writeln!(out, "    \"tool_version\": {}", json_str(&p.tool_version));
    out.push_str("  }");

    if let Some(stamp) = &report.generated_at {
        let _ = write!(out, ",\n  \"run\": {{\n    \"generated_at\": {}\n  }}", json_str(stamp));
    }
    out.push_str("\n}\n");
    out
}

fn render_text<T: Scalar>(report: &AnalysisReport<T>) -> String {
    let precision = report.components.config.float_precision;
    let c = &report.components;
    let f = |x: T| format_float(x.to_f64_lossy(), precision);
    let (a, b) = &report.profiles;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "GPI-Diff: {} (docs = {}) vs {} (docs = {}), n = {}",
        a.group_id, a.doc_count, b.group_id, b.doc_count, c.n
    );
    out.push('\n');
    let _ = writeln!(out, "Cosine Distance: {}", f(c.cosine));
    let _ = writeln!(out, "Eigenvalue Shift (raw): {}", f(c.eigen_shift_raw));
    let _ = writeln!(out, "Eigenvalue Shift: {}", f(c.eigen_shift_normalized));
    let _ = writeln!(out, "Euclidean Distance: {}", f(c.euclidean));
    let _ = writeln!(out, "Harmonic Mean (Cosine + Eigen): {}", f(c.harmonic_mean));
    let _ = writeln!(out, "Final GPI-Diff Score: {}", f(c.gpi_diff));
    out.push('\n');
    let echo: Vec<String> = report
        .provenance
        .config
        .echo()
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    let _ = writeln!(out, "config: {}", echo.join(" "));
    let _ = writeln!(
        out,
        "labels: {}",
        report.provenance.label_fingerprint.as_str()
    );
    if !report.warnings.is_empty() {
        let _ = writeln!(out, "warnings ({}):", report.warnings.len());
        for w in &report.warnings {
            let _ = writeln!(out, "  {w}");
        }
    }
    out
}

fn render_csv<T: Scalar>(report: &AnalysisReport<T>) -> String {
    let precision = report.components.config.float_precision;
    let c = &report.components;
    let mut out = String::from("component,value\n");
    for (name, value) in components(report).rows {
        let _ = writeln!(out, "{name},{}", format_float(value, precision));
    }
    let _ = writeln!(out, "n,{}", c.n);
    let _ = writeln!(out, "doc_count_a,{}", c.doc_counts.0);
    let _ = writeln!(out, "doc_count_b,{}", c.doc_counts.1);
    out
}
