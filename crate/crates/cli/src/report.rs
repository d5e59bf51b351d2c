//! Rendering of compute results and verification reports as JSON, CSV or text.

use serde_json::{Map, Value};

use supermac::verify::{CheckKind, SuiteReport};

use crate::Format;

fn to_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("reports are plain JSON");
    s.push('\n');
    s
}

/// A coefficient from its JSON encoding: `p/q`, a float, or `re+imi`.
fn coefficient(obj: &Map<String, Value>) -> Option<String> {
    if let (Some(Value::String(n)), Some(Value::String(d))) = (obj.get("numerator"), obj.get("denominator")) {
        return Some(if d == "1" { n.clone() } else { format!("{n}/{d}") });
    }
    if let Some(v) = obj.get("float") {
        return Some(v.to_string());
    }
    if let (Some(re), Some(im)) = (obj.get("re"), obj.get("im")) {
        return Some(format!("{re}{}{}i", if im.as_f64().unwrap_or(0.0) < 0.0 { "" } else { "+" }, im));
    }
    None
}

const COEFFICIENT_KEYS: [&str; 5] = ["numerator", "denominator", "float", "re", "im"];

fn label_columns(term: &Map<String, Value>) -> Vec<(String, String)> {
    term.iter()
        .filter(|(k, _)| !COEFFICIENT_KEYS.contains(&k.as_str()))
        .map(|(k, v)| (k.clone(), v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())))
        .collect()
}

pub fn render_compute(doc: &Value, format: Format) -> String {
    let result = &doc["result"];
    match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            match result.get("terms").and_then(Value::as_array) {
                Some(terms) => {
                    let mut header_done = false;
                    for t in terms.iter().filter_map(Value::as_object) {
                        let labels = label_columns(t);
                        if !header_done {
                            let mut h: Vec<&str> = labels.iter().map(|(k, _)| k.as_str()).collect();
                            h.push("coefficient");
                            w.write_record(&h).expect("in-memory");
                            header_done = true;
                        }
                        let mut row: Vec<String> = labels.into_iter().map(|(_, v)| v).collect();
                        row.push(coefficient(t).unwrap_or_default());
                        w.write_record(&row).expect("in-memory");
                    }
                }
                None => {
                    let obj = result.as_object().cloned().unwrap_or_default();
                    w.write_record(obj.keys()).expect("in-memory");
                    w.write_record(obj.values().map(|v| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())))
                        .expect("in-memory");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory")).expect("utf8")
        }
        Format::Pretty => {
            let mut out = format!("{}\n", doc["config"]["command"].as_str().unwrap_or(""));
            match result.get("terms").and_then(Value::as_array) {
                Some(terms) if terms.is_empty() => out.push_str("  0\n"),
                Some(terms) => {
                    for t in terms.iter().filter_map(Value::as_object) {
                        let labels: Vec<String> = label_columns(t).into_iter().map(|(k, v)| format!("{k}=({v})")).collect();
                        out.push_str(&format!("  {}  {}\n", coefficient(t).unwrap_or_default(), labels.join(" ")));
                    }
                }
                None => {
                    for (k, v) in result.as_object().into_iter().flatten() {
                        out.push_str(&format!("  {k} = {}\n", v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())));
                    }
                }
            }
            out
        }
    }
}

pub fn render_verify(doc: &Value, reports: &[SuiteReport], format: Format) -> Result<String, csv::Error> {
    Ok(match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let config = &doc["config"];
            let spec = &config["spec"];
            let seed = config["seed"].to_string();
            let mut w = csv::Writer::from_writer(Vec::new());
            let rows: Vec<_> = reports.iter().flat_map(|r| &r.norms).collect();
            if rows.is_empty() {
                w.write_record(["suite", "check", "kind", "passed", "value", "tolerance", "counterexample", "seed"])?;
                for r in reports {
                    for c in &r.checks {
                        let kind = match c.kind {
                            CheckKind::Assert => "assert",
                            CheckKind::Diagnostic => "diagnostic",
                        };
                        w.write_record([
                            r.suite.as_str(),
                            &c.name,
                            kind,
                            &c.passed.to_string(),
                            &c.value.to_string(),
                            &c.tolerance.to_string(),
                            c.counterexample.as_deref().unwrap_or(""),
                            &seed,
                        ])?;
                    }
                }
            } else {
                w.write_record(["lambda", "formula", "quad_re", "quad_im", "rel_err", "N", "K", "xi", "xip", "seed"])?;
                for n in rows {
                    w.write_record([
                        n.lambda.to_string(),
                        n.formula.to_string(),
                        n.quad_re.to_string(),
                        n.quad_im.to_string(),
                        n.rel_error.to_string(),
                        n.spec.grid.to_string(),
                        n.spec.truncation.to_string(),
                        spec["xi"].to_string(),
                        spec["xip"].to_string(),
                        seed.clone(),
                    ])?;
                }
            }
            String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf8")
        }
        Format::Pretty => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&format!("{} {}\n", if r.first_failure().is_none() { "PASS" } else { "FAIL" }, r.suite));
                for c in &r.checks {
                    let tag = match (c.passed, c.kind) {
                        (true, _) => "ok",
                        (false, CheckKind::Diagnostic) => "note",
                        (false, CheckKind::Assert) => "FAIL",
                    };
                    out.push_str(&format!("  [{tag}] {}: {:.3e} (tol {:.1e})", c.name, c.value, c.tolerance));
                    if let Some(at) = &c.counterexample {
                        out.push_str(&format!(" at {at}"));
                    }
                    out.push('\n');
                }
            }
            out
        }
    })
}
