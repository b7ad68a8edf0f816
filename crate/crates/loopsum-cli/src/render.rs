//! Deterministic text/JSON rendering for the three subcommands.
//!
//! JSON documents are pretty-printed with keys in sorted order (the
//! serializer's map is ordered), so a fixed request renders to fixed bytes.
//! Every document ends in exactly one newline.

use serde_json::{json, Value};

use loopsum_core::{MatrixKind, Model, PolyMatrix, SumRuleResult, VerificationReport, VerifyMode};

use crate::Format;

use loopsum_core::LaurentPoly;

fn finish(format: Format, text: String, value: Value) -> String {
    match format {
        Format::Text => text,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("JSON rendering is total");
            s.push('\n');
            s
        }
    }
}

fn vars_json(names: &[String]) -> Value {
    Value::Array(names.iter().map(|n| json!(n)).collect())
}

pub fn compute_doc(model: Model, result: &SumRuleResult, format: Format) -> String {
    let vars = result.vars().names();
    let reference = reference_method(model);
    let value = result.value();
    let text = format!(
        "model: {model}\nmethod: {}\nL: {}\nvars: {}\nreference: {reference}\nnormalization: {}\nterms: {}\nvalue: {}\n",
        result.method(),
        vars.len(),
        vars.join(", "),
        result.normalization(),
        value.term_count(),
        value
    );
    let doc = json!({
        "command": "compute",
        "model": model.name(),
        "method": result.method().name(),
        "L": vars.len(),
        "vars": vars_json(vars),
        "reference": reference,
        "normalization": result.normalization().to_string(),
        "terms": value.term_count(),
        "value": value.to_string(),
    });
    finish(format, text, doc)
}

fn reference_method(model: Model) -> &'static str {
    match model {
        Model::Periodic => "det-e",
        Model::Open => "det-lambda",
    }
}

pub fn verify_doc(
    reports: &[VerificationReport],
    mode: VerifyMode,
    timings: bool,
    format: Format,
) -> String {
    let passed = reports.iter().filter(|r| r.passed()).count();
    let failed = reports.len() - passed;

    let mut text = String::new();
    match mode {
        VerifyMode::Symbolic => text.push_str("mode: symbolic\n"),
        VerifyMode::Random { trials, seed } => {
            text.push_str(&format!("mode: random\ntrials: {trials}\nseed: {seed}\n"));
        }
    }
    for r in reports {
        if timings {
            text.push_str(&format!("{r} ({} ms)\n", r.millis));
        } else {
            text.push_str(&format!("{r}\n"));
        }
    }
    text.push_str(&format!(
        "checks: {}  passed: {passed}  failed: {failed}\n",
        reports.len()
    ));

    let (mode_name, trials, seed) = match mode {
        VerifyMode::Symbolic => ("symbolic", Value::Null, Value::Null),
        VerifyMode::Random { trials, seed } => ("random", json!(trials), json!(seed)),
    };
    let doc = json!({
        "command": "verify",
        "mode": mode_name,
        "trials": trials,
        "seed": seed,
        "reports": Value::Array(reports.iter().map(|r| r.to_json(timings)).collect()),
        "checks": reports.len(),
        "passed": passed,
        "failed": failed,
    });
    finish(format, text, doc)
}

pub fn family_doc(family: &str, index: i64, poly: &LaurentPoly, format: Format) -> String {
    let text = format!("{poly}\n");
    let doc = json!({
        "command": "dump",
        "family": family,
        "index": index,
        "L": poly.vars().len(),
        "vars": vars_json(poly.vars().names()),
        "terms": poly.term_count(),
        "value": poly.to_string(),
    });
    finish(format, text, doc)
}

pub fn matrix_doc(kind: MatrixKind, matrix: &PolyMatrix, format: Format) -> String {
    let n = matrix.rows();
    let mut text = String::new();
    let mut rows: Vec<Value> = Vec::with_capacity(n);
    for r in 0..n {
        let mut cells: Vec<String> = Vec::with_capacity(n);
        for c in 0..n {
            cells.push(matrix.entry(r, c).to_string());
        }
        text.push_str(&format!("[{}]\n", cells.join(", ")));
        rows.push(Value::Array(cells.into_iter().map(Value::String).collect()));
    }
    if n == 0 {
        text.push_str("[]\n");
    }
    let doc = json!({
        "command": "dump",
        "matrix": kind.name(),
        "L": matrix.vars().len(),
        "vars": vars_json(matrix.vars().names()),
        "size": n,
        "rows": Value::Array(rows),
    });
    finish(format, text, doc)
}
