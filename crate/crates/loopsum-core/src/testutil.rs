//! Test-only helpers: golden-file comparison for frozen polynomial values.
//!
//! A golden file stores one polynomial in the JSON rendering under
//! `golden/<name>.json`. Tests compare a freshly computed value against the
//! stored one; running the suite with `GOLDEN_REGEN=1` rewrites the files
//! instead (inspect and commit the diff deliberately).

use std::path::PathBuf;

use crate::laurent::{LaurentPoly, PolyJson};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("golden")
        .join(format!("{name}.json"))
}

pub(crate) fn golden_check(name: &str, actual: &LaurentPoly) {
    let path = golden_path(name);
    if std::env::var_os("GOLDEN_REGEN").is_some() {
        let text = serde_json::to_string_pretty(&actual.to_json()).expect("serializable");
        std::fs::write(&path, text + "\n")
            .unwrap_or_else(|e| panic!("cannot write golden file {}: {e}", path.display()));
        return;
    }
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| {
        panic!(
            "missing golden file {} ({e}); run once with GOLDEN_REGEN=1 to create it",
            path.display()
        )
    });
    let json: PolyJson = serde_json::from_str(&text)
        .unwrap_or_else(|e| panic!("corrupt golden file {}: {e}", path.display()));
    let expected = LaurentPoly::from_json(&json)
        .unwrap_or_else(|e| panic!("corrupt golden file {}: {e}", path.display()));
    assert_eq!(
        actual, &expected,
        "value diverged from golden file {}",
        path.display()
    );
}

/// Text variant of [`golden_check`] for frozen non-polynomial output (report
/// serializations and the like). Same regeneration convention.
pub(crate) fn golden_check_text(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("GOLDEN_REGEN").is_some() {
        std::fs::write(&path, format!("{actual}\n"))
            .unwrap_or_else(|e| panic!("cannot write golden file {}: {e}", path.display()));
        return;
    }
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| {
        panic!(
            "missing golden file {} ({e}); run once with GOLDEN_REGEN=1 to create it",
            path.display()
        )
    });
    assert_eq!(
        actual,
        text.trim_end_matches('\n'),
        "output diverged from golden file {}",
        path.display()
    );
}
