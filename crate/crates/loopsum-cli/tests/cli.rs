//! End-to-end tests of the `loopsum` binary: documented examples, exit codes,
//! output determinism, and schema validity of every JSON document shape.

use std::path::Path;
use std::process::{Command, Output};

use loopsum_core::symfunc::elem;
use loopsum_core::VarSet;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopsum"))
        .args(args)
        .env_remove("LOOPSUM_JOBS")
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopsum"))
        .args(args)
        .env_remove("LOOPSUM_JOBS")
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("stdout is one JSON document")
}

fn schema_validator() -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let text = std::fs::read_to_string(path).expect("schema file ships with the crate");
    let schema: Value = serde_json::from_str(&text).expect("schema file is JSON");
    jsonschema::JSONSchema::compile(&schema).expect("schema file is a valid schema")
}

fn assert_valid(validator: &jsonschema::JSONSchema, doc: &Value) {
    if let Err(errors) = validator.validate(doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("document violates schema: {}\n{doc:#}", msgs.join("; "));
    }
}

#[test]
fn compute_smallest_size_prints_one() {
    let out = run(&["compute", "--model", "periodic", "--method", "det-e", "--L", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("value: 1\n"), "got:\n{text}");
    assert!(text.contains("normalization: 1\n"), "got:\n{text}");
}

#[test]
fn compute_size_three_equals_product_of_two_elementaries() {
    let out = run(&[
        "compute", "--model", "periodic", "--method", "det-e", "--L", "3", "--format", "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let doc = json(&out);
    let vars = VarSet::numbered("z", 3);
    let expected = elem(&vars, 1).checked_mul(&elem(&vars, 2)).unwrap();
    assert_eq!(doc["value"], Value::String(expected.to_string()));
    assert_eq!(doc["normalization"], Value::String("1".into()));
    assert_eq!(doc["L"], Value::from(3));
}

#[test]
fn compute_open_reference_smallest_size_is_one() {
    let out = run(&["compute", "--model", "open", "--method", "det-lambda", "--L", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("value: 1\n"));
}

#[test]
fn dump_documented_family_examples_verbatim() {
    let out = run(&["dump", "--family", "eps", "--L", "1", "--m", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "z1 + z1^-1\n");

    let out = run(&["dump", "--family", "mu", "--L", "2", "--i", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "-z1^2*z2 - z1*z2^2\n");
}

#[test]
fn dump_staircase_matrix_is_block_diagonal_at_size_three() {
    let out = run(&["dump", "--matrix", "e-staircase", "--L", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["size"], Value::from(2));
    assert_eq!(doc["rows"][0][1], Value::String("0".into()));
    assert_eq!(doc["rows"][1][0], Value::String("0".into()));
    let vars = VarSet::numbered("z", 3);
    assert_eq!(doc["rows"][0][0], Value::String(elem(&vars, 1).to_string()));
    assert_eq!(doc["rows"][1][1], Value::String(elem(&vars, 2).to_string()));
}

#[test]
fn verify_single_identity_text_line_and_success_exit() {
    let out = run(&["verify", "--id", "genmu", "--L", "2"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("genmu L=2 symbolic: EXACT\n"), "got:\n{text}");
    assert!(text.contains("checks: 1  passed: 1  failed: 0\n"), "got:\n{text}");
}

#[test]
fn verify_range_covers_min_size_up_to_cap() {
    let out = run(&["verify", "--id", "rec1p", "--max-L", "3", "--format", "json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let doc = json(&out);
    let sizes: Vec<u64> = doc["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["L"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes, vec![2, 3]);
}

#[test]
fn verify_suite_selection_skips_members_undefined_at_requested_size() {
    let out = run(&["verify", "--suite", "periodic", "--L", "3", "--mode", "random", "--trials", "2", "--seed", "5", "--format", "json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let doc = json(&out);
    let ids: Vec<&str> = doc["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"rec1p"), "got {ids:?}");
    assert!(
        !ids.contains(&"mu-reduction"),
        "the even-only check must be skipped at L=3, got {ids:?}"
    );
}

#[test]
fn verify_output_is_byte_identical_across_jobs_and_runs() {
    let args = [
        "verify", "--id", "symmetry", "--L", "3", "--mode", "random", "--trials", "3", "--seed",
        "42", "--format", "json",
    ];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    let mut with_jobs: Vec<&str> = args.to_vec();
    with_jobs.extend(["--jobs", "1"]);
    let second = run(&with_jobs);
    let third = run(&args);
    assert_eq!(stdout(&first), stdout(&second), "--jobs must not change bytes");
    assert_eq!(stdout(&first), stdout(&third), "reruns must not change bytes");
}

#[test]
fn verify_auto_seed_is_recorded() {
    let out = run(&["verify", "--id", "symmetry", "--L", "2", "--mode", "random", "--trials", "2", "--format", "json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let doc = json(&out);
    assert!(doc["seed"].is_u64(), "auto-generated seed must be recorded");
    assert_eq!(doc["seed"], doc["reports"][0]["seed"]);
}

#[test]
fn verify_timings_flag_controls_millis_key() {
    let base = ["verify", "--id", "genvar", "--L", "1", "--format", "json"];
    let plain = json(&run(&base));
    assert!(plain["reports"][0].get("millis").is_none());
    let mut timed_args = base.to_vec();
    timed_args.push("--timings");
    let timed = json(&run(&timed_args));
    assert!(timed["reports"][0]["millis"].is_i64() || timed["reports"][0]["millis"].is_u64());
}

#[test]
fn planted_corruption_fails_with_exit_one_and_witness() {
    let out = run(&[
        "verify", "--id", "rec1p", "--L", "3", "--mode", "random", "--trials", "5", "--seed",
        "11", "--plant-fault", "--format", "json",
    ]);
    assert_eq!(code(&out), 1, "a detected fault must exit 1");
    let doc = json(&out);
    assert_eq!(doc["failed"], Value::from(1));
    assert_eq!(doc["reports"][0]["verdict"], Value::String("FAIL".into()));
    assert!(doc["reports"][0]["witness"].is_object());
}

#[test]
fn usage_errors_exit_two() {
    let unknown_id = run(&["verify", "--id", "nonsense", "--L", "2"]);
    assert_eq!(code(&unknown_id), 2);

    let seed_without_random = run(&["verify", "--id", "genmu", "--L", "2", "--seed", "3"]);
    assert_eq!(code(&seed_without_random), 2);
    assert!(stderr(&seed_without_random).contains("--seed"));

    let missing_size = run(&["compute", "--model", "periodic", "--method", "det-e"]);
    assert_eq!(code(&missing_size), 2);

    let fault_outside_domain = run(&["verify", "--id", "genmu", "--L", "2", "--plant-fault"]);
    assert_eq!(code(&fault_outside_domain), 2);

    let index_on_matrix = run(&["dump", "--matrix", "mu", "--L", "4", "--i", "1"]);
    assert_eq!(code(&index_on_matrix), 2);
}

#[test]
fn symbolic_ceiling_refused_without_override() {
    let out = run(&["verify", "--id", "ztilde-rec", "--L", "5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--override-ceiling"), "stderr: {}", stderr(&out));

    let compute = run(&["compute", "--model", "open", "--method", "det-lambda", "--L", "6"]);
    assert_eq!(code(&compute), 2);
    assert!(stderr(&compute).contains("--override-ceiling"));
}

#[test]
fn failed_division_exits_three() {
    let out = run(&["compute", "--model", "open", "--method", "w-over-p", "--L", "5"]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("not divisible"), "stderr: {}", stderr(&out));
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = std::env::temp_dir().join("loopsum-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("genmu.json");
    let args_base = ["verify", "--id", "genmu", "--L", "2", "--format", "json"];
    let to_stdout = run(&args_base);
    let mut args_out: Vec<&str> = args_base.to_vec();
    let path_str = path.to_str().unwrap();
    args_out.extend(["--out", path_str]);
    let to_file = run(&args_out);
    assert_eq!(code(&to_file), 0);
    assert!(stdout(&to_file).is_empty(), "--out replaces stdout");
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&to_stdout));
    std::fs::remove_file(&path).ok();
}

#[test]
fn jobs_env_variable_is_accepted() {
    let out = run_env(&["verify", "--id", "genvar", "--L", "1"], "LOOPSUM_JOBS", "2");
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
}

#[test]
fn every_json_document_shape_validates_against_the_shipped_schema() {
    let validator = schema_validator();

    let compute = run(&[
        "compute", "--model", "open", "--method", "det-nu", "--L", "2", "--format", "json",
    ]);
    assert_eq!(code(&compute), 0, "stderr: {}", stderr(&compute));
    assert_valid(&validator, &json(&compute));

    let verify_sym = run(&["verify", "--suite", "shared", "--max-L", "2", "--format", "json"]);
    assert_eq!(code(&verify_sym), 0, "stderr: {}", stderr(&verify_sym));
    assert_valid(&validator, &json(&verify_sym));

    let verify_rand = run(&[
        "verify", "--id", "cross-open", "--L", "2", "--mode", "random", "--trials", "2",
        "--seed", "1", "--timings", "--format", "json",
    ]);
    assert_eq!(code(&verify_rand), 0, "stderr: {}", stderr(&verify_rand));
    assert_valid(&validator, &json(&verify_rand));

    let verify_fail = run(&[
        "verify", "--id", "rec1p", "--L", "2", "--mode", "random", "--trials", "5", "--seed",
        "11", "--plant-fault", "--format", "json",
    ]);
    assert_eq!(code(&verify_fail), 1);
    assert_valid(&validator, &json(&verify_fail));

    let family = run(&["dump", "--family", "lam", "--L", "2", "--i", "1", "--format", "json"]);
    assert_eq!(code(&family), 0, "stderr: {}", stderr(&family));
    assert_valid(&validator, &json(&family));

    let matrix = run(&["dump", "--matrix", "nu-diff", "--L", "4", "--format", "json"]);
    assert_eq!(code(&matrix), 0, "stderr: {}", stderr(&matrix));
    assert_valid(&validator, &json(&matrix));
}

#[test]
fn custom_variable_names_flow_through() {
    let out = run(&["dump", "--family", "e", "--vars", "a,b", "--k", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "a + b\n");
}
