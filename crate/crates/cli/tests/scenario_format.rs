//! Contract tests for the scenario format: precise error codes with
//! locations, normalization round-trips, stored names, the reserved task,
//! and the shipped fixtures.

use ptwist_cli::runner;
use ptwist_cli::scenario::{materialize, parse_scenario, ScenarioError, TaskSpec};
use ptwist_cli::suite;

fn minimal(tasks: &str) -> String {
    format!(
        r#"{{
            "schema_version": 1,
            "name": "t",
            "field": "q",
            "algebras": {{ "A": {{ "truncated_polynomial": {{ "n": 1, "degree": 2 }} }} }},
            "modules": {{ "E": {{ "free": {{ "algebra": "A", "degrees": [0] }} }} }},
            "tasks": [{tasks}]
        }}"#
    )
}

fn code(e: &ScenarioError) -> &'static str {
    match e {
        ScenarioError::Parse { code, .. } => code,
        ScenarioError::Validation { code, .. } => code,
    }
}

#[test]
fn minimal_scenario_with_no_tasks() {
    let doc = parse_scenario(&minimal("")).unwrap();
    assert!(doc.tasks.is_empty());
    let s = materialize(doc, None, None).unwrap();
    assert_eq!(s.ws.modules.len(), 1);
}

#[test]
fn unknown_task_is_a_parse_error() {
    let err = parse_scenario(&minimal(r#"{ "task": "frobnicate", "object": "E" }"#)).unwrap_err();
    assert_eq!(code(&err), "unknown_task");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn bad_json_reports_position() {
    let err = parse_scenario("{ not json").unwrap_err();
    assert_eq!(code(&err), "bad_json");
    match err {
        ScenarioError::Parse { message, .. } => assert!(message.contains("line")),
        _ => panic!(),
    }
}

#[test]
fn unresolved_reference_is_a_validation_error() {
    let doc =
        parse_scenario(&minimal(r#"{ "task": "classify", "object": "Nope" }"#)).unwrap();
    // Named objects are resolved when the task runs, but reference checks in
    // definition blocks happen at materialization.
    let bad = r#"{
        "schema_version": 1,
        "name": "t",
        "field": "q",
        "modules": { "E": { "free": { "algebra": "missing", "degrees": [0] } } }
    }"#;
    let err = materialize(parse_scenario(bad).unwrap(), None, None).err().unwrap();
    assert_eq!(code(&err), "unresolved_reference");
    assert_eq!(err.exit_code(), 3);
    // Task-level dangling names surface as failed tasks, not crashes.
    let s = materialize(doc, None, None).unwrap();
    let report = runner::run(s, false);
    assert_eq!(report.summary.fail, 1);
}

#[test]
fn wrong_differential_degree_names_the_entry() {
    let bad = r#"{
        "schema_version": 1,
        "name": "t",
        "field": "q",
        "algebras": { "A": { "truncated_polynomial": { "n": 1, "degree": 2 } } },
        "modules": { "M": { "literal": {
            "algebra": "A",
            "generators": [["x", 0], ["y", 0]],
            "differential": [ { "from": "y", "to": "x", "terms": [ { "coeff": 1, "basis": "h" } ] } ]
        } } }
    }"#;
    let err = materialize(parse_scenario(bad).unwrap(), None, None).err().unwrap();
    assert_eq!(code(&err), "invalid_module");
    let text = err.to_string();
    assert!(text.contains('y') && text.contains('x'), "message: {text}");
}

#[test]
fn non_prime_modulus_is_rejected() {
    let bad = minimal("").replace("\"field\": \"q\"", "\"field\": \"fp:4\"");
    let err = materialize(parse_scenario(&bad).unwrap(), None, None).err().unwrap();
    assert_eq!(code(&err), "not_prime");
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn schema_version_is_checked() {
    let bad = minimal("").replace("\"schema_version\": 1", "\"schema_version\": 9");
    let err = materialize(parse_scenario(&bad).unwrap(), None, None).err().unwrap();
    assert_eq!(code(&err), "schema_version");
}

#[test]
fn reserved_task_is_rejected_at_validation() {
    let doc = parse_scenario(&minimal(r#"{ "task": "pushforward_intertwine" }"#)).unwrap();
    let err = materialize(doc, None, None).err().unwrap();
    assert_eq!(code(&err), "reserved_task");
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn stored_names_must_be_fresh() {
    let doc = parse_scenario(&minimal(
        r#"{ "task": "minimal_model", "object": "E", "store": "E" }"#,
    ))
    .unwrap();
    let err = materialize(doc, None, None).err().unwrap();
    assert_eq!(code(&err), "duplicate_name");
}

#[test]
fn stored_outputs_are_usable_by_later_tasks() {
    let tasks = r#"
        { "task": "p_twist", "twist_by": "E", "apply_to": "E", "store": "PE" },
        { "task": "minimal_model", "object": "PE",
          "expect": { "generator_degrees": [2], "differential_is_zero": true } }
    "#;
    let doc = parse_scenario(&minimal(tasks)).unwrap();
    let report = runner::run(materialize(doc, None, None).unwrap(), false);
    assert_eq!(report.summary.pass, 2);
    assert_eq!(report.summary.fail, 0);
}

#[test]
fn serialization_normalizes_idempotently() {
    for (_, src) in suite::BUILTIN {
        let doc = parse_scenario(src).unwrap();
        let once = serde_json::to_string_pretty(&doc).unwrap();
        let doc2 = parse_scenario(&once).unwrap();
        let twice = serde_json::to_string_pretty(&doc2).unwrap();
        assert_eq!(once, twice);
    }
}

#[test]
fn shipped_square_scenario_lists_five_tasks() {
    let src = suite::builtin_source("p1_square_equals_p_twist").unwrap();
    let doc = parse_scenario(src).unwrap();
    assert_eq!(doc.tasks.len(), 5);
    assert!(doc
        .tasks
        .iter()
        .all(|t| matches!(t, TaskSpec::FindQuasiIso { .. })));
}

#[test]
fn classification_scenario_passes_end_to_end() {
    let src = suite::builtin_source("classify_pn_objects_q").unwrap();
    let doc = parse_scenario(src).unwrap();
    let report = runner::run(materialize(doc, None, None).unwrap(), false);
    assert!(report.all_pass());
    let v = &report.tasks[1];
    assert_eq!(v.data["verdict"], "p_object");
    assert_eq!(v.data["n"], 2);
}

#[test]
fn field_override_changes_the_field() {
    let doc = parse_scenario(&minimal("")).unwrap();
    let s = materialize(
        doc,
        Some(ptwist_core::FieldSpec::prime(7).unwrap()),
        Some(42),
    )
    .unwrap();
    assert_eq!(s.field.to_string(), "fp:7");
    assert_eq!(s.seed, 42);
}

#[test]
fn small_characteristic_triggers_the_guard() {
    let doc = parse_scenario(&minimal("")).unwrap();
    let s = materialize(doc, Some(ptwist_core::FieldSpec::prime(2).unwrap()), None).unwrap();
    assert!(!s.warnings.is_empty());
    let doc = parse_scenario(&minimal("")).unwrap();
    let s = materialize(doc, Some(ptwist_core::FieldSpec::prime(32003).unwrap()), None).unwrap();
    assert!(s.warnings.is_empty());
}

#[test]
fn every_task_has_an_explain_entry() {
    let names = [
        "classify",
        "ext_dims",
        "cohomology_dims",
        "is_acyclic",
        "euler_char",
        "euler_pairing",
        "minimal_model",
        "find_quasi_iso",
        "spherical_twist",
        "p_twist",
        "double_twist",
        "ambient_profile",
        "les_oracle",
        "spherical_after_pushforward",
        "euler_invariance_sweep",
        "fully_faithful_sweep",
        "invariant_sweep",
        "pushforward_intertwine",
    ];
    for n in names {
        assert!(ptwist_cli::explain::lookup(n).is_some(), "missing entry for {n}");
    }
}
