//! The built-in verification suite: the scenarios shipped with the tool,
//! run in a fixed order with a shared seed override.

use crate::report::{Report, Summary, SuiteReport};
use crate::runner;
use crate::scenario::{materialize, parse_scenario, ScenarioError};

pub const BUILTIN: &[(&str, &str)] = &[
    (
        "classify_pn_objects_q",
        include_str!("../scenarios/classify_pn_objects_q.json"),
    ),
    (
        "classify_pn_objects_fp",
        include_str!("../scenarios/classify_pn_objects_fp.json"),
    ),
    (
        "p_twist_shift_q",
        include_str!("../scenarios/p_twist_shift_q.json"),
    ),
    (
        "p_twist_shift_fp",
        include_str!("../scenarios/p_twist_shift_fp.json"),
    ),
    (
        "orthogonal_identity",
        include_str!("../scenarios/orthogonal_identity.json"),
    ),
    (
        "degeneration_profiles",
        include_str!("../scenarios/degeneration_profiles.json"),
    ),
    (
        "ring_structure_counterexample",
        include_str!("../scenarios/ring_structure_counterexample.json"),
    ),
    (
        "p1_square_equals_p_twist",
        include_str!("../scenarios/p1_square_equals_p_twist.json"),
    ),
    (
        "euler_pairing_invariance",
        include_str!("../scenarios/euler_pairing_invariance.json"),
    ),
    (
        "fully_faithful_dimensions",
        include_str!("../scenarios/fully_faithful_dimensions.json"),
    ),
    (
        "construction_invariant_sweep",
        include_str!("../scenarios/construction_invariant_sweep.json"),
    ),
];

pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Run every built-in scenario; reports appear in suite order.
pub fn run_suite(seed_override: Option<u64>, timings: bool) -> Result<SuiteReport, ScenarioError> {
    let mut scenarios = Vec::with_capacity(BUILTIN.len());
    let mut summary = Summary::default();
    for (_, src) in BUILTIN {
        let doc = parse_scenario(src)?;
        let scenario = materialize(doc, None, seed_override)?;
        let report: Report = runner::run(scenario, timings);
        summary.pass += report.summary.pass;
        summary.fail += report.summary.fail;
        summary.inconclusive += report.summary.inconclusive;
        scenarios.push(report);
    }
    Ok(SuiteReport {
        tool: crate::report::TOOL,
        version: crate::report::VERSION,
        seed: seed_override.unwrap_or(0),
        scenarios,
        summary,
    })
}
