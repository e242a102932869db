//! Task execution: dispatch each task of a materialized scenario, compare
//! against its expectation block, and assemble the report. Failures never
//! abort a run; they become report entries. The only tasks allowed to
//! report `inconclusive` are quasi-iso searches that exhaust their budget
//! without a dimension obstruction.

use serde_json::{json, Value};
use std::time::Instant;

use ptwist_core::ambient::{les_oracle, spherical_after_pushforward, AmbientModel};
use ptwist_core::dgmodule::{ModuleRef, Morphism};
use ptwist_core::equiv::{
    euler_char, euler_pairing, find_quasi_iso, is_acyclic, minimal_model, FindOutcome,
};
use ptwist_core::hom::{classify, ext_dims, ext_ring, module_cohomology_dims};
use ptwist_core::twist::{double_twist, p_twist, spherical_twist};

use crate::report::{dims_value, morphism_value, Report, Summary, TaskRecord, Verdict};
use crate::scenario::{
    ClassifyExpect, DimsExpect, FailuresExpect, MinimalExpect, OutcomeExpect, Scenario,
    ScenarioError, SphericalExpect, TaskSpec, ValueExpect, Workspace,
};
use crate::sweeps;

struct TaskResult {
    verdict: Verdict,
    data: Value,
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn check_dims(
    actual: &std::collections::BTreeMap<i64, usize>,
    expect: &Option<DimsExpect>,
) -> Verdict {
    match expect {
        // Keys were validated at materialization.
        Some(e) => pass_if(e.degrees().map(|d| &d == actual).unwrap_or(false)),
        None => Verdict::Pass,
    }
}

/// Run every task in order and assemble the report.
pub fn run(mut scenario: Scenario, timings: bool) -> Report {
    let tasks: Vec<TaskSpec> = scenario.ws.doc().tasks.clone();
    let name = scenario.ws.doc().name.clone();
    let statement = scenario.ws.doc().statement.clone();
    let mut records = Vec::with_capacity(tasks.len());
    let mut summary = Summary::default();

    for (i, task) in tasks.iter().enumerate() {
        let started = Instant::now();
        let loc = format!("tasks[{i}]");
        let outcome = execute(&mut scenario.ws, task, scenario.seed, &loc);
        let (verdict, data) = match outcome {
            Ok(r) => (r.verdict, r.data),
            Err(e) => (Verdict::Fail, json!({ "error": e.to_string() })),
        };
        match verdict {
            Verdict::Pass => summary.pass += 1,
            Verdict::Fail => summary.fail += 1,
            Verdict::Inconclusive => summary.inconclusive += 1,
        }
        records.push(TaskRecord {
            task: task.name().to_string(),
            inputs: serde_json::to_value(task).expect("task serializes"),
            verdict,
            data,
            wall_ms: timings.then(|| started.elapsed().as_millis() as u64),
        });
    }

    Report {
        tool: crate::report::TOOL,
        version: crate::report::VERSION,
        schema_version: crate::scenario::SCHEMA_VERSION,
        scenario: name,
        statement,
        field: scenario.field.to_string(),
        seed: scenario.seed,
        warnings: scenario.warnings.clone(),
        tasks: records,
        summary,
    }
}

fn execute(
    ws: &mut Workspace,
    task: &TaskSpec,
    scenario_seed: u64,
    loc: &str,
) -> Result<TaskResult, ScenarioError> {
    let core = |e: ptwist_core::Error| ScenarioError::from_core(loc, e);
    match task {
        TaskSpec::Classify { object, expect } => {
            let m = ws.module(object, loc)?;
            let c = classify(&m).map_err(core)?;
            let actual = match (&c.p_object, &c.spherical) {
                (Some(_), Some(_)) => "both",
                (Some(_), None) => "p_object",
                (None, Some(_)) => "spherical",
                (None, None) => "neither",
            };
            let reason = c.failure.map(|r| match r {
                ptwist_core::hom::FailureReason::RingStructure => "ring_structure",
                ptwist_core::hom::FailureReason::DimensionMismatch => "dimension_mismatch",
            });
            let verdict = match expect {
                None => Verdict::Pass,
                Some(ClassifyExpect {
                    verdict: want,
                    n,
                    d,
                    reason: want_reason,
                }) => pass_if(
                    want == actual
                        && n.map_or(true, |n| c.p_object.as_ref().is_some_and(|p| p.n == n))
                        && d.map_or(true, |d| c.spherical == Some(d))
                        && want_reason
                            .as_deref()
                            .map_or(true, |r| reason == Some(r)),
                ),
            };
            let mut data = json!({
                "dims": dims_value(&c.dims),
                "verdict": actual,
            });
            if let Some(p) = &c.p_object {
                data["n"] = json!(p.n);
                data["witness"] = morphism_value(&p.witness);
            }
            if let Some(d) = c.spherical {
                data["spherical_degree"] = json!(d);
            }
            if let Some(r) = reason {
                data["reason"] = json!(r);
            }
            Ok(TaskResult { verdict, data })
        }
        TaskSpec::ExtDims {
            source,
            target,
            expect,
        } => {
            let m = ws.module(source, loc)?;
            let n = ws.module(target, loc)?;
            let dims = ext_dims(&m, &n).map_err(core)?;
            Ok(TaskResult {
                verdict: check_dims(&dims, expect),
                data: json!({ "dims": dims_value(&dims) }),
            })
        }
        TaskSpec::CohomologyDims { object, expect } => {
            let m = ws.module(object, loc)?;
            let dims = module_cohomology_dims(&m);
            Ok(TaskResult {
                verdict: check_dims(&dims, expect),
                data: json!({ "dims": dims_value(&dims) }),
            })
        }
        TaskSpec::IsAcyclic { object, expect } => {
            let m = ws.module(object, loc)?;
            let v = is_acyclic(&m);
            Ok(TaskResult {
                verdict: match expect {
                    Some(ValueExpect { value }) => pass_if(*value == v),
                    None => Verdict::Pass,
                },
                data: json!({ "value": v }),
            })
        }
        TaskSpec::EulerChar { object, expect } => {
            let m = ws.module(object, loc)?;
            let v = euler_char(&m);
            Ok(TaskResult {
                verdict: match expect {
                    Some(ValueExpect { value }) => pass_if(*value == v),
                    None => Verdict::Pass,
                },
                data: json!({ "value": v }),
            })
        }
        TaskSpec::EulerPairing {
            left,
            right,
            expect,
        } => {
            let m = ws.module(left, loc)?;
            let n = ws.module(right, loc)?;
            let v = euler_pairing(&m, &n).map_err(core)?;
            Ok(TaskResult {
                verdict: match expect {
                    Some(ValueExpect { value }) => pass_if(*value == v),
                    None => Verdict::Pass,
                },
                data: json!({ "value": v }),
            })
        }
        TaskSpec::MinimalModel {
            object,
            store,
            expect,
        } => {
            let m = ws.module(object, loc)?;
            let res = minimal_model(&m).map_err(core)?;
            let degrees: Vec<i64> = res
                .module
                .generators()
                .iter()
                .map(|g| g.degree)
                .collect();
            let dzero = res
                .module
                .differential_entries()
                .iter()
                .all(|e| e.is_zero());
            let verdict = match expect {
                Some(MinimalExpect {
                    generator_degrees,
                    differential_is_zero,
                }) => {
                    let mut want = generator_degrees.clone();
                    let mut got = degrees.clone();
                    want.sort_unstable();
                    got.sort_unstable();
                    pass_if(want == got && (!differential_is_zero || dzero))
                }
                None => Verdict::Pass,
            };
            let log: Vec<Value> = res
                .log
                .iter()
                .map(|s| {
                    json!({
                        "removed_source": s.removed_source,
                        "removed_target": s.removed_target,
                        "pivot": s.pivot,
                    })
                })
                .collect();
            let data = json!({
                "generator_degrees": degrees,
                "differential_is_zero": dzero,
                "eliminations": log,
            });
            if let Some(name) = store {
                ws.store_module(name, res.module);
            }
            Ok(TaskResult { verdict, data })
        }
        TaskSpec::FindQuasiIso {
            source,
            target,
            seed,
            attempts,
            expect,
        } => {
            let m = ws.module(source, loc)?;
            let n = ws.module(target, loc)?;
            let seed = seed.unwrap_or(scenario_seed);
            let attempts = attempts.unwrap_or(64);
            let outcome = find_quasi_iso(&m, &n, seed, attempts).map_err(core)?;
            let (tag, data) = match &outcome {
                FindOutcome::Found(f) => (
                    "found",
                    json!({ "outcome": "found", "witness": morphism_value(f) }),
                ),
                FindOutcome::DimensionObstruction {
                    source_dims,
                    target_dims,
                } => (
                    "obstructed",
                    json!({
                        "outcome": "obstructed",
                        "source_dims": dims_value(source_dims),
                        "target_dims": dims_value(target_dims),
                        "note": "cohomology dimensions differ; provably not quasi-isomorphic",
                    }),
                ),
                FindOutcome::Inconclusive { attempts } => (
                    "inconclusive",
                    json!({
                        "outcome": "inconclusive",
                        "attempts": attempts,
                        "note": "no witness found; this is not a proof of inequivalence",
                    }),
                ),
            };
            let verdict = if tag == "inconclusive" {
                Verdict::Inconclusive
            } else {
                match expect {
                    Some(OutcomeExpect { outcome }) => pass_if(outcome == tag),
                    None => Verdict::Pass,
                }
            };
            Ok(TaskResult { verdict, data })
        }
        TaskSpec::SphericalTwist {
            twist_by,
            apply_to,
            store,
            expect,
        } => {
            let e = ws.module(twist_by, loc)?;
            let f = ws.module(apply_to, loc)?;
            let t = spherical_twist(&e, &f).map_err(core)?;
            finish_twist(ws, t, store, expect)
        }
        TaskSpec::PTwist {
            twist_by,
            witness,
            apply_to,
            store,
            expect,
        } => {
            let e = ws.module(twist_by, loc)?;
            let f = ws.module(apply_to, loc)?;
            let plan = ws.plan(&e, witness.as_deref(), loc)?;
            let t = p_twist(&plan, &f).map_err(core)?;
            finish_twist(ws, t, store, expect)
        }
        TaskSpec::DoubleTwist {
            twist_by,
            apply_to,
            store,
            expect,
        } => {
            let e = ws.module(twist_by, loc)?;
            let f = ws.module(apply_to, loc)?;
            let t = double_twist(&e, &f).map_err(core)?;
            finish_twist(ws, t, store, expect)
        }
        TaskSpec::AmbientProfile {
            object,
            witness,
            expect,
        } => {
            let m = ws.module(object, loc)?;
            let w = ws.witness_morphism(&m, witness.as_deref(), loc)?;
            let ambient = AmbientModel::new(&m, &w).map_err(core)?;
            let dims = ambient.ext_profile().map_err(core)?;
            Ok(TaskResult {
                verdict: check_dims(&dims, expect),
                data: json!({ "dims": dims_value(&dims) }),
            })
        }
        TaskSpec::LesOracle {
            object,
            witness,
            expect,
        } => {
            let m = ws.module(object, loc)?;
            let w = ws.witness_morphism(&m, witness.as_deref(), loc)?;
            let ring = ext_ring(&m).map_err(core)?;
            let endo = Morphism::new(&m, &m, 2, w.entries().to_vec()).map_err(core)?;
            let class = ring.class_of(&endo).map_err(core)?;
            let dims = les_oracle(&ring, &class).map_err(core)?;
            Ok(TaskResult {
                verdict: check_dims(&dims, expect),
                data: json!({ "dims": dims_value(&dims) }),
            })
        }
        TaskSpec::SphericalAfterPushforward {
            object,
            witness,
            expect,
        } => {
            let m = ws.module(object, loc)?;
            let w = ws.witness_morphism(&m, witness.as_deref(), loc)?;
            let report = spherical_after_pushforward(&m, &w).map_err(core)?;
            let verdict = match expect {
                Some(SphericalExpect { spherical }) => {
                    pass_if(report.profiles_agree && *spherical == report.spherical)
                }
                None => pass_if(report.profiles_agree),
            };
            Ok(TaskResult {
                verdict,
                data: json!({
                    "n": report.n,
                    "spherical": report.spherical,
                    "chain_profile": dims_value(&report.chain_profile),
                    "oracle_profile": dims_value(&report.oracle_profile),
                    "profiles_agree": report.profiles_agree,
                }),
            })
        }
        TaskSpec::EulerInvarianceSweep {
            twist_by,
            pool,
            samples,
            max_generators,
            expect,
        } => {
            let e = ws.module(twist_by, loc)?;
            let plan = ws.plan(&e, None, loc)?;
            let pool: Vec<ModuleRef> = pool
                .iter()
                .map(|r| ws.module(r, loc))
                .collect::<Result<_, _>>()?;
            let mut rng = ws.rng.clone();
            let out = sweeps::euler_invariance_sweep(
                &plan,
                &pool,
                *samples,
                max_generators.unwrap_or(3),
                &mut rng,
            )
            .map_err(core)?;
            ws.rng = rng;
            finish_sweep(out, expect)
        }
        TaskSpec::FullyFaithfulSweep {
            twist_by,
            samples,
            max_generators,
            expect,
        } => {
            let e = ws.module(twist_by, loc)?;
            let plan = ws.plan(&e, None, loc)?;
            let mut rng = ws.rng.clone();
            let out = sweeps::fully_faithful_sweep(
                &plan,
                *samples,
                max_generators.unwrap_or(2),
                &mut rng,
            )
            .map_err(core)?;
            ws.rng = rng;
            finish_sweep(out, expect)
        }
        TaskSpec::InvariantSweep {
            algebra,
            constructions,
            expect,
        } => {
            let a = ws.algebra(algebra)?;
            let mut rng = ws.rng.clone();
            let out = sweeps::invariant_sweep(&a, *constructions, &mut rng).map_err(core)?;
            ws.rng = rng;
            finish_sweep(out, expect)
        }
        TaskSpec::PushforwardIntertwine {} => unreachable!("rejected at validation"),
    }
}

fn finish_twist(
    ws: &mut Workspace,
    t: ModuleRef,
    store: &Option<String>,
    expect: &Option<DimsExpect>,
) -> Result<TaskResult, ScenarioError> {
    let dims = module_cohomology_dims(&t);
    let data = json!({
        "generators": t.rank(),
        "dims": dims_value(&dims),
    });
    let verdict = check_dims(&dims, expect);
    if let Some(name) = store {
        ws.store_module(name, t);
    }
    Ok(TaskResult { verdict, data })
}

fn finish_sweep(
    out: sweeps::SweepOutcome,
    expect: &Option<FailuresExpect>,
) -> Result<TaskResult, ScenarioError> {
    let verdict = match expect {
        Some(FailuresExpect { failures }) => pass_if(out.failures == *failures),
        None => pass_if(out.failures == 0),
    };
    Ok(TaskResult {
        verdict,
        data: json!({
            "samples": out.samples,
            "failures": out.failures,
            "details": out.details,
        }),
    })
}
