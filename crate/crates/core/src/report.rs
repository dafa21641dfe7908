//! JSON reports, versioned as [`SCHEMA`].
//!
//! A report is `{"schema", "command", "result"}`; a failure is
//! `{"schema", "error": {"kind", "message"}}`. Matrices appear as
//! `{"rows", "cols", "data"}` with one 0/1 string per row, complex matrices
//! as nested `[re, im]` arrays.

use serde_json::{json, Value};

use crate::csscode::CssCode;
use crate::error::Error;
use crate::f2linalg::{BitVec, F2Matrix};
use crate::protocols::{LogicalAction, SurgeryPlan};
use crate::simverify::ComplexMatrix;
use crate::surgery::{ExactSequenceReport, MergeResult};

pub const SCHEMA: &str = "chainsurg-report/1";

#[must_use]
pub fn envelope(command: &str, result: Value) -> Value {
    json!({ "schema": SCHEMA, "command": command, "result": result })
}

#[must_use]
pub fn error_report(kind: &str, message: &str) -> Value {
    json!({ "schema": SCHEMA, "error": { "kind": kind, "message": message } })
}

#[must_use]
pub fn domain_error(err: &Error) -> Value {
    error_report(err.kind(), &err.to_string())
}

#[must_use]
pub fn matrix(m: &F2Matrix) -> Value {
    serde_json::to_value(m).expect("matrices serialize")
}

fn vectors(vs: &[BitVec]) -> Value {
    vs.iter().map(ToString::to_string).collect()
}

#[must_use]
pub fn code_summary(code: &CssCode) -> Value {
    json!({
        "n": code.n(),
        "k": code.k(),
        "d": code.distance(),
        "x_checks": code.hx().nrows(),
        "z_checks": code.hz().nrows(),
        "z_logicals": vectors(code.z_logicals().representatives()),
        "x_logicals": vectors(code.x_logicals().representatives()),
    })
}

#[must_use]
pub fn merge_summary(m: &MergeResult) -> Value {
    let p = m.p();
    json!({
        "orientation": m.orientation().to_string(),
        "source_dims": m.source().dims(),
        "quotient_dims": m.quotient().dims(),
        "p": [matrix(p.component(0)), matrix(p.component(1)), matrix(p.component(2))],
        "merged_code": code_summary(&m.merged_code()),
    })
}

#[must_use]
pub fn analysis(r: &ExactSequenceReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

#[must_use]
pub fn channel(m: &ComplexMatrix) -> Value {
    m.to_json()
}

fn logical_action(a: &LogicalAction) -> Value {
    match a {
        LogicalAction::Prepare { index, state } => {
            json!({ "prepare": { "index": index, "state": format!("{state:?}") } })
        }
        LogicalAction::ZType(f) => json!({ "z_matrix": matrix(f) }),
        LogicalAction::XType(g) => json!({ "x_matrix": matrix(g) }),
        LogicalAction::Measure { index, orientation } => {
            json!({ "measure": { "index": index, "basis": orientation.to_string() } })
        }
    }
}

/// Compact plan listing: steps with code parameters, logical matrices,
/// physical ops and correction rules.
#[must_use]
pub fn plan_summary(plan: &SurgeryPlan) -> Value {
    let steps: Vec<Value> = plan
        .steps
        .iter()
        .map(|s| {
            json!({
                "kind": serde_json::to_value(&s.kind).expect("kinds serialize"),
                "before": [s.before.n(), s.before.k()],
                "after": [s.after.n(), s.after.k()],
                "logical": logical_action(&s.logical),
                "ops": serde_json::to_value(&s.ops).expect("ops serialize"),
            })
        })
        .collect();
    let corrections: Vec<Value> = plan
        .corrections
        .iter()
        .map(|r| {
            json!({
                "outcomes": r.outcomes,
                "after_step": r.after_step,
                "description": r.description,
                "pauli": r.pauli.to_string(),
            })
        })
        .collect();
    json!({
        "name": plan.name,
        "ancilla": plan.ancilla,
        "control": plan.control,
        "target": plan.target,
        "locality": plan.locality,
        "measurements": plan.measurement_count(),
        "steps": steps,
        "corrections": corrections,
    })
}
