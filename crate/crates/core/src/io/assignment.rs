use serde::{Deserialize, Serialize};

use super::{check_header, from_json_strict, to_document_json, utf8, SCHEMA_VERSION};
use crate::domain::{Assignment, Instance};
use crate::error::{Error, Result};
use crate::heuristic::{StepOutcome, TraceStep};

#[derive(Serialize, Deserialize)]
struct AssignmentDoc {
    schema_version: String,
    kind: String,
    volunteers: usize,
    activities: usize,
    slots: usize,
    /// `[volunteer, activity, first slot, last slot]`.
    runs: Vec<[usize; 4]>,
}

pub fn write_assignment(x: &Assignment) -> Vec<u8> {
    let (v, a, t) = x.dims();
    to_document_json(&AssignmentDoc {
        schema_version: SCHEMA_VERSION.into(),
        kind: "assignment".into(),
        volunteers: v,
        activities: a,
        slots: t,
        runs: x
            .runs()
            .into_iter()
            .map(|r| [r.volunteer + 1, r.activity + 1, r.start + 1, r.end + 1])
            .collect(),
    })
}

/// Reads an assignment for `instance`, rejecting overlapping runs and runs
/// shorter than the minimum duration.
pub fn read_assignment(bytes: &[u8], instance: &Instance) -> Result<Assignment> {
    let doc: AssignmentDoc = from_json_strict(utf8(bytes)?)?;
    check_header(&doc.schema_version, &doc.kind, "assignment")?;
    let want = (instance.num_volunteers(), instance.num_activities(), instance.num_slots());
    if (doc.volunteers, doc.activities, doc.slots) != want {
        return Err(Error::document(
            "",
            format!(
                "assignment is {}x{}x{} but the instance is {}x{}x{}",
                doc.volunteers, doc.activities, doc.slots, want.0, want.1, want.2
            ),
        ));
    }
    let x = runs_to_assignment(&doc.runs, want, "runs")?;
    let tau_min = instance.constants.tau_min as usize;
    for v in 0..want.0 {
        let past = instance.volunteers[v].carry_in.last_run;
        for run in x.volunteer_runs(v) {
            let carried = match past {
                Some(p) if run.start == 0 && p.idle_slots == 0 && p.activity == run.activity => p.length as usize,
                _ => 0,
            };
            if run.len() + carried < tau_min {
                return Err(Error::document(
                    "runs",
                    format!(
                        "run [{}, {}, {}, {}] is shorter than the minimum of {tau_min} slots",
                        run.volunteer + 1,
                        run.activity + 1,
                        run.start + 1,
                        run.end + 1
                    ),
                ));
            }
        }
    }
    Ok(x)
}

pub(crate) fn runs_to_assignment(runs: &[[usize; 4]], dims: (usize, usize, usize), path: &str) -> Result<Assignment> {
    let (nv, na, nt) = dims;
    let mut x = Assignment::new(nv, na, nt);
    // Per volunteer and slot, the index of the run covering it.
    let mut owner: Vec<Option<usize>> = vec![None; nv * nt];
    for (i, &[v, a, s, e]) in runs.iter().enumerate() {
        let at = format!("{path}[{i}]");
        if v == 0 || v > nv {
            return Err(Error::document(at, format!("unknown volunteer {v}")));
        }
        if a == 0 || a > na {
            return Err(Error::document(at, format!("unknown activity {a}")));
        }
        if s == 0 || s > e || e > nt {
            return Err(Error::document(at, format!("slot run [{s}, {e}] is not within 1..={nt}")));
        }
        for t in s - 1..e {
            let cell = &mut owner[(v - 1) * nt + t];
            if let Some(j) = *cell {
                let [ov, oa, os, oe] = runs[j];
                return Err(Error::document(
                    at,
                    format!("runs [{ov}, {oa}, {os}, {oe}] and [{v}, {a}, {s}, {e}] overlap"),
                ));
            }
            *cell = Some(i);
            x.set(v - 1, a - 1, t);
        }
    }
    Ok(x)
}

#[derive(Serialize)]
struct TraceRecord {
    iteration: u64,
    class: usize,
    activity: usize,
    slot: usize,
    evaluations: u64,
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    volunteer: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    start: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    end: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    saturated: Option<usize>,
}

/// One JSON object per line and step, with 1-based ids and slots.
pub fn write_trace(trace: &[TraceStep]) -> Vec<u8> {
    let mut out = Vec::new();
    for step in trace {
        let (outcome, volunteer, start, end, saturated) = match step.outcome {
            StepOutcome::Assigned {
                volunteer,
                start,
                end,
                saturated,
            } => ("assigned", Some(volunteer + 1), Some(start + 1), Some(end + 1), Some(saturated)),
            StepOutcome::Removed => ("removed", None, None, None, None),
        };
        let rec = TraceRecord {
            iteration: step.iteration + 1,
            class: step.class,
            activity: step.activity + 1,
            slot: step.slot + 1,
            evaluations: step.evaluations,
            outcome,
            volunteer,
            start,
            end,
            saturated,
        };
        serde_json::to_writer(&mut out, &rec).expect("trace records serialize");
        out.push(b'\n');
    }
    out
}
