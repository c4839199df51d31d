use serde::{Deserialize, Serialize};

use super::{check_header, from_json_strict, to_document_json, utf8, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::scenario::{Scenario, ScenarioConfig, ScenarioVolunteer};

#[derive(Serialize, Deserialize)]
struct ScenarioDoc {
    schema_version: String,
    kind: String,
    /// Row of the factorial design, when the factors match one.
    scenario_id: Option<u32>,
    config: ScenarioConfig,
    span_minutes: u64,
    /// Catalog task ids released at each instance.
    task_arrivals: Vec<Vec<u32>>,
    volunteers: Vec<VolunteerDoc>,
}

#[derive(Serialize, Deserialize)]
struct VolunteerDoc {
    id: usize,
    arrival_instance: u32,
    capabilities: Vec<usize>,
    /// Inclusive 1-based slots on the scenario clock.
    available: [u64; 2],
}

pub fn write_scenario(scenario: &Scenario) -> Vec<u8> {
    to_document_json(&ScenarioDoc {
        schema_version: SCHEMA_VERSION.into(),
        kind: "scenario".into(),
        scenario_id: scenario.config.design_id(),
        config: scenario.config.clone(),
        span_minutes: scenario.config.span_minutes(),
        task_arrivals: scenario.task_arrivals.clone(),
        volunteers: scenario
            .volunteers
            .iter()
            .enumerate()
            .map(|(i, v)| VolunteerDoc {
                id: i + 1,
                arrival_instance: v.arrival_instance + 1,
                capabilities: v.capabilities.iter().map(|c| c + 1).collect(),
                available: [v.available_from + 1, v.available_until + 1],
            })
            .collect(),
    })
}

pub fn read_scenario(bytes: &[u8]) -> Result<Scenario> {
    let doc: ScenarioDoc = from_json_strict(utf8(bytes)?)?;
    check_header(&doc.schema_version, &doc.kind, "scenario")?;
    let config = doc.config;
    config.validate().map_err(|e| Error::document("config", e.to_string()))?;
    if doc.span_minutes != config.span_minutes() {
        return Err(Error::document(
            "span_minutes",
            format!("config implies {} minutes, found {}", config.span_minutes(), doc.span_minutes),
        ));
    }
    if doc.task_arrivals.len() != config.num_instances as usize {
        return Err(Error::document(
            "task_arrivals",
            format!("expected {} entries, found {}", config.num_instances, doc.task_arrivals.len()),
        ));
    }
    let catalog = crate::scenario::halle_catalog();
    let mut seen = std::collections::BTreeSet::new();
    for (i, ids) in doc.task_arrivals.iter().enumerate() {
        for &id in ids {
            if catalog.task(id).is_none() || !seen.insert(id) {
                return Err(Error::document(
                    format!("task_arrivals[{i}]"),
                    format!("task {id} is unknown or repeated"),
                ));
            }
        }
    }
    let num_caps = catalog.capabilities.len();
    let mut volunteers = Vec::with_capacity(doc.volunteers.len());
    let mut last_arrival = 0;
    for (i, v) in doc.volunteers.into_iter().enumerate() {
        let path = format!("volunteers[{i}]");
        if v.id != i + 1 {
            return Err(Error::document(format!("{path}.id"), format!("expected id {}", i + 1)));
        }
        if v.arrival_instance == 0 || v.arrival_instance > config.num_instances || v.arrival_instance < last_arrival {
            return Err(Error::document(
                format!("{path}.arrival_instance"),
                "arrivals must be in instance order and within the scenario",
            ));
        }
        last_arrival = v.arrival_instance;
        if v.capabilities.iter().any(|&c| c == 0 || c > num_caps) {
            return Err(Error::document(format!("{path}.capabilities"), "unknown capability"));
        }
        let [from, until] = v.available;
        if from == 0 || from > until {
            return Err(Error::document(format!("{path}.available"), "empty availability"));
        }
        volunteers.push(ScenarioVolunteer {
            arrival_instance: v.arrival_instance - 1,
            capabilities: v.capabilities.iter().map(|c| c - 1).collect(),
            available_from: from - 1,
            available_until: until - 1,
        });
    }
    if volunteers.len() > config.pool_limit() as usize {
        return Err(Error::document("volunteers", "more volunteers than the pool limit"));
    }
    Ok(Scenario {
        config,
        volunteers,
        task_arrivals: doc.task_arrivals,
    })
}
