use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    check_header, from_json, mask_to_runs, pair_to_ratio, ratio_to_pair, runs_to_mask, to_document_json, utf8,
    SCHEMA_VERSION,
};
use crate::domain::{
    validate_instance, Capability, CarryIn, Constants, Horizon, Instance, Location, PastRun, PriorityStructure,
    TaskActivity, Volunteer,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReadOptions {
    /// Reject fields the format does not define.
    pub strict: bool,
}

impl Default for ReadOptions {
    fn default() -> Self {
        Self { strict: true }
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct InstanceDoc {
    schema_version: String,
    kind: String,
    horizon: HorizonDoc,
    constants: ConstantsDoc,
    priority: PriorityDoc,
    capabilities: Vec<CapabilityDoc>,
    volunteers: Vec<VolunteerDoc>,
    activities: Vec<ActivityDoc>,
    #[serde(default)]
    prior_assignments: Vec<[usize; 4]>,
}

#[derive(Serialize, Deserialize)]
struct HorizonDoc {
    num_slots: usize,
    slot_minutes: u32,
}

#[derive(Serialize, Deserialize)]
struct ConstantsDoc {
    tau_min: u32,
    tau_max: u32,
    travel_speed_kmh: [i64; 2],
    /// Defaults to `w_t = 1 - (t-1)/T` when absent.
    #[serde(default)]
    weights: Option<Vec<[i64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct PriorityDoc {
    levels: u32,
    classes: Vec<Vec<u32>>,
    #[serde(default)]
    sigma: Vec<SigmaDoc>,
}

#[derive(Serialize, Deserialize)]
struct SigmaDoc {
    levels: [u32; 2],
    value: [i64; 2],
}

#[derive(Serialize, Deserialize)]
struct CapabilityDoc {
    id: usize,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct VolunteerDoc {
    id: usize,
    capabilities: Vec<usize>,
    availability: Vec<[usize; 2]>,
    initial_travel: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    travel_overrides: Vec<TravelOverrideDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    carry_in: Option<CarryInDoc>,
}

#[derive(Serialize, Deserialize)]
struct TravelOverrideDoc {
    activity: usize,
    slots: u32,
}

#[derive(Serialize, Deserialize)]
struct CarryInDoc {
    worked_slots: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    last_run: Option<PastRunDoc>,
}

#[derive(Serialize, Deserialize)]
struct PastRunDoc {
    activity: usize,
    length: u32,
    idle_slots: u32,
}

#[derive(Serialize, Deserialize)]
struct ActivityDoc {
    id: usize,
    task_id: u32,
    label: String,
    capability: usize,
    priority: u32,
    demand: u32,
    location_m: [i64; 2],
    window: Vec<[usize; 2]>,
}

pub fn write_instance(instance: &Instance) -> Vec<u8> {
    to_document_json(&to_doc(instance))
}

pub(crate) fn to_doc(instance: &Instance) -> InstanceDoc {
    let caps_of = |mask: &[bool]| -> Vec<usize> {
        mask.iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(c, _)| c + 1)
            .collect()
    };
    InstanceDoc {
        schema_version: SCHEMA_VERSION.into(),
        kind: "instance".into(),
        horizon: HorizonDoc {
            num_slots: instance.horizon.num_slots,
            slot_minutes: instance.horizon.slot_minutes,
        },
        constants: ConstantsDoc {
            tau_min: instance.constants.tau_min,
            tau_max: instance.constants.tau_max,
            travel_speed_kmh: ratio_to_pair(instance.constants.travel_speed_kmh),
            weights: Some(instance.constants.weights.iter().map(|&w| ratio_to_pair(w)).collect()),
        },
        priority: PriorityDoc {
            levels: instance.priorities.levels,
            classes: instance.priorities.classes.clone(),
            sigma: instance
                .priorities
                .sigma
                .iter()
                .map(|(&p, &s)| SigmaDoc {
                    levels: [p, p + 1],
                    value: ratio_to_pair(s),
                })
                .collect(),
        },
        capabilities: instance
            .capabilities
            .iter()
            .enumerate()
            .map(|(i, c)| CapabilityDoc {
                id: i + 1,
                label: c.label.clone(),
            })
            .collect(),
        volunteers: instance
            .volunteers
            .iter()
            .enumerate()
            .map(|(i, v)| VolunteerDoc {
                id: i + 1,
                capabilities: caps_of(&v.capabilities),
                availability: mask_to_runs(&v.availability),
                initial_travel: v.initial_travel,
                travel_overrides: v
                    .travel_overrides
                    .iter()
                    .map(|(&a, &s)| TravelOverrideDoc {
                        activity: a + 1,
                        slots: s,
                    })
                    .collect(),
                carry_in: (v.carry_in != CarryIn::default()).then(|| CarryInDoc {
                    worked_slots: v.carry_in.worked_slots,
                    last_run: v.carry_in.last_run.map(|p| PastRunDoc {
                        activity: p.activity + 1,
                        length: p.length,
                        idle_slots: p.idle_slots,
                    }),
                }),
            })
            .collect(),
        activities: instance
            .activities
            .iter()
            .enumerate()
            .map(|(i, a)| ActivityDoc {
                id: i + 1,
                task_id: a.task_id,
                label: a.label.clone(),
                capability: a.capability + 1,
                priority: a.priority,
                demand: a.demand,
                location_m: [a.location.x_m, a.location.y_m],
                window: mask_to_runs(&a.window),
            })
            .collect(),
        prior_assignments: instance
            .prior
            .runs()
            .into_iter()
            .map(|r| [r.volunteer + 1, r.activity + 1, r.start + 1, r.end + 1])
            .collect(),
    }
}

/// Parses and validates an instance document, strictly.
pub fn read_instance(bytes: &[u8]) -> Result<Instance> {
    read_instance_with(bytes, ReadOptions::default())
}

pub fn read_instance_with(bytes: &[u8], options: ReadOptions) -> Result<Instance> {
    let doc: InstanceDoc = from_json(utf8(bytes)?, options.strict)?;
    let instance = from_doc(doc)?;
    if let Some(defect) = validate_instance(&instance).into_iter().next() {
        return Err(Error::document(defect.path(), defect.to_string()));
    }
    Ok(instance)
}

fn check_ids(ids: impl Iterator<Item = usize>, path: &str) -> Result<()> {
    for (i, id) in ids.enumerate() {
        if id != i + 1 {
            return Err(Error::document(
                format!("{path}[{i}].id"),
                format!("expected id {}, found {id}", i + 1),
            ));
        }
    }
    Ok(())
}

pub(crate) fn from_doc(doc: InstanceDoc) -> Result<Instance> {
    check_header(&doc.schema_version, &doc.kind, "instance")?;
    let slots = doc.horizon.num_slots;
    let num_caps = doc.capabilities.len();
    let num_acts = doc.activities.len();
    check_ids(doc.capabilities.iter().map(|c| c.id), "capabilities")?;
    check_ids(doc.volunteers.iter().map(|v| v.id), "volunteers")?;
    check_ids(doc.activities.iter().map(|a| a.id), "activities")?;

    let weights = match &doc.constants.weights {
        Some(ws) => ws
            .iter()
            .enumerate()
            .map(|(i, &w)| pair_to_ratio(w, &format!("constants.weights[{i}]")))
            .collect::<Result<Vec<_>>>()?,
        None => crate::domain::default_weights(slots),
    };
    let constants = Constants {
        tau_min: doc.constants.tau_min,
        tau_max: doc.constants.tau_max,
        travel_speed_kmh: pair_to_ratio(doc.constants.travel_speed_kmh, "constants.travel_speed_kmh")?,
        weights,
    };

    let mut sigma = BTreeMap::new();
    for (i, s) in doc.priority.sigma.iter().enumerate() {
        let path = format!("priority.sigma[{i}]");
        let [p, q] = s.levels;
        if q != p + 1 {
            return Err(Error::document(
                format!("{path}.levels"),
                format!("levels {p} and {q} are not adjacent in increasing order"),
            ));
        }
        if sigma.insert(p, pair_to_ratio(s.value, &format!("{path}.value"))?).is_some() {
            return Err(Error::document(path, format!("duplicate sigma for levels {p} and {q}")));
        }
    }
    let priorities = PriorityStructure {
        levels: doc.priority.levels,
        classes: doc.priority.classes,
        sigma,
    };

    let cap_index = |id: usize, path: String| -> Result<usize> {
        if id == 0 || id > num_caps {
            return Err(Error::document(path, format!("unknown capability {id}")));
        }
        Ok(id - 1)
    };
    let act_index = |id: usize, path: String| -> Result<usize> {
        if id == 0 || id > num_acts {
            return Err(Error::document(path, format!("unknown activity {id}")));
        }
        Ok(id - 1)
    };

    let mut volunteers = Vec::with_capacity(doc.volunteers.len());
    for (i, v) in doc.volunteers.into_iter().enumerate() {
        let path = format!("volunteers[{i}]");
        let mut caps = vec![false; num_caps];
        for (j, &c) in v.capabilities.iter().enumerate() {
            caps[cap_index(c, format!("{path}.capabilities[{j}]"))?] = true;
        }
        let availability = runs_to_mask(&v.availability, slots, &format!("{path}.availability"))?;
        let mut vol = Volunteer::new(caps, availability, v.initial_travel);
        for (j, o) in v.travel_overrides.iter().enumerate() {
            let a = act_index(o.activity, format!("{path}.travel_overrides[{j}].activity"))?;
            vol.travel_overrides.insert(a, o.slots);
        }
        if let Some(c) = v.carry_in {
            let last_run = match c.last_run {
                Some(p) => Some(PastRun {
                    activity: act_index(p.activity, format!("{path}.carry_in.last_run.activity"))?,
                    length: p.length,
                    idle_slots: p.idle_slots,
                }),
                None => None,
            };
            vol.carry_in = CarryIn {
                worked_slots: c.worked_slots,
                last_run,
            };
        }
        volunteers.push(vol);
    }

    let mut activities = Vec::with_capacity(num_acts);
    for (i, a) in doc.activities.into_iter().enumerate() {
        let path = format!("activities[{i}]");
        activities.push(TaskActivity {
            task_id: a.task_id,
            label: a.label,
            capability: cap_index(a.capability, format!("{path}.capability"))?,
            priority: a.priority,
            demand: a.demand,
            window: runs_to_mask(&a.window, slots, &format!("{path}.window"))?,
            location: Location::new(a.location_m[0], a.location_m[1]),
        });
    }

    let mut instance = Instance::new(
        Horizon {
            num_slots: slots,
            slot_minutes: doc.horizon.slot_minutes,
        },
        doc.capabilities
            .into_iter()
            .map(|c| Capability { label: c.label })
            .collect(),
        volunteers,
        activities,
        priorities,
        constants,
    );
    instance.prior = super::assignment::runs_to_assignment(
        &doc.prior_assignments,
        (instance.num_volunteers(), num_acts, slots),
        "prior_assignments",
    )?;
    Ok(instance)
}
