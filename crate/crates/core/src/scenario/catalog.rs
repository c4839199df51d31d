use std::sync::OnceLock;

use serde::Deserialize;

use crate::domain::{Capability, Location};
use crate::error::{Error, Result};

/// The bundled Halle task catalog, as shipped.
pub const HALLE_CATALOG_JSON: &str = include_str!("../../data/halle_catalog.json");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityType {
    pub id: u32,
    pub label: String,
    /// 0-based capability index.
    pub capability: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogActivity {
    pub label: String,
    pub activity_type: u32,
    /// 0-based capability index.
    pub capability: usize,
    pub demand: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskCatalogEntry {
    pub task_id: u32,
    pub priority: u32,
    pub location: Location,
    pub activities: Vec<CatalogActivity>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub capabilities: Vec<Capability>,
    pub activity_types: Vec<ActivityType>,
    pub tasks: Vec<TaskCatalogEntry>,
}

impl Catalog {
    pub fn task(&self, task_id: u32) -> Option<&TaskCatalogEntry> {
        self.tasks.iter().find(|t| t.task_id == task_id)
    }

    pub fn num_activities(&self) -> usize {
        self.tasks.iter().map(|t| t.activities.len()).sum()
    }

    pub fn total_demand(&self) -> u64 {
        self.tasks
            .iter()
            .flat_map(|t| &t.activities)
            .map(|a| a.demand as u64)
            .sum()
    }

    pub fn capability_id(&self, label: &str) -> Option<usize> {
        self.capabilities.iter().position(|c| c.label == label)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawCatalog = crate::io::from_json_strict(text)?;
        if raw.schema_version != crate::io::SCHEMA_VERSION || raw.kind != "catalog" {
            return Err(Error::document("schema_version", "expected an svcp/1 catalog"));
        }
        let num_caps = raw.capabilities.len();
        for (i, c) in raw.capabilities.iter().enumerate() {
            if c.id as usize != i + 1 {
                return Err(Error::document(format!("capabilities[{i}].id"), "ids must be 1, 2, ..."));
            }
        }
        let cap_index = |path: String, id: u32| -> Result<usize> {
            if id == 0 || id as usize > num_caps {
                return Err(Error::document(path, format!("unknown capability {id}")));
            }
            Ok(id as usize - 1)
        };
        let mut activity_types = Vec::with_capacity(raw.activity_types.len());
        for (i, t) in raw.activity_types.into_iter().enumerate() {
            activity_types.push(ActivityType {
                id: t.id,
                label: t.label,
                capability: cap_index(format!("activity_types[{i}].capability"), t.capability)?,
            });
        }
        let mut tasks = Vec::with_capacity(raw.tasks.len());
        for (i, t) in raw.tasks.into_iter().enumerate() {
            let mut activities = Vec::with_capacity(t.activities.len());
            for (j, a) in t.activities.into_iter().enumerate() {
                let path = format!("tasks[{i}].activities[{j}]");
                let capability = cap_index(format!("{path}.capability"), a.capability)?;
                let ty = activity_types
                    .iter()
                    .find(|ty| ty.id == a.activity_type)
                    .ok_or_else(|| Error::document(format!("{path}.activity_type"), "unknown activity type"))?;
                if ty.capability != capability {
                    return Err(Error::document(
                        format!("{path}.capability"),
                        format!("activity type {} requires capability {}", ty.id, ty.capability + 1),
                    ));
                }
                if a.demand == 0 {
                    return Err(Error::document(format!("{path}.demand"), "demand must be positive"));
                }
                activities.push(CatalogActivity {
                    label: a.label,
                    activity_type: a.activity_type,
                    capability,
                    demand: a.demand,
                });
            }
            tasks.push(TaskCatalogEntry {
                task_id: t.task_id,
                priority: t.priority,
                location: Location::new(t.location_m[0], t.location_m[1]),
                activities,
            });
        }
        Ok(Catalog {
            capabilities: raw
                .capabilities
                .into_iter()
                .map(|c| Capability { label: c.label })
                .collect(),
            activity_types,
            tasks,
        })
    }
}

pub fn halle_catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| Catalog::from_json(HALLE_CATALOG_JSON).expect("bundled catalog is valid"))
}

#[derive(Deserialize)]
struct RawCatalog {
    schema_version: String,
    kind: String,
    capabilities: Vec<RawCapability>,
    activity_types: Vec<RawActivityType>,
    tasks: Vec<RawTask>,
}

#[derive(Deserialize)]
struct RawCapability {
    id: u32,
    label: String,
}

#[derive(Deserialize)]
struct RawActivityType {
    id: u32,
    label: String,
    capability: u32,
}

#[derive(Deserialize)]
struct RawTask {
    task_id: u32,
    priority: u32,
    location_m: [i64; 2],
    activities: Vec<RawActivity>,
}

#[derive(Deserialize)]
struct RawActivity {
    label: String,
    activity_type: u32,
    capability: u32,
    demand: u32,
}
