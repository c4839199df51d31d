//! Seeded scenario generation over the Halle catalog and the rolling
//! horizon driver.

mod catalog;
mod rolling;
pub mod synthetic;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

pub use catalog::{halle_catalog, ActivityType, Catalog, CatalogActivity, TaskCatalogEntry, HALLE_CATALOG_JSON};
pub use rolling::{roll_horizon, roll_horizon_with, InstanceOutcome, RollingResult, RollingState};

use crate::domain::Constants;
use crate::error::{Error, Result};
use crate::rational::SmallRatio;

pub const VOLUNTEER_LEVELS: [u32; 2] = [5000, 10000];
pub const ADDED_TASK_LEVELS: [u32; 2] = [1, 2];
pub const CAPABILITY_PROBABILITY_LEVELS: [f64; 2] = [0.3, 0.5];
pub const LAMBDA_LEVELS: [u32; 2] = [7, 11];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub max_volunteers: u32,
    pub added_tasks_per_instance: u32,
    pub capability_probability: f64,
    pub arrival_lambda: u32,
    /// Multiplier on `arrival_lambda` giving the mean arrivals per decision
    /// interval, as `[num, den]`.
    pub arrival_scale: [i64; 2],
    pub seed: u64,
    pub num_instances: u32,
    pub decision_interval_slots: u32,
    /// Catalog tasks present in the first instance.
    pub initial_tasks: u32,
    pub num_slots: u32,
    pub slot_minutes: u32,
    pub initial_travel_slots: u32,
    /// Reduced-scale ceiling on the pool, below `max_volunteers`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volunteer_cap: Option<u32>,
}

impl ScenarioConfig {
    /// Defaults around the given factor levels.
    pub fn new(max_volunteers: u32, added_tasks: u32, capability_probability: f64, lambda: u32, seed: u64) -> Self {
        Self {
            max_volunteers,
            added_tasks_per_instance: added_tasks,
            capability_probability,
            arrival_lambda: lambda,
            arrival_scale: [30, 1],
            seed,
            num_instances: 20,
            decision_interval_slots: 1,
            initial_tasks: 8,
            num_slots: 48,
            slot_minutes: 30,
            initial_travel_slots: 2,
            volunteer_cap: None,
        }
    }

    /// Row `id` (1..=16) of the full factorial design.
    pub fn design(id: u32, seed: u64) -> Result<Self> {
        if !(1..=16).contains(&id) {
            return Err(Error::input(format!("scenario id {id} is outside 1..=16")));
        }
        let bits = id - 1;
        Ok(Self::new(
            VOLUNTEER_LEVELS[(bits >> 3 & 1) as usize],
            ADDED_TASK_LEVELS[(bits >> 2 & 1) as usize],
            CAPABILITY_PROBABILITY_LEVELS[(bits >> 1 & 1) as usize],
            LAMBDA_LEVELS[(bits & 1) as usize],
            seed,
        ))
    }

    /// Design row matching the factor levels, if they are all standard.
    pub fn design_id(&self) -> Option<u32> {
        let v = VOLUNTEER_LEVELS.iter().position(|&x| x == self.max_volunteers)?;
        let k = ADDED_TASK_LEVELS.iter().position(|&x| x == self.added_tasks_per_instance)?;
        let p = CAPABILITY_PROBABILITY_LEVELS
            .iter()
            .position(|&x| x == self.capability_probability)?;
        let l = LAMBDA_LEVELS.iter().position(|&x| x == self.arrival_lambda)?;
        Some(((v << 3) | (k << 2) | (p << 1) | l) as u32 + 1)
    }

    pub fn arrival_scale(&self) -> SmallRatio {
        SmallRatio::new(self.arrival_scale[0], self.arrival_scale[1])
    }

    /// Mean of the arrival distribution per decision interval.
    pub fn arrival_mean(&self) -> f64 {
        self.arrival_lambda as f64 * self.arrival_scale[0] as f64 / self.arrival_scale[1] as f64
    }

    pub fn constants(&self) -> Constants {
        Constants::halle(self.num_slots as usize)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::input(m.to_string()));
        if self.num_instances == 0 {
            return bad("num_instances must be at least 1");
        }
        if self.decision_interval_slots == 0 {
            return bad("decision_interval_slots must be at least 1");
        }
        if self.arrival_scale[0] <= 0 || self.arrival_scale[1] <= 0 {
            return bad("arrival_scale must be positive");
        }
        if !(0.0..=1.0).contains(&self.capability_probability) {
            return bad("capability_probability must lie in [0, 1]");
        }
        if self.num_slots == 0 || self.slot_minutes == 0 {
            return bad("the horizon must have at least one slot of positive length");
        }
        if self.constants().tau_max as usize > self.num_slots as usize {
            return bad("num_slots is shorter than the working-time cap");
        }
        Ok(())
    }

    /// Largest pool the scenario may reach.
    pub fn pool_limit(&self) -> u32 {
        self.volunteer_cap.map_or(self.max_volunteers, |c| c.min(self.max_volunteers))
    }

    /// First slot of instance `i`'s window on the scenario clock.
    pub fn window_start(&self, i: u32) -> u64 {
        i as u64 * self.decision_interval_slots as u64
    }

    /// Minutes from the first window's start to the last window's end.
    pub fn span_minutes(&self) -> u64 {
        (self.window_start(self.num_instances - 1) + self.num_slots as u64) * self.slot_minutes as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioVolunteer {
    /// Instance at which the volunteer joins the pool.
    pub arrival_instance: u32,
    /// 0-based capability indices.
    pub capabilities: Vec<usize>,
    /// Available scenario-clock slots, inclusive.
    pub available_from: u64,
    pub available_until: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    /// Volunteers in arrival order.
    pub volunteers: Vec<ScenarioVolunteer>,
    /// Catalog task ids released at each instance.
    pub task_arrivals: Vec<Vec<u32>>,
}

impl Scenario {
    pub fn num_instances(&self) -> usize {
        self.task_arrivals.len()
    }

    /// Volunteers in the pool at instance `i`.
    pub fn pool_size(&self, i: u32) -> usize {
        self.volunteers.partition_point(|v| v.arrival_instance <= i)
    }

    /// Tasks released up to and including instance `i`.
    pub fn tasks_up_to(&self, i: u32) -> impl Iterator<Item = u32> + '_ {
        self.task_arrivals[..=i as usize].iter().flatten().copied()
    }
}

/// Volunteers arriving in one decision interval: Poisson with mean
/// `lambda * kappa`, clamped to the remaining capacity.
pub fn sample_arrivals(lambda: f64, kappa: f64, remaining_capacity: u64, rng: &mut impl Rng) -> Result<u64> {
    if remaining_capacity == 0 {
        return Ok(0);
    }
    let mean = lambda * kappa;
    if mean == 0.0 {
        return Ok(0);
    }
    let poisson = Poisson::new(mean).map_err(|e| Error::input(format!("arrival mean {mean}: {e}")))?;
    let draw: f64 = poisson.sample(rng);
    Ok((draw as u64).min(remaining_capacity))
}

/// A volunteer joining at instance `arrival_instance`: each capability
/// with the configured probability, available from the window start for a
/// uniform number of slots in `tau_min..=T`.
pub fn sample_volunteer(
    config: &ScenarioConfig,
    num_capabilities: usize,
    arrival_instance: u32,
    rng: &mut impl Rng,
) -> ScenarioVolunteer {
    let capabilities = (0..num_capabilities)
        .filter(|_| rng.random_bool(config.capability_probability))
        .collect();
    let duration = rng.random_range(config.constants().tau_min as u64..=config.num_slots as u64);
    let start = config.window_start(arrival_instance);
    ScenarioVolunteer {
        arrival_instance,
        capabilities,
        available_from: start,
        available_until: start + duration - 1,
    }
}

pub fn generate_scenario(config: &ScenarioConfig) -> Result<Scenario> {
    generate_scenario_from(config, halle_catalog())
}

pub fn generate_scenario_from(config: &ScenarioConfig, catalog: &Catalog) -> Result<Scenario> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let num_caps = catalog.capabilities.len();

    let mut unused = catalog.tasks.iter().map(|t| t.task_id);
    let mut task_arrivals = Vec::with_capacity(config.num_instances as usize);
    let mut volunteers = Vec::new();
    for i in 0..config.num_instances {
        let take = if i == 0 {
            config.initial_tasks
        } else {
            config.added_tasks_per_instance
        };
        task_arrivals.push(unused.by_ref().take(take as usize).collect());

        let remaining = (config.pool_limit() as u64).saturating_sub(volunteers.len() as u64);
        let arrivals = sample_arrivals(
            config.arrival_lambda as f64,
            config.arrival_scale[0] as f64 / config.arrival_scale[1] as f64,
            remaining,
            &mut rng,
        )?;
        for _ in 0..arrivals {
            volunteers.push(sample_volunteer(config, num_caps, i, &mut rng));
        }
    }
    Ok(Scenario {
        config: config.clone(),
        volunteers,
        task_arrivals,
    })
}
