use super::{Constants, Horizon, Instance, TaskActivity};

/// Slots needed to travel between two activities:
/// `ceil(distance_km / speed_kmh * 60 / slot_minutes)`, computed exactly.
pub fn travel_slots(a: &TaskActivity, b: &TaskActivity, horizon: &Horizon, constants: &Constants) -> u32 {
    let dx = (a.location.x_m - b.location.x_m) as i128;
    let dy = (a.location.y_m - b.location.y_m) as i128;
    let dist_sq = dx * dx + dy * dy;
    if dist_sq == 0 {
        return 0;
    }
    let speed = constants.travel_speed_kmh;
    // k slots cover k * per_slot metres, per_slot = P / Q
    let p = *speed.numer() as i128 * horizon.slot_minutes as i128 * 1000;
    let q = 60 * *speed.denom() as i128;
    let target = q * q * dist_sq;
    let covers = |k: i128| (k * p) * (k * p) >= target;
    let mut k = ((dist_sq as f64).sqrt() * q as f64 / p as f64).ceil() as i128;
    k = k.max(0);
    while k > 0 && covers(k - 1) {
        k -= 1;
    }
    while !covers(k) {
        k += 1;
    }
    k as u32
}

/// Pairwise `s[a][a']` for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TravelTable {
    n: usize,
    slots: Vec<u32>,
}

impl TravelTable {
    pub fn new(instance: &Instance) -> Self {
        let n = instance.activities.len();
        let mut slots = vec![0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let s = travel_slots(
                    &instance.activities[i],
                    &instance.activities[j],
                    &instance.horizon,
                    &instance.constants,
                );
                slots[i * n + j] = s;
                slots[j * n + i] = s;
            }
        }
        Self { n, slots }
    }

    #[inline]
    pub fn get(&self, from: usize, to: usize) -> u32 {
        self.slots[from * self.n + to]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Location;
    use crate::rational::SmallRatio;
    use proptest::prelude::*;

    fn at(x_m: i64, y_m: i64) -> TaskActivity {
        TaskActivity {
            task_id: 1,
            label: String::new(),
            capability: 0,
            priority: 1,
            demand: 1,
            window: vec![true; 4],
            location: Location::new(x_m, y_m),
        }
    }

    fn env() -> (Horizon, Constants) {
        (Horizon::new(48), Constants::halle(48))
    }

    #[test]
    fn worked_examples() {
        let (h, c) = env();
        assert_eq!(travel_slots(&at(0, 0), &at(0, 0), &h, &c), 0);
        // 5 km at 10 km/h is exactly one 30-minute slot
        assert_eq!(travel_slots(&at(0, 0), &at(5000, 0), &h, &c), 1);
        assert_eq!(travel_slots(&at(0, 0), &at(3000, 4000), &h, &c), 1);
        // 5.1 km is 30.6 minutes
        assert_eq!(travel_slots(&at(0, 0), &at(5100, 0), &h, &c), 2);
        assert_eq!(travel_slots(&at(0, 0), &at(1, 0), &h, &c), 1);
    }

    #[test]
    fn fractional_speed() {
        let (h, mut c) = env();
        c.travel_speed_kmh = SmallRatio::new(15, 2);
        // 3.75 km per slot
        assert_eq!(travel_slots(&at(0, 0), &at(3750, 0), &h, &c), 1);
        assert_eq!(travel_slots(&at(0, 0), &at(3751, 0), &h, &c), 2);
    }

    proptest! {
        #[test]
        fn symmetric_and_near_triangle(
            p in (0i64..20_000, 0i64..20_000),
            q in (0i64..20_000, 0i64..20_000),
            r in (0i64..20_000, 0i64..20_000),
        ) {
            let (h, c) = env();
            let (a, b, d) = (at(p.0, p.1), at(q.0, q.1), at(r.0, r.1));
            let ab = travel_slots(&a, &b, &h, &c);
            prop_assert_eq!(ab, travel_slots(&b, &a, &h, &c));
            let ad = travel_slots(&a, &d, &h, &c);
            let bd = travel_slots(&b, &d, &h, &c);
            prop_assert!(ad <= ab + bd + 1);
            // agrees with a floating-point estimate away from slot boundaries
            let km = (((p.0 - q.0) as f64).powi(2) + ((p.1 - q.1) as f64).powi(2)).sqrt() / 1000.0;
            let est = km / 10.0 * 2.0;
            if (est - est.round()).abs() > 1e-6 {
                prop_assert_eq!(ab as f64, est.ceil());
            }
        }
    }
}
