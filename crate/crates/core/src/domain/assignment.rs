use fixedbitset::FixedBitSet;

/// A maximal block of consecutive slots `start..=end` that one volunteer
/// works on one activity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    pub volunteer: usize,
    pub activity: usize,
    pub start: usize,
    pub end: usize,
}

impl Run {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn overlaps(&self, other: &Run) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

/// The binary tensor `x[v][a][t]` with per-(activity, slot) head counts and
/// per-volunteer worked-slot totals kept in step with every mutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    volunteers: usize,
    activities: usize,
    slots: usize,
    bits: FixedBitSet,
    counts: Vec<u32>,
    worked: Vec<u32>,
}

impl Assignment {
    pub fn new(volunteers: usize, activities: usize, slots: usize) -> Self {
        Self {
            volunteers,
            activities,
            slots,
            bits: FixedBitSet::with_capacity(volunteers * activities * slots),
            counts: vec![0; activities * slots],
            worked: vec![0; volunteers],
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.volunteers, self.activities, self.slots)
    }

    #[inline]
    fn index(&self, v: usize, a: usize, t: usize) -> usize {
        debug_assert!(v < self.volunteers && a < self.activities && t < self.slots);
        (v * self.activities + a) * self.slots + t
    }

    #[inline]
    pub fn get(&self, v: usize, a: usize, t: usize) -> bool {
        self.bits.contains(self.index(v, a, t))
    }

    /// Sets `x[v][a][t] = 1`; returns whether the entry changed.
    pub fn set(&mut self, v: usize, a: usize, t: usize) -> bool {
        let i = self.index(v, a, t);
        if self.bits.put(i) {
            return false;
        }
        self.counts[a * self.slots + t] += 1;
        self.worked[v] += 1;
        true
    }

    /// Sets `x[v][a][t] = 0`; returns whether the entry changed.
    pub fn unset(&mut self, v: usize, a: usize, t: usize) -> bool {
        let i = self.index(v, a, t);
        if !self.bits.contains(i) {
            return false;
        }
        self.bits.set(i, false);
        self.counts[a * self.slots + t] -= 1;
        self.worked[v] -= 1;
        true
    }

    pub fn assign_run(&mut self, v: usize, a: usize, start: usize, end: usize) {
        for t in start..=end {
            self.set(v, a, t);
        }
    }

    /// Volunteers assigned to `a` in slot `t` (cached).
    #[inline]
    pub fn count(&self, a: usize, t: usize) -> u32 {
        self.counts[a * self.slots + t]
    }

    /// `sum_{a,t} x[v][a][t]` (cached).
    #[inline]
    pub fn total_working_time(&self, v: usize) -> u32 {
        self.worked[v]
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn num_assigned(&self) -> usize {
        self.bits.count_ones(..)
    }

    /// Recomputes `(counts, worked)` from the tensor alone.
    pub fn recount(&self) -> (Vec<u32>, Vec<u32>) {
        let mut counts = vec![0; self.activities * self.slots];
        let mut worked = vec![0; self.volunteers];
        for i in self.bits.ones() {
            let t = i % self.slots;
            let a = (i / self.slots) % self.activities;
            let v = i / (self.slots * self.activities);
            counts[a * self.slots + t] += 1;
            worked[v] += 1;
        }
        (counts, worked)
    }

    pub fn caches_consistent(&self) -> bool {
        let (counts, worked) = self.recount();
        counts == self.counts && worked == self.worked
    }

    /// Maximal runs of `v` on `a`, in slot order.
    pub fn runs_of(&self, v: usize, a: usize) -> Vec<Run> {
        let mut out = Vec::new();
        let mut t = 0;
        while t < self.slots {
            if self.get(v, a, t) {
                let start = t;
                while t + 1 < self.slots && self.get(v, a, t + 1) {
                    t += 1;
                }
                out.push(Run {
                    volunteer: v,
                    activity: a,
                    start,
                    end: t,
                });
            }
            t += 1;
        }
        out
    }

    /// All maximal runs of `v`, ordered by `(start, activity)`.
    pub fn volunteer_runs(&self, v: usize) -> Vec<Run> {
        let mut out: Vec<Run> = (0..self.activities)
            .flat_map(|a| self.runs_of(v, a))
            .collect();
        out.sort_by_key(|r| (r.start, r.end, r.activity));
        out
    }

    /// Every maximal run, ordered by volunteer, activity, start.
    pub fn runs(&self) -> Vec<Run> {
        (0..self.volunteers)
            .flat_map(|v| (0..self.activities).flat_map(move |a| self.runs_of(v, a)))
            .collect()
    }

    /// Whether every entry set in `other` is also set here.
    pub fn contains(&self, other: &Assignment) -> bool {
        self.dims() == other.dims() && other.bits.is_subset(&self.bits)
    }

    /// Entries set in `other` but not here.
    pub fn missing_from(&self, other: &Assignment) -> Vec<(usize, usize, usize)> {
        other
            .bits
            .difference(&self.bits)
            .map(|i| {
                let t = i % self.slots;
                let a = (i / self.slots) % self.activities;
                let v = i / (self.slots * self.activities);
                (v, a, t)
            })
            .collect()
    }

    /// The activity `v` works in slot `t`, if any (lowest index when
    /// double-booked).
    pub fn activity_at(&self, v: usize, t: usize) -> Option<usize> {
        (0..self.activities).find(|&a| self.get(v, a, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caches_follow_mutations() {
        let mut x = Assignment::new(3, 2, 6);
        x.assign_run(0, 1, 1, 4);
        x.assign_run(2, 1, 3, 5);
        assert!(x.set(1, 0, 0));
        assert!(!x.set(1, 0, 0));
        assert_eq!(x.count(1, 3), 2);
        assert_eq!(x.count(1, 0), 0);
        assert_eq!(x.total_working_time(0), 4);
        assert!(x.unset(0, 1, 4));
        assert!(!x.unset(0, 1, 4));
        assert_eq!(x.total_working_time(0), 3);
        assert!(x.caches_consistent());
    }

    #[test]
    fn total_working_time_examples() {
        let mut x = Assignment::new(1, 2, 20);
        assert_eq!(x.total_working_time(0), 0);
        x.assign_run(0, 0, 0, 3);
        assert_eq!(x.total_working_time(0), 4);
        x.assign_run(0, 1, 8, 13);
        assert_eq!(x.total_working_time(0), 10);
    }

    #[test]
    fn runs_are_maximal() {
        let mut x = Assignment::new(1, 2, 10);
        x.assign_run(0, 0, 0, 2);
        x.assign_run(0, 0, 4, 5);
        x.assign_run(0, 1, 7, 9);
        let runs = x.volunteer_runs(0);
        assert_eq!(
            runs.iter().map(|r| (r.activity, r.start, r.end)).collect::<Vec<_>>(),
            vec![(0, 0, 2), (0, 4, 5), (1, 7, 9)]
        );
        assert_eq!(runs[0].len(), 3);
    }

    #[test]
    fn containment() {
        let mut o = Assignment::new(2, 1, 4);
        o.set(1, 0, 2);
        let mut x = o.clone();
        x.set(0, 0, 0);
        assert!(x.contains(&o));
        assert!(!o.contains(&x));
        assert_eq!(o.missing_from(&x), vec![(0, 0, 0)]);
    }
}
