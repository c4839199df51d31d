//! Brute force over every binary tensor, filtered by the feasibility
//! checker. Only usable on the smallest instances.

use std::cmp::Ordering;

use super::ExactSolution;
use crate::domain::feasibility::volunteer_rules;
use crate::domain::{check_feasibility, validate_instance, Assignment, Instance};
use crate::error::{Error, Result};
use crate::objectives::{lex_compare, objective_vector};

pub const RAW_MAX_VOLUNTEERS: usize = 2;
pub const RAW_MAX_ACTIVITIES: usize = 2;
pub const RAW_MAX_SLOTS: usize = 6;

pub fn solve_raw_enumeration(instance: &Instance) -> Result<ExactSolution> {
    let (nv, na, nt) = (instance.num_volunteers(), instance.num_activities(), instance.num_slots());
    if nv > RAW_MAX_VOLUNTEERS || na > RAW_MAX_ACTIVITIES || nt > RAW_MAX_SLOTS {
        return Err(Error::Refused(format!(
            "raw enumeration handles at most {RAW_MAX_VOLUNTEERS} volunteers, \
             {RAW_MAX_ACTIVITIES} activities and {RAW_MAX_SLOTS} slots"
        )));
    }
    let defects = validate_instance(instance);
    if !defects.is_empty() {
        return Err(Error::InvalidInstance(defects));
    }

    let travel = instance.travel_table();
    let bits = na * nt;
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(nv);
    for v in 0..nv {
        let mut ok = Vec::new();
        for mask in 0u32..(1 << bits) {
            let mut x = instance.empty_assignment();
            set_row(&mut x, v, mask, nt);
            let mut violations = Vec::new();
            volunteer_rules(instance, &x, v, &travel, &mut violations);
            if violations.is_empty() {
                ok.push(mask);
            }
        }
        rows.push(ok);
    }

    let mut states = 0u64;
    let mut best: Option<ExactSolution> = None;
    let mut choice = vec![0usize; nv];
    loop {
        if rows.iter().any(Vec::is_empty) {
            break;
        }
        states += 1;
        let mut x = instance.empty_assignment();
        for v in 0..nv {
            set_row(&mut x, v, rows[v][choice[v]], nt);
        }
        if check_feasibility(instance, &x)?.is_empty() {
            let vector = objective_vector(instance, &x);
            let better = match &best {
                None => true,
                Some(b) => lex_compare(&vector, &b.objectives)? == Ordering::Greater,
            };
            if better {
                best = Some(ExactSolution {
                    assignment: x,
                    objectives: vector,
                    states: 0,
                });
            }
        }
        // Odometer over the row choices, last volunteer fastest.
        let mut v = nv;
        let advanced = loop {
            if v == 0 {
                break false;
            }
            v -= 1;
            choice[v] += 1;
            if choice[v] < rows[v].len() {
                break true;
            }
            choice[v] = 0;
        };
        if !advanced {
            break;
        }
    }

    match best {
        Some(mut b) => {
            b.states = states;
            Ok(b)
        }
        None => Err(Error::input("the prior assignment admits no feasible completion")),
    }
}

fn set_row(x: &mut Assignment, v: usize, mask: u32, slots: usize) {
    let mut m = mask;
    while m != 0 {
        let bit = m.trailing_zeros() as usize;
        x.set(v, bit / slots, bit % slots);
        m &= m - 1;
    }
}
