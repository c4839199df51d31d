use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::{format_decimal, format_exact, parse_exact, Rational};

/// Significant digits of the decimal objective columns.
const DECIMAL_DIGITS: u32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: String,
    pub seed: u64,
    /// 1-based instance index.
    pub instance: u32,
    pub solver: String,
    /// Objective values `OF 1 ..= OF K+2`.
    pub objectives: Vec<Rational>,
    /// Left blank unless timing was requested, so outputs stay
    /// reproducible.
    pub wall_clock_us: Option<u64>,
    pub evaluations: u64,
    pub feasible: bool,
}

impl ResultRow {
    pub fn key(&self) -> (String, u64, u32) {
        (self.scenario.clone(), self.seed, self.instance)
    }
}

fn objective_headers(n: usize) -> (Vec<String>, Vec<String>) {
    (
        (1..=n).map(|i| format!("of{i}")).collect(),
        (1..=n).map(|i| format!("of{i}_exact")).collect(),
    )
}

pub fn write_results(rows: &[ResultRow], num_objectives: usize) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let (dec, exact) = objective_headers(num_objectives);
    let mut header: Vec<String> = ["scenario", "seed", "instance", "solver"].map(String::from).to_vec();
    header.extend(dec);
    header.extend(exact);
    header.extend(["wall_clock_us", "evaluations", "feasible"].map(String::from));
    w.write_record(&header)?;
    for row in rows {
        if row.objectives.len() != num_objectives {
            return Err(Error::input(format!(
                "row {:?} has {} objectives, expected {num_objectives}",
                row.key(),
                row.objectives.len()
            )));
        }
        let mut rec = vec![
            row.scenario.clone(),
            row.seed.to_string(),
            row.instance.to_string(),
            row.solver.clone(),
        ];
        rec.extend(row.objectives.iter().map(|r| format_decimal(r, DECIMAL_DIGITS)));
        rec.extend(row.objectives.iter().map(format_exact));
        rec.push(row.wall_clock_us.map(|u| u.to_string()).unwrap_or_default());
        rec.push(row.evaluations.to_string());
        rec.push(row.feasible.to_string());
        w.write_record(&rec)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn read_results(bytes: &[u8]) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(bytes);
    let headers = r.headers()?.clone();
    let col: BTreeMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let n = (1..).take_while(|i| col.contains_key(format!("of{i}_exact").as_str())).count();
    let need = |name: &str| -> Result<usize> {
        col.get(name)
            .copied()
            .ok_or_else(|| Error::document("header", format!("missing column {name:?}")))
    };
    let (scenario, seed, instance, solver) = (need("scenario")?, need("seed")?, need("instance")?, need("solver")?);
    let (wall, evals, feasible) = (need("wall_clock_us")?, need("evaluations")?, need("feasible")?);
    let exact: Vec<usize> = (1..=n).map(|i| need(&format!("of{i}_exact"))).collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let at = |c: usize| rec.get(c).unwrap_or("");
        let bad = |what: &str| Error::document(format!("row {}", line + 1), format!("bad {what}"));
        rows.push(ResultRow {
            scenario: at(scenario).to_string(),
            seed: at(seed).parse().map_err(|_| bad("seed"))?,
            instance: at(instance).parse().map_err(|_| bad("instance"))?,
            solver: at(solver).to_string(),
            objectives: exact.iter().map(|&c| parse_exact(at(c))).collect::<Result<_>>()?,
            wall_clock_us: match at(wall) {
                "" => None,
                s => Some(s.parse().map_err(|_| bad("wall_clock_us"))?),
            },
            evaluations: at(evals).parse().map_err(|_| bad("evaluations"))?,
            feasible: at(feasible).parse().map_err(|_| bad("feasible"))?,
        });
    }
    Ok(rows)
}

/// One line of a gap report: per-objective relative gaps for an instance,
/// or a summary statistic over a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub scenario: String,
    /// `None` on summary rows.
    pub seed: Option<u64>,
    pub instance: Option<u32>,
    /// `gap` on instance rows; `median`, `q1` or `q3` on summary rows.
    pub statistic: String,
    pub gaps: Vec<Rational>,
    pub near_zero: Vec<bool>,
}

pub fn write_gap_rows(rows: &[GapRow], num_objectives: usize) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["scenario", "seed", "instance", "statistic"].map(String::from).to_vec();
    header.extend((1..=num_objectives).map(|i| format!("gap{i}")));
    header.extend((1..=num_objectives).map(|i| format!("gap{i}_exact")));
    header.extend((1..=num_objectives).map(|i| format!("near_zero{i}")));
    w.write_record(&header)?;
    for row in rows {
        if row.gaps.len() != num_objectives || row.near_zero.len() != num_objectives {
            return Err(Error::input("gap row has the wrong number of objectives"));
        }
        let mut rec = vec![
            row.scenario.clone(),
            row.seed.map(|s| s.to_string()).unwrap_or_default(),
            row.instance.map(|i| i.to_string()).unwrap_or_default(),
            row.statistic.clone(),
        ];
        rec.extend(row.gaps.iter().map(|g| format_decimal(g, DECIMAL_DIGITS)));
        rec.extend(row.gaps.iter().map(format_exact));
        rec.extend(row.near_zero.iter().map(|f| f.to_string()));
        w.write_record(&rec)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}
