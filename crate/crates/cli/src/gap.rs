use std::collections::BTreeMap;

use svcp::io::{read_results, write_gap_rows, GapRow, ResultRow};
use svcp::oracle::relative_gap;
use svcp::rational::{parse_exact, Rational};
use svcp::ObjectiveVector;

use crate::cli::GapArgs;
use crate::error::{read_file, CliError, CliResult};
use crate::manifest::{sha256_hex, OutputSet, RunManifest};

pub const GAPS_FILE: &str = "gaps.csv";

type Key = (String, u64, u32);
/// Per-objective gaps and near-zero flags of one instance.
type Graded = (Vec<Rational>, Vec<bool>);

/// Quantile `p` of sorted values with linear interpolation between order
/// statistics (`h = (n - 1) p`), computed exactly.
pub fn quantile(sorted: &[Rational], p: &Rational) -> Option<Rational> {
    use num_traits::ToPrimitive;
    let n = sorted.len();
    if n == 0 {
        return None;
    }
    let h = p * Rational::from_integer((n - 1).into());
    let lo = h.floor();
    let i = lo.to_integer().to_usize()?;
    if i + 1 >= n {
        return Some(sorted[n - 1].clone());
    }
    let frac = h - lo;
    Some(&sorted[i] + frac * (&sorted[i + 1] - &sorted[i]))
}

#[derive(Debug, Default)]
pub struct GapOutcome {
    pub rows: Vec<GapRow>,
    /// Keys present in only one input, or with an infeasible side.
    pub excluded: Vec<String>,
}

fn index(rows: Vec<ResultRow>, what: &str) -> CliResult<BTreeMap<Key, ResultRow>> {
    let mut map = BTreeMap::new();
    for row in rows {
        let key = row.key();
        if map.insert(key.clone(), row).is_some() {
            return Err(CliError::Data(format!(
                "{what}: duplicate row for scenario {} seed {} instance {}",
                key.0, key.1, key.2
            )));
        }
    }
    Ok(map)
}

fn describe(key: &Key) -> String {
    format!("scenario {} seed {} instance {}", key.0, key.1, key.2)
}

/// Joins the two result sets on (scenario, seed, instance) and grades
/// every matched pair, then appends median and quartile rows per scenario.
pub fn compute_gaps(heuristic: Vec<ResultRow>, oracle: Vec<ResultRow>, epsilon: &Rational) -> CliResult<GapOutcome> {
    let heur = index(heuristic, "heuristic results")?;
    let mut opt = index(oracle, "oracle results")?;
    let mut out = GapOutcome::default();
    let mut per_scenario: BTreeMap<String, Vec<Graded>> = BTreeMap::new();
    let mut width = None;
    for (key, h) in heur {
        let Some(o) = opt.remove(&key) else {
            out.excluded.push(format!("{} has no oracle row", describe(&key)));
            continue;
        };
        if !h.feasible || !o.feasible {
            out.excluded.push(format!("{} is infeasible in one of the inputs", describe(&key)));
            continue;
        }
        let hv = ObjectiveVector::from_values(h.objectives)?;
        let ov = ObjectiveVector::from_values(o.objectives)?;
        let report = relative_gap(&hv, &ov, epsilon).map_err(|e| CliError::from(e).context(describe(&key)))?;
        if *width.get_or_insert(report.gaps.len()) != report.gaps.len() {
            return Err(CliError::Data(format!("{} has a different number of objectives", describe(&key))));
        }
        per_scenario
            .entry(key.0.clone())
            .or_default()
            .push((report.gaps.clone(), report.near_zero.clone()));
        out.rows.push(GapRow {
            scenario: key.0,
            seed: Some(key.1),
            instance: Some(key.2),
            statistic: "gap".into(),
            gaps: report.gaps,
            near_zero: report.near_zero,
        });
    }
    for key in opt.keys() {
        out.excluded.push(format!("{} has no heuristic row", describe(key)));
    }

    let stats = [
        ("q1", Rational::new(1.into(), 4.into())),
        ("median", Rational::new(1.into(), 2.into())),
        ("q3", Rational::new(3.into(), 4.into())),
    ];
    for (scenario, entries) in per_scenario {
        let k = entries[0].0.len();
        let columns: Vec<Vec<Rational>> = (0..k)
            .map(|j| {
                let mut col: Vec<Rational> = entries.iter().map(|(g, _)| g[j].clone()).collect();
                col.sort();
                col
            })
            .collect();
        let flagged: Vec<bool> = (0..k).map(|j| entries.iter().any(|(_, f)| f[j])).collect();
        for (name, p) in &stats {
            out.rows.push(GapRow {
                scenario: scenario.clone(),
                seed: None,
                instance: None,
                statistic: (*name).into(),
                gaps: columns.iter().map(|c| quantile(c, p).expect("non-empty")).collect(),
                near_zero: flagged.clone(),
            });
        }
    }
    Ok(out)
}

pub fn run(args: &GapArgs, command: &[String]) -> CliResult<RunManifest> {
    let epsilon = parse_exact(&args.epsilon).map_err(|e| CliError::Usage(format!("--epsilon: {e}")))?;
    let hbytes = read_file(&args.heuristic)?;
    let obytes = read_file(&args.oracle)?;
    let heuristic = read_results(&hbytes).map_err(|e| CliError::from(e).context(args.heuristic.display()))?;
    let oracle = read_results(&obytes).map_err(|e| CliError::from(e).context(args.oracle.display()))?;
    let outcome = compute_gaps(heuristic, oracle, &epsilon)?;
    for note in &outcome.excluded {
        eprintln!("warning: excluded {note}");
    }
    let width = outcome.rows.first().map_or(4, |r| r.gaps.len());
    let csv = write_gap_rows(&outcome.rows, width)?;
    let mut outputs = OutputSet::new(&args.out);
    outputs.write(GAPS_FILE, &csv)?;
    let config = serde_json::json!({
        "heuristic": sha256_hex(&hbytes),
        "oracle": sha256_hex(&obytes),
        "epsilon": args.epsilon,
    });
    let matched = outcome.rows.iter().filter(|r| r.statistic == "gap").count();
    println!("graded {matched} instance(s), excluded {}", outcome.excluded.len());
    outputs.finish(command, &config, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn quantiles_interpolate() {
        let xs: Vec<Rational> = [1, 2, 3, 4].iter().map(|&n| q(n, 1)).collect();
        assert_eq!(quantile(&xs, &q(1, 2)), Some(q(5, 2)));
        assert_eq!(quantile(&xs, &q(1, 4)), Some(q(7, 4)));
        assert_eq!(quantile(&xs, &q(1, 1)), Some(q(4, 1)));
        assert_eq!(quantile(&xs[..1], &q(3, 4)), Some(q(1, 1)));
        assert_eq!(quantile(&[], &q(1, 2)), None);
    }
}
