use std::fmt::Write as _;

use crate::run::{Algo, Row, Summary};
use crate::BenchError;

pub const HEADER: [&str; 5] = ["stage", "op", "cumulative_micros", "verified", "max_rel_error"];

/// Renders rows under the fixed five-column header.
pub fn write_csv(rows: &[Row]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER)?;
    for r in rows {
        let err = r.max_rel_error.map(|e| e.to_string()).unwrap_or_default();
        w.write_record([
            r.stage.to_string(),
            r.op.clone(),
            r.cumulative_micros.to_string(),
            r.verified.to_string(),
            err,
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_csv(text: &str) -> Result<Vec<Row>, BenchError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    if r.headers()?.iter().ne(HEADER) {
        return Err(BenchError::BadParams("unexpected csv header".into()));
    }
    let bad = |what: &str, s: &str| BenchError::BadParams(format!("bad {what} field: {s:?}"));
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let stage = rec[0].parse().map_err(|_| bad("stage", &rec[0]))?;
        let cumulative_micros = rec[2].parse().map_err(|_| bad("time", &rec[2]))?;
        let verified = rec[3].parse().map_err(|_| bad("verified", &rec[3]))?;
        let max_rel_error = match &rec[4] {
            "" => None,
            s => Some(s.parse().map_err(|_| bad("error", s))?),
        };
        rows.push(Row { stage, op: rec[1].to_string(), cumulative_micros, verified, max_rel_error });
    }
    Ok(rows)
}

/// `key=value` lines describing one run.
pub fn write_summary(s: &Summary) -> String {
    let opt = |x: Option<String>| x.unwrap_or_default();
    let mut out = String::new();
    for (k, v) in [
        ("algo", s.algo.to_string()),
        ("n", s.n.to_string()),
        ("seed", s.seed.to_string()),
        ("stages", s.stages.to_string()),
        ("total_micros", s.total_micros.to_string()),
        ("baseline_micros", s.baseline_micros.to_string()),
        ("events", s.events.to_string()),
        ("baseline_events", s.baseline_events.to_string()),
        ("peak_memory_bytes", opt(s.peak_memory_bytes.map(|x| x.to_string()))),
        ("max_rel_error", opt(s.max_rel_error.map(|x| x.to_string()))),
    ] {
        let _ = writeln!(out, "{k}={v}");
    }
    out
}

pub fn read_summary(text: &str) -> Result<Summary, BenchError> {
    let mut s = Summary {
        algo: Algo::Es,
        n: 0,
        seed: 0,
        stages: 0,
        total_micros: 0,
        baseline_micros: 0,
        events: 0,
        baseline_events: 0,
        peak_memory_bytes: None,
        max_rel_error: None,
    };
    let mut saw_algo = false;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| BenchError::BadParams(format!("bad summary line {line:?}")))?;
        let num = |v: &str| v.parse::<u64>().map_err(|_| BenchError::BadParams(format!("{k}={v}")));
        let opt_num = |v: &str| if v.is_empty() { Ok(None) } else { num(v).map(Some) };
        match k {
            "algo" => {
                s.algo = v.parse()?;
                saw_algo = true;
            }
            "n" => s.n = num(v)? as usize,
            "seed" => s.seed = num(v)?,
            "stages" => s.stages = num(v)?,
            "total_micros" => s.total_micros = num(v)?,
            "baseline_micros" => s.baseline_micros = num(v)?,
            "events" => s.events = num(v)?,
            "baseline_events" => s.baseline_events = num(v)?,
            "peak_memory_bytes" => s.peak_memory_bytes = opt_num(v)?,
            "max_rel_error" => {
                s.max_rel_error = if v.is_empty() {
                    None
                } else {
                    Some(v.parse().map_err(|_| BenchError::BadParams(format!("{k}={v}")))?)
                }
            }
            _ => return Err(BenchError::BadParams(format!("unknown summary key {k}"))),
        }
    }
    if !saw_algo {
        return Err(BenchError::BadParams("summary lacks algo".into()));
    }
    Ok(s)
}

/// Merged view of several runs.
#[derive(Clone, Debug, PartialEq)]
pub struct Merged {
    pub csv: String,
    pub summary: String,
}

/// Rows of all runs ordered by `(algo, stage)`, with ties kept in input
/// order, plus a table of per-run ratios against the naive baseline.
pub fn merge(runs: &[(Summary, Vec<Row>)]) -> Result<Merged, BenchError> {
    let mut tagged: Vec<(Algo, &Row)> =
        runs.iter().flat_map(|(s, rows)| rows.iter().map(move |r| (s.algo, r))).collect();
    tagged.sort_by_key(|&(a, r)| (a.name(), r.stage));
    let rows: Vec<Row> = tagged.into_iter().map(|(_, r)| r.clone()).collect();

    let mut order: Vec<&Summary> = runs.iter().map(|(s, _)| s).collect();
    order.sort_by_key(|s| (s.algo.name(), s.n, s.seed));
    let mut summary = String::from(
        "algo,n,seed,stages,total_micros,baseline_micros,ratio,events,baseline_events,event_ratio,events_per_update,max_rel_error\n",
    );
    for s in order {
        let per = s.events as f64 / s.stages.max(1) as f64;
        let err = s.max_rel_error.map(|e| e.to_string()).unwrap_or_default();
        let _ = writeln!(
            summary,
            "{},{},{},{},{},{},{:.6},{},{},{:.6},{:.3},{}",
            s.algo,
            s.n,
            s.seed,
            s.stages,
            s.total_micros,
            s.baseline_micros,
            s.time_ratio(),
            s.events,
            s.baseline_events,
            s.event_ratio(),
            per,
            err
        );
    }
    Ok(Merged { csv: write_csv(&rows)?, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(stage: u64, verified: bool) -> Row {
        Row {
            stage,
            op: format!("D {stage} 0"),
            cumulative_micros: stage * 10,
            verified,
            max_rel_error: verified.then_some(0.25),
        }
    }

    fn summary(algo: Algo) -> Summary {
        Summary {
            algo,
            n: 5,
            seed: 1,
            stages: 2,
            total_micros: 30,
            baseline_micros: 12,
            events: 7,
            baseline_events: 40,
            peak_memory_bytes: Some(4096),
            max_rel_error: Some(0.5),
        }
    }

    #[test]
    fn empty_run_is_header_only() {
        assert_eq!(write_csv(&[]).unwrap(), "stage,op,cumulative_micros,verified,max_rel_error\n");
    }

    #[test]
    fn csv_round_trip_keeps_missing_errors_empty() {
        let rows = vec![row(1, false), row(2, true)];
        let text = write_csv(&rows).unwrap();
        assert!(text.contains("1,D 1 0,10,false,\n"));
        assert_eq!(read_csv(&text).unwrap(), rows);
    }

    #[test]
    fn summary_round_trip() {
        let mut s = summary(Algo::AtoSssp);
        assert_eq!(read_summary(&write_summary(&s)).unwrap(), s);
        s.peak_memory_bytes = None;
        s.max_rel_error = None;
        assert_eq!(read_summary(&write_summary(&s)).unwrap(), s);
    }

    #[test]
    fn merge_sorts_by_algo_then_stage() {
        let m = merge(&[
            (summary(Algo::Ssr), vec![row(1, true), row(2, true)]),
            (summary(Algo::Es), vec![row(2, false), row(1, false)]),
        ])
        .unwrap();
        let rows = read_csv(&m.csv).unwrap();
        let got: Vec<(u64, bool)> = rows.iter().map(|r| (r.stage, r.verified)).collect();
        assert_eq!(got, vec![(1, false), (2, false), (1, true), (2, true)]);
        let first = m.summary.lines().nth(1).unwrap();
        assert!(first.starts_with("es,"));
        assert_eq!(first.split(',').nth(6).unwrap(), "2.500000");
    }
}
