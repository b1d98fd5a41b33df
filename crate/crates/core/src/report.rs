//! CSV report formats: batch rows, tuning grids, and run traces.
//!
//! Action indices are written one-based, matching how actions are numbered
//! in the benchmark environment tables.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::automata::{AutomatonConfig, Scheme};
use crate::error::Result;
use crate::experiment::{BatchSummary, Trace};
use crate::tuning::TuningResult;

pub const TRACE_HEADER: &str = "t,p_tracked,selected,feedback,leader";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scheme: String,
    pub environment: String,
    pub n: u32,
    pub gamma: f64,
    pub accuracy: f64,
    pub mean_iterations: Option<f64>,
    pub std_iterations: Option<f64>,
    pub replications: u64,
    pub non_converged: u64,
}

impl ReportRow {
    pub fn new(config: &AutomatonConfig, environment: &str, summary: &BatchSummary) -> Self {
        ReportRow {
            scheme: config.scheme.name().to_string(),
            environment: environment.to_string(),
            n: config.resolution,
            gamma: config.gamma,
            accuracy: summary.accuracy,
            mean_iterations: summary.mean_iterations,
            std_iterations: summary.std_iterations,
            replications: summary.replications,
            non_converged: summary.non_converged,
        }
    }

    pub fn scheme(&self) -> Result<Scheme> {
        self.scheme.parse()
    }
}

pub fn write_report<W: Write>(out: W, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_report<R: std::io::Read>(input: R) -> Result<Vec<ReportRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Into::into))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub n: u32,
    pub gamma: f64,
    pub passed_ne: bool,
    pub mean_iterations: Option<f64>,
    pub accuracy: Option<f64>,
}

pub fn grid_rows(result: &TuningResult) -> Vec<GridRow> {
    result
        .grid
        .iter()
        .map(|c| GridRow {
            n: c.resolution,
            gamma: c.gamma,
            passed_ne: c.passed,
            mean_iterations: c.mean_iterations(),
            accuracy: c.accuracy(),
        })
        .collect()
}

pub fn write_grid<W: Write>(out: W, result: &TuningResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in grid_rows(result) {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_grid<R: std::io::Read>(input: R) -> Result<Vec<GridRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Into::into))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: u64,
    pub p_tracked: f64,
    pub selected: usize,
    pub feedback: u8,
    pub leader: usize,
}

pub fn trace_rows(trace: &Trace) -> impl Iterator<Item = TraceRow> + '_ {
    trace.snapshots.iter().map(|s| TraceRow {
        t: s.t,
        p_tracked: s.p_tracked,
        selected: s.selected + 1,
        feedback: s.feedback.as_u8(),
        leader: s.leader + 1,
    })
}

pub fn write_trace<W: Write>(out: W, trace: &Trace) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(TRACE_HEADER.split(','))?;
    for row in trace_rows(trace) {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_trace<R: std::io::Read>(input: R) -> Result<Vec<TraceRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Into::into))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn report_header_and_empty_fields() {
        let row = ReportRow {
            scheme: "dca".into(),
            environment: "E1".into(),
            n: 13,
            gamma: 6.0,
            accuracy: 0.0,
            mean_iterations: None,
            std_iterations: None,
            replications: 3,
            non_converged: 3,
        };
        let mut buf = Vec::new();
        write_report(&mut buf, std::slice::from_ref(&row)).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text,
            "scheme,environment,n,gamma,accuracy,mean_iterations,std_iterations,replications,non_converged\n\
             dca,E1,13,6.0,0.0,,,3,3\n"
        );
        assert_eq!(read_report(&buf[..]).unwrap(), vec![row]);
    }

    proptest! {
        #[test]
        fn report_rows_round_trip(
            n in 1u32..500,
            gamma in 0.0f64..100.0,
            accuracy in 0.0f64..=1.0,
            mean in proptest::option::of(100.0f64..1e6),
            std in proptest::option::of(0.0f64..1e5),
            reps in 1u64..1_000_000,
            env in "[A-Za-z0-9_]{1,8}",
        ) {
            let row = ReportRow {
                scheme: "seri".into(),
                environment: env,
                n,
                gamma,
                accuracy,
                mean_iterations: mean,
                std_iterations: std,
                replications: reps,
                non_converged: reps / 2,
            };
            let mut buf = Vec::new();
            write_report(&mut buf, std::slice::from_ref(&row)).unwrap();
            prop_assert_eq!(read_report(&buf[..]).unwrap(), vec![row]);
        }
    }
}
