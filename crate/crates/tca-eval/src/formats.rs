//! File formats: event logs, shift profiles, CSV/JSON artifacts, and the
//! plain-text summary tables.
//!
//! Event-log files are one event per line, `day_index,minute_of_day`,
//! `#` comments and blank lines allowed, UTF-8 with LF newlines. All
//! writers format deterministically so identical runs produce identical
//! bytes.

use std::fmt::Write as _;

use serde::Serialize;
use tca_core::{Cluster, EventLog, PercolationTrace};

use crate::datagen::{Shift, ShiftProfile};
use crate::error::EvalError;
use crate::sim::{EvalReport, SweepCurve};

/// Parses the `day_index,minute_of_day` event-log format.
///
/// Day indexes may appear in any order and may skip values; skipped days
/// become empty days so indexes stay meaningful.
pub fn parse_event_log(text: &str) -> Result<EventLog, EvalError> {
    let mut days: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (day_str, minute_str) = line.split_once(',').ok_or_else(|| EvalError::Parse {
            line: line_no,
            message: format!("expected `day_index,minute_of_day`, got `{line}`"),
        })?;
        let day: usize = day_str.trim().parse().map_err(|_| EvalError::Parse {
            line: line_no,
            message: format!("bad day index `{}`", day_str.trim()),
        })?;
        let minute: f64 = minute_str.trim().parse().map_err(|_| EvalError::Parse {
            line: line_no,
            message: format!("bad minute `{}`", minute_str.trim()),
        })?;
        if !(0.0..1440.0).contains(&minute) {
            return Err(EvalError::Parse {
                line: line_no,
                message: format!("minute {minute} outside [0, 1440)"),
            });
        }
        if day >= days.len() {
            days.resize(day + 1, Vec::new());
        }
        days[day].push(minute);
    }
    Ok(EventLog::new(days)?)
}

pub fn read_event_log(path: &std::path::Path) -> Result<EventLog, EvalError> {
    parse_event_log(&std::fs::read_to_string(path)?)
}

/// Serializes a log back to the line format, days in order.
///
/// Interior zero-event days survive a round trip (their index is implied
/// by the gap); trailing zero-event days have no line to carry them and
/// are dropped on re-parse.
pub fn event_log_to_string(log: &EventLog) -> String {
    let mut out = String::from("# day_index,minute_of_day\n");
    for (day, events) in log.days().iter().enumerate() {
        for &t in events {
            let _ = writeln!(out, "{day},{t}");
        }
    }
    out
}

/// Parses the shift-profile key-value format: `shift = start,end,mean_gap`
/// lines plus an optional `name = ...`.
pub fn parse_profile(text: &str) -> Result<ShiftProfile, EvalError> {
    let mut name = String::from("custom");
    let mut shifts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| EvalError::Parse {
            line: line_no,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        match key.trim() {
            "name" => name = value.trim().to_string(),
            "shift" => {
                let fields: Vec<&str> = value.split(',').map(str::trim).collect();
                if fields.len() != 3 {
                    return Err(EvalError::Parse {
                        line: line_no,
                        message: "shift needs `start,end,mean_gap`".into(),
                    });
                }
                let parse = |s: &str| -> Result<f64, EvalError> {
                    s.parse().map_err(|_| EvalError::Parse {
                        line: line_no,
                        message: format!("bad number `{s}`"),
                    })
                };
                shifts.push(Shift {
                    start: parse(fields[0])?,
                    end: parse(fields[1])?,
                    mean_gap: parse(fields[2])?,
                });
            }
            other => {
                return Err(EvalError::Parse {
                    line: line_no,
                    message: format!("unknown key `{other}`"),
                });
            }
        }
    }
    ShiftProfile::new(name, shifts)
}

#[derive(Serialize)]
struct ClusterRow {
    start_minute: u32,
    end_minute: u32,
}

fn cluster_rows(clusters: &[Cluster], period: u32) -> Vec<ClusterRow> {
    clusters
        .iter()
        .map(|c| ClusterRow {
            start_minute: c.start_minute(period),
            end_minute: c.end_minute(period),
        })
        .collect()
}

/// `start_minute,end_minute` rows, half-open minute spans.
pub fn clusters_csv(clusters: &[Cluster], period: u32) -> String {
    let mut out = String::from("start_minute,end_minute\n");
    for row in cluster_rows(clusters, period) {
        let _ = writeln!(out, "{},{}", row.start_minute, row.end_minute);
    }
    out
}

pub fn clusters_json(clusters: &[Cluster], period: u32) -> String {
    let mut s = serde_json::to_string_pretty(&cluster_rows(clusters, period))
        .expect("plain structs serialize");
    s.push('\n');
    s
}

/// Interval schedules share the cluster serialization:
/// `start_minute,end_minute` half-open rows.
pub fn schedule_csv(schedule: &crate::schedule::IntervalSchedule) -> String {
    let mut out = String::from("start_minute,end_minute\n");
    for &(start, end) in schedule.intervals() {
        let _ = writeln!(out, "{start},{end}");
    }
    out
}

/// `ell,largest,second_largest,cluster_count` rows of the sweep trace.
pub fn trace_csv(trace: &PercolationTrace) -> String {
    let mut out = String::from("ell,largest,second_largest,cluster_count\n");
    for step in &trace.steps {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            step.ell, step.largest, step.second_largest, step.cluster_count
        );
    }
    out
}

fn memory_field(memory: Option<usize>) -> String {
    memory.map_or_else(|| "-".into(), |m| m.to_string())
}

/// Per-fold benchmark rows.
pub fn report_csv(reports: &[EvalReport]) -> String {
    let mut out =
        String::from("algorithm,dataset,train_days,test_day,error_rate,on_hours,energy,memory_bytes\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{}-{},{},{:.6},{:.6},{:.6},{}",
            r.algorithm,
            r.dataset,
            r.train_days.0,
            r.train_days.1,
            r.test_day,
            r.error_rate,
            r.on_hours,
            r.energy,
            memory_field(r.memory_bytes),
        );
    }
    out
}

pub fn report_json(reports: &[EvalReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("plain structs serialize");
    s.push('\n');
    s
}

/// `d_star,mean_error,mean_energy` sweep rows.
pub fn sweep_csv(curve: &SweepCurve) -> String {
    let mut out = String::from("d_star,mean_error,mean_energy\n");
    for p in &curve.points {
        let _ = writeln!(out, "{:.6},{:.6},{:.6}", p.d_star, p.mean_error, p.mean_energy);
    }
    out
}

pub fn sweep_json(curve: &SweepCurve) -> String {
    #[derive(Serialize)]
    struct SweepDoc<'a> {
        modes: &'a crate::sim::ModeThresholds,
        points: &'a [crate::sim::SweepPoint],
    }
    let mut s = serde_json::to_string_pretty(&SweepDoc {
        modes: &curve.modes,
        points: &curve.points,
    })
    .expect("plain structs serialize");
    s.push('\n');
    s
}

/// One aggregated line of the benchmark summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub dataset: String,
    pub memory_bytes: Option<usize>,
    pub mean_energy: f64,
    pub mean_error: f64,
}

/// Renders the algorithm-by-dataset summary: memory, mean energy, and
/// mean error per dataset, in aligned plain-text columns.
pub fn summary_table(title: &str, rows: &[SummaryRow]) -> String {
    let mut algorithms: Vec<String> = Vec::new();
    let mut datasets: Vec<String> = Vec::new();
    for row in rows {
        if !algorithms.contains(&row.algorithm) {
            algorithms.push(row.algorithm.clone());
        }
        if !datasets.contains(&row.dataset) {
            datasets.push(row.dataset.clone());
        }
    }

    let cell = |algorithm: &str, dataset: &str| {
        rows.iter().find(|r| r.algorithm == algorithm && r.dataset == dataset)
    };

    let mut header = format!("{:<16} {:>12}", "algorithm", "memory(B)");
    for ds in &datasets {
        let _ = write!(header, " {:>14} {:>10}", format!("energy({ds})"), format!("err({ds})"));
    }
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "{}", "-".repeat(header.len()));
    let _ = writeln!(out, "{header}");
    let _ = writeln!(out, "{}", "-".repeat(header.len()));
    for algorithm in &algorithms {
        let memory = rows
            .iter()
            .find(|r| &r.algorithm == algorithm)
            .and_then(|r| r.memory_bytes);
        let mut line = format!("{algorithm:<16} {:>12}", memory_field(memory));
        for ds in &datasets {
            match cell(algorithm, ds) {
                Some(r) => {
                    let _ = write!(line, " {:>14.2} {:>10.2}", r.mean_energy, r.mean_error);
                }
                None => {
                    let _ = write!(line, " {:>14} {:>10}", "-", "-");
                }
            }
        }
        let _ = writeln!(out, "{line}");
    }
    out
}
