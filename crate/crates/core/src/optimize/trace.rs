//! Per-iteration training records and their CSV form.
//!
//! Floats are written with 17 significant digits so a CSV round trip is
//! bit-exact. Wall-clock time is not part of the rows, which keeps traces of
//! seeded runs byte-identical.

use std::path::Path;

use serde::Serialize;

use crate::dataset::write_atomic;
use crate::error::Result;

/// One outer iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    /// Loss estimate at the iterate.
    pub loss: f64,
    /// Accuracy of the loss estimate.
    pub delta1: f64,
    /// Accuracy of the gradient, when one was used.
    pub delta2: Option<f64>,
    /// Step size, or the accepted `M_k` for the adaptive method.
    pub step: f64,
    /// `||g_X||_2` for the adaptive method.
    pub gx_norm: Option<f64>,
    /// Line-search checks spent in this iteration.
    pub checks: usize,
    /// Cumulative mat-vec count.
    pub matvecs: u64,
}

/// One check of the adaptive method's acceptance inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineSearchTrial {
    pub iteration: usize,
    pub m_k: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// `f~(phi_k)`.
    pub loss: f64,
    /// `f~(omega_k)`.
    pub trial_loss: f64,
    /// Right-hand side of the acceptance inequality.
    pub bound: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TrainTrace {
    pub records: Vec<TraceRecord>,
    pub trials: Vec<LineSearchTrial>,
}

pub const TRACE_HEADER: [&str; 9] = [
    "iteration",
    "loss",
    "delta1",
    "delta2",
    "step",
    "gx_norm",
    "gx_norm_sq",
    "checks",
    "matvecs",
];

pub const TRIAL_HEADER: [&str; 8] = [
    "iteration",
    "m_k",
    "delta1",
    "delta2",
    "loss",
    "trial_loss",
    "bound",
    "accepted",
];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

impl TrainTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
    pub fn losses(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.loss).collect()
    }
    pub fn total_matvecs(&self) -> u64 {
        self.records.last().map_or(0, |r| r.matvecs)
    }

    pub(crate) fn push(&mut self, record: TraceRecord) {
        debug_assert!(self.records.last().is_none_or(|r| r.iteration < record.iteration));
        self.records.push(record);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(TRACE_HEADER)?;
        for r in &self.records {
            w.write_record([
                r.iteration.to_string(),
                fmt_f64(r.loss),
                fmt_f64(r.delta1),
                fmt_opt(r.delta2),
                fmt_f64(r.step),
                fmt_opt(r.gx_norm),
                fmt_opt(r.gx_norm.map(|g| g * g)),
                r.checks.to_string(),
                r.matvecs.to_string(),
            ])?;
        }
        finish_csv(w)
    }

    pub fn trials_to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(TRIAL_HEADER)?;
        for t in &self.trials {
            w.write_record([
                t.iteration.to_string(),
                fmt_f64(t.m_k),
                fmt_f64(t.delta1),
                fmt_f64(t.delta2),
                fmt_f64(t.loss),
                fmt_f64(t.trial_loss),
                fmt_f64(t.bound),
                t.accepted.to_string(),
            ])?;
        }
        finish_csv(w)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path, self.to_csv()?.as_bytes())
    }

    pub fn write_trials_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path, self.trials_to_csv()?.as_bytes())
    }
}
