//! CSV renderings of bound and efficacy reports.
//!
//! Bound report columns are `k,tau,eps_hat,rho,valid`, one row per `(k, τ)`
//! cell ordered by `k` then by grid position. Invalid cells have an empty
//! `rho` and `valid = false`. The last row is the optimum, tagged
//! `valid = best`: `best_k,best_tau,eps_hat(best_tau),best_rho,best`.
//!
//! Efficacy tables have columns `trial,best_k,best_tau,best_rho,true_error,ratio`
//! followed by a `mean` row whose `ratio` is the average.

use std::io::Write;

use crate::bound::{BoundReport, EfficacyReport};
use crate::error::{Error, Result};

use super::snapshot::format_f64;

pub const BOUND_HEADER: [&str; 5] = ["k", "tau", "eps_hat", "rho", "valid"];
pub const EFFICACY_HEADER: [&str; 6] = ["trial", "best_k", "best_tau", "best_rho", "true_error", "ratio"];

pub fn write_bound_csv<W: Write>(report: &BoundReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BOUND_HEADER)?;
    for e in &report.rho {
        w.write_record([
            e.k.to_string(),
            format_f64(e.tau),
            format_f64(e.eps_hat),
            e.rho.map(format_f64).unwrap_or_default(),
            e.rho.is_some().to_string(),
        ])?;
    }
    w.write_record([
        report.best_k.to_string(),
        format_f64(report.best_tau),
        format_f64(report.best_eps()),
        format_f64(report.best_rho),
        "best".to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn bound_csv_string(report: &BoundReport) -> Result<String> {
    let mut buf = Vec::new();
    write_bound_csv(report, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::InvalidConfig(e.to_string()))
}

pub fn write_efficacy_csv<W: Write>(report: &EfficacyReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EFFICACY_HEADER)?;
    let err = format_f64(report.true_error);
    for t in &report.trials {
        w.write_record([
            t.trial.to_string(),
            t.best_k.to_string(),
            format_f64(t.best_tau),
            format_f64(t.best_rho),
            err.clone(),
            format_f64(t.ratio),
        ])?;
    }
    w.write_record(["mean", "", "", "", &err, &format_f64(report.mean_ratio)])?;
    w.flush()?;
    Ok(())
}
