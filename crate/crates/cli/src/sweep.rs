use crate::config::SweepConfig;
use crate::error::{CliError, CliResult};
use homflow_core::{integrate, monitors, Case, MetricParams, Termination, Verdict};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub index: usize,
    pub initial: MetricParams,
    pub termination_kind: &'static str,
    pub termination: Termination,
    pub extinction_time: Option<f64>,
    pub t_g: Option<f64>,
    /// `t_g` exists and precedes the end of the trajectory.
    pub scal_crossed_before_end: bool,
    pub end_time: f64,
    pub accepted_steps: usize,
    pub monitors_passed: bool,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TerminationCounts {
    pub extinct: usize,
    pub horizon: usize,
    pub step_collapse: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub case: Case,
    pub points: usize,
    pub counts: TerminationCounts,
    pub monitor_failures: usize,
    pub scal_threshold_missed: usize,
    pub records: Vec<SweepRecord>,
}

fn record(index: usize, m0: &MetricParams, cfg: &SweepConfig) -> CliResult<SweepRecord> {
    let traj = integrate(m0, &cfg.opts).map_err(|e| CliError::Config(e.to_string()))?;
    let report = monitors(&traj);
    let end_time = traj.end_time();
    Ok(SweepRecord {
        index,
        initial: *m0,
        termination_kind: traj.termination.kind(),
        termination: traj.termination.clone(),
        extinction_time: traj.termination.extinction_time(),
        t_g: traj.t_scal_threshold,
        scal_crossed_before_end: traj.t_scal_threshold.is_some_and(|t| t < end_time),
        end_time,
        accepted_steps: traj.accepted_steps,
        monitors_passed: report.all_passed(),
        verdicts: report.verdicts.into_iter().filter(|v| v.applicable).collect(),
    })
}

/// Integrates every initial condition of the sweep. The parallel path
/// produces the same records in the same order as the serial one.
pub fn cmd_sweep(cfg: &SweepConfig, parallel: bool) -> CliResult<SweepReport> {
    let points = cfg.initial_conditions()?;
    let records: Vec<SweepRecord> = if parallel {
        points
            .par_iter()
            .enumerate()
            .map(|(i, m)| record(i, m, cfg))
            .collect::<CliResult<_>>()?
    } else {
        points
            .iter()
            .enumerate()
            .map(|(i, m)| record(i, m, cfg))
            .collect::<CliResult<_>>()?
    };
    let mut counts = TerminationCounts::default();
    for r in &records {
        match r.termination {
            Termination::Extinct { .. } => counts.extinct += 1,
            Termination::HorizonReached => counts.horizon += 1,
            Termination::StepCollapse { .. } => counts.step_collapse += 1,
        }
    }
    Ok(SweepReport {
        case: cfg.case,
        points: records.len(),
        counts,
        monitor_failures: records.iter().filter(|r| !r.monitors_passed).count(),
        scal_threshold_missed: records.iter().filter(|r| !r.scal_crossed_before_end).count(),
        records,
    })
}
