use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{write_csv, write_json};
use homflow_core::{
    identity_residuals, integrate, monitors, IdentityResidual, IntegratorOptions, MetricParams,
    MonitorReport, Termination, Trajectory,
};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub initial: MetricParams,
    pub options: IntegratorOptions,
    pub termination_kind: &'static str,
    pub termination: Termination,
    pub extinction_time: Option<f64>,
    pub t_g: Option<f64>,
    pub end_time: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub samples: usize,
    pub monitors: MonitorReport,
    pub identity_residuals: Vec<IdentityResidual>,
}

impl RunSummary {
    pub fn new(traj: &Trajectory) -> Self {
        Self {
            initial: *traj.initial(),
            options: traj.opts,
            termination_kind: traj.termination.kind(),
            termination: traj.termination.clone(),
            extinction_time: traj.termination.extinction_time(),
            t_g: traj.t_scal_threshold,
            end_time: traj.end_time(),
            accepted_steps: traj.accepted_steps,
            rejected_steps: traj.rejected_steps,
            samples: traj.samples.len(),
            monitors: monitors(traj),
            identity_residuals: identity_residuals(traj),
        }
    }
}

/// Integrates one flow and writes the sampled trajectory and its summary.
pub fn cmd_run(cfg: &RunConfig) -> CliResult<RunSummary> {
    let traj = integrate(&cfg.initial, &cfg.opts).map_err(|e| CliError::Config(e.to_string()))?;
    let summary = RunSummary::new(&traj);
    write_csv(&cfg.out_csv, &traj.samples)?;
    write_json(&cfg.out_json, &summary)?;
    Ok(summary)
}
