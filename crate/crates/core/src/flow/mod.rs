//! Ricci flow `dg/dt = -2 Ric(g)` restricted to the five-parameter family.

mod dopri;
mod monitor;

pub use dopri::{DenseStep, StepOutcome, Stepper, StepperOptions};
pub use monitor::{
    identity_residuals, monitors, time_to_scal, IdentityResidual, MonitorReport, Trend, Verdict,
};

use crate::algebra::HomogeneousModel;
use crate::error::{Error, Result};
use crate::metric::MetricParams;
use crate::ricci::scalar_curvature;
use crate::Case;
use serde::{Deserialize, Serialize};

/// `(α̇, β̇, γ̇, μ̇, ν̇)` of the flow at `m`.
pub fn flow_rhs(m: &MetricParams) -> Result<[f64; 5]> {
    m.validate()?;
    Ok(rhs_unchecked(m))
}

fn rhs_unchecked(m: &MetricParams) -> [f64; 5] {
    let (a, b, c, mu, nu) = (m.alpha, m.beta, m.gamma, m.mu, m.nu);
    let tau = m.tau();
    let d = b * c - tau;
    let a2 = a * a;
    let b2 = b * b;
    match m.case {
        Case::So3R3 => [
            2.0 * (b2 - a2) / d - 4.0 * a2 * nu * nu / (d * d),
            b / a * (a2 - b2) / d,
            -4.0 + 2.0 * b / a + c / a * (a2 - b2) / d,
            mu / (a * d) * (a2 - b2),
            -nu / (a * d) * (a2 + b2),
        ],
        Case::Sl2C => {
            let k = -a2 + 16.0 * b * c;
            [
                2.0 * (16.0 * b * c - a2) / d,
                -b * (16.0 * tau - a2) / (a * d),
                -c * (16.0 * tau - a2) / (a * d),
                8.0 - mu / (a * d) * k,
                -nu / (a * d) * k,
            ]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorOptions {
    pub horizon: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Extinction is declared once `λ-` or `α` drops below this fraction of
    /// its initial value.
    pub extinction_tol: f64,
    /// Spacing of the uniformly sampled monitor grid.
    pub sample_stride: f64,
    /// Scalar-curvature level whose first crossing time is recorded.
    pub scal_threshold: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            horizon: 1e3,
            rtol: 1e-9,
            atol: 1e-12,
            extinction_tol: 1e-8,
            sample_stride: 1e-3,
            scal_threshold: 1.0,
        }
    }
}

/// Accepted steps shorter than this fraction of `max(1, t)` end the run.
pub const MIN_STEP_REL: f64 = 1e-13;
/// Safety cap on accepted steps per trajectory.
pub const MAX_STEPS: usize = 2_000_000;

impl IntegratorOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidOptions(msg.to_string()));
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return bad("horizon must be finite and non-negative");
        }
        if !(self.rtol > 0.0 && self.rtol.is_finite()) || !(self.atol > 0.0 && self.atol.is_finite()) {
            return bad("rtol and atol must be positive");
        }
        if !(self.extinction_tol > 0.0 && self.extinction_tol < 1.0) {
            return bad("extinction_tol must lie in (0, 1)");
        }
        if !(self.sample_stride > 0.0 && self.sample_stride.is_finite()) {
            return bad("sample_stride must be positive");
        }
        if self.scal_threshold.is_nan() {
            return bad("scal_threshold must not be NaN");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowState {
    pub t: f64,
    pub m: MetricParams,
}

/// Diagnostic quantities at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonitorSample {
    pub t: f64,
    pub m: MetricParams,
    /// `τ/(βγ)`.
    pub eps: f64,
    /// `β/α` on `SO(3)⋉R³`, `α/β` on `SL(2,C)`.
    pub x: f64,
    pub scal: f64,
    pub lambda_min: f64,
    /// `μ/√τ` (`SL(2,C)` only, τ > 0).
    pub mu_over_sqrt_tau: Option<f64>,
    /// `ν·√α` (`SL(2,C)` only).
    pub nu_sqrt_alpha: Option<f64>,
}

impl MonitorSample {
    pub fn new(model: &HomogeneousModel, t: f64, m: &MetricParams) -> Self {
        let scal = scalar_curvature(model, m).unwrap_or(f64::NAN);
        let tau = m.tau();
        let (x, mu_over_sqrt_tau, nu_sqrt_alpha) = match m.case {
            Case::So3R3 => (m.beta / m.alpha, None, None),
            Case::Sl2C => (
                m.alpha / m.beta,
                (tau > 0.0).then(|| m.mu / tau.sqrt()),
                Some(m.nu * m.alpha.sqrt()),
            ),
        };
        Self {
            t,
            m: *m,
            eps: m.eps(),
            x,
            scal,
            lambda_min: m.lambda_min(),
            mu_over_sqrt_tau,
            nu_sqrt_alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    /// The metric degenerated; `t_est` is the refined extinction time.
    Extinct { t_est: f64 },
    HorizonReached,
    /// The step size collapsed (or the step budget ran out) before either
    /// extinction criterion fired.
    StepCollapse { t: f64, step: f64, reason: String },
}

impl Termination {
    pub fn kind(&self) -> &'static str {
        match self {
            Termination::Extinct { .. } => "extinct",
            Termination::HorizonReached => "horizon_reached",
            Termination::StepCollapse { .. } => "step_collapse",
        }
    }

    pub fn extinction_time(&self) -> Option<f64> {
        match self {
            Termination::Extinct { t_est } => Some(*t_est),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub case: Case,
    pub opts: IntegratorOptions,
    /// Every accepted step, starting with the initial state.
    pub states: Vec<FlowState>,
    /// Uniform grid `k·sample_stride` from dense output, plus the final state.
    pub samples: Vec<MonitorSample>,
    pub termination: Termination,
    /// First time the scalar curvature reaches `opts.scal_threshold`.
    pub t_scal_threshold: Option<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn initial(&self) -> &MetricParams {
        &self.states[0].m
    }

    pub fn last(&self) -> &FlowState {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn end_time(&self) -> f64 {
        self.last().t
    }
}

/// `min(λ-(m)/λ-(m0), α/α0)`; degeneration drives it to zero.
fn health(m: &MetricParams, lambda0: f64, alpha0: f64) -> f64 {
    let v = (m.lambda_min() / lambda0).min(m.alpha / alpha0);
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Integrates the flow from `m0` until extinction, the horizon, or a step
/// collapse.
pub fn integrate(m0: &MetricParams, opts: &IntegratorOptions) -> Result<Trajectory> {
    m0.validate()?;
    opts.validate()?;
    let case = m0.case;
    let model = case.model();
    let lambda0 = m0.lambda_min();
    let alpha0 = m0.alpha;

    let mut traj = Trajectory {
        case,
        opts: *opts,
        states: vec![FlowState { t: 0.0, m: *m0 }],
        samples: vec![MonitorSample::new(&model, 0.0, m0)],
        termination: Termination::HorizonReached,
        t_scal_threshold: None,
        accepted_steps: 0,
        rejected_steps: 0,
    };
    if opts.horizon == 0.0 {
        traj.t_scal_threshold = time_to_scal(&traj, opts.scal_threshold);
        return Ok(traj);
    }

    let rhs = |_t: f64, y: &[f64; 5]| {
        let m = MetricParams::from_array(case, *y);
        m.is_valid().then(|| rhs_unchecked(&m))
    };
    let stepper_opts = StepperOptions {
        rtol: opts.rtol,
        atol: opts.atol,
        min_step_rel: MIN_STEP_REL,
    };
    let mut stepper = Stepper::new(rhs, 0.0, m0.to_array(), stepper_opts).expect("m0 validated");
    let mut next_sample = 1usize;

    let push_samples_until = |traj: &mut Trajectory, step: &DenseStep<5>, t_stop: f64, k: &mut usize| {
        loop {
            let ts = *k as f64 * opts.sample_stride;
            if ts > t_stop || ts > step.t1 {
                break;
            }
            let m = MetricParams::from_array(case, step.interpolate(ts));
            if m.is_valid() {
                traj.samples.push(MonitorSample::new(&model, ts, &m));
            }
            *k += 1;
        }
    };

    loop {
        if stepper.accepted >= MAX_STEPS {
            traj.termination = Termination::StepCollapse {
                t: stepper.t(),
                step: f64::NAN,
                reason: format!("step budget of {MAX_STEPS} exhausted"),
            };
            break;
        }
        match stepper.step(opts.horizon) {
            StepOutcome::Collapse { t, h, reason } => {
                traj.termination = Termination::StepCollapse {
                    t,
                    step: h,
                    reason: reason.to_string(),
                };
                break;
            }
            StepOutcome::Accepted(step) => {
                let m1 = MetricParams::from_array(case, step.y1);
                if health(&m1, lambda0, alpha0) < opts.extinction_tol {
                    let (t_lo, t_hi) = bisect_crossing(&step, |y| {
                        health(&MetricParams::from_array(case, *y), lambda0, alpha0) - opts.extinction_tol
                    });
                    push_samples_until(&mut traj, &step, t_lo, &mut next_sample);
                    let m_end = MetricParams::from_array(case, step.interpolate(t_hi));
                    traj.states.push(FlowState { t: t_hi, m: m_end });
                    if m_end.is_valid() && traj.samples.last().is_none_or(|s| s.t < t_hi) {
                        traj.samples.push(MonitorSample::new(&model, t_hi, &m_end));
                    }
                    traj.termination = Termination::Extinct { t_est: t_hi };
                    break;
                }
                push_samples_until(&mut traj, &step, step.t1, &mut next_sample);
                traj.states.push(FlowState { t: step.t1, m: m1 });
                if step.t1 >= opts.horizon {
                    if traj.samples.last().is_none_or(|s| s.t < step.t1) {
                        traj.samples.push(MonitorSample::new(&model, step.t1, &m1));
                    }
                    traj.termination = Termination::HorizonReached;
                    break;
                }
            }
        }
    }
    traj.accepted_steps = stepper.accepted;
    traj.rejected_steps = stepper.rejected;
    traj.t_scal_threshold = time_to_scal(&traj, opts.scal_threshold);
    Ok(traj)
}

/// Brackets the first sign change of `g` (positive at `t0`, negative at
/// `t1`) on the dense output of `step`, to well below 1e-6 absolute.
fn bisect_crossing(step: &DenseStep<5>, g: impl Fn(&[f64; 5]) -> f64) -> (f64, f64) {
    let (mut lo, mut hi) = (step.t0, step.t1);
    for _ in 0..200 {
        if hi - lo <= 1e-14 * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(&step.interpolate(mid)) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
