//! Runtime monitors, derivative-identity residuals and the scalar-curvature
//! threshold time.

use super::{MonitorSample, Trajectory};
use crate::metric::MetricParams;
use crate::Case;
use serde::Serialize;

/// Pass/fail outcome of one monitored claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub claim: String,
    /// `false` when the claim's hypothesis does not hold for this trajectory.
    pub applicable: bool,
    pub passed: bool,
    /// Worst observed violation (monitor-specific units, see [`monitors`]).
    pub worst: f64,
}

impl Verdict {
    fn skipped(claim: &str) -> Self {
        Self {
            claim: claim.to_string(),
            applicable: false,
            passed: true,
            worst: 0.0,
        }
    }

    fn checked(claim: &str, worst: f64, passed: bool) -> Self {
        Self {
            claim: claim.to_string(),
            applicable: true,
            passed,
            worst,
        }
    }
}

/// Drift of a quantity over the final tenth of the sampled horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trend {
    pub quantity: String,
    pub last: f64,
    pub drift: f64,
    pub window: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonitorReport {
    pub verdicts: Vec<Verdict>,
    pub trends: Vec<Trend>,
}

impl MonitorReport {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn get(&self, claim: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.claim == claim)
    }
}

pub const EPS_MONOTONE: &str = "eps_non_increasing";
pub const X_SIGN: &str = "x_sign_changes_at_most_once";
pub const MU_RATIO: &str = "mu_over_sqrt_tau_non_decreasing";
pub const NU_CONSERVED: &str = "nu_sqrt_alpha_conserved";
pub const MU_ZERO: &str = "mu_stays_zero";
pub const BETA_GAMMA: &str = "beta_equals_gamma";

const EPS_SLACK: f64 = 1e-12;
/// Half-width of the dead band around the `x` pivot, in units of `rtol`.
const SIGN_BAND_RTOL: f64 = 10.0;
const MU_RATIO_SLACK: f64 = 1e-10;
const NU_REL_TOL: f64 = 1e-6;
const MU_ZERO_TOL: f64 = 1e-10;
const BETA_GAMMA_TOL: f64 = 1e-8;

/// Sign changes of `values`, ignoring entries with `|v| <= band`.
fn sign_changes(values: impl Iterator<Item = f64>, band: f64) -> usize {
    let mut last = 0.0_f64;
    let mut changes = 0;
    for v in values {
        if v.abs() <= band || v.is_nan() {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// Evaluates the monotonicity and conservation claims over the sampled
/// horizon.
///
/// `worst` is the largest increase of ε, the number of sign changes of
/// `x - 1` (`x - 4`), the largest decrease of `μ/√τ`, the relative drift of
/// `ν√α`, `max |μ|` and `max |β-γ|/β` respectively.
pub fn monitors(traj: &Trajectory) -> MonitorReport {
    let s = &traj.samples;
    let m0 = traj.initial();
    let mut verdicts = Vec::with_capacity(6);

    verdicts.push(if traj.case == Case::So3R3 && m0.tau() > 0.0 {
        let worst = s
            .windows(2)
            .map(|w| w[1].eps - w[0].eps - EPS_SLACK * w[0].eps)
            .fold(f64::NEG_INFINITY, f64::max);
        Verdict::checked(EPS_MONOTONE, worst.max(0.0), worst <= 0.0)
    } else {
        Verdict::skipped(EPS_MONOTONE)
    });

    let pivot = match traj.case {
        Case::So3R3 => 1.0,
        Case::Sl2C => 4.0,
    };
    // differences below the integration tolerance carry no sign
    let band = SIGN_BAND_RTOL * traj.opts.rtol * pivot;
    let changes = sign_changes(s.iter().map(|p| p.x - pivot), band);
    verdicts.push(Verdict::checked(X_SIGN, changes as f64, changes <= 1));

    verdicts.push(if traj.case == Case::Sl2C {
        let ratios: Vec<f64> = s.iter().filter_map(|p| p.mu_over_sqrt_tau).collect();
        let worst = ratios
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max);
        Verdict::checked(MU_RATIO, worst, worst <= MU_RATIO_SLACK)
    } else {
        Verdict::skipped(MU_RATIO)
    });

    verdicts.push(if traj.case == Case::Sl2C {
        let q0 = m0.nu * m0.alpha.sqrt();
        let scale = q0.abs().max(f64::MIN_POSITIVE);
        let worst = s
            .iter()
            .filter_map(|p| p.nu_sqrt_alpha)
            .map(|q| (q - q0).abs() / scale)
            .fold(0.0, f64::max);
        let passed = if q0 == 0.0 { worst == 0.0 } else { worst <= NU_REL_TOL };
        Verdict::checked(NU_CONSERVED, worst, passed)
    } else {
        Verdict::skipped(NU_CONSERVED)
    });

    verdicts.push(if traj.case == Case::So3R3 && m0.mu == 0.0 {
        let worst = s.iter().map(|p| p.m.mu.abs()).fold(0.0, f64::max);
        Verdict::checked(MU_ZERO, worst, worst <= MU_ZERO_TOL)
    } else {
        Verdict::skipped(MU_ZERO)
    });

    verdicts.push(if traj.case == Case::Sl2C && m0.beta == m0.gamma {
        let worst = s
            .iter()
            .map(|p| (p.m.beta - p.m.gamma).abs() / p.m.beta)
            .fold(0.0, f64::max);
        Verdict::checked(BETA_GAMMA, worst, worst <= BETA_GAMMA_TOL)
    } else {
        Verdict::skipped(BETA_GAMMA)
    });

    let trends = vec![trend(s, "x", |p| p.x), trend(s, "eps", |p| p.eps)];
    MonitorReport { verdicts, trends }
}

fn trend(s: &[MonitorSample], name: &str, f: impl Fn(&MonitorSample) -> f64) -> Trend {
    let last = s.last().expect("trajectory has samples");
    let t_end = last.t;
    let window = 0.1 * (t_end - s[0].t);
    let start = s
        .iter()
        .find(|p| p.t >= t_end - window)
        .unwrap_or(last);
    Trend {
        quantity: name.to_string(),
        last: f(last),
        drift: f(last) - f(start),
        window: t_end - start.t,
    }
}

/// First time the sampled scalar curvature reaches `threshold`, linearly
/// interpolated between neighbouring samples.
pub fn time_to_scal(traj: &Trajectory, threshold: f64) -> Option<f64> {
    let mut prev: Option<&MonitorSample> = None;
    for p in traj.samples.iter().filter(|p| !p.scal.is_nan()) {
        if p.scal >= threshold {
            return Some(match prev {
                None => p.t,
                Some(q) => q.t + (threshold - q.scal) / (p.scal - q.scal) * (p.t - q.t),
            });
        }
        prev = Some(p);
    }
    None
}

/// Comparison of a derivative identity against finite differences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub name: String,
    /// `true` for identities as printed, `false` for the re-derived forms
    /// reported alongside them.
    pub printed: bool,
    /// Max `|FD - analytic|` over the window, divided by max `|analytic|`.
    /// `None` when the window holds fewer than five grid samples.
    pub max_rel_residual: Option<f64>,
    pub points: usize,
}

/// Identity checks stop at the first sample where `λ-` or `α` has fallen
/// below this fraction of its initial value; derivatives blow up past it.
pub const IDENTITY_WINDOW: f64 = 0.5;

struct Identity {
    name: &'static str,
    printed: bool,
    /// Monitored quantity `q(m)`.
    q: fn(&MetricParams) -> f64,
    /// Analytic `dq/dt`.
    dq: fn(&MetricParams) -> f64,
}

fn eps(m: &MetricParams) -> f64 {
    m.eps()
}

fn d(m: &MetricParams) -> f64 {
    m.beta * m.gamma - m.tau()
}

fn so3r3_identities() -> Vec<Identity> {
    vec![
        Identity {
            name: "gamma_over_beta",
            printed: true,
            q: |m| m.gamma / m.beta,
            dq: |m| 2.0 / m.beta * (m.beta / m.alpha - 2.0),
        },
        Identity {
            name: "eps_log",
            printed: true,
            q: eps,
            dq: |m| {
                let (e, x) = (m.eps(), m.beta / m.alpha);
                let poly = (1.0 - e) * x * x - (2.0 * e - 2.0) * x + 2.0;
                e * (-2.0 * m.alpha / ((1.0 - e) * m.beta * m.gamma) * poly)
            },
        },
        Identity {
            name: "eps_log_direct",
            printed: false,
            q: eps,
            dq: |m| {
                let x = m.beta / m.alpha;
                m.eps() * (-4.0 * m.alpha / d(m) + (4.0 - 2.0 * x) / m.gamma)
            },
        },
        Identity {
            name: "x_dot",
            printed: true,
            q: |m| m.beta / m.alpha,
            dq: |m| {
                let (e, x) = (m.eps(), m.beta / m.alpha);
                3.0 * m.beta / d(m) * (4.0 * e / (3.0 * (1.0 - e)) - (x * x - 1.0))
            },
        },
        Identity {
            name: "log_tau_over_beta2",
            printed: true,
            q: |m| m.tau() / (m.beta * m.beta),
            dq: |m| m.tau() / (m.beta * m.beta) * (-4.0 * m.alpha / d(m)),
        },
    ]
}

fn sl2c_identities() -> Vec<Identity> {
    fn x_log(m: &MetricParams, scale: f64, denom: f64) -> f64 {
        let (e, x) = (m.eps(), m.alpha / m.beta);
        x * scale / (m.alpha * denom) * (16.0 * e + 32.0 - 3.0 * x * x)
    }
    vec![
        Identity {
            name: "x_log",
            printed: true,
            q: |m| m.alpha / m.beta,
            dq: |m| x_log(m, m.beta * m.beta, 1.0 - m.eps()),
        },
        Identity {
            name: "x_log_one_minus_eps_squared",
            printed: true,
            q: |m| m.alpha / m.beta,
            dq: |m| x_log(m, m.beta * m.beta, 1.0 - m.eps() * m.eps()),
        },
        Identity {
            name: "x_log_direct",
            printed: false,
            q: |m| m.alpha / m.beta,
            dq: |m| x_log(m, 1.0, 1.0 - m.eps()),
        },
        Identity {
            name: "eps_log",
            printed: true,
            q: eps,
            dq: |m| {
                let tau = m.tau();
                if tau == 0.0 {
                    return 0.0;
                }
                let (e, x, st) = (m.eps(), m.alpha / m.beta, tau.sqrt());
                e * 16.0 / st * (m.mu / st - 2.0 * e.sqrt() / x)
            },
        },
    ]
}

/// Whether the identities of `case` hold on this trajectory's invariant
/// slice: `μ ≡ 0` for `SO(3)⋉R³`, `β ≡ γ` for `SL(2,C)`.
fn on_reduced_slice(m0: &MetricParams) -> bool {
    match m0.case {
        Case::So3R3 => m0.mu == 0.0,
        Case::Sl2C => m0.beta == m0.gamma,
    }
}

/// Max relative residual of every derivative identity up to the
/// [`IDENTITY_WINDOW`] cut-off, using the centred five-point difference on
/// the uniform sample grid.
///
/// Identities are only evaluated on the reduced slice they were derived on;
/// an empty vector is returned otherwise.
pub fn identity_residuals(traj: &Trajectory) -> Vec<IdentityResidual> {
    if !on_reduced_slice(traj.initial()) {
        return Vec::new();
    }
    let ids = match traj.case {
        Case::So3R3 => so3r3_identities(),
        Case::Sl2C => sl2c_identities(),
    };
    let s = &traj.samples;
    let (lambda0, alpha0) = (s[0].lambda_min, s[0].m.alpha);
    let n = s
        .iter()
        .take_while(|p| p.lambda_min >= IDENTITY_WINDOW * lambda0 && p.m.alpha >= IDENTITY_WINDOW * alpha0)
        .count();
    let h = traj.opts.sample_stride;
    // centres whose four neighbours all sit on the uniform grid
    let centres: Vec<usize> = (2..n.saturating_sub(2))
        .filter(|&k| {
            (k - 2..k + 2).all(|j| ((s[j + 1].t - s[j].t) - h).abs() <= 1e-9 * h)
        })
        .collect();

    ids.into_iter()
        .map(|id| {
            if centres.is_empty() {
                return IdentityResidual {
                    name: id.name.to_string(),
                    printed: id.printed,
                    max_rel_residual: None,
                    points: 0,
                };
            }
            let mut max_err = 0.0_f64;
            let mut max_ref = 0.0_f64;
            for &k in &centres {
                let q = |j: usize| (id.q)(&s[j].m);
                let fd = (q(k - 2) - 8.0 * q(k - 1) + 8.0 * q(k + 1) - q(k + 2)) / (12.0 * h);
                let exact = (id.dq)(&s[k].m);
                max_err = max_err.max((fd - exact).abs());
                max_ref = max_ref.max(exact.abs());
            }
            let rel = if max_ref > 0.0 { max_err / max_ref } else { max_err };
            IdentityResidual {
                name: id.name.to_string(),
                printed: id.printed,
                max_rel_residual: Some(rel),
                points: centres.len(),
            }
        })
        .collect()
}
