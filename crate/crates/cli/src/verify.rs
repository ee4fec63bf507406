//! Self-contained verification suite run by `homflow verify`.

use homflow_core::ricci::{isotropy_pattern_residual, ricci_oracle_with_frame};
use homflow_core::{
    adjoint_matrix, flow_rhs, integrate, monitors, ricci_closed, ricci_oracle, Case,
    IntegratorOptions, Mat5, MetricParams, RicciComponents,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

/// Reference Killing form on the complement, `(c3, c1, c2, F, G)`.
pub const KILLING_SO3R3: [[f64; 5]; 5] = [
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -4.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, -4.0],
];

/// Reference Killing form on the complement, `(A, B, C, D, E)`.
pub const KILLING_SL2C: [[f64; 5]; 5] = [
    [16.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 8.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 8.0],
    [0.0, 8.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 8.0, 0.0, 0.0],
];

pub fn reference_killing(case: Case) -> Mat5 {
    let rows = match case {
        Case::So3R3 => KILLING_SO3R3,
        Case::Sl2C => KILLING_SL2C,
    };
    Mat5::from_fn(|i, j| rows[i][j])
}

pub const ALGEBRA_TOL: f64 = 1e-12;
pub const ORACLE_TOL: f64 = 1e-9;
pub const FRAME_TOL: f64 = 1e-10;
pub const GAUGE_TOL: f64 = 1e-10;
pub const RHS_TOL: f64 = 1e-12;

/// Log-uniform `α, β, γ ∈ [0.1, 10]`, `τ = εβγ` with `ε ∈ [0, 0.9)` and a
/// uniform phase for `(μ, ν)`.
pub fn sample_metric(case: Case, rng: &mut impl Rng) -> MetricParams {
    let mut lu = || 10f64.powf(rng.gen_range(-1.0..1.0));
    let (a, b, c) = (lu(), lu(), lu());
    let e: f64 = rng.gen_range(0.0..0.9);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (e * b * c).sqrt();
    MetricParams::new(case, a, b, c, r * phi.cos(), r * phi.sin()).expect("sampled inside the domain")
}

/// An initial condition on the reduced slice (`μ = 0`, resp. `β = γ`) with
/// parameters in `[0.5, 2]` and `ε ≤ 0.5`.
pub fn sample_flow_start(case: Case, rng: &mut impl Rng) -> MetricParams {
    let a = rng.gen_range(0.5..2.0);
    let b = rng.gen_range(0.5..2.0);
    let e: f64 = rng.gen_range(0.0..0.5);
    match case {
        Case::So3R3 => {
            let c = rng.gen_range(0.5..2.0);
            MetricParams::new(case, a, b, c, 0.0, (e * b * c).sqrt())
        }
        Case::Sl2C => {
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = e.sqrt() * b;
            MetricParams::new(case, a, b, b, r * phi.cos(), r * phi.sin())
        }
    }
    .expect("sampled inside the domain")
}

fn max_abs(m: &Mat5) -> f64 {
    m.iter().fold(0.0, |w, x| w.max(x.abs()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub tolerance: f64,
    pub worst: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: String, tolerance: f64, worst: f64) -> Self {
        Self {
            passed: worst <= tolerance,
            name,
            tolerance,
            worst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify: samples={} seed={}", self.samples, self.seed)?;
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<36} tol={:<8.1e} worst={:.3e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.tolerance,
                c.worst
            )?;
        }
        write!(f, "{} of {} checks passed", self.checks.len() - self.failures(), self.checks.len())
    }
}

fn structural(case: Case, out: &mut Vec<Check>) {
    let model = case.model();
    let rep = model.check();
    out.push(Check::new(format!("{case}/antisymmetry"), ALGEBRA_TOL, rep.antisymmetry));
    out.push(Check::new(format!("{case}/jacobi"), ALGEBRA_TOL, rep.jacobi));
    out.push(Check::new(format!("{case}/isotropy_invariance"), ALGEBRA_TOL, rep.isotropy_invariance));
    out.push(Check::new(format!("{case}/unimodular"), ALGEBRA_TOL, rep.max_abs_ad_trace));
    let killing = model.complement_killing().expect("five-dimensional complement");
    out.push(Check::new(
        format!("{case}/killing_table"),
        0.0,
        max_abs(&(killing - reference_killing(case))),
    ));
}

fn randomized(case: Case, samples: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Check>) {
    let model = case.model();
    let (mut frame, mut oracle, mut pattern) = (0.0f64, 0.0f64, 0.0f64);
    let (mut pullback, mut idem, mut equivariance, mut rhs) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let m = sample_metric(case, rng);
        let g = m.metric_matrix().expect("valid");
        let f = m.orthonormal_frame().expect("valid").as_matrix();
        frame = frame.max(max_abs(&(f.transpose() * g * f - Mat5::identity())));

        let ric = ricci_oracle_with_frame(&model, &m, &f).expect("unimodular");
        let closed = ricci_closed(&m).expect("valid");
        let scale = 1.0 + closed.max_abs();
        oracle = oracle.max(RicciComponents::from_matrix(case, &ric).max_abs_diff(&closed) / scale);
        pattern = pattern.max(isotropy_pattern_residual(&ric) / scale);

        let (r, t) = m.gauge_reduce().expect("valid");
        let ad = adjoint_matrix(case, t);
        let gr = r.metric_matrix().expect("valid");
        pullback = pullback.max(max_abs(&(ad.transpose() * g * ad - gr)) / (1.0 + max_abs(&gr)));
        let (rr, _) = r.gauge_reduce().expect("valid");
        idem = idem.max(
            r.to_array()
                .iter()
                .zip(rr.to_array())
                .fold(0.0, |w, (x, y)| w.max((x - y).abs() / x.abs().max(1.0))),
        );
        let ric_r = ricci_oracle(&model, &r).expect("valid");
        equivariance = equivariance
            .max(max_abs(&(ad.transpose() * ric * ad - ric_r)) / (1.0 + max_abs(&ric_r)));

        let d = flow_rhs(&m).expect("valid");
        rhs = d
            .iter()
            .zip(closed.to_array())
            .fold(rhs, |w, (d, c)| w.max((d + 2.0 * c).abs() / (1.0 + c.abs())));
    }
    out.push(Check::new(format!("{case}/frame_orthonormal"), FRAME_TOL, frame));
    out.push(Check::new(format!("{case}/oracle_vs_closed_form"), ORACLE_TOL, oracle));
    out.push(Check::new(format!("{case}/oracle_isotropy_pattern"), ORACLE_TOL, pattern));
    out.push(Check::new(format!("{case}/gauge_pullback"), GAUGE_TOL, pullback));
    out.push(Check::new(format!("{case}/gauge_idempotent"), GAUGE_TOL, idem));
    out.push(Check::new(format!("{case}/oracle_gauge_equivariant"), ORACLE_TOL, equivariance));
    out.push(Check::new(format!("{case}/rhs_is_minus_two_ricci"), RHS_TOL, rhs));

    let flows = samples.div_ceil(50);
    let opts = IntegratorOptions::default();
    let mut failed = 0usize;
    for _ in 0..flows {
        let m0 = sample_flow_start(case, rng);
        let ok = integrate(&m0, &opts)
            .map(|traj| monitors(&traj).all_passed())
            .unwrap_or(false);
        failed += usize::from(!ok);
    }
    out.push(Check::new(format!("{case}/flow_monitors ({flows} flows)"), 0.0, failed as f64));
}

/// Runs the structural checks and, for `samples > 0`, the randomized ones.
/// The same `seed` always produces the same report.
pub fn cmd_verify(samples: usize, seed: u64) -> VerifyReport {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in Case::ALL {
        structural(case, &mut checks);
        if samples > 0 {
            randomized(case, samples, &mut rng, &mut checks);
        }
    }
    VerifyReport { samples, seed, checks }
}
