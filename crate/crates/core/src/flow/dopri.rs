//! Dormand-Prince 5(4) stepper with the standard 4th-order continuous
//! extension.
//!
//! The right-hand side may refuse a point by returning `None` (for instance
//! when a stage leaves the domain of positive-definite metrics); the step is
//! then rejected and retried with a smaller size.

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

// 5th-order solution minus embedded 4th-order solution
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
/// Shrink factor after the right-hand side refuses a stage.
const REFUSAL_SHRINK: f64 = 0.25;

#[derive(Debug, Clone, Copy)]
pub struct StepperOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Steps below `min_step_rel · max(1, |t|)` count as a collapse.
    pub min_step_rel: f64,
}

/// One accepted step with its dense-output polynomial.
#[derive(Debug, Clone)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    pub fn h(&self) -> f64 {
        self.t1 - self.t0
    }

    /// State at `t ∈ [t0, t1]`.
    pub fn interpolate(&self, t: f64) -> [f64; N] {
        if t <= self.t0 {
            return self.y0;
        }
        if t >= self.t1 {
            return self.y1;
        }
        let s = (t - self.t0) / self.h();
        let s1 = 1.0 - s;
        let c = &self.cont;
        std::array::from_fn(|i| c[0][i] + (c[1][i] + (c[2][i] + (c[3][i] + c[4][i] * s1) * s) * s1) * s)
    }
}

#[derive(Debug, Clone)]
pub enum StepOutcome<const N: usize> {
    Accepted(DenseStep<N>),
    /// The step size fell below the floor; `reason` says why it was shrinking.
    Collapse { t: f64, h: f64, reason: &'static str },
}

pub struct Stepper<const N: usize, F> {
    rhs: F,
    opts: StepperOptions,
    t: f64,
    y: [f64; N],
    f: [f64; N],
    h: f64,
    pub accepted: usize,
    pub rejected: usize,
}

fn norm<const N: usize>(v: &[f64; N], y: &[f64; N], y1: &[f64; N], opts: &StepperOptions) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        let sc = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs());
        s += (v[i] / sc).powi(2);
    }
    (s / N as f64).sqrt()
}

impl<const N: usize, F> Stepper<N, F>
where
    F: FnMut(f64, &[f64; N]) -> Option<[f64; N]>,
{
    /// Returns `None` if the right-hand side refuses the initial point.
    pub fn new(mut rhs: F, t0: f64, y0: [f64; N], opts: StepperOptions) -> Option<Self> {
        let f0 = rhs(t0, &y0)?;
        let mut s = Self {
            rhs,
            opts,
            t: t0,
            y: y0,
            f: f0,
            h: 0.0,
            accepted: 0,
            rejected: 0,
        };
        s.h = s.initial_step();
        Some(s)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    fn min_step(&self) -> f64 {
        self.opts.min_step_rel * self.t.abs().max(1.0)
    }

    // Hairer, Nørsett & Wanner's starting-step heuristic.
    fn initial_step(&mut self) -> f64 {
        let d0 = norm(&self.y, &self.y, &self.y, &self.opts);
        let d1 = norm(&self.f, &self.y, &self.y, &self.opts);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1: [f64; N] = std::array::from_fn(|i| self.y[i] + h0 * self.f[i]);
        let Some(f1) = (self.rhs)(self.t + h0, &y1) else {
            return h0;
        };
        let df: [f64; N] = std::array::from_fn(|i| f1[i] - self.f[i]);
        let d2 = norm(&df, &self.y, &self.y, &self.opts) / h0;
        let big = d1.max(d2);
        let h1 = if big <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / big).powf(0.2)
        };
        (100.0 * h0).min(h1)
    }

    /// Advances one accepted step without passing `t_limit`.
    pub fn step(&mut self, t_limit: f64) -> StepOutcome<N> {
        let mut last_rejected = false;
        loop {
            let remaining = t_limit - self.t;
            let mut h = self.h.min(remaining);
            let land_on_limit = h >= remaining;
            if land_on_limit {
                h = remaining;
            }
            if h < self.min_step() && !land_on_limit {
                return StepOutcome::Collapse {
                    t: self.t,
                    h,
                    reason: if last_rejected {
                        "error control"
                    } else {
                        "step floor"
                    },
                };
            }

            match self.attempt(h) {
                Attempt::Refused => {
                    self.rejected += 1;
                    self.h = h * REFUSAL_SHRINK;
                    last_rejected = true;
                    if self.h < self.min_step() {
                        return StepOutcome::Collapse {
                            t: self.t,
                            h: self.h,
                            reason: "right-hand side not evaluable",
                        };
                    }
                }
                Attempt::Done { y1, f1, k, err } => {
                    if err <= 1.0 {
                        let t0 = self.t;
                        let t1 = if land_on_limit { t_limit } else { t0 + h };
                        let ydiff: [f64; N] = std::array::from_fn(|i| y1[i] - self.y[i]);
                        let bspl: [f64; N] = std::array::from_fn(|i| h * self.f[i] - ydiff[i]);
                        let c3: [f64; N] = std::array::from_fn(|i| ydiff[i] - h * f1[i] - bspl[i]);
                        let c4: [f64; N] = std::array::from_fn(|i| {
                            h * (0..7).map(|s| D[s] * k[s][i]).sum::<f64>()
                        });
                        let step = DenseStep {
                            t0,
                            t1,
                            y0: self.y,
                            y1,
                            cont: [self.y, ydiff, bspl, c3, c4],
                        };
                        let mut fac = if err == 0.0 {
                            FAC_MAX
                        } else {
                            (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
                        };
                        if last_rejected {
                            fac = fac.min(1.0);
                        }
                        // keep the proposal from a step that was only shortened to hit t_limit
                        self.h = if land_on_limit { self.h.max(h * fac) } else { h * fac };
                        self.t = t1;
                        self.y = y1;
                        self.f = f1;
                        self.accepted += 1;
                        return StepOutcome::Accepted(step);
                    }
                    self.rejected += 1;
                    last_rejected = true;
                    let fac = (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0);
                    self.h = h * fac;
                    if !err.is_finite() {
                        self.h = h * REFUSAL_SHRINK;
                    }
                }
            }
        }
    }

    fn attempt(&mut self, h: f64) -> Attempt<N> {
        let mut k = [[0.0; N]; 7];
        k[0] = self.f;
        for s in 1..7 {
            let ys: [f64; N] = std::array::from_fn(|i| {
                self.y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>()
            });
            match (self.rhs)(self.t + C[s] * h, &ys) {
                Some(v) if v.iter().all(|x| x.is_finite()) => k[s] = v,
                _ => return Attempt::Refused,
            }
        }
        // FSAL: the 7th stage is evaluated at the 5th-order solution
        let y1: [f64; N] = std::array::from_fn(|i| {
            self.y[i] + h * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>()
        });
        let e: [f64; N] = std::array::from_fn(|i| h * (0..7).map(|s| E[s] * k[s][i]).sum::<f64>());
        let err = norm(&e, &self.y, &y1, &self.opts);
        Attempt::Done { y1, f1: k[6], k, err }
    }
}

enum Attempt<const N: usize> {
    Refused,
    Done {
        y1: [f64; N],
        f1: [f64; N],
        k: [[f64; N]; 7],
        err: f64,
    },
}

#[cfg(test)]
mod tests {
    use super::*;

    const OPTS: StepperOptions = StepperOptions {
        rtol: 1e-10,
        atol: 1e-12,
        min_step_rel: 1e-13,
    };

    fn run<F>(rhs: F, y0: [f64; 2], t_end: f64) -> [f64; 2]
    where
        F: FnMut(f64, &[f64; 2]) -> Option<[f64; 2]>,
    {
        let mut st = Stepper::new(rhs, 0.0, y0, OPTS).unwrap();
        while st.t() < t_end {
            match st.step(t_end) {
                StepOutcome::Accepted(_) => {}
                StepOutcome::Collapse { .. } => panic!("collapse"),
            }
        }
        *st.y()
    }

    #[test]
    fn harmonic_oscillator() {
        let y = run(|_, y| Some([y[1], -y[0]]), [1.0, 0.0], 10.0);
        assert!((y[0] - 10f64.cos()).abs() < 1e-8);
        assert!((y[1] + 10f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn dense_output_matches_exact_solution() {
        let mut st = Stepper::new(|_, y: &[f64; 2]| Some([-y[0], 2.0 * y[1]]), 0.0, [1.0, 1.0], OPTS).unwrap();
        let StepOutcome::Accepted(step) = st.step(1.0) else {
            panic!()
        };
        for j in 0..=10 {
            let t = step.t0 + step.h() * j as f64 / 10.0;
            let y = step.interpolate(t);
            assert!((y[0] - (-t).exp()).abs() < 1e-9);
            assert!((y[1] - (2.0 * t).exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn lands_exactly_on_limit() {
        let mut st = Stepper::new(|_, _: &[f64; 1]| Some([1.0]), 0.0, [0.0], OPTS).unwrap();
        loop {
            match st.step(0.3) {
                StepOutcome::Accepted(s) if s.t1 == 0.3 => break,
                StepOutcome::Accepted(_) => {}
                StepOutcome::Collapse { .. } => panic!(),
            }
        }
        assert!((st.y()[0] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn refusal_near_singularity_collapses() {
        // y' = 1/(1-t) blows up at t = 1; refuse the right-hand side past it
        let rhs = |t: f64, _: &[f64; 1]| if t < 1.0 { Some([1.0 / (1.0 - t)]) } else { None };
        let mut st = Stepper::new(rhs, 0.0, [0.0], OPTS).unwrap();
        let mut collapsed = None;
        for _ in 0..100_000 {
            match st.step(2.0) {
                StepOutcome::Accepted(s) => assert!(s.t1 < 1.0),
                StepOutcome::Collapse { t, .. } => {
                    collapsed = Some(t);
                    break;
                }
            }
        }
        let t = collapsed.expect("should collapse before t = 1");
        assert!(t > 0.999 && t < 1.0);
    }
}
