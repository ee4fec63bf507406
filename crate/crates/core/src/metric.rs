//! Isotropy-invariant metrics on the complement `p`.
//!
//! Both spaces share the same five-parameter shape in their complement
//! basis `(p0, p1, p2, p3, p4)`:
//!
//! ```text
//!     | α  0  0  0  0 |
//!     | 0  β  0  μ  ν |
//! g = | 0  0  β -ν  μ |
//!     | 0  μ -ν  γ  0 |
//!     | 0  ν  μ  0  γ |
//! ```
//!
//! On the 4×4 block the metric has the two double eigenvalues `λ±`, the
//! roots of `(λ - β)(λ - γ) = τ` with `τ = μ² + ν²`.

use crate::error::{Error, Result};
use crate::{Case, Mat5, Vec5};
use serde::{Deserialize, Serialize};

/// Below `TAU_DIAGONAL_CUTOFF · (β² + γ²)` the diagonal frame is used.
pub const TAU_DIAGONAL_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    pub case: Case,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mu: f64,
    pub nu: f64,
}

/// Assembles a matrix with the metric's invariance pattern.
pub(crate) fn metric_shaped(a: f64, b: f64, c: f64, m: f64, n: f64) -> Mat5 {
    #[rustfmt::skip]
    let g = Mat5::new(
        a,   0.0, 0.0, 0.0, 0.0,
        0.0, b,   0.0, m,   n,
        0.0, 0.0, b,   -n,  m,
        0.0, m,   -n,  c,   0.0,
        0.0, n,   m,   0.0, c,
    );
    g
}

impl MetricParams {
    /// Validated constructor.
    pub fn new(case: Case, alpha: f64, beta: f64, gamma: f64, mu: f64, nu: f64) -> Result<Self> {
        let m = Self::unchecked(case, alpha, beta, gamma, mu, nu);
        m.validate()?;
        Ok(m)
    }

    pub const fn unchecked(case: Case, alpha: f64, beta: f64, gamma: f64, mu: f64, nu: f64) -> Self {
        Self {
            case,
            alpha,
            beta,
            gamma,
            mu,
            nu,
        }
    }

    pub fn from_array(case: Case, p: [f64; 5]) -> Self {
        Self::unchecked(case, p[0], p[1], p[2], p[3], p[4])
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.alpha, self.beta, self.gamma, self.mu, self.nu]
    }

    /// `τ = μ² + ν²`.
    pub fn tau(&self) -> f64 {
        self.mu * self.mu + self.nu * self.nu
    }

    /// `βγ - τ`, the determinant of each 2×2 eigen-block; positive iff the
    /// 4×4 block is positive definite (given β, γ > 0).
    pub fn block_det(&self) -> f64 {
        self.beta * self.gamma - self.tau()
    }

    /// `ε = τ / (βγ)`.
    pub fn eps(&self) -> f64 {
        self.tau() / (self.beta * self.gamma)
    }

    pub fn validate(&self) -> Result<()> {
        let reason = if !self.to_array().iter().all(|v| v.is_finite()) {
            Some("non-finite parameter")
        } else if self.alpha <= 0.0 || self.beta <= 0.0 || self.gamma <= 0.0 {
            Some("alpha, beta and gamma must be positive")
        } else if self.block_det() <= 0.0 {
            Some("beta*gamma - (mu^2 + nu^2) must be positive")
        } else {
            None
        };
        match reason {
            None => Ok(()),
            Some(reason) => Err(Error::InvalidParams {
                alpha: self.alpha,
                beta: self.beta,
                gamma: self.gamma,
                mu: self.mu,
                nu: self.nu,
                reason,
            }),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Scalar product on `p` in the complement basis.
    pub fn metric_matrix(&self) -> Result<Mat5> {
        self.validate()?;
        Ok(self.matrix_unchecked())
    }

    pub(crate) fn matrix_unchecked(&self) -> Mat5 {
        metric_shaped(self.alpha, self.beta, self.gamma, self.mu, self.nu)
    }

    /// `(λ-, λ+)`, defined for any finite β, γ, τ; at τ = 0 this is
    /// `(min(β,γ), max(β,γ))`.
    pub(crate) fn lambdas_raw(&self) -> (f64, f64) {
        let (b, c, tau) = (self.beta, self.gamma, self.tau());
        let half_gap = 0.5 * (4.0 * tau + (b - c) * (b - c)).sqrt();
        let lp = 0.5 * (b + c) + half_gap;
        // smaller root from the product λ-·λ+ = βγ - τ
        let lm = (b * c - tau) / lp;
        (lm, lp)
    }

    /// The two double eigenvalues of the 4×4 block. Requires τ > 0.
    pub fn eigen_lambdas(&self) -> Result<(f64, f64)> {
        self.validate()?;
        if self.tau() == 0.0 {
            return Err(Error::DegenerateTau);
        }
        Ok(self.lambdas_raw())
    }

    /// Smallest eigenvalue of the metric on the 4×4 block, `λ-`; positive
    /// exactly when `βγ > τ`.
    pub fn lambda_min(&self) -> f64 {
        self.lambdas_raw().0
    }

    /// `λ± - γ`, the leading entry of `H±`, each computed without
    /// cancellation: the two values sum to `β - γ` and multiply to `-τ`.
    fn shifted_lambdas(&self) -> (f64, f64) {
        let (b, c, tau) = (self.beta, self.gamma, self.tau());
        let d = b - c;
        let half_gap = 0.5 * (4.0 * tau + d * d).sqrt();
        if d >= 0.0 {
            let sp = 0.5 * d + half_gap;
            (-tau / sp, sp)
        } else {
            let sm = 0.5 * d - half_gap;
            (sm, -tau / sm)
        }
    }

    /// A g-orthonormal basis of `p` adapted to the eigenspaces.
    pub fn orthonormal_frame(&self) -> Result<Frame> {
        self.validate()?;
        let (a, b, c, mu, nu) = (self.alpha, self.beta, self.gamma, self.mu, self.nu);
        let tau = self.tau();
        let (lm, lp) = self.lambdas_raw();
        let first = Vec5::new(1.0 / a.sqrt(), 0.0, 0.0, 0.0, 0.0);

        if tau < TAU_DIAGONAL_CUTOFF * (b * b + c * c) {
            let sb = 1.0 / b.sqrt();
            let sc = 1.0 / c.sqrt();
            return Ok(Frame {
                lambda_minus: lm,
                lambda_plus: lp,
                normalizers: None,
                vectors: [
                    first,
                    Vec5::new(0.0, sb, 0.0, 0.0, 0.0),
                    Vec5::new(0.0, 0.0, sb, 0.0, 0.0),
                    Vec5::new(0.0, 0.0, 0.0, sc, 0.0),
                    Vec5::new(0.0, 0.0, 0.0, 0.0, sc),
                ],
            });
        }

        let (sm, sp) = self.shifted_lambdas();
        let f_minus = (lm * (tau + sm * sm)).sqrt();
        let f_plus = (lp * (tau + sp * sp)).sqrt();
        let h = |s: f64, f: f64| Vec5::new(0.0, s, 0.0, mu, nu) / f;
        let bv = |s: f64, f: f64| Vec5::new(0.0, 0.0, s, -nu, mu) / f;
        Ok(Frame {
            lambda_minus: lm,
            lambda_plus: lp,
            normalizers: Some((f_minus, f_plus)),
            vectors: [first, h(sm, f_minus), bv(sm, f_minus), h(sp, f_plus), bv(sp, f_plus)],
        })
    }

    /// An isometric metric with one parameter eliminated, and the parameter
    /// `t` of the conjugating one-parameter subgroup.
    ///
    /// * `SO(3)⋉R³`: conjugation by `exp(t c3)` with `t = μ/β` sets `μ = 0`.
    /// * `SL(2,C)`: conjugation by `exp(t A)` with `t = log(γ/β)/8` sets
    ///   `β = γ = √(βγ)`.
    pub fn gauge_reduce(&self) -> Result<(MetricParams, f64)> {
        self.validate()?;
        let mut out = *self;
        let t = match self.case {
            Case::So3R3 => {
                let t = self.mu / self.beta;
                out.gamma = self.gamma + t * t * self.beta - 2.0 * t * self.mu;
                out.mu = 0.0;
                t
            }
            Case::Sl2C => {
                let t = (self.gamma / self.beta).ln() / 8.0;
                let s = (self.beta * self.gamma).sqrt();
                out.beta = s;
                out.gamma = s;
                t
            }
        };
        Ok((out, t))
    }
}

/// g-orthonormal basis `(p0/√α, H-/f-, B-/f-, H+/f+, B+/f+)`, or the
/// diagonal basis when τ vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    /// `(f-, f+)`; `None` for the diagonal frame.
    pub normalizers: Option<(f64, f64)>,
    pub vectors: [Vec5; 5],
}

impl Frame {
    /// Columns are the frame vectors.
    pub fn as_matrix(&self) -> Mat5 {
        Mat5::from_columns(&self.vectors)
    }
}

/// `Ad(exp(t·Z))` on `p` for the one-parameter subgroup used by the gauge
/// reduction (`Z = c3` or `Z = A`).
pub fn adjoint_matrix(case: Case, t: f64) -> Mat5 {
    let mut m = Mat5::identity();
    match case {
        Case::So3R3 => {
            m[(1, 3)] = -t;
            m[(2, 4)] = -t;
        }
        Case::Sl2C => {
            let up = (2.0 * t).exp();
            let down = (-2.0 * t).exp();
            m[(1, 1)] = up;
            m[(2, 2)] = up;
            m[(3, 3)] = down;
            m[(4, 4)] = down;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(case: Case, a: f64, b: f64, c: f64, m: f64, n: f64) -> MetricParams {
        MetricParams::new(case, a, b, c, m, n).unwrap()
    }

    #[test]
    fn identity_metric() {
        let g = p(Case::So3R3, 1.0, 1.0, 1.0, 0.0, 0.0).metric_matrix().unwrap();
        assert_eq!(g, Mat5::identity());
    }

    #[test]
    fn cross_entries_placed() {
        let g = p(Case::So3R3, 1.0, 2.0, 3.0, 1.0, 0.0).metric_matrix().unwrap();
        assert_eq!(g[(1, 3)], 1.0); // g(c1, F)
        assert_eq!(g[(2, 4)], 1.0); // g(c2, G)
        assert_eq!(g[(1, 4)], 0.0);
        assert_eq!(g, g.transpose());
    }

    #[test]
    fn invalid_params_rejected() {
        for (a, b, c, m, n) in [
            (0.0, 1.0, 1.0, 0.0, 0.0),
            (1.0, -1.0, 1.0, 0.0, 0.0),
            (1.0, 1.0, 1.0, 1.0, 0.0),
            (1.0, 1.0, 1.0, 0.8, 0.8),
            (f64::NAN, 1.0, 1.0, 0.0, 0.0),
        ] {
            let m = MetricParams::unchecked(Case::Sl2C, a, b, c, m, n);
            assert!(matches!(m.metric_matrix(), Err(Error::InvalidParams { .. })));
        }
    }

    #[test]
    fn symmetric_lambdas() {
        let (lm, lp) = p(Case::So3R3, 1.0, 1.0, 1.0, 0.0, 0.5).eigen_lambdas().unwrap();
        assert_abs_diff_eq!(lm, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(lp, 1.5, epsilon = 1e-15);
    }

    #[test]
    fn lambdas_solve_quadratic() {
        let m = p(Case::So3R3, 1.0, 2.0, 3.0, 1.0, 0.0);
        let (lm, lp) = m.eigen_lambdas().unwrap();
        // (λ-2)(λ-3) = 1  =>  λ = (5 ± √5)/2
        assert_abs_diff_eq!(lm, (5.0 - 5f64.sqrt()) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(lp, (5.0 + 5f64.sqrt()) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(lm * lp, 2.0 * 3.0 - 1.0, epsilon = 1e-14);
        // numeric eigensolve of the full matrix
        let mut ev: Vec<f64> = m.metric_matrix().unwrap().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], lm, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[2], lm, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[3], lp, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[4], lp, epsilon = 1e-12);
    }

    #[test]
    fn lambdas_need_tau() {
        let m = p(Case::So3R3, 1.0, 2.0, 3.0, 0.0, 0.0);
        assert_eq!(m.eigen_lambdas(), Err(Error::DegenerateTau));
        assert_eq!(m.lambda_min(), 2.0);
    }

    #[test]
    fn lambda_min_sign_tracks_block_det() {
        let inside = MetricParams::unchecked(Case::So3R3, 1.0, 1.0, 1.0, 0.6, 0.79);
        let outside = MetricParams::unchecked(Case::So3R3, 1.0, 1.0, 1.0, 0.6, 0.81);
        assert!(inside.block_det() > 0.0 && inside.lambda_min() > 0.0);
        assert!(outside.block_det() < 0.0 && outside.lambda_min() < 0.0);
    }

    #[test]
    fn identity_frame_is_canonical() {
        let f = p(Case::Sl2C, 1.0, 1.0, 1.0, 0.0, 0.0).orthonormal_frame().unwrap();
        assert!(f.normalizers.is_none());
        assert_eq!(f.as_matrix(), Mat5::identity());
    }

    #[test]
    fn frame_formulas_symmetric_case() {
        let f = p(Case::So3R3, 1.0, 1.0, 1.0, 0.0, 0.5).orthonormal_frame().unwrap();
        let (fm, fp) = f.normalizers.unwrap();
        // λ± - γ = ±0.5, f± = √(λ±(τ + 0.25)) with τ = 0.25
        assert_abs_diff_eq!(fp, (1.5f64 * 0.5).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(fm, (0.5f64 * 0.5).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(f.vectors[3][1], 0.5 / fp, epsilon = 1e-15);
        assert_abs_diff_eq!(f.vectors[1][1], -0.5 / fm, epsilon = 1e-15);
        assert_abs_diff_eq!(f.vectors[3][4], 0.5 / fp, epsilon = 1e-15);
    }

    #[test]
    fn gauge_reduce_so3r3() {
        let (r, t) = p(Case::So3R3, 1.0, 2.0, 3.0, 1.0, 0.0).gauge_reduce().unwrap();
        assert_eq!(t, 0.5);
        assert_eq!(r.to_array(), [1.0, 2.0, 2.5, 0.0, 0.0]);
    }

    #[test]
    fn gauge_reduce_sl2c() {
        let (r, t) = p(Case::Sl2C, 1.0, 1.0, 4.0, 0.0, 0.0).gauge_reduce().unwrap();
        assert_abs_diff_eq!(t, 4f64.ln() / 8.0, epsilon = 1e-16);
        assert_eq!(r.to_array(), [1.0, 2.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn reduced_metric_is_fixed_point() {
        for m in [p(Case::So3R3, 1.0, 2.0, 3.0, 0.0, 0.4), p(Case::Sl2C, 1.0, 2.0, 2.0, 0.3, 0.1)] {
            let (r, t) = m.gauge_reduce().unwrap();
            assert_eq!(t, 0.0);
            assert_eq!(r, m);
        }
    }

    #[test]
    fn adjoint_matrices() {
        let a1 = adjoint_matrix(Case::So3R3, 1.0);
        let mut expect = Mat5::identity();
        expect[(1, 3)] = -1.0;
        expect[(2, 4)] = -1.0;
        assert_eq!(a1, expect);
        let t = 0.3;
        let a2 = adjoint_matrix(Case::Sl2C, t);
        let (e, d) = ((2.0 * t).exp(), (-2.0 * t).exp());
        assert_eq!(a2, Mat5::from_diagonal(&Vec5::new(1.0, e, e, d, d)));
        for case in Case::ALL {
            assert_eq!(adjoint_matrix(case, 0.0), Mat5::identity());
        }
    }
}
