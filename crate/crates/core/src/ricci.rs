//! Ricci tensors of the invariant metrics.
//!
//! Two independent routes are provided:
//!
//! * [`ricci_oracle`] evaluates the general formula for a unimodular group
//!   with reductive complement,
//!
//!   ```text
//!   Ric(X,Y) = -½ B(X,Y) - ½ Σ_i g([X,X_i]_p, [Y,X_i]_p)
//!              + ¼ Σ_{i,j} g([X_i,X_j]_p, X) g([X_i,X_j]_p, Y),
//!   ```
//!
//!   directly on the structure constants with `(X_i)` a g-orthonormal frame.
//! * [`ricci_closed`] evaluates closed-form rational expressions in the five
//!   metric parameters.

use crate::algebra::HomogeneousModel;
use crate::error::{Error, Result};
use crate::metric::{metric_shaped, MetricParams};
use crate::{Case, Mat5, Vec5};
use serde::{Deserialize, Serialize};

/// Ricci tensor coefficients in the metric's five slots:
/// `r_a = Ric(p0,p0)`, `r_b = Ric(p1,p1)`, `r_c = Ric(p3,p3)`,
/// `r_m = Ric(p1,p3)`, `r_n = Ric(p1,p4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicciComponents {
    pub case: Case,
    pub r_a: f64,
    pub r_b: f64,
    pub r_c: f64,
    pub r_m: f64,
    pub r_n: f64,
}

impl RicciComponents {
    /// Reads the five slots from a full 5×5 tensor.
    pub fn from_matrix(case: Case, ric: &Mat5) -> Self {
        Self {
            case,
            r_a: ric[(0, 0)],
            r_b: ric[(1, 1)],
            r_c: ric[(3, 3)],
            r_m: ric[(1, 3)],
            r_n: ric[(1, 4)],
        }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.r_a, self.r_b, self.r_c, self.r_m, self.r_n]
    }

    /// The 5×5 tensor with the metric's invariance pattern.
    pub fn matrix(&self) -> Mat5 {
        metric_shaped(self.r_a, self.r_b, self.r_c, self.r_m, self.r_n)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .fold(0.0, |w, (a, b)| w.max((a - b).abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0, |w, a| w.max(a.abs()))
    }
}

/// How far a symmetric 5×5 tensor is from the metric's invariance pattern:
/// equal diagonal pairs, cross block `[[m, n], [-n, m]]`, zeros elsewhere.
pub fn isotropy_pattern_residual(t: &Mat5) -> f64 {
    let mut worst = [
        t[(1, 1)] - t[(2, 2)],
        t[(3, 3)] - t[(4, 4)],
        t[(1, 3)] - t[(2, 4)],
        t[(1, 4)] + t[(2, 3)],
        t[(1, 2)],
        t[(3, 4)],
    ]
    .iter()
    .fold(0.0f64, |w, v| w.max(v.abs()));
    for k in 1..5 {
        worst = worst.max(t[(0, k)].abs()).max(t[(k, 0)].abs());
    }
    worst.max((t - t.transpose()).abs().max())
}

/// Besse-formula Ricci tensor using the eigenframe of `m`.
pub fn ricci_oracle(model: &HomogeneousModel, m: &MetricParams) -> Result<Mat5> {
    let frame = m.orthonormal_frame()?.as_matrix();
    ricci_oracle_with_frame(model, m, &frame)
}

/// Besse-formula Ricci tensor with an explicit g-orthonormal frame given as
/// the columns of `frame`. The result does not depend on the choice.
pub fn ricci_oracle_with_frame(model: &HomogeneousModel, m: &MetricParams, frame: &Mat5) -> Result<Mat5> {
    let trace = model
        .algebra
        .ad_traces()
        .into_iter()
        .fold(0.0f64, |w, t| w.max(t.abs()));
    if trace > crate::algebra::ALGEBRA_TOL {
        return Err(Error::NotUnimodular(trace));
    }
    let g = m.metric_matrix()?;
    let killing = model.complement_killing()?;
    let pb = model.projected_brackets()?;

    let bracket = |u: &Vec5, v: &Vec5| -> Vec5 {
        let mut out = Vec5::zeros();
        for a in 0..5 {
            if u[a] == 0.0 {
                continue;
            }
            for b in 0..5 {
                let w = u[a] * v[b];
                if w == 0.0 {
                    continue;
                }
                for c in 0..5 {
                    out[c] += w * pb[a][b][c];
                }
            }
        }
        out
    };
    let cols: Vec<Vec5> = (0..5).map(|i| frame.column(i).into_owned()).collect();
    let basis: Vec<Vec5> = (0..5)
        .map(|a| {
            let mut e = Vec5::zeros();
            e[a] = 1.0;
            e
        })
        .collect();

    // [e_a, X_i] for all a, i
    let ad_frame: Vec<Vec<Vec5>> = basis
        .iter()
        .map(|e| cols.iter().map(|x| bracket(e, x)).collect())
        .collect();
    // g([X_i, X_j], ·) as covectors
    let mut covectors = Vec::with_capacity(25);
    for xi in &cols {
        for xj in &cols {
            covectors.push(g * bracket(xi, xj));
        }
    }

    let mut ric = Mat5::zeros();
    for a in 0..5 {
        for b in a..5 {
            let second: f64 = (0..5)
                .map(|i| ad_frame[a][i].dot(&(g * ad_frame[b][i])))
                .sum();
            let third: f64 = covectors.iter().map(|w| w[a] * w[b]).sum();
            let r = -0.5 * killing[(a, b)] - 0.5 * second + 0.25 * third;
            ric[(a, b)] = r;
            ric[(b, a)] = r;
        }
    }
    Ok(ric)
}

/// Closed-form Ricci components on `SO(3)⋉R³/SO(2)`.
pub fn ricci_closed_so3r3(m: &MetricParams) -> Result<RicciComponents> {
    m.validate()?;
    let (a, b, c, mu, nu) = (m.alpha, m.beta, m.gamma, m.mu, m.nu);
    let d = m.block_det();
    let (a2, b2) = (a * a, b * b);
    Ok(RicciComponents {
        case: Case::So3R3,
        r_a: (a2 - b2) / d + 2.0 * a2 * nu * nu / (d * d),
        r_b: b / (2.0 * a) * (b2 - a2) / d,
        r_c: 2.0 - b / a + c / (2.0 * a) * (b2 - a2) / d,
        r_m: mu / (2.0 * a * d) * (b2 - a2),
        r_n: nu / (2.0 * a * d) * (a2 + b2),
    })
}

/// Closed-form Ricci components on `SL(2,C)/U(1)`.
pub fn ricci_closed_sl2c(m: &MetricParams) -> Result<RicciComponents> {
    m.validate()?;
    let (a, b, c, mu, nu) = (m.alpha, m.beta, m.gamma, m.mu, m.nu);
    let d = m.block_det();
    let tau = m.tau();
    let a2 = a * a;
    let k = -a2 + 16.0 * b * c;
    Ok(RicciComponents {
        case: Case::Sl2C,
        r_a: (a2 - 16.0 * b * c) / d,
        r_b: b * (16.0 * tau - a2) / (2.0 * a * d),
        r_c: c * (16.0 * tau - a2) / (2.0 * a * d),
        r_m: -4.0 + mu / (2.0 * a * d) * k,
        r_n: nu / (2.0 * a * d) * k,
    })
}

pub fn ricci_closed(m: &MetricParams) -> Result<RicciComponents> {
    match m.case {
        Case::So3R3 => ricci_closed_so3r3(m),
        Case::Sl2C => ricci_closed_sl2c(m),
    }
}

/// `tr(g⁻¹ Ric)` with `Ric` from the oracle.
pub fn scalar_curvature(model: &HomogeneousModel, m: &MetricParams) -> Result<f64> {
    let ric = ricci_oracle(model, m)?;
    Ok(trace_against(m, &ric))
}

/// `tr(g⁻¹ T)` for a symmetric tensor `T` on `p`; `m` must be valid.
pub fn trace_against(m: &MetricParams, t: &Mat5) -> f64 {
    let g = m.matrix_unchecked();
    match g.cholesky() {
        Some(ch) => ch.solve(t).trace(),
        None => f64::NAN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_sl2c, build_so3_r3, StructureConstants};
    use approx::assert_abs_diff_eq;

    fn unit(case: Case) -> MetricParams {
        MetricParams::new(case, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn oracle_spot_so3r3() {
        let ric = ricci_oracle(&build_so3_r3(), &unit(Case::So3R3)).unwrap();
        let expect = Mat5::from_diagonal(&Vec5::new(0.0, 0.0, 0.0, 1.0, 1.0));
        assert_abs_diff_eq!(ric, expect, epsilon = 1e-14);
    }

    #[test]
    fn oracle_spot_sl2c() {
        let ric = ricci_oracle(&build_sl2c(), &unit(Case::Sl2C)).unwrap();
        let c = RicciComponents::from_matrix(Case::Sl2C, &ric);
        assert_abs_diff_eq!(c.r_a, -15.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c.r_b, -0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(c.r_c, -0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(c.r_m, -4.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c.r_n, 0.0, epsilon = 1e-13);
        // Ric(C,E) carries -½B(C,E) = +4 from the Killing form of the
        // bracket table, not -4.
        assert_abs_diff_eq!(ric[(2, 4)], 4.0, epsilon = 1e-13);
    }

    #[test]
    fn closed_spot_values() {
        let c1 = ricci_closed_so3r3(&unit(Case::So3R3)).unwrap();
        assert_eq!(c1.to_array(), [0.0, 0.0, 1.0, 0.0, 0.0]);
        let c2 = ricci_closed_sl2c(&unit(Case::Sl2C)).unwrap();
        assert_eq!(c2.to_array(), [-15.0, -0.5, -0.5, -4.0, 0.0]);
    }

    #[test]
    fn closed_so3r3_vanishing_when_alpha_equals_beta() {
        for (c, mu, nu) in [(0.7, 0.1, 0.2), (3.0, -0.5, 0.0), (1.2, 0.0, 0.9)] {
            let m = MetricParams::new(Case::So3R3, 1.3, 1.3, c, mu, nu).unwrap();
            let r = ricci_closed_so3r3(&m).unwrap();
            assert_eq!(r.r_b, 0.0);
            assert_eq!(r.r_m, 0.0);
        }
    }

    #[test]
    fn closed_sl2c_vanishing_when_alpha_sq_is_16_tau() {
        // τ = 0.25 → α = 2
        let m = MetricParams::new(Case::Sl2C, 2.0, 1.0, 1.5, 0.3, 0.4).unwrap();
        let r = ricci_closed_sl2c(&m).unwrap();
        assert_abs_diff_eq!(r.r_b, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.r_c, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn scalar_curvature_spots() {
        let s1 = scalar_curvature(&build_so3_r3(), &unit(Case::So3R3)).unwrap();
        assert_abs_diff_eq!(s1, 2.0, epsilon = 1e-13);
        let s2 = scalar_curvature(&build_sl2c(), &unit(Case::Sl2C)).unwrap();
        assert_abs_diff_eq!(s2, -17.0, epsilon = 1e-13);
    }

    #[test]
    fn scalar_curvature_scales_inversely() {
        let model = build_so3_r3();
        let m = MetricParams::new(Case::So3R3, 0.8, 1.7, 2.2, 0.3, -0.4).unwrap();
        let s = scalar_curvature(&model, &m).unwrap();
        for c in [0.5, 3.0] {
            let arr = m.to_array().map(|v| v * c);
            let mc = MetricParams::from_array(Case::So3R3, arr);
            assert_abs_diff_eq!(scalar_curvature(&model, &mc).unwrap(), s / c, epsilon = 1e-12);
        }
    }

    #[test]
    fn oracle_rejects_non_unimodular() {
        let a = StructureConstants::from_brackets(
            &["h", "p0", "p1", "p2", "p3", "p4"],
            &[(1, 2, &[(1.0, 2)])],
        );
        let model = HomogeneousModel::new(a, vec![0], vec![1, 2, 3, 4, 5]).unwrap();
        assert!(matches!(
            ricci_oracle(&model, &unit(Case::So3R3)),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn pattern_residual_of_metric_shape_is_zero() {
        let r = RicciComponents {
            case: Case::So3R3,
            r_a: 1.0,
            r_b: 2.0,
            r_c: 3.0,
            r_m: 4.0,
            r_n: 5.0,
        };
        assert_eq!(isotropy_pattern_residual(&r.matrix()), 0.0);
        let mut bad = r.matrix();
        bad[(2, 4)] += 0.5;
        bad[(4, 2)] += 0.5;
        assert_eq!(isotropy_pattern_residual(&bad), 0.5);
    }
}
