//! Real Lie algebras given by structure constants, and the two homogeneous
//! models `so(3)⋉R³ ⊃ so(2)` and `sl(2,C) ⊃ u(1)`.

use crate::error::{Error, Result};
use crate::Mat5;
use nalgebra::DMatrix;
use serde::Serialize;

/// Absolute tolerance for algebra-level checks on non-integer constants.
pub const ALGEBRA_TOL: f64 = 1e-12;

/// `(i, j, [(coef, k), ...])`: `[e_i, e_j] = Σ coef·e_k`.
pub type BracketEntry<'a> = (usize, usize, &'a [(f64, usize)]);

/// A finite-dimensional real Lie algebra stored as a dense bracket table,
/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    labels: Vec<String>,
    c: Vec<f64>,
}

impl StructureConstants {
    /// Builds from a full `dim³` tensor in `[i][j][k]` row-major order.
    ///
    /// No algebraic checks are made here; use [`Self::jacobi_residual`] and
    /// [`Self::antisymmetry_residual`] to inspect the result.
    pub fn from_tensor(labels: Vec<String>, c: Vec<f64>) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if c.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                got: c.len(),
            });
        }
        Ok(Self { dim, labels, c })
    }

    /// Builds from the upper half of a bracket table: each entry
    /// `(i, j, [(coef, k), ...])` sets `[e_i, e_j]` and, by antisymmetry,
    /// `[e_j, e_i]`.
    pub fn from_brackets(labels: &[&str], entries: &[BracketEntry]) -> Self {
        let dim = labels.len();
        let mut c = vec![0.0; dim * dim * dim];
        for &(i, j, terms) in entries {
            for &(coef, k) in terms {
                c[(i * dim + j) * dim + k] = coef;
                c[(j * dim + i) * dim + k] = -coef;
            }
        }
        Self {
            dim,
            labels: labels.iter().map(|s| s.to_string()).collect(),
            c,
        }
    }

    /// The zero bracket on `dim` generators.
    pub fn abelian(dim: usize) -> Self {
        Self {
            dim,
            labels: (0..dim).map(|i| format!("e{i}")).collect(),
            c: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let d = self.dim;
        self.c[(i * d + j) * d + k] = value;
    }

    /// `[u, v]` for coefficient vectors over the basis.
    pub fn bracket(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        for w in [u, v] {
            if w.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: w.len(),
                });
            }
        }
        let mut out = vec![0.0; self.dim];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0.0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj == 0.0 {
                    continue;
                }
                let w = ui * vj;
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.get(i, j, k);
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad e_i` acting on column coefficient vectors.
    pub fn ad(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |k, j| self.get(i, j, k))
    }

    /// `B(e_i, e_l) = tr(ad e_i ∘ ad e_l)`.
    pub fn killing_form(&self) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |i, l| {
            let mut s = 0.0;
            for j in 0..d {
                for k in 0..d {
                    s += self.get(i, j, k) * self.get(l, k, j);
                }
            }
            s
        })
    }

    /// `tr(ad e_i)` for every basis vector.
    pub fn ad_traces(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j, j)).sum())
            .collect()
    }

    pub fn is_unimodular(&self) -> bool {
        self.ad_traces().iter().all(|t| t.abs() <= ALGEBRA_TOL)
    }

    /// `max |c[i][j][k] + c[j][i][k]|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((self.get(i, j, k) + self.get(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Largest coefficient of `[[e_i,e_j],e_l] + [[e_j,e_l],e_i] + [[e_l,e_i],e_j]`
    /// over all triples.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    for k in 0..d {
                        let mut s = 0.0;
                        for m in 0..d {
                            s += self.get(i, j, m) * self.get(m, l, k)
                                + self.get(j, l, m) * self.get(m, i, k)
                                + self.get(l, i, m) * self.get(m, j, k);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

/// A Lie algebra `g` with a split `g = h ⊕ p` into isotropy algebra and
/// complement. The complement order is the order used for metric matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousModel {
    pub algebra: StructureConstants,
    pub isotropy: Vec<usize>,
    pub complement: Vec<usize>,
}

/// Residuals of the algebraic sanity checks on a model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelReport {
    pub antisymmetry: f64,
    pub jacobi: f64,
    /// `max |h-component of [h, p]|` over isotropy and complement generators.
    pub isotropy_invariance: f64,
    pub max_abs_ad_trace: f64,
}

impl ModelReport {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry <= ALGEBRA_TOL
            && self.jacobi <= ALGEBRA_TOL
            && self.isotropy_invariance <= ALGEBRA_TOL
    }
}

impl HomogeneousModel {
    pub fn new(algebra: StructureConstants, isotropy: Vec<usize>, complement: Vec<usize>) -> Result<Self> {
        let dim = algebra.dim();
        let mut seen = vec![false; dim];
        for &i in isotropy.iter().chain(&complement) {
            if i >= dim || seen[i] {
                return Err(Error::BadSplit(dim));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::BadSplit(dim));
        }
        Ok(Self {
            algebra,
            isotropy,
            complement,
        })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn bracket(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        self.algebra.bracket(u, v)
    }

    pub fn killing_form(&self) -> DMatrix<f64> {
        self.algebra.killing_form()
    }

    /// Killing form restricted to the complement, in complement order.
    pub fn complement_killing(&self) -> Result<Mat5> {
        self.require_five()?;
        let full = self.killing_form();
        Ok(Mat5::from_fn(|a, b| full[(self.complement[a], self.complement[b])]))
    }

    pub fn is_unimodular(&self) -> bool {
        self.algebra.is_unimodular()
    }

    /// Structure constants of the complement with brackets projected onto it:
    /// entry `[a][b][c]` is the `p_c` coefficient of `[p_a, p_b]`.
    pub fn projected_brackets(&self) -> Result<[[[f64; 5]; 5]; 5]> {
        self.require_five()?;
        let p = &self.complement;
        let mut out = [[[0.0; 5]; 5]; 5];
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    out[a][b][c] = self.algebra.get(p[a], p[b], p[c]);
                }
            }
        }
        Ok(out)
    }

    pub fn check(&self) -> ModelReport {
        let mut iso = 0.0f64;
        for &h in &self.isotropy {
            for &p in &self.complement {
                for &k in &self.isotropy {
                    iso = iso.max(self.algebra.get(h, p, k).abs());
                }
            }
        }
        ModelReport {
            antisymmetry: self.algebra.antisymmetry_residual(),
            jacobi: self.algebra.jacobi_residual(),
            isotropy_invariance: iso,
            max_abs_ad_trace: self
                .algebra
                .ad_traces()
                .into_iter()
                .fold(0.0, |m, t| m.max(t.abs())),
        }
    }

    fn require_five(&self) -> Result<()> {
        if self.complement.len() != 5 {
            return Err(Error::DimensionMismatch {
                expected: 5,
                got: self.complement.len(),
            });
        }
        Ok(())
    }
}

/// `so(3)⋉R³` in the basis `(E, c3, c1, c2, F, G)` with isotropy `span(E)`.
pub fn build_so3_r3() -> HomogeneousModel {
    const E: usize = 0;
    const C3: usize = 1;
    const C1: usize = 2;
    const C2: usize = 3;
    const F: usize = 4;
    const G: usize = 5;
    let algebra = StructureConstants::from_brackets(
        &["E", "c3", "c1", "c2", "F", "G"],
        &[
            (E, C1, &[(-1.0, C2)]),
            (E, C2, &[(1.0, C1)]),
            (E, F, &[(-1.0, G)]),
            (E, G, &[(1.0, F)]),
            (C3, F, &[(-1.0, C1)]),
            (C3, G, &[(-1.0, C2)]),
            (C1, F, &[(1.0, C3)]),
            (C2, G, &[(1.0, C3)]),
            (F, G, &[(-1.0, E)]),
        ],
    );
    HomogeneousModel::new(algebra, vec![E], vec![C3, C1, C2, F, G]).expect("fixed split")
}

/// `sl(2,C)` as a real algebra in the basis `(X, A, B, C, D, E)` with
/// isotropy `u(1) = span(X)`.
pub fn build_sl2c() -> HomogeneousModel {
    const X: usize = 0;
    const A: usize = 1;
    const B: usize = 2;
    const C: usize = 3;
    const D: usize = 4;
    const E: usize = 5;
    let algebra = StructureConstants::from_brackets(
        &["X", "A", "B", "C", "D", "E"],
        &[
            (X, B, &[(2.0, C)]),
            (X, C, &[(-2.0, B)]),
            (X, D, &[(-2.0, E)]),
            (X, E, &[(2.0, D)]),
            (A, B, &[(2.0, B)]),
            (A, C, &[(2.0, C)]),
            (A, D, &[(-2.0, D)]),
            (A, E, &[(-2.0, E)]),
            (B, D, &[(1.0, A)]),
            (B, E, &[(1.0, X)]),
            (C, D, &[(1.0, X)]),
            (C, E, &[(-1.0, A)]),
        ],
    );
    HomogeneousModel::new(algebra, vec![X], vec![A, B, C, D, E]).expect("fixed split")
}
