//! Zero-orthant probabilities Φ_d(0; P) for small correlation matrices.
//!
//! Two dimensions use the arcsine formula. Larger matrices go through Genz's
//! separation of variables: with P = LLᵀ, the event {LY < 0} is peeled off
//! one coordinate at a time, so that
//! Φ_d(0; P) = ∫ e₁(w) ⋯ e_d(w) dw over (0,1)^{d−1},
//! with e_i = Φ(−s_i / L_ii), s_i = Σ_{j<i} L_ij y_j and y_j = Φ⁻¹(w_j e_j).
//! Variables are ordered greedily by smallest expected conditional
//! probability.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::qmc::{integrate, QmcConfig, QmcEstimate};
use crate::specfun::{bvn_origin, norm_cdf, norm_pdf, norm_quantile_unchecked};

/// Largest supported dimension.
pub const MAX_DIM: usize = 5;
const PSD_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-12;
/// Stand-in for |ρ| = 1 inside the block matrices.
const RHO_EDGE: f64 = 1.0 - 1e-12;

/// Validated correlation matrix of dimension at most five.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrMatrix {
    dim: usize,
    m: [[f64; MAX_DIM]; MAX_DIM],
}

impl CorrMatrix {
    /// Builds a matrix from its full rows. Symmetry, the unit diagonal and
    /// positive semidefiniteness are checked; eigenvalues in [−1e−10, 0) are
    /// clipped to zero.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Matrix(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
        }
        let mut m = [[0.0; MAX_DIM]; MAX_DIM];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Matrix(format!("row {i} has {} entries, expected {dim}", row.len())));
            }
            m[i][..dim].copy_from_slice(row);
        }
        Self::from_array(dim, m)
    }

    /// Builds a matrix from its lower triangle, row by row
    /// (1; p21 1; p31 p32 1; …). The diagonal entries must be 1.
    pub fn from_lower(dim: usize, lower: &[&[f64]]) -> Result<Self> {
        if lower.len() != dim {
            return Err(Error::Matrix(format!("expected {dim} rows, got {}", lower.len())));
        }
        let mut m = [[0.0; MAX_DIM]; MAX_DIM];
        for (i, row) in lower.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(Error::Matrix(format!("lower row {i} must have {} entries", i + 1)));
            }
            for (j, &x) in row.iter().enumerate() {
                m[i][j] = x;
                m[j][i] = x;
            }
        }
        Self::from_array(dim, m)
    }

    fn from_array(dim: usize, m: [[f64; MAX_DIM]; MAX_DIM]) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Matrix(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
        }
        for i in 0..dim {
            if (m[i][i] - 1.0).abs() > 1e-12 {
                return Err(Error::Matrix(format!("diagonal entry {i} is {} instead of 1", m[i][i])));
            }
            for j in 0..i {
                let x = m[i][j];
                if !x.is_finite() || x.abs() > 1.0 + 1e-12 {
                    return Err(Error::Matrix(format!("entry ({i},{j}) = {x} is not a correlation")));
                }
                if (x - m[j][i]).abs() > 1e-12 {
                    return Err(Error::Matrix(format!("matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        let mut out = CorrMatrix { dim, m };
        for i in 0..dim {
            out.m[i][i] = 1.0;
            for j in 0..i {
                out.m[j][i] = out.m[i][j];
            }
        }
        if !out.has_cholesky() {
            out = out.clip_spectrum()?;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.m[i][..self.dim].to_vec()).collect()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.to_dmatrix()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// The matrix Π P Πᵀ with rows and columns reordered by `perm`:
    /// entry (i, j) of the result is entry (perm[i], perm[j]) of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = [false; MAX_DIM];
        if perm.len() != self.dim || perm.iter().any(|&p| p >= self.dim || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Matrix(format!("{perm:?} is not a permutation of 0..{}", self.dim)));
        }
        let mut m = [[0.0; MAX_DIM]; MAX_DIM];
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[i][j] = self.m[perm[i]][perm[j]];
            }
        }
        Ok(CorrMatrix { dim: self.dim, m })
    }

    fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.m[i][j])
    }

    /// Cholesky without pivoting; tiny negative pivots count as zero.
    fn has_cholesky(&self) -> bool {
        let n = self.dim;
        let mut l = [[0.0; MAX_DIM]; MAX_DIM];
        for i in 0..n {
            for j in 0..=i {
                let s: f64 = self.m[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
                if i == j {
                    if s < -PIVOT_TOL {
                        return false;
                    }
                    l[i][i] = s.max(0.0).sqrt();
                } else if l[j][j] > PIVOT_TOL {
                    l[i][j] = s / l[j][j];
                } else if s.abs() > 1e-8 {
                    return false;
                }
            }
        }
        true
    }

    fn clip_spectrum(&self) -> Result<Self> {
        let eig = SymmetricEigen::new(self.to_dmatrix());
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::Matrix(format!("matrix is not positive semidefinite (smallest eigenvalue {min:e})")));
        }
        let clipped = eig.eigenvalues.map(|x| x.max(0.0));
        let a = &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose();
        let mut m = [[0.0; MAX_DIM]; MAX_DIM];
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[i][j] = a[(i, j)] / (a[(i, i)] * a[(j, j)]).sqrt();
            }
            m[i][i] = 1.0;
        }
        Ok(CorrMatrix { dim: self.dim, m })
    }
}

fn edge(rho: f64) -> f64 {
    if rho.abs() >= 1.0 {
        rho.signum() * RHO_EDGE
    } else {
        rho
    }
}

/// The 4×4 matrix of the Kendall orthant representation:
/// rows (1), (ρ, 1), (δ₁v₁, δ₂v₁, 1), (δ₁v₂, δ₂v₂, 0, 1).
pub fn build_p_tau(rho: f64, delta: [f64; 2], v: [f64; 2]) -> Result<CorrMatrix> {
    let r = edge(rho);
    let [d1, d2] = delta;
    let [v1, v2] = v;
    CorrMatrix::from_lower(4, &[&[1.0], &[r, 1.0], &[d1 * v1, d2 * v1, 1.0], &[d1 * v2, d2 * v2, 0.0, 1.0]])
}

/// The 5×5 matrix of the Spearman orthant representation with
/// v = (v₁, v₂, v₁⁻, v₂⁻, v₃): rows (1), (ρv₃, 1), (δ₁v₁, 0, 1),
/// (0, δ₂v₂, 0, 1), (δ₁v₁⁻, δ₂v₂⁻, 0, 0, 1).
pub fn build_p_s(rho: f64, delta: [f64; 2], v: [f64; 5]) -> Result<CorrMatrix> {
    let [d1, d2] = delta;
    let [v1, v2, v1m, v2m, v3] = v;
    let r = edge(rho) * v3;
    CorrMatrix::from_lower(
        5,
        &[&[1.0], &[r, 1.0], &[d1 * v1, 0.0, 1.0], &[0.0, d2 * v2, 0.0, 1.0], &[d1 * v1m, d2 * v2m, 0.0, 0.0, 1.0]],
    )
}

/// Reordered Cholesky factor ready for the separation-of-variables integrand.
#[derive(Debug, Clone)]
pub struct OrthantPlan {
    dim: usize,
    l: [[f64; MAX_DIM]; MAX_DIM],
    /// Inverse diagonal, or 0 for a degenerate (zero) pivot.
    inv_diag: [f64; MAX_DIM],
    order: [usize; MAX_DIM],
}

impl OrthantPlan {
    pub fn new(p: &CorrMatrix) -> Self {
        let n = p.dim;
        let mut c = p.m;
        let mut l = [[0.0; MAX_DIM]; MAX_DIM];
        let mut inv_diag = [0.0; MAX_DIM];
        let mut order = [0usize; MAX_DIM];
        for (i, o) in order.iter_mut().enumerate().take(n) {
            *o = i;
        }
        let mut y_mean = [0.0; MAX_DIM];
        for i in 0..n {
            // pick the variable with the smallest conditional probability
            let mut best = i;
            let mut best_p = f64::INFINITY;
            for j in i..n {
                let var = c[j][j] - (0..i).map(|k| l[j][k] * l[j][k]).sum::<f64>();
                let mean: f64 = (0..i).map(|k| l[j][k] * y_mean[k]).sum();
                let prob = if var > PIVOT_TOL {
                    norm_cdf(-mean / var.sqrt())
                } else if mean < 0.0 {
                    1.0
                } else {
                    0.0
                };
                if prob < best_p || (prob == best_p && order[j] < order[best]) {
                    best = j;
                    best_p = prob;
                }
            }
            if best != i {
                c.swap(i, best);
                for row in c.iter_mut() {
                    row.swap(i, best);
                }
                l.swap(i, best);
                order.swap(i, best);
            }
            let var = c[i][i] - (0..i).map(|k| l[i][k] * l[i][k]).sum::<f64>();
            let mean: f64 = (0..i).map(|k| l[i][k] * y_mean[k]).sum();
            if var > PIVOT_TOL {
                let d = var.sqrt();
                l[i][i] = d;
                inv_diag[i] = 1.0 / d;
                for j in i + 1..n {
                    let s = c[j][i] - (0..i).map(|k| l[j][k] * l[i][k]).sum::<f64>();
                    l[j][i] = s / d;
                }
                // mean of a standard normal truncated to (−∞, b]
                let b = -mean / d;
                let pb = norm_cdf(b);
                y_mean[i] = if pb > 0.0 { -norm_pdf(b) / pb } else { b };
            } else {
                l[i][i] = 0.0;
                inv_diag[i] = 0.0;
                for row in l.iter_mut().take(n).skip(i + 1) {
                    row[i] = 0.0;
                }
                y_mean[i] = 0.0;
            }
        }
        OrthantPlan { dim: n, l, inv_diag, order }
    }

    /// Number of uniforms consumed by [`OrthantPlan::eval`].
    pub fn inner_dim(&self) -> usize {
        self.dim - 1
    }

    /// Original indices in elimination order.
    pub fn order(&self) -> &[usize] {
        &self.order[..self.dim]
    }

    /// Separation-of-variables integrand at w ∈ (0,1)^{d−1}.
    #[inline]
    pub fn eval(&self, w: &[f64]) -> f64 {
        let n = self.dim;
        let mut y = [0.0; MAX_DIM];
        let mut prod = 1.0;
        for i in 0..n {
            let s: f64 = (0..i).map(|k| self.l[i][k] * y[k]).sum();
            if self.inv_diag[i] == 0.0 {
                // X_i = s exactly
                if s > 0.0 {
                    return 0.0;
                } else if s == 0.0 {
                    prod *= 0.5;
                }
                continue;
            }
            let e = norm_cdf(-s * self.inv_diag[i]);
            prod *= e;
            if prod == 0.0 {
                return 0.0;
            }
            if i + 1 < n {
                let t = (w[i] * e).max(f64::MIN_POSITIVE);
                y[i] = norm_quantile_unchecked(t);
            }
        }
        prod
    }
}

/// Φ_d(0; P) = P(X < 0) for X ~ N(0, P).
///
/// Dimension 1 and 2 are exact. Higher dimensions are integrated with the
/// reordered separation-of-variables transform over d − 1 QMC dimensions.
pub fn orthant_prob(p: &CorrMatrix, cfg: &QmcConfig) -> Result<QmcEstimate> {
    match p.dim {
        1 => Ok(QmcEstimate::exact(0.5)),
        2 => Ok(QmcEstimate::exact(bvn_origin(p.m[1][0].clamp(-1.0, 1.0)))),
        _ => {
            let plan = OrthantPlan::new(p);
            integrate(plan.inner_dim(), cfg, |w| plan.eval(w))
        }
    }
}
