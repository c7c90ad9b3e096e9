//! Sparse five-point Laplacian assembly, matrix-vector products and a
//! conjugate-gradient solver.

use crate::error::{Error, Result};
use crate::vector::DenseVector;

pub const CG_DEFAULT_REL_TOL: f64 = 1e-10;

/// Compressed-sparse-row symmetric matrix.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a CSR matrix from per-row `(column, value)` entries; columns
    /// must be sorted and unique within each row.
    pub fn from_rows(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for (i, row) in rows.iter().enumerate() {
            let mut prev: Option<usize> = None;
            for &(j, v) in row {
                if j >= n {
                    return Err(Error::invalid(format!("column {j} out of range in row {i}")));
                }
                if prev.is_some_and(|p| p >= j) {
                    return Err(Error::invalid(format!("unsorted columns in row {i}")));
                }
                if !v.is_finite() {
                    return Err(Error::non_finite(format!("matrix entry ({i}, {j})")));
                }
                prev = Some(j);
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            n,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        match self.col_idx[lo..hi].binary_search(&j) {
            Ok(k) => self.values[lo + k],
            Err(_) => 0.0,
        }
    }

    /// Structural symmetry check: every entry `(i, j, v)` has a matching
    /// `(j, i, v)`.
    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                if self.get(j, i) != self.values[k] {
                    return false;
                }
            }
        }
        true
    }

    /// Exact sparse product `A u`.
    pub fn matvec(&self, u: &DenseVector) -> Result<DenseVector> {
        if u.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: u.len(),
            });
        }
        let x = u.as_slice();
        DenseVector::from_fn(self.n, |i| {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            acc
        })
    }
}

/// Validates that `1/h` is an integer `>= 2` and returns the number of
/// interior points per side, `1/h − 1`.
fn interior_points_per_side(h: f64) -> Result<usize> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("mesh width must be positive, got {h}")));
    }
    let inv = 1.0 / h;
    let k = inv.round();
    if (inv - k).abs() > 1e-9 * k.max(1.0) || k < 2.0 {
        return Err(Error::invalid(format!(
            "mesh width must be 1/k for an integer k >= 2, got h = {h}"
        )));
    }
    Ok(k as usize - 1)
}

/// Five-point discretization of `−Δ` on `(0,1)²` with zero Dirichlet
/// conditions: diagonal `4/h²`, grid-neighbor entries `−1/h²`. Interior
/// points are ordered row-major with `x` varying fastest, so the point
/// `(i·h, j·h)` has linear index `(j−1)(1/h−1) + (i−1)`.
pub fn build_laplacian_2d(h: f64) -> Result<SparseMatrix> {
    let side = interior_points_per_side(h)?;
    let n = side * side;
    let ih2 = 1.0 / (h * h);
    let idx = |i: usize, j: usize| (j - 1) * side + (i - 1);
    let mut rows = Vec::with_capacity(n);
    for j in 1..=side {
        for i in 1..=side {
            let m = idx(i, j);
            let mut row = Vec::with_capacity(5);
            if j > 1 {
                row.push((m - side, -ih2));
            }
            if i > 1 {
                row.push((m - 1, -ih2));
            }
            row.push((m, 4.0 * ih2));
            if i < side {
                row.push((m + 1, -ih2));
            }
            if j < side {
                row.push((m + side, -ih2));
            }
            rows.push(row);
        }
    }
    let a = SparseMatrix::from_rows(n, rows)?;
    debug_assert!(a.is_symmetric());
    Ok(a)
}

/// Analytic extreme eigenvalues of the matrix built by [`build_laplacian_2d`]:
/// `λ_min = (8/h²) sin²(πh/2)` and `λ_max = (8/h²) cos²(πh/2)`.
pub fn laplacian_extreme_eigs(h: f64) -> Result<(f64, f64)> {
    interior_points_per_side(h)?;
    let scale = 8.0 / (h * h);
    let s = (std::f64::consts::PI * h / 2.0).sin();
    let c = (std::f64::consts::PI * h / 2.0).cos();
    Ok((scale * s * s, scale * c * c))
}

/// Unpreconditioned conjugate gradients with a zero initial guess. Returns
/// `x` with true residual `‖Ax − b‖ ≤ rel_tol·‖b‖`; `‖b‖ = 0` yields `x = 0`.
pub fn cg_solve(a: &SparseMatrix, b: &DenseVector, rel_tol: f64, max_iter: usize) -> Result<DenseVector> {
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.len(),
        });
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::invalid(format!("rel_tol must lie in (0,1), got {rel_tol}")));
    }
    let b_norm = b.norm();
    if b_norm == 0.0 {
        return Ok(DenseVector::zeros(a.dim()));
    }
    let target = rel_tol * b_norm;

    let mut x = DenseVector::zeros(a.dim());
    let mut r = b.clone();
    let mut p = r.clone();
    let mut rs = r.dot(&r);
    let mut last_rel = rs.sqrt() / b_norm;
    for _ in 0..max_iter {
        let ap = a.matvec(&p)?;
        let denom = p.dot(&ap);
        if !(denom > 0.0) {
            return Err(Error::invalid(
                "conjugate gradients hit a non-positive curvature direction; matrix not SPD",
            ));
        }
        let alpha = rs / denom;
        x = x.minus_scaled(-alpha, &p);
        r = r.minus_scaled(alpha, &ap);
        let rs_new = r.dot(&r);
        last_rel = rs_new.sqrt() / b_norm;
        if rs_new.sqrt() <= target {
            // The recurrence residual drifts; confirm against the true one.
            let true_res = a.matvec(&x)?.minus(b).norm();
            if true_res <= target {
                x.ensure_finite("cg solution")?;
                return Ok(x);
            }
            last_rel = true_res / b_norm;
        }
        p = r.minus_scaled(-(rs_new / rs), &p);
        rs = rs_new;
    }
    Err(Error::Unconverged {
        residual: last_rel,
        max_iter,
    })
}

/// [`cg_solve`] with the default tolerance `1e-10` and budget `10n`.
pub fn cg_solve_default(a: &SparseMatrix, b: &DenseVector) -> Result<DenseVector> {
    cg_solve(a, b, CG_DEFAULT_REL_TOL, 10 * a.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn laplacian_half_mesh_is_scalar_16() {
        let a = build_laplacian_2d(0.5).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.get(0, 0), 16.0);
        let u = DenseVector::new(vec![1.0]).unwrap();
        assert_eq!(a.matvec(&u).unwrap().as_slice(), &[16.0]);
    }

    #[test]
    fn laplacian_quarter_mesh_stencil_values() {
        let a = build_laplacian_2d(0.25).unwrap();
        assert_eq!(a.dim(), 9);
        for i in 0..9 {
            assert_eq!(a.get(i, i), 64.0);
        }
        assert_eq!(a.get(0, 1), -16.0);
        assert_eq!(a.get(0, 3), -16.0);
        assert_eq!(a.get(0, 2), 0.0);
        assert!(a.is_symmetric());
    }

    #[test]
    fn laplacian_paper_mesh_dimension() {
        let a = build_laplacian_2d(2f64.powi(-4)).unwrap();
        assert_eq!(a.dim(), 225);
    }

    #[test]
    fn invalid_mesh_width_rejected() {
        assert!(build_laplacian_2d(0.3).is_err());
        assert!(build_laplacian_2d(1.0).is_err());
        assert!(build_laplacian_2d(-0.25).is_err());
    }

    #[test]
    fn row_sums_count_boundary_neighbors() {
        let h = 0.25;
        let a = build_laplacian_2d(h).unwrap();
        let side = 3;
        let ih2 = 1.0 / (h * h);
        for j in 1..=side {
            for i in 1..=side {
                let m = (j - 1) * side + (i - 1);
                let sum: f64 = (0..9).map(|c| a.get(m, c)).sum();
                let boundary_neighbors = [i == 1, i == side, j == 1, j == side]
                    .iter()
                    .filter(|&&b| b)
                    .count() as f64;
                assert!((sum - boundary_neighbors * ih2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn matvec_zero_and_dimension_check() {
        let a = build_laplacian_2d(0.25).unwrap();
        let z = DenseVector::zeros(9);
        assert!(a.matvec(&z).unwrap().iter().all(|&v| v == 0.0));
        assert!(a.matvec(&DenseVector::zeros(4)).is_err());
    }

    #[test]
    fn cg_scalar_system() {
        let a = build_laplacian_2d(0.5).unwrap();
        let b = DenseVector::new(vec![32.0]).unwrap();
        let x = cg_solve_default(&a, &b).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cg_consistency_with_all_ones() {
        let a = build_laplacian_2d(2f64.powi(-4)).unwrap();
        let ones = DenseVector::from_elem(a.dim(), 1.0).unwrap();
        let b = a.matvec(&ones).unwrap();
        let x = cg_solve_default(&a, &b).unwrap();
        assert!(x.dist(&ones) < 1e-8);
    }

    #[test]
    fn cg_converges_within_n_iterations_on_random_rhs() {
        let a = build_laplacian_2d(2f64.powi(-4)).unwrap();
        let n = a.dim();
        // Fixed pseudo-random right-hand side.
        let b = DenseVector::from_fn(n, |i| ((i * 2654435761 % 1000) as f64 / 500.0) - 1.0).unwrap();
        let x = cg_solve(&a, &b, 1e-10, n).unwrap();
        let res = a.matvec(&x).unwrap().minus(&b).norm();
        assert!(res <= 1e-10 * b.norm());
    }

    #[test]
    fn cg_zero_rhs_returns_zero() {
        let a = build_laplacian_2d(0.25).unwrap();
        let x = cg_solve_default(&a, &DenseVector::zeros(9)).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn extreme_eigs_half_mesh() {
        let (lo, hi) = laplacian_extreme_eigs(0.5).unwrap();
        assert!((lo - 16.0).abs() < 1e-12);
        assert!((hi - 16.0).abs() < 1e-12);
    }

    #[test]
    fn extreme_eigs_paper_mesh() {
        let (lo, hi) = laplacian_extreme_eigs(2f64.powi(-4)).unwrap();
        assert!((lo - 19.675872867092).abs() < 1e-9);
        assert!((hi - 2028.3241271329).abs() < 1e-9);
        let two_pi_sq = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
        assert!(lo < two_pi_sq && two_pi_sq < hi);
    }

    #[test]
    fn smallest_eigenvalue_cross_checked_by_inverse_power_iteration() {
        let h = 2f64.powi(-4);
        let a = build_laplacian_2d(h).unwrap();
        let (lo, _) = laplacian_extreme_eigs(h).unwrap();
        let n = a.dim();
        let mut v = DenseVector::from_elem(n, 1.0).unwrap();
        let mut lambda = 0.0;
        for _ in 0..60 {
            let w = cg_solve(&a, &v, 1e-12, 10 * n).unwrap();
            let norm = w.norm();
            v = w.scaled(1.0 / norm);
            lambda = v.dot(&a.matvec(&v).unwrap());
        }
        assert!((lambda - lo).abs() < 1e-6 * lo);
    }

    proptest! {
        // Rayleigh quotients of unit vectors stay inside the spectrum.
        #[test]
        fn rayleigh_quotient_sandwich(seed in 0u64..1000) {
            let h = 0.125;
            let a = build_laplacian_2d(h).unwrap();
            let (lo, hi) = laplacian_extreme_eigs(h).unwrap();
            let n = a.dim();
            let raw = DenseVector::from_fn(n, |i| {
                let t = (seed as f64 + 1.0) * (i as f64 + 0.7);
                (t.sin() * 43758.5453).fract() - 0.5
            }).unwrap();
            prop_assume!(raw.norm() > 1e-9);
            let v = raw.scaled(1.0 / raw.norm());
            let q = v.dot(&a.matvec(&v).unwrap());
            prop_assert!(q >= lo - 1e-9 && q <= hi + 1e-9);
        }

        // ⟨Au, v⟩ = ⟨u, Av⟩ for the symmetric stencil.
        #[test]
        fn matvec_respects_symmetry(su in 0u64..500, sv in 0u64..500) {
            let a = build_laplacian_2d(0.25).unwrap();
            let mk = |s: u64| DenseVector::from_fn(9, |i| {
                ((s as f64 + 1.3) * (i as f64 + 0.31)).sin()
            }).unwrap();
            let u = mk(su);
            let v = mk(sv);
            let lhs = a.matvec(&u).unwrap().dot(&v);
            let rhs = u.dot(&a.matvec(&v).unwrap());
            let scale = 1.0_f64.max(lhs.abs());
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }
    }
}
