//! Dense real matrix arithmetic and the numerical primitives the rest of
//! the crate is built on: LU solves, null-space extraction, symmetric
//! eigenvalues via cyclic Jacobi, and a Lyapunov-based Schur stability test.
//!
//! Everything here is desk-scale dense linear algebra (n up to a few tens);
//! there is no sparse storage and no attempt at BLAS-level performance.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense row-major matrix of f64.
///
/// Invariants enforced on construction: `entries.len() == rows * cols` and
/// every entry is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "Matrix::new",
                expected: format!("{} entries", rows * cols),
                got: format!("{}", entries.len()),
            });
        }
        for (idx, &e) in entries.iter().enumerate() {
            if !e.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / cols.max(1),
                    col: idx % cols.max(1),
                });
            }
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Build from nested rows, validating that all rows have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    context: "Matrix::from_rows",
                    expected: format!("row length {c}"),
                    got: format!("{}", row.len()),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(r, c, entries)
    }

    /// Column vector from a slice.
    pub fn col_vec(v: &[f64]) -> Result<Self> {
        Self::new(v.len(), 1, v.to_vec())
    }

    /// Standard basis column vector e_j of length n.
    pub fn unit_vec(n: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, 1);
        m[(j, 0)] = 1.0;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn frob_norm(&self) -> f64 {
        self.entries.iter().map(|e| e * e).sum::<f64>().sqrt()
    }

    /// Extract column j as an n-by-1 matrix.
    pub fn column(&self, j: usize) -> Matrix {
        let mut c = Matrix::zeros(self.rows, 1);
        for i in 0..self.rows {
            c[(i, 0)] = self[(i, j)];
        }
        c
    }

    /// Copy `block` into self with its (0,0) entry at (row, col).
    pub fn set_block(&mut self, row: usize, col: usize, block: &Matrix) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }

    /// Extract the rows-by-cols block whose (0,0) entry is at (row, col).
    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Matrix {
        assert!(row + rows <= self.rows && col + cols <= self.cols);
        let mut b = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                b[(i, j)] = self[(row + i, col + j)];
            }
        }
        b
    }

    pub fn symmetrized(&self) -> Matrix {
        assert!(self.is_square());
        (self + &self.transpose()).scale(0.5)
    }

    pub fn trace(&self) -> f64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, e| acc.max(e.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl std::ops::Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

// Matrices serialize as nested row arrays so instance and report files stay
// human-readable and language-neutral.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        Matrix::from_rows(&rows).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Orthonormal basis of the null space of a matrix.
#[derive(Debug, Clone)]
pub struct NullSpaceBasis {
    pub dim: usize,
    /// Columns span the null space; mutually orthonormal.
    pub basis: Matrix,
    /// Relative threshold that decided the numerical rank.
    pub tol: f64,
}

impl NullSpaceBasis {
    /// Orthogonal projection of `v` onto the null space: N (N' v).
    pub fn project(&self, v: &Matrix) -> Matrix {
        &self.basis * &(&self.basis.transpose() * v)
    }
}

/// Solve M X = RHS by LU with partial pivoting.
///
/// Fails with `SingularMatrix` when a pivot magnitude falls below
/// 1e-12 * ||M||_F.
pub fn solve_linear(m: &Matrix, rhs: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            context: "solve_linear",
            expected: "square matrix".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    if rhs.rows() != m.rows() {
        return Err(Error::DimensionMismatch {
            context: "solve_linear",
            expected: format!("{} RHS rows", m.rows()),
            got: format!("{}", rhs.rows()),
        });
    }
    let n = m.rows();
    let q = rhs.cols();
    let threshold = 1e-12 * m.frob_norm();
    let mut lu = m.clone();
    let mut x = rhs.clone();

    for k in 0..n {
        // partial pivoting on column k
        let mut piv = k;
        let mut piv_abs = lu[(k, k)].abs();
        for i in (k + 1)..n {
            if lu[(i, k)].abs() > piv_abs {
                piv = i;
                piv_abs = lu[(i, k)].abs();
            }
        }
        if piv_abs <= threshold {
            return Err(Error::SingularMatrix {
                pivot: piv_abs,
                threshold,
            });
        }
        if piv != k {
            for j in 0..n {
                let (a, b) = (lu[(k, j)], lu[(piv, j)]);
                lu[(k, j)] = b;
                lu[(piv, j)] = a;
            }
            for j in 0..q {
                let (a, b) = (x[(k, j)], x[(piv, j)]);
                x[(k, j)] = b;
                x[(piv, j)] = a;
            }
        }
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / pivot;
            if factor == 0.0 {
                continue;
            }
            lu[(i, k)] = 0.0;
            for j in (k + 1)..n {
                lu[(i, j)] -= factor * lu[(k, j)];
            }
            for j in 0..q {
                x[(i, j)] -= factor * x[(k, j)];
            }
        }
    }
    // back substitution
    for j in 0..q {
        for i in (0..n).rev() {
            let mut s = x[(i, j)];
            for k in (i + 1)..n {
                s -= lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s / lu[(i, i)];
        }
    }
    Ok(x)
}

/// Orthonormal null-space basis of M via column-pivoted row reduction at
/// relative threshold `tol * ||M||_F`, followed by modified Gram-Schmidt
/// with re-orthogonalization.
pub fn null_space_basis(m: &Matrix, tol: f64) -> NullSpaceBasis {
    assert!(tol > 0.0, "null_space_basis requires tol > 0");
    let r = m.rows();
    let c = m.cols();
    let threshold = tol * m.frob_norm();

    let mut red = m.clone();
    // pivot_cols[i] is the column of the pivot in reduced row i
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut is_pivot = vec![false; c];
    let mut row = 0usize;

    while row < r {
        // column pivoting: pick the free column with the largest remaining entry
        let mut best: Option<(usize, usize, f64)> = None;
        for j in 0..c {
            if is_pivot[j] {
                continue;
            }
            for i in row..r {
                let a = red[(i, j)].abs();
                if best.is_none_or(|(_, _, b)| a > b) {
                    best = Some((i, j, a));
                }
            }
        }
        let Some((pi, pj, pa)) = best else { break };
        if pa <= threshold {
            break;
        }
        if pi != row {
            for j in 0..c {
                let (a, b) = (red[(row, j)], red[(pi, j)]);
                red[(row, j)] = b;
                red[(pi, j)] = a;
            }
        }
        // normalize pivot row, eliminate the pivot column everywhere else (RREF)
        let pivot = red[(row, pj)];
        for j in 0..c {
            red[(row, j)] /= pivot;
        }
        red[(row, pj)] = 1.0;
        for i in 0..r {
            if i == row {
                continue;
            }
            let factor = red[(i, pj)];
            if factor == 0.0 {
                continue;
            }
            red[(i, pj)] = 0.0;
            for j in 0..c {
                if j != pj {
                    red[(i, j)] -= factor * red[(row, j)];
                }
            }
        }
        pivot_cols.push(pj);
        is_pivot[pj] = true;
        row += 1;
    }

    let rank = pivot_cols.len();
    let dim = c - rank;
    let mut basis = Matrix::zeros(c, dim);
    let free_cols: Vec<usize> = (0..c).filter(|j| !is_pivot[*j]).collect();
    for (k, &f) in free_cols.iter().enumerate() {
        basis[(f, k)] = 1.0;
        for (i, &pj) in pivot_cols.iter().enumerate() {
            basis[(pj, k)] = -red[(i, f)];
        }
    }

    orthonormalize_columns(&mut basis);
    NullSpaceBasis { dim, basis, tol }
}

/// Numerical rank via the same column-pivoted reduction used for the null
/// space, so dimension comparisons are like-for-like.
pub fn numerical_rank(m: &Matrix, tol: f64) -> usize {
    m.cols() - null_space_basis(m, tol).dim
}

/// In-place modified Gram-Schmidt with one re-orthogonalization pass.
fn orthonormalize_columns(m: &mut Matrix) {
    let cols = m.cols();
    for j in 0..cols {
        for _pass in 0..2 {
            for k in 0..j {
                let mut dot = 0.0;
                for i in 0..m.rows() {
                    dot += m[(i, k)] * m[(i, j)];
                }
                for i in 0..m.rows() {
                    let v = m[(i, k)];
                    m[(i, j)] -= dot * v;
                }
            }
        }
        let norm = (0..m.rows()).map(|i| m[(i, j)] * m[(i, j)]).sum::<f64>().sqrt();
        // columns come from an RREF basis, so they are linearly independent
        // and the norm stays well away from zero
        for i in 0..m.rows() {
            m[(i, j)] /= norm;
        }
    }
}

/// Eigenvalues of the symmetrized matrix (M + M')/2 via cyclic Jacobi.
pub fn symmetric_eigenvalues(m: &Matrix) -> Vec<f64> {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.symmetrized();
    let scale = a.frob_norm().max(1.0);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}

/// True iff M is symmetric to `sym_tol` (relative Frobenius) and the
/// symmetrized matrix has all eigenvalues >= -psd_tol.
pub fn check_symmetric_psd(m: &Matrix, sym_tol: f64, psd_tol: f64) -> bool {
    assert!(m.is_square());
    let asym = (m - &m.transpose()).frob_norm();
    if asym > sym_tol * m.frob_norm().max(1.0) {
        return false;
    }
    symmetric_eigenvalues(m)
        .into_iter()
        .all(|lambda| lambda >= -psd_tol)
}

/// Direct solve of the discrete Lyapunov equation X = M X M' + G through
/// the n^2-by-n^2 vectorized system (I - M (x) M) vec(X) = vec(G).
///
/// Uniquely solvable exactly when M has no reciprocal eigenvalue pair; for
/// Schur-stable M this always holds.
pub fn solve_discrete_lyapunov_direct(m: &Matrix, g: &Matrix) -> Result<Matrix> {
    assert!(m.is_square() && g.rows() == m.rows() && g.cols() == m.rows());
    let n = m.rows();
    let nn = n * n;
    // column-stacking convention: vec(X)[j*n + i] = X[i][j]
    let mut sys = Matrix::zeros(nn, nn);
    for i2 in 0..n {
        for j2 in 0..n {
            let row = j2 * n + i2;
            for i1 in 0..n {
                for j1 in 0..n {
                    let col = j1 * n + i1;
                    let kron = m[(i2, i1)] * m[(j2, j1)];
                    sys[(row, col)] = if row == col { 1.0 - kron } else { -kron };
                }
            }
        }
    }
    let mut rhs = Matrix::zeros(nn, 1);
    for i in 0..n {
        for j in 0..n {
            rhs[(j * n + i, 0)] = g[(i, j)];
        }
    }
    let vec_x = solve_linear(&sys, &rhs)?;
    let mut x = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            x[(i, j)] = vec_x[(j * n + i, 0)];
        }
    }
    Ok(x)
}

/// Schur stability decided through Lyapunov solvability: M is accepted as
/// stable iff X = M X M' + I has a solution and that solution is symmetric
/// PSD. An unsolvable system (reciprocal eigenvalue pair, e.g. an eigenvalue
/// on the unit circle) counts as unstable.
pub fn check_schur_stable(m: &Matrix) -> bool {
    assert!(m.is_square());
    let n = m.rows();
    match solve_discrete_lyapunov_direct(m, &Matrix::identity(n)) {
        Ok(x) => {
            let scale = x.frob_norm().max(1.0);
            check_symmetric_psd(&x, 1e-8, 1e-8 * scale)
        }
        Err(_) => false,
    }
}

/// Power-iteration estimate of the spectral radius. For matrices with a
/// complex dominant pair the plain Rayleigh ratio oscillates, so the
/// estimate averages the growth factor over the final iterations.
pub fn spectral_radius_estimate(m: &Matrix, iters: usize) -> f64 {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return 0.0;
    }
    // deterministic, non-degenerate start vector
    let mut v = Matrix::zeros(n, 1);
    for i in 0..n {
        v[(i, 0)] = 1.0 + (i as f64) * 0.3;
    }
    let mut norm = v.frob_norm();
    v = v.scale(1.0 / norm);
    let mut log_growth = 0.0;
    let mut counted = 0usize;
    let tail = iters / 2;
    for it in 0..iters {
        let w = m * &v;
        norm = w.frob_norm();
        if norm == 0.0 {
            return 0.0;
        }
        if it >= tail {
            log_growth += norm.ln();
            counted += 1;
        }
        v = w.scale(1.0 / norm);
    }
    if counted == 0 {
        norm
    } else {
        (log_growth / counted as f64).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert!(Matrix::new(1, 2, vec![1.0, f64::NAN]).is_err());
        assert!(Matrix::new(1, 2, vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn rejects_wrong_entry_count() {
        assert!(Matrix::new(2, 2, vec![1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn solve_identity() {
        let m = Matrix::identity(2);
        let rhs = mat(&[&[3.0], &[-1.0]]);
        let x = solve_linear(&m, &rhs).unwrap();
        assert_eq!(x, rhs);
    }

    #[test]
    fn solve_diagonal() {
        let m = mat(&[&[2.0, 0.0], &[0.0, 4.0]]);
        let rhs = mat(&[&[2.0], &[8.0]]);
        let x = solve_linear(&m, &rhs).unwrap();
        assert!((x[(0, 0)] - 1.0).abs() < 1e-14);
        assert!((x[(1, 0)] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn solve_dense_verified_by_multiplying_back() {
        let m = mat(&[&[1.0, 1.0], &[1.0, 2.0]]);
        let rhs = mat(&[&[3.0], &[5.0]]);
        let x = solve_linear(&m, &rhs).unwrap();
        assert!((x[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((x[(1, 0)] - 2.0).abs() < 1e-12);
        let back = &m * &x;
        assert!((&back - &rhs).frob_norm() <= 1e-10 * (m.frob_norm() * x.frob_norm()).max(1.0));
    }

    #[test]
    fn solve_singular_reports_error() {
        let m = mat(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let rhs = mat(&[&[1.0], &[1.0]]);
        assert!(matches!(
            solve_linear(&m, &rhs),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn null_space_one_constraint_two_unknowns() {
        let m = mat(&[&[1.0, 1.0]]);
        let ns = null_space_basis(&m, 1e-10);
        assert_eq!(ns.dim, 1);
        let b = &ns.basis;
        let expected = 1.0 / 2.0_f64.sqrt();
        assert!((b[(0, 0)].abs() - expected).abs() < 1e-12);
        assert!((b[(0, 0)] + b[(1, 0)]).abs() < 1e-12);
    }

    #[test]
    fn null_space_full_rank_is_empty() {
        let ns = null_space_basis(&Matrix::identity(3), 1e-10);
        assert_eq!(ns.dim, 0);
        assert_eq!(ns.basis.cols(), 0);
    }

    #[test]
    fn null_space_rank_one() {
        // rank 1 by hand: second row is twice the first
        let m = mat(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]);
        let ns = null_space_basis(&m, 1e-10);
        assert_eq!(ns.dim, 2);
        assert!((&m * &ns.basis).frob_norm() <= 1e-10 * m.frob_norm());
        let gram = &ns.basis.transpose() * &ns.basis;
        assert!((&gram - &Matrix::identity(2)).frob_norm() < 1e-10);
    }

    #[test]
    fn psd_zero_matrix() {
        assert!(check_symmetric_psd(&Matrix::zeros(2, 2), 1e-10, 1e-10));
    }

    #[test]
    fn psd_rejects_negative_eigenvalue() {
        let m = mat(&[&[1.0, 0.0], &[0.0, -0.5]]);
        assert!(!check_symmetric_psd(&m, 1e-10, 1e-10));
    }

    #[test]
    fn psd_accepts_positive_definite() {
        // eigenvalues 1 and 3 by hand
        let m = mat(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert!(check_symmetric_psd(&m, 1e-10, 1e-10));
        let mut eig = symmetric_eigenvalues(&m);
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((eig[0] - 1.0).abs() < 1e-12);
        assert!((eig[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn psd_rejects_asymmetric() {
        let m = mat(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(!check_symmetric_psd(&m, 1e-10, 1e-10));
    }

    #[test]
    fn schur_stable_zero_and_identity() {
        assert!(check_schur_stable(&Matrix::zeros(2, 2)));
        // eigenvalue 1 on the unit circle: Lyapunov solve singular
        assert!(!check_schur_stable(&Matrix::identity(2)));
    }

    #[test]
    fn schur_stable_scalar_inside_unit_circle() {
        let m = mat(&[&[0.23443]]);
        assert!(check_schur_stable(&m));
        assert!(!check_schur_stable(&mat(&[&[1.1]])));
    }

    #[test]
    fn lyapunov_direct_scalar_geometric_series() {
        let m = mat(&[&[0.5]]);
        let g = Matrix::identity(1);
        let x = solve_discrete_lyapunov_direct(&m, &g).unwrap();
        assert!((x[(0, 0)] - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_radius_estimate_diagonal() {
        let m = mat(&[&[0.9, 0.0], &[0.0, 0.3]]);
        let rho = spectral_radius_estimate(&m, 200);
        assert!((rho - 0.9).abs() < 1e-6);
    }
}
