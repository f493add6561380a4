//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here is deterministic: the hermitian eigensolver is a cyclic
//! Jacobi sweep with a fixed pivot order, eigenvectors carry a phase
//! convention, and ties are broken by a lexicographic rule. Two calls on the
//! same matrix return bit-identical output.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Rank, positivity and matching tolerances shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Eigenvalues at or below `rel_rank_tol * lambda_max` count as zero.
    pub rel_rank_tol: f64,
    /// Allowed negative eigenvalue, relative to `1 + lambda_max`.
    pub psd_tol: f64,
    /// Entrywise agreement tolerance for identities.
    pub match_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rel_rank_tol: 1e-9,
            psd_tol: 1e-9,
            match_tol: 1e-8,
        }
    }
}

impl TolerancePolicy {
    pub fn new(rel_rank_tol: f64, psd_tol: f64, match_tol: f64) -> Result<Self> {
        for t in [rel_rank_tol, psd_tol, match_tol] {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::NegativeScalar(t));
            }
        }
        Ok(Self {
            rel_rank_tol,
            psd_tol,
            match_tol,
        })
    }

    /// Asymmetry beyond which a matrix is rejected as non-hermitian.
    pub fn hermitian_limit(&self, scale: f64) -> f64 {
        1e3 * self.match_tol * (1.0 + scale)
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from rows; all rows must have equal length and finite entries.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::ShapeMismatch(format!(
                    "row {r} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        let m = Self {
            rows: nrows,
            cols: ncols,
            data,
        };
        m.check_finite()?;
        Ok(m)
    }

    /// Convenience constructor for real matrices. Panics on ragged input.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), ncols, |r, c| {
            assert_eq!(rows[r].len(), ncols, "ragged row {r}");
            c64(rows[r][c], 0.0)
        })
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = c64(d, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, &z) in col.iter().enumerate() {
                m[(r, c)] = z;
            }
        }
        m
    }

    pub fn column_vector(v: &[C64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Submatrix made of the first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Self {
        Self::from_fn(self.rows, k, |r, c| self[(r, c)])
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |r, c| self[(r, idx[c])])
    }

    pub fn check_finite(&self) -> Result<()> {
        for r in 0..self.rows {
            for c in 0..self.cols {
                let z = self[(r, c)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "mul_vec: length mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self^†`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// `(self + self^†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))
                .unwrap();
            if a[(pivot, col)].norm() <= 1e-14 * scale {
                return Err(Error::Singular);
            }
            if pivot != col {
                for k in 0..n {
                    a.data.swap(pivot * n + k, col * n + k);
                    inv.data.swap(pivot * n + k, col * n + k);
                }
            }
            let p = a[(col, col)].inv();
            for k in 0..n {
                a[(col, k)] *= p;
                inv[(col, k)] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == ZERO {
                    continue;
                }
                for k in 0..n {
                    let (ak, ik) = (a[(col, k)], inv[(col, k)]);
                    a[(r, k)] -= f * ak;
                    inv[(r, k)] -= f * ik;
                }
            }
        }
        Ok(inv)
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<C64>>::deserialize(deserializer)?;
        ComplexMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// `Σ conj(a_i) b_i`, antilinear in the first argument.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sq(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn lambda_max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn lambda_min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Number of eigenvalues strictly above `rel_rank_tol * lambda_max`.
    pub fn rank(&self, pol: &TolerancePolicy) -> usize {
        let lmax = self.lambda_max();
        if lmax <= 0.0 {
            return 0;
        }
        let cut = pol.rel_rank_tol * lmax;
        self.values.iter().take_while(|&&l| l > cut).count()
    }

    pub fn is_psd(&self, pol: &TolerancePolicy) -> bool {
        self.lambda_min() >= -pol.psd_tol * (1.0 + self.lambda_max().max(0.0))
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_OFFDIAG: f64 = 1e-14;

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// The input is symmetrized as `(M + M^†)/2`. Eigenvalues come out descending;
/// each eigenvector is rotated so its largest-magnitude entry is real positive,
/// and eigenvectors of tied eigenvalues are ordered lexicographically
/// (descending) on their coordinates rounded to 1e-9.
pub fn hermitian_eigen(m: &ComplexMatrix, pol: &TolerancePolicy) -> Result<HermitianEigen> {
    m.require_square()?;
    m.check_finite()?;
    let asym = m.hermitian_deviation();
    if asym > pol.hermitian_limit(m.max_abs()) {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();
    let target = JACOBI_REL_OFFDIAG * total;

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|i| {
            let mut col = v.column(i);
            normalize_phase(&mut col);
            (a[(i, i)].re, col)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));

    // Ties: reorder runs of (nearly) equal eigenvalues lexicographically.
    let lmax = pairs.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    let tie = 1e-12 * (1.0 + lmax);
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end - 1].0 - pairs[end].0 <= tie {
            end += 1;
        }
        if end - start > 1 {
            pairs[start..end].sort_by(|x, y| lex_key_cmp(&y.1, &x.1));
        }
        start = end;
    }

    let values = pairs.iter().map(|p| p.0).collect();
    let columns: Vec<Vec<C64>> = pairs.into_iter().map(|p| p.1).collect();
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix::from_columns(n, &columns),
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One rotation zeroing `a[p][q]`; `a <- W^† a W`, `v <- v W`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let n = a.rows();
    let phase = apq / mag; // e^{iθ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let conj_phase = phase.conj();
    let w_pp = c64(c, 0.0);
    let w_pq = c64(s, 0.0);
    let w_qp = conj_phase * (-s);
    let w_qq = conj_phase * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * w_pp + akq * w_qp;
        a[(k, q)] = akp * w_pq + akq * w_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
        a[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = c64(a[(p, p)].re, 0.0);
    a[(q, q)] = c64(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * w_pp + vkq * w_qp;
        v[(k, q)] = vkp * w_pq + vkq * w_qq;
    }
}

/// Rotates `v` so its largest-magnitude entry (first one on near-ties) is real positive.
pub(crate) fn normalize_phase(v: &mut [C64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let idx = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-12)).unwrap();
    let phase = v[idx].conj() / v[idx].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[idx] = c64(v[idx].re, 0.0);
}

fn rounded(x: f64) -> i64 {
    (x * 1e9).round() as i64
}

fn lex_key_cmp(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = rounded(x.re)
            .cmp(&rounded(y.re))
            .then(rounded(x.im).cmp(&rounded(y.im)));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Result of [`psd_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsdReport {
    pub is_psd: bool,
    pub rank: usize,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

pub fn psd_check(m: &ComplexMatrix, pol: &TolerancePolicy) -> Result<PsdReport> {
    let eig = hermitian_eigen(m, pol)?;
    Ok(psd_report(&eig, pol))
}

pub(crate) fn psd_report(eig: &HermitianEigen, pol: &TolerancePolicy) -> PsdReport {
    PsdReport {
        is_psd: eig.is_psd(pol),
        rank: eig.rank(pol),
        min_eigenvalue: eig.lambda_min(),
        max_eigenvalue: eig.lambda_max(),
    }
}

fn require_psd(eig: &HermitianEigen, pol: &TolerancePolicy) -> Result<()> {
    if eig.is_psd(pol) {
        Ok(())
    } else {
        Err(Error::NegativeEigenvalue {
            value: eig.lambda_min(),
        })
    }
}

/// `Σ f(λ_k) v_k v_k^†` over the numerically nonzero eigenpairs.
fn spectral_on_range(eig: &HermitianEigen, pol: &TolerancePolicy, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = eig.vectors.rows();
    let r = eig.rank(pol);
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..r {
        let w = f(eig.values[k]);
        for i in 0..n {
            let vi = eig.vectors[(i, k)] * w;
            for j in 0..n {
                out[(i, j)] += vi * eig.vectors[(j, k)].conj();
            }
        }
    }
    out
}

/// Moore-Penrose pseudoinverse of a hermitian PSD matrix.
pub fn pseudo_inverse(m: &ComplexMatrix, pol: &TolerancePolicy) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m, pol)?;
    require_psd(&eig, pol)?;
    Ok(spectral_on_range(&eig, pol, |l| 1.0 / l))
}

/// `(M^+)^{1/2}` for hermitian PSD `M`.
pub fn pseudo_inverse_sqrt(m: &ComplexMatrix, pol: &TolerancePolicy) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m, pol)?;
    require_psd(&eig, pol)?;
    Ok(spectral_on_range(&eig, pol, |l| 1.0 / l.sqrt()))
}

/// Orthogonal projector onto the numerical range of hermitian PSD `M`.
pub fn range_projector(m: &ComplexMatrix, pol: &TolerancePolicy) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m, pol)?;
    Ok(spectral_on_range(&eig, pol, |_| 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn identity_eigen_is_standard_basis() {
        let e = hermitian_eigen(&ComplexMatrix::identity(2), &pol()).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        assert_eq!(e.vectors, ComplexMatrix::identity(2));
    }

    #[test]
    fn swap_matrix_eigen() {
        let m = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = hermitian_eigen(&m, &pol()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = ComplexMatrix::from_real(&[&[h, h], &[h, -h]]);
        assert!(e.vectors.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn two_by_two_characteristic_polynomial() {
        // λ² - 2λ + (1 - t²) = 0  =>  λ = 1 ± t
        let t = 0.5;
        let m = ComplexMatrix::from_real(&[&[1.0, t], &[t, 1.0]]);
        let e = hermitian_eigen(&m, &pol()).unwrap();
        assert!((e.values[0] - 1.5).abs() < 1e-14);
        assert!((e.values[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn complex_hermitian_residuals() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c64(2.0, 0.0), c64(1.0, -1.0), c64(0.0, 0.5)],
            vec![c64(1.0, 1.0), c64(-1.0, 0.0), c64(0.3, 0.0)],
            vec![c64(0.0, -0.5), c64(0.3, 0.0), c64(0.5, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen(&m, &pol()).unwrap();
        for k in 0..3 {
            let v = e.vectors.column(k);
            let mv = m.mul_vec(&v);
            let lv: Vec<C64> = v.iter().map(|z| z * e.values[k]).collect();
            assert!(max_abs_diff(&mv, &lv) < 1e-10 * (1.0 + e.values[0].abs()));
        }
        let gram = &e.vectors.adjoint() * &e.vectors;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigen(&m, &pol()), Err(Error::NonSquare { .. })));
        let m = ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(hermitian_eigen(&m, &pol()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn pseudo_inverse_examples() {
        let d = ComplexMatrix::from_diag(&[2.0, 0.0]);
        let p = pseudo_inverse(&d, &pol()).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::from_diag(&[0.5, 0.0])) < 1e-15);

        let i = ComplexMatrix::identity(3);
        assert!(pseudo_inverse(&i, &pol()).unwrap().max_abs_diff(&i) < 1e-15);

        // rank-one oracle: (vv^†)^+ = vv^† / |v|^4
        let v = [ONE, ONE];
        let vv = ComplexMatrix::from_fn(2, 2, |r, c| v[r] * v[c].conj());
        let oracle = vv.scale(1.0 / norm_sq(&v).powi(2));
        let p = pseudo_inverse(&vv, &pol()).unwrap();
        assert!(p.max_abs_diff(&oracle) < 1e-14);
    }

    #[test]
    fn pseudo_inverse_rejects_indefinite() {
        let m = ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(matches!(
            pseudo_inverse(&m, &pol()),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn psd_check_examples() {
        let z = psd_check(&ComplexMatrix::zeros(3, 3), &pol()).unwrap();
        assert!(z.is_psd);
        assert_eq!(z.rank, 0);
        let r1 = psd_check(&ComplexMatrix::from_real(&[&[1.0, 1.0], &[1.0, 1.0]]), &pol()).unwrap();
        assert!(r1.is_psd);
        assert_eq!(r1.rank, 1);
        let bad = psd_check(&ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 1.0]]), &pol()).unwrap();
        assert!(!bad.is_psd);
        assert!(matches!(
            psd_check(&ComplexMatrix::zeros(1, 2), &pol()),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn inverse_round_trip() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c64(0.0, 1.0), c64(2.0, 0.0)],
            vec![c64(1.0, 0.0), c64(1.0, -1.0)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        let sing = ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn rejects_ragged_and_non_finite_rows() {
        assert!(ComplexMatrix::from_rows(vec![vec![ONE], vec![ONE, ONE]]).is_err());
        assert!(matches!(
            ComplexMatrix::from_rows(vec![vec![c64(f64::NAN, 0.0)]]),
            Err(Error::NonFinite { .. })
        ));
    }
}
