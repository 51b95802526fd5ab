//! Dense complex linear algebra for the small matrices used throughout the crate.
//!
//! Everything here is deliberately dense: truncated two-mode Fock spaces stay
//! below a few hundred basis states, so cubic algorithms are cheap and the
//! Jacobi-type solvers give the accuracy the entanglement quantifiers need.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used for all amplitudes and matrix entries.
pub type Complex = Complex64;

/// Max-abs deviation from Hermiticity accepted by the Hermitian routines.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Eigenvalues above `-PSD_TOL` are clamped to zero by [`sqrtm_psd`].
pub const PSD_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 100;

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for col in 0..self.cols {
                let z = self[(r, col)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cr(1.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for col in 0..cols {
                data.push(f(r, col));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = cr(d);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[Complex], v: &[Complex]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
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

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diag(&self) -> Vec<Complex> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-abs entrywise difference; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-abs entry of `A - A†`; infinite for non-square input.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                err = err.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        err
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        Self::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn mat_vec(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `Tr(A·B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = Complex::default();
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex::default() {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Integer matrix power; `A^0 = I`.
    pub fn pow(&self, exp: usize) -> Self {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        for _ in 0..exp {
            out = out.matmul(self);
        }
        out
    }

    /// Top-left `rows x cols` block.
    pub fn block(&self, rows: usize, cols: usize) -> Self {
        assert!(rows <= self.rows && cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
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

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(cr(-1.0))
    }
}

fn require_square(a: &ComplexMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        })
    }
}

fn require_hermitian(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_square(a)?;
    let err = a.hermiticity_error();
    if err > HERMITICITY_TOL {
        return Err(Error::NotHermitian(err));
    }
    Ok(a.hermitian_part())
}

/// Kronecker product; block `(i, j)` of the result is `A[i,j]·B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    ComplexMatrix::from_fn(rows, cols, |r, col| {
        a[(r / b.rows, col / b.cols)] * b[(r % b.rows, col % b.cols)]
    })
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

/// Cyclic complex Jacobi eigensolver.
///
/// Input is symmetrized first; the caller has already checked it is Hermitian
/// within tolerance.
fn jacobi_eigen(a: &ComplexMatrix) -> HermitianEigen {
    let n = a.rows;
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return HermitianEigen {
            values: vec![0.0; n],
            vectors: v,
        };
    }
    let stop = (f64::EPSILON * scale) * (f64::EPSILON * scale);

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let phase = apq / mag;
                let (cs, sn) = jacobi_rotation(app, aqq, mag);
                // J = [[c, s], [-s·conj(e), c·conj(e)]] on columns p, q
                let jpp = cr(cs);
                let jpq = cr(sn);
                let jqp = -phase.conj() * sn;
                let jqq = phase.conj() * cs;
                for k in 0..n {
                    let xp = m[(k, p)];
                    let xq = m[(k, q)];
                    m[(k, p)] = xp * jpp + xq * jqp;
                    m[(k, q)] = xp * jpq + xq * jqq;
                }
                for k in 0..n {
                    let xp = m[(p, k)];
                    let xq = m[(q, k)];
                    m[(p, k)] = jpp.conj() * xp + jqp.conj() * xq;
                    m[(q, k)] = jpq.conj() * xp + jqq.conj() * xq;
                }
                m[(p, q)] = Complex::default();
                m[(q, p)] = Complex::default();
                m[(p, p)] = cr(m[(p, p)].re);
                m[(q, q)] = cr(m[(q, q)].re);
                for k in 0..n {
                    let xp = v[(k, p)];
                    let xq = v[(k, q)];
                    v[(k, p)] = xp * jpp + xq * jqp;
                    v[(k, q)] = xp * jpq + xq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, col| v[(r, order[col])]);
    HermitianEigen { values, vectors }
}

/// Real 2x2 symmetric Jacobi rotation `(c, s)` annihilating the off-diagonal
/// `apq` of `[[app, apq], [apq, aqq]]`.
fn jacobi_rotation(app: f64, aqq: f64, apq: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    (cs, t * cs)
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
pub fn herm_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let h = require_hermitian(a)?;
    Ok(jacobi_eigen(&h))
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn herm_eigvals(a: &ComplexMatrix) -> Result<Vec<f64>> {
    herm_eigen(a).map(|e| e.values)
}

/// Determinant by LU decomposition with partial pivoting.
pub fn det(a: &ComplexMatrix) -> Result<Complex> {
    require_square(a)?;
    let n = a.rows;
    let mut m = a.clone();
    let mut det = cr(1.0);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| m[(i, k)].norm().total_cmp(&m[(j, k)].norm()))
            .unwrap_or(k);
        if m[(pivot, k)].norm() == 0.0 {
            return Ok(Complex::default());
        }
        if pivot != k {
            for col in 0..n {
                let tmp = m[(k, col)];
                m[(k, col)] = m[(pivot, col)];
                m[(pivot, col)] = tmp;
            }
            det = -det;
        }
        let piv = m[(k, k)];
        det *= piv;
        for i in k + 1..n {
            let factor = m[(i, k)] / piv;
            if factor == Complex::default() {
                continue;
            }
            for col in k + 1..n {
                let sub = factor * m[(k, col)];
                m[(i, col)] -= sub;
            }
        }
    }
    Ok(det)
}

/// Singular values, descending, by one-sided (Hestenes) Jacobi.
///
/// Small singular values come out with absolute accuracy near machine
/// precision relative to the largest one, which squaring into an eigenproblem
/// would lose.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    // Work on columns of the taller orientation.
    let work = if a.rows >= a.cols { a.clone() } else { a.adjoint() };
    let (m, n) = (work.rows, work.cols);
    let mut cols: Vec<Vec<Complex>> = (0..n)
        .map(|j| (0..m).map(|i| work[(i, j)]).collect())
        .collect();

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let mag = gamma.norm();
                if mag <= f64::EPSILON * (alpha * beta).sqrt() || mag <= f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phase = gamma / mag;
                let (cs, sn) = jacobi_rotation(alpha, beta, mag);
                let jqp = -phase.conj() * sn;
                let jqq = phase.conj() * cs;
                let (left, right) = cols.split_at_mut(q);
                for (xp, xq) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (up, uq) = (*xp, *xq);
                    *xp = up * cs + uq * jqp;
                    *xq = up * sn + uq * jqq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = cols
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    require_square(a)?;
    Ok(singular_values(a).iter().sum())
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn matrix_exp(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_square(a)?;
    let n = a.rows;
    // 1-norm bound
    let norm = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    let mut s = norm;
    while s > 0.5 {
        s *= 0.5;
        squarings += 1;
    }
    let scaled = a.scale(cr(0.5f64.powi(squarings as i32)));

    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = term.matmul(&scaled).scale(cr(1.0 / k as f64));
        result = &result + &term;
        if term.max_abs() <= f64::EPSILON * 1e-2 * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}

/// Eigenvalues below this fraction of the spectral radius are numerically
/// indistinguishable from zero and are treated as such by [`sqrtm_psd`].
fn noise_floor(values: &[f64]) -> f64 {
    let radius = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    16.0 * values.len() as f64 * f64::EPSILON * radius
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn sqrtm_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eigen(a)?;
    if let Some(&min) = eig.values.first() {
        if min < -PSD_TOL {
            return Err(Error::NegativeSpectrum(min));
        }
    }
    let floor = noise_floor(&eig.values);
    let roots: Vec<f64> = eig
        .values
        .iter()
        .map(|&v| if v <= floor { 0.0 } else { v.sqrt() })
        .collect();
    let n = a.rows;
    let vecs = &eig.vectors;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .filter(|&k| roots[k] != 0.0)
            .map(|k| vecs[(i, k)] * roots[k] * vecs[(j, k)].conj())
            .sum()
    }))
}
