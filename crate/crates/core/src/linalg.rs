//! Small dense matrices, singular values and Hermitian log-determinants.
//!
//! Channel matrices here are at most a few dozen elements per side, so a
//! row-major `Vec` with one-sided Jacobi is both simple and accurate: Jacobi
//! computes small singular values to high relative accuracy, which matters
//! for the near-rank-one line-of-sight channels.

use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

pub type CMatrix<T> = Matrix<Complex<T>>;

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// `data` in row-major order.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                expected: (rows, cols),
                actual: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &E> {
        self.data.iter()
    }

    pub fn map<F, U: Clone>(&self, f: F) -> Matrix<U>
    where
        F: FnMut(&E) -> U,
    {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;

    fn index(&self, (i, j): (usize, usize)) -> &E {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> CMatrix<T> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape {
                expected: (self.cols, rhs.cols),
                actual: rhs.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(Complex::new(T::zero(), T::zero()), |acc, l| {
                acc + self[(i, l)] * rhs[(l, j)]
            })
        }))
    }

    /// `H H^†`.
    pub fn gram(&self) -> Self {
        Self::from_fn(self.rows, self.rows, |i, j| {
            (0..self.cols).fold(Complex::new(T::zero(), T::zero()), |acc, l| {
                acc + self[(i, l)] * self[(j, l)].conj()
            })
        })
    }

    pub fn scale(&self, factor: T) -> Self {
        self.map(|z| z * factor)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

const MAX_SWEEPS: usize = 64;

/// Singular values of `a` in descending order, `min(rows, cols)` of them.
///
/// One-sided (Hestenes) Jacobi: pairs of columns are rotated until every
/// pair is orthogonal to working precision; the column norms are then the
/// singular values.
pub fn singular_values<T: Real>(a: &CMatrix<T>) -> Result<Vec<T>> {
    if !a.is_finite() {
        return Err(Error::Numerical {
            trial: None,
            message: "matrix has non-finite entries".into(),
        });
    }
    // Orthogonalise the shorter dimension's worth of columns.
    let work = if a.cols > a.rows { a.adjoint() } else { a.clone() };
    let (m, n) = work.shape();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| (0..m).map(|i| work[(i, j)]).collect()).collect();

    // The computed inner product carries about m ulps of rounding; a
    // threshold below that can leave a pair rotating forever.
    let tol = T::epsilon() * T::from_count(4 * m);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (left, right) = cols.split_at_mut(q);
                if rotate_pair(&mut left[p], &mut right[0], tol) {
                    rotated = true;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical {
            trial: None,
            message: format!("Jacobi SVD did not converge in {MAX_SWEEPS} sweeps"),
        });
    }

    let mut sv: Vec<T> = cols
        .iter()
        .map(|c| c.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt())
        .collect();
    if sv.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numerical {
            trial: None,
            message: "singular values are not finite".into(),
        });
    }
    sv.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    Ok(sv)
}

/// Applies one complex Jacobi rotation making columns `p` and `q`
/// orthogonal. Returns false when they already are.
fn rotate_pair<T: Real>(p: &mut [Complex<T>], q: &mut [Complex<T>], tol: T) -> bool {
    let mut alpha = T::zero();
    let mut beta = T::zero();
    let mut gamma = Complex::new(T::zero(), T::zero());
    for (x, y) in p.iter().zip(q.iter()) {
        alpha = alpha + x.norm_sqr();
        beta = beta + y.norm_sqr();
        gamma = gamma + x.conj() * y;
    }
    let g = gamma.norm();
    if g == T::zero() || g <= tol * (alpha * beta).sqrt() {
        return false;
    }
    // Rotate column q's phase so the inner product is real, then apply a
    // real Givens rotation.
    let phase = gamma / g;
    let zeta = (beta - alpha) / (T::two() * g);
    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
    let cs = T::one() / (T::one() + t * t).sqrt();
    let sn = cs * t;
    for (x, y) in p.iter_mut().zip(q.iter_mut()) {
        let yr = *y * phase.conj();
        let xn = *x * cs - yr * sn;
        let yn = *x * sn + yr * cs;
        *x = xn;
        *y = yn;
    }
    true
}

/// `log2 det(M)` for Hermitian positive-definite `M` via Cholesky.
pub fn hermitian_log2_det<T: Real>(m: &CMatrix<T>) -> Result<T> {
    let n = m.rows;
    if m.cols != n {
        return Err(Error::Shape {
            expected: (n, n),
            actual: m.shape(),
        });
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut l = CMatrix::filled(n, n, zero);
    let mut log2det = T::zero();
    for j in 0..n {
        let mut diag = m[(j, j)].re;
        for k in 0..j {
            diag = diag - l[(j, k)].norm_sqr();
        }
        if !(diag > T::zero()) || !diag.is_finite() {
            return Err(Error::Numerical {
                trial: None,
                message: format!("matrix not positive definite at pivot {j}"),
            });
        }
        let ljj = diag.sqrt();
        l[(j, j)] = Complex::new(ljj, T::zero());
        log2det = log2det + diag.log2();
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s = s - l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(log2det)
}
