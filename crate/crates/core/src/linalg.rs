//! Dense complex linear algebra for the kron-and-dot method.
//!
//! Operators are stored row-major in [`ComplexMatrix`]; states are
//! [`StateVector`]s. Everything is double precision and dense. Operations that
//! can create large operators ([`kron`], [`ComplexMatrix::identity`], gate
//! embedding) check the process-wide dimension cap first, see [`max_dim`].

use std::cell::Cell;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default per-side cap for dense operators: 2^13 (about 1 GiB of `Complex64`).
pub const DEFAULT_MAX_DIM: usize = 1 << 13;

/// Default tolerance for [`is_unitary`] on gate-sized operators.
pub const UNITARY_TOL: f64 = 1e-10;

/// Tolerance for the normalized flag on a [`StateVector`].
pub const NORM_TOL: f64 = 1e-10;

static MAX_DIM: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DIM);

thread_local! {
    static SCOPED_MAX_DIM: Cell<Option<usize>> = const { Cell::new(None) };
}

/// Current per-side dimension cap for dense operators.
pub fn max_dim() -> usize {
    SCOPED_MAX_DIM.with(Cell::get).unwrap_or_else(|| MAX_DIM.load(Ordering::Relaxed))
}

/// Run `f` with a different cap on the current thread only.
pub fn with_max_dim<T>(cap: usize, f: impl FnOnce() -> T) -> T {
    let prev = SCOPED_MAX_DIM.with(|c| c.replace(Some(cap.max(1))));
    let out = f();
    SCOPED_MAX_DIM.with(|c| c.set(prev));
    out
}

/// Replace the per-side dimension cap. Returns the previous value.
pub fn set_max_dim(cap: usize) -> usize {
    MAX_DIM.swap(cap.max(1), Ordering::Relaxed)
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    let cap = max_dim();
    if dim > cap {
        return Err(Error::DimensionLimit { requested: dim, cap });
    }
    Ok(())
}

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Zero matrix, checked against the dimension cap.
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix {rows}x{cols}")));
        }
        check_dim(rows)?;
        check_dim(cols)?;
        Ok(Self { rows, cols, data: vec![C64::default(); rows * cols] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim, dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Build from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries cannot form a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    /// Real-valued square matrix, handy for gate tables.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_vec(dim, entries.len() / dim.max(1), entries.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn diagonal(diag: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len(), diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        Ok(m)
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

    /// `Some(k)` when the matrix is square with side `2^k`.
    pub fn qubit_count(&self) -> Option<usize> {
        (self.is_square() && self.rows.is_power_of_two()).then(|| self.rows.trailing_zeros() as usize)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * k).collect() }
    }

    /// Largest entrywise modulus of `self - other`; `inf` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        kron(self, other)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        matmul(self, other)
    }

    pub fn dagger(&self) -> Self {
        dagger(self)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(16) {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .take(16)
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Kronecker product: entry `(i*b.rows + p, j*b.cols + q) = a(i,j) * b(p,q)`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a
        .rows
        .checked_mul(b.rows)
        .ok_or(Error::DimensionLimit { requested: usize::MAX, cap: max_dim() })?;
    let cols = a
        .cols
        .checked_mul(b.cols)
        .ok_or(Error::DimensionLimit { requested: usize::MAX, cap: max_dim() })?;
    let mut out = ComplexMatrix::zeros(rows, cols)?;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a.get(i, j);
            if s == C64::default() {
                continue;
            }
            for p in 0..b.rows {
                let dst = (i * b.rows + p) * cols + j * b.cols;
                for (o, &x) in out.data[dst..dst + b.cols].iter_mut().zip(b.row(p)) {
                    *o = s * x;
                }
            }
        }
    }
    Ok(out)
}

/// Matrix product `a * b`.
///
/// Uses an i-k-j loop that skips zero entries of `a`, so products involving
/// embedded gate operators cost roughly `nnz(a) * b.cols`.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut data = vec![C64::default(); a.rows * b.cols];
    for i in 0..a.rows {
        let out = &mut data[i * b.cols..(i + 1) * b.cols];
        for (k, &aik) in a.row(i).iter().enumerate() {
            if aik == C64::default() {
                continue;
            }
            for (o, &bkj) in out.iter_mut().zip(b.row(k)) {
                *o += aik * bkj;
            }
        }
    }
    Ok(ComplexMatrix { rows: a.rows, cols: b.cols, data })
}

/// Conjugate transpose.
pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    let mut data = Vec::with_capacity(m.data.len());
    for j in 0..m.cols {
        for i in 0..m.rows {
            data.push(m.get(i, j).conj());
        }
    }
    ComplexMatrix { rows: m.cols, cols: m.rows, data }
}

/// True iff `max |(m^dagger m - I)_{ij}| <= tol`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::Shape(format!("is_unitary needs a square matrix, got {}x{}", m.rows, m.cols)));
    }
    Ok(unitarity_defect(m) <= tol)
}

/// `max |(m^dagger m - I)_{ij}|` for a square matrix.
pub(crate) fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    let d = m.rows;
    // gram[i][j] = sum_k conj(m[k][i]) m[k][j], accumulated row by row of m
    let mut gram = vec![C64::default(); d * d];
    for k in 0..d {
        let row = m.row(k);
        for (i, &mki) in row.iter().enumerate() {
            if mki == C64::default() {
                continue;
            }
            let ci = mki.conj();
            for (g, &mkj) in gram[i * d..(i + 1) * d].iter_mut().zip(row) {
                *g += ci * mkj;
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[i * d + j] - c(expect, 0.0)).norm());
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    normalized: bool,
}

impl StateVector {
    /// Computational basis state `|index>` over `n` qubits.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let dim = 1usize
            .checked_shl(n as u32)
            .filter(|_| n < usize::BITS as usize)
            .ok_or_else(|| Error::Shape(format!("{n} qubits is too many for a dense state")))?;
        if index >= dim {
            return Err(Error::Range(format!("basis index {index} out of range for {n} qubits")));
        }
        let mut amplitudes = vec![C64::default(); dim];
        amplitudes[index] = c(1.0, 0.0);
        Ok(Self { amplitudes, normalized: true })
    }

    /// Unnormalized state from raw amplitudes; the flag is set when the norm is 1.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() || !amplitudes.len().is_power_of_two() {
            return Err(Error::Shape(format!(
                "state length {} is not a power of two",
                amplitudes.len()
            )));
        }
        let mut v = Self { amplitudes, normalized: false };
        v.normalized = (v.norm() - 1.0).abs() <= NORM_TOL;
        Ok(v)
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amplitudes.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn qubit_count(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DegenerateState(format!("cannot normalize a state of norm {n}")));
        }
        Ok(Self { amplitudes: self.amplitudes.iter().map(|a| a / n).collect(), normalized: true })
    }

    /// `|amplitude|^2` per basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub(crate) fn refresh_flag(&mut self, was_normalized: bool) {
        self.normalized = was_normalized && (self.norm() - 1.0).abs() <= NORM_TOL;
    }
}

/// `m * v`.
pub fn apply(m: &ComplexMatrix, v: &StateVector) -> Result<StateVector> {
    if m.cols != v.dim() || !m.is_square() {
        return Err(Error::Shape(format!(
            "cannot apply {}x{} operator to a state of dimension {}",
            m.rows,
            m.cols,
            v.dim()
        )));
    }
    let amplitudes: Vec<C64> = (0..m.rows)
        .map(|i| m.row(i).iter().zip(&v.amplitudes).map(|(a, b)| a * b).sum())
        .collect();
    let mut out = StateVector { amplitudes, normalized: false };
    out.refresh_flag(v.normalized);
    Ok(out)
}

pub fn norm(v: &StateVector) -> f64 {
    v.norm()
}

pub fn normalize(v: &StateVector) -> Result<StateVector> {
    v.normalize()
}
