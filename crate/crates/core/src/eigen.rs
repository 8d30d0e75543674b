//! Dense complex Hermitian matrices and a cyclic Jacobi eigensolver.
//!
//! Each pivot `(p, q)` is handled in two steps: the phase of `a_pq` is moved
//! into column/row `q`, then an ordinary real Jacobi rotation zeroes the now
//! real pivot.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative off-diagonal norm at which a sweep sequence stops.
pub const JACOBI_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix rows must all have length n".into()));
        }
        Ok(Self {
            n,
            data: rows.concat(),
        })
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// `diag(values)`.
    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|v><v|`.
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// `tr(A B)`.
    pub fn trace_product(&self, other: &CMatrix) -> C64 {
        let n = self.n;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    /// Largest entry modulus of `A - B`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus of `A - A^dagger`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    fn off_diagonal_sq(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues in descending order plus the quality of the decomposition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// `max |A v - lambda v|` when vectors were computed, otherwise the final
    /// off-diagonal Frobenius norm.
    pub residual: f64,
}

/// Full decomposition: `vectors` column `j` belongs to `eigenvalues[j]`.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub eigenvalues: Vec<f64>,
    pub vectors: CMatrix,
    pub residual: f64,
}

impl Eigh {
    pub fn spectrum(&self) -> SpectrumResult {
        SpectrumResult {
            eigenvalues: self.eigenvalues.clone(),
            residual: self.residual,
        }
    }

    pub fn vector(&self, j: usize) -> Vec<C64> {
        (0..self.vectors.dim()).map(|i| self.vectors[(i, j)]).collect()
    }
}

fn jacobi(a: &CMatrix, mut v: Option<&mut CMatrix>) -> (Vec<f64>, f64) {
    let n = a.n;
    let mut a = a.clone();
    // symmetrise so the iteration only ever sees a Hermitian matrix
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let h = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            a[(i, j)] = h;
            a[(j, i)] = h.conj();
        }
    }
    let scale = a.frobenius_sq().sqrt();
    let target = JACOBI_TOL * scale;

    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_sq().sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 || r < 1e-300 {
                    continue;
                }
                // A <- D^dagger A D with D_qq = e^{-i phi}
                let ph = apq / r;
                let ph_c = ph.conj();
                for k in 0..n {
                    a.data[k * n + q] *= ph_c;
                }
                for k in 0..n {
                    a.data[q * n + k] *= ph;
                }
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        v.data[k * n + q] *= ph_c;
                    }
                }
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a.data[k * n + p], a.data[k * n + q]);
                    a.data[k * n + p] = akp * c - akq * s;
                    a.data[k * n + q] = akp * s + akq * c;
                }
                for k in 0..n {
                    let (apk, aqk) = (a.data[p * n + k], a.data[q * n + k]);
                    a.data[p * n + k] = apk * c - aqk * s;
                    a.data[q * n + k] = apk * s + aqk * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(app - t * r, 0.0);
                a[(q, q)] = C64::new(aqq + t * r, 0.0);
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let (vkp, vkq) = (v.data[k * n + p], v.data[k * n + q]);
                        v.data[k * n + p] = vkp * c - vkq * s;
                        v.data[k * n + q] = vkp * s + vkq * c;
                    }
                }
            }
        }
    }
    let off = a.off_diagonal_sq().sqrt();
    ((0..n).map(|i| a[(i, i)].re).collect(), off)
}

fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    idx
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
pub fn eigh(a: &CMatrix) -> Eigh {
    let n = a.dim();
    let mut v = CMatrix::identity(n);
    let (raw, _) = jacobi(a, Some(&mut v));
    let order = descending_order(&raw);
    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut vectors = CMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new)] = v[(k, old)];
        }
    }
    let mut residual: f64 = 0.0;
    for (j, &lambda) in eigenvalues.iter().enumerate() {
        for i in 0..n {
            let av: C64 = (0..n).map(|k| a[(i, k)] * vectors[(k, j)]).sum();
            residual = residual.max((av - vectors[(i, j)] * lambda).norm());
        }
    }
    Eigh {
        eigenvalues,
        vectors,
        residual,
    }
}

/// Eigenvalues only (descending); cheaper than [`eigh`].
pub fn eigvalsh(a: &CMatrix) -> SpectrumResult {
    let (mut values, off) = jacobi(a, None);
    values.sort_by(|x, y| y.total_cmp(x));
    SpectrumResult {
        eigenvalues: values,
        residual: off,
    }
}

/// Real symmetric convenience wrapper: eigenvalues (descending) and real
/// orthonormal eigenvectors as columns.
pub fn eigh_real(a: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let m = CMatrix::from_real(a)?;
    let e = eigh(&m);
    let n = m.dim();
    // real input keeps every rotation real; the phases are all +-1
    let vectors = (0..n)
        .map(|i| (0..n).map(|j| e.vectors[(i, j)].re).collect())
        .collect();
    Ok((e.eigenvalues, vectors))
}
