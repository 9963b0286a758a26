//! Dense symmetric linear algebra for small normal systems.

use alloc::vec;
use alloc::vec::Vec;

/// Square symmetric matrix, row-major full storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds from row-major entries; `None` if the length is not `n * n`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Option<Self> {
        (data.len() == n * n).then_some(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Adds `w * v v^T` to the upper triangle only; call
    /// [`SymMatrix::mirror_upper`] once accumulation is done.
    pub(crate) fn add_outer_upper(&mut self, v: &[f64], w: f64) {
        let n = self.n;
        for i in 0..n {
            let vi = w * v[i];
            if vi == 0.0 {
                continue;
            }
            let row = &mut self.data[i * n..(i + 1) * n];
            for j in i..n {
                row[j] += vi * v[j];
            }
        }
    }

    pub(crate) fn mirror_upper(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in 0..i {
                self.data[i * n + j] = self.data[j * n + i];
            }
        }
    }

    pub(crate) fn add_diagonal(&mut self, r: f64) {
        for i in 0..self.n {
            self.data[i * self.n + i] += r;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks_exact(self.n)
            .map(|row| dot(row, x))
            .collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Diagonal equilibration factors `D = diag(a_ii)^(-1/2)`, with 1 for
/// non-positive or non-finite diagonal entries.
fn equilibration(a: &SymMatrix) -> Vec<f64> {
    (0..a.n)
        .map(|i| {
            let d = a.get(i, i);
            if d > 0.0 && d.is_finite() {
                1.0 / libm::sqrt(d)
            } else {
                1.0
            }
        })
        .collect()
}

/// Cholesky factor of the equilibrated matrix `D A D`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    scale: Vec<f64>,
    lower: Vec<f64>,
}

impl Cholesky {
    /// `None` when a diagonal entry of `A` is not positive or any pivot of
    /// `D A D` is `<= pivot_tolerance`, i.e. when `A` is not numerically
    /// positive definite at that tolerance.
    pub fn new(a: &SymMatrix, pivot_tolerance: f64) -> Option<Self> {
        let n = a.n;
        if (0..n).any(|i| !(a.get(i, i) > 0.0 && a.get(i, i).is_finite())) {
            return None;
        }
        let scale = equilibration(a);
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = a.get(i, j) * scale[i] * scale[j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if s.is_nan() || s <= pivot_tolerance {
                        return None;
                    }
                    l[i * n + i] = libm::sqrt(s);
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Some(Self { n, scale, lower: l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, l) = (self.n, &self.lower);
        let mut z: Vec<f64> = b.iter().zip(&self.scale).map(|(bi, si)| bi * si).collect();
        for i in 0..n {
            let mut s = z[i];
            for k in 0..i {
                s -= l[i * n + k] * z[k];
            }
            z[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in i + 1..n {
                s -= l[k * n + i] * z[k];
            }
            z[i] = s / l[i * n + i];
        }
        z.iter().zip(&self.scale).map(|(zi, si)| zi * si).collect()
    }
}

/// Solves `A x = b` through [`Cholesky`]; `None` if the factorization fails
/// or the solution is not finite.
pub fn cholesky_solve(a: &SymMatrix, b: &[f64], pivot_tolerance: f64) -> Option<Vec<f64>> {
    let x = Cholesky::new(a, pivot_tolerance)?.solve(b);
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Eigendecomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues, unsorted.
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns of a row-major `n x n` matrix.
    pub vectors: Vec<f64>,
}

impl SymmetricEigen {
    /// Cyclic Jacobi rotations until the off-diagonal mass is below
    /// machine precision relative to the matrix norm.
    pub fn new(a: &SymMatrix) -> Self {
        let n = a.n;
        let mut m = a.data.clone();
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        let total = a.norm();
        let threshold = f64::EPSILON * f64::EPSILON * total * total;

        for _sweep in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    off += m[i * n + j] * m[i * n + j];
                }
            }
            if off <= threshold || total == 0.0 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = m[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = m[p * n + p];
                    let aqq = m[q * n + q];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + libm::sqrt(1.0 + theta * theta))
                    } else {
                        -1.0 / (-theta + libm::sqrt(1.0 + theta * theta))
                    };
                    let c = 1.0 / libm::sqrt(1.0 + t * t);
                    let s = t * c;
                    for k in 0..n {
                        let mkp = m[k * n + p];
                        let mkq = m[k * n + q];
                        m[k * n + p] = c * mkp - s * mkq;
                        m[k * n + q] = s * mkp + c * mkq;
                    }
                    for k in 0..n {
                        let mpk = m[p * n + k];
                        let mqk = m[q * n + k];
                        m[p * n + k] = c * mpk - s * mqk;
                        m[q * n + k] = s * mpk + c * mqk;
                    }
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let values = (0..n).map(|i| m[i * n + i]).collect();
        Self { values, vectors: v }
    }

    pub fn column(&self, k: usize) -> impl Iterator<Item = f64> + '_ {
        let n = self.values.len();
        (0..n).map(move |i| self.vectors[i * n + k])
    }
}

/// Truncated spectral pseudoinverse of a symmetric positive semidefinite
/// matrix. Rank is decided on the equilibrated matrix `D A D` (unit
/// diagonal), discarding eigenvalues `<= tolerance`; solutions are projected
/// off the discarded directions `D u`, so they are minimum-norm in the
/// original coordinates.
#[derive(Debug, Clone)]
pub struct MinNorm {
    scale: Vec<f64>,
    /// Retained eigenpairs of `D A D`.
    kept: Vec<(f64, Vec<f64>)>,
    /// Orthonormal basis of the discarded directions in original coordinates.
    null: Vec<Vec<f64>>,
}

impl MinNorm {
    pub fn new(a: &SymMatrix, tolerance: f64) -> Self {
        let n = a.n;
        let scale = equilibration(a);
        let mut eq = a.clone();
        for i in 0..n {
            for j in 0..n {
                eq.data[i * n + j] *= scale[i] * scale[j];
            }
        }
        let eig = SymmetricEigen::new(&eq);
        let mut kept = Vec::new();
        let mut discarded = Vec::new();
        for (k, &lambda) in eig.values.iter().enumerate() {
            let u: Vec<f64> = eig.column(k).collect();
            if lambda > tolerance {
                kept.push((lambda, u));
            } else {
                discarded.push(
                    u.iter()
                        .zip(&scale)
                        .map(|(ui, si)| ui * si)
                        .collect::<Vec<f64>>(),
                );
            }
        }

        // Gram-Schmidt, two passes.
        let mut null: Vec<Vec<f64>> = Vec::with_capacity(discarded.len());
        for mut v in discarded {
            for _ in 0..2 {
                for q in &null {
                    let c = dot(q, &v);
                    v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= c * qi);
                }
            }
            let norm = libm::sqrt(dot(&v, &v));
            if norm > 0.0 {
                v.iter_mut().for_each(|vi| *vi /= norm);
                null.push(v);
            }
        }
        Self { scale, kept, null }
    }

    pub fn rank(&self) -> usize {
        self.kept.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let rhs: Vec<f64> = b.iter().zip(&self.scale).map(|(bi, si)| bi * si).collect();
        let mut z = vec![0.0; rhs.len()];
        for (lambda, u) in &self.kept {
            let c = dot(u, &rhs) / lambda;
            z.iter_mut().zip(u).for_each(|(zi, ui)| *zi += c * ui);
        }
        let mut x: Vec<f64> = z.iter().zip(&self.scale).map(|(zi, si)| zi * si).collect();
        for q in &self.null {
            let c = dot(q, &x);
            x.iter_mut().zip(q).for_each(|(xi, qi)| *xi -= c * qi);
        }
        x
    }
}

/// Minimum-norm solution of `A x = b` through [`MinNorm`].
/// Returns the solution and the retained rank.
pub fn min_norm_solve(a: &SymMatrix, b: &[f64], tolerance: f64) -> (Vec<f64>, usize) {
    let f = MinNorm::new(a, tolerance);
    (f.solve(b), f.rank())
}
