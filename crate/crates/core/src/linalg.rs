//! Dense symmetric matrices and a cyclic Jacobi eigensolver.

use crate::error::{Error, Result};

/// Dense symmetric `n x n` matrix stored row-major in full.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Symmetrizes a row-major square array: entries become `(a_ij + a_ji) / 2`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, actual: bad.len() });
        }
        Ok(Self::from_fn(n, |i, j| 0.5 * (rows[i][j] + rows[j][i])))
    }

    /// `x y^T + y x^T`.
    pub fn sym_outer(x: &[f64], y: &[f64]) -> Self {
        assert_eq!(x.len(), y.len());
        Self::from_fn(x.len(), |i, j| x[i] * y[j] + y[i] * x[j])
    }

    /// `x x^T`.
    pub fn outer(x: &[f64]) -> Self {
        Self::from_fn(x.len(), |i, j| x[i] * x[j])
    }

    /// Block-diagonal matrix with blocks `c_k I_{n_k}`.
    pub fn scalar_blocks(blocks: &[(usize, f64)]) -> Self {
        let d: Vec<f64> = blocks
            .iter()
            .flat_map(|&(n, c)| std::iter::repeat_n(c, n))
            .collect();
        Self::diagonal(&d)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `H[x] = x^T H x`.
    pub fn quad(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        let mut s = 0.0;
        for i in 0..self.n {
            let row = self.row(i);
            let mut t = 0.0;
            for j in 0..self.n {
                t += row[j] * x[j];
            }
            s += x[i] * t;
        }
        s
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `H^2`, symmetric since `H` is.
    pub fn square(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| {
            self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum()
        })
    }

    /// Frobenius inner product `<A, B> = Tr(AB)`.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// `Tr H^2`.
    pub fn frobenius_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| c * x).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(-1.0))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Traceless part `H - (Tr H / n) I`.
    pub fn traceless_part(&self) -> Self {
        let t = self.trace() / self.n as f64;
        self.sub(&Self::identity(self.n).scaled(t))
    }

    /// Embeds `self` as the diagonal block starting at `offset` of an `n x n` zero matrix.
    pub fn embed(&self, n: usize, offset: usize) -> Self {
        assert!(offset + self.n <= n);
        let mut m = Self::zeros(n);
        for i in 0..self.n {
            for j in i..self.n {
                m.set(offset + i, offset + j, self.get(i, j));
            }
        }
        m
    }

    /// Conjugation `A^T H A` for a `k x n` row matrix `a` (rows are the new coordinates).
    pub fn congruence(&self, a: &[Vec<f64>]) -> Self {
        let k = a.len();
        let ha: Vec<Vec<f64>> = a.iter().map(|r| self.mul_vec(r)).collect();
        Self::from_fn(k, |i, j| a[i].iter().zip(&ha[j]).map(|(x, y)| x * y).sum())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        jacobi_eigen(self, false).0
    }
}

/// Eigen decomposition by cyclic Jacobi rotations.
///
/// Returns eigenvalues sorted ascending and, when requested, the matching
/// eigenvectors as rows.
pub fn jacobi_eigen(m: &SymMatrix, want_vectors: bool) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.n;
    let mut a = m.data.clone();
    let mut v = if want_vectors { SymMatrix::identity(n).data } else { Vec::new() };
    let scale = a.iter().fold(0.0f64, |s, x| s.max(x.abs())).max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON * scale * 1e-2;

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= eps {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= eps {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if want_vectors {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = if want_vectors {
        order.iter().map(|&j| (0..n).map(|k| v[k * n + j]).collect()).collect()
    } else {
        Vec::new()
    };
    (values, vectors)
}

/// Orthonormalizes `vectors` in order, dropping those dependent on earlier ones.
pub fn gram_schmidt(vectors: &[Vec<f64>], max_rank: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        if basis.len() == max_rank {
            break;
        }
        let mut w = v.clone();
        // two passes keep the result orthogonal to machine precision
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= d * bi;
                }
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let ref_norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 * ref_norm.max(1.0) {
            basis.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Groups sorted values into clusters whose consecutive gaps are below `tol`.
pub fn cluster_sorted(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            if i > start {
                let mean = values[start..i].iter().sum::<f64>() / (i - start) as f64;
                out.push((mean, i - start));
            }
            start = i;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalizes_small_matrix() {
        let m = SymMatrix::from_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 1.0],
            vec![0.0, 1.0, 2.0],
        ])
        .unwrap();
        let (vals, vecs) = jacobi_eigen(&m, true);
        let r = 2f64.sqrt();
        let expect = [2.0 - r, 2.0, 2.0 + r];
        for (a, b) in vals.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }
        for (lam, v) in vals.iter().zip(&vecs) {
            let mv = m.mul_vec(v);
            for (x, y) in mv.iter().zip(v) {
                assert!((x - lam * y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_handles_diagonal_and_empty() {
        assert!(jacobi_eigen(&SymMatrix::zeros(0), false).0.is_empty());
        let d = SymMatrix::diagonal(&[3.0, -1.0, 2.0]);
        assert_eq!(d.eigenvalues(), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn clustering_counts_multiplicities() {
        let c = cluster_sorted(&[0.0, 1e-9, 4.0, 4.0 + 5e-7, 8.0], 1e-6);
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].1, 2);
        assert_eq!(c[1].1, 2);
        assert_eq!(c[2], (8.0, 1));
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0]]).is_err());
    }
}
