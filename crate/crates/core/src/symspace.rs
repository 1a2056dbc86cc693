//! The traceless subspace `T_0^n` of symmetric matrices and the quadratic
//! form `Q[H] = sum_{x in R} H[x]^2` attached to a root system.

use crate::error::{Error, Result};
use crate::latcat::LatticeEntry;
use crate::linalg::{cluster_sorted, gram_schmidt, SymMatrix};
use crate::rootsys::{IrreducibleRootSystem, RootKind, RootSystem};

/// Tolerance used when counting eigenvalue multiplicities.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Deterministic orthonormal basis of `T_0^n`: off-diagonal elements
/// `(E_ij + E_ji)/sqrt 2` for `i < j` in lexicographic order, then the
/// Gram–Schmidt orthonormalization of `E_ii - E_{i+1,i+1}`.
#[derive(Clone, Debug)]
pub struct TracelessBasis {
    n: usize,
    diag: Vec<Vec<f64>>,
}

impl TracelessBasis {
    pub fn new(n: usize) -> Self {
        let raw: Vec<Vec<f64>> = (0..n.saturating_sub(1))
            .map(|i| {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                v[i + 1] = -1.0;
                v
            })
            .collect();
        Self { n, diag: gram_schmidt(&raw, n.saturating_sub(1)) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `dim T_0^n = n(n+1)/2 - 1`.
    pub fn len(&self) -> usize {
        (self.n * (self.n + 1) / 2).saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn offdiag_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn matrix(&self, k: usize) -> SymMatrix {
        let mut m = SymMatrix::zeros(self.n);
        if k < self.offdiag_count() {
            let (i, j) = self.offdiag_pair(k);
            m.set(i, j, std::f64::consts::FRAC_1_SQRT_2);
        } else {
            for (i, &d) in self.diag[k - self.offdiag_count()].iter().enumerate() {
                m.set(i, i, d);
            }
        }
        m
    }

    fn offdiag_pair(&self, mut k: usize) -> (usize, usize) {
        for i in 0..self.n {
            let row = self.n - 1 - i;
            if k < row {
                return (i, i + 1 + k);
            }
            k -= row;
        }
        unreachable!("off-diagonal index out of range")
    }

    /// `G_k[x]` for every basis element.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        let s2 = std::f64::consts::SQRT_2;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                out.push(s2 * x[i] * x[j]);
            }
        }
        for d in &self.diag {
            out.push(d.iter().zip(x).map(|(a, b)| a * b * b).sum());
        }
        out
    }

    /// Coordinates `<G_k, H>` of `H` in the basis.
    pub fn coords(&self, h: &SymMatrix) -> Vec<f64> {
        let s2 = std::f64::consts::SQRT_2;
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                out.push(s2 * h.get(i, j));
            }
        }
        for d in &self.diag {
            out.push(d.iter().enumerate().map(|(i, a)| a * h.get(i, i)).sum());
        }
        out
    }

    pub fn from_coords(&self, c: &[f64]) -> SymMatrix {
        c.iter()
            .enumerate()
            .fold(SymMatrix::zeros(self.n), |acc, (k, &ck)| {
                if ck == 0.0 {
                    acc
                } else {
                    acc.add(&self.matrix(k).scaled(ck))
                }
            })
    }
}

/// Gram matrix `(sum_x G_i[x] G_j[x])_{ij}` over the traceless basis.
pub fn quartic_gram(points: &[Vec<f64>], basis: &TracelessBasis) -> SymMatrix {
    let m = basis.len();
    let mut g = vec![0.0; m * m];
    for x in points {
        let w = basis.eval(x);
        let nz: Vec<usize> = (0..m).filter(|&k| w[k] != 0.0).collect();
        for &i in &nz {
            let wi = w[i];
            let row = &mut g[i * m..(i + 1) * m];
            for &j in &nz {
                row[j] += wi * w[j];
            }
        }
    }
    SymMatrix::from_fn(m, |i, j| 0.5 * (g[i * m + j] + g[j * m + i]))
}

/// The form `Q` of a root system realized in a frame of dimension `n >= rank`.
#[derive(Clone, Debug)]
pub struct QForm {
    n: usize,
    roots: Vec<Vec<f64>>,
}

impl QForm {
    pub fn new(rs: &RootSystem, n: usize) -> Self {
        Self { n, roots: rs.roots_in_frame(n) }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn apply(&self, h: &SymMatrix) -> Result<f64> {
        if h.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: h.dim() });
        }
        Ok(self.roots.iter().map(|x| h.quad(x).powi(2)).sum())
    }

    pub fn gram(&self, basis: &TracelessBasis) -> SymMatrix {
        quartic_gram(&self.roots, basis)
    }
}

/// `Q[H] = sum_{x in R} (x^T H x)^2` with `H` in the frame of `rs`.
pub fn q_apply(rs: &RootSystem, h: &SymMatrix) -> Result<f64> {
    QForm::new(rs, rs.total_rank()).apply(h)
}

/// Eigenvalues of `Q` on `T_0^n` with multiplicities, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct QSpectrum {
    pub n: usize,
    pub entries: Vec<(f64, usize)>,
}

impl QSpectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn expected_multiplicity(&self) -> usize {
        (self.n * (self.n + 1) / 2).saturating_sub(1)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    /// Entry-wise agreement: same length, eigenvalues within `tol`, equal multiplicities.
    pub fn agrees_with(&self, other: &QSpectrum, tol: f64) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a.0 - b.0).abs() <= tol && a.1 == b.1)
    }

    fn from_pairs(n: usize, mut pairs: Vec<(f64, usize)>) -> Self {
        pairs.retain(|p| p.1 > 0);
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut entries: Vec<(f64, usize)> = Vec::new();
        for (v, m) in pairs {
            match entries.last_mut() {
                Some(last) if (last.0 - v).abs() < CLUSTER_TOL => last.1 += m,
                _ => entries.push((v, m)),
            }
        }
        Self { n, entries }
    }
}

/// Traceless eigenvalues of a single irreducible component (the `4h` row on `span{I}` excluded).
fn irreducible_rows(c: &IrreducibleRootSystem) -> Vec<(f64, usize)> {
    let n = c.rank();
    match c.kind() {
        RootKind::A if n == 1 => vec![],
        RootKind::A => vec![(2.0 * (n as f64 + 1.0), n), (4.0, n * (n - 1) / 2 - 1)],
        RootKind::D => vec![(4.0 * (n as f64 - 2.0), n - 1), (8.0, n * (n - 1) / 2)],
        RootKind::E => {
            let h = c.coxeter() as f64;
            vec![(8.0 * h / (n as f64 + 2.0), n * (n + 1) / 2 - 1)]
        }
    }
}

/// Closed-form spectrum for irreducible systems and equal-Coxeter orthogonal sums.
pub fn q_spectrum_closed(rs: &RootSystem) -> Result<QSpectrum> {
    let comps = rs.components();
    if comps.len() > 1 && !rs.equal_coxeter() {
        return Err(Error::UnequalCoxeter(rs.coxeter_numbers()));
    }
    let mut pairs: Vec<(f64, usize)> = comps.iter().flat_map(irreducible_rows).collect();
    let ranks: Vec<usize> = comps.iter().map(|c| c.rank()).collect();
    let mut cross = 0;
    for i in 0..ranks.len() {
        for j in (i + 1)..ranks.len() {
            cross += ranks[i] * ranks[j];
        }
    }
    pairs.push((0.0, cross));
    if let Some(h) = rs.coxeter() {
        pairs.push((4.0 * h as f64, comps.len() - 1));
    }
    Ok(QSpectrum::from_pairs(rs.total_rank(), pairs))
}

/// Numeric spectrum from the Gram matrix of `b_Q` over the traceless basis.
pub fn q_spectrum_numeric(rs: &RootSystem) -> QSpectrum {
    q_spectrum_numeric_in(rs, rs.total_rank())
}

/// As [`q_spectrum_numeric`], with the roots padded into dimension `n`.
pub fn q_spectrum_numeric_in(rs: &RootSystem, n: usize) -> QSpectrum {
    let basis = TracelessBasis::new(n);
    let gram = QForm::new(rs, n).gram(&basis);
    let vals = gram.eigenvalues();
    let entries = cluster_sorted(&vals, CLUSTER_TOL)
        .into_iter()
        .map(|(v, m)| (v.max(0.0), m))
        .collect();
    QSpectrum { n, entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PwSubspace {
    U1,
    U2,
    D4Plus,
    D4Minus,
}

/// `M(x, y) = x y^T + y x^T`.
pub fn m_pair(x: &[f64], y: &[f64]) -> SymMatrix {
    SymMatrix::sym_outer(x, y)
}

/// Spanning sets of the invariant subspaces, in frame coordinates of `rs`.
///
/// `U1(A_n)` is generated by `M(x, y)` over orthogonal pairs of positive roots;
/// the returned set is not linearly independent.
pub fn peter_weyl_basis(rs: &IrreducibleRootSystem, subspace: PwSubspace) -> Result<Vec<SymMatrix>> {
    let n = rs.rank();
    let undefined = || Error::SubspaceUndefined {
        subspace: format!("{subspace:?}"),
        root_system: rs.name(),
    };
    match (rs.kind(), subspace) {
        (RootKind::A, PwSubspace::U1) if n >= 2 => {
            let roots = rs.frame_roots();
            // roots come in (r, -r) pairs
            let pos: Vec<&Vec<f64>> = roots.iter().step_by(2).collect();
            let exact = rs.roots();
            let mut out = Vec::new();
            for i in 0..pos.len() {
                for j in (i + 1)..pos.len() {
                    if exact[2 * i].dot(&exact[2 * j]) == 0 {
                        out.push(m_pair(pos[i], pos[j]));
                    }
                }
            }
            Ok(out)
        }
        (RootKind::A, PwSubspace::U2) if n >= 2 => {
            let frame = rs.frame();
            let proj = |i: usize, j: usize| -> Vec<f64> {
                frame.iter().map(|b| b[i] - b[j]).collect()
            };
            Ok((0..=n)
                .map(|i| {
                    let sum = (0..=n)
                        .filter(|&j| j != i)
                        .fold(SymMatrix::zeros(n), |acc, j| acc.add(&SymMatrix::outer(&proj(i, j))));
                    sum.sub(&SymMatrix::identity(n).scaled(2.0))
                })
                .collect())
        }
        (RootKind::D, PwSubspace::U1) => {
            let mut out = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut m = SymMatrix::zeros(n);
                    m.set(i, j, 1.0);
                    out.push(m);
                }
            }
            Ok(out)
        }
        (RootKind::D, PwSubspace::U2) => Ok((0..n - 1)
            .map(|i| {
                let mut d = vec![0.0; n];
                d[i] = 1.0;
                d[i + 1] = -1.0;
                SymMatrix::diagonal(&d)
            })
            .collect()),
        (RootKind::D, PwSubspace::D4Plus | PwSubspace::D4Minus) if n == 4 => {
            let s = if subspace == PwSubspace::D4Plus { 1.0 } else { -1.0 };
            let make = |a: f64, b: f64, c: f64| {
                SymMatrix::from_rows(&[
                    vec![0.0, a, b, s * c],
                    vec![a, 0.0, c, s * b],
                    vec![b, c, 0.0, s * a],
                    vec![s * c, s * b, s * a, 0.0],
                ])
                .expect("square")
            };
            Ok(vec![make(1.0, 0.0, 0.0), make(0.0, 1.0, 0.0), make(0.0, 0.0, 1.0)])
        }
        _ => Err(undefined()),
    }
}

/// Dimension of the span of a set of matrices (numeric rank of their Gram matrix).
pub fn span_dimension(ms: &[SymMatrix]) -> usize {
    if ms.is_empty() {
        return 0;
    }
    let g = SymMatrix::from_fn(ms.len(), |i, j| ms[i].inner(&ms[j]));
    let vals = g.eigenvalues();
    let top = vals.last().copied().unwrap_or(0.0).max(1.0);
    vals.iter().filter(|&&v| v > 1e-9 * top).count()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DesignCheck {
    pub holds: bool,
    pub residual: f64,
}

/// Moment test of the 2- or 4-design property for points on a common sphere.
///
/// `t = 2`: odd first moment vanishes and `sum x x^T = (r^2 |X| / n) I` to `1e-10`.
/// `t = 4`: additionally the third moment vanishes and
/// `sum H[x]^2 = (2 r^4 |X| / (n(n+2))) Tr H^2` on `T_0^n` to `1e-8` relative.
pub fn design_check(points: &[Vec<f64>], t: u32) -> Result<DesignCheck> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if t != 2 && t != 4 {
        return Err(Error::InvalidArgument(format!("design strength {t} (expected 2 or 4)")));
    }
    let n = points[0].len();
    let r2 = crate::linalg::dot(&points[0], &points[0]);
    for (index, p) in points.iter().enumerate() {
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: p.len() });
        }
        let norm = crate::linalg::dot(p, p);
        if (norm - r2).abs() > 1e-9 * r2.max(1.0) {
            return Err(Error::OffSphere { index, norm, expected: r2 });
        }
    }
    let count = points.len() as f64;
    let c2 = r2 * count / n as f64;
    let mut first = vec![0.0; n];
    let mut second = SymMatrix::zeros(n);
    for p in points {
        for i in 0..n {
            first[i] += p[i];
            for j in i..n {
                let v = second.get(i, j) + p[i] * p[j];
                second.set(i, j, v);
            }
        }
    }
    let scale2 = c2.max(1.0);
    let mut res2 = second.sub(&SymMatrix::identity(n).scaled(c2)).max_abs() / scale2;
    let odd1 = first.iter().fold(0.0f64, |m, x| m.max(x.abs())) / (count * r2.sqrt()).max(1.0);
    res2 = res2.max(odd1);
    if t == 2 {
        return Ok(DesignCheck { holds: res2 <= 1e-10, residual: res2 });
    }

    let mut odd3 = 0.0f64;
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let s: f64 = points.iter().map(|p| p[i] * p[j] * p[k]).sum();
                odd3 = odd3.max(s.abs());
            }
        }
    }
    odd3 /= (count * r2.powf(1.5)).max(1.0);
    let c4 = 2.0 * r2 * r2 * count / (n as f64 * (n as f64 + 2.0));
    let basis = TracelessBasis::new(n);
    let gram = quartic_gram(points, &basis);
    let res4 = if basis.is_empty() {
        0.0
    } else {
        gram.sub(&SymMatrix::identity(basis.len()).scaled(c4)).max_abs() / c4
    };
    let holds = res2 <= 1e-10 && odd3 <= 1e-10 && res4 <= 1e-8;
    Ok(DesignCheck { holds, residual: res2.max(odd3).max(res4) })
}

/// Harmonic decomposition of `p_H(x) = H[x]^2` for traceless `H`:
/// `p_H = p4 + |x|^2 p2 + |x|^4 p0`.
#[derive(Clone, Debug)]
pub struct HarmonicParts {
    h: SymMatrix,
    h2: SymMatrix,
    tr_h2: f64,
}

pub fn harmonic_components(h: &SymMatrix) -> Result<HarmonicParts> {
    let tr = h.trace();
    if tr.abs() > 1e-12 * h.max_abs().max(1.0) {
        return Err(Error::NonTraceless(tr));
    }
    Ok(HarmonicParts { h: h.clone(), h2: h.square(), tr_h2: h.frobenius_sq() })
}

impl HarmonicParts {
    fn n(&self) -> f64 {
        self.h.dim() as f64
    }

    pub fn p0(&self) -> f64 {
        let n = self.n();
        2.0 / ((2.0 + n) * n) * self.tr_h2
    }

    pub fn p2(&self, x: &[f64]) -> f64 {
        let n = self.n();
        let r2 = crate::linalg::dot(x, x);
        (8.0 * self.h2.quad(x) - 8.0 / n * self.tr_h2 * r2) / (8.0 + 2.0 * n)
    }

    pub fn p4(&self, x: &[f64]) -> f64 {
        let n = self.n();
        let r2 = crate::linalg::dot(x, x);
        self.h.quad(x).powi(2) - r2 * 4.0 / (4.0 + n) * self.h2.quad(x)
            + r2 * r2 * 2.0 / ((4.0 + n) * (2.0 + n)) * self.tr_h2
    }

    /// `p4(x) + |x|^2 p2(x) + |x|^4 p0`, equal to `H[x]^2`.
    pub fn reconstruct(&self, x: &[f64]) -> f64 {
        let r2 = crate::linalg::dot(x, x);
        self.p4(x) + r2 * self.p2(x) + r2 * r2 * self.p0()
    }
}

/// `sum_{x in L(2m)} H[x]^2 = c b_m + 4 m^2 (2/((2+n)n)) |L(2m)| Tr H^2` with
/// `c = Q[H] - (8/((2+n)n)) |L(2)| Tr H^2` and `b_m` the normalized cusp form
/// of weight `n/2 + 4`.
pub fn shell_quartic_sum(entry: &LatticeEntry, h: &SymMatrix, m: usize) -> Result<f64> {
    let n = entry.dim();
    if !matches!(n, 16 | 24 | 32) {
        return Err(Error::UnsupportedDimension(n));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("shell index m must be positive".into()));
    }
    let tr = h.trace();
    if tr.abs() > 1e-12 * h.max_abs().max(1.0) {
        return Err(Error::NonTraceless(tr));
    }
    let nf = n as f64;
    let tr_h2 = h.frobenius_sq();
    let q = QForm::new(entry.root_system(), n).apply(h)?;
    let a1 = entry.root_count() as f64;
    let c = q - 8.0 / ((2.0 + nf) * nf) * a1 * tr_h2;
    let theta = entry.theta_to(m + 1);
    let cusp = entry.cusp_to(m + 1)?;
    let am = theta.coeff_f64(m);
    let bm = cusp.coeff_f64(m);
    let mf = m as f64;
    Ok(c * bm + 4.0 * mf * mf * 2.0 / ((2.0 + nf) * nf) * am * tr_h2)
}
