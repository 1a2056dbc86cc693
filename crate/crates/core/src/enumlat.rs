//! Short-vector enumeration for integral positive definite Gram matrices,
//! used as an oracle for theta coefficients and Hessian sums.

use crate::error::{Error, Result};
use crate::latcat::LatticeBasis;
use crate::linalg::SymMatrix;
use crate::modforms::theta_coeff_bound;

pub const MAX_DIM: usize = 16;
pub const MAX_SHELL: u64 = 6;
/// Cap on visited lattice points per enumeration.
pub const MAX_VISITED: u64 = 50_000_000;
/// Cap on vectors materialized by [`enumerate_shell`].
pub const MAX_STORED: usize = 4_000_000;

/// Vectors of squared norm `2m` in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellList {
    pub norm: u64,
    pub vectors: Vec<Vec<i64>>,
}

fn check_gram(gram: &[Vec<i64>]) -> Result<usize> {
    let n = gram.len();
    if let Some(r) = gram.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, actual: r.len() });
    }
    if n > MAX_DIM {
        return Err(Error::BudgetExceeded(format!("dimension {n} > {MAX_DIM}")));
    }
    for i in 0..n {
        for j in 0..n {
            if gram[i][j] != gram[j][i] {
                return Err(Error::InvalidArgument("Gram matrix is not symmetric".into()));
            }
        }
    }
    Ok(n)
}

/// Upper-triangular factor with `x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`.
fn pohst_factor(gram: &[Vec<i64>]) -> Result<Vec<Vec<f64>>> {
    let n = gram.len();
    let mut q: Vec<Vec<f64>> = gram.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    for i in 0..n {
        if !(q[i][i] > 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        for j in (i + 1)..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in (i + 1)..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    Ok(q)
}

/// Calls `visit(v, v^T G v)` for every nonzero integer `v` with `v^T G v <= max_norm`.
pub fn visit_short_vectors(
    gram: &[Vec<i64>],
    max_norm: u64,
    mut visit: impl FnMut(&[i64], u64),
) -> Result<u64> {
    let n = check_gram(gram)?;
    let q = pohst_factor(gram)?;
    let bound = max_norm as f64 * (1.0 + 1e-9) + 1e-6;
    let mut x = vec![0i64; n];
    let mut visited = 0u64;

    struct Ctx<'a, F: FnMut(&[i64], u64)> {
        n: usize,
        q: &'a [Vec<f64>],
        gram: &'a [Vec<i64>],
        max_norm: u64,
        visited: &'a mut u64,
        visit: F,
    }

    fn rec<F: FnMut(&[i64], u64)>(c: &mut Ctx<'_, F>, x: &mut [i64], level: usize, rem: f64) -> Result<()> {
        let qi = c.q[level][level];
        let center = -((level + 1)..c.n).map(|j| c.q[level][j] * x[j] as f64).sum::<f64>();
        let half = (rem.max(0.0) / qi).sqrt();
        let lo = (center - half - 1e-9).ceil() as i64;
        let hi = (center + half + 1e-9).floor() as i64;
        for v in lo..=hi {
            x[level] = v;
            let d = v as f64 - center;
            let r = rem - qi * d * d;
            if r < -1e-6 {
                continue;
            }
            if level == 0 {
                if x.iter().all(|&t| t == 0) {
                    continue;
                }
                *c.visited += 1;
                if *c.visited > MAX_VISITED {
                    return Err(Error::BudgetExceeded(format!("more than {MAX_VISITED} lattice points")));
                }
                let mut norm = 0i64;
                for i in 0..c.n {
                    if x[i] == 0 {
                        continue;
                    }
                    let s: i64 = (0..c.n).map(|j| c.gram[i][j] * x[j]).sum();
                    norm += x[i] * s;
                }
                if norm > 0 && norm as u64 <= c.max_norm {
                    (c.visit)(x, norm as u64);
                }
            } else {
                rec(c, x, level - 1, r)?;
            }
        }
        x[level] = 0;
        Ok(())
    }

    if n == 0 {
        return Ok(0);
    }
    let mut ctx = Ctx { n, q: &q, gram, max_norm, visited: &mut visited, visit: &mut visit };
    rec(&mut ctx, &mut x, n - 1, bound)?;
    Ok(visited)
}

fn check_shell(m: u64) -> Result<()> {
    if m == 0 || m > MAX_SHELL {
        return Err(Error::BudgetExceeded(format!("shell index {m} outside 1..={MAX_SHELL}")));
    }
    Ok(())
}

/// The shell `{v : v^T G v = 2m}`.
pub fn enumerate_shell(gram: &[Vec<i64>], m: u64) -> Result<ShellList> {
    check_shell(m)?;
    let mut vectors = Vec::new();
    let mut overflow = false;
    visit_short_vectors(gram, 2 * m, |v, norm| {
        if norm == 2 * m {
            if vectors.len() < MAX_STORED {
                vectors.push(v.to_vec());
            } else {
                overflow = true;
            }
        }
    })?;
    if overflow {
        return Err(Error::BudgetExceeded(format!("shell holds more than {MAX_STORED} vectors")));
    }
    Ok(ShellList { norm: 2 * m, vectors })
}

/// `|L(2m)|` for `m = 0..=m_max` (index 0 counts the zero vector).
pub fn shell_counts(gram: &[Vec<i64>], m_max: u64) -> Result<Vec<u64>> {
    check_shell(m_max)?;
    let mut counts = vec![0u64; m_max as usize + 1];
    counts[0] = 1;
    let mut odd = false;
    visit_short_vectors(gram, 2 * m_max, |_, norm| {
        if norm % 2 == 1 {
            odd = true;
        } else {
            counts[(norm / 2) as usize] += 1;
        }
    })?;
    if odd {
        return Err(Error::InvalidArgument("Gram matrix is not even".into()));
    }
    Ok(counts)
}

/// Energy `sum_{0 < |x|^2 <= 2 m_max} e^{-alpha |x|^2}` from enumeration,
/// together with a certified bound for the omitted shells.
pub fn energy_direct(gram: &[Vec<i64>], alpha: f64, m_max: u64) -> Result<(f64, f64)> {
    if !(alpha >= std::f64::consts::FRAC_PI_2) || m_max < 4 {
        return Err(Error::InvalidArgument(format!(
            "energy_direct needs alpha >= pi/2 and m_max >= 4 (got {alpha}, {m_max})"
        )));
    }
    let counts = shell_counts(gram, m_max)?;
    let value = counts
        .iter()
        .enumerate()
        .skip(1)
        .map(|(m, &c)| c as f64 * (-2.0 * alpha * m as f64).exp())
        .sum();
    let bound = theta_coeff_bound(gram.len(), counts[1])?;
    let tail = bound.tail(m_max + 1, alpha)?;
    Ok((value, tail))
}

/// `alpha sum_{0 < |x|^2 <= 2 m_max} e^{-alpha |x|^2} ((alpha/2) H[x]^2 - H^2[x]/2)`
/// with `H` in the ambient coordinates of `basis`.
pub fn hessian_direct(basis: &LatticeBasis, alpha: f64, h: &SymMatrix, m_max: u64) -> Result<f64> {
    let n = basis.dim();
    if h.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: h.dim() });
    }
    let tr = h.trace();
    if tr.abs() > 1e-12 * h.max_abs().max(1.0) {
        return Err(Error::NonTraceless(tr));
    }
    check_shell(m_max)?;
    let gram = basis.gram();
    let h2 = h.square();
    let mut shell_sums = vec![0.0; m_max as usize + 1];
    visit_short_vectors(&gram, 2 * m_max, |v, norm| {
        let x = basis.embed(v);
        let hx = h.quad(&x);
        let term = 0.5 * alpha * hx * hx - 0.5 * h2.quad(&x);
        shell_sums[(norm / 2) as usize] += term;
    })?;
    Ok(shell_sums
        .iter()
        .enumerate()
        .map(|(m, s)| alpha * (-2.0 * alpha * m as f64).exp() * s)
        .sum())
}

/// `-alpha sum e^{-alpha |x|^2} H[x]` over `0 < |x|^2 <= 2 m_max`.
pub fn gradient_direct(basis: &LatticeBasis, alpha: f64, h: &SymMatrix, m_max: u64) -> Result<f64> {
    let n = basis.dim();
    if h.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: h.dim() });
    }
    check_shell(m_max)?;
    let mut total = 0.0;
    visit_short_vectors(&basis.gram(), 2 * m_max, |v, norm| {
        total += (-alpha * norm as f64).exp() * h.quad(&basis.embed(v));
    })?;
    Ok(-alpha * total)
}
