//! Irreducible ADE root systems and their orthogonal sums.
//!
//! Roots are stored exactly with doubled coordinates so that the half-integer
//! vectors of the E-types stay integral. Every operation that needs an
//! `n`-dimensional orthonormal frame (moments, quadratic forms) goes through
//! [`IrreducibleRootSystem::frame`]:
//!
//! * `D_n` and `E_8` use the ambient coordinates directly.
//! * `A_n` lives in `R^{n+1}`; its frame is Gram–Schmidt on `e_i - e_{i+1}`.
//! * `E_6`, `E_7` live in `R^8`; their frame is Gram–Schmidt on the root list.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, SymMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootKind {
    A,
    D,
    E,
}

impl RootKind {
    pub fn letter(self) -> char {
        match self {
            RootKind::A => 'A',
            RootKind::D => 'D',
            RootKind::E => 'E',
        }
    }
}

/// A root with doubled ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root(Vec<i32>);

impl Root {
    pub fn from_doubled(coords: Vec<i32>) -> Self {
        Root(coords)
    }

    pub fn doubled(&self) -> &[i32] {
        &self.0
    }

    /// Exact inner product. Inner products of roots are integers.
    pub fn dot(&self, other: &Root) -> i64 {
        let s = self.dot4(other);
        debug_assert_eq!(s % 4, 0);
        s / 4
    }

    /// Four times the inner product.
    pub fn dot4(&self, other: &Root) -> i64 {
        self.0.iter().zip(&other.0).map(|(&a, &b)| a as i64 * b as i64).sum()
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|x| -x).collect())
    }

    /// Reflection of `y` in the hyperplane orthogonal to `self`: `y - (x.y) x`.
    pub fn reflect(&self, y: &Root) -> Root {
        let c = self.dot(y) as i32;
        Root(y.0.iter().zip(&self.0).map(|(&yi, &xi)| yi - c * xi).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&x| x as f64 / 2.0).collect()
    }
}

/// Table values of an irreducible root system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootProperties {
    pub count: usize,
    pub coxeter: usize,
    pub n0: usize,
    pub n1: usize,
    pub weyl_order: BigUint,
}

#[derive(Clone, Debug)]
pub struct IrreducibleRootSystem {
    kind: RootKind,
    rank: usize,
    ambient_dim: usize,
    roots: Vec<Root>,
    frame: Vec<Vec<f64>>,
}

fn unit2(dim: usize, i: usize, si: i32, j: usize, sj: i32) -> Root {
    let mut v = vec![0; dim];
    v[i] = 2 * si;
    v[j] = 2 * sj;
    Root(v)
}

fn d_roots(n: usize, dim: usize) -> Vec<Root> {
    let mut out = Vec::with_capacity(2 * n * (n - 1));
    for i in 0..n {
        for j in (i + 1)..n {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                out.push(unit2(dim, i, si, j, sj));
            }
        }
    }
    out
}

fn e8_roots() -> Vec<Root> {
    let mut out = d_roots(8, 8);
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            out.push(Root((0..8).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect()));
        }
    }
    out
}

impl IrreducibleRootSystem {
    pub fn new(kind: RootKind, rank: usize) -> Result<Self> {
        let invalid = Error::InvalidRank { kind: kind.letter(), rank };
        let (ambient_dim, roots) = match kind {
            RootKind::A => {
                if rank < 1 {
                    return Err(invalid);
                }
                let dim = rank + 1;
                let mut roots = Vec::with_capacity(rank * (rank + 1));
                for i in 0..dim {
                    for j in (i + 1)..dim {
                        let r = unit2(dim, i, 1, j, -1);
                        let minus = r.neg();
                        roots.push(r);
                        roots.push(minus);
                    }
                }
                (dim, roots)
            }
            RootKind::D => {
                if rank < 4 {
                    return Err(invalid);
                }
                (rank, d_roots(rank, rank))
            }
            RootKind::E => {
                let e8 = e8_roots();
                // E7 = E8 ∩ (e7 - e8)^⊥, E6 = E7 ∩ (e6 - e7)^⊥
                let perp = |r: &Root, a: usize, b: usize| r.0[a] == r.0[b];
                let roots: Vec<Root> = match rank {
                    8 => e8,
                    7 => e8.into_iter().filter(|r| perp(r, 6, 7)).collect(),
                    6 => e8.into_iter().filter(|r| perp(r, 6, 7) && perp(r, 5, 6)).collect(),
                    _ => return Err(invalid),
                };
                (8, roots)
            }
        };
        let frame = match kind {
            RootKind::D => identity_rows(rank),
            RootKind::E if rank == 8 => identity_rows(8),
            RootKind::A => {
                let simple: Vec<Vec<f64>> = (0..rank)
                    .map(|i| {
                        let mut v = vec![0.0; rank + 1];
                        v[i] = 1.0;
                        v[i + 1] = -1.0;
                        v
                    })
                    .collect();
                gram_schmidt(&simple, rank)
            }
            RootKind::E => {
                let vs: Vec<Vec<f64>> = roots.iter().map(Root::to_f64).collect();
                gram_schmidt(&vs, rank)
            }
        };
        debug_assert_eq!(frame.len(), rank);
        Ok(Self { kind, rank, ambient_dim, roots, frame })
    }

    pub fn kind(&self) -> RootKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn count(&self) -> usize {
        self.roots.len()
    }

    /// Coxeter number `h = |R| / rank`.
    pub fn coxeter(&self) -> usize {
        self.roots.len() / self.rank
    }

    /// Orthonormal basis of the span of the roots, one row per frame axis.
    pub fn frame(&self) -> &[Vec<f64>] {
        &self.frame
    }

    /// Roots expressed in frame coordinates (length `rank`).
    pub fn frame_roots(&self) -> Vec<Vec<f64>> {
        self.roots
            .iter()
            .map(|r| {
                let x = r.to_f64();
                self.frame.iter().map(|b| crate::linalg::dot(b, &x)).collect()
            })
            .collect()
    }

    pub fn properties(&self) -> RootProperties {
        let n = self.rank;
        let fact = |k: usize| (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i));
        let (count, n0, n1, weyl) = match (self.kind, n) {
            (RootKind::A, _) => (
                n * (n + 1),
                (n - 1) * n.saturating_sub(2),
                2 * (n - 1),
                fact(n + 1),
            ),
            (RootKind::D, _) => (
                2 * n * (n - 1),
                2 * (n * n + 7 - 5 * n),
                4 * (n - 2),
                (BigUint::one() << (n - 1)) * fact(n),
            ),
            (RootKind::E, 6) => (72, 30, 20, BigUint::from(51_840u32)),
            (RootKind::E, 7) => (126, 60, 32, BigUint::from(2_903_040u32)),
            (_, _) => (240, 126, 56, BigUint::from(696_729_600u32)),
        };
        RootProperties { count, coxeter: count / n, n0, n1, weyl_order: weyl }
    }

    /// Exact `4 * sum_x x x^T` in ambient coordinates.
    pub fn second_moment_ambient_x4(&self) -> Vec<Vec<i64>> {
        let d = self.ambient_dim;
        let mut m = vec![vec![0i64; d]; d];
        for r in &self.roots {
            for i in 0..d {
                for j in 0..d {
                    m[i][j] += r.0[i] as i64 * r.0[j] as i64;
                }
            }
        }
        m
    }

    /// Exact 2-design identity: `sum_x x x^T = 2h P` with `P` the orthogonal
    /// projector onto the span of the roots, checked as `M^2 = 2h M` and
    /// `Tr M = 2h * rank`.
    pub fn is_exact_two_design(&self) -> bool {
        let m4 = self.second_moment_ambient_x4();
        let d = self.ambient_dim;
        let h = self.coxeter() as i64;
        let trace: i64 = (0..d).map(|i| m4[i][i]).sum();
        if trace != 8 * h * self.rank as i64 {
            return false;
        }
        for i in 0..d {
            for j in 0..d {
                let sq: i64 = (0..d).map(|k| m4[i][k] * m4[k][j]).sum();
                if sq != 8 * h * m4[i][j] {
                    return false;
                }
            }
        }
        true
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.kind.letter(), self.rank)
    }
}

fn identity_rows(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        })
        .collect()
}

pub fn make_irreducible(kind: RootKind, rank: usize) -> Result<IrreducibleRootSystem> {
    IrreducibleRootSystem::new(kind, rank)
}

/// Orthogonal sum of irreducible root systems; component `i` occupies its own
/// block of frame coordinates, in order.
#[derive(Clone, Debug)]
pub struct RootSystem {
    components: Vec<IrreducibleRootSystem>,
}

pub fn direct_sum(components: Vec<IrreducibleRootSystem>) -> RootSystem {
    RootSystem { components }
}

impl RootSystem {
    pub fn empty() -> Self {
        Self { components: Vec::new() }
    }

    /// Builds from `(kind, rank, repetitions)` triples.
    pub fn from_spec(parts: &[(RootKind, usize, usize)]) -> Result<Self> {
        let mut components = Vec::new();
        for &(kind, rank, reps) in parts {
            let c = IrreducibleRootSystem::new(kind, rank)?;
            components.extend(std::iter::repeat_n(c, reps));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[IrreducibleRootSystem] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn total_rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn root_count(&self) -> usize {
        self.components.iter().map(|c| c.count()).sum()
    }

    pub fn coxeter_numbers(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.coxeter()).collect()
    }

    /// True when all components share one Coxeter number (vacuously for the empty system).
    pub fn equal_coxeter(&self) -> bool {
        let h = self.coxeter_numbers();
        h.windows(2).all(|w| w[0] == w[1])
    }

    /// Common Coxeter number, if any.
    pub fn coxeter(&self) -> Option<usize> {
        if self.is_empty() || !self.equal_coxeter() {
            None
        } else {
            Some(self.components[0].coxeter())
        }
    }

    /// `(offset, rank)` of each component block.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut off = 0;
        self.components
            .iter()
            .map(|c| {
                let b = (off, c.rank);
                off += c.rank;
                b
            })
            .collect()
    }

    /// All roots in the block-embedded frame of dimension `dim >= total_rank`.
    pub fn roots_in_frame(&self, dim: usize) -> Vec<Vec<f64>> {
        assert!(dim >= self.total_rank());
        let mut out = Vec::with_capacity(self.root_count());
        for (c, (off, _)) in self.components.iter().zip(self.blocks()) {
            for r in c.frame_roots() {
                let mut v = vec![0.0; dim];
                v[off..off + r.len()].copy_from_slice(&r);
                out.push(v);
            }
        }
        out
    }

    /// `sum_x x x^T` in the frame, computed from the roots.
    pub fn second_moment(&self) -> SymMatrix {
        self.second_moment_in(self.total_rank())
    }

    /// Same as [`second_moment`](Self::second_moment), zero-padded to `dim`.
    pub fn second_moment_in(&self, dim: usize) -> SymMatrix {
        let mut m = SymMatrix::zeros(dim);
        for x in self.roots_in_frame(dim) {
            for i in 0..dim {
                if x[i] == 0.0 {
                    continue;
                }
                for j in i..dim {
                    let v = m.get(i, j) + x[i] * x[j];
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Exact block scalars `2 h_i` of the second moment, one per component.
    pub fn second_moment_blocks(&self) -> Vec<(usize, Ratio<i64>)> {
        self.components
            .iter()
            .map(|c| (c.rank, Ratio::new(2 * c.count() as i64, c.rank as i64)))
            .collect()
    }

    /// Multiset key for comparing root systems up to component order.
    pub fn key(&self) -> Vec<(RootKind, usize)> {
        let mut k: Vec<_> = self.components.iter().map(|c| (c.kind, c.rank)).collect();
        k.sort();
        k
    }

    pub fn same_as(&self, other: &RootSystem) -> bool {
        self.key() == other.key()
    }
}

impl fmt::Display for RootSystem {
    /// Compact grammar, consecutive equal components grouped: `A5^4+D4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "empty");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.components.len() {
            let c = &self.components[i];
            let mut j = i + 1;
            while j < self.components.len()
                && self.components[j].kind == c.kind
                && self.components[j].rank == c.rank
            {
                j += 1;
            }
            if j - i > 1 {
                parts.push(format!("{}^{}", c.name(), j - i));
            } else {
                parts.push(c.name());
            }
            i = j;
        }
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for RootSystem {
    type Err = Error;

    /// Parses `A1^24`, `A5^4+D4`, `E8^3`, `D16`, `A1^8A3^8` (case-insensitive).
    /// `empty` and `0` denote the empty root system.
    fn from_str(s: &str) -> Result<Self> {
        let syntax = || Error::RootSystemSyntax(s.to_string());
        let t: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower: String = t.iter().collect::<String>().to_ascii_lowercase();
        if lower.is_empty() || lower == "empty" || lower == "0" {
            return Ok(Self::empty());
        }
        let mut parts = Vec::new();
        let mut i = 0;
        let read_num = |i: &mut usize| -> Option<usize> {
            let start = *i;
            while *i < t.len() && t[*i].is_ascii_digit() {
                *i += 1;
            }
            t[start..*i].iter().collect::<String>().parse().ok()
        };
        while i < t.len() {
            if t[i] == '+' && !parts.is_empty() {
                i += 1;
            }
            let kind = match t.get(i).map(|c| c.to_ascii_uppercase()) {
                Some('A') => RootKind::A,
                Some('D') => RootKind::D,
                Some('E') => RootKind::E,
                _ => return Err(syntax()),
            };
            i += 1;
            let rank = read_num(&mut i).ok_or_else(syntax)?;
            let reps = if t.get(i) == Some(&'^') {
                i += 1;
                read_num(&mut i).ok_or_else(syntax)?
            } else {
                1
            };
            if reps == 0 {
                return Err(syntax());
            }
            parts.push((kind, rank, reps));
        }
        Self::from_spec(&parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair_counts(rs: &IrreducibleRootSystem) -> (usize, usize) {
        let r0 = &rs.roots()[0];
        let n0 = rs.roots().iter().filter(|r| r0.dot(r) == 0).count();
        let n1 = rs.roots().iter().filter(|r| r0.dot(r) == 1).count();
        (n0, n1)
    }

    #[test]
    fn a1_roots_are_explicit() {
        let a1 = make_irreducible(RootKind::A, 1).unwrap();
        assert_eq!(a1.count(), 2);
        assert_eq!(a1.roots()[0].to_f64(), vec![1.0, -1.0]);
        assert_eq!(a1.roots()[1].to_f64(), vec![-1.0, 1.0]);
    }

    #[test]
    fn table_rows() {
        let a2 = make_irreducible(RootKind::A, 2).unwrap().properties();
        assert_eq!((a2.count, a2.coxeter, a2.n0, a2.n1), (6, 3, 0, 2));
        assert_eq!(a2.weyl_order, BigUint::from(6u32));
        let e7 = make_irreducible(RootKind::E, 7).unwrap().properties();
        assert_eq!((e7.count, e7.coxeter, e7.n0, e7.n1), (126, 18, 60, 32));
        assert_eq!(e7.weyl_order, BigUint::from(2_903_040u32));
        let d16 = make_irreducible(RootKind::D, 16).unwrap().properties();
        assert_eq!((d16.count, d16.coxeter, d16.n0, d16.n1), (480, 30, 366, 56));
        let f16 = (1..=16u64).fold(BigUint::one(), |a, i| a * BigUint::from(i));
        assert_eq!(d16.weyl_order, (BigUint::one() << 15) * f16);
    }

    #[test]
    fn e8_orthogonal_partners() {
        let e8 = make_irreducible(RootKind::E, 8).unwrap();
        assert_eq!(e8.count(), 240);
        assert_eq!(pair_counts(&e8), (126, 56));
        assert_eq!(make_irreducible(RootKind::D, 4).unwrap().count(), 24);
    }

    #[test]
    fn invalid_ranks() {
        assert!(make_irreducible(RootKind::A, 0).is_err());
        assert!(make_irreducible(RootKind::D, 3).is_err());
        assert!(matches!(
            make_irreducible(RootKind::E, 5),
            Err(Error::InvalidRank { kind: 'E', rank: 5 })
        ));
        assert!(make_irreducible(RootKind::E, 9).is_err());
    }

    #[test]
    fn counts_and_pairs_match_table_up_to_rank_24() {
        let mut systems = Vec::new();
        for n in 1..=24 {
            systems.push(make_irreducible(RootKind::A, n).unwrap());
        }
        for n in 4..=24 {
            systems.push(make_irreducible(RootKind::D, n).unwrap());
        }
        for n in 6..=8 {
            systems.push(make_irreducible(RootKind::E, n).unwrap());
        }
        for rs in &systems {
            let p = rs.properties();
            assert_eq!(rs.count(), p.count, "{}", rs.name());
            assert_eq!(pair_counts(rs), (p.n0, p.n1), "{}", rs.name());
            assert!(rs.roots().iter().all(|r| r.dot(r) == 2));
        }
    }

    #[test]
    fn closed_under_negation_and_reflection() {
        use std::collections::HashSet;
        for (k, n) in [(RootKind::A, 5), (RootKind::D, 6), (RootKind::E, 6), (RootKind::E, 7), (RootKind::E, 8)] {
            let rs = make_irreducible(k, n).unwrap();
            let set: HashSet<&Root> = rs.roots().iter().collect();
            for x in rs.roots() {
                assert!(set.contains(&x.neg()));
                for y in rs.roots() {
                    assert!(set.contains(&x.reflect(y)), "{} not closed", rs.name());
                }
            }
        }
    }

    #[test]
    fn direct_sums() {
        let a = RootSystem::from_str("A1^24").unwrap();
        assert_eq!((a.total_rank(), a.root_count(), a.equal_coxeter()), (24, 48, true));
        assert_eq!(a.coxeter(), Some(2));
        let e = RootSystem::from_str("E8+E8").unwrap();
        assert_eq!((e.total_rank(), e.root_count(), e.coxeter()), (16, 480, Some(30)));
        let k = RootSystem::from_str("a1^8+a3^8").unwrap();
        assert_eq!((k.total_rank(), k.root_count(), k.equal_coxeter()), (32, 112, false));
        let mut h = k.coxeter_numbers();
        h.dedup();
        assert_eq!(h, vec![2, 4]);
    }

    #[test]
    fn parse_and_display() {
        for s in ["A1^24", "A5^4+D4", "E8^3", "D16", "A11+D7+E6", "empty"] {
            assert_eq!(RootSystem::from_str(s).unwrap().to_string(), s);
        }
        assert_eq!(RootSystem::from_str("A1^8A3^8").unwrap().to_string(), "A1^8+A3^8");
        assert!(RootSystem::from_str("B3").is_err());
        assert!(RootSystem::from_str("A").is_err());
        assert!(RootSystem::from_str("A2^0").is_err());
        assert!(RootSystem::from_str("D3").is_err());
        assert!(RootSystem::from_str("A5^4+D4").unwrap().same_as(&"D4+A5^4".parse().unwrap()));
    }

    #[test]
    fn second_moments() {
        let e8 = RootSystem::from_str("E8").unwrap().second_moment();
        assert!(e8.sub(&SymMatrix::identity(8).scaled(60.0)).max_abs() < 1e-12);
        let d16 = RootSystem::from_str("D16").unwrap().second_moment();
        assert!(d16.sub(&SymMatrix::identity(16).scaled(60.0)).max_abs() < 1e-12);
        let k = RootSystem::from_str("A1^8+A3^8").unwrap().second_moment();
        let expect = SymMatrix::scalar_blocks(&[(8, 4.0), (24, 8.0)]);
        assert!(k.sub(&expect).max_abs() < 1e-12);
    }

    #[test]
    fn irreducible_moment_is_exact_two_h() {
        for (k, n) in [(RootKind::A, 7), (RootKind::D, 9), (RootKind::E, 6), (RootKind::E, 7)] {
            let rs = make_irreducible(k, n).unwrap();
            assert!(rs.is_exact_two_design());
            let m = direct_sum(vec![rs.clone()]).second_moment();
            let h = rs.coxeter() as f64;
            assert!(m.sub(&SymMatrix::identity(n).scaled(2.0 * h)).max_abs() < 1e-11);
        }
    }

    #[test]
    fn frames_are_orthonormal() {
        for (k, n) in [(RootKind::A, 4), (RootKind::E, 6), (RootKind::E, 7)] {
            let rs = make_irreducible(k, n).unwrap();
            let f = rs.frame();
            for i in 0..n {
                for j in 0..n {
                    let d = crate::linalg::dot(&f[i], &f[j]);
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((d - e).abs() < 1e-13);
                }
            }
            for r in rs.frame_roots() {
                assert!((crate::linalg::dot(&r, &r) - 2.0).abs() < 1e-12);
            }
        }
    }
}
