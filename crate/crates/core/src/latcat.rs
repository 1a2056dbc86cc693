//! Catalog of even unimodular lattices in dimensions 8, 16, 24 and 32,
//! described by root system and theta series.

use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modforms::{cusp_normalized, theta_even_unimodular, QSeries, DEFAULT_LENGTH};
use crate::rootsys::RootSystem;

/// A lattice basis with coordinates stored doubled, so half-integral
/// vectors are exact. Row `i` is `2 b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    rows2: Vec<Vec<i64>>,
}

impl LatticeBasis {
    pub fn from_doubled(rows2: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows2.len();
        if let Some(r) = rows2.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, actual: r.len() });
        }
        let b = Self { rows2 };
        for i in 0..n {
            for j in 0..n {
                if b.dot4(i, j) % 4 != 0 {
                    return Err(Error::InvalidArgument("basis Gram matrix is not integral".into()));
                }
            }
        }
        Ok(b)
    }

    fn dot4(&self, i: usize, j: usize) -> i64 {
        self.rows2[i].iter().zip(&self.rows2[j]).map(|(a, b)| a * b).sum()
    }

    pub fn dim(&self) -> usize {
        self.rows2.len()
    }

    pub fn gram(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.dot4(i, j) / 4).collect()).collect()
    }

    /// Rows `b_i` in floating point.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.rows2.iter().map(|r| r.iter().map(|&x| x as f64 / 2.0).collect()).collect()
    }

    /// Ambient coordinates `sum_i v_i b_i` of an integer coefficient vector.
    pub fn embed(&self, v: &[i64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|k| v.iter().zip(&self.rows2).map(|(c, r)| (c * r[k]) as f64).sum::<f64>() / 2.0)
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct LatticeEntry {
    name: String,
    aliases: Vec<String>,
    dim: usize,
    root_system: RootSystem,
    theta: QSeries,
    basis: Option<LatticeBasis>,
}

impl LatticeEntry {
    /// Entry determined by dimension and root system; the theta series follows.
    pub fn new(name: &str, dim: usize, root_system: RootSystem) -> Result<Self> {
        if root_system.total_rank() > dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: root_system.total_rank() });
        }
        let theta = theta_even_unimodular(dim, root_system.root_count() as u64, DEFAULT_LENGTH)?;
        Ok(Self {
            name: name.to_string(),
            aliases: Vec::new(),
            dim,
            root_system,
            theta,
            basis: None,
        })
    }

    fn with_aliases(mut self, aliases: &[&str]) -> Self {
        self.aliases = aliases.iter().map(|s| s.to_string()).collect();
        self
    }

    fn with_basis(mut self, rows2: Vec<Vec<i64>>) -> Self {
        self.basis = Some(LatticeBasis::from_doubled(rows2).expect("catalog basis"));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn aliases(&self) -> &[String] {
        &self.aliases
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn root_count(&self) -> u64 {
        self.root_system.root_count() as u64
    }

    /// Common Coxeter number of the root system, if it has one.
    pub fn coxeter(&self) -> Option<usize> {
        self.root_system.coxeter()
    }

    pub fn theta(&self) -> &QSeries {
        &self.theta
    }

    /// Theta series with at least `len` coefficients.
    pub fn theta_to(&self, len: usize) -> QSeries {
        if len <= self.theta.len() {
            self.theta.clone()
        } else {
            theta_even_unimodular(self.dim, self.root_count(), len).expect("validated at construction")
        }
    }

    /// Normalized cusp form of weight `n/2 + 4` with at least `len` coefficients.
    pub fn cusp_to(&self, len: usize) -> Result<QSeries> {
        static CACHE: OnceLock<[QSeries; 3]> = OnceLock::new();
        let slot = match self.dim {
            16 => 0,
            24 => 1,
            32 => 2,
            n => return Err(Error::UnsupportedDimension(n)),
        };
        if len > DEFAULT_LENGTH {
            return cusp_normalized(self.dim, len);
        }
        let cache = CACHE.get_or_init(|| {
            [16, 24, 32].map(|n| cusp_normalized(n, DEFAULT_LENGTH).expect("supported dimension"))
        });
        Ok(cache[slot].clone())
    }

    pub fn basis(&self) -> Option<&LatticeBasis> {
        self.basis.as_ref()
    }

    pub fn gram(&self) -> Option<Vec<Vec<i64>>> {
        self.basis.as_ref().map(|b| b.gram())
    }

    pub fn summary(&self) -> CatalogRow {
        CatalogRow {
            name: self.name.clone(),
            dimension: self.dim,
            root_system: self.root_system.to_string(),
            root_count: self.root_count(),
            coxeter: self.coxeter(),
            theta: self.theta.truncate(16).to_strings(),
        }
    }
}

/// JSON-facing catalog record.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CatalogRow {
    pub name: String,
    pub dimension: usize,
    pub root_system: String,
    pub root_count: u64,
    pub coxeter: Option<usize>,
    pub theta: Vec<String>,
}

pub const NIEMEIER: [&str; 23] = [
    "A1^24", "A2^12", "A3^8", "A4^6", "A5^4+D4", "D4^6", "A6^4", "A7^2+D5^2", "A8^3",
    "A9^2+D6", "D6^4", "E6^4", "A11+D7+E6", "A12^2", "D8^3", "A15+D9", "A17+E7", "D10+E7^2",
    "D12^2", "A24", "D16+E8", "E8^3", "D24",
];

fn e8_basis() -> Vec<Vec<i64>> {
    let mut rows = vec![vec![1, -1, -1, -1, -1, -1, -1, 1]];
    let mut unit = |i: usize, si: i64, j: usize, sj: i64| {
        let mut r = vec![0; 8];
        r[i] = 2 * si;
        r[j] += 2 * sj;
        rows.push(r);
    };
    unit(0, 1, 1, 1);
    unit(1, 1, 0, -1);
    for i in 2..7 {
        unit(i, 1, i - 1, -1);
    }
    rows
}

fn d16_plus_basis() -> Vec<Vec<i64>> {
    let mut rows = vec![vec![1; 16]];
    for i in 1..15 {
        let mut r = vec![0; 16];
        r[i] = 2;
        r[i + 1] = -2;
        rows.push(r);
    }
    let mut r = vec![0; 16];
    r[14] = 2;
    r[15] = 2;
    rows.push(r);
    rows
}

fn rs(s: &str) -> RootSystem {
    RootSystem::from_str(s).expect("catalog root system")
}

fn build() -> Vec<LatticeEntry> {
    let mut v = vec![
        LatticeEntry::new("E8", 8, rs("E8")).unwrap().with_basis(e8_basis()),
        LatticeEntry::new("D16+", 16, rs("D16"))
            .unwrap()
            .with_aliases(&["D16plus"])
            .with_basis(d16_plus_basis()),
        LatticeEntry::new("E8^2", 16, rs("E8^2")).unwrap().with_aliases(&["E8+E8", "E8xE8"]),
        LatticeEntry::new("Leech", 24, RootSystem::empty()).unwrap().with_aliases(&["Lambda24"]),
        LatticeEntry::new("Rootless-32", 32, RootSystem::empty()).unwrap().with_aliases(&["rootless32"]),
        LatticeEntry::new("A1^8+A3^8", 32, rs("A1^8+A3^8")).unwrap().with_aliases(&["Kervaire"]),
    ];
    for name in NIEMEIER {
        v.push(LatticeEntry::new(name, 24, rs(name)).unwrap());
    }
    v.sort_by(|a, b| (a.dim, a.root_count(), &a.name).cmp(&(b.dim, b.root_count(), &b.name)));
    v
}

/// All catalog entries ordered by `(n, |L(2)|, name)`.
pub fn catalog() -> &'static [LatticeEntry] {
    static CATALOG: OnceLock<Vec<LatticeEntry>> = OnceLock::new();
    CATALOG.get_or_init(build)
}

pub fn list_catalog() -> Vec<CatalogRow> {
    catalog().iter().map(|e| e.summary()).collect()
}

/// Looks up by name or alias (case-insensitive), then by nonempty root system.
pub fn get(name: &str) -> Result<LatticeEntry> {
    let key = name.trim().to_ascii_lowercase();
    if let Some(e) = catalog().iter().find(|e| {
        e.name.to_ascii_lowercase() == key || e.aliases.iter().any(|a| a.to_ascii_lowercase() == key)
    }) {
        return Ok(e.clone());
    }
    if let Ok(r) = RootSystem::from_str(name) {
        if !r.is_empty() {
            if let Some(e) = catalog().iter().find(|e| e.root_system.same_as(&r)) {
                return Ok(e.clone());
            }
        }
    }
    Err(Error::UnknownLattice(name.to_string()))
}
