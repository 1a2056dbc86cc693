//! Criticality, Hessian spectra with certified truncation error,
//! classification and sign certificates for Gaussian lattice energy.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::latcat::LatticeEntry;
use crate::linalg::{jacobi_eigen, SymMatrix};
use crate::modforms::{
    eisenstein_coeff_bound, eisenstein_q1, exp_neg_fixed, jenkins_rouse_constant, normalized_cusp_bound,
    round_up_2sig, tail_bound, theta_coeff_bound, CoeffBound, QSeries,
};
use crate::symspace::{q_spectrum_closed, q_spectrum_numeric, QSpectrum};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const INITIAL_TERMS: usize = 16;
pub const MAX_TERMS: usize = 1024;
/// Number of exactly summed shells in [`noncritical_certificate`].
pub const DEFAULT_HEAD_TERMS: usize = 16;

const PI: f64 = std::f64::consts::PI;

/// Formats `x` with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if !(-5..12).contains(&e) {
        format!("{x:.11e}")
    } else {
        format!("{:.*}", (11 - e).max(0) as usize, x)
    }
}

fn check_dim(entry: &LatticeEntry) -> Result<usize> {
    match entry.dim() {
        n @ (8 | 16 | 24 | 32) => Ok(n),
        n => Err(Error::UnsupportedDimension(n)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Criticality {
    CriticalAllAlpha,
    /// Root-shell second moment `S` and its traceless part.
    MomentDefect { second_moment: SymMatrix, witness: SymMatrix },
}

impl Criticality {
    pub fn is_critical(&self) -> bool {
        matches!(self, Criticality::CriticalAllAlpha)
    }
}

/// Exact test `sum_{x in L(2)} x x^T = (2 a_1 / n) I`.
///
/// For `n <= 24` there is no cusp form of weight `n/2 + 2`, so every shell is
/// a 2-design once the root shell is; for `n = 32` that space is spanned by one
/// form and the root shell alone decides.
pub fn criticality(entry: &LatticeEntry) -> Result<Criticality> {
    let n = check_dim(entry)?;
    let rs = entry.root_system();
    if rs.is_empty() {
        return Ok(Criticality::CriticalAllAlpha);
    }
    let target = Ratio::new(2 * entry.root_count() as i64, n as i64);
    let proportional = rs.total_rank() == n && rs.second_moment_blocks().iter().all(|(_, c)| *c == target);
    if proportional {
        return Ok(Criticality::CriticalAllAlpha);
    }
    let s = rs.second_moment_in(n);
    let witness = s.traceless_part();
    Ok(Criticality::MomentDefect { second_moment: s, witness })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    LocalMin,
    Saddle,
    LocalMax,
    Indeterminate,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub multiplicity: usize,
    pub mu: f64,
    pub error_radius: f64,
}

impl SpectrumEntry {
    pub fn certified_positive(&self) -> bool {
        self.mu - self.error_radius > 0.0
    }

    pub fn certified_negative(&self) -> bool {
        self.mu + self.error_radius < 0.0
    }
}

impl Serialize for SpectrumEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpectrumEntry", 4)?;
        st.serialize_field("lambda", &sig12(self.lambda))?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.serialize_field("mu", &sig12(self.mu))?;
        st.serialize_field("error_radius", &sig12(self.error_radius))?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub lattice: String,
    pub dim: usize,
    pub alpha: f64,
    pub entries: Vec<SpectrumEntry>,
    pub truncation_order: usize,
    pub classification: Classification,
}

impl SpectrumReport {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// `min |mu| - error_radius` over the entries.
    pub fn margin(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.mu.abs() - e.error_radius)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn mu_of(&self, lambda: f64) -> Option<&SpectrumEntry> {
        self.entries.iter().find(|e| (e.lambda - lambda).abs() < 1e-6)
    }
}

impl Serialize for SpectrumReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpectrumReport", 7)?;
        st.serialize_field("lattice", &self.lattice)?;
        st.serialize_field("dimension", &self.dim)?;
        st.serialize_field("alpha", &sig12(self.alpha))?;
        st.serialize_field("truncation_order", &self.truncation_order)?;
        st.serialize_field("classification", &self.classification)?;
        st.serialize_field("margin", &sig12(self.margin()))?;
        st.serialize_field("entries", &self.entries)?;
        st.end()
    }
}

fn classify_entries(entries: &[SpectrumEntry]) -> Classification {
    let pos = entries.iter().filter(|e| e.certified_positive()).count();
    let neg = entries.iter().filter(|e| e.certified_negative()).count();
    if pos == entries.len() {
        Classification::LocalMin
    } else if neg == entries.len() {
        Classification::LocalMax
    } else if pos > 0 && neg > 0 {
        Classification::Saddle
    } else {
        Classification::Indeterminate
    }
}

/// Traceless Q-spectrum of a critical entry and an error bound on its eigenvalues.
fn q_eigen(entry: &LatticeEntry) -> Result<(QSpectrum, f64)> {
    let n = entry.dim();
    let rs = entry.root_system();
    if rs.is_empty() {
        let dim_t0 = n * (n + 1) / 2 - 1;
        return Ok((QSpectrum { n, entries: vec![(0.0, dim_t0)] }, 0.0));
    }
    match q_spectrum_closed(rs) {
        Ok(s) => Ok((s, 0.0)),
        Err(Error::UnequalCoxeter(_)) => {
            let s = q_spectrum_numeric(rs);
            let top = s.entries.last().map(|e| e.0).unwrap_or(0.0);
            Ok((s, 1e-8 * top.max(1.0)))
        }
        Err(e) => Err(e),
    }
}

/// The Q-spectrum used for the Hessian: root system spectrum, or the 4-design scalar.
pub fn entry_q_spectrum(entry: &LatticeEntry) -> Result<QSpectrum> {
    q_eigen(entry).map(|(s, _)| s)
}

/// Neumaier-compensated sum, also returning `sum |x|`.
fn compensated_sum(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut s, mut c, mut abs) = (0.0f64, 0.0f64, 0.0f64);
    for x in xs {
        abs += x.abs();
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    (s + c, abs)
}

struct SeriesData {
    a: Vec<f64>,
    b: Vec<f64>,
}

/// `mu` for one eigenvalue with `m_cut` terms, the truncation part of its
/// error radius and the floating-point part.
#[allow(clippy::too_many_arguments)]
fn mu_one(
    n: usize,
    a1: f64,
    lambda: f64,
    lambda_err: f64,
    alpha: f64,
    m_cut: usize,
    data: &SeriesData,
    abound: &CoeffBound,
    bbound: Option<&CoeffBound>,
) -> Result<(f64, f64, f64)> {
    let nf = n as f64;
    let nn2 = nf * (nf + 2.0);
    let c = nf / 2.0 + 1.0;
    let mut bfactor = lambda * nn2 - 8.0 * a1;
    if n == 8 {
        if bfactor.abs() > 1e-6 * nn2 {
            return Err(Error::Inapplicable(format!(
                "dimension 8 requires lambda n(n+2) = 8 a_1 (got lambda = {lambda})"
            )));
        }
        bfactor = 0.0;
    }
    let bcoef = 0.5 * alpha * alpha * bfactor;
    let terms = (1..=m_cut).map(|m| {
        let mf = m as f64;
        let b = if bcoef != 0.0 { data.b[m] * bcoef } else { 0.0 };
        let am = data.a[m] * 2.0 * alpha * mf * (2.0 * alpha * mf - c);
        (b + am) * (-2.0 * alpha * mf).exp()
    });
    let (sum, abs) = compensated_sum(terms);
    let j = m_cut as u64 + 1;
    let mut tail = 4.0 * alpha * alpha * abound.shifted(2).tail(j, alpha)?
        + 2.0 * alpha * c * abound.shifted(1).tail(j, alpha)?;
    if let Some(bb) = bbound {
        if bcoef != 0.0 {
            tail += bcoef.abs() * bb.tail(j, alpha)?;
        }
    }
    let rounding = 16.0 * f64::EPSILON * abs;
    let perturb = if lambda_err > 0.0 {
        let bsum: f64 = (1..=m_cut).map(|m| data.b[m].abs() * (-2.0 * alpha * m as f64).exp()).sum();
        0.5 * alpha * alpha * nn2 * lambda_err * bsum
    } else {
        0.0
    };
    Ok((sum / nn2, (tail + perturb) / nn2, rounding / nn2))
}

/// `mu` with `m_cut` terms using exact coefficients and a fixed-point `q^m`,
/// with the bound on its evaluation error.
fn mu_exact(
    n: usize,
    a1: u64,
    lambda: f64,
    alpha: f64,
    m_cut: usize,
    theta: &QSeries,
    cusp: Option<&QSeries>,
) -> Result<(f64, f64)> {
    let exact = |x: f64| {
        BigRational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("{x} is not finite")))
    };
    let alpha_q = exact(alpha)?;
    let int = |k: i64| BigRational::from(BigInt::from(k));
    let nn2 = (n * (n + 2)) as i64;
    let c = BigRational::new(BigInt::from(n as i64 + 2), BigInt::from(2));
    let bcoef = match cusp {
        Some(_) if n != 8 => {
            &alpha_q * &alpha_q / int(2) * (exact(lambda)? * int(nn2) - int(8 * a1 as i64))
        }
        _ => BigRational::zero(),
    };
    let coefs: Vec<BigRational> = (1..=m_cut)
        .map(|m| {
            let two_am = int(2 * m as i64) * &alpha_q;
            let mut v = theta.coeff(m) * &two_am * (&two_am - &c);
            if let Some(b) = cusp {
                if !bcoef.is_zero() {
                    v += b.coeff(m) * &bcoef;
                }
            }
            v
        })
        .collect();
    let abs_sum: f64 = coefs
        .iter()
        .enumerate()
        .map(|(i, c)| c.abs().to_f64().unwrap_or(f64::INFINITY) * 3.0 * (i + 1) as f64)
        .sum();
    if !abs_sum.is_finite() {
        return Err(Error::InvalidArgument("series coefficients overflow".into()));
    }
    // every q^m carries at most 3m units of 2^-w
    let w = 120 + abs_sum.max(1.0).log2().ceil() as u64;
    let q = exp_neg_fixed(&(int(2) * &alpha_q), w)?;
    let unit = BigInt::one() << w as usize;
    let mut p = unit.clone();
    let mut acc = BigRational::zero();
    for coef in &coefs {
        p = (&p * &q) >> w as usize;
        acc += coef * BigRational::new(p.clone(), unit.clone());
    }
    let sum = acc.to_f64().unwrap_or(f64::NAN);
    let nf = nn2 as f64;
    let err = (abs_sum * 2f64.powi(-(w as i32)) + 4.0 * f64::EPSILON * sum.abs()) * (1.0 + 1e-9);
    Ok((sum / nf, (err + f64::EPSILON * sum.abs()) / nf))
}

/// Hessian eigenvalues `mu(lambda)` at `alpha`, each with a certified error radius `<= tol`.
pub fn hessian_spectrum(entry: &LatticeEntry, alpha: f64, tol: f64) -> Result<SpectrumReport> {
    let n = check_dim(entry)?;
    if !(alpha >= PI / 4.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must be at least pi/4")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    if !criticality(entry)?.is_critical() {
        return Err(Error::NotCritical);
    }
    let (spectrum, lambda_err) = q_eigen(entry)?;
    let a1 = entry.root_count() as f64;
    let abound = theta_coeff_bound(n, entry.root_count())?;
    let bbound = if n >= 16 { Some(normalized_cusp_bound(n)?) } else { None };
    let start = abound
        .shifted(2)
        .min_tail_start(alpha)
        .max(bbound.as_ref().map_or(1, |b| b.min_tail_start(alpha)));
    let mut m_cut = INITIAL_TERMS.max(start as usize);
    loop {
        if m_cut > MAX_TERMS {
            return Err(Error::ToleranceUnreachable { tol, max_terms: MAX_TERMS });
        }
        let data = SeriesData {
            a: entry.theta_to(m_cut + 1).to_f64_vec(),
            b: if n >= 16 { entry.cusp_to(m_cut + 1)?.to_f64_vec() } else { vec![0.0; m_cut + 1] },
        };
        let mut entries = Vec::with_capacity(spectrum.entries.len());
        for &(lambda, multiplicity) in &spectrum.entries {
            let (mut mu, trunc, mut rounding) =
                mu_one(n, a1, lambda, lambda_err, alpha, m_cut, &data, &abound, bbound.as_ref())?;
            if trunc <= tol && trunc + rounding > tol {
                let theta = entry.theta_to(m_cut + 1);
                let cusp = if n >= 16 { Some(entry.cusp_to(m_cut + 1)?) } else { None };
                (mu, rounding) = mu_exact(n, entry.root_count(), lambda, alpha, m_cut, &theta, cusp.as_ref())?;
            }
            entries.push(SpectrumEntry { lambda, multiplicity, mu, error_radius: trunc + rounding });
        }
        if entries.iter().all(|e| e.error_radius <= tol) {
            let classification = classify_entries(&entries);
            return Ok(SpectrumReport {
                lattice: entry.name().to_string(),
                dim: n,
                alpha,
                entries,
                truncation_order: m_cut,
                classification,
            });
        }
        m_cut *= 2;
    }
}

/// The series for `mu(lambda)` summed over `1 <= m <= m_cut` only, without tail control.
pub fn mu_partial_sum(entry: &LatticeEntry, lambda: f64, alpha: f64, m_cut: usize) -> Result<f64> {
    let n = check_dim(entry)?;
    let nf = n as f64;
    let nn2 = nf * (nf + 2.0);
    let c = nf / 2.0 + 1.0;
    let a = entry.theta_to(m_cut + 1).to_f64_vec();
    let b = if n >= 16 { entry.cusp_to(m_cut + 1)?.to_f64_vec() } else { vec![0.0; m_cut + 1] };
    let bcoef = 0.5 * alpha * alpha * (lambda * nn2 - 8.0 * entry.root_count() as f64);
    let (sum, _) = compensated_sum((1..=m_cut).map(|m| {
        let mf = m as f64;
        (b[m] * bcoef + a[m] * 2.0 * alpha * mf * (2.0 * alpha * mf - c)) * (-2.0 * alpha * mf).exp()
    }));
    Ok(sum / nn2)
}

/// Classification at `alpha` with the default tolerance, and its margin.
pub fn classify(entry: &LatticeEntry, alpha: f64) -> Result<(Classification, f64)> {
    let r = hessian_spectrum(entry, alpha, DEFAULT_TOL)?;
    Ok((r.classification, r.margin()))
}

/// Morse type for large `alpha`: local minimum iff `Q` is positive definite on `T_0^n`.
pub fn large_alpha_class(entry: &LatticeEntry) -> Result<Classification> {
    if !criticality(entry)?.is_critical() {
        return Err(Error::NotCritical);
    }
    if entry.root_count() == 0 {
        return Err(Error::Inapplicable(format!("{} has no roots", entry.name())));
    }
    let (s, err) = q_eigen(entry)?;
    let zero_tol = err.max(1e-8);
    if s.entries.iter().all(|e| e.0 > zero_tol) {
        Ok(Classification::LocalMin)
    } else {
        Ok(Classification::Saddle)
    }
}

/// Spectrum reports on a uniform `alpha` grid with both endpoints.
pub fn alpha_sweep(
    entry: &LatticeEntry,
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
    tol: f64,
) -> Result<Vec<SpectrumReport>> {
    if !(alpha_min >= PI / 4.0 && alpha_min < alpha_max) || steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "sweep needs pi/4 <= alpha_min < alpha_max and steps >= 2 (got {alpha_min}, {alpha_max}, {steps})"
        )));
    }
    (0..steps)
        .map(|i| {
            let alpha = if i + 1 == steps {
                alpha_max
            } else {
                alpha_min + (alpha_max - alpha_min) * i as f64 / (steps - 1) as f64
            };
            hessian_spectrum(entry, alpha, tol)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum CertificateKind {
    CriticalAllAlpha,
    NotCriticalAt(f64),
    NegativeEigenvalueAt(f64),
}

#[derive(Clone, Debug, PartialEq)]
enum Recipe {
    Critical,
    NonCritical { alpha: f64, head_terms: usize },
    RootlessMax { alpha: f64, partial_terms: usize },
}

/// A sign-certified statement `lhs > rhs` with every constant used to establish it.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub lattice: String,
    pub kind: CertificateKind,
    pub witness: Option<SymMatrix>,
    pub constants: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    recipe: Recipe,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.lhs > self.rhs
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.iter().find(|c| c.0 == name).map(|c| c.1)
    }

    /// Recomputes the certificate from its inputs and checks that every
    /// recorded constant and the inequality are reproduced.
    pub fn replay(&self, entry: &LatticeEntry) -> Result<bool> {
        let again = match &self.recipe {
            Recipe::Critical => critical_certificate(entry)?,
            Recipe::NonCritical { alpha, head_terms } => {
                let w = self.witness.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("non-criticality certificate without witness".into())
                })?;
                noncritical_bound(entry, *alpha, w, *head_terms)?
            }
            Recipe::RootlessMax { alpha, partial_terms } => {
                rootless_bound(entry, *alpha, *partial_terms)?
            }
        };
        let same = again.constants.len() == self.constants.len()
            && again
                .constants
                .iter()
                .zip(&self.constants)
                .all(|(a, b)| a.0 == b.0 && (a.1 == b.1 || (a.1 - b.1).abs() <= 1e-12 * b.1.abs()));
        Ok(same && again.holds() == self.holds() && self.holds())
    }

    pub fn kind_label(&self) -> String {
        match self.kind {
            CertificateKind::CriticalAllAlpha => "CriticalAllAlpha".into(),
            CertificateKind::NotCriticalAt(a) => format!("NotCriticalAt({})", sig12(a)),
            CertificateKind::NegativeEigenvalueAt(a) => format!("NegativeEigenvalueAt({})", sig12(a)),
        }
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Certificate", 7)?;
        st.serialize_field("lattice", &self.lattice)?;
        st.serialize_field("kind", &self.kind_label())?;
        st.serialize_field("holds", &self.holds())?;
        st.serialize_field("lhs", &sig12(self.lhs))?;
        st.serialize_field("rhs", &sig12(self.rhs))?;
        let constants: serde_json::Map<String, serde_json::Value> = self
            .constants
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(sig12(*v))))
            .collect();
        st.serialize_field("constants", &constants)?;
        let witness = self
            .witness
            .as_ref()
            .map(|w| w.to_rows().into_iter().map(|r| r.into_iter().map(sig12).collect::<Vec<_>>()).collect::<Vec<_>>());
        st.serialize_field("witness", &witness)?;
        st.end()
    }
}

/// Certificate that the root shell, hence every shell, is a 2-design.
pub fn critical_certificate(entry: &LatticeEntry) -> Result<Certificate> {
    match criticality(entry)? {
        Criticality::CriticalAllAlpha => {
            let n = entry.dim() as f64;
            let scalar = 2.0 * entry.root_count() as f64 / n;
            Ok(Certificate {
                lattice: entry.name().to_string(),
                kind: CertificateKind::CriticalAllAlpha,
                witness: None,
                constants: vec![
                    ("root_count".into(), entry.root_count() as f64),
                    ("moment_scalar".into(), scalar),
                ],
                lhs: 1.0,
                rhs: 0.0,
                recipe: Recipe::Critical,
            })
        }
        Criticality::MomentDefect { .. } => Err(Error::NotCritical),
    }
}

fn noncritical_bound(entry: &LatticeEntry, alpha: f64, h: &SymMatrix, head_terms: usize) -> Result<Certificate> {
    let n = check_dim(entry)?;
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must be at least 1")));
    }
    if h.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: h.dim() });
    }
    let tr = h.trace();
    if tr.abs() > 1e-12 * h.max_abs().max(1.0) {
        return Err(Error::NonTraceless(tr));
    }
    if head_terms == 0 {
        return Err(Error::InvalidArgument("head_terms must be at least 1".into()));
    }
    let s = entry.root_system().second_moment_in(n);
    let inner = h.inner(&s);
    let vals = jacobi_eigen(h, false).0;
    let slack = 1e-12 * h.max_abs();
    let lambda_min = vals.first().copied().unwrap_or(0.0) - slack;
    let lambda_max = vals.last().copied().unwrap_or(0.0) + slack;
    // sum_{x in L(2m)} H[x] lies in [2m a_m lambda_min, 2m a_m lambda_max]
    let lambda_used = if inner < 0.0 { lambda_max.max(0.0) } else { (-lambda_min).max(0.0) };
    let root_term = alpha * inner.abs() * (-2.0 * alpha).exp();

    let theta = entry.theta_to(head_terms + 2);
    let a = theta.to_f64_vec();
    let head: f64 = (2..=head_terms)
        .map(|m| 2.0 * m as f64 * a[m] * (-2.0 * alpha * m as f64).exp())
        .sum::<f64>()
        * (1.0 + 1e-12);
    let bound = theta_coeff_bound(n, entry.root_count())?;
    let first = (head_terms as u64 + 1).max(2);
    let shifted = bound.shifted(1);
    if first < shifted.min_tail_start(alpha) {
        return Err(Error::MonotonicityViolated {
            j: first,
            threshold: shifted.terms.iter().map(|t| t.1).max().unwrap_or(0) as f64 / (2.0 * alpha),
        });
    }
    let tail = 2.0 * shifted.tail(first, alpha)?;
    let remainder = alpha * lambda_used * (head + tail);
    let pure = alpha * lambda_used * 2.0 * shifted.tail(2.max(shifted.min_tail_start(alpha)), alpha)?;

    let k = n as i64 / 2;
    let c1 = BigRational::from(BigInt::from(entry.root_count())) - eisenstein_q1(k)?;
    let mut constants = vec![
        ("alpha".to_string(), alpha),
        ("inner_H_S".to_string(), inner),
        ("lambda_min".to_string(), lambda_min),
        ("lambda_max".to_string(), lambda_max),
        ("lambda_used".to_string(), lambda_used),
        ("root_term".to_string(), root_term),
        ("c1".to_string(), c1.to_f64().unwrap_or(f64::NAN)),
    ];
    for (i, (c, e)) in bound.terms.iter().enumerate() {
        constants.push((format!("coeff_bound_{i}_constant"), *c));
        constants.push((format!("coeff_bound_{i}_exponent"), *e as f64));
    }
    constants.extend([
        ("head_terms".to_string(), head_terms as f64),
        ("head_sum".to_string(), head),
        ("tail_sum".to_string(), tail),
        ("remainder_bound".to_string(), remainder),
        ("pure_tail_remainder_bound".to_string(), pure),
    ]);
    Ok(Certificate {
        lattice: entry.name().to_string(),
        kind: CertificateKind::NotCriticalAt(alpha),
        witness: Some(h.clone()),
        constants,
        lhs: root_term,
        rhs: remainder,
        recipe: Recipe::NonCritical { alpha, head_terms },
    })
}

/// Certifies that the gradient of the energy at `alpha` does not vanish in direction `h`.
///
/// The root term `alpha <H, S> e^{-2 alpha}` is compared with a bound on the
/// shells `m >= 2`: shells `2..=head_terms` use the exact theta coefficients,
/// the rest the coefficient bound and the integral tail estimate.
pub fn noncritical_certificate(
    entry: &LatticeEntry,
    alpha: f64,
    h: &SymMatrix,
    head_terms: usize,
) -> Result<Certificate> {
    if criticality(entry)?.is_critical() {
        return Err(Error::InvalidArgument(format!("{} is critical", entry.name())));
    }
    let c = noncritical_bound(entry, alpha, h, head_terms)?;
    if c.holds() {
        Ok(c)
    } else {
        Err(Error::CertificateFails(format!(
            "root term {} does not exceed remainder bound {}",
            sig12(c.lhs),
            sig12(c.rhs)
        )))
    }
}

/// The same computation as [`noncritical_certificate`] without failing on a
/// violated inequality.
pub fn noncritical_bound_report(
    entry: &LatticeEntry,
    alpha: f64,
    h: &SymMatrix,
    head_terms: usize,
) -> Result<Certificate> {
    noncritical_bound(entry, alpha, h, head_terms)
}

fn rootless_bound(entry: &LatticeEntry, alpha: f64, partial_terms: usize) -> Result<Certificate> {
    if entry.dim() != 32 || entry.root_count() != 0 {
        return Err(Error::Inapplicable(format!("{} is not a rootless 32-dimensional lattice", entry.name())));
    }
    if !(alpha >= PI / 4.0) || partial_terms == 0 {
        return Err(Error::InvalidArgument("need alpha >= pi/4 and partial_terms >= 1".into()));
    }
    let nf = 32.0;
    let nn2 = nf * (nf + 2.0);
    let c = nf / 2.0 + 1.0;
    let a = entry.theta_to(partial_terms + 1).to_f64_vec();
    let partial = (1..=partial_terms)
        .map(|m| {
            let mf = m as f64;
            a[m] * 2.0 * alpha * mf * (2.0 * alpha * mf - c) * (-2.0 * alpha * mf).exp()
        })
        .sum::<f64>()
        / nn2;
    let eis = eisenstein_coeff_bound(32)?.terms[0];
    let c1 = -eisenstein_q1(16)?;
    let cusp_raw = 2.0 * jenkins_rouse_constant(16, std::slice::from_ref(&c1));
    let cusp = round_up_2sig(cusp_raw);
    let j = partial_terms as u64 + 1;
    let t_eis = tail_bound(j, eis.1 + 2, alpha)?;
    let t_cusp = tail_bound(j, 8 + 2, alpha)?;
    let t_eis1 = tail_bound(j, eis.1 + 1, alpha)?;
    let t_cusp1 = tail_bound(j, 8 + 1, alpha)?;
    let alpha2 = 4.0 * alpha * alpha;
    // |2 alpha m (2 alpha m - c)| <= 4 alpha^2 m^2 once 2 alpha m >= c
    let linear = if 2.0 * alpha * j as f64 >= c { 0.0 } else { 2.0 * alpha * c * (eis.0 * t_eis1 + cusp * t_cusp1) };
    let tail = (alpha2 * (eis.0 * t_eis + cusp * t_cusp) + linear) / nn2 * (1.0 + 1e-9);
    let rounding = 16.0 * f64::EPSILON * partial.abs() * partial_terms as f64;
    let constants = vec![
        ("alpha".to_string(), alpha),
        ("partial_terms".to_string(), partial_terms as f64),
        ("partial_sum".to_string(), partial),
        ("eisenstein_constant".to_string(), eis.0),
        ("eisenstein_exponent".to_string(), eis.1 as f64),
        ("cusp_c1".to_string(), c1.to_f64().unwrap_or(f64::NAN)),
        ("cusp_constant_unrounded".to_string(), cusp_raw),
        ("cusp_constant".to_string(), cusp),
        ("cusp_exponent".to_string(), 8.0),
        ("tail_bound_eisenstein".to_string(), t_eis),
        ("tail_bound_cusp".to_string(), t_cusp),
        ("tail_total".to_string(), tail),
        ("rounding".to_string(), rounding),
    ];
    Ok(Certificate {
        lattice: entry.name().to_string(),
        kind: CertificateKind::NegativeEigenvalueAt(alpha),
        witness: None,
        constants,
        lhs: -partial,
        rhs: tail + rounding,
        recipe: Recipe::RootlessMax { alpha, partial_terms },
    })
}

/// Certificate that the single Hessian eigenvalue of a rootless 32-dimensional
/// lattice is negative at `alpha`, from a partial sum over `m <= partial_terms`
/// and the polynomial coefficient bound for the remaining shells.
pub fn rootless_local_max_certificate(entry: &LatticeEntry, alpha: f64, partial_terms: usize) -> Result<Certificate> {
    let c = rootless_bound(entry, alpha, partial_terms)?;
    if c.holds() {
        Ok(c)
    } else {
        Err(Error::CertificateFails(format!(
            "partial sum {} is not below minus the tail {}",
            sig12(-c.lhs),
            sig12(c.rhs)
        )))
    }
}

/// Finite-difference check of the Hessian normalization on a two-dimensional lattice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeformationDiagnostic {
    pub alpha: f64,
    pub step: f64,
    pub second_derivative: f64,
    pub hessian_formula: f64,
    pub factor: f64,
}

/// `exp(tH)` for symmetric `H`.
pub fn sym_expm(h: &SymMatrix, t: f64) -> SymMatrix {
    let (vals, vecs) = jacobi_eigen(h, true);
    let n = h.dim();
    SymMatrix::from_fn(n, |i, j| {
        vals.iter().zip(&vecs).map(|(l, v)| (t * l).exp() * v[i] * v[j]).sum()
    })
}

/// Compares `d^2/dt^2 E(f_alpha, L_t)` for the quadratic-form path
/// `x -> x^T exp(tH) x` on the unit-covolume hexagonal lattice against
/// `alpha sum e^{-alpha|x|^2}((alpha/2) H[x]^2 - H^2[x]/2)` and reports the ratio.
pub fn deformation_diagnostic(alpha: f64, h: &SymMatrix) -> Result<DeformationDiagnostic> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, actual: h.dim() });
    }
    if !(alpha >= 0.5) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must be at least 0.5")));
    }
    let s = (2.0 / 3f64.sqrt()).sqrt();
    let b1 = [s, 0.0];
    let b2 = [0.5 * s, 0.5 * 3f64.sqrt() * s];
    let k = 40i64;
    let points: Vec<[f64; 2]> = (-k..=k)
        .flat_map(|i| (-k..=k).map(move |j| (i, j)))
        .filter(|&(i, j)| (i, j) != (0, 0))
        .map(|(i, j)| [i as f64 * b1[0] + j as f64 * b2[0], i as f64 * b1[1] + j as f64 * b2[1]])
        .collect();
    let energy = |t: f64| -> f64 {
        let g = sym_expm(h, t);
        compensated_sum(points.iter().map(|x| (-alpha * g.quad(x)).exp())).0
    };
    let h2 = h.square();
    let formula = alpha
        * points
            .iter()
            .map(|x| {
                let hx = h.quad(x);
                (-alpha * (x[0] * x[0] + x[1] * x[1])).exp() * (0.5 * alpha * hx * hx - 0.5 * h2.quad(x))
            })
            .sum::<f64>();
    let step = 1e-3;
    let e0 = energy(0.0);
    let d = |t: f64| (energy(t) - 2.0 * e0 + energy(-t)) / (t * t);
    let second = (4.0 * d(step / 2.0) - d(step)) / 3.0;
    Ok(DeformationDiagnostic {
        alpha,
        step,
        second_derivative: second,
        hessian_formula: formula,
        factor: second / formula,
    })
}
