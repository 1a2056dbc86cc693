//! Exact q-expansions of level-one modular forms and theta series of even
//! unimodular lattices, with coefficient bounds for certified tails.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative slack applied to every floating-point bound constant.
pub const UPWARD_SLACK: f64 = 1e-9;

/// Default number of coefficients of computed series.
pub const DEFAULT_LENGTH: usize = 64;

fn inflate(x: f64) -> f64 {
    x * (1.0 + UPWARD_SLACK)
}

/// Truncated q-expansion `sum_{m < len} c_m q^m` with exact rational
/// coefficients `num[m] / den` and a modular weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    num: Vec<BigInt>,
    den: BigInt,
    weight: i64,
}

impl QSeries {
    pub fn from_integers(coeffs: Vec<BigInt>, weight: i64) -> Self {
        Self { num: coeffs, den: BigInt::one(), weight }
    }

    pub fn from_rationals(coeffs: &[BigRational], weight: i64) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self { num, den, weight }.normalized()
    }

    /// The constant series `1` of weight 0.
    pub fn one(len: usize) -> Self {
        let mut num = vec![BigInt::zero(); len];
        if len > 0 {
            num[0] = BigInt::one();
        }
        Self::from_integers(num, 0)
    }

    fn normalized(mut self) -> Self {
        if self.den.is_negative() {
            self.den = -self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let g = self.num.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_zero() && !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
        self
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn coeff(&self, m: usize) -> BigRational {
        BigRational::new(self.num[m].clone(), self.den.clone())
    }

    pub fn coeff_f64(&self, m: usize) -> f64 {
        self.coeff(m).to_f64().unwrap_or(f64::NAN)
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.len()).map(|m| self.coeff(m)).collect()
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.coeff_f64(m)).collect()
    }

    /// Integer coefficients, if all are integral.
    pub fn integer_coeffs(&self) -> Option<&[BigInt]> {
        self.den.is_one().then_some(&self.num[..])
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn truncate(&self, len: usize) -> Self {
        Self {
            num: self.num.iter().take(len).cloned().collect(),
            den: self.den.clone(),
            weight: self.weight,
        }
        .normalized()
    }

    /// Sum of two series of equal weight.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::InvalidArgument(format!(
                "cannot add series of weights {} and {}",
                self.weight, other.weight
            )));
        }
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &fa + b * &fb)
            .collect();
        Ok(Self { num, den, weight: self.weight }.normalized())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Cauchy product; the weight is the sum of weights.
    pub fn mul(&self, other: &Self) -> Self {
        let len = self.len().min(other.len());
        let mut num = vec![BigInt::zero(); len];
        for (i, a) in self.num.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate().take(len - i) {
                num[i + j] += a * b;
            }
        }
        Self { num, den: &self.den * &other.den, weight: self.weight + other.weight }.normalized()
    }

    pub fn pow(&self, e: u32) -> Self {
        (1..e).fold(self.clone(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            num: self.num.iter().map(|a| a * c.numer()).collect(),
            den: &self.den * c.denom(),
            weight: self.weight,
        }
        .normalized()
    }

    /// `sum_m c_m q^m` at a real `q`.
    pub fn eval(&self, q: f64) -> f64 {
        self.to_f64_vec().iter().rev().fold(0.0, |acc, c| acc * q + c)
    }

    /// Coefficients as decimal strings, `"p/q"` for non-integers.
    pub fn to_strings(&self) -> Vec<String> {
        (0..self.len()).map(|m| self.coeff(m).to_string()).collect()
    }
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QSeries", 2)?;
        st.serialize_field("weight", &self.weight)?;
        st.serialize_field("coefficients", &self.to_strings())?;
        st.end()
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Bernoulli number `B_k` with `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> BigRational {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=k {
        let s = (0..m).fold(BigRational::zero(), |acc, j| {
            acc + BigRational::from(binomial(m as u64 + 1, j as u64)) * &b[j]
        });
        b.push(-s / BigRational::from(BigInt::from(m + 1)));
    }
    b.swap_remove(k)
}

/// `sigma_k(m) = sum_{d | m} d^k`.
pub fn sigma(k: u32, m: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            s += BigInt::from(d).pow(k);
            let e = m / d;
            if e != d {
                s += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// Number of divisors `d(m)`.
pub fn divisor_count(m: u64) -> u64 {
    (1..=m).take_while(|d| d * d <= m).filter(|d| m.is_multiple_of(*d)).map(|d| if d * d == m { 1 } else { 2 }).sum()
}

/// Normalized Eisenstein series `E_k = 1 - (2k/B_k) sum sigma_{k-1}(m) q^m`.
pub fn eisenstein(k: i64, len: usize) -> Result<QSeries> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k));
    }
    let c = -BigRational::from(BigInt::from(2 * k)) / bernoulli(k as usize);
    let mut coeffs = Vec::with_capacity(len);
    for m in 0..len {
        coeffs.push(if m == 0 {
            c.denom().clone()
        } else {
            c.numer() * sigma(k as u32 - 1, m as u64)
        });
    }
    Ok(QSeries { num: coeffs, den: c.denom().clone(), weight: k }.normalized())
}

/// Coefficient of `q` in `E_k`, that is `-2k/B_k`.
pub fn eisenstein_q1(k: i64) -> Result<BigRational> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k));
    }
    Ok(-BigRational::from(BigInt::from(2 * k)) / bernoulli(k as usize))
}

/// `Delta = (E4^3 - E6^2) / 1728`.
pub fn discriminant(len: usize) -> QSeries {
    let e4 = eisenstein(4, len).expect("weight 4");
    let e6 = eisenstein(6, len).expect("weight 6");
    let d = e4.pow(3).sub(&e6.pow(2)).expect("equal weights");
    d.scale(&BigRational::new(BigInt::one(), BigInt::from(1728)))
}

/// Theta series of an even unimodular lattice of dimension `n` with `root_count` roots.
pub fn theta_even_unimodular(n: usize, root_count: u64, len: usize) -> Result<QSeries> {
    let bad = || Error::InconsistentRootCount { dim: n, root_count };
    let theta = match n {
        8 if root_count == 240 => eisenstein(4, len)?,
        16 if root_count == 480 => eisenstein(4, len)?.pow(2),
        8 | 16 => return Err(bad()),
        24 | 32 => {
            if !root_count.is_multiple_of(2) {
                return Err(bad());
            }
            let k = n as i64 / 2;
            let c1 = BigRational::from(BigInt::from(root_count)) - eisenstein_q1(k)?;
            let cusp = if n == 24 {
                discriminant(len)
            } else {
                eisenstein(4, len)?.mul(&discriminant(len))
            };
            eisenstein(k, len)?.add(&cusp.scale(&c1))?
        }
        _ => return Err(Error::UnsupportedDimension(n)),
    };
    if !theta.is_integral() || theta.num.iter().any(|c| c.is_negative()) {
        return Err(bad());
    }
    Ok(theta)
}

/// Normalized cusp form of weight `n/2 + 4`: `Delta`, `E4 Delta` or `E4^2 Delta`.
pub fn cusp_normalized(n: usize, len: usize) -> Result<QSeries> {
    let delta = discriminant(len);
    match n {
        16 => Ok(delta),
        24 => Ok(eisenstein(4, len)?.mul(&delta)),
        32 => Ok(eisenstein(4, len)?.pow(2).mul(&delta)),
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// Constant `C` with `|a_m| <= C d(m) m^{(k-1)/2}` for a weight-`k` cusp form
/// with leading coefficients `a_1..a_l` (slot 0 of `coeffs` is `a_1`).
pub fn jenkins_rouse_constant(k: u32, coeffs: &[BigRational]) -> f64 {
    let kf = k as f64;
    let mut sq = 0.0;
    let mut lin = 0.0;
    for (i, a) in coeffs.iter().enumerate() {
        let r = (i + 1) as f64;
        let a = a.to_f64().unwrap_or(f64::INFINITY);
        sq += a * a / r.powf(kf - 1.0);
        lin += a * (-7.288 * r).exp();
    }
    let big = 18.72f64.exp() * 41.41f64.powf(kf / 2.0) / kf.powf((kf - 1.0) / 2.0);
    inflate(kf.ln().sqrt() * (11.0 * sq.sqrt() + big * lin.abs()))
}

/// Polynomial coefficient bound `|a_m| <= sum_i c_i m^{e_i}` for `m >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoeffBound {
    pub terms: Vec<(f64, u32)>,
}

impl CoeffBound {
    pub fn new(terms: Vec<(f64, u32)>) -> Self {
        Self { terms: terms.into_iter().filter(|t| t.0 > 0.0).collect() }
    }

    pub fn eval(&self, m: u64) -> f64 {
        self.terms.iter().map(|&(c, e)| c * (m as f64).powi(e as i32)).sum()
    }

    /// Bound for `m^e |a_m|`.
    pub fn shifted(&self, e: u32) -> Self {
        Self { terms: self.terms.iter().map(|&(c, k)| (c, k + e)).collect() }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.terms.iter().map(|&(c, k)| (c * s.abs(), k)).collect())
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(&other.terms).copied().collect())
    }

    /// Upper bound of `sum_{m >= j} |a_m| e^{-2 alpha m}`.
    pub fn tail(&self, j: u64, alpha: f64) -> Result<f64> {
        self.terms
            .iter()
            .map(|&(c, e)| tail_bound(j, e, alpha).map(|t| c * t))
            .sum::<Result<f64>>()
            .map(inflate)
    }

    /// Smallest `j` that meets the tail precondition for every term.
    pub fn min_tail_start(&self, alpha: f64) -> u64 {
        self.terms
            .iter()
            .map(|&(_, e)| (e as f64 / (2.0 * alpha)).ceil() as u64)
            .max()
            .unwrap_or(1)
            .max(1)
    }
}

/// Rounds `x > 0` up at two significant digits.
pub fn round_up_2sig(x: f64) -> f64 {
    if !(x > 0.0) || !x.is_finite() {
        return x;
    }
    let e = x.log10().floor() as i32 - 1;
    let mut digits = (x / 10f64.powi(e)).ceil() as u64;
    loop {
        let r: f64 = format!("{digits}e{e}").parse().expect("decimal literal");
        if r >= x {
            return r;
        }
        digits += 1;
    }
}

/// Upper bound of `zeta(s)` for `s >= 2`: partial sum to `10^6` plus the integral remainder.
pub fn zeta_upper(s: u32) -> f64 {
    const N: u64 = 1_000_000;
    let sf = s as f64;
    let partial: f64 = (1..=N).rev().map(|k| (k as f64).powf(-sf)).sum();
    let rest = (N as f64).powf(1.0 - sf) / (sf - 1.0);
    (partial + rest) * (1.0 + 1e-12) + f64::EPSILON * N as f64
}

/// `|coefficient of E_{n/2}| <= (2k/|B_k|) zeta(k-1) m^{k-1}`, `k = n/2`,
/// constant rounded up at two significant digits.
pub fn eisenstein_coeff_bound(n: usize) -> Result<CoeffBound> {
    if !matches!(n, 8 | 16 | 24 | 32) {
        return Err(Error::UnsupportedDimension(n));
    }
    let k = n as u32 / 2;
    Ok(CoeffBound::new(vec![(eisenstein_const(k), k - 1)]))
}

fn eisenstein_const(k: u32) -> f64 {
    let c = eisenstein_q1(k as i64).expect("even weight").abs().to_f64().unwrap();
    round_up_2sig(inflate(c * zeta_upper(k - 1)))
}

/// Bound `|b_m| <= 2 C m^{k/2}` for a weight-`k` cusp form with leading coefficient `c1`,
/// using `d(m) <= 2 sqrt m`.
pub fn cusp_coeff_bound(k: u32, c1: &BigRational) -> CoeffBound {
    let c = jenkins_rouse_constant(k, std::slice::from_ref(c1));
    CoeffBound::new(vec![(2.0 * c, k / 2)])
}

/// Bound for the theta coefficients `a_m`, `m >= 1`, of an even unimodular
/// lattice of dimension `n` with `a_1 = root_count`.
pub fn theta_coeff_bound(n: usize, root_count: u64) -> Result<CoeffBound> {
    let eis = eisenstein_coeff_bound(n)?;
    if n <= 16 {
        return Ok(eis);
    }
    let k = n as i64 / 2;
    let c1 = BigRational::from(BigInt::from(root_count)) - eisenstein_q1(k)?;
    let cusp_weight = k as u32;
    Ok(eis.plus(&cusp_coeff_bound(cusp_weight, &c1)))
}

/// Bound for the normalized cusp form of weight `n/2 + 4`.
pub fn normalized_cusp_bound(n: usize) -> Result<CoeffBound> {
    if !matches!(n, 16 | 24 | 32) {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(cusp_coeff_bound(n as u32 / 2 + 4, &BigRational::one()))
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `e^{-y} 2^w` for rational `y >= 0` as an integer within 2 units.
pub fn exp_neg_fixed(y: &BigRational, w: u64) -> Result<BigInt> {
    if y.is_negative() {
        return Err(Error::InvalidArgument("exp_neg_fixed needs y >= 0".into()));
    }
    let yf = y.to_f64().unwrap_or(f64::INFINITY);
    if !yf.is_finite() {
        return Err(Error::InvalidArgument("exp_neg_fixed argument is too large".into()));
    }
    // z = y / 2^s <= 2^-8; the Taylor error stays below 2^12 units before squaring
    let s = if yf > 0.0 { (yf.log2().ceil() as i64 + 8).max(0) as u64 } else { 0 };
    let wp = w + s + 16;
    let zn = y.numer().clone();
    let zd = y.denom() << s as usize;
    let mut term = BigInt::one() << wp as usize;
    let mut sum = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term = (&term * &zn) / (&zd * BigInt::from(k));
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    for _ in 0..s {
        sum = (&sum * &sum) >> wp as usize;
    }
    Ok(sum >> (s + 16) as usize)
}

/// `Gamma(s, x) = (s-1)! e^{-x} sum_{k<s} x^k/k!` for integer `s >= 1`.
pub fn incomplete_gamma(s: u32, x: f64) -> Result<f64> {
    if s == 0 || !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!("incomplete gamma needs s >= 1, x >= 0 (got {s}, {x})")));
    }
    let lf = ln_factorial(s - 1);
    if x == 0.0 {
        return Ok(lf.exp());
    }
    let lx = x.ln();
    let mut lk = 0.0;
    let mut total = 0.0;
    for k in 0..s {
        if k > 0 {
            lk += (k as f64).ln();
        }
        total += (lf - lk + k as f64 * lx - x).exp();
    }
    Ok(total)
}

/// Upper bound of `sum_{m >= j} m^k e^{-2 alpha m}`.
pub fn tail_bound(j: u64, k: u32, alpha: f64) -> Result<f64> {
    let threshold = k as f64 / (2.0 * alpha);
    if j == 0 || (j as f64) < threshold || !(alpha > 0.0) {
        return Err(Error::MonotonicityViolated { j, threshold });
    }
    let jf = j as f64;
    let x = 2.0 * alpha * jf;
    let first = (k as f64 * jf.ln() - x).exp();
    let gamma = incomplete_gamma(k + 1, x)?;
    let integral = (-(k as f64 + 1.0) * (2.0 * alpha).ln()).exp() * gamma;
    Ok(inflate(first + integral))
}

/// `|Theta(iy) - y^{-n/2} Theta(i/y)|` with both sides truncated to `len` terms.
pub fn theta_duality_residual(theta: &QSeries, n: usize, y: f64, len: usize) -> Result<f64> {
    if !(0.5..=2.0).contains(&y) {
        return Err(Error::InvalidArgument(format!("y = {y} outside [0.5, 2]")));
    }
    if len > theta.len() || len < 2 {
        return Err(Error::InvalidArgument(format!(
            "length {len} not in 2..={} (series length)",
            theta.len()
        )));
    }
    let root_count = theta.coeff(1).to_u64().ok_or_else(|| {
        Error::InvalidArgument("theta series must have a nonnegative integer q coefficient".into())
    })?;
    let bound = theta_coeff_bound(n, root_count)?;
    let ymin = y.min(1.0 / y);
    let alpha = std::f64::consts::PI * ymin;
    let j = len as u64;
    let tail = if j < bound.min_tail_start(alpha) {
        f64::INFINITY
    } else {
        bound.tail(j, alpha)?
    };
    if tail > 1e-12 {
        return Err(Error::TruncationInsufficient { length: len, tail });
    }
    let t = theta.truncate(len);
    let at = |v: f64| t.eval((-2.0 * std::f64::consts::PI * v).exp());
    Ok((at(y) - y.powf(-(n as f64) / 2.0) * at(1.0 / y)).abs())
}
