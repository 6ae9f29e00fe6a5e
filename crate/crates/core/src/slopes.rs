//! Closed-form Hilbert-Kunz multiplicities from strong Harder-Narasimhan
//! data of the syzygy bundle.
//!
//! Slopes are carried as degree thresholds `nu_k = -mu_k / deg(Y)` where
//! `mu_k` is the normalized slope of the `k`-th quotient; the multiplicity is
//!
//! ```text
//! e_HK = deg(Y)/2 * (sum_k r_k nu_k^2 - sum_i d_i^2).
//! ```
//!
//! Everything here is exact rational arithmetic.

use std::fmt;

use crate::error::SlopeError;
use crate::rational::{int, rat, Rational};

/// Ranks and thresholds of a strong Harder-Narasimhan filtration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnData {
    /// Number of ideal generators.
    pub n: usize,
    pub deg_y: u64,
    pub ranks: Vec<u64>,
    /// Strictly increasing.
    pub thresholds: Vec<Rational>,
}

impl HnData {
    pub fn new(n: usize, deg_y: u64, ranks: Vec<u64>, thresholds: Vec<Rational>) -> Self {
        HnData { n, deg_y, ranks, thresholds }
    }

    /// Filtration length `t`.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Normalized slopes `mu_k = -nu_k deg(Y)`.
    pub fn slopes(&self) -> Vec<Rational> {
        self.thresholds.iter().map(|nu| -nu * int(self.deg_y as i128)).collect()
    }

    pub fn from_slopes(n: usize, deg_y: u64, ranks: Vec<u64>, slopes: &[Rational]) -> Self {
        let thresholds = slopes.iter().map(|mu| -mu / int(deg_y as i128)).collect();
        HnData { n, deg_y, ranks, thresholds }
    }
}

impl fmt::Display for HnData {
    /// `r1:nu1,r2:nu2,...`, the same syntax the command line accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (r, nu)) in self.ranks.iter().zip(&self.thresholds).enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}:{nu}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    GeneratorCount { n: usize, degrees: usize },
    TooFewGenerators,
    ZeroDegY,
    Empty,
    LengthMismatch,
    ZeroRank(usize),
    RankSum { sum: u64, expected: u64 },
    WeightedSum { sum: Rational, expected: Rational },
    NotIncreasing(usize),
    BelowMinDegree { nu1: Rational, min: u64 },
    AbovePairBound { nut: Rational, bound: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::GeneratorCount { n, degrees } => write!(f, "n = {n} but {degrees} degrees given"),
            Violation::TooFewGenerators => write!(f, "need at least two generators"),
            Violation::ZeroDegY => write!(f, "deg(Y) must be positive"),
            Violation::Empty => write!(f, "empty filtration"),
            Violation::LengthMismatch => write!(f, "ranks and thresholds differ in length"),
            Violation::ZeroRank(k) => write!(f, "rank r_{} is zero", k + 1),
            Violation::RankSum { sum, expected } => write!(f, "sum r_k = {sum} != n - 1 = {expected}"),
            Violation::WeightedSum { sum, expected } => {
                write!(f, "sum r_k nu_k = {sum} != sum d_i = {expected}")
            }
            Violation::NotIncreasing(k) => write!(f, "thresholds not strictly increasing at index {}", k + 1),
            Violation::BelowMinDegree { nu1, min } => write!(f, "nu_1 = {nu1} < min d_i = {min}"),
            Violation::AbovePairBound { nut, bound } => {
                write!(f, "nu_t = {nut} > max_(i != j) (d_i + d_j) = {bound}")
            }
        }
    }
}

fn pair_bound(degrees: &[u64]) -> u64 {
    let mut d = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d[0] + d[1]
}

/// Every violated constraint, in a fixed order.
pub fn validate(hn: &HnData, degrees: &[u64]) -> Result<(), Vec<Violation>> {
    let mut v = Vec::new();
    if hn.n != degrees.len() {
        v.push(Violation::GeneratorCount { n: hn.n, degrees: degrees.len() });
    }
    if degrees.len() < 2 {
        v.push(Violation::TooFewGenerators);
        return Err(v);
    }
    if hn.deg_y == 0 {
        v.push(Violation::ZeroDegY);
    }
    if hn.ranks.is_empty() {
        v.push(Violation::Empty);
    }
    if hn.ranks.len() != hn.thresholds.len() {
        v.push(Violation::LengthMismatch);
        return Err(v);
    }
    for (k, r) in hn.ranks.iter().enumerate() {
        if *r == 0 {
            v.push(Violation::ZeroRank(k));
        }
    }
    let rank_sum: u64 = hn.ranks.iter().sum();
    let expected = degrees.len() as u64 - 1;
    if rank_sum != expected {
        v.push(Violation::RankSum { sum: rank_sum, expected });
    }
    let weighted: Rational = hn.ranks.iter().zip(&hn.thresholds).map(|(r, nu)| nu * int(*r as i128)).sum();
    let dsum = int(degrees.iter().sum::<u64>() as i128);
    if weighted != dsum {
        v.push(Violation::WeightedSum { sum: weighted, expected: dsum });
    }
    for k in 1..hn.thresholds.len() {
        if hn.thresholds[k] <= hn.thresholds[k - 1] {
            v.push(Violation::NotIncreasing(k));
        }
    }
    if let (Some(first), Some(last)) = (hn.thresholds.first(), hn.thresholds.last()) {
        let min = *degrees.iter().min().unwrap();
        if *first < int(min as i128) {
            v.push(Violation::BelowMinDegree { nu1: *first, min });
        }
        let bound = pair_bound(degrees);
        if *last > int(bound as i128) {
            v.push(Violation::AbovePairBound { nut: *last, bound });
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

fn sum_squares(degrees: &[u64]) -> Rational {
    int(degrees.iter().map(|d| (*d as i128) * (*d as i128)).sum())
}

/// `deg(Y)/2 (sum r_k nu_k^2 - sum d_i^2)`. Also the definition used in
/// characteristic zero, with the ordinary Harder-Narasimhan slopes.
pub fn ehk_from_hn(hn: &HnData, degrees: &[u64]) -> Result<Rational, SlopeError> {
    validate(hn, degrees).map_err(SlopeError::Invalid)?;
    let weighted: Rational = hn.ranks.iter().zip(&hn.thresholds).map(|(r, nu)| nu * nu * int(*r as i128)).sum();
    Ok(rat(hn.deg_y as i128, 2) * (weighted - sum_squares(degrees)))
}

/// Strongly semistable syzygy bundle: `t = 1`, `nu_1 = sum d_i / (n-1)`.
pub fn semistable_hn(degrees: &[u64], deg_y: u64) -> HnData {
    let n = degrees.len();
    let nu = rat(degrees.iter().sum::<u64>() as i128, n as i128 - 1);
    HnData::new(n, deg_y, vec![n as u64 - 1], vec![nu])
}

/// `deg(Y)/2 ((sum d_i)^2/(n-1) - sum d_i^2)`.
pub fn ehk_strongly_semistable(degrees: &[u64], deg_y: u64) -> Result<Rational, SlopeError> {
    let n = degrees.len();
    if n < 2 {
        return Err(SlopeError::Invalid(vec![Violation::TooFewGenerators]));
    }
    let s = int(degrees.iter().sum::<u64>() as i128);
    let value = rat(deg_y as i128, 2) * (s * s / int(n as i128 - 1) - sum_squares(degrees));
    debug_assert_eq!(Ok(value), ehk_from_hn(&semistable_hn(degrees, deg_y), degrees));
    Ok(value)
}

/// Two-step filtration given its top piece; `(r_1, nu_1)` follow from
/// `r_1 = n-1-r_2` and `r_1 nu_1 = sum d_i - r_2 nu_2`.
pub fn t2_hn(r2: u64, nu2: Rational, degrees: &[u64], deg_y: u64) -> Result<HnData, SlopeError> {
    let n = degrees.len();
    if n < 2 || r2 == 0 || r2 >= n as u64 - 1 {
        return Err(SlopeError::Domain(format!("r2 = {r2} must lie in 1..n-1 = 1..{}", n.saturating_sub(1))));
    }
    let r1 = n as u64 - 1 - r2;
    let nu1 = (int(degrees.iter().sum::<u64>() as i128) - nu2 * int(r2 as i128)) / int(r1 as i128);
    let hn = HnData::new(n, deg_y, vec![r1, r2], vec![nu1, nu2]);
    validate(&hn, degrees).map_err(SlopeError::Invalid)?;
    Ok(hn)
}

/// `deg(Y)/2 (r_2 nu_2^2 + (sum d_i - r_2 nu_2)^2/(n-1-r_2) - sum d_i^2)`.
pub fn ehk_t2(r2: u64, nu2: Rational, degrees: &[u64], deg_y: u64) -> Result<Rational, SlopeError> {
    t2_hn(r2, nu2, degrees, deg_y)?;
    let n = degrees.len() as i128;
    let r2q = int(r2 as i128);
    let s = int(degrees.iter().sum::<u64>() as i128);
    let rest = s - r2q * nu2;
    Ok(rat(deg_y as i128, 2) * (r2q * nu2 * nu2 + rest * rest / (int(n - 1) - r2q) - sum_squares(degrees)))
}

/// Three generators, non-semistable case:
/// `deg(Y) (nu_2^2 - nu_2 sum d_i + sum_(i<j) d_i d_j)`.
pub fn ehk_n3(nu2: Rational, degrees: &[u64; 3], deg_y: u64) -> Result<Rational, SlopeError> {
    t2_hn(1, nu2, degrees, deg_y)?;
    let [a, b, c] = degrees.map(|d| int(d as i128));
    Ok(int(deg_y as i128) * (nu2 * nu2 - nu2 * (a + b + c) + a * b + a * c + b * c))
}

/// Cone over a smooth plane curve of degree `h`:
/// `h (nu_2^2 - 3 nu_2 + 3)` with `3/2 <= nu_2 <= 2`.
pub fn ehk_plane_curve(h: u64, nu2: Rational) -> Result<Rational, SlopeError> {
    if nu2 < rat(3, 2) || nu2 > int(2) {
        return Err(SlopeError::Nu2OutOfRange(nu2));
    }
    Ok(int(h as i128) * (nu2 * nu2 - int(3) * nu2 + int(3)))
}

/// Filtration after adjoining a redundant generator of degree `e`:
/// `Syz(f_1..f_n, f) = Syz(f_1..f_n) (+) O(-e)`, so `e` enters as a new
/// threshold of rank 1, or bumps the rank of an equal threshold.
pub fn add_generator(hn: &HnData, degrees: &[u64], e: u64) -> Result<(HnData, Vec<u64>), SlopeError> {
    validate(hn, degrees).map_err(SlopeError::Invalid)?;
    let min = *degrees.iter().min().unwrap();
    if e < min {
        return Err(SlopeError::GeneratorDegreeTooSmall { e, min });
    }
    let ev = int(e as i128);
    let mut ranks = hn.ranks.clone();
    let mut thresholds = hn.thresholds.clone();
    match thresholds.binary_search(&ev) {
        Ok(k) => ranks[k] += 1,
        Err(k) => {
            thresholds.insert(k, ev);
            ranks.insert(k, 1);
        }
    }
    let mut new_degrees = degrees.to_vec();
    new_degrees.push(e);
    let out = HnData::new(hn.n + 1, hn.deg_y, ranks, thresholds);
    validate(&out, &new_degrees).map_err(SlopeError::Invalid)?;
    Ok((out, new_degrees))
}
