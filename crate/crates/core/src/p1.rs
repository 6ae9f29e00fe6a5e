//! Splitting types of syzygy bundles on the projective line.
//!
//! Over `R = K[x, y]` every vector bundle on `P^1` splits, so
//! `Syz(f_1^q, ..., f_n^q) = (+)_j O(-e_j)` and
//! `h0(Syz(m)) = sum_j max(0, m - e_j + 1)`. The second difference of the
//! measured profile `m |-> h0(Syz(m))` counts the twists equal to `m`.

use std::collections::BTreeMap;

use crate::error::P1Error;
use crate::hk::FrobeniusEngine;
use crate::rational::{int, is_integer, rat, Rational};
use crate::ring::{IdealSpec, RingKind};
use crate::slopes::{validate, HnData};

/// `(+)_j O(-e_j)` at a given Frobenius level `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingType {
    pub q: u64,
    /// Sorted ascending.
    pub twists: Vec<u64>,
}

impl SplittingType {
    pub fn h0(&self, m: i64) -> u64 {
        self.twists.iter().map(|&e| (m - e as i64 + 1).max(0) as u64).sum()
    }

    pub fn h1(&self, m: i64) -> u64 {
        self.twists.iter().map(|&e| (e as i64 - m - 1).max(0) as u64).sum()
    }
}

fn check_line(ideal: &IdealSpec) -> Result<(), P1Error> {
    if ideal.ring().kind() != RingKind::Free || ideal.ring().nvars() != 2 {
        return Err(P1Error::NotProjectiveLine);
    }
    Ok(())
}

/// Degrees scanned for the `h0` profile: up to `q max_(i!=j)(d_i+d_j) + 1`.
pub fn profile_bound(ideal: &IdealSpec, q: u64) -> usize {
    (q * ideal.max_pair_degree() + 1) as usize
}

/// Measured `h0(Syz(f_1^q..f_n^q)(m))` for `m = 0..=upto`.
pub fn h0_profile(ideal: &IdealSpec, q: u64, upto: usize) -> Result<Vec<u64>, P1Error> {
    check_line(ideal)?;
    let engine = FrobeniusEngine::new(ideal, q)?;
    use rayon::prelude::*;
    Ok((0..=upto).into_par_iter().map(|m| engine.syzygy_h0(m)).collect())
}

pub fn splitting_type(ideal: &IdealSpec, q: u64) -> Result<SplittingType, P1Error> {
    let upto = profile_bound(ideal, q);
    let profile = h0_profile(ideal, q, upto)?;
    splitting_from_profile(ideal, q, &profile)
}

pub(crate) fn splitting_from_profile(ideal: &IdealSpec, q: u64, profile: &[u64]) -> Result<SplittingType, P1Error> {
    let at = |m: i64| if m < 0 { 0i64 } else { profile[m as usize] as i64 };
    let mut twists = Vec::new();
    for m in 0..profile.len() as i64 {
        let second = at(m) - 2 * at(m - 1) + at(m - 2);
        if second < 0 {
            return Err(P1Error::InconsistentProfile(format!("negative second difference at m = {m}")));
        }
        twists.extend(std::iter::repeat_n(m as u64, second as usize));
    }
    let rank = ideal.n() - 1;
    if twists.len() != rank {
        return Err(P1Error::InconsistentProfile(format!("{} twists for rank {rank}", twists.len())));
    }
    let expected: u64 = q * ideal.degrees().iter().sum::<u64>();
    let total: u64 = twists.iter().sum();
    if total != expected {
        return Err(P1Error::InconsistentProfile(format!("twists sum to {total}, expected {expected}")));
    }
    let st = SplittingType { q, twists };
    for (m, &h) in profile.iter().enumerate() {
        if st.h0(m as i64) != h {
            return Err(P1Error::InconsistentProfile(format!("h0 mismatch at m = {m}")));
        }
    }
    Ok(st)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stabilization {
    Stable(HnData),
    NotStabilized { coarse: SplittingType, fine: SplittingType },
}

/// Compares twists at `q1 < q2`; when `{e_j(q2)} = (q2/q1) {e_j(q1)}` the
/// thresholds are the distinct `e_j(q1)/q1` with their multiplicities.
pub fn hn_from_splittings(s1: &SplittingType, s2: &SplittingType) -> Stabilization {
    let scaled_match = s2.q.is_multiple_of(s1.q) && s2.q > s1.q && {
        let k = s2.q / s1.q;
        s1.twists.len() == s2.twists.len() && s1.twists.iter().zip(&s2.twists).all(|(a, b)| a * k == *b)
    };
    if !scaled_match {
        return Stabilization::NotStabilized { coarse: s1.clone(), fine: s2.clone() };
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &e in &s1.twists {
        *counts.entry(e).or_default() += 1;
    }
    let thresholds = counts.keys().map(|&e| rat(e as i128, s1.q as i128)).collect();
    let ranks = counts.values().copied().collect();
    Stabilization::Stable(HnData::new(s1.twists.len() + 1, 1, ranks, thresholds))
}

/// Result of the stabilization search.
#[derive(Debug, Clone)]
pub struct StrongHn {
    pub hn: HnData,
    /// The level `q1 = p^e` at which the scaled comparison first held.
    pub level: u64,
    pub splittings: Vec<SplittingType>,
}

/// Tries `(p^e, p^(e+1))` for `e = 1..=max_e`.
pub fn stabilize(ideal: &IdealSpec, max_e: u32) -> Result<Result<StrongHn, Stabilization>, P1Error> {
    check_line(ideal)?;
    let p = ideal.ring().field().modulus() as u64;
    let mut splittings = Vec::new();
    let mut prev = splitting_type(ideal, p)?;
    splittings.push(prev.clone());
    let mut last = None;
    for e in 1..=max_e {
        let next = splitting_type(ideal, p.pow(e + 1))?;
        splittings.push(next.clone());
        match hn_from_splittings(&prev, &next) {
            Stabilization::Stable(hn) => {
                validate(&hn, ideal.degrees()).map_err(|v| P1Error::Slope(crate::error::SlopeError::Invalid(v)))?;
                return Ok(Ok(StrongHn { hn, level: p.pow(e), splittings }));
            }
            other => last = Some(other),
        }
        prev = next;
    }
    Ok(Err(last.expect("max_e >= 1")))
}

/// Outcome of checking the measured `h0` profile against the global section
/// description on `P^1` (genus 0, `deg omega = -2`, `deg Y = 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileReport {
    pub q: u64,
    pub checked_upto: usize,
    pub measured: Vec<u64>,
    pub failures: Vec<String>,
}

impl ProfileReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_h0_profile(ideal: &IdealSpec, q: u64, hn: &HnData) -> Result<ProfileReport, P1Error> {
    check_line(ideal)?;
    // twists at level q
    let mut twists = Vec::new();
    for (r, nu) in hn.ranks.iter().zip(&hn.thresholds) {
        let e = nu * int(q as i128);
        if !is_integer(&e) {
            return Err(P1Error::IncompatibleLevel { q, q0: *nu.denom() as u64 });
        }
        twists.extend(std::iter::repeat_n(*e.numer() as u64, *r as usize));
    }
    let st = SplittingType { q, twists };
    let qr = int(q as i128);
    let nu_t = *hn.thresholds.last().expect("nonempty filtration");
    let upto = (*(nu_t * qr).numer() + 2) as usize;
    let measured = h0_profile(ideal, q, upto)?;
    let mut failures = Vec::new();
    for (m, &h) in measured.iter().enumerate() {
        let mq = int(m as i128);
        let split = st.h0(m as i64);
        if h != split {
            failures.push(format!("m = {m}: h0 = {h}, split formula gives {split}"));
        }
        if mq < hn.thresholds[0] * qr && h != 0 {
            failures.push(format!("m = {m}: nonzero h0 = {h} below q nu_1"));
        }
        if mq >= nu_t * qr - int(1) && st.h1(m as i64) != 0 {
            failures.push(format!("m = {m}: h1 = {} does not vanish", st.h1(m as i64)));
        }
        // q nu_k - 2 < m < q nu_(k+1): h0 = (m + 1) R_k - q W_k with
        // R_k = r_1 + .. + r_k and W_k = r_1 nu_1 + .. + r_k nu_k
        for k in 0..hn.len().saturating_sub(1) {
            if mq > hn.thresholds[k] * qr - int(2) && mq < hn.thresholds[k + 1] * qr {
                let rk: u64 = hn.ranks[..=k].iter().sum();
                let wk: Rational = hn.ranks[..=k].iter().zip(&hn.thresholds).map(|(r, nu)| nu * int(*r as i128)).sum();
                let formula = int((m as i128 + 1) * rk as i128) - qr * wk;
                if formula != int(h as i128) {
                    failures.push(format!("m = {m}: h0 = {h}, interval formula gives {formula}"));
                }
            }
        }
    }
    Ok(ProfileReport { q, checked_upto: upto, measured, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::parse::parse_poly;
    use crate::ring::GradedRing;

    fn ideal(p: u64, gens: &[&str]) -> IdealSpec {
        let f = PrimeField::new(p).unwrap();
        let ring = GradedRing::free(f, &["x", "y"]);
        let v = ring.vars().to_vec();
        IdealSpec::new(ring, gens.iter().map(|g| parse_poly(g, &v, f).unwrap()).collect()).unwrap()
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting_type(&ideal(2, &["x", "y"]), 2).unwrap().twists, vec![4]);
        assert_eq!(splitting_type(&ideal(3, &["x^2", "x*y", "y^2"]), 3).unwrap().twists, vec![9, 9]);
        assert_eq!(splitting_type(&ideal(2, &["x^3", "x*y^2", "y^3"]), 2).unwrap().twists, vec![8, 10]);
    }

    #[test]
    fn stabilization_examples() {
        let s = |q, t: &[u64]| SplittingType { q, twists: t.to_vec() };
        match hn_from_splittings(&s(2, &[4]), &s(4, &[8])) {
            Stabilization::Stable(hn) => {
                assert_eq!(hn.thresholds, vec![int(2)]);
                assert_eq!(hn.ranks, vec![1]);
            }
            other => panic!("{other:?}"),
        }
        match hn_from_splittings(&s(2, &[8, 10]), &s(4, &[16, 20])) {
            Stabilization::Stable(hn) => {
                assert_eq!(hn.thresholds, vec![int(4), int(5)]);
                assert_eq!(hn.ranks, vec![1, 1]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(hn_from_splittings(&s(2, &[8, 10]), &s(4, &[15, 21])), Stabilization::NotStabilized { .. }));
    }

    #[test]
    fn search_and_profile() {
        let i = ideal(2, &["x^3", "x*y^2", "y^3"]);
        let strong = stabilize(&i, 3).unwrap().unwrap();
        assert_eq!(strong.level, 2);
        assert_eq!(strong.hn.thresholds, vec![int(4), int(5)]);
        let rep = verify_h0_profile(&i, 2, &strong.hn).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
        assert_eq!(&rep.measured[8..=10], &[1, 2, 4]);

        let i = ideal(2, &["x", "y"]);
        let strong = stabilize(&i, 2).unwrap().unwrap();
        let rep = verify_h0_profile(&i, 4, &strong.hn).unwrap();
        assert!(rep.ok());
        let expect: Vec<u64> = (0..=10).map(|m: i64| (m - 7).max(0) as u64).collect();
        assert_eq!(rep.measured, expect);
        assert_eq!(rep.measured[0], 0);
    }

    #[test]
    fn profile_detects_wrong_data() {
        let i = ideal(2, &["x^3", "x*y^2", "y^3"]);
        let wrong = HnData::new(3, 1, vec![2], vec![rat(9, 2)]);
        let rep = verify_h0_profile(&i, 2, &wrong).unwrap();
        assert!(!rep.ok());
    }

    #[test]
    fn non_line_rejected() {
        let f = PrimeField::new(2).unwrap();
        let ring = GradedRing::free(f, &["x", "y", "z"]);
        let v = ring.vars().to_vec();
        let i = IdealSpec::new(ring, ["x", "y", "z"].iter().map(|g| parse_poly(g, &v, f).unwrap()).collect()).unwrap();
        assert_eq!(splitting_type(&i, 2), Err(P1Error::NotProjectiveLine));
    }
}
