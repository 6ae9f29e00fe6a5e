//! Sparse multivariate polynomials over a prime field.
//!
//! Monomials are ordered graded-reverse-lexicographically with respect to the
//! declared variable sequence (`x > y > z` for `vars = [x, y, z]`). Terms are
//! stored in a `BTreeMap` keyed by that order, so iteration in reverse yields
//! the canonical descending order used for printing and normal forms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::PolyError;
use crate::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u32; 4]>,
}

impl Monomial {
    pub fn new(exps: &[u32]) -> Self {
        Monomial { exps: SmallVec::from_slice(exps) }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: SmallVec::from_elem(0, nvars) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_add(*b)?);
        }
        Some(Monomial { exps })
    }

    /// Product; panics on exponent overflow, which cannot happen for the
    /// degree ranges the engine works with.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| b - a).collect() })
    }

    pub fn checked_pow(&self, k: u64) -> Option<Monomial> {
        let k: u32 = k.try_into().ok()?;
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for e in &self.exps {
            exps.push(e.checked_mul(k)?);
        }
        Some(Monomial { exps })
    }

    pub fn fmt_with(&self, vars: &[String], f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for (e, v) in self.exps.iter().zip(vars) {
            if *e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(v)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_char('1')?;
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // reverse lex: the smaller exponent in the last differing
            // variable wins
            for (a, b) in self.exps.iter().zip(&other.exps).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `m` in `nvars` variables, in descending
/// graded-reverse-lexicographic order.
pub fn graded_piece_basis(nvars: usize, m: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if nvars == 0 {
        if m == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut cur = vec![0u32; nvars];
    fill_exponents(&mut cur, 0, m as u32, &mut out);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn fill_exponents(cur: &mut [u32], i: usize, left: u32, out: &mut Vec<Monomial>) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(Monomial::new(cur));
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill_exponents(cur, i + 1, left - e, out);
    }
}

pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// A polynomial over `F_p` in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl Poly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        Poly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: i64) -> Self {
        Self::term(field, Monomial::one(nvars), c)
    }

    pub fn term(field: PrimeField, mono: Monomial, c: i64) -> Self {
        let nvars = mono.nvars();
        let mut p = Self::zero(field, nvars);
        let c = field.reduce(c);
        if c != 0 {
            p.terms.insert(mono, c);
        }
        p
    }

    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        Self::term(field, Monomial::var(nvars, i), 1)
    }

    pub fn from_terms(field: PrimeField, nvars: usize, terms: impl IntoIterator<Item = (Monomial, i64)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars);
            p.add_term(m, field.reduce(c));
        }
        p
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().rev().map(|(m, c)| (m, *c))
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Monomial, u32)> {
        self.terms.iter().next_back().map(|(m, c)| (m, *c))
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Common total degree of all terms; `None` for the zero polynomial or a
    /// non-homogeneous one.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<(), PolyError> {
        if self.field != other.field || self.nvars != other.nvars {
            return Err(PolyError::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.field.neg(1 % self.field.modulus()))
    }

    pub fn scale(&self, c: u32) -> Poly {
        let mut out = Poly::zero(self.field, self.nvars);
        if c == 0 {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), self.field.mul(*v, c));
        }
        out
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Result<Poly, PolyError> {
        let mut out = Poly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let prod = m.checked_mul(mono).ok_or(PolyError::ExponentOverflow)?;
            out.terms.insert(prod, *c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_compatible(other)?;
        let mut out = Poly::zero(self.field, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.checked_mul(mb).ok_or(PolyError::ExponentOverflow)?;
                out.add_term(m, self.field.mul(*ca, *cb));
            }
        }
        Ok(out)
    }

    /// `f^(p^e)`: over `F_p` the coefficients are fixed by Frobenius, so this
    /// only scales exponents.
    pub fn frobenius(&self, e: u32) -> Result<Poly, PolyError> {
        let q = (self.field.modulus() as u64).checked_pow(e).ok_or(PolyError::ExponentOverflow)?;
        let mut out = Poly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.checked_pow(q).ok_or(PolyError::ExponentOverflow)?, *c);
        }
        Ok(out)
    }

    /// `f^k`. The exponent is split into base-`p` digits: the `p^i` factors
    /// come from [`Poly::frobenius`] and each digit power from repeated
    /// squaring.
    pub fn pow(&self, k: u64) -> Result<Poly, PolyError> {
        let p = self.field.modulus() as u64;
        let mut acc = Poly::constant(self.field, self.nvars, 1);
        let mut rest = k;
        let mut level = 0u32;
        while rest > 0 {
            let digit = rest % p;
            if digit > 0 {
                let base = self.frobenius(level)?;
                acc = acc.mul(&base.pow_by_squaring(digit)?)?;
            }
            rest /= p;
            level += 1;
        }
        Ok(acc)
    }

    pub fn pow_by_squaring(&self, mut k: u64) -> Result<Poly, PolyError> {
        let mut acc = Poly::constant(self.field, self.nvars, 1);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Result<Poly, PolyError> {
        let (_, lc) = self.leading().ok_or(PolyError::Zero)?;
        let inv = self.field.inv(lc).expect("nonzero leading coefficient");
        Ok(self.scale(inv))
    }

    pub fn display<'a>(&'a self, vars: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, vars }
    }
}

/// Canonical printing: descending order, coefficients in `0..p`, explicit
/// `*` and `^`.
pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    vars: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let is_one = m.exps().iter().all(|&e| e == 0);
            if is_one {
                write!(f, "{c}")?;
            } else {
                if c != 1 {
                    write!(f, "{c}*")?;
                }
                m.fmt_with(self.vars, f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use proptest::prelude::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn grevlex_order() {
        let m = |e: &[u32]| Monomial::new(e);
        assert!(m(&[3, 0, 0]) > m(&[0, 2, 1]));
        assert!(m(&[1, 0, 1]) < m(&[0, 2, 0]));
        assert!(m(&[0, 0, 2]) > m(&[1, 0, 0]));
        assert!(m(&[2, 0]) > m(&[1, 1]));
    }

    #[test]
    fn basis_counts() {
        assert_eq!(graded_piece_basis(2, 3).len(), 4);
        assert_eq!(graded_piece_basis(3, 5).len(), 21);
        assert_eq!(graded_piece_basis(3, 0), vec![Monomial::one(3)]);
        let b = graded_piece_basis(3, 2);
        assert!(b.windows(2).all(|w| w[0] > w[1]));
        for n in 1..5 {
            for m in 0..9 {
                assert_eq!(graded_piece_basis(n, m).len() as u64, binomial((m + n as u64 - 1) as i64, n as i64 - 1));
            }
        }
    }

    #[test]
    fn products_and_powers() {
        let v = vars(&["x", "y"]);
        let sum = parse_poly("x + y", &v, f(2)).unwrap();
        assert_eq!(sum.pow(2).unwrap(), parse_poly("x^2 + y^2", &v, f(2)).unwrap());
        for p in [2u64, 3, 5] {
            let s = parse_poly("x + y", &v, f(p)).unwrap();
            let expect = parse_poly(&format!("x^{p} + y^{p}"), &v, f(p)).unwrap();
            assert_eq!(s.pow(p).unwrap(), expect);
            assert_eq!(s.pow_by_squaring(p).unwrap(), expect);
        }
        let a = parse_poly("x^2", &v, f(5)).unwrap();
        let b = parse_poly("y^3", &v, f(5)).unwrap();
        assert_eq!(a.mul(&b).unwrap().display(&v).to_string(), "x^2*y^3");
    }

    #[test]
    fn canonical_printing() {
        let v = vars(&["x", "y", "z"]);
        let h = parse_poly("z^3 + 4y^3 + x^3 - 1*x*y*z", &v, f(5)).unwrap();
        assert_eq!(h.display(&v).to_string(), "x^3 + 4*y^3 + 4*x*y*z + z^3");
        assert_eq!(Poly::zero(f(5), 3).display(&v).to_string(), "0");
    }

    fn arb_poly(p: u64) -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u32..5, 3), 0i64..p as i64), 0..8)
            .prop_map(move |ts| Poly::from_terms(f(p), 3, ts.into_iter().map(|(e, c)| (Monomial::new(&e), c))))
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(pp in arb_poly(7)) {
            let v = vars(&["x", "y", "z"]);
            let text = pp.display(&v).to_string();
            prop_assert_eq!(parse_poly(&text, &v, f(7)).unwrap(), pp);
        }

        #[test]
        fn frobenius_identity(pp in arb_poly(3), e in 1u32..3) {
            let q = 3u64.pow(e);
            let mut expect = Poly::zero(f(3), 3);
            for (m, c) in pp.terms() {
                expect = expect.add(&Poly::term(f(3), m.clone(), c as i64).pow_by_squaring(q).unwrap()).unwrap();
            }
            prop_assert_eq!(pp.pow_by_squaring(q).unwrap(), expect.clone());
            prop_assert_eq!(pp.pow(q).unwrap(), expect);
        }

        #[test]
        fn pow_matches_squaring(pp in arb_poly(5), k in 0u64..13) {
            prop_assert_eq!(pp.pow(k).unwrap(), pp.pow_by_squaring(k).unwrap());
        }
    }
}
