//! Arithmetic in `Z/p` for a prime `p` chosen at runtime.

use std::fmt;

use crate::error::FieldError;

/// The prime field `F_p`, `2 <= p < 2^31`.
///
/// The modulus is small enough that the product of two canonical
/// representatives fits in a `u64`, which the elimination code relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub const MAX_MODULUS: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(2..Self::MAX_MODULUS).contains(&p) {
            return Err(FieldError::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Canonical representative of an arbitrary signed integer.
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement { value: self.reduce(v), modulus: self.p }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    // Raw operations on canonical representatives. Callers guarantee that
    // both inputs are already reduced.

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 1 % self.p;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce(t0))
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Deterministic trial division; moduli are below `2^31` so this is at most
/// ~46k divisions.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of some `F_p`, carrying its modulus so that mixing fields is
/// caught at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<PrimeField, FieldError> {
        if self.modulus != other.modulus {
            return Err(FieldError::MismatchedModuli(self.modulus, other.modulus));
        }
        Ok(self.field())
    }

    pub fn try_add(self, other: Self) -> Result<Self, FieldError> {
        let f = self.same_field(&other)?;
        Ok(FieldElement { value: f.add(self.value, other.value), modulus: self.modulus })
    }

    pub fn try_sub(self, other: Self) -> Result<Self, FieldError> {
        let f = self.same_field(&other)?;
        Ok(FieldElement { value: f.sub(self.value, other.value), modulus: self.modulus })
    }

    pub fn try_mul(self, other: Self) -> Result<Self, FieldError> {
        let f = self.same_field(&other)?;
        Ok(FieldElement { value: f.mul(self.value, other.value), modulus: self.modulus })
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        Ok(FieldElement { value: self.field().inv(self.value)?, modulus: self.modulus })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl std::ops::Neg for FieldElement {
    type Output = Self;

    fn neg(self) -> Self {
        FieldElement { value: self.field().neg(self.value), modulus: self.modulus }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(p: u64, v: i64) -> FieldElement {
        PrimeField::new(p).unwrap().elem(v)
    }

    #[test]
    fn small_examples() {
        assert_eq!(el(5, 3).try_add(el(5, 4)).unwrap().value(), 2);
        assert_eq!(el(2, 1).try_add(el(2, 1)).unwrap().value(), 0);
        assert_eq!(el(7, 3).try_mul(el(7, 5)).unwrap().value(), 1);
        assert_eq!(el(5, 2).inv().unwrap().value(), 3);
        assert_eq!(el(7, 3).inv().unwrap().value(), 5);
        assert_eq!(el(2, 1).inv().unwrap().value(), 1);
        assert_eq!(el(5, -1).value(), 4);
    }

    #[test]
    fn errors() {
        assert_eq!(el(5, 0).inv(), Err(FieldError::DivisionByZero));
        assert_eq!(el(5, 1).try_add(el(7, 1)), Err(FieldError::MismatchedModuli(5, 7)));
        assert!(matches!(PrimeField::new(9), Err(FieldError::NotPrime(9))));
        assert!(matches!(PrimeField::new(1), Err(FieldError::ModulusOutOfRange(1))));
        assert!(PrimeField::new((1 << 31) + 11).is_err());
        assert!(PrimeField::new(2_147_483_647).is_ok());
    }

    fn prime() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![2u64, 3, 5, 7, 101])
    }

    proptest! {
        #[test]
        fn field_axioms(p in prime(), a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
            let (a, b, c) = (el(p, a), el(p, b), el(p, c));
            let ab_c = a.try_add(b).unwrap().try_add(c).unwrap();
            let a_bc = a.try_add(b.try_add(c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let m1 = a.try_mul(b).unwrap().try_mul(c).unwrap();
            let m2 = a.try_mul(b.try_mul(c).unwrap()).unwrap();
            prop_assert_eq!(m1, m2);
            let lhs = a.try_mul(b.try_add(c).unwrap()).unwrap();
            let rhs = a.try_mul(b).unwrap().try_add(a.try_mul(c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!(a.try_add(-a).unwrap().is_zero());
            prop_assert_eq!(a.try_sub(b).unwrap().try_add(b).unwrap(), a);
            if !a.is_zero() {
                prop_assert_eq!(a.try_mul(a.inv().unwrap()).unwrap().value(), 1);
            }
        }
    }
}
