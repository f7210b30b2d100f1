use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::FieldError;

/// The prime field `F_p`. Moduli are limited to `p < 2^32` so products fit
/// in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn smallest_prime_at_least(n: u64) -> u64 {
    (n.max(2)..).find(|&c| is_prime(c)).expect("primes are unbounded")
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Element with residue `value mod p`.
    pub fn elem(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.p,
            p: self.p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.p).map(|v| self.elem(v))
    }

    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub(crate) fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub(crate) fn inv(&self, a: u64) -> Result<u64, FieldError> {
        if a.is_multiple_of(self.p) {
            return Err(FieldError::InverseOfZero);
        }
        Ok(self.pow(a, self.p - 2))
    }
}

/// A canonical residue `0 <= value < p` tagged with its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    fn same_field(&self, other: &FieldElement) -> Result<PrimeField, FieldError> {
        if self.p == other.p {
            Ok(self.field())
        } else {
            Err(FieldError::FieldMismatch(self.p, other.p))
        }
    }

    pub fn checked_add(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        let f = self.same_field(&rhs)?;
        Ok(f.elem(f.add(self.value, rhs.value)))
    }

    pub fn checked_sub(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        let f = self.same_field(&rhs)?;
        Ok(f.elem(f.sub(self.value, rhs.value)))
    }

    pub fn checked_mul(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        let f = self.same_field(&rhs)?;
        Ok(f.elem(f.mul(self.value, rhs.value)))
    }

    pub fn inv(self) -> Result<FieldElement, FieldError> {
        let f = self.field();
        Ok(f.elem(f.inv(self.value)?))
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        let f = self.field();
        f.elem(f.pow(self.value, exp))
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator forms panic on mismatched fields; use the `checked_*` methods when
// operands may come from different fields.
impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        let f = self.field();
        f.elem(f.sub(0, self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.elem(3).inv().unwrap(), f.elem(5));
        assert_eq!(f.elem(0).inv(), Err(FieldError::InverseOfZero));
    }

    #[test]
    fn inverse_identity_exhaustive() {
        for p in (2..=101).filter(|&p| is_prime(p)) {
            let f = PrimeField::new(p).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(a * a.inv().unwrap(), f.one(), "p={p} a={a}");
                assert_eq!(a.pow(p - 1), f.one());
            }
        }
    }

    #[test]
    fn arithmetic_and_mismatch() {
        let f = PrimeField::new(11).unwrap();
        assert_eq!(f.elem(7) + f.elem(9), f.elem(5));
        assert_eq!(f.elem(3) - f.elem(9), f.elem(5));
        assert_eq!(-f.elem(4), f.elem(7));
        assert_eq!(f.elem(25).value(), 3);
        let g = PrimeField::new(13).unwrap();
        assert_eq!(f.elem(1).checked_add(g.elem(1)), Err(FieldError::FieldMismatch(11, 13)));
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(PrimeField::new(9), Err(FieldError::NotPrime(9)));
        assert_eq!(PrimeField::new(1), Err(FieldError::NotPrime(1)));
        assert_eq!(smallest_prime_at_least(8), 11);
        assert_eq!(smallest_prime_at_least(7), 7);
        assert_eq!(smallest_prime_at_least(0), 2);
    }
}
