//! Arithmetic in the prime field `F_q`.
//!
//! Residues are kept in `u64` and reduced after every operation. The modulus
//! is capped at `2^31`, so a product of two residues never overflows.

use std::fmt;

use crate::error::{Error, Result};

const MAX_MODULUS: u64 = 1 << 31;

/// A prime modulus `q >= 3`, validated by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 {
            return Err(Error::ModulusTooSmall(q));
        }
        if q > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(q));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeModulus(q))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn element(self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.0,
            modulus: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        self.element(0)
    }

    pub fn one(self) -> FieldElement {
        self.element(1)
    }

    /// All residues `0..q` in increasing order.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.0).map(move |v| self.element(v))
    }

    #[inline]
    pub(crate) fn add_raw(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn mul_raw(self, a: u64, b: u64) -> u64 {
        (a * b) % self.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Trial division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A canonical residue `0 <= value < q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: PrimeModulus,
}

/// The three ring operations accepted by [`FieldElement::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: FieldElement) -> Result<PrimeModulus> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.0, other.modulus.0));
        }
        Ok(self.modulus)
    }

    pub fn apply(self, other: FieldElement, op: FieldOp) -> Result<FieldElement> {
        let m = self.check(other)?;
        let q = m.0;
        let value = match op {
            FieldOp::Add => m.add_raw(self.value, other.value),
            FieldOp::Sub => m.add_raw(self.value, q - other.value),
            FieldOp::Mul => m.mul_raw(self.value, other.value),
        };
        Ok(FieldElement { value, modulus: m })
    }

    pub fn add(self, other: FieldElement) -> Result<FieldElement> {
        self.apply(other, FieldOp::Add)
    }

    pub fn sub(self, other: FieldElement) -> Result<FieldElement> {
        self.apply(other, FieldOp::Sub)
    }

    pub fn mul(self, other: FieldElement) -> Result<FieldElement> {
        self.apply(other, FieldOp::Mul)
    }

    pub fn pow(self, mut exp: u64) -> FieldElement {
        let m = self.modulus;
        let mut base = self.value;
        let mut acc = 1 % m.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = m.mul_raw(acc, base);
            }
            base = m.mul_raw(base, base);
            exp >>= 1;
        }
        FieldElement {
            value: acc,
            modulus: m,
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        let q = self.modulus.0 as i64;
        let (mut r0, mut r1) = (q, self.value as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (s0, s1) = (s1, s0 - quot * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(FieldElement {
            value: s0.rem_euclid(q) as u64,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus.0)
    }
}

/// Evaluates `sum_i coeffs[i] * x0^i` with Horner's rule.
pub fn poly_eval(coeffs: &[FieldElement], x0: FieldElement) -> Result<FieldElement> {
    let (last, rest) = coeffs.split_last().ok_or(Error::EmptyPolynomial)?;
    let mut acc = *last;
    acc.check(x0)?;
    for c in rest.iter().rev() {
        acc = acc.mul(x0)?.add(*c)?;
    }
    Ok(acc)
}

/// Horner evaluation over raw residues; used on the hot construction path.
#[inline]
pub(crate) fn poly_eval_raw(m: PrimeModulus, coeffs: &[u64], x0: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| m.add_raw(m.mul_raw(acc, x0), c))
}
