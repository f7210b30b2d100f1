use std::fmt;

use super::field::{FieldElement, PrimeField};
use super::FieldError;

/// Univariate polynomial over `F_p`, coefficients low degree first with
/// trailing zeros trimmed. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Polynomial {
    pub fn new(field: PrimeField, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % field.p()).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn from_elements(field: PrimeField, coeffs: &[FieldElement]) -> Result<Self, FieldError> {
        for c in coeffs {
            if c.field() != field {
                return Err(FieldError::FieldMismatch(field.p(), c.field().p()));
            }
        }
        Ok(Self::new(field, coeffs.iter().map(|c| c.value())))
    }

    pub fn zero(field: PrimeField) -> Self {
        Polynomial {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.coeffs.iter().map(|&c| self.field.elem(c)).collect()
    }

    /// Coefficients zero-padded to exactly `len` entries.
    ///
    /// Panics if the polynomial has more than `len` coefficients.
    pub fn padded(&self, len: usize) -> Vec<FieldElement> {
        assert!(self.coeffs.len() <= len, "degree exceeds requested length");
        let mut out = self.coefficients();
        out.resize(len, self.field.zero());
        out
    }

    pub(crate) fn eval_raw(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    pub fn eval(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        if x.field() != self.field {
            return Err(FieldError::FieldMismatch(self.field.p(), x.field().p()));
        }
        Ok(self.field.elem(self.eval_raw(x.value())))
    }

    /// Lagrange interpolation through points with distinct abscissae.
    pub fn interpolate(field: PrimeField, points: &[(FieldElement, FieldElement)]) -> Result<Self, FieldError> {
        let mut xs: Vec<u64> = Vec::with_capacity(points.len());
        for (x, y) in points {
            for e in [x, y] {
                if e.field() != field {
                    return Err(FieldError::FieldMismatch(field.p(), e.field().p()));
                }
            }
            if xs.contains(&x.value()) {
                return Err(FieldError::DuplicatePoints);
            }
            xs.push(x.value());
        }
        let f = field;
        let mut acc = vec![0u64; points.len()];
        for (i, (_, y)) in points.iter().enumerate() {
            // basis numerator prod_{j != i} (x - x_j), built incrementally
            let mut basis = vec![1u64];
            let mut denom = 1u64;
            for (j, &xj) in xs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let mut next = vec![0u64; basis.len() + 1];
                for (d, &c) in basis.iter().enumerate() {
                    next[d + 1] = f.add(next[d + 1], c);
                    next[d] = f.sub(next[d], f.mul(c, xj));
                }
                basis = next;
                denom = f.mul(denom, f.sub(xs[i], xj));
            }
            let scale = f.mul(y.value(), f.inv(denom)?);
            for (d, c) in basis.into_iter().enumerate() {
                acc[d] = f.add(acc[d], f.mul(c, scale));
            }
        }
        Ok(Self::new(field, acc))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{self}] over F_{}", self.field.p())
    }
}
