//! Univariate polynomials with big-integer or rational coefficients.

use std::fmt;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Integer polynomial, coefficients in ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// Coefficient of x^k (zero past the degree).
    pub fn coeff(&self, k: usize) -> Integer {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
        }
        g
    }

    pub fn primitive_part(&self) -> Result<Self> {
        primitive_part(self)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| Integer::from(-c)).collect() }
    }

    pub fn norm1(&self) -> Integer {
        self.coeffs.iter().map(|c| Integer::from(c.abs_ref())).sum()
    }

    pub fn norm2_squared(&self) -> Integer {
        self.coeffs.iter().map(|c| Integer::from(c.square_ref())).sum()
    }

    pub fn max_abs(&self) -> Integer {
        self.coeffs.iter().map(|c| Integer::from(c.abs_ref())).max().unwrap_or_default()
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        Self::new(out)
    }

    /// Exact quotient when `divisor` divides `self` over the integers.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::default());
        }
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return None;
        }
        let mut q = vec![Integer::new(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &rem[k + dd];
            if !top.is_divisible(lead) {
                return None;
            }
            let t = Integer::from(top / lead);
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= Integer::from(&t * d);
            }
            q[k] = t;
        }
        rem.iter().all(|r| r.is_zero()).then(|| Self::new(q))
    }

    /// One decimal coefficient per line, ascending degree.
    pub fn to_lines(&self) -> String {
        self.coeffs.iter().map(|c| format!("{c}\n")).collect()
    }

    pub fn from_lines(s: &str) -> Result<Self> {
        s.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.parse::<Integer>().map_err(|e| Error::Parse(format!("{l:?}: {e}"))))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

pub fn primitive_part(p: &IntPolynomial) -> Result<IntPolynomial> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("primitive part of the zero polynomial".into()));
    }
    let mut g = p.content();
    if p.leading().unwrap().cmp0().is_lt() {
        g = -g;
    }
    Ok(IntPolynomial::new(p.coeffs.iter().map(|c| Integer::from(c.div_exact_ref(&g))).collect()))
}

impl fmt::Display for IntPolynomial {
    /// Descending-degree text such as `3x^2 - x + 7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.cmp0().is_lt();
            let mag = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag == 1) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Rational polynomial, ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RatPolynomial {
    coeffs: Vec<Rational>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The integer polynomial when every coefficient is integral.
    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .map(|c| (*c.denom() == 1).then(|| c.numer().clone()))
            .collect::<Option<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    /// Clears denominators and takes the primitive part.
    pub fn primitive(&self) -> Result<IntPolynomial> {
        let mut l = Integer::from(1);
        for c in &self.coeffs {
            l.lcm_mut(c.denom());
        }
        let ints = self
            .coeffs
            .iter()
            .map(|c| Integer::from(c.numer() * Integer::from(&l / c.denom())))
            .collect();
        primitive_part(&IntPolynomial::new(ints))
    }

    pub fn scaled(&self, t: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| Rational::from(c * t)).collect())
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

impl From<&IntPolynomial> for RatPolynomial {
    fn from(p: &IntPolynomial) -> Self {
        Self::new(p.coeffs().iter().map(|c| Rational::from(c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EXAMPLE: [i64; 7] = [-12312, 14346, 210897, -125796, -844359, -220388, 374752];

    #[test]
    fn primitive_part_examples() {
        let p = IntPolynomial::from_i64(&EXAMPLE);
        let scaled = IntPolynomial::new(p.coeffs().iter().map(|c| Integer::from(c * 243)).collect());
        assert_eq!(scaled.primitive_part().unwrap(), p);
        assert_eq!(IntPolynomial::from_i64(&[4, -2]).primitive_part().unwrap(), IntPolynomial::from_i64(&[-2, 1]));
        assert_eq!(IntPolynomial::from_i64(&[3, 9, 6]).primitive_part().unwrap(), IntPolynomial::from_i64(&[1, 3, 2]));
        assert!(IntPolynomial::default().primitive_part().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(IntPolynomial::from_i64(&[-2, 4, 1]).to_string(), "x^2 + 4x - 2");
        assert_eq!(IntPolynomial::from_i64(&[0, -1]).to_string(), "-x");
        assert_eq!(IntPolynomial::from_i64(&EXAMPLE).to_string(),
            "374752x^6 - 220388x^5 - 844359x^4 - 125796x^3 + 210897x^2 + 14346x - 12312");
    }

    #[test]
    fn lines_roundtrip_and_division() {
        let p = IntPolynomial::from_i64(&EXAMPLE);
        assert_eq!(IntPolynomial::from_lines(&p.to_lines()).unwrap(), p);
        let q = IntPolynomial::from_i64(&[1, 1]);
        assert_eq!(p.mul(&q).div_exact(&q).unwrap(), p);
        assert!(p.div_exact(&q).is_none());
    }

    #[test]
    fn rational_primitive() {
        let r = RatPolynomial::new(vec![Rational::from((1, 2)), Rational::from((-3, 4))]);
        assert_eq!(r.primitive().unwrap(), IntPolynomial::from_i64(&[-2, 3]));
    }

    proptest! {
        #[test]
        fn primitive_is_idempotent_and_keeps_roots(
            c in prop::collection::vec(-50i64..50, 1..6),
            k in 1i64..20,
            r in -5i64..5,
        ) {
            // force root r by multiplying with (x - r)
            let base = IntPolynomial::from_i64(&c).mul(&IntPolynomial::from_i64(&[-r, 1]));
            prop_assume!(!base.is_zero());
            let p = IntPolynomial::new(base.coeffs().iter().map(|v| Integer::from(v * k)).collect());
            let pp = p.primitive_part().unwrap();
            prop_assert_eq!(pp.primitive_part().unwrap(), pp.clone());
            prop_assert_eq!(pp.content(), 1);
            prop_assert!(pp.leading().unwrap().cmp0().is_gt());
            prop_assert!(pp.eval_rational(&Rational::from(r)).is_zero());
        }
    }
}
