//! Dense univariate polynomials in `q` with arbitrary-precision integer
//! coefficients.
//!
//! This is the raw material for the rational-function field ℚ(q): every
//! scalar in the library is a quotient of two of these. All arithmetic is
//! exact; there is no floating point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A polynomial in `q` with `BigInt` coefficients, stored densely:
/// `coeffs[i]` is the coefficient of `q^i`. Invariant: no trailing zero
/// coefficients, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = IntPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_i64(c: i64) -> Self {
        IntPoly::constant(BigInt::from(c))
    }

    /// The monomial `c * q^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    /// The variable `q`.
    pub fn q() -> Self {
        IntPoly::monomial(BigInt::one(), 1)
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// Content: the gcd of the coefficients, with the sign of the leading
    /// coefficient. Zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if self.leading_coeff().is_negative() {
            -g
        } else {
            g
        }
    }

    /// Divide all coefficients by the content, producing a primitive
    /// polynomial with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let c = self.content();
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a / &c).collect(),
        }
    }

    /// Exact division; panics if `other` does not divide `self` exactly.
    /// Only used internally where exactness is guaranteed (gcd cofactors,
    /// fraction-free elimination).
    pub fn div_exact(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return IntPoly::zero();
        }
        let dn = self.degree().unwrap();
        let dd = other.degree().unwrap();
        assert!(dn >= dd, "inexact polynomial division (degree)");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dn - dd + 1];
        let lead = other.leading_coeff();
        for k in (0..=dn - dd).rev() {
            let c = &rem[k + dd];
            if c.is_zero() {
                continue;
            }
            let (qc, r) = c.div_rem(&lead);
            assert!(r.is_zero(), "inexact polynomial division (leading coeff)");
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = &qc * b;
                rem[k + j] -= prod;
            }
            quot[k] = qc;
        }
        assert!(
            rem.iter().all(|c| c.is_zero()),
            "inexact polynomial division (remainder)"
        );
        IntPoly::from_coeffs(quot)
    }

    /// Pseudo-remainder: `lc(d)^(deg n - deg d + 1) * n  mod  d`.
    fn pseudo_rem(&self, d: &Self) -> Self {
        let mut r = self.clone();
        let dd = d.degree().expect("pseudo_rem by zero");
        let lead = d.leading_coeff();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let k = dr - dd;
            let lr = r.leading_coeff();
            r = r.mul_scalar(&lead).sub(&d.shift(k).mul_scalar(&lr));
        }
        r
    }

    /// Polynomial gcd via the primitive pseudo-remainder sequence.
    /// The result is primitive with positive leading coefficient
    /// (content is handled by the caller where it matters).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// Evaluate at an exact rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Evaluate at q = 1 (sum of coefficients).
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Coefficient reversal: `q^deg * p(1/q)`. Zero maps to zero.
    pub fn reverse(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        IntPoly::from_coeffs(coeffs)
    }

    /// Order of vanishing at q = 0 (index of lowest nonzero coefficient).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True iff the polynomial is `c * q^k` for a single term.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{}", a)?,
                1 if a.is_one() => write!(f, "q")?,
                1 => write!(f, "{}*q", a)?,
                _ if a.is_one() => write!(f, "q^{}", i)?,
                _ => write!(f, "{}*q^{}", a, i)?,
            }
        }
        Ok(())
    }
}
