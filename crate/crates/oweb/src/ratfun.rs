//! Exact arithmetic in the field ℚ(q) of rational functions in `q`.
//!
//! [`RatFun`] is a quotient of two integer-coefficient polynomials kept in a
//! full canonical form, so equality is plain structural comparison. Laurent
//! polynomials such as `q + q^-1` are represented with a pure power of `q`
//! in the denominator and printed in Laurent style.

use crate::poly::IntPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatFunError {
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("not regular at q=1")]
    PoleAtOne,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A rational function in `q` over ℚ, in canonical form:
/// gcd(num, den) = 1, the contents of num and den share no factor, and the
/// denominator has positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: IntPoly,
    den: IntPoly,
}

impl RatFun {
    /// Build the canonical representative of `num / den`.
    pub fn normalize(num: IntPoly, den: IntPoly) -> Result<Self, RatFunError> {
        if den.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun {
                num: IntPoly::zero(),
                den: IntPoly::one(),
            });
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        // Reduce the shared integer content.
        let c = {
            use num_integer::Integer;
            num.content().abs().gcd(&den.content().abs())
        };
        if !c.is_one() {
            let c = IntPoly::constant(c);
            num = num.div_exact(&c);
            den = den.div_exact(&c);
        }
        if den.leading_coeff().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(RatFun { num, den })
    }

    fn make(num: IntPoly, den: IntPoly) -> Self {
        RatFun::normalize(num, den).expect("nonzero denominator")
    }

    pub fn zero() -> Self {
        RatFun {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun {
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        RatFun {
            num: IntPoly::from_i64(n),
            den: IntPoly::one(),
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        RatFun {
            num: IntPoly::constant(n),
            den: IntPoly::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        RatFun::make(
            IntPoly::constant(r.numer().clone()),
            IntPoly::constant(r.denom().clone()),
        )
    }

    /// The variable `q`.
    pub fn q() -> Self {
        RatFun {
            num: IntPoly::q(),
            den: IntPoly::one(),
        }
    }

    /// `q^k` for any integer `k` (negative exponents allowed).
    pub fn q_pow(k: i64) -> Self {
        if k >= 0 {
            RatFun {
                num: IntPoly::monomial(BigInt::one(), k as usize),
                den: IntPoly::one(),
            }
        } else {
            RatFun {
                num: IntPoly::one(),
                den: IntPoly::monomial(BigInt::one(), (-k) as usize),
            }
        }
    }

    pub fn numer(&self) -> &IntPoly {
        &self.num
    }

    pub fn denom(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &RatFun::one()
    }

    pub fn try_inv(&self) -> Result<Self, RatFunError> {
        RatFun::normalize(self.den.clone(), self.num.clone())
    }

    pub fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero rational function")
    }

    pub fn pow(&self, k: i64) -> Self {
        if k < 0 {
            return self.inv().pow(-k);
        }
        let mut acc = RatFun::one();
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// The bar involution `q ↦ q⁻¹`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return RatFun::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        // f(1/q) = (rev(num) * q^dd) / (rev(den) * q^dn)
        RatFun::make(self.num.reverse().shift(dd), self.den.reverse().shift(dn))
    }

    /// Exact evaluation at q = 1. Canonical form guarantees that a vanishing
    /// denominator at 1 is a genuine pole (the numerator cannot also vanish).
    pub fn eval_at_one(&self) -> Result<BigRational, RatFunError> {
        let d = self.den.eval_one();
        if d.is_zero() {
            return Err(RatFunError::PoleAtOne);
        }
        Ok(BigRational::new(self.num.eval_one(), d))
    }

    /// True iff the denominator does not vanish at q = 1.
    pub fn regular_at_one(&self) -> bool {
        !self.den.eval_one().is_zero()
    }

    /// Evaluate at an arbitrary rational point; errors on poles.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational, RatFunError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, other: &RatFun) -> RatFun {
        RatFun::make(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, other: &RatFun) -> RatFun {
        RatFun::make(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, other: &RatFun) -> RatFun {
        RatFun::make(self.num.mul(&other.num), self.den.mul(&other.den))
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, other: &RatFun) -> RatFun {
        assert!(!other.is_zero(), "division by zero rational function");
        RatFun::make(self.num.mul(&other.den), self.den.mul(&other.num))
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for RatFun {
            type Output = RatFun;
            fn $method(self, other: RatFun) -> RatFun {
                $trait::$method(&self, &other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
}

impl One for RatFun {
    fn one() -> Self {
        RatFun::one()
    }
}

impl serde::Serialize for RatFun {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

impl RatFun {
    /// Laurent-style term list `(exponent, coefficient)` in descending
    /// exponent order, if the denominator is a pure power of `q` times a
    /// positive integer. Coefficients are exact rationals.
    fn laurent_terms(&self) -> Option<Vec<(i64, BigRational)>> {
        if self.is_zero() {
            return Some(Vec::new());
        }
        if !self.den.is_monomial() {
            return None;
        }
        let k = self.den.valuation().unwrap() as i64;
        let c = self.den.leading_coeff();
        let mut terms = Vec::new();
        for (i, a) in self.num.coeffs().iter().enumerate().rev() {
            if !a.is_zero() {
                terms.push((i as i64 - k, BigRational::new(a.clone(), c.clone())));
            }
        }
        Some(terms)
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &BigRational, with_var: bool) -> fmt::Result {
    if c.is_one() && with_var {
        return Ok(());
    }
    if c.denom().is_one() {
        write!(f, "{}", c.numer())?;
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())?;
    }
    if with_var {
        write!(f, "*")?;
    }
    Ok(())
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some(terms) = self.laurent_terms() {
            let mut first = true;
            for (e, c) in terms {
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
                match e {
                    0 => write_coeff(f, &a, false)?,
                    1 => {
                        write_coeff(f, &a, true)?;
                        write!(f, "q")?;
                    }
                    _ => {
                        write_coeff(f, &a, true)?;
                        write!(f, "q^{}", e)?;
                    }
                }
            }
            Ok(())
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: &str) -> RatFunError {
        RatFunError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, RatFunError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn expr(&mut self) -> Result<RatFun, RatFunError> {
        let mut acc = if self.eat(b'-') {
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFun, RatFunError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.factor()?;
            } else if self.eat(b'/') {
                let d = self.factor()?;
                if d.is_zero() {
                    return Err(RatFunError::DivisionByZero);
                }
                acc = &acc / &d;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFun, RatFunError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let negative = self.eat(b'-');
            let e = self.integer()?;
            let e: i64 = e
                .try_into()
                .map_err(|_| self.err("exponent out of range"))?;
            let e = if negative { -e } else { e };
            if base.is_zero() && e < 0 {
                return Err(RatFunError::DivisionByZero);
            }
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatFun, RatFunError> {
        match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                Ok(RatFun::q())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(RatFun::from_bigint(self.integer()?)),
            _ => Err(self.err("expected 'q', integer, or '('")),
        }
    }

    fn parse_all(&mut self) -> Result<RatFun, RatFunError> {
        let e = self.expr()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(e)
    }
}

impl std::str::FromStr for RatFun {
    type Err = RatFunError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser::new(s).parse_all()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RatFun {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_cancels_common_factors() {
        // (q^2 - 1)/(q - 1) = q + 1
        assert_eq!(rf("(q^2 - 1)/(q - 1)"), rf("q + 1"));
        // zero numerator
        assert_eq!(rf("0/(q^3 + 2)"), RatFun::zero());
        // idempotence on canonical input
        let f = rf("(q^2 - 1)/q");
        assert_eq!(
            RatFun::normalize(f.numer().clone(), f.denom().clone()).unwrap(),
            f
        );
    }

    #[test]
    fn normalize_scaling_invariance() {
        let a = rf("q^2 + 1") ;
        let b = rf("q^3 - q");
        let c = rf("3*q^2 - 3");
        assert_eq!(&a / &b, &(&a * &c) / &(&b * &c));
    }

    #[test]
    fn eval_at_one_basics() {
        // (q^2 - q^-2)/(q - q^-1) = q + q^-1 -> 2
        let f = &(rf("q^2") - rf("q^-2")) / &(rf("q") - rf("q^-1"));
        assert_eq!(f.eval_at_one().unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(rf("1/(q-1)").eval_at_one(), Err(RatFunError::PoleAtOne));
    }

    #[test]
    fn bar_involution() {
        assert_eq!(rf("q^2").bar(), rf("q^-2"));
        assert_eq!(rf("q+1").bar(), rf("(q+1)/q"));
        for s in ["q^3 - 2", "(q^2+q+1)/(q-3)", "q^-5 + q^5"] {
            let f = rf(s);
            assert_eq!(f.bar().bar(), f);
        }
        // ring homomorphism on a sample
        let (a, b) = (rf("q^2 - q^-1"), rf("(q+2)/(q-2)"));
        assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
    }

    #[test]
    fn laurent_display() {
        let f = rf("q^2 + 1 + q^-2");
        assert_eq!(f.to_string(), "q^2 + 1 + q^-2");
        assert_eq!(rf("-q + q^-1").to_string(), "-q + q^-1");
        assert_eq!(rf("(q^2+1)/2").to_string(), "1/2*q^2 + 1/2");
        assert_eq!(RatFun::zero().to_string(), "0");
    }

    #[test]
    fn display_parse_roundtrip() {
        for s in [
            "q^2 + 1 + q^-2",
            "(q^4 - 1)/(q^3 + q + 1)",
            "-5*q^-3 + 2",
            "1/2*q - 1/2*q^-1",
            "0",
        ] {
            let f = rf(s);
            assert_eq!(rf(&f.to_string()), f, "roundtrip failed for {}", s);
        }
    }

    #[test]
    fn field_ops() {
        let a = rf("(q^2+1)/(q-1)");
        let b = rf("q^-3 - 7");
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(&a - &a, RatFun::zero());
        assert_eq!(&a * &a.inv(), RatFun::one());
        assert_eq!(a.pow(3), &(&a * &a) * &a);
        assert_eq!(a.pow(-2), (&a * &a).inv());
    }
}
