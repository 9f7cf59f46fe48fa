//! Exact polynomial and rational-function arithmetic over any [`ValuedField`],
//! including Taylor recentering and the forward-difference expansion in the
//! binomial basis.

use crate::error::{Error, Result};
use crate::fields::{FieldElem, ValuedField};

/// Dense polynomial, coefficients lowest degree first. The leading
/// coefficient is nonzero unless the polynomial is zero (empty list).
#[derive(Debug, Clone)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

/// Quotient of two polynomials with nonzero denominator. No gcd cancellation
/// is performed: every operation on fractions is representative-independent.
#[derive(Debug, Clone)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(field: &ValuedField, c: FieldElem) -> Self {
        Poly { coeffs: vec![c] }.normalized(field)
    }

    pub fn from_coeffs(field: &ValuedField, coeffs: Vec<FieldElem>) -> Self {
        Poly { coeffs }.normalized(field)
    }

    /// The monomial `X`.
    pub fn x(field: &ValuedField) -> Self {
        Poly { coeffs: vec![field.zero(), field.one()] }
    }

    fn normalized(mut self, field: &ValuedField) -> Self {
        while matches!(self.coeffs.last(), Some(c) if field.is_zero(c)) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, field: &ValuedField, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn add(&self, field: &ValuedField, other: &Poly) -> Result<Poly> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.add(&self.coeff(field, i), &other.coeff(field, i))?);
        }
        Ok(Poly { coeffs: out }.normalized(field))
    }

    pub fn neg(&self, field: &ValuedField) -> Result<Poly> {
        let coeffs = self.coeffs.iter().map(|c| field.neg(c)).collect::<Result<_>>()?;
        Ok(Poly { coeffs })
    }

    pub fn sub(&self, field: &ValuedField, other: &Poly) -> Result<Poly> {
        self.add(field, &other.neg(field)?)
    }

    pub fn mul(&self, field: &ValuedField, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero());
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(&out[i + j], &field.mul(a, b)?)?;
            }
        }
        Ok(Poly { coeffs: out }.normalized(field))
    }

    pub fn scale(&self, field: &ValuedField, c: &FieldElem) -> Result<Poly> {
        let coeffs = self.coeffs.iter().map(|a| field.mul(a, c)).collect::<Result<_>>()?;
        Ok(Poly { coeffs }.normalized(field))
    }

    pub fn pow(&self, field: &ValuedField, k: usize) -> Result<Poly> {
        let mut acc = Poly::constant(field, field.one());
        for _ in 0..k {
            acc = acc.mul(field, self)?;
        }
        Ok(acc)
    }

    /// Exact value `f(s)` by Horner's rule.
    pub fn evaluate(&self, field: &ValuedField, s: &FieldElem) -> Result<FieldElem> {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, s)?, c)?;
        }
        Ok(acc)
    }

    /// Coefficients `a_0, …, a_n` of `f` recentered at `center`, so that
    /// `f(X) = Σ a_i (X - center)^i`, via repeated synthetic division.
    pub fn taylor_at(&self, field: &ValuedField, center: &FieldElem) -> Result<Vec<FieldElem>> {
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(work.len());
        while !work.is_empty() {
            // One synthetic division of `work` by (X - center): the remainder
            // is the next Taylor coefficient, the quotient feeds the next round.
            let n = work.len();
            let mut quotient = vec![field.zero(); n - 1];
            let mut acc = field.zero();
            for k in (0..n).rev() {
                acc = field.add(&field.mul(&acc, center)?, &work[k])?;
                if k > 0 {
                    quotient[k - 1] = acc.clone();
                }
            }
            out.push(acc);
            work = quotient;
        }
        Ok(out)
    }

    /// Coefficients `c_0, …, c_d` with `f = Σ c_n·binomial(X, n)`, computed as
    /// iterated forward differences `c_n = Δⁿf(0)`.
    pub fn finite_differences(&self, field: &ValuedField) -> Result<Vec<FieldElem>> {
        if self.is_zero() {
            return Ok(vec![field.zero()]);
        }
        let d = self.degree().expect("nonzero");
        let mut row: Vec<FieldElem> = (0..=d as i64)
            .map(|k| self.evaluate(field, &field.int_elem(k)))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            out.push(row[0].clone());
            for i in 0..row.len() - 1 {
                row[i] = field.sub(&row[i + 1], &row[i])?;
            }
            row.pop();
        }
        Ok(out)
    }

    /// Map coefficients into an extension field.
    pub fn coerce(&self, target: &ValuedField) -> Result<Poly> {
        let coeffs = self.coeffs.iter().map(|c| target.coerce(c)).collect::<Result<_>>()?;
        Ok(Poly { coeffs })
    }

    pub fn eq(&self, field: &ValuedField, other: &Poly) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| field.eq_elems(a, b))
    }
}

impl RatFunc {
    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly { coeffs: Vec::new() } }
    }

    pub fn new(field: &ValuedField, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let _ = field;
        Ok(RatFunc { num, den })
    }

    /// When the denominator is a nonzero constant, fold it into the numerator.
    pub fn as_poly(&self, field: &ValuedField) -> Option<Poly> {
        match self.den.degree() {
            Some(0) => {
                let inv = field.div(&field.one(), &self.den.coeffs[0]).ok()?;
                self.num.scale(field, &inv).ok()
            }
            _ => None,
        }
    }

    pub fn add(&self, field: &ValuedField, other: &RatFunc) -> Result<RatFunc> {
        let num = self
            .num
            .mul(field, &other.den)?
            .add(field, &other.num.mul(field, &self.den)?)?;
        RatFunc::new(field, num, self.den.mul(field, &other.den)?)
    }

    pub fn sub(&self, field: &ValuedField, other: &RatFunc) -> Result<RatFunc> {
        self.add(field, &RatFunc { num: other.num.neg(field)?, den: other.den.clone() })
    }

    pub fn mul(&self, field: &ValuedField, other: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(
            field,
            self.num.mul(field, &other.num)?,
            self.den.mul(field, &other.den)?,
        )
    }

    pub fn div(&self, field: &ValuedField, other: &RatFunc) -> Result<RatFunc> {
        if other.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(
            field,
            self.num.mul(field, &other.den)?,
            self.den.mul(field, &other.num)?,
        )
    }

    /// Exact value at `s`; the denominator must not vanish there.
    pub fn evaluate(&self, field: &ValuedField, s: &FieldElem) -> Result<FieldElem> {
        let den = self.den.evaluate(field, s)?;
        if field.is_zero(&den) {
            return Err(Error::PoleAtPoint);
        }
        field.div(&self.num.evaluate(field, s)?, &den)
    }

    pub fn coerce(&self, target: &ValuedField) -> Result<RatFunc> {
        Ok(RatFunc { num: self.num.coerce(target)?, den: self.den.coerce(target)? })
    }
}

impl RatFunc {
    /// Construct from a polynomial with denominator 1 in the given field.
    pub fn poly(field: &ValuedField, p: Poly) -> Self {
        RatFunc { num: p, den: Poly::constant(field, field.one()) }
    }
}
