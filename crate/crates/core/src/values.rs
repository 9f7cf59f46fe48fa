//! Extended rational values and value-group descriptors.
//!
//! Every valuation in this crate lands in [`ExtValue`]: an exact rational or
//! `+∞`, totally ordered with `∞` maximal and absorbing under addition.
//! [`ValueGroup`] describes the two value-group shapes the library
//! instantiates, `(1/e)·ℤ` and `ℚ`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact rational number or `+∞`. Finite values are kept in lowest terms
/// with positive denominator (enforced by `BigRational`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtValue {
    Finite(BigRational),
    Infinity,
}

impl ExtValue {
    pub fn zero() -> Self {
        ExtValue::Finite(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        ExtValue::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExtValue::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtValue::Infinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtValue::Finite(q) => Some(q),
            ExtValue::Infinity => None,
        }
    }

    /// Exact sum; `∞` absorbs.
    pub fn add(&self, other: &ExtValue) -> ExtValue {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a + b),
            _ => ExtValue::Infinity,
        }
    }

    /// Exact difference. Defined only when the subtrahend is finite;
    /// `∞ - finite = ∞`.
    pub fn sub(&self, other: &ExtValue) -> Result<ExtValue> {
        match (self, other) {
            (_, ExtValue::Infinity) => Err(Error::NotAnElement),
            (ExtValue::Infinity, _) => Ok(ExtValue::Infinity),
            (ExtValue::Finite(a), ExtValue::Finite(b)) => Ok(ExtValue::Finite(a - b)),
        }
    }

    /// `k · self` for a nonnegative integer `k`. `0 · ∞ = ∞` here: the scale
    /// factor is a polynomial degree and `∞` only ever arises from the zero
    /// coefficient, whose term must stay absorbing.
    pub fn scaled(&self, k: usize) -> ExtValue {
        match self {
            ExtValue::Finite(q) => {
                ExtValue::Finite(q * BigRational::from_integer(BigInt::from(k)))
            }
            ExtValue::Infinity => ExtValue::Infinity,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            ExtValue::Finite(q) => !q.is_negative(),
            ExtValue::Infinity => true,
        }
    }
}

impl PartialOrd for ExtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtValue::Infinity, ExtValue::Infinity) => Ordering::Equal,
            (ExtValue::Infinity, ExtValue::Finite(_)) => Ordering::Greater,
            (ExtValue::Finite(_), ExtValue::Infinity) => Ordering::Less,
            (ExtValue::Finite(a), ExtValue::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(q) => write!(f, "{q}"),
            ExtValue::Infinity => write!(f, "inf"),
        }
    }
}

/// Least element of a nonempty list, `∞` maximal.
pub fn ev_min(values: &[ExtValue]) -> Result<ExtValue> {
    values.iter().min().cloned().ok_or(Error::EmptyList)
}

/// Exact sum of two values; `∞` absorbs.
pub fn ev_add(a: &ExtValue, b: &ExtValue) -> ExtValue {
    a.add(b)
}

/// The value group of a valuation: either `(1/e)·ℤ` or all of `ℚ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueGroup {
    /// `(1/e)·ℤ` for a positive integer `e`; `e = 1` is `ℤ` itself.
    CyclicScaled(u64),
    /// The divisible hull `ℚ`.
    FullRationals,
}

impl ValueGroup {
    pub fn integers() -> Self {
        ValueGroup::CyclicScaled(1)
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, ValueGroup::CyclicScaled(_))
    }

    /// Whether the finite value `q` lies in the group. `∞` is rejected.
    pub fn contains(&self, q: &ExtValue) -> Result<bool> {
        let q = q.as_finite().ok_or(Error::NotAnElement)?;
        Ok(match self {
            ValueGroup::CyclicScaled(e) => {
                (q * BigRational::from_integer(BigInt::from(*e))).is_integer()
            }
            ValueGroup::FullRationals => true,
        })
    }

    /// Whether `n·q` lies in the group for some positive integer `n`.
    ///
    /// For rational `q` over the supported groups this always holds (take `n`
    /// to be the denominator of `q·e`); the predicate is exposed because the
    /// residual-transcendence criterion is stated in exactly these terms.
    pub fn is_torsion_over(&self, q: &ExtValue) -> Result<bool> {
        let _ = q.as_finite().ok_or(Error::NotAnElement)?;
        Ok(true)
    }

    /// Smallest witness `n ≥ 1` with `n·q` in the group.
    pub fn torsion_order(&self, q: &ExtValue) -> Result<BigInt> {
        let q = q.as_finite().ok_or(Error::NotAnElement)?;
        Ok(match self {
            ValueGroup::CyclicScaled(e) => {
                (q * BigRational::from_integer(BigInt::from(*e))).denom().clone()
            }
            ValueGroup::FullRationals => BigInt::one(),
        })
    }

    /// Least group element strictly above `q`, when the group is discrete.
    /// Over `ℚ` there is no such element.
    pub fn min_above(&self, q: &BigRational) -> Option<BigRational> {
        match self {
            ValueGroup::CyclicScaled(e) => {
                let e = BigRational::from_integer(BigInt::from(*e));
                Some((q * &e).floor().add_one() / e)
            }
            ValueGroup::FullRationals => None,
        }
    }

    /// Greatest group element strictly below `q`, when the group is discrete.
    pub fn max_below(&self, q: &BigRational) -> Option<BigRational> {
        match self {
            ValueGroup::CyclicScaled(e) => {
                let e = BigRational::from_integer(BigInt::from(*e));
                Some(((q * &e).ceil() - BigRational::one()) / e)
            }
            ValueGroup::FullRationals => None,
        }
    }

    /// Greatest group element `≤ q` (identity over `ℚ`).
    pub fn floor_to(&self, q: &BigRational) -> BigRational {
        match self {
            ValueGroup::CyclicScaled(e) => {
                let e = BigRational::from_integer(BigInt::from(*e));
                (q * &e).floor() / e
            }
            ValueGroup::FullRationals => q.clone(),
        }
    }

    /// Least group element `≥ q` (identity over `ℚ`).
    pub fn ceil_to(&self, q: &BigRational) -> BigRational {
        match self {
            ValueGroup::CyclicScaled(e) => {
                let e = BigRational::from_integer(BigInt::from(*e));
                (q * &e).ceil() / e
            }
            ValueGroup::FullRationals => q.clone(),
        }
    }
}

trait AddOne {
    fn add_one(self) -> Self;
}

impl AddOne for BigRational {
    fn add_one(self) -> Self {
        self + BigRational::one()
    }
}

/// Cardinality of a residue field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueCard {
    Finite(u64),
    Infinite,
}

impl ResidueCard {
    pub fn is_finite(&self) -> bool {
        matches!(self, ResidueCard::Finite(_))
    }

    pub fn at_least(&self, n: u64) -> bool {
        match self {
            ResidueCard::Finite(m) => *m >= n,
            ResidueCard::Infinite => true,
        }
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
