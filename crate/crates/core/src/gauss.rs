//! Gauss-type valuations on `K[X]` and `K(X)`.
//!
//! A [`GaussPoint`] is a pair `(center, radius)` over a valued field, possibly
//! a quadratic extension of the ground field. It induces the valuation
//! `f ↦ min_i v(a_i) + i·radius` on the Taylor coefficients `a_i` of `f` at
//! the center, and the valuation ring cut out in `K[X]` is ordered exactly
//! like the closed balls `B(center, radius)`: one ring contains another iff
//! its ball contains the other's.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fields::{FieldElem, ValuedField};
use crate::poly::{Poly, RatFunc};
use crate::values::{ev_min, ExtValue, ValueGroup};

/// The datum `(center, radius)` of a Gauss valuation over `field`.
/// The radius is a finite rational value.
#[derive(Debug, Clone)]
pub struct GaussPoint {
    pub field: ValuedField,
    pub center: FieldElem,
    pub radius: BigRational,
}

/// Order of two Gauss rings `V_{α,γ} ∩ K[X]` over the same base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOrder {
    /// The first ring is properly contained in the second.
    Subset,
    /// The first ring properly contains the second.
    Superset,
    Equal,
    Incomparable,
}

impl RingOrder {
    pub fn as_str(&self) -> &'static str {
        match self {
            RingOrder::Subset => "Subset",
            RingOrder::Superset => "Superset",
            RingOrder::Equal => "Equal",
            RingOrder::Incomparable => "Incomparable",
        }
    }
}

impl GaussPoint {
    pub fn new(field: ValuedField, center: FieldElem, radius: BigRational) -> Self {
        GaussPoint { field, center, radius }
    }

    pub fn radius_value(&self) -> ExtValue {
        ExtValue::Finite(self.radius.clone())
    }

    /// `min_i v(a_i) + i·radius` over the Taylor coefficients of `f` at the
    /// center. The zero polynomial gets `∞`. Ground-field polynomials are
    /// coerced coefficient-wise into the extension.
    pub fn value_poly(&self, f: &Poly) -> Result<ExtValue> {
        let f = f.coerce(&self.field)?;
        if f.is_zero() {
            return Ok(ExtValue::Infinity);
        }
        let coeffs = f.taylor_at(&self.field, &self.center)?;
        let mut vals = Vec::with_capacity(coeffs.len());
        for (i, a) in coeffs.iter().enumerate() {
            let v = self.field.valuation(a)?;
            vals.push(v.add(&ExtValue::Finite(
                self.radius.clone() * BigRational::from_integer(i.into()),
            )));
        }
        ev_min(&vals)
    }

    /// Value of a rational function: `value(num) - value(den)`.
    pub fn value_ratfunc(&self, f: &RatFunc) -> Result<ExtValue> {
        let num = self.value_poly(&f.num)?;
        let den = self.value_poly(&f.den)?;
        if den.is_infinite() {
            return Err(Error::DivisionByZero);
        }
        num.sub(&den)
    }

    /// Whether the induced valuation is residually transcendental over the
    /// given value group, i.e. the radius has finite order over it. Always
    /// true for rational radii over the supported groups.
    pub fn is_residually_transcendental(&self, group: &ValueGroup) -> bool {
        group
            .is_torsion_over(&self.radius_value())
            .expect("radius is finite")
    }

    /// Whether `V[X] ⊂ V_{α,γ}`: the center is integral and the radius
    /// nonnegative.
    pub fn is_overring_of_vx(&self) -> Result<bool> {
        use num_traits::Signed;
        let vc = self.field.valuation(&self.center)?;
        Ok(vc.is_nonnegative() && !self.radius.is_negative())
    }

    /// Order of `V_{α₁,γ₁} ∩ K[X]` against `V_{α₂,γ₂} ∩ K[X]` over the same
    /// base: containment of the first in the second holds iff `γ₁ ≤ γ₂` and
    /// `v(α₁-α₂) ≥ γ₁`, equivalently iff `B(α₁,γ₁) ⊇ B(α₂,γ₂)`.
    pub fn compare_rings(&self, other: &GaussPoint) -> Result<RingOrder> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        let diff = self.field.sub(&self.center, &other.center)?;
        let dist = self.field.valuation(&diff)?;
        let fwd = self.radius <= other.radius && dist >= self.radius_value();
        let bwd = other.radius <= self.radius && dist >= other.radius_value();
        Ok(match (fwd, bwd) {
            (true, true) => RingOrder::Equal,
            (true, false) => RingOrder::Subset,
            (false, true) => RingOrder::Superset,
            (false, false) => RingOrder::Incomparable,
        })
    }
}
