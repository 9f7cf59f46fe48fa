//! Exact arithmetic for rank-one valuation theory over fields of rational
//! functions: Gauss-type valuations `v_{α,γ}`, pseudo-monotone sequences with
//! breadth and breadth ideal, polynomial closure of structured subsets,
//! membership in rings of integer-valued polynomials `Int(S,V)`, and a
//! certificate-producing decision procedure for the Prüfer property of
//! `Int(S,V)`.
//!
//! Everything is exact: values are arbitrary-precision rationals extended by
//! `+∞`, and no floating point appears anywhere.

pub mod error;
pub mod fields;
pub mod gauss;
pub mod intring;
pub mod literal;
pub mod expr;
pub mod poly;
pub mod prufer;
pub mod sequences;
pub mod sets;
pub mod values;

pub use error::Error;
pub use fields::{FieldElem, FieldKind, ValuedField};
pub use gauss::{GaussPoint, RingOrder};
pub use intring::{Criterion, MembershipVerdict};
pub use poly::{Poly, RatFunc};
pub use prufer::{Certificate, PruferVerdict, Rule, Witness};
pub use sequences::{SeqFamily, SeqKind};
pub use sets::{Atom, Ball, BallFlavor, SubsetDesc};
pub use values::{ExtValue, ValueGroup};
