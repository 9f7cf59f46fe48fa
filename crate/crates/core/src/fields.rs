//! Concrete rank-one valued fields with exact element arithmetic and exact
//! valuation computation.
//!
//! Four field kinds are supported:
//!
//! * `qp:p` — the rationals with the `p`-adic valuation, `v(p) = 1`;
//! * `quad:d=..,p=..[,r0=..]` — the quadratic extension `ℚ(√d)` of `qp:p`.
//!   When `p` splits (`d` a nonzero square mod `p`, `p` odd, `p ∤ d`) the two
//!   extensions of the `p`-adic valuation are told apart by the declared
//!   residue `r0` of `√d` mod `p`, and values are computed by Hensel lifting;
//! * `tadic` — `ℚ(t)` with the `t`-adic valuation, `v(t) = 1`;
//! * `hahn[:fp=p]` — quotients of generalized polynomials `Σ c·t^e` with
//!   rational exponents, over `ℚ` or `𝔽_p` coefficients; `v` is the least
//!   exponent of the numerator minus the least exponent of the denominator.
//!
//! Elements are immutable and operations are pure.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::values::{ExtValue, ResidueCard, ValueGroup};

/// How a rational prime sits in a quadratic extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadSplitting {
    /// `d` is a nonzero square mod `p`: two extensions, selected by `r0`.
    Split,
    /// `d` is a non-square mod `p`: one unramified extension, residue degree 2.
    Inert,
    /// `p ∥ d`: one ramified extension, value group `(1/2)ℤ`.
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldKind {
    PadicRat {
        p: u64,
    },
    QuadExt {
        d: BigInt,
        p: u64,
        splitting: QuadSplitting,
        /// Residue of the adjoined root mod `p`; present exactly in the split case.
        branch: Option<u64>,
    },
    FuncFieldTadic,
    Hahn {
        /// `None` for `ℚ` coefficients, `Some(p)` for `𝔽_p`.
        fp: Option<u64>,
    },
}

/// A rank-one valued field: element arithmetic plus an exact valuation into
/// [`ExtValue`], with its value group, discreteness flag and residue-field
/// cardinality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedField {
    kind: FieldKind,
}

/// An element of one of the supported fields. The variant must match the
/// field kind; all arithmetic goes through [`ValuedField`] methods, which
/// check this.
#[derive(Debug, Clone)]
pub enum FieldElem {
    /// `qp:p` element.
    Rat(BigRational),
    /// `a + b·w` where `w` is the adjoined root of `d`.
    Quad(BigRational, BigRational),
    /// `tadic` or `hahn` element: a quotient of generalized polynomials.
    Series(SeriesFrac),
}

/// A generalized polynomial: finite support map exponent → nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenPoly(BTreeMap<BigRational, BigRational>);

/// A quotient of two generalized polynomials with nonzero denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesFrac {
    pub num: GenPoly,
    pub den: GenPoly,
}

impl GenPoly {
    pub fn zero() -> Self {
        GenPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::zero(), BigRational::one())
    }

    pub fn monomial(exp: BigRational, coeff: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !coeff.is_zero() {
            m.insert(exp, coeff);
        }
        GenPoly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.0.iter()
    }

    pub fn min_exp(&self) -> Option<&BigRational> {
        self.0.keys().next()
    }

    fn as_monomial(&self) -> Option<(&BigRational, &BigRational)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    fn add(&self, other: &GenPoly, fp: Option<u64>) -> GenPoly {
        let mut out = self.0.clone();
        for (e, c) in &other.0 {
            let entry = out.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
        }
        GenPoly(out).reduced(fp)
    }

    fn neg(&self, fp: Option<u64>) -> GenPoly {
        GenPoly(self.0.iter().map(|(e, c)| (e.clone(), -c)).collect()).reduced(fp)
    }

    fn mul(&self, other: &GenPoly, fp: Option<u64>) -> GenPoly {
        let mut out: BTreeMap<BigRational, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &other.0 {
                let e = e1 + e2;
                let entry = out.entry(e).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        GenPoly(out).reduced(fp)
    }

    fn scale(&self, c: &BigRational, fp: Option<u64>) -> GenPoly {
        GenPoly(self.0.iter().map(|(e, k)| (e.clone(), k * c)).collect()).reduced(fp)
    }

    /// Shift every exponent by `-e` (division by the monomial `t^e`).
    fn shift_exp(&self, e: &BigRational) -> GenPoly {
        GenPoly(self.0.iter().map(|(k, c)| (k - e, c.clone())).collect())
    }

    fn reduced(self, fp: Option<u64>) -> GenPoly {
        match fp {
            None => GenPoly(self.0.into_iter().filter(|(_, c)| !c.is_zero()).collect()),
            Some(p) => {
                let mut out = BTreeMap::new();
                for (e, c) in self.0 {
                    let r = reduce_mod_p(&c, p).expect("fp coefficient with invertible denominator");
                    if !r.is_zero() {
                        out.insert(e, r);
                    }
                }
                GenPoly(out)
            }
        }
    }
}

/// Canonical residue of a rational mod `p`, as an integer in `[0, p)`.
/// Fails when the denominator is divisible by `p`.
fn reduce_mod_p(c: &BigRational, p: u64) -> Result<BigRational> {
    let p_big = BigInt::from(p);
    let den_red = c.denom().mod_floor(&p_big);
    if den_red.is_zero() {
        return Err(Error::Parse(format!(
            "coefficient {c} has denominator divisible by {p}"
        )));
    }
    let inv = mod_inverse(&den_red, &p_big).expect("unit mod prime");
    let r = (c.numer().mod_floor(&p_big) * inv).mod_floor(&p_big);
    Ok(BigRational::from_integer(r))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else {
        None
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// `v_p` of a nonzero integer.
fn vp_int(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if r.is_zero() {
            v += 1;
            n = q;
        } else {
            return v;
        }
    }
}

fn vp_rational(q: &BigRational, p: u64) -> ExtValue {
    if q.is_zero() {
        return ExtValue::Infinity;
    }
    let v = vp_int(q.numer(), p) as i64 - vp_int(q.denom(), p) as i64;
    ExtValue::from_int(v)
}

/// Lift of the square root of `d` mod `p^k`, on the branch congruent to `r0`
/// mod `p`. Newton steps double the precision.
fn hensel_sqrt(d: &BigInt, p: u64, r0: u64, k: u32) -> BigInt {
    let p = BigInt::from(p);
    let target = p.pow(k);
    let mut modulus = p.clone();
    let mut r = BigInt::from(r0).mod_floor(&p);
    while modulus < target {
        modulus = (&modulus * &modulus).min(target.clone());
        let two_r_inv = mod_inverse(&(BigInt::from(2) * &r), &modulus)
            .expect("2r invertible: p odd and r a unit");
        r = (&r - (&r * &r - d) * two_r_inv).mod_floor(&modulus);
    }
    r
}

impl ValuedField {
    pub fn padic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadFieldSpec(format!("{p} is not prime")));
        }
        Ok(ValuedField { kind: FieldKind::PadicRat { p } })
    }

    pub fn tadic() -> Self {
        ValuedField { kind: FieldKind::FuncFieldTadic }
    }

    pub fn hahn() -> Self {
        ValuedField { kind: FieldKind::Hahn { fp: None } }
    }

    pub fn hahn_fp(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadFieldSpec(format!("{p} is not prime")));
        }
        Ok(ValuedField { kind: FieldKind::Hahn { fp: Some(p) } })
    }

    /// Quadratic extension `ℚ(√d)` of `qp:p`. `branch` is the residue of the
    /// adjoined root mod `p`; it is required in the split case and must be
    /// absent otherwise. `p = 2` and `p² | d` are rejected.
    pub fn quad(d: BigInt, p: u64, branch: Option<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadFieldSpec(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(Error::BadFieldSpec("p = 2 is not supported for quad".into()));
        }
        if p >= 1 << 31 {
            return Err(Error::BadFieldSpec("p too large for quad".into()));
        }
        if d.is_zero() || is_perfect_square(&d) {
            return Err(Error::BadFieldSpec(format!("d = {d} is a square")));
        }
        let vpd = vp_int(&d, p);
        let splitting = if vpd == 0 {
            let p_big = BigInt::from(p);
            let exp = (p - 1) / 2;
            let legendre = d.mod_floor(&p_big).modpow(&BigInt::from(exp), &p_big);
            if legendre.is_one() {
                QuadSplitting::Split
            } else {
                QuadSplitting::Inert
            }
        } else if vpd == 1 {
            QuadSplitting::Ramified
        } else {
            return Err(Error::BadFieldSpec(format!("p² divides d = {d}")));
        };
        match splitting {
            QuadSplitting::Split => {
                let r0 = branch.ok_or(Error::BranchRequired)?;
                let p_big = BigInt::from(p);
                let check = (BigInt::from(r0) * BigInt::from(r0) - &d).mod_floor(&p_big);
                if !check.is_zero() {
                    return Err(Error::BadFieldSpec(format!("r0 = {r0} is not a root of d mod {p}")));
                }
            }
            _ => {
                if branch.is_some() {
                    return Err(Error::BadFieldSpec(
                        "r0 only applies when p splits".into(),
                    ));
                }
            }
        }
        Ok(ValuedField { kind: FieldKind::QuadExt { d, p, splitting, branch } })
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn is_series(&self) -> bool {
        matches!(self.kind, FieldKind::FuncFieldTadic | FieldKind::Hahn { .. })
    }

    pub fn is_quad(&self) -> bool {
        matches!(self.kind, FieldKind::QuadExt { .. })
    }

    /// The ground field when this is an extension, `None` otherwise.
    pub fn ground_field(&self) -> Option<ValuedField> {
        match &self.kind {
            FieldKind::QuadExt { p, .. } => Some(ValuedField { kind: FieldKind::PadicRat { p: *p } }),
            _ => None,
        }
    }

    /// Whether `self` extends `other` (trivially or quadratically over the
    /// same prime).
    pub fn extends(&self, other: &ValuedField) -> bool {
        if self == other {
            return true;
        }
        match (&self.kind, &other.kind) {
            (FieldKind::QuadExt { p, .. }, FieldKind::PadicRat { p: q }) => p == q,
            _ => false,
        }
    }

    pub fn value_group(&self) -> ValueGroup {
        match &self.kind {
            FieldKind::PadicRat { .. } | FieldKind::FuncFieldTadic => ValueGroup::integers(),
            FieldKind::QuadExt { splitting, .. } => match splitting {
                QuadSplitting::Ramified => ValueGroup::CyclicScaled(2),
                _ => ValueGroup::integers(),
            },
            FieldKind::Hahn { .. } => ValueGroup::FullRationals,
        }
    }

    pub fn is_discrete(&self) -> bool {
        self.value_group().is_discrete()
    }

    pub fn residue_card(&self) -> ResidueCard {
        match &self.kind {
            FieldKind::PadicRat { p } => ResidueCard::Finite(*p),
            FieldKind::QuadExt { p, splitting, .. } => match splitting {
                QuadSplitting::Inert => ResidueCard::Finite(p * p),
                _ => ResidueCard::Finite(*p),
            },
            FieldKind::FuncFieldTadic => ResidueCard::Infinite,
            FieldKind::Hahn { fp: None } => ResidueCard::Infinite,
            FieldKind::Hahn { fp: Some(p) } => ResidueCard::Finite(*p),
        }
    }

    fn fp(&self) -> Option<u64> {
        match &self.kind {
            FieldKind::Hahn { fp } => *fp,
            _ => None,
        }
    }

    pub fn zero(&self) -> FieldElem {
        match &self.kind {
            FieldKind::PadicRat { .. } => FieldElem::Rat(BigRational::zero()),
            FieldKind::QuadExt { .. } => FieldElem::Quad(BigRational::zero(), BigRational::zero()),
            _ => FieldElem::Series(SeriesFrac { num: GenPoly::zero(), den: GenPoly::one() }),
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_rational(BigRational::one()).expect("1 is a valid element")
    }

    pub fn int_elem(&self, n: i64) -> FieldElem {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
            .expect("fp reduction of an integer cannot fail")
    }

    /// The rational constant `q` as an element of this field.
    pub fn from_rational(&self, q: BigRational) -> Result<FieldElem> {
        Ok(match &self.kind {
            FieldKind::PadicRat { .. } => FieldElem::Rat(q),
            FieldKind::QuadExt { .. } => FieldElem::Quad(q, BigRational::zero()),
            FieldKind::FuncFieldTadic | FieldKind::Hahn { .. } => {
                let c = match self.fp() {
                    Some(p) => reduce_mod_p(&q, p)?,
                    None => q,
                };
                FieldElem::Series(SeriesFrac {
                    num: GenPoly::monomial(BigRational::zero(), c),
                    den: GenPoly::one(),
                })
            }
        })
    }

    /// The adjoined square root, for quadratic extensions.
    pub fn quad_root(&self) -> Result<FieldElem> {
        match &self.kind {
            FieldKind::QuadExt { .. } => Ok(FieldElem::Quad(BigRational::zero(), BigRational::one())),
            _ => Err(Error::MixedFields),
        }
    }

    /// The monomial `c·t^e`, for series fields. `tadic` requires an integer
    /// exponent.
    pub fn monomial(&self, exp: BigRational, coeff: BigRational) -> Result<FieldElem> {
        match &self.kind {
            FieldKind::FuncFieldTadic => {
                if !exp.is_integer() {
                    return Err(Error::Parse(format!("tadic exponent {exp} is not an integer")));
                }
            }
            FieldKind::Hahn { .. } => {}
            _ => return Err(Error::MixedFields),
        }
        let c = match self.fp() {
            Some(p) => reduce_mod_p(&coeff, p)?,
            None => coeff,
        };
        Ok(FieldElem::Series(SeriesFrac {
            num: GenPoly::monomial(exp, c),
            den: GenPoly::one(),
        }))
    }

    fn check(&self, x: &FieldElem) -> Result<()> {
        let ok = matches!(
            (&self.kind, x),
            (FieldKind::PadicRat { .. }, FieldElem::Rat(_))
                | (FieldKind::QuadExt { .. }, FieldElem::Quad(..))
                | (FieldKind::FuncFieldTadic, FieldElem::Series(_))
                | (FieldKind::Hahn { .. }, FieldElem::Series(_))
        );
        if ok {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    /// Coerce an element of the ground field into this field (identity when
    /// the variants already match).
    pub fn coerce(&self, x: &FieldElem) -> Result<FieldElem> {
        if self.check(x).is_ok() {
            return Ok(x.clone());
        }
        match (&self.kind, x) {
            (FieldKind::QuadExt { .. }, FieldElem::Rat(q)) => {
                Ok(FieldElem::Quad(q.clone(), BigRational::zero()))
            }
            _ => Err(Error::MixedFields),
        }
    }

    pub fn is_zero(&self, x: &FieldElem) -> bool {
        match x {
            FieldElem::Rat(q) => q.is_zero(),
            FieldElem::Quad(a, b) => a.is_zero() && b.is_zero(),
            FieldElem::Series(f) => f.num.is_zero(),
        }
    }

    /// Exact equality. Series fractions are compared by cross-multiplication.
    pub fn eq_elems(&self, x: &FieldElem, y: &FieldElem) -> bool {
        match (x, y) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => a == b,
            (FieldElem::Quad(a, b), FieldElem::Quad(c, d)) => a == c && b == d,
            (FieldElem::Series(f), FieldElem::Series(g)) => {
                f.num.mul(&g.den, self.fp()) == g.num.mul(&f.den, self.fp())
            }
            _ => false,
        }
    }

    pub fn add(&self, x: &FieldElem, y: &FieldElem) -> Result<FieldElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (x, y) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (FieldElem::Quad(a, b), FieldElem::Quad(c, d)) => FieldElem::Quad(a + c, b + d),
            (FieldElem::Series(f), FieldElem::Series(g)) => {
                let fp = self.fp();
                let num = f.num.mul(&g.den, fp).add(&g.num.mul(&f.den, fp), fp);
                let den = f.den.mul(&g.den, fp);
                FieldElem::Series(normalize_frac(SeriesFrac { num, den }, fp))
            }
            _ => unreachable!("variants checked"),
        })
    }

    pub fn neg(&self, x: &FieldElem) -> Result<FieldElem> {
        self.check(x)?;
        Ok(match x {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Quad(a, b) => FieldElem::Quad(-a, -b),
            FieldElem::Series(f) => FieldElem::Series(SeriesFrac {
                num: f.num.neg(self.fp()),
                den: f.den.clone(),
            }),
        })
    }

    pub fn sub(&self, x: &FieldElem, y: &FieldElem) -> Result<FieldElem> {
        let ny = self.neg(y)?;
        self.add(x, &ny)
    }

    pub fn mul(&self, x: &FieldElem, y: &FieldElem) -> Result<FieldElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (x, y) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (FieldElem::Quad(a, b), FieldElem::Quad(c, d)) => {
                let dd = self.quad_d().expect("quad field");
                let dd = BigRational::from_integer(dd);
                FieldElem::Quad(a * c + &dd * b * d, a * d + b * c)
            }
            (FieldElem::Series(f), FieldElem::Series(g)) => {
                let fp = self.fp();
                FieldElem::Series(normalize_frac(
                    SeriesFrac { num: f.num.mul(&g.num, fp), den: f.den.mul(&g.den, fp) },
                    fp,
                ))
            }
            _ => unreachable!("variants checked"),
        })
    }

    pub fn div(&self, x: &FieldElem, y: &FieldElem) -> Result<FieldElem> {
        self.check(x)?;
        self.check(y)?;
        if self.is_zero(y) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (x, y) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a / b),
            (FieldElem::Quad(..), FieldElem::Quad(c, d)) => {
                let dd = BigRational::from_integer(self.quad_d().expect("quad field"));
                let norm = c * c - &dd * d * d;
                let conj = FieldElem::Quad(c.clone(), -d.clone());
                let prod = self.mul(x, &conj)?;
                match prod {
                    FieldElem::Quad(a, b) => FieldElem::Quad(a / &norm, b / &norm),
                    _ => unreachable!(),
                }
            }
            (FieldElem::Series(f), FieldElem::Series(g)) => {
                let fp = self.fp();
                FieldElem::Series(normalize_frac(
                    SeriesFrac { num: f.num.mul(&g.den, fp), den: f.den.mul(&g.num, fp) },
                    fp,
                ))
            }
            _ => unreachable!("variants checked"),
        })
    }

    /// `x^k` for integer `k` (negative powers via inversion).
    pub fn pow(&self, x: &FieldElem, k: i64) -> Result<FieldElem> {
        if k < 0 {
            let inv = self.div(&self.one(), x)?;
            return self.pow(&inv, -k);
        }
        let mut acc = self.one();
        let mut base = x.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    fn quad_d(&self) -> Option<BigInt> {
        match &self.kind {
            FieldKind::QuadExt { d, .. } => Some(d.clone()),
            _ => None,
        }
    }

    /// The conjugate `a - b·w` of a quadratic element.
    pub fn quad_conjugate(&self, x: &FieldElem) -> Result<FieldElem> {
        self.check(x)?;
        match x {
            FieldElem::Quad(a, b) => Ok(FieldElem::Quad(a.clone(), -b.clone())),
            _ => Err(Error::MixedFields),
        }
    }

    /// The valuation, normalized so that `v(p) = 1` (p-adic kinds) or
    /// `v(t) = 1` (series kinds). `v(0) = ∞`.
    pub fn valuation(&self, x: &FieldElem) -> Result<ExtValue> {
        self.check(x)?;
        Ok(match (&self.kind, x) {
            (FieldKind::PadicRat { p }, FieldElem::Rat(q)) => vp_rational(q, *p),
            (FieldKind::QuadExt { d, p, splitting, branch }, FieldElem::Quad(a, b)) => {
                quad_valuation(d, *p, *splitting, *branch, a, b)
            }
            (_, FieldElem::Series(f)) => {
                if f.num.is_zero() {
                    ExtValue::Infinity
                } else {
                    let vn = f.num.min_exp().expect("nonzero");
                    let vd = f.den.min_exp().expect("denominator nonzero");
                    ExtValue::Finite(vn - vd)
                }
            }
            _ => unreachable!("variants checked"),
        })
    }

    /// Whether the listed elements are pairwise incongruent modulo the
    /// maximal ideal, i.e. `v(x_i - x_j) = 0` for all `i ≠ j`. All elements
    /// must be integral.
    pub fn residue_distinct(&self, xs: &[FieldElem]) -> Result<bool> {
        for x in xs {
            if !self.valuation(x)?.is_nonnegative() {
                return Err(Error::NotIntegral);
            }
        }
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                let diff = self.sub(&xs[i], &xs[j])?;
                if self.valuation(&diff)? != ExtValue::zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// An element of value exactly `gamma`, which must lie in the value group.
    pub fn uniformizer_pow(&self, gamma: &BigRational) -> Result<FieldElem> {
        if !self.value_group().contains(&ExtValue::Finite(gamma.clone()))? {
            return Err(Error::UnsupportedRadius(format!(
                "{gamma} is not in the value group"
            )));
        }
        match &self.kind {
            FieldKind::PadicRat { p } => {
                let k = gamma.to_integer();
                Ok(FieldElem::Rat(rational_power(*p, &k)))
            }
            FieldKind::QuadExt { splitting, p, d, .. } => {
                match splitting {
                    QuadSplitting::Ramified => {
                        // v(w) = 1/2: γ = k/2 realized as w^k.
                        let k = (gamma * BigRational::from_integer(BigInt::from(2))).to_integer();
                        let (half, odd) = k.div_mod_floor(&BigInt::from(2));
                        let scalar = rational_big_power(d, &half);
                        if odd.is_zero() {
                            Ok(FieldElem::Quad(scalar, BigRational::zero()))
                        } else {
                            Ok(FieldElem::Quad(BigRational::zero(), scalar))
                        }
                    }
                    _ => {
                        let k = gamma.to_integer();
                        Ok(FieldElem::Quad(rational_power(*p, &k), BigRational::zero()))
                    }
                }
            }
            FieldKind::FuncFieldTadic | FieldKind::Hahn { .. } => {
                self.monomial(gamma.clone(), BigRational::one())
            }
        }
    }

    /// Up to `count` integral elements with pairwise distinct residues, or
    /// `None` when the residue field is too small.
    pub fn distinct_units(&self, count: usize) -> Option<Vec<FieldElem>> {
        match &self.kind {
            FieldKind::PadicRat { p } | FieldKind::Hahn { fp: Some(p) } => {
                if (count as u64) > *p {
                    return None;
                }
                Some((0..count as i64).map(|n| self.int_elem(n)).collect())
            }
            FieldKind::FuncFieldTadic | FieldKind::Hahn { fp: None } => {
                Some((0..count as i64).map(|n| self.int_elem(n)).collect())
            }
            FieldKind::QuadExt { p, splitting, .. } => {
                let cap = match splitting {
                    QuadSplitting::Inert => p.saturating_mul(*p),
                    _ => *p,
                };
                if (count as u64) > cap {
                    return None;
                }
                let p = *p as i64;
                Some(
                    (0..count as i64)
                        .map(|n| {
                            FieldElem::Quad(
                                BigRational::from_integer(BigInt::from(n % p)),
                                BigRational::from_integer(BigInt::from(n / p)),
                            )
                        })
                        .collect(),
                )
            }
        }
    }

    /// Render an element in the canonical literal syntax for this field.
    pub fn render(&self, x: &FieldElem) -> String {
        match x {
            FieldElem::Rat(q) => format!("{q}"),
            FieldElem::Quad(a, b) => render_quad(a, b),
            FieldElem::Series(f) => render_series(f),
        }
    }
}

fn rational_power(p: u64, k: &BigInt) -> BigRational {
    rational_big_power(&BigInt::from(p), k)
}

fn rational_big_power(base: &BigInt, k: &BigInt) -> BigRational {
    let mag = base.magnitude();
    let exp = k.magnitude().to_u32_digits();
    let exp = if exp.is_empty() { 0 } else { exp[0] };
    debug_assert!(k.magnitude().to_u32_digits().len() <= 1, "exponent fits u32");
    let pk = BigRational::from_integer(BigInt::from_biguint(
        if base.is_negative() && k.is_odd() { num_bigint::Sign::Minus } else { num_bigint::Sign::Plus },
        mag.pow(exp),
    ));
    if k.is_negative() {
        pk.recip()
    } else {
        pk
    }
}

fn normalize_frac(f: SeriesFrac, fp: Option<u64>) -> SeriesFrac {
    debug_assert!(!f.den.is_zero(), "denominator must be nonzero");
    if f.num.is_zero() {
        return SeriesFrac { num: GenPoly::zero(), den: GenPoly::one() };
    }
    // A monomial denominator is exactly invertible: fold it into the numerator.
    if let Some((e, c)) = f.den.as_monomial() {
        let e = e.clone();
        let inv = match fp {
            Some(p) => {
                let ci = reduce_mod_p(c, p).expect("reduced");
                let inv = mod_inverse(&ci.to_integer(), &BigInt::from(p)).expect("unit mod p");
                BigRational::from_integer(inv)
            }
            None => c.recip(),
        };
        let num = f.num.shift_exp(&e).scale(&inv, fp);
        return SeriesFrac { num, den: GenPoly::one() };
    }
    f
}

fn quad_valuation(
    d: &BigInt,
    p: u64,
    splitting: QuadSplitting,
    branch: Option<u64>,
    a: &BigRational,
    b: &BigRational,
) -> ExtValue {
    if a.is_zero() && b.is_zero() {
        return ExtValue::Infinity;
    }
    match splitting {
        QuadSplitting::Inert | QuadSplitting::Ramified => {
            // v(x) = v_p(norm(x)) / 2, exact in (1/2)ℤ; for the inert case the
            // result is an integer.
            let dd = BigRational::from_integer(d.clone());
            let norm = a * a - dd * b * b;
            match vp_rational(&norm, p) {
                ExtValue::Finite(v) => {
                    ExtValue::Finite(v / BigRational::from_integer(BigInt::from(2)))
                }
                ExtValue::Infinity => unreachable!("norm of a nonzero element is nonzero"),
            }
        }
        QuadSplitting::Split => {
            let r0 = branch.expect("split field carries a branch");
            // Clear denominators: v(a + b·w) = v(A + B·w) - v_p(c).
            let c = a.denom().lcm(b.denom());
            let a_int = (a * BigRational::from_integer(c.clone())).to_integer();
            let b_int = (b * BigRational::from_integer(c.clone())).to_integer();
            let shift = vp_int(&c, p) as i64;
            let v = quad_split_val_int(d, p, r0, &a_int, &b_int);
            ExtValue::from_int(v as i64 - shift)
        }
    }
}

/// `w(A + B·√d)` for integers `A, B`, on the branch where `√d ≡ r0 (mod p)`.
///
/// Since `A + B·√d` and its conjugate are integral, the value is at most
/// `v_p(A² - dB²)`; precision doubles until the computed value drops below it.
fn quad_split_val_int(d: &BigInt, p: u64, r0: u64, a: &BigInt, b: &BigInt) -> u64 {
    if b.is_zero() {
        return vp_int(a, p);
    }
    if a.is_zero() {
        return vp_int(b, p);
    }
    let norm = a * a - d * (b * b);
    let bound = if norm.is_zero() { unreachable!("d is not a square") } else { vp_int(&norm, p) };
    let mut k: u32 = 8;
    loop {
        let r = hensel_sqrt(d, p, r0, k);
        let modulus = BigInt::from(p).pow(k);
        let m = (a + b * &r).mod_floor(&modulus);
        if !m.is_zero() {
            let v = vp_int(&m, p);
            if u64::from(k) > v {
                return v;
            }
        }
        assert!(u64::from(k) <= bound + 1, "valuation bounded by v_p(norm)");
        k = (k * 2).max((bound + 2) as u32);
    }
}

fn render_rat_signed(q: &BigRational) -> (bool, String) {
    if q.is_negative() {
        (true, format!("{}", -q))
    } else {
        (false, format!("{q}"))
    }
}

fn render_quad(a: &BigRational, b: &BigRational) -> String {
    if b.is_zero() {
        return format!("{a}");
    }
    let w_part = if b.is_one() {
        "w".to_string()
    } else if (-b).is_one() {
        "-w".to_string()
    } else {
        format!("{b}*w")
    };
    if a.is_zero() {
        w_part
    } else if b.is_negative() {
        let (_, mag) = render_rat_signed(b);
        if (-b).is_one() {
            format!("{a}-w")
        } else {
            format!("{a}-{mag}*w")
        }
    } else {
        format!("{a}+{w_part}")
    }
}

fn render_genpoly(g: &GenPoly) -> String {
    if g.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in g.terms().enumerate() {
        let (neg, mag) = render_rat_signed(c);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        out.push_str(&format!("{mag}*t^({e})"));
    }
    out
}

fn render_series(f: &SeriesFrac) -> String {
    if f.den == GenPoly::one() {
        render_genpoly(&f.num)
    } else {
        format!("{} / {}", render_genpoly(&f.num), render_genpoly(&f.den))
    }
}

impl fmt::Display for ValuedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::PadicRat { p } => write!(f, "qp:{p}"),
            FieldKind::QuadExt { d, p, branch, .. } => {
                write!(f, "quad:d={d},p={p}")?;
                if let Some(r0) = branch {
                    write!(f, ",r0={r0}")?;
                }
                Ok(())
            }
            FieldKind::FuncFieldTadic => write!(f, "tadic"),
            FieldKind::Hahn { fp: None } => write!(f, "hahn"),
            FieldKind::Hahn { fp: Some(p) } => write!(f, "hahn:fp={p}"),
        }
    }
}
