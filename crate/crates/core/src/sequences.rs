//! Pseudo-monotone sequence families: generation from exact closed forms,
//! window-certified classification, breadth and breadth ideal, pseudo-limit
//! verification and type checking.
//!
//! Sequences are infinite objects; everything here is verified on a finite
//! window `[0, N]` and declared beyond it. Operations record which side of
//! that split they stand on.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fields::{FieldElem, ValuedField};
use crate::poly::Poly;
use crate::sets::{Ball, LimitPoint, ValueProfile};
use crate::values::ExtValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqKind {
    /// Gap values `v(s_{n+1} - s_n)` strictly increasing.
    PseudoConvergent,
    /// All pairwise values `v(s_n - s_m)` equal.
    PseudoStationary,
    /// Gap values strictly decreasing.
    PseudoDivergent,
}

impl SeqKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeqKind::PseudoConvergent => "convergent",
            SeqKind::PseudoStationary => "stationary",
            SeqKind::PseudoDivergent => "divergent",
        }
    }
}

/// Declared type of a pseudo-convergent family.
#[derive(Debug, Clone)]
pub enum TypeDecl {
    /// `v(f(s_n))` eventually stabilizes for every polynomial `f`.
    Transcendental,
    /// `v(f(s_n))` is eventually strictly increasing for the witness `f`.
    Algebraic(Poly),
    Unknown,
}

/// A declared pseudo-limit, possibly in a quadratic extension of the base.
#[derive(Debug, Clone)]
pub struct DeclaredLimit {
    pub field: ValuedField,
    pub elem: FieldElem,
}

/// An exact closed form in one index variable (`k` or `n`).
#[derive(Debug, Clone)]
pub struct ExpForm {
    pub source: String,
    expr: Expr,
}

impl ExpForm {
    pub fn parse(source: &str) -> Result<Self> {
        let expr = Expr::parse(source)?;
        Ok(ExpForm { source: source.to_string(), expr })
    }

    pub fn eval(&self, index: usize) -> Result<BigRational> {
        let i = BigRational::from_integer((index as i64).into());
        self.expr.eval_rational(&[("k", i.clone()), ("n", i)])
    }
}

/// Closed-form generator of a family.
#[derive(Debug, Clone)]
pub enum FamilyGen {
    /// `s_n = n`.
    Enumerate,
    /// `s_n = start + n·step`.
    Arith { start: FieldElem, step: FieldElem },
    /// `s_n = scale · ratio^n`.
    Geometric { scale: FieldElem, ratio: FieldElem },
    /// `s_n = Σ_{k=1}^{n+1} t^{e(k)}` over a series field.
    HahnPartial { exps: ExpForm },
    /// `s_n = center + t^{e(n)}` over a series field.
    HahnPow { exps: ExpForm, center: FieldElem },
}

/// A sequence family with declared metadata. `offset` shifts the index, which
/// is how tail witnesses stay replayable through the same code path.
#[derive(Debug, Clone)]
pub struct SeqFamily {
    pub field: ValuedField,
    pub gen: FamilyGen,
    pub kind: SeqKind,
    pub breadth: ExtValue,
    pub seq_type: Option<TypeDecl>,
    pub limits: Vec<DeclaredLimit>,
    pub offset: usize,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub kind: SeqKind,
    pub gaps: Vec<ExtValue>,
    pub consistent: bool,
}

/// `Br(E) = {b : v(b) > v(s_{n+1}-s_n) for all n}`, described by its
/// threshold: the breadth of the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreadthIdeal {
    pub threshold: ExtValue,
    pub principal: bool,
    pub zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeVerdict {
    TranscendentalConsistent,
    AlgebraicVerified,
    Inconclusive { offending: Vec<usize> },
}

impl SeqFamily {
    pub fn new(
        field: ValuedField,
        gen: FamilyGen,
        kind: SeqKind,
        breadth: ExtValue,
        seq_type: Option<TypeDecl>,
        limits: Vec<DeclaredLimit>,
    ) -> Self {
        SeqFamily { field, gen, kind, breadth, seq_type, limits, offset: 0 }
    }

    /// The same family with the first `shift` terms dropped.
    pub fn shifted(&self, shift: usize) -> SeqFamily {
        let mut out = self.clone();
        out.offset += shift;
        out
    }

    fn raw_elem(&self, m: usize) -> Result<FieldElem> {
        let f = &self.field;
        match &self.gen {
            FamilyGen::Enumerate => Ok(f.int_elem(m as i64)),
            FamilyGen::Arith { start, step } => {
                let k = f.int_elem(m as i64);
                f.add(start, &f.mul(&k, step)?)
            }
            FamilyGen::Geometric { scale, ratio } => {
                f.mul(scale, &f.pow(ratio, m as i64)?)
            }
            FamilyGen::HahnPartial { exps } => {
                let mut acc = f.zero();
                for k in 1..=m + 1 {
                    let e = exps.eval(k)?;
                    acc = f.add(&acc, &f.monomial(e, BigRational::one())?)?;
                }
                Ok(acc)
            }
            FamilyGen::HahnPow { exps, center } => {
                let e = exps.eval(m)?;
                f.add(center, &f.monomial(e, BigRational::one())?)
            }
        }
    }

    /// The `n`-th element (after any tail shift).
    pub fn elem(&self, n: usize) -> Result<FieldElem> {
        self.raw_elem(n + self.offset)
    }

    fn elems(&self, upto: usize) -> Result<Vec<FieldElem>> {
        (0..=upto).map(|n| self.elem(n)).collect()
    }

    /// Gap values `v(s_{n+1} - s_n)` for `n = 0..=window`, computed in
    /// `in_field` (the base or an extension of it).
    pub fn gap_values(&self, in_field: &ValuedField, window: usize) -> Result<Vec<ExtValue>> {
        if !in_field.extends(&self.field) {
            return Err(Error::MixedFields);
        }
        let elems = self.elems(window + 1)?;
        let mut gaps = Vec::with_capacity(window + 1);
        for n in 0..=window {
            let a = in_field.coerce(&elems[n])?;
            let b = in_field.coerce(&elems[n + 1])?;
            gaps.push(in_field.valuation(&in_field.sub(&b, &a)?)?);
        }
        Ok(gaps)
    }

    /// Classify the family from its gaps on `[0, N]` and check the result
    /// against the declared metadata.
    pub fn classify_window(&self, window: usize) -> Result<Classification> {
        if window < 3 {
            return Err(Error::WindowTooSmall);
        }
        let gaps = self.gap_values(&self.field, window)?;
        for (n, g) in gaps.iter().enumerate() {
            if g.is_infinite() {
                return Err(Error::NotMonotoneOnWindow { index: n });
            }
        }
        let increasing = gaps.windows(2).all(|w| w[0] < w[1]);
        let decreasing = gaps.windows(2).all(|w| w[0] > w[1]);
        let constant = gaps.windows(2).all(|w| w[0] == w[1]);
        let kind = if increasing {
            SeqKind::PseudoConvergent
        } else if decreasing {
            SeqKind::PseudoDivergent
        } else if constant {
            // Constant gaps only make a pseudo-stationary sequence when every
            // pair in the window sits at the same value.
            let elems = self.elems(window + 1)?;
            for i in 0..elems.len() {
                for j in i + 1..elems.len() {
                    let d = self.field.valuation(&self.field.sub(&elems[i], &elems[j])?)?;
                    if d != gaps[0] {
                        return Err(Error::NotMonotoneOnWindow { index: j });
                    }
                }
            }
            SeqKind::PseudoStationary
        } else {
            let bad = gaps
                .windows(2)
                .position(|w| w[0] == w[1] || (w[0] < w[1]) != (gaps[0] < gaps[1]))
                .unwrap_or(0);
            return Err(Error::NotMonotoneOnWindow { index: bad });
        };
        let consistent = kind == self.kind
            && match kind {
                SeqKind::PseudoConvergent => gaps.iter().all(|g| *g < self.breadth),
                SeqKind::PseudoStationary => {
                    self.breadth.is_finite() && gaps.iter().all(|g| *g == self.breadth)
                }
                SeqKind::PseudoDivergent => {
                    self.breadth.is_finite() && gaps.iter().all(|g| *g > self.breadth)
                }
            };
        Ok(Classification { kind, gaps, consistent })
    }

    /// Window-validate the family: classification must match the declaration,
    /// the declared kind must be possible over the base field at all, and
    /// every declared pseudo-limit must pass its pattern check.
    pub fn validate(&self, window: usize) -> Result<Classification> {
        let cls = self.classify_window(window)?;
        if !cls.consistent {
            return Err(Error::UnvalidatedFamily(format!(
                "window classifies as {} which disagrees with declared {} / breadth {}",
                cls.kind.as_str(),
                self.kind.as_str(),
                self.breadth
            )));
        }
        match self.kind {
            SeqKind::PseudoStationary => {
                if self.field.residue_card().is_finite() {
                    return Err(Error::UnvalidatedFamily(
                        "a pseudo-stationary sequence forces an infinite residue field".into(),
                    ));
                }
            }
            SeqKind::PseudoDivergent => {
                if self.field.is_discrete() {
                    return Err(Error::UnvalidatedFamily(
                        "a discrete field admits no pseudo-divergent sequences".into(),
                    ));
                }
            }
            SeqKind::PseudoConvergent => {
                if self.breadth.is_finite() && self.field.is_discrete() {
                    return Err(Error::UnvalidatedFamily(
                        "a discrete field forces the breadth ideal of a pseudo-convergent \
                         sequence to be zero"
                            .into(),
                    ));
                }
            }
        }
        for lim in &self.limits {
            if !self.is_pseudo_limit(&lim.field, &lim.elem, window)? {
                return Err(Error::UnvalidatedFamily(format!(
                    "declared pseudo-limit {} fails the window pattern",
                    lim.field.render(&lim.elem)
                )));
            }
        }
        Ok(cls)
    }

    /// Whether `candidate` (over the base or a quadratic extension) follows
    /// the kind-specific pseudo-limit pattern on the window. For stationary
    /// families at most one index may break the equality.
    pub fn is_pseudo_limit(
        &self,
        limit_field: &ValuedField,
        candidate: &FieldElem,
        window: usize,
    ) -> Result<bool> {
        if !limit_field.extends(&self.field) {
            return Err(Error::MixedFields);
        }
        let elems = self.elems(window + 1)?;
        let mut dist = Vec::with_capacity(window + 2);
        for s in &elems {
            let s = limit_field.coerce(s)?;
            dist.push(limit_field.valuation(&limit_field.sub(candidate, &s)?)?);
        }
        let gaps = self.gap_values(limit_field, window)?;
        Ok(match self.kind {
            SeqKind::PseudoConvergent => (0..=window).all(|n| {
                // Pattern and its equivalent form: v(α-s_n) < v(α-s_{n+1})
                // and v(α-s_n) = v(s_{n+1}-s_n).
                dist[n] < dist[n + 1] && dist[n] == gaps[n]
            }),
            SeqKind::PseudoStationary => {
                let breaks = dist.iter().filter(|d| **d != self.breadth).count();
                breaks <= 1
            }
            SeqKind::PseudoDivergent => {
                (0..=window).all(|n| dist[n] > dist[n + 1] && dist[n + 1] == gaps[n])
            }
        })
    }

    /// The set of all pseudo-limits once one is known: a closed ball of
    /// radius the breadth for convergent and stationary families, the open
    /// ball for divergent ones.
    pub fn pseudo_limit_set(
        &self,
        limit_field: &ValuedField,
        candidate: &FieldElem,
        window: usize,
    ) -> Result<Ball> {
        if !self.is_pseudo_limit(limit_field, candidate, window)? {
            return Err(Error::NoKnownLimit);
        }
        let radius = match self.breadth.as_finite() {
            Some(q) => q.clone(),
            None => {
                return Err(Error::UnsupportedFamily(
                    "zero breadth ideal: the pseudo-limit is a single point, not a ball".into(),
                ))
            }
        };
        Ok(match self.kind {
            SeqKind::PseudoConvergent | SeqKind::PseudoStationary => {
                Ball::closed(candidate.clone(), radius)
            }
            SeqKind::PseudoDivergent => Ball::open(candidate.clone(), radius),
        })
    }

    /// The breadth ideal of a window-consistent pseudo-convergent family.
    pub fn breadth_ideal(&self, window: usize) -> Result<BreadthIdeal> {
        if self.kind != SeqKind::PseudoConvergent {
            return Err(Error::WrongKind);
        }
        let cls = self.classify_window(window)?;
        if !cls.consistent {
            return Err(Error::UnvalidatedFamily(
                "breadth ideal requires a window-consistent family".into(),
            ));
        }
        let zero = self.breadth.is_infinite();
        let principal = match &self.breadth {
            ExtValue::Finite(_) => self.field.value_group().contains(&self.breadth)?,
            ExtValue::Infinity => false,
        };
        Ok(BreadthIdeal { threshold: self.breadth.clone(), principal, zero })
    }

    /// Membership in the breadth ideal: `v(b)` must exceed every gap value.
    /// The gaps increase strictly toward the breadth without attaining it, so
    /// this is exactly `v(b) ≥ breadth`.
    pub fn breadth_ideal_contains(&self, b: &FieldElem) -> Result<bool> {
        if self.kind != SeqKind::PseudoConvergent {
            return Err(Error::WrongKind);
        }
        Ok(self.field.valuation(b)? >= self.breadth)
    }

    /// Verify the declared type on the window. Probes for the transcendental
    /// check are powers `(X-a)^k` with `a` drawn from the start of the
    /// sequence (which lies in every pseudo-limit ball) and any declared
    /// base-field limits.
    pub fn type_check(&self, window: usize) -> Result<TypeVerdict> {
        if self.kind != SeqKind::PseudoConvergent {
            return Err(Error::WrongKind);
        }
        if window < 4 {
            return Err(Error::WindowTooSmall);
        }
        let elems = self.elems(window)?;
        match &self.seq_type {
            Some(TypeDecl::Algebraic(witness)) => {
                let vals = self.poly_values(witness, &elems)?;
                // Eventually strictly increasing: a strictly increasing tail
                // of at least three steps.
                let mut start = 0;
                for n in (1..vals.len()).rev() {
                    if vals[n - 1] >= vals[n] {
                        start = n;
                        break;
                    }
                }
                if vals.len() - start >= 4 {
                    Ok(TypeVerdict::AlgebraicVerified)
                } else {
                    let offending = (start.saturating_sub(1)..vals.len() - 1)
                        .filter(|&n| vals[n] >= vals[n + 1])
                        .collect();
                    Ok(TypeVerdict::Inconclusive { offending })
                }
            }
            Some(TypeDecl::Transcendental) => {
                let mut probes: Vec<Poly> = Vec::new();
                let x = Poly::x(&self.field);
                probes.push(x.clone());
                probes.push(x.mul(&self.field, &x)?);
                for a in elems.iter().take(3) {
                    let lin = Poly::from_coeffs(
                        &self.field,
                        vec![self.field.neg(a)?, self.field.one()],
                    );
                    probes.push(lin.clone());
                    probes.push(lin.mul(&self.field, &lin)?);
                }
                for lim in &self.limits {
                    if lim.field == self.field {
                        probes.push(Poly::from_coeffs(
                            &self.field,
                            vec![self.field.neg(&lim.elem)?, self.field.one()],
                        ));
                    }
                }
                // Generator-structural probes: a power family converges to
                // its stored center, a geometric one to zero.
                match &self.gen {
                    FamilyGen::HahnPow { center, .. } => {
                        probes.push(Poly::from_coeffs(
                            &self.field,
                            vec![self.field.neg(center)?, self.field.one()],
                        ));
                    }
                    FamilyGen::Geometric { .. } | FamilyGen::Arith { .. } | FamilyGen::Enumerate => {
                        probes.push(x.clone());
                    }
                    FamilyGen::HahnPartial { .. } => {}
                }
                for probe in &probes {
                    let vals = self.poly_values(probe, &elems)?;
                    // Stabilized: constant on a tail of at least four points.
                    let tail = vals.len().saturating_sub(4);
                    let stable = vals[tail..].windows(2).all(|w| w[0] == w[1]);
                    if !stable {
                        let offending =
                            (tail..vals.len() - 1).filter(|&n| vals[n] != vals[n + 1]).collect();
                        return Ok(TypeVerdict::Inconclusive { offending });
                    }
                }
                Ok(TypeVerdict::TranscendentalConsistent)
            }
            Some(TypeDecl::Unknown) | None => Ok(TypeVerdict::Inconclusive { offending: vec![] }),
        }
    }

    fn poly_values(&self, f: &Poly, elems: &[FieldElem]) -> Result<Vec<ExtValue>> {
        elems
            .iter()
            .map(|s| {
                let v = f.evaluate(&self.field, s)?;
                self.field.valuation(&v)
            })
            .collect()
    }

    /// The exact value profile `{v(s_n - center)}` read off the window and
    /// extrapolated from the declared metadata. `query_field` is the field of
    /// `center` and must extend the base field.
    pub fn value_profile(
        &self,
        query_field: &ValuedField,
        center: &FieldElem,
        window: usize,
    ) -> Result<ValueProfile> {
        if !query_field.extends(&self.field) {
            return Err(Error::MixedFields);
        }
        let elems = self.elems(window + 1)?;
        let mut dist = Vec::with_capacity(window + 2);
        for s in &elems {
            let s = query_field.coerce(s)?;
            dist.push(query_field.valuation(&query_field.sub(center, &s)?)?);
        }
        let gaps = self.gap_values(query_field, window)?;
        let mut profile = ValueProfile::from_attained(dist.clone());
        profile.window_certified = true;

        let n = dist.len();
        let all_equal = dist.windows(2).all(|w| w[0] == w[1]);
        let near_equal = {
            let mode = &dist[n / 2];
            dist.iter().filter(|d| *d != mode).count() <= 1
        };
        let increasing = dist.windows(2).all(|w| w[0] < w[1]);
        let decreasing = dist.windows(2).all(|w| w[0] > w[1]);
        if all_equal || near_equal {
            return Ok(profile);
        }
        if increasing {
            // Matches the pseudo-limit pattern: distances are the gaps and
            // climb to the breadth without attaining it.
            if (0..=window).all(|k| dist[k] == gaps[k]) {
                profile.limits.push(LimitPoint { value: self.breadth.clone(), from_below: true });
                return Ok(profile);
            }
            return Err(Error::UnsupportedFamily(
                "increasing distances do not match the gap profile".into(),
            ));
        }
        if decreasing {
            if (0..=window).all(|k| dist[k + 1] == gaps[k]) {
                profile.limits.push(LimitPoint { value: self.breadth.clone(), from_below: false });
                return Ok(profile);
            }
            return Err(Error::UnsupportedFamily(
                "decreasing distances do not match the gap profile".into(),
            ));
        }
        // Strictly monotone prefix followed by a constant tail of length ≥ 2.
        let split = dist.windows(2).position(|w| w[0] == w[1]);
        if let Some(t) = split {
            let tail_constant = dist[t..].windows(2).all(|w| w[0] == w[1]);
            let prefix_inc = dist[..=t].windows(2).all(|w| w[0] < w[1]);
            let prefix_dec = dist[..=t].windows(2).all(|w| w[0] > w[1]);
            if tail_constant && (prefix_inc || prefix_dec) {
                if prefix_dec && self.kind == SeqKind::PseudoDivergent {
                    // The tail will eventually resume its descent toward the
                    // breadth: record the boundary.
                    if self.breadth < dist[t] {
                        profile
                            .limits
                            .push(LimitPoint { value: self.breadth.clone(), from_below: false });
                    }
                }
                return Ok(profile);
            }
        }
        Err(Error::UnsupportedFamily(
            "distance pattern on the window is not monotone-then-stable".into(),
        ))
    }
}
