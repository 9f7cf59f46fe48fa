//! Ultrametric ball algebra, the subset-description grammar, stratification
//! around a center, and polynomial closure.
//!
//! A radius here is a valuation level: a *larger* radius value means a
//! *smaller* set. `B(c,γ)` is `{x : v(x-c) ≥ γ}`, the open ball uses `>` and
//! the sphere `=`.

use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fields::{FieldElem, ValuedField};
use crate::sequences::SeqFamily;
use crate::values::{ExtValue, ValueGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallFlavor {
    Closed,
    Open,
    Sphere,
}

#[derive(Debug, Clone)]
pub struct Ball {
    pub center: FieldElem,
    pub radius: BigRational,
    pub flavor: BallFlavor,
}

/// Relation between two closed balls. By the ultrametric law they are nested
/// or disjoint; partial overlap cannot occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallRelation {
    FirstContainsSecond,
    SecondContainsFirst,
    Equal,
    Disjoint,
}

impl BallRelation {
    pub fn as_str(&self) -> &'static str {
        match self {
            BallRelation::FirstContainsSecond => "FirstContainsSecond",
            BallRelation::SecondContainsFirst => "SecondContainsFirst",
            BallRelation::Equal => "Equal",
            BallRelation::Disjoint => "Disjoint",
        }
    }
}

impl Ball {
    pub fn closed(center: FieldElem, radius: BigRational) -> Self {
        Ball { center, radius, flavor: BallFlavor::Closed }
    }

    pub fn open(center: FieldElem, radius: BigRational) -> Self {
        Ball { center, radius, flavor: BallFlavor::Open }
    }

    pub fn sphere(center: FieldElem, radius: BigRational) -> Self {
        Ball { center, radius, flavor: BallFlavor::Sphere }
    }

    pub fn radius_value(&self) -> ExtValue {
        ExtValue::Finite(self.radius.clone())
    }

    /// Exact membership by valuation comparison.
    pub fn member(&self, field: &ValuedField, x: &FieldElem) -> Result<bool> {
        let d = field.valuation(&field.sub(x, &self.center)?)?;
        let r = self.radius_value();
        Ok(match self.flavor {
            BallFlavor::Closed => d >= r,
            BallFlavor::Open => d > r,
            BallFlavor::Sphere => d == r,
        })
    }

    /// Ultrametric dichotomy for closed balls: `B(c₁,γ₁) ⊇ B(c₂,γ₂)` iff
    /// `γ₁ ≤ γ₂` and `v(c₁-c₂) ≥ γ₁`.
    pub fn relate(&self, field: &ValuedField, other: &Ball) -> Result<BallRelation> {
        if self.flavor != BallFlavor::Closed || other.flavor != BallFlavor::Closed {
            return Err(Error::UnsupportedAtom("relate applies to closed balls".into()));
        }
        let dist = field.valuation(&field.sub(&self.center, &other.center)?)?;
        let fwd = self.radius <= other.radius && dist >= self.radius_value();
        let bwd = other.radius <= self.radius && dist >= other.radius_value();
        Ok(match (fwd, bwd) {
            (true, true) => BallRelation::Equal,
            (true, false) => BallRelation::FirstContainsSecond,
            (false, true) => BallRelation::SecondContainsFirst,
            (false, false) => BallRelation::Disjoint,
        })
    }
}

/// One atom of a subset description.
#[derive(Debug, Clone)]
pub enum Atom {
    Finite(Vec<FieldElem>),
    Ball(Ball),
    Family(SeqFamily),
}

/// A finite union of atoms over one field, normalized on construction:
/// nested or equal closed balls are merged, exact duplicates inside finite
/// sets are dropped.
#[derive(Debug, Clone)]
pub struct SubsetDesc {
    pub atoms: Vec<Atom>,
}

impl SubsetDesc {
    pub fn new(field: &ValuedField, atoms: Vec<Atom>) -> Result<Self> {
        let mut out: Vec<Atom> = Vec::new();
        for atom in atoms {
            match atom {
                Atom::Finite(elems) => {
                    let mut kept: Vec<FieldElem> = Vec::new();
                    for e in elems {
                        field.coerce(&e).map_err(|_| Error::MixedFields)?;
                        if !kept.iter().any(|k| field.eq_elems(k, &e)) {
                            kept.push(e);
                        }
                    }
                    out.push(Atom::Finite(kept));
                }
                Atom::Ball(b) => {
                    if b.flavor == BallFlavor::Sphere
                        && !field.value_group().contains(&b.radius_value())?
                    {
                        return Err(Error::UnsupportedRadius(format!(
                            "sphere radius {} is not in the value group",
                            b.radius
                        )));
                    }
                    if b.flavor == BallFlavor::Closed {
                        // The incoming ball may swallow several existing
                        // balls or be absorbed by one; never both, since the
                        // kept balls are pairwise disjoint.
                        let mut absorbed = false;
                        let mut kept = Vec::with_capacity(out.len() + 1);
                        for existing in out.drain(..) {
                            if !absorbed {
                                if let Atom::Ball(e) = &existing {
                                    if e.flavor == BallFlavor::Closed {
                                        match e.relate(field, &b)? {
                                            BallRelation::FirstContainsSecond
                                            | BallRelation::Equal => absorbed = true,
                                            BallRelation::SecondContainsFirst => continue,
                                            BallRelation::Disjoint => {}
                                        }
                                    }
                                }
                            }
                            kept.push(existing);
                        }
                        if !absorbed {
                            kept.push(Atom::Ball(b));
                        }
                        out = kept;
                    } else {
                        out.push(Atom::Ball(b));
                    }
                }
                Atom::Family(fam) => out.push(Atom::Family(fam)),
            }
        }
        Ok(SubsetDesc { atoms: out })
    }

    pub fn single(field: &ValuedField, atom: Atom) -> Result<Self> {
        Self::new(field, vec![atom])
    }

    pub fn is_finite(&self) -> bool {
        self.atoms.iter().all(|a| matches!(a, Atom::Finite(_)))
    }

    pub fn families(&self) -> impl Iterator<Item = &SeqFamily> {
        self.atoms.iter().filter_map(|a| match a {
            Atom::Family(f) => Some(f),
            _ => None,
        })
    }

    pub fn balls(&self) -> impl Iterator<Item = &Ball> {
        self.atoms.iter().filter_map(|a| match a {
            Atom::Ball(b) => Some(b),
            _ => None,
        })
    }

    /// Check `S ⊆ V`: finite members integral, ball radii `≥ 0` with integral
    /// centers, family window elements integral with nonnegative breadth.
    pub fn check_inside_ring(&self, field: &ValuedField, window: usize) -> Result<()> {
        use num_traits::Signed;
        for atom in &self.atoms {
            match atom {
                Atom::Finite(elems) => {
                    for e in elems {
                        if !field.valuation(e)?.is_nonnegative() {
                            return Err(Error::NotInsideV);
                        }
                    }
                }
                Atom::Ball(b) => {
                    if b.radius.is_negative()
                        || !field.valuation(&b.center)?.is_nonnegative()
                    {
                        return Err(Error::NotInsideV);
                    }
                }
                Atom::Family(fam) => {
                    if !fam.breadth.is_nonnegative() {
                        return Err(Error::NotInsideV);
                    }
                    for n in 0..=window {
                        let s = fam.elem(n)?;
                        if !field.valuation(&s)?.is_nonnegative() {
                            return Err(Error::NotInsideV);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The exact multiset of values `{v(s - center) : s ∈ atom}`, described by
/// attained values, group-value rays (which implicitly include `∞`), and
/// boundary values approached but not attained.
#[derive(Debug, Clone, Default)]
pub struct ValueProfile {
    pub attained: BTreeSet<ExtValue>,
    pub rays: Vec<Ray>,
    pub limits: Vec<LimitPoint>,
    /// Set when part of the profile was read off a finite window of an
    /// infinite family and extrapolated from its declared metadata.
    pub window_certified: bool,
}

/// `{λ ∈ Γ_v : λ ≥ start}` (or `>` when not inclusive), together with `∞`.
#[derive(Debug, Clone)]
pub struct Ray {
    pub start: BigRational,
    pub inclusive: bool,
}

/// A value approached monotonically but never attained.
#[derive(Debug, Clone)]
pub struct LimitPoint {
    pub value: ExtValue,
    pub from_below: bool,
}

/// A stratum boundary: the value together with whether it is attained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub value: ExtValue,
    pub attained: bool,
}

impl ValueProfile {
    pub fn from_attained<I: IntoIterator<Item = ExtValue>>(vals: I) -> Self {
        ValueProfile { attained: vals.into_iter().collect(), ..Default::default() }
    }

    fn sup_below(&self, gamma: &BigRational, group: &ValueGroup) -> Option<Bound> {
        let g = ExtValue::Finite(gamma.clone());
        let mut best: Option<Bound> = None;
        let mut push = |b: Bound| {
            best = Some(match best.take() {
                None => b,
                Some(cur) => match b.value.cmp(&cur.value) {
                    std::cmp::Ordering::Greater => b,
                    std::cmp::Ordering::Equal => {
                        Bound { value: cur.value, attained: cur.attained || b.attained }
                    }
                    std::cmp::Ordering::Less => cur,
                },
            });
        };
        if let Some(x) = self.attained.range(..g.clone()).next_back() {
            push(Bound { value: x.clone(), attained: true });
        }
        for ray in &self.rays {
            match group {
                ValueGroup::CyclicScaled(_) => {
                    let prev = group.max_below(gamma).expect("discrete");
                    let ok = if ray.inclusive { prev >= ray.start } else { prev > ray.start };
                    if ok {
                        push(Bound { value: ExtValue::Finite(prev), attained: true });
                    }
                }
                ValueGroup::FullRationals => {
                    if *gamma > ray.start {
                        push(Bound { value: g.clone(), attained: false });
                    }
                }
            }
        }
        for lim in &self.limits {
            if lim.from_below && lim.value <= g {
                push(Bound { value: lim.value.clone(), attained: false });
            }
        }
        best
    }

    fn inf_above(&self, gamma: &BigRational, group: &ValueGroup) -> Option<Bound> {
        let g = ExtValue::Finite(gamma.clone());
        let mut best: Option<Bound> = None;
        let mut push = |b: Bound| {
            best = Some(match best.take() {
                None => b,
                Some(cur) => match b.value.cmp(&cur.value) {
                    std::cmp::Ordering::Less => b,
                    std::cmp::Ordering::Equal => {
                        Bound { value: cur.value, attained: cur.attained || b.attained }
                    }
                    std::cmp::Ordering::Greater => cur,
                },
            });
        };
        use std::ops::Bound as RB;
        if let Some(x) = self
            .attained
            .range((RB::Excluded(g.clone()), RB::Unbounded))
            .next()
        {
            push(Bound { value: x.clone(), attained: true });
        }
        for ray in &self.rays {
            match group {
                ValueGroup::CyclicScaled(_) => {
                    let lo = if ray.inclusive {
                        group.ceil_to(&ray.start)
                    } else {
                        group.min_above(&ray.start).expect("discrete")
                    };
                    let candidate = if lo > *gamma {
                        lo
                    } else {
                        group.min_above(gamma).expect("discrete")
                    };
                    push(Bound { value: ExtValue::Finite(candidate), attained: true });
                }
                ValueGroup::FullRationals => {
                    if ray.start > *gamma {
                        push(Bound {
                            value: ExtValue::Finite(ray.start.clone()),
                            attained: ray.inclusive,
                        });
                    } else {
                        push(Bound { value: g.clone(), attained: false });
                    }
                }
            }
        }
        for lim in &self.limits {
            if !lim.from_below && lim.value >= g {
                push(Bound { value: lim.value.clone(), attained: false });
            }
        }
        best
    }

    fn contains(&self, gamma: &BigRational, group: &ValueGroup) -> bool {
        let g = ExtValue::Finite(gamma.clone());
        if self.attained.contains(&g) {
            return true;
        }
        self.rays.iter().any(|ray| {
            group.contains(&g).expect("finite")
                && if ray.inclusive { *gamma >= ray.start } else { *gamma > ray.start }
        })
    }
}

/// Profile of `{v(s - center) : s ∈ ball}`.
pub fn ball_value_profile(
    field: &ValuedField,
    ball: &Ball,
    center: &FieldElem,
) -> Result<ValueProfile> {
    let u = field.valuation(&field.sub(&ball.center, center)?)?;
    let rho = ball.radius_value();
    let mut profile = ValueProfile::default();
    match ball.flavor {
        BallFlavor::Closed => {
            if u < rho {
                profile.attained.insert(u);
            } else {
                profile.rays.push(Ray { start: ball.radius.clone(), inclusive: true });
            }
        }
        BallFlavor::Open => {
            if u <= rho {
                profile.attained.insert(u);
            } else {
                profile.rays.push(Ray { start: ball.radius.clone(), inclusive: false });
            }
        }
        BallFlavor::Sphere => {
            if u < rho {
                profile.attained.insert(u);
            } else if u > rho {
                profile.attained.insert(rho);
            } else {
                // Distance exactly the sphere radius is realizable iff the
                // residue field has at least three classes.
                let inclusive = field.residue_card().at_least(3);
                profile.rays.push(Ray { start: ball.radius.clone(), inclusive });
            }
        }
    }
    Ok(profile)
}

fn atom_value_profile(
    field: &ValuedField,
    atom: &Atom,
    center: &FieldElem,
    window: usize,
) -> Result<ValueProfile> {
    match atom {
        Atom::Finite(elems) => {
            let mut vals = Vec::with_capacity(elems.len());
            for e in elems {
                vals.push(field.valuation(&field.sub(e, center)?)?);
            }
            Ok(ValueProfile::from_attained(vals))
        }
        Atom::Ball(b) => ball_value_profile(field, b, center),
        Atom::Family(fam) => fam.value_profile(field, center, window),
    }
}

/// Result of stratifying a description around `(center, gamma)`: the supremum
/// of values below `gamma`, the infimum of values above it (with attainment
/// flags) and whether the stratum at exactly `gamma` is nonempty.
#[derive(Debug, Clone)]
pub struct Stratification {
    pub below: Option<Bound>,
    pub above: Option<Bound>,
    pub at_nonempty: bool,
    pub window_certified: bool,
}

pub fn stratify(
    field: &ValuedField,
    desc: &SubsetDesc,
    center: &FieldElem,
    gamma: &BigRational,
    window: usize,
) -> Result<Stratification> {
    let group = field.value_group();
    let mut below: Option<Bound> = None;
    let mut above: Option<Bound> = None;
    let mut at_nonempty = false;
    let mut window_certified = false;
    for atom in &desc.atoms {
        let profile = atom_value_profile(field, atom, center, window)?;
        window_certified |= profile.window_certified;
        if let Some(b) = profile.sup_below(gamma, &group) {
            below = Some(match below.take() {
                None => b,
                Some(cur) => {
                    if b.value > cur.value {
                        b
                    } else if b.value == cur.value {
                        Bound { value: cur.value, attained: cur.attained || b.attained }
                    } else {
                        cur
                    }
                }
            });
        }
        if let Some(b) = profile.inf_above(gamma, &group) {
            above = Some(match above.take() {
                None => b,
                Some(cur) => {
                    if b.value < cur.value {
                        b
                    } else if b.value == cur.value {
                        Bound { value: cur.value, attained: cur.attained || b.attained }
                    } else {
                        cur
                    }
                }
            });
        }
        at_nonempty |= profile.contains(gamma, &group);
    }
    Ok(Stratification { below, above, at_nonempty, window_certified })
}

/// Polynomial closure, atom by atom. Closure is a topological closure, so it
/// commutes with finite unions. Sequence-family atoms are not supported here;
/// their closure is reported through verified pseudo-limit balls instead.
pub fn closure(field: &ValuedField, desc: &SubsetDesc) -> Result<SubsetDesc> {
    let mut out = Vec::with_capacity(desc.atoms.len());
    for atom in &desc.atoms {
        out.push(closure_atom(field, atom)?);
    }
    SubsetDesc::new(field, out)
}

pub(crate) fn closure_atom(field: &ValuedField, atom: &Atom) -> Result<Atom> {
    Ok(match atom {
        Atom::Finite(elems) => Atom::Finite(elems.clone()),
        Atom::Ball(b) => match b.flavor {
            BallFlavor::Closed => Atom::Ball(b.clone()),
            BallFlavor::Open => {
                let group = field.value_group();
                match group.min_above(&b.radius) {
                    // Discrete group: the closure steps up to the next level.
                    Some(next) => Atom::Ball(Ball::closed(b.center.clone(), next)),
                    // Dense group with rational radius: closure at the same level.
                    None => Atom::Ball(Ball::closed(b.center.clone(), b.radius.clone())),
                }
            }
            BallFlavor::Sphere => {
                if !field.is_discrete() || !field.residue_card().is_finite() {
                    Atom::Ball(Ball::closed(b.center.clone(), b.radius.clone()))
                } else {
                    // Over a DVR with finite residue field the sphere is
                    // already polynomially closed.
                    Atom::Ball(b.clone())
                }
            }
        },
        Atom::Family(_) => {
            return Err(Error::UnsupportedAtom(
                "closure of a sequence family is reported via its pseudo-limit balls".into(),
            ))
        }
    })
}

/// Deterministic sample elements of an atom, always members of it. Families
/// contribute their window elements.
pub fn sample_atom(
    field: &ValuedField,
    atom: &Atom,
    count: usize,
    window: usize,
) -> Result<Vec<FieldElem>> {
    let mut out = Vec::with_capacity(count);
    match atom {
        Atom::Finite(elems) => {
            for e in elems.iter().take(count) {
                out.push(e.clone());
            }
        }
        Atom::Ball(b) => {
            let unit_stream = unit_stream(field, count);
            match b.flavor {
                BallFlavor::Closed | BallFlavor::Sphere => {
                    let tau = field.uniformizer_pow(&field.value_group().ceil_to(&b.radius))?;
                    for u in &unit_stream {
                        if out.len() >= count {
                            break;
                        }
                        out.push(field.add(&b.center, &field.mul(u, &tau)?)?);
                    }
                    if b.flavor == BallFlavor::Closed {
                        let mut step = field.value_group().ceil_to(&b.radius);
                        while out.len() < count {
                            step = field
                                .value_group()
                                .min_above(&step)
                                .unwrap_or_else(|| &step + BigRational::from_integer(1.into()));
                            out.push(field.add(&b.center, &field.uniformizer_pow(&step)?)?);
                        }
                    }
                }
                BallFlavor::Open => {
                    let mut step = b.radius.clone();
                    while out.len() < count {
                        step = field
                            .value_group()
                            .min_above(&step)
                            .unwrap_or_else(|| &step + BigRational::new(1.into(), 2.into()));
                        out.push(field.add(&b.center, &field.uniformizer_pow(&step)?)?);
                    }
                }
            }
        }
        Atom::Family(fam) => {
            for n in 0..count.min(window + 1) {
                out.push(fam.elem(n)?);
            }
        }
    }
    Ok(out)
}

/// Integral elements of value zero (units), deterministic.
fn unit_stream(field: &ValuedField, count: usize) -> Vec<FieldElem> {
    let char_p = match field.residue_card() {
        crate::values::ResidueCard::Finite(p) => Some(p),
        crate::values::ResidueCard::Infinite => None,
    };
    let mut out = Vec::with_capacity(count);
    let mut n: i64 = 1;
    while out.len() < count {
        let skip = match char_p {
            Some(p) => (n as u64) % p == 0,
            None => false,
        };
        if !skip {
            out.push(field.int_elem(n));
        }
        n += 1;
    }
    out
}
