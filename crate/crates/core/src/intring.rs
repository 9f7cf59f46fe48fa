//! Membership tests for `Int(S,V) = {f ∈ K[X] : f(S) ⊆ V}` over the
//! subset-description grammar.
//!
//! Closed balls are decided by the Gauss criterion when the base is
//! non-discrete or has infinite residue field, and by the finite-difference
//! (π-ordering node) test over a DVR with finite residue field. Open balls and
//! spheres are replaced by their polynomial closure first, which leaves
//! membership unchanged. Sequence families contribute window evaluation plus
//! the Gauss criterion at every verified pseudo-limit ball; those verdicts are
//! window-certified.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fields::{FieldElem, FieldKind, QuadSplitting, ValuedField};
use crate::gauss::GaussPoint;
use crate::poly::Poly;
use crate::sets::{closure_atom, Atom, Ball, BallFlavor, Bound, SubsetDesc};
use crate::values::ExtValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Criterion {
    PointwiseEvaluation,
    GaussCriterion,
    FiniteDifference,
}

impl Criterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Criterion::PointwiseEvaluation => "PointwiseEvaluation",
            Criterion::GaussCriterion => "GaussCriterion",
            Criterion::FiniteDifference => "FiniteDifference",
        }
    }
}

#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub member: bool,
    /// A concrete point with `v(f(s)) < 0` for non-member verdicts over
    /// finite and ball atoms.
    pub witness: Option<(FieldElem, ExtValue)>,
    pub criterion: Criterion,
    /// Set when the verdict leans on a finite window of an infinite family.
    pub window_certified: bool,
}

fn is_dvr_finite_residue(field: &ValuedField) -> bool {
    field.is_discrete() && field.residue_card().is_finite()
}

/// Decide `f ∈ Int(S,V)`.
pub fn int_member(
    field: &ValuedField,
    desc: &SubsetDesc,
    f: &Poly,
    window: usize,
) -> Result<MembershipVerdict> {
    desc.check_inside_ring(field, window)?;
    let mut criterion = Criterion::PointwiseEvaluation;
    let mut window_certified = false;
    for atom in &desc.atoms {
        match atom {
            Atom::Finite(elems) => {
                for s in elems {
                    let v = field.valuation(&f.evaluate(field, s)?)?;
                    if !v.is_nonnegative() {
                        return Ok(MembershipVerdict {
                            member: false,
                            witness: Some((s.clone(), v)),
                            criterion: Criterion::PointwiseEvaluation,
                            window_certified,
                        });
                    }
                }
            }
            Atom::Ball(_) => {
                let closed = match closure_atom(field, atom)? {
                    Atom::Ball(b) => b,
                    _ => unreachable!("closure of a ball is a ball"),
                };
                let pieces = match closed.flavor {
                    BallFlavor::Closed => vec![closed],
                    // Over a DVR with finite residue field q the sphere stays
                    // polynomially closed; it is the union of the q-1 closed
                    // balls one level in, around the nonzero residue classes.
                    BallFlavor::Sphere => sphere_cosets(field, &closed)?,
                    BallFlavor::Open => unreachable!("closure removes open balls"),
                };
                for piece in &pieces {
                    let verdict = ball_member(field, piece, f)?;
                    criterion = criterion.max(verdict.criterion);
                    if !verdict.member {
                        return Ok(MembershipVerdict { window_certified, ..verdict });
                    }
                }
            }
            Atom::Family(fam) => {
                fam.validate(window)?;
                window_certified = true;
                for n in 0..=window {
                    let s = fam.elem(n)?;
                    let v = field.valuation(&f.evaluate(field, &s)?)?;
                    if !v.is_nonnegative() {
                        return Ok(MembershipVerdict {
                            member: false,
                            witness: Some((s, v)),
                            criterion: Criterion::PointwiseEvaluation,
                            window_certified,
                        });
                    }
                }
                for lim in &fam.limits {
                    criterion = criterion.max(Criterion::GaussCriterion);
                    let fc = f.coerce(&lim.field)?;
                    match fam.breadth.as_finite() {
                        Some(radius) => {
                            // Every pseudo-limit ball lies in the closure, so
                            // the Gauss value there must be nonnegative.
                            let p = GaussPoint::new(
                                lim.field.clone(),
                                lim.elem.clone(),
                                radius.clone(),
                            );
                            if !p.value_poly(&fc)?.is_nonnegative() {
                                return Ok(MembershipVerdict {
                                    member: false,
                                    witness: None,
                                    criterion: Criterion::GaussCriterion,
                                    window_certified,
                                });
                            }
                        }
                        None => {
                            // Cauchy limit: a single closure point.
                            let v = lim.field.valuation(&fc.evaluate(&lim.field, &lim.elem)?)?;
                            if !v.is_nonnegative() {
                                return Ok(MembershipVerdict {
                                    member: false,
                                    witness: None,
                                    criterion: Criterion::GaussCriterion,
                                    window_certified,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(MembershipVerdict { member: true, witness: None, criterion, window_certified })
}

/// Decompose `∂B(c,γ)` over a DVR with finite residue field `q` into the
/// closed balls `B(c + r·τ, γ + 1/e)` for the nonzero residue representatives
/// `r`.
fn sphere_cosets(field: &ValuedField, sphere: &Ball) -> Result<Vec<Ball>> {
    debug_assert!(is_dvr_finite_residue(field));
    let group = field.value_group();
    let radius = group.ceil_to(&sphere.radius);
    let inner = group.min_above(&radius).expect("discrete group");
    let tau = field.uniformizer_pow(&radius)?;
    let q = match field.residue_card() {
        crate::values::ResidueCard::Finite(q) => q,
        crate::values::ResidueCard::Infinite => unreachable!("finite residue checked"),
    };
    let reps = field
        .distinct_units(q as usize)
        .expect("q representatives exist");
    let mut out = Vec::with_capacity(q as usize - 1);
    for r in reps.iter().skip(1) {
        let center = field.add(&sphere.center, &field.mul(r, &tau)?)?;
        out.push(Ball::closed(center, inner.clone()));
    }
    Ok(out)
}

/// Membership over one closed ball.
fn ball_member(field: &ValuedField, ball: &Ball, f: &Poly) -> Result<MembershipVerdict> {
    debug_assert_eq!(ball.flavor, BallFlavor::Closed);
    // As a set, a ball with radius outside the value group equals the ball at
    // the next group level.
    let radius = field.value_group().ceil_to(&ball.radius);
    if is_dvr_finite_residue(field) {
        dvr_ball_member(field, &ball.center, &radius, f)
    } else {
        let p = GaussPoint::new(field.clone(), ball.center.clone(), radius.clone());
        let value = p.value_poly(f)?;
        if value.is_nonnegative() {
            Ok(MembershipVerdict {
                member: true,
                witness: None,
                criterion: Criterion::GaussCriterion,
                window_certified: false,
            })
        } else {
            let witness = gauss_ball_witness(field, &ball.center, &radius, f)?;
            Ok(MembershipVerdict {
                member: false,
                witness: Some(witness),
                criterion: Criterion::GaussCriterion,
                window_certified: false,
            })
        }
    }
}

/// Finite-difference test over a DVR with finite residue field: substitute
/// the ball parametrization and check the Newton coefficients on a π-ordering
/// of the ring. Node values and Newton coefficients generate the same
/// lattice, so scanning nodes also extracts a witness.
fn dvr_ball_member(
    field: &ValuedField,
    center: &FieldElem,
    radius: &BigRational,
    f: &Poly,
) -> Result<MembershipVerdict> {
    let tau = field.uniformizer_pow(radius)?;
    // g(X) = f(center + τ·X) via the Taylor expansion at the center.
    let coeffs = f.taylor_at(field, center)?;
    let mut g_coeffs = Vec::with_capacity(coeffs.len());
    let mut tau_pow = field.one();
    for a in &coeffs {
        g_coeffs.push(field.mul(a, &tau_pow)?);
        tau_pow = field.mul(&tau_pow, &tau)?;
    }
    let g = Poly::from_coeffs(field, g_coeffs);
    let degree = g.degree().unwrap_or(0);

    let member = match field.kind() {
        FieldKind::PadicRat { .. } => g
            .finite_differences(field)?
            .iter()
            .map(|c| field.valuation(c))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|v| v.is_nonnegative()),
        _ => {
            let nodes = pi_ordering(field, degree + 1)?;
            let mut ok = true;
            for u in &nodes {
                if !field.valuation(&g.evaluate(field, u)?)?.is_nonnegative() {
                    ok = false;
                    break;
                }
            }
            ok
        }
    };
    if member {
        return Ok(MembershipVerdict {
            member: true,
            witness: None,
            criterion: Criterion::FiniteDifference,
            window_certified: false,
        });
    }
    for u in pi_ordering(field, degree + 1)? {
        let s = field.add(center, &field.mul(&tau, &u)?)?;
        let v = field.valuation(&f.evaluate(field, &s)?)?;
        if !v.is_nonnegative() {
            return Ok(MembershipVerdict {
                member: false,
                witness: Some((s, v)),
                criterion: Criterion::FiniteDifference,
                window_certified: false,
            });
        }
    }
    unreachable!("a negative Newton coefficient forces a negative node value")
}

/// The start of a π-ordering of the valuation ring: digit sums over residue
/// representatives. Over the p-adic rationals (and the split quadratic case,
/// whose residues are also 0..p-1) this is just 0, 1, 2, ….
fn pi_ordering(field: &ValuedField, count: usize) -> Result<Vec<FieldElem>> {
    match field.kind() {
        FieldKind::PadicRat { .. } => Ok((0..count as i64).map(|n| field.int_elem(n)).collect()),
        FieldKind::QuadExt { p, splitting, .. } => {
            let p = *p;
            match splitting {
                QuadSplitting::Split => {
                    Ok((0..count as i64).map(|n| field.int_elem(n)).collect())
                }
                QuadSplitting::Inert => {
                    // Residue field of size p²: representatives a + b·w,
                    // digits in base p².
                    let q = p * p;
                    let w = field.quad_root()?;
                    let mut out = Vec::with_capacity(count);
                    for n in 0..count as u64 {
                        let mut acc = field.zero();
                        let mut rem = n;
                        let mut scale = field.one();
                        let p_elem = field.int_elem(p as i64);
                        loop {
                            let digit = rem % q;
                            let a = field.int_elem((digit % p) as i64);
                            let b = field.int_elem((digit / p) as i64);
                            let rep = field.add(&a, &field.mul(&b, &w)?)?;
                            acc = field.add(&acc, &field.mul(&rep, &scale)?)?;
                            rem /= q;
                            if rem == 0 {
                                break;
                            }
                            scale = field.mul(&scale, &p_elem)?;
                        }
                        out.push(acc);
                    }
                    Ok(out)
                }
                QuadSplitting::Ramified => {
                    // Uniformizer is the adjoined root; digits in base p.
                    let w = field.quad_root()?;
                    let mut out = Vec::with_capacity(count);
                    for n in 0..count as u64 {
                        let mut acc = field.zero();
                        let mut rem = n;
                        let mut scale = field.one();
                        loop {
                            let digit = field.int_elem((rem % p) as i64);
                            acc = field.add(&acc, &field.mul(&digit, &scale)?)?;
                            rem /= p;
                            if rem == 0 {
                                break;
                            }
                            scale = field.mul(&scale, &w)?;
                        }
                        out.push(acc);
                    }
                    Ok(out)
                }
            }
        }
        _ => Err(Error::UnsupportedAtom("π-ordering requires a DVR with finite residue".into())),
    }
}

/// A concrete point of the closed ball where a Gauss-negative polynomial
/// takes a negative value. Over an infinite residue field, enough units in a
/// Vandermonde family must expose the minimum; over a finite residue field
/// with dense value group, a radius bumped by a small exact ε makes the
/// minimizing index unique.
fn gauss_ball_witness(
    field: &ValuedField,
    center: &FieldElem,
    radius: &BigRational,
    f: &Poly,
) -> Result<(FieldElem, ExtValue)> {
    let check = |s: FieldElem| -> Result<Option<(FieldElem, ExtValue)>> {
        let v = field.valuation(&f.evaluate(field, &s)?)?;
        Ok(if v.is_nonnegative() { None } else { Some((s, v)) })
    };
    if let Some(w) = check(center.clone())? {
        return Ok(w);
    }
    let degree = f.degree().unwrap_or(0);
    if !field.residue_card().is_finite() {
        let tau = field.uniformizer_pow(radius)?;
        if let Some(units) = field.distinct_units(degree + 2) {
            for u in units.iter().skip(1) {
                let s = field.add(center, &field.mul(u, &tau)?)?;
                if let Some(w) = check(s)? {
                    return Ok(w);
                }
            }
        }
    }
    // Exact ε so that min_i v(a_i) + i(radius+ε) is attained at a unique
    // index and still negative.
    let coeffs = f.taylor_at(field, center)?;
    let mut vals: Vec<(usize, BigRational)> = Vec::new();
    let mut min_at_radius: Option<BigRational> = None;
    for (i, a) in coeffs.iter().enumerate() {
        if let ExtValue::Finite(v) = field.valuation(a)? {
            let at = &v + radius * BigRational::from_integer(i.into());
            if min_at_radius.as_ref().map_or(true, |m| at < *m) {
                min_at_radius = Some(at);
            }
            vals.push((i, v));
        }
    }
    let min_at_radius = min_at_radius.expect("Gauss-negative polynomial is nonzero");
    debug_assert!(min_at_radius.is_negative());
    let mut eps = BigRational::one();
    for (i, vi) in &vals {
        for (j, vj) in &vals {
            if i < j {
                let crossing = (vi - vj) / BigRational::from_integer((*j - *i).into());
                let offset = &crossing - radius;
                if offset.is_positive() && offset < eps {
                    eps = offset;
                }
            }
        }
    }
    let scale = BigRational::from_integer((2 * (degree as i64 + 1)).into());
    eps = (eps / BigRational::from_integer(2.into())).min(-&min_at_radius / scale);
    if eps.is_zero() {
        eps = BigRational::one();
    }
    let bumped = radius + &eps;
    let s = field.add(center, &field.uniformizer_pow(&bumped)?)?;
    if let Some(w) = check(s)? {
        return Ok(w);
    }
    unreachable!("unique minimizing index yields an exact negative value")
}

/// Whether `Int(S,V) ⊂ V_{α,γ}` for the given Gauss point, i.e. whether
/// `B(α,γ)` lies inside the closure of `S` as far as the grammar can see:
/// the ball-union part of the closure plus every verified pseudo-limit ball.
/// Only meaningful when the base is non-discrete or has infinite residue
/// field; over a DVR with finite residue field the ball criterion fails and
/// the call is rejected.
pub fn int_contained_in_gauss(
    field: &ValuedField,
    desc: &SubsetDesc,
    point: &GaussPoint,
    window: usize,
) -> Result<bool> {
    if is_dvr_finite_residue(field) {
        return Err(Error::EquivalenceUnavailable);
    }
    if !point.field.extends(field) {
        return Err(Error::MixedFields);
    }
    for ball in covering_balls(field, desc, window)? {
        if !ball.field.extends(field) {
            continue;
        }
        // Compare in whichever of the two fields is the larger one.
        let (cmp_field, pc, bc) = if point.field == ball.field {
            (point.field.clone(), point.center.clone(), ball.center.clone())
        } else if point.field.extends(&ball.field) {
            (point.field.clone(), point.center.clone(), point.field.coerce(&ball.center)?)
        } else if ball.field.extends(&point.field) {
            (ball.field.clone(), ball.field.coerce(&point.center)?, ball.center.clone())
        } else {
            continue;
        };
        let dist = cmp_field.valuation(&cmp_field.sub(&pc, &bc)?)?;
        if ball.radius <= point.radius && dist >= ExtValue::Finite(ball.radius.clone()) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Closed balls known to lie inside the closure of `S`: closures of ball
/// atoms and verified pseudo-limit balls of families (closed at the breadth).
fn covering_balls(
    field: &ValuedField,
    desc: &SubsetDesc,
    window: usize,
) -> Result<Vec<GaussPoint>> {
    let mut out = Vec::new();
    for atom in &desc.atoms {
        match atom {
            Atom::Finite(_) => {}
            Atom::Ball(_) => {
                if let Atom::Ball(b) = closure_atom(field, atom)? {
                    if b.flavor == BallFlavor::Closed {
                        out.push(GaussPoint::new(
                            field.clone(),
                            b.center.clone(),
                            field.value_group().ceil_to(&b.radius),
                        ));
                    }
                }
            }
            Atom::Family(fam) => {
                for lim in &fam.limits {
                    if let Some(radius) = fam.breadth.as_finite() {
                        if fam.is_pseudo_limit(&lim.field, &lim.elem, window)? {
                            out.push(GaussPoint::new(
                                lim.field.clone(),
                                lim.elem.clone(),
                                radius.clone(),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The least `γ` with `Int(S,V) ⊂ V_{center,γ}` visible on the grammar: the
/// radius of the largest covering ball around the center, reported with
/// whether the infimum is attained (it is exactly when it lies in the value
/// group).
pub fn minimal_gamma(
    field: &ValuedField,
    desc: &SubsetDesc,
    center_field: &ValuedField,
    center: &FieldElem,
    window: usize,
) -> Result<Option<Bound>> {
    if is_dvr_finite_residue(field) {
        return Err(Error::EquivalenceUnavailable);
    }
    let mut best: Option<BigRational> = None;
    for ball in covering_balls(field, desc, window)? {
        let (cmp_field, pc, bc) = if *center_field == ball.field {
            (center_field.clone(), center.clone(), ball.center.clone())
        } else if center_field.extends(&ball.field) {
            (center_field.clone(), center.clone(), center_field.coerce(&ball.center)?)
        } else if ball.field.extends(center_field) {
            (ball.field.clone(), ball.field.coerce(center)?, ball.center.clone())
        } else {
            continue;
        };
        let dist = cmp_field.valuation(&cmp_field.sub(&pc, &bc)?)?;
        if dist >= ExtValue::Finite(ball.radius.clone())
            && best.as_ref().map_or(true, |b| ball.radius < *b)
        {
            best = Some(ball.radius.clone());
        }
    }
    Ok(best.map(|gamma| {
        let attained = field
            .value_group()
            .contains(&ExtValue::Finite(gamma.clone()))
            .expect("finite");
        Bound { value: ExtValue::Finite(gamma), attained }
    }))
}
