//! Certificate-producing decision procedure for "`Int(S,V)` is a Prüfer
//! domain" over the description grammar.
//!
//! The verdict follows a rule cascade. Finite sets are always Prüfer. Over a
//! DVR with finite residue field everything the grammar can describe is
//! precompact, hence Prüfer; pseudo-stationary families cannot even
//! window-validate there. Over an infinite-residue or non-discrete base,
//! every ball or sphere atom yields an explicitly constructed pseudo-monotone
//! witness, and sequence families decide by their breadth ideal, verified
//! type and verified pseudo-limits. Negative verdicts always carry a
//! replayable witness: the family re-classifies and the pseudo-limit
//! re-verifies at any window.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fields::{FieldElem, ValuedField};
use crate::gauss::GaussPoint;
use crate::intring::int_contained_in_gauss;
use crate::sequences::{
    DeclaredLimit, ExpForm, FamilyGen, SeqFamily, SeqKind, TypeVerdict,
};
use crate::sets::{closure_atom, Atom, Ball, BallFlavor, SubsetDesc};
use crate::values::{ExtValue, ResidueCard};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    FiniteSet,
    Precompact,
    ZeroBreadthIdeal,
    TranscendentalType,
    PseudoMonotoneWitness,
}

impl Rule {
    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::FiniteSet => "FiniteSet",
            Rule::Precompact => "Precompact",
            Rule::ZeroBreadthIdeal => "ZeroBreadthIdeal",
            Rule::TranscendentalType => "TranscendentalType",
            Rule::PseudoMonotoneWitness => "PseudoMonotoneWitness",
        }
    }
}

/// A concrete pseudo-monotone sequence inside `S` together with a verified
/// pseudo-limit and its breadth.
#[derive(Debug, Clone)]
pub struct Witness {
    pub family: SeqFamily,
    pub limit_field: ValuedField,
    pub limit: FieldElem,
    pub breadth: ExtValue,
}

impl Witness {
    /// Re-run classification and the pseudo-limit pattern at the given
    /// window. Witnesses must replay at any window size.
    pub fn replay(&self, window: usize) -> Result<bool> {
        let cls = self.family.classify_window(window)?;
        if !cls.consistent {
            return Ok(false);
        }
        self.family.is_pseudo_limit(&self.limit_field, &self.limit, window)
    }
}

#[derive(Debug, Clone)]
pub enum Certificate {
    FiniteSet,
    Precompact,
    PseudoMonotoneWitness(Witness),
    TranscendentalType { family: String },
    ZeroBreadthIdeal { family: String },
}

#[derive(Debug, Clone, Default)]
pub struct Caveats {
    pub window: usize,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct PruferVerdict {
    pub prufer: bool,
    pub rule: Rule,
    pub certificate: Certificate,
    pub caveats: Caveats,
}

/// Decide whether `Int(S,V)` is Prüfer, with a certificate.
pub fn decide_prufer(
    field: &ValuedField,
    desc: &SubsetDesc,
    window: usize,
) -> Result<PruferVerdict> {
    desc.check_inside_ring(field, window)?;
    let mut caveats = Caveats { window, notes: Vec::new() };
    for fam in desc.families() {
        fam.validate(window)?;
        caveats
            .notes
            .push(format!("family verdicts are certified on the window [0, {window}]"));
        break;
    }

    if desc.is_finite() {
        return Ok(PruferVerdict {
            prufer: true,
            rule: Rule::FiniteSet,
            certificate: Certificate::FiniteSet,
            caveats,
        });
    }

    if field.is_discrete() && field.residue_card().is_finite() {
        // Everything the grammar can put inside a DVR with finite residue
        // field is precompact: balls and spheres have finitely many residue
        // classes at every level, and the only families that validate are
        // Cauchy (zero breadth ideal).
        let has_ball = desc.balls().next().is_some();
        let (rule, certificate) = if has_ball {
            (Rule::Precompact, Certificate::Precompact)
        } else {
            let fam = desc.families().next().expect("non-finite desc without balls has a family");
            (
                Rule::ZeroBreadthIdeal,
                Certificate::ZeroBreadthIdeal { family: crate::literal::render_family(fam) },
            )
        };
        return Ok(PruferVerdict { prufer: true, rule, certificate, caveats });
    }

    if let Some(witness) = find_witness(field, desc, window)? {
        return Ok(PruferVerdict {
            prufer: false,
            rule: Rule::PseudoMonotoneWitness,
            certificate: Certificate::PseudoMonotoneWitness(witness),
            caveats,
        });
    }

    // No witness: the description is a union of finite sets and families
    // that are either Cauchy or of verified transcendental type.
    let mut zero_breadth: Option<&SeqFamily> = None;
    let mut transcendental: Option<&SeqFamily> = None;
    for fam in desc.families() {
        if fam.breadth.is_infinite() {
            zero_breadth.get_or_insert(fam);
        } else {
            transcendental.get_or_insert(fam);
        }
    }
    let (rule, certificate) = if let Some(fam) = transcendental {
        (
            Rule::TranscendentalType,
            Certificate::TranscendentalType { family: crate::literal::render_family(fam) },
        )
    } else if let Some(fam) = zero_breadth {
        (
            Rule::ZeroBreadthIdeal,
            Certificate::ZeroBreadthIdeal { family: crate::literal::render_family(fam) },
        )
    } else {
        (Rule::FiniteSet, Certificate::FiniteSet)
    };
    Ok(PruferVerdict { prufer: true, rule, certificate, caveats })
}

/// Search for a pseudo-monotone witness in description order. Negative
/// verdicts are built from the first atom that produces one; every returned
/// witness replays through classification and the pseudo-limit check.
pub fn find_witness(
    field: &ValuedField,
    desc: &SubsetDesc,
    window: usize,
) -> Result<Option<Witness>> {
    if field.is_discrete() && field.residue_card().is_finite() {
        return Ok(None);
    }
    // A convergent family whose metadata cannot be verified is an error, but
    // only after the cross-atom sweep has had a chance to locate a limit for
    // it among the other atoms.
    let mut deferred: Option<Error> = None;
    for atom in &desc.atoms {
        match atom {
            Atom::Finite(_) => {}
            Atom::Ball(b) => {
                let w = ball_witness(field, b)?;
                debug_assert!(w.replay(window)?, "synthesized witness must replay");
                return Ok(Some(w));
            }
            Atom::Family(fam) => match family_witness(field, fam, window) {
                Ok(Some(w)) => return Ok(Some(w)),
                Ok(None) => {}
                Err(e @ Error::UnvalidatedFamily(_)) => {
                    deferred.get_or_insert(e);
                }
                Err(e) => return Err(e),
            },
        }
    }
    // Cross-atom sweep: a family may pseudo-converge to a point named by a
    // different atom without declaring it.
    let candidates = cross_candidates(field, desc, window)?;
    for fam in desc.families() {
        if fam.breadth.is_infinite() {
            continue;
        }
        for cand in &candidates {
            if fam.is_pseudo_limit(field, cand, window)? {
                return Ok(Some(Witness {
                    family: fam.clone(),
                    limit_field: field.clone(),
                    limit: cand.clone(),
                    breadth: fam.breadth.clone(),
                }));
            }
        }
    }
    match deferred {
        Some(e) => Err(e),
        None => Ok(None),
    }
}

/// Centers named anywhere in the description, used by the cross-atom sweep.
fn cross_candidates(
    field: &ValuedField,
    desc: &SubsetDesc,
    window: usize,
) -> Result<Vec<FieldElem>> {
    let mut out = Vec::new();
    for atom in &desc.atoms {
        match atom {
            Atom::Finite(elems) => out.extend(elems.iter().cloned()),
            Atom::Ball(b) => out.push(b.center.clone()),
            Atom::Family(fam) => {
                for lim in &fam.limits {
                    if lim.field == *field {
                        out.push(lim.elem.clone());
                    }
                }
                out.push(fam.elem(0)?);
            }
        }
    }
    let _ = window;
    Ok(out)
}

/// Construct a pseudo-monotone sequence inside a ball or sphere atom over a
/// base that is non-discrete or has infinite residue field.
fn ball_witness(field: &ValuedField, ball: &Ball) -> Result<Witness> {
    let group = field.value_group();
    let infinite_residue = matches!(field.residue_card(), ResidueCard::Infinite);
    // The level at which the atom's members actually sit.
    let level: BigRational = match ball.flavor {
        BallFlavor::Closed | BallFlavor::Sphere => group.ceil_to(&ball.radius),
        BallFlavor::Open => match group.min_above(&ball.radius) {
            Some(next) => next,
            // Dense group: witnesses live strictly inside; the divergent
            // construction below handles it with the raw radius.
            None => ball.radius.clone(),
        },
    };
    if field.is_discrete() {
        // Infinite residue field: enumerate residues at the level.
        debug_assert!(infinite_residue);
        let tau = field.uniformizer_pow(&level)?;
        let start = field.add(&ball.center, &tau)?;
        let family = SeqFamily::new(
            field.clone(),
            FamilyGen::Arith { start, step: tau },
            SeqKind::PseudoStationary,
            ExtValue::Finite(level.clone()),
            None,
            vec![DeclaredLimit { field: field.clone(), elem: ball.center.clone() }],
        );
        return Ok(Witness {
            family,
            limit_field: field.clone(),
            limit: ball.center.clone(),
            breadth: ExtValue::Finite(level),
        });
    }
    // Non-discrete base.
    match ball.flavor {
        BallFlavor::Closed | BallFlavor::Open => {
            // Pseudo-divergent toward the center: s_n = c + t^(γ + 1/(n+1)).
            let (family, limit) = divergent_into(field, &ball.center, &ball.radius)?;
            Ok(Witness {
                family,
                limit_field: field.clone(),
                limit,
                breadth: ExtValue::Finite(ball.radius.clone()),
            })
        }
        BallFlavor::Sphere => {
            if infinite_residue {
                // Pseudo-stationary around the sphere at its own level.
                let tau = field.uniformizer_pow(&level)?;
                let start = field.add(&ball.center, &tau)?;
                let family = SeqFamily::new(
                    field.clone(),
                    FamilyGen::Arith { start, step: tau },
                    SeqKind::PseudoStationary,
                    ExtValue::Finite(level.clone()),
                    None,
                    vec![DeclaredLimit { field: field.clone(), elem: ball.center.clone() }],
                );
                Ok(Witness {
                    family,
                    limit_field: field.clone(),
                    limit: ball.center.clone(),
                    breadth: ExtValue::Finite(level),
                })
            } else {
                // Finite residue field: go pseudo-divergent toward a point of
                // the sphere itself.
                let tau = field.uniformizer_pow(&level)?;
                let anchor = field.add(&ball.center, &tau)?;
                let (family, limit) = divergent_into(field, &anchor, &level)?;
                Ok(Witness {
                    family,
                    limit_field: field.clone(),
                    limit,
                    breadth: ExtValue::Finite(level),
                })
            }
        }
    }
}

/// `s_n = center + t^(radius + 1/(n+1))`: pseudo-divergent with breadth
/// `radius` and pseudo-limit the center, strictly inside `B(center, radius)`.
fn divergent_into(
    field: &ValuedField,
    center: &FieldElem,
    radius: &BigRational,
) -> Result<(SeqFamily, FieldElem)> {
    let exps = ExpForm::parse(&format!("({radius}) + 1/(n+1)"))?;
    let family = SeqFamily::new(
        field.clone(),
        FamilyGen::HahnPow { exps, center: center.clone() },
        SeqKind::PseudoDivergent,
        ExtValue::Finite(radius.clone()),
        None,
        vec![DeclaredLimit { field: field.clone(), elem: center.clone() }],
    );
    Ok((family, center.clone()))
}

/// Witness search inside a single validated family.
fn family_witness(
    field: &ValuedField,
    fam: &SeqFamily,
    window: usize,
) -> Result<Option<Witness>> {
    match fam.kind {
        SeqKind::PseudoStationary => {
            // In the broadened sense every element of the sequence is a
            // pseudo-limit; prefer a declared one.
            let (limit_field, limit) = match fam.limits.first() {
                Some(l) => (l.field.clone(), l.elem.clone()),
                None => (field.clone(), fam.elem(0)?),
            };
            Ok(Some(Witness {
                family: fam.clone(),
                limit_field,
                limit,
                breadth: fam.breadth.clone(),
            }))
        }
        SeqKind::PseudoDivergent => {
            // Any element is definitively a pseudo-limit of the tail.
            if let Some(l) = fam.limits.first() {
                return Ok(Some(Witness {
                    family: fam.clone(),
                    limit_field: l.field.clone(),
                    limit: l.elem.clone(),
                    breadth: fam.breadth.clone(),
                }));
            }
            let limit = fam.elem(0)?;
            Ok(Some(Witness {
                family: fam.shifted(1),
                limit_field: field.clone(),
                limit,
                breadth: fam.breadth.clone(),
            }))
        }
        SeqKind::PseudoConvergent => {
            if fam.breadth.is_infinite() {
                // Zero breadth ideal: Prüfer regardless of type.
                return Ok(None);
            }
            if let Some(l) = fam.limits.first() {
                return Ok(Some(Witness {
                    family: fam.clone(),
                    limit_field: l.field.clone(),
                    limit: l.elem.clone(),
                    breadth: fam.breadth.clone(),
                }));
            }
            match fam.type_check(window)? {
                TypeVerdict::TranscendentalConsistent => Ok(None),
                TypeVerdict::AlgebraicVerified => Err(Error::UnvalidatedFamily(
                    "algebraic-type family needs a declared pseudo-limit (possibly in a \
                     quadratic extension) to produce a replayable witness"
                        .into(),
                )),
                TypeVerdict::Inconclusive { offending } => Err(Error::UnvalidatedFamily(format!(
                    "convergent family with nonzero breadth has no verified type or \
                     pseudo-limit (offending indices {offending:?})"
                ))),
            }
        }
    }
}

/// Search for a Gauss point `(α,γ)` with `Int(S,V) ⊂ V_{α,γ}`, verified by
/// the closure containment test. Over a DVR with finite residue field no such
/// point exists for any grammar instance.
pub fn gauss_overring_exists(
    field: &ValuedField,
    desc: &SubsetDesc,
    window: usize,
) -> Result<Option<GaussPoint>> {
    if field.is_discrete() && field.residue_card().is_finite() {
        return Ok(None);
    }
    let mut candidates: Vec<GaussPoint> = Vec::new();
    for atom in &desc.atoms {
        match atom {
            Atom::Finite(_) => {}
            Atom::Ball(_) => {
                if let Atom::Ball(b) = closure_atom(field, atom)? {
                    candidates.push(GaussPoint::new(
                        field.clone(),
                        b.center.clone(),
                        field.value_group().ceil_to(&b.radius),
                    ));
                }
            }
            Atom::Family(fam) => {
                if let Some(radius) = fam.breadth.as_finite() {
                    for lim in &fam.limits {
                        candidates.push(GaussPoint::new(
                            lim.field.clone(),
                            lim.elem.clone(),
                            radius.clone(),
                        ));
                    }
                    candidates.push(GaussPoint::new(field.clone(), fam.elem(0)?, radius.clone()));
                }
            }
        }
    }
    for p in candidates {
        if int_contained_in_gauss(field, desc, &p, window)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Precompactness of the described set, computed directly from the grammar:
/// finite sets and Cauchy families are precompact, balls and spheres are
/// precompact exactly over a DVR with finite residue field, and all other
/// families are not precompact.
pub fn precompact_on_grammar(field: &ValuedField, desc: &SubsetDesc) -> Result<bool> {
    let compact_balls = field.is_discrete() && field.residue_card().is_finite();
    for atom in &desc.atoms {
        match atom {
            Atom::Finite(_) => {}
            Atom::Ball(_) => {
                if !compact_balls {
                    return Ok(false);
                }
            }
            Atom::Family(fam) => {
                let cauchy =
                    fam.kind == SeqKind::PseudoConvergent && fam.breadth.is_infinite();
                if !cauchy {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether a pseudo-stationary witness is absent, computed independently of
/// [`decide_prufer`]: no stationary family atoms and no ball or sphere atom
/// over an infinite-residue base dense enough to enumerate residues.
pub fn stationary_witness_absent(field: &ValuedField, desc: &SubsetDesc) -> Result<bool> {
    let infinite_residue = matches!(field.residue_card(), ResidueCard::Infinite);
    for atom in &desc.atoms {
        match atom {
            Atom::Finite(_) => {}
            Atom::Ball(_) => {
                if infinite_residue {
                    return Ok(false);
                }
            }
            Atom::Family(fam) => {
                if fam.kind == SeqKind::PseudoStationary {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Structural subset check on the grammar: every atom of `small` is covered
/// by an atom of `large` (finite sets point-by-point, balls by the nesting
/// criterion). Families are only matched structurally against themselves.
pub fn desc_subset(field: &ValuedField, small: &SubsetDesc, large: &SubsetDesc) -> Result<bool> {
    for atom in &small.atoms {
        let covered = match atom {
            Atom::Finite(elems) => {
                let mut all = true;
                for e in elems {
                    let mut found = false;
                    for big in &large.atoms {
                        match big {
                            Atom::Finite(bs) => {
                                if bs.iter().any(|b| field.eq_elems(b, e)) {
                                    found = true;
                                }
                            }
                            Atom::Ball(b) => {
                                if b.member(field, e)? {
                                    found = true;
                                }
                            }
                            Atom::Family(_) => {}
                        }
                        if found {
                            break;
                        }
                    }
                    all &= found;
                }
                all
            }
            Atom::Ball(b) if b.flavor == BallFlavor::Closed => {
                let mut found = false;
                for big in &large.atoms {
                    if let Atom::Ball(bb) = big {
                        if bb.flavor == BallFlavor::Closed {
                            use crate::sets::BallRelation::*;
                            if matches!(bb.relate(field, b)?, FirstContainsSecond | Equal) {
                                found = true;
                                break;
                            }
                        }
                    }
                }
                found
            }
            _ => false,
        };
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::TypeDecl;
    use crate::values::integer;

    fn window() -> usize {
        12
    }

    #[test]
    fn finite_sets_are_prufer() {
        let f5 = ValuedField::padic(5).unwrap();
        let desc = SubsetDesc::single(
            &f5,
            Atom::Finite(vec![f5.zero(), f5.one(), f5.int_elem(2)]),
        )
        .unwrap();
        let v = decide_prufer(&f5, &desc, window()).unwrap();
        assert!(v.prufer);
        assert_eq!(v.rule, Rule::FiniteSet);
    }

    #[test]
    fn dvr_finite_residue_ball_is_precompact() {
        let f5 = ValuedField::padic(5).unwrap();
        let desc =
            SubsetDesc::single(&f5, Atom::Ball(Ball::closed(f5.zero(), integer(0)))).unwrap();
        let v = decide_prufer(&f5, &desc, window()).unwrap();
        assert!(v.prufer);
        assert_eq!(v.rule, Rule::Precompact);
        assert!(gauss_overring_exists(&f5, &desc, window()).unwrap().is_none());
    }

    #[test]
    fn tadic_ball_has_stationary_witness() {
        let t = ValuedField::tadic();
        let desc =
            SubsetDesc::single(&t, Atom::Ball(Ball::closed(t.zero(), integer(0)))).unwrap();
        let v = decide_prufer(&t, &desc, window()).unwrap();
        assert!(!v.prufer);
        let w = match &v.certificate {
            Certificate::PseudoMonotoneWitness(w) => w,
            other => panic!("want witness, got {other:?}"),
        };
        assert_eq!(w.family.kind, SeqKind::PseudoStationary);
        assert_eq!(w.breadth, ExtValue::zero());
        assert!(w.replay(2 * window()).unwrap());
        // Witness elements really live inside the atom.
        let ball = Ball::closed(t.zero(), integer(0));
        for n in 0..=window() {
            assert!(ball.member(&t, &w.family.elem(n).unwrap()).unwrap());
        }
        assert!(gauss_overring_exists(&t, &desc, window()).unwrap().is_some());
    }

    #[test]
    fn hahn_ball_has_divergent_witness() {
        let h = ValuedField::hahn();
        let desc =
            SubsetDesc::single(&h, Atom::Ball(Ball::closed(h.zero(), integer(1)))).unwrap();
        let v = decide_prufer(&h, &desc, window()).unwrap();
        assert!(!v.prufer);
        let w = match &v.certificate {
            Certificate::PseudoMonotoneWitness(w) => w,
            other => panic!("want witness, got {other:?}"),
        };
        assert_eq!(w.family.kind, SeqKind::PseudoDivergent);
        assert_eq!(w.breadth, ExtValue::from_int(1));
        assert!(w.replay(2 * window()).unwrap());
        let ball = Ball::closed(h.zero(), integer(1));
        for n in 0..=window() {
            assert!(ball.member(&h, &w.family.elem(n).unwrap()).unwrap());
        }
        let p = gauss_overring_exists(&h, &desc, window()).unwrap().expect("gauss point");
        assert_eq!(p.radius, integer(1));
    }

    #[test]
    fn sphere_witnesses_match_residue_card() {
        // Infinite residue: stationary inside the sphere.
        let h = ValuedField::hahn();
        let desc =
            SubsetDesc::single(&h, Atom::Ball(Ball::sphere(h.zero(), integer(0)))).unwrap();
        let v = decide_prufer(&h, &desc, window()).unwrap();
        assert!(!v.prufer);
        if let Certificate::PseudoMonotoneWitness(w) = &v.certificate {
            assert_eq!(w.family.kind, SeqKind::PseudoStationary);
            assert!(w.replay(2 * window()).unwrap());
            let sphere = Ball::sphere(h.zero(), integer(0));
            for n in 0..=window() {
                assert!(sphere.member(&h, &w.family.elem(n).unwrap()).unwrap());
            }
        } else {
            panic!("witness expected");
        }
        // Finite residue, non-discrete: divergent inside the sphere.
        let h3 = ValuedField::hahn_fp(3).unwrap();
        let desc =
            SubsetDesc::single(&h3, Atom::Ball(Ball::sphere(h3.zero(), integer(0)))).unwrap();
        let v = decide_prufer(&h3, &desc, window()).unwrap();
        assert!(!v.prufer);
        if let Certificate::PseudoMonotoneWitness(w) = &v.certificate {
            assert_eq!(w.family.kind, SeqKind::PseudoDivergent);
            assert!(w.replay(2 * window()).unwrap());
            let sphere = Ball::sphere(h3.zero(), integer(0));
            for n in 0..=window() {
                assert!(sphere.member(&h3, &w.family.elem(n).unwrap()).unwrap());
            }
        } else {
            panic!("witness expected");
        }
    }

    #[test]
    fn loper_werner_family_rules() {
        use crate::sequences::ExpForm;
        // Cauchy over qp:5: Prüfer with zero breadth ideal.
        let f5 = ValuedField::padic(5).unwrap();
        let fam = SeqFamily::new(
            f5.clone(),
            FamilyGen::Geometric { scale: f5.one(), ratio: f5.int_elem(5) },
            SeqKind::PseudoConvergent,
            ExtValue::Infinity,
            None,
            vec![DeclaredLimit { field: f5.clone(), elem: f5.zero() }],
        );
        let desc = SubsetDesc::single(&f5, Atom::Family(fam)).unwrap();
        let v = decide_prufer(&f5, &desc, window()).unwrap();
        assert!(v.prufer);
        assert_eq!(v.rule, Rule::ZeroBreadthIdeal);

        // Transcendental type with nonzero breadth over hahn: Prüfer.
        let h = ValuedField::hahn();
        let fam = SeqFamily::new(
            h.clone(),
            FamilyGen::HahnPartial { exps: ExpForm::parse("1-1/k").unwrap() },
            SeqKind::PseudoConvergent,
            ExtValue::from_int(1),
            Some(TypeDecl::Transcendental),
            vec![],
        );
        let desc = SubsetDesc::single(&h, Atom::Family(fam)).unwrap();
        let v = decide_prufer(&h, &desc, window()).unwrap();
        assert!(v.prufer);
        assert_eq!(v.rule, Rule::TranscendentalType);
        assert!(gauss_overring_exists(&h, &desc, window()).unwrap().is_none());

        // Verified pseudo-limit with nonzero breadth: not Prüfer.
        let fam = SeqFamily::new(
            h.clone(),
            FamilyGen::HahnPow {
                exps: ExpForm::parse("1-1/(n+1)").unwrap(),
                center: h.zero(),
            },
            SeqKind::PseudoConvergent,
            ExtValue::from_int(1),
            None,
            vec![DeclaredLimit { field: h.clone(), elem: h.zero() }],
        );
        let desc = SubsetDesc::single(&h, Atom::Family(fam)).unwrap();
        let v = decide_prufer(&h, &desc, window()).unwrap();
        assert!(!v.prufer);
        if let Certificate::PseudoMonotoneWitness(w) = &v.certificate {
            assert!(w.replay(2 * window()).unwrap());
        } else {
            panic!("witness expected");
        }
        assert!(gauss_overring_exists(&h, &desc, window()).unwrap().is_some());
    }

    #[test]
    fn undeclared_transcendental_with_obvious_limit_is_rejected() {
        let h = ValuedField::hahn();
        let fam = SeqFamily::new(
            h.clone(),
            FamilyGen::HahnPow {
                exps: ExpForm::parse("1-1/(n+1)").unwrap(),
                center: h.int_elem(3),
            },
            SeqKind::PseudoConvergent,
            ExtValue::from_int(1),
            Some(TypeDecl::Transcendental),
            vec![],
        );
        let desc = SubsetDesc::single(&h, Atom::Family(fam)).unwrap();
        assert!(matches!(
            decide_prufer(&h, &desc, window()),
            Err(Error::UnvalidatedFamily(_))
        ));
    }

    #[test]
    fn cross_atom_sweep_finds_undeclared_limits() {
        // A convergent family with no declared limit whose center appears in
        // a separate finite atom: the sweep attributes the witness.
        let h = ValuedField::hahn();
        let fam = SeqFamily::new(
            h.clone(),
            FamilyGen::HahnPow {
                exps: ExpForm::parse("1-1/(n+1)").unwrap(),
                center: h.int_elem(3),
            },
            SeqKind::PseudoConvergent,
            ExtValue::from_int(1),
            Some(TypeDecl::Unknown),
            vec![],
        );
        let desc = SubsetDesc::new(
            &h,
            vec![Atom::Finite(vec![h.int_elem(3)]), Atom::Family(fam)],
        )
        .unwrap();
        let w = find_witness(&h, &desc, window()).unwrap().expect("cross-atom witness");
        assert!(h.eq_elems(&w.limit, &h.int_elem(3)));
        assert!(w.replay(2 * window()).unwrap());
    }

    #[test]
    fn monotonicity_of_positive_verdicts() {
        let f5 = ValuedField::padic(5).unwrap();
        let small =
            SubsetDesc::single(&f5, Atom::Finite(vec![f5.zero(), f5.one()])).unwrap();
        let large =
            SubsetDesc::single(&f5, Atom::Ball(Ball::closed(f5.zero(), integer(0)))).unwrap();
        assert!(desc_subset(&f5, &small, &large).unwrap());
        let v_large = decide_prufer(&f5, &large, window()).unwrap();
        let v_small = decide_prufer(&f5, &small, window()).unwrap();
        assert!(v_large.prufer);
        assert!(v_small.prufer);
    }

    #[test]
    fn corollary_triple_equivalence_spot_checks() {
        let cases: Vec<(ValuedField, SubsetDesc)> = {
            let f5 = ValuedField::padic(5).unwrap();
            let t = ValuedField::tadic();
            vec![
                (
                    f5.clone(),
                    SubsetDesc::single(&f5, Atom::Ball(Ball::closed(f5.zero(), integer(0))))
                        .unwrap(),
                ),
                (
                    t.clone(),
                    SubsetDesc::single(&t, Atom::Ball(Ball::closed(t.zero(), integer(0))))
                        .unwrap(),
                ),
                (
                    t.clone(),
                    SubsetDesc::single(&t, Atom::Finite(vec![t.zero(), t.one()])).unwrap(),
                ),
            ]
        };
        for (field, desc) in &cases {
            let verdict = decide_prufer(field, desc, window()).unwrap().prufer;
            let precompact = precompact_on_grammar(field, desc).unwrap();
            let no_stationary = stationary_witness_absent(field, desc).unwrap();
            assert_eq!(verdict, precompact);
            assert_eq!(verdict, no_stationary);
        }
    }
}
