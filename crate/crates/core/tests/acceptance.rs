//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vlab_core::gauss::GaussPoint;
use vlab_core::intring::int_member;
use vlab_core::literal::{parse_desc, parse_family, parse_field};
use vlab_core::poly::Poly;
use vlab_core::prufer::{
    decide_prufer, gauss_overring_exists, precompact_on_grammar, stationary_witness_absent,
    Certificate, Rule,
};
use vlab_core::sequences::SeqKind;
use vlab_core::sets::{closure, Atom, Ball, BallFlavor, SubsetDesc};
use vlab_core::values::{ExtValue, ValueGroup};
use vlab_core::{FieldElem, RingOrder, ValuedField};

const WINDOW: usize = 12;

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn report(criterion: &str, started: Instant, limit_secs: Option<f64>) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("acceptance {criterion}: PASS ({elapsed:.2}s)");
    if let Some(limit) = limit_secs {
        assert!(elapsed < limit, "{criterion} exceeded the {limit}s budget ({elapsed:.2}s)");
    }
}

fn rand_elem(field: &ValuedField, rng: &mut ChaCha8Rng) -> FieldElem {
    let q = rational(rng.gen_range(-30..=30), rng.gen_range(1..=12));
    if field.is_quad() {
        if rng.gen_bool(0.5) {
            return FieldElem::Quad(q, rational(rng.gen_range(-6..=6), rng.gen_range(1..=4)));
        }
        return FieldElem::Quad(q, integer(0));
    }
    if field.is_series() {
        let mut acc = field.zero();
        for _ in 0..rng.gen_range(1..=3) {
            let exp = if field.value_group() == ValueGroup::FullRationals {
                rational(rng.gen_range(-5..=5), rng.gen_range(1..=4))
            } else {
                integer(rng.gen_range(-5..=5))
            };
            let coeff = integer(rng.gen_range(-9..=9));
            if let Ok(m) = field.monomial(exp, coeff) {
                acc = field.add(&acc, &m).unwrap();
            }
        }
        return acc;
    }
    field.from_rational(q).unwrap()
}

fn rand_poly(field: &ValuedField, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    let coeffs = (0..=deg).map(|_| rand_elem(field, rng)).collect();
    Poly::from_coeffs(field, coeffs)
}

/// Criterion 1: the two quadratic branches assign Gauss values 1 and 0 to
/// `-X+2` at `(w, 1)`.
#[test]
fn criterion_1_branch_example_reproduction() {
    let started = Instant::now();
    let f5 = ValuedField::padic(5).unwrap();
    let f = Poly::from_coeffs(&f5, vec![f5.int_elem(2), f5.int_elem(-1)]);
    for (r0, expected) in [(2u64, 1i64), (3, 0)] {
        let w = ValuedField::quad(BigInt::from(-1), 5, Some(r0)).unwrap();
        let p = GaussPoint::new(w.clone(), w.quad_root().unwrap(), integer(1));
        assert_eq!(
            p.value_poly(&f).unwrap(),
            ExtValue::from_int(expected),
            "branch r0={r0}"
        );
    }
    report("criterion 1 (two-branch Gauss example)", started, Some(1.0));
}

/// Criterion 2: 1000 random pairs per field instance satisfy the valuation
/// axioms for the Gauss value, exactly.
#[test]
fn criterion_2_valuation_axiom_suite() {
    let started = Instant::now();
    let fields = [
        ValuedField::padic(5).unwrap(),
        ValuedField::quad(BigInt::from(-1), 5, Some(2)).unwrap(),
        ValuedField::quad(BigInt::from(-1), 5, Some(3)).unwrap(),
        ValuedField::tadic(),
        ValuedField::hahn(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for field in &fields {
        for case in 0..1000 {
            let center = rand_elem(field, &mut rng);
            let radius = if field.value_group() == ValueGroup::FullRationals {
                rational(rng.gen_range(0..=6), rng.gen_range(1..=3))
            } else {
                rational(rng.gen_range(0..=6), 1)
            };
            let point = GaussPoint::new(field.clone(), center, radius);
            let f = rand_poly(field, &mut rng, 3);
            let g = rand_poly(field, &mut rng, 3);
            let vf = point.value_poly(&f).unwrap();
            let vg = point.value_poly(&g).unwrap();
            let prod = f.mul(field, &g).unwrap();
            assert_eq!(
                point.value_poly(&prod).unwrap(),
                vf.add(&vg),
                "{field} case {case}: multiplicativity"
            );
            let sum = f.add(field, &g).unwrap();
            let vs = point.value_poly(&sum).unwrap();
            let min = vf.clone().min(vg.clone());
            assert!(vs >= min, "{field} case {case}: ultrametric");
            if vf != vg {
                assert_eq!(vs, min, "{field} case {case}: equality when values differ");
            }
        }
    }
    report("criterion 2 (valuation axioms, 1000 pairs x 5 fields)", started, Some(30.0));
}

/// Criterion 3: ring order, ball relation and membership sampling agree on
/// 300 random Gauss-point pairs.
#[test]
fn criterion_3_ring_order_cross_check() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f5 = ValuedField::padic(5).unwrap();
    let hahn = ValuedField::hahn();
    for case in 0..300 {
        let field = if case % 2 == 0 { &f5 } else { &hahn };
        let group = field.value_group();
        let radius = |rng: &mut ChaCha8Rng| {
            if group == ValueGroup::FullRationals {
                rational(rng.gen_range(0..=4), rng.gen_range(1..=2))
            } else {
                integer(rng.gen_range(0..=3))
            }
        };
        let c1 = field.int_elem(rng.gen_range(-20..=20));
        // Bias the second center toward interesting distances.
        let c2 = match rng.gen_range(0..3) {
            0 => c1.clone(),
            1 => {
                let shift = field
                    .uniformizer_pow(&radius(&mut rng))
                    .unwrap();
                field.add(&c1, &shift).unwrap()
            }
            _ => field.int_elem(rng.gen_range(-20..=20)),
        };
        let g1 = radius(&mut rng);
        let g2 = radius(&mut rng);
        let p1 = GaussPoint::new(field.clone(), c1.clone(), g1.clone());
        let p2 = GaussPoint::new(field.clone(), c2.clone(), g2.clone());
        let order = p1.compare_rings(&p2).unwrap();

        // Route 2: the ball relation.
        let b1 = Ball::closed(c1.clone(), g1.clone());
        let b2 = Ball::closed(c2.clone(), g2.clone());
        let expected = match b1.relate(field, &b2).unwrap() {
            vlab_core::sets::BallRelation::FirstContainsSecond => RingOrder::Subset,
            vlab_core::sets::BallRelation::SecondContainsFirst => RingOrder::Superset,
            vlab_core::sets::BallRelation::Equal => RingOrder::Equal,
            vlab_core::sets::BallRelation::Disjoint => RingOrder::Incomparable,
        };
        assert_eq!(order, expected, "case {case} over {field}");

        // Route 3: membership sampling with 50 witness polynomials
        // (X - c_j)^k / u where v(u) is the group floor of k·radius_j.
        let mut in1_not2 = false;
        let mut in2_not1 = false;
        for k in 1..=25usize {
            for (cj, gj) in [(&c1, &g1), (&c2, &g2)] {
                let shift = Poly::from_coeffs(
                    field,
                    vec![field.neg(cj).unwrap(), field.one()],
                );
                let mut h = shift.pow(field, k).unwrap();
                let scale = group.floor_to(&(gj * integer(k as i64)));
                let unit = field.uniformizer_pow(&(-scale)).unwrap();
                h = h.scale(field, &unit).unwrap();
                let m1 = p1.value_poly(&h).unwrap().is_nonnegative();
                let m2 = p2.value_poly(&h).unwrap().is_nonnegative();
                match order {
                    RingOrder::Subset => assert!(!m1 || m2, "case {case}: R1 ⊆ R2 violated"),
                    RingOrder::Superset => assert!(!m2 || m1, "case {case}: R2 ⊆ R1 violated"),
                    RingOrder::Equal => assert_eq!(m1, m2, "case {case}: equality violated"),
                    RingOrder::Incomparable => {}
                }
                in1_not2 |= m1 && !m2;
                in2_not1 |= m2 && !m1;
            }
        }
        if order == RingOrder::Incomparable {
            assert!(
                in1_not2 && in2_not1,
                "case {case} over {field}: incomparability not witnessed"
            );
        }
    }
    report("criterion 3 (ring order vs balls vs sampling, 300 pairs)", started, None);
}

/// Criterion 4: the closure table for open balls and the sphere dichotomy.
#[test]
fn criterion_4_closure_table() {
    let started = Instant::now();
    let f5 = ValuedField::padic(5).unwrap();
    let tadic = ValuedField::tadic();
    let hahn = ValuedField::hahn();

    let expect_ball = |field: &ValuedField, desc: SubsetDesc, radius: BigRational, flavor: BallFlavor| {
        let closed = closure(field, &desc).unwrap();
        assert_eq!(closed.atoms.len(), 1);
        match &closed.atoms[0] {
            Atom::Ball(b) => {
                assert_eq!(b.flavor, flavor);
                assert_eq!(b.radius, radius);
            }
            other => panic!("expected a ball, got {other:?}"),
        }
    };

    // Discrete, radius in the group: step to the next level.
    expect_ball(
        &f5,
        SubsetDesc::single(&f5, Atom::Ball(Ball::open(f5.zero(), integer(1)))).unwrap(),
        integer(2),
        BallFlavor::Closed,
    );
    // Discrete, radius outside the group: round up.
    expect_ball(
        &f5,
        SubsetDesc::single(&f5, Atom::Ball(Ball::open(f5.zero(), rational(1, 2)))).unwrap(),
        integer(1),
        BallFlavor::Closed,
    );
    // Non-discrete, radius in the group: same level.
    expect_ball(
        &hahn,
        SubsetDesc::single(&hahn, Atom::Ball(Ball::open(hahn.zero(), integer(1)))).unwrap(),
        integer(1),
        BallFlavor::Closed,
    );
    // Sphere over a DVR with finite residue field stays a sphere.
    expect_ball(
        &f5,
        SubsetDesc::single(&f5, Atom::Ball(Ball::sphere(f5.zero(), integer(0)))).unwrap(),
        integer(0),
        BallFlavor::Sphere,
    );
    // Sphere over an infinite-residue or non-discrete base closes to the ball.
    expect_ball(
        &tadic,
        SubsetDesc::single(&tadic, Atom::Ball(Ball::sphere(tadic.zero(), integer(0)))).unwrap(),
        integer(0),
        BallFlavor::Closed,
    );
    expect_ball(
        &hahn,
        SubsetDesc::single(&hahn, Atom::Ball(Ball::sphere(hahn.zero(), integer(0)))).unwrap(),
        integer(0),
        BallFlavor::Closed,
    );
    report("criterion 4 (closure table and sphere dichotomy)", started, None);
}

/// Criterion 5: breadth-ideal membership matches the threshold rule and
/// principality matches breadth lying in the value group.
#[test]
fn criterion_5_breadth_ideal() {
    let started = Instant::now();
    let hahn = ValuedField::hahn();
    let one = parse_family(
        &hahn,
        "seq:hahn_partial(e_k=1-1/k)[kind=convergent,breadth=1,type=transcendental]",
    )
    .unwrap();
    let half = parse_family(
        &hahn,
        "seq:hahn_partial(e_k=1/2-1/(2*k))[kind=convergent,breadth=1/2,type=transcendental]",
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (fam, threshold) in [(&one, integer(1)), (&half, rational(1, 2))] {
        fam.validate(WINDOW).unwrap();
        let ideal = fam.breadth_ideal(WINDOW).unwrap();
        assert_eq!(ideal.threshold, ExtValue::Finite(threshold.clone()));
        assert!(!ideal.zero);
        assert_eq!(
            ideal.principal,
            hahn.value_group().contains(&ideal.threshold).unwrap()
        );
        assert!(ideal.principal);
        for _ in 0..100 {
            let exp = rational(rng.gen_range(-8..=16), rng.gen_range(1..=8));
            let coeff = integer(rng.gen_range(1..=9));
            let probe = hahn.monomial(exp.clone(), coeff).unwrap();
            let expected = exp >= threshold;
            assert_eq!(
                fam.breadth_ideal_contains(&probe).unwrap(),
                expected,
                "probe t^({exp}) against threshold {threshold}"
            );
        }
    }
    // The zero ideal arises exactly at infinite breadth.
    let f5 = ValuedField::padic(5).unwrap();
    let cauchy =
        parse_family(&f5, "seq:geom(c=1,r=5)[kind=convergent,breadth=inf,limit=0]").unwrap();
    let ideal = cauchy.breadth_ideal(WINDOW).unwrap();
    assert!(ideal.zero);
    assert!(!ideal.principal);
    assert!(cauchy.breadth_ideal_contains(&f5.zero()).unwrap());
    assert!(!cauchy.breadth_ideal_contains(&f5.int_elem(625)).unwrap());
    report("criterion 5 (breadth ideal threshold rule, 100 probes x 2)", started, None);
}

/// Criterion 6: the Loper–Werner trichotomy on declared families.
#[test]
fn criterion_6_loper_werner() {
    let started = Instant::now();
    let f5 = ValuedField::padic(5).unwrap();
    let cauchy = parse_desc(&f5, "seq:geom(c=1,r=5)[kind=convergent,breadth=inf,limit=0]").unwrap();
    let v = decide_prufer(&f5, &cauchy, WINDOW).unwrap();
    assert!(v.prufer);
    assert_eq!(v.rule, Rule::ZeroBreadthIdeal);

    let hahn = ValuedField::hahn();
    let transcendental = parse_desc(
        &hahn,
        "seq:hahn_partial(e_k=1-1/k)[kind=convergent,breadth=1,type=transcendental]",
    )
    .unwrap();
    let v = decide_prufer(&hahn, &transcendental, WINDOW).unwrap();
    assert!(v.prufer);
    assert_eq!(v.rule, Rule::TranscendentalType);

    let with_limit = parse_desc(
        &hahn,
        "seq:hahn_pow(e_n=1-1/(n+1))[kind=convergent,breadth=1,limit=0]",
    )
    .unwrap();
    let v = decide_prufer(&hahn, &with_limit, WINDOW).unwrap();
    assert!(!v.prufer);
    match &v.certificate {
        Certificate::PseudoMonotoneWitness(w) => {
            assert!(w.replay(2 * WINDOW).unwrap(), "witness must replay at 2N");
            assert_eq!(w.breadth, ExtValue::from_int(1));
        }
        other => panic!("expected witness, got {other:?}"),
    }
    report("criterion 6 (Loper-Werner trichotomy, window 12)", started, Some(10.0));
}

fn dvr_corpus() -> Vec<(ValuedField, &'static str)> {
    let f2 = ("qp:2", vec![
        "finite{0,1}",
        "finite{0,1,2,3,7}",
        "cball(0;0)",
        "cball(1;2)",
        "oball(0;1)",
        "sphere(0;0)",
        "union(cball(0;1);finite{1})",
        "union(cball(0;2);cball(1;2))",
        "seq:geom(c=1,r=2)[kind=convergent,breadth=inf,limit=0]",
        "union(finite{0};seq:geom(c=1,r=4)[kind=convergent,breadth=inf,limit=0])",
    ]);
    let f5 = ("qp:5", vec![
        "finite{0,1,2}",
        "cball(0;0)",
        "cball(0;1)",
        "sphere(0;1)",
        "oball(3;0)",
        "union(cball(0;1);cball(1;1);cball(2;1))",
        "seq:geom(c=1,r=5)[kind=convergent,breadth=inf,limit=0]",
        "seq:geom(c=2,r=25)[kind=convergent,breadth=inf,limit=0]",
        "union(finite{1,2};cball(0;3))",
        "finite{1/3,2/3}",
    ]);
    let td = ("tadic", vec![
        "finite{0,1,2,3}",
        "finite{1/2,1/3,1/4}",
        "cball(0;0)",
        "cball(0;2)",
        "oball(0;0)",
        "sphere(0;1)",
        "union(cball(0;1);finite{5})",
        "union(finite{0,1};sphere(0;0))",
        "seq:geom(c=1,r=t)[kind=convergent,breadth=inf,limit=0]",
        "union(finite{7};seq:geom(c=1,r=t^(2))[kind=convergent,breadth=inf,limit=0])",
    ]);
    let mut out = Vec::new();
    for (spec, descs) in [f2, f5, td] {
        let field = parse_field(spec).unwrap();
        for d in descs {
            out.push((field.clone(), d));
        }
    }
    out
}

/// Criterion 7: verdict, precompactness and stationary-witness absence agree
/// pairwise on a 30-case DVR corpus, each computed independently.
#[test]
fn criterion_7_dvr_triple_equivalence() {
    let started = Instant::now();
    let corpus = dvr_corpus();
    assert_eq!(corpus.len(), 30);
    for (field, src) in &corpus {
        let desc = parse_desc(field, src).unwrap();
        let verdict = decide_prufer(field, &desc, WINDOW).unwrap().prufer;
        let precompact = precompact_on_grammar(field, &desc).unwrap();
        let no_stationary = stationary_witness_absent(field, &desc).unwrap();
        assert_eq!(verdict, precompact, "{field} {src}: verdict vs precompact");
        assert_eq!(verdict, no_stationary, "{field} {src}: verdict vs stationary");
        assert_eq!(precompact, no_stationary, "{field} {src}: precompact vs stationary");
    }
    report("criterion 7 (DVR triple equivalence, 30 cases)", started, None);
}

fn mixed_corpus() -> Vec<(ValuedField, String)> {
    let mut out: Vec<(ValuedField, String)> = Vec::new();
    for (field, descs) in dvr_corpus().into_iter().fold(
        Vec::<(ValuedField, Vec<&'static str>)>::new(),
        |mut acc, (f, d)| {
            if let Some(last) = acc.last_mut() {
                if last.0 == f {
                    last.1.push(d);
                    return acc;
                }
            }
            acc.push((f, vec![d]));
            acc
        },
    ) {
        for d in descs.into_iter().take(7) {
            out.push((field.clone(), d.to_string()));
        }
    }
    let hahn = parse_field("hahn").unwrap();
    let hahn_descs = [
        "finite{0,1*t^(0),3*t^(1/2)}",
        "cball(0;0)",
        "cball(0;1)",
        "cball(2*t^(0);3/2)",
        "oball(0;1)",
        "oball(0;1/2)",
        "sphere(0;0)",
        "sphere(0;2)",
        "union(cball(0;1);finite{7*t^(0)})",
        "union(cball(0;1);cball(1*t^(0);1))",
        "seq:hahn_partial(e_k=1-1/k)[kind=convergent,breadth=1,type=transcendental]",
        "seq:hahn_partial(e_k=1/2-1/(2*k))[kind=convergent,breadth=1/2,type=transcendental]",
        "seq:hahn_pow(e_n=1-1/(n+1))[kind=convergent,breadth=1,limit=0]",
        "seq:hahn_pow(e_n=2-2/(n+1),c=1*t^(0))[kind=convergent,breadth=2,limit=1*t^(0)]",
        "seq:hahn_pow(e_n=1/(n+1))[kind=divergent,breadth=0,limit=0]",
        "seq:hahn_pow(e_n=1+1/(n+1))[kind=divergent,breadth=1,limit=0]",
        "seq:arith(a=1*t^(0),d=1*t^(0))[kind=stationary,breadth=0,limit=0]",
        "seq:geom(c=1,r=t)[kind=convergent,breadth=inf,limit=0]",
        "union(seq:hahn_partial(e_k=1-1/k)[kind=convergent,breadth=1,type=transcendental];finite{5*t^(0)})",
        "union(seq:geom(c=1,r=t)[kind=convergent,breadth=inf,limit=0];finite{1*t^(0)})",
        "union(cball(0;2);seq:hahn_pow(e_n=1/(n+1))[kind=divergent,breadth=0,limit=0])",
        "seq:hahn_pow(e_n=1-1/(n+1),c=3*t^(0))[kind=convergent,breadth=1,type=algebraic{(1*t^(0))*X^1+(-3*t^(0))*X^0},limit=3*t^(0)]",
    ];
    for d in hahn_descs {
        out.push((hahn.clone(), d.to_string()));
    }
    let h3 = parse_field("hahn:fp=3").unwrap();
    for d in [
        "finite{0,1,2}",
        "cball(0;0)",
        "sphere(0;0)",
        "oball(0;1)",
        "seq:hahn_pow(e_n=1/(n+1))[kind=divergent,breadth=0,limit=0]",
        "union(finite{1};cball(0;1))",
        "seq:hahn_pow(e_n=1-1/(n+1))[kind=convergent,breadth=1,limit=0]",
    ] {
        out.push((h3.clone(), d.to_string()));
    }
    out
}

/// Criterion 8: a negative verdict is equivalent to the existence of a Gauss
/// overring, and every witness replays at double the window.
#[test]
fn criterion_8_overring_coherence() {
    let started = Instant::now();
    let corpus = mixed_corpus();
    assert!(corpus.len() >= 50, "corpus has {} cases", corpus.len());
    for (field, src) in &corpus {
        let desc = parse_desc(field, src).unwrap();
        let verdict = decide_prufer(field, &desc, WINDOW).unwrap();
        let overring = gauss_overring_exists(field, &desc, WINDOW).unwrap();
        assert_eq!(
            !verdict.prufer,
            overring.is_some(),
            "{field} {src}: verdict {} vs overring {:?}",
            verdict.prufer,
            overring.map(|p| (field.render(&p.center), p.radius.to_string())),
        );
        if let Certificate::PseudoMonotoneWitness(w) = &verdict.certificate {
            assert!(w.replay(2 * WINDOW).unwrap(), "{field} {src}: witness replay at 2N");
        }
    }
    report(
        &format!("criterion 8 (overring coherence, {} cases)", corpus.len()),
        started,
        Some(60.0),
    );
}

/// Criterion 9: the finite-difference/Gauss gap exists over a DVR with finite
/// residue field and never over a non-discrete base.
#[test]
fn criterion_9_dvr_membership_gap() {
    let started = Instant::now();
    let f2 = ValuedField::padic(2).unwrap();
    let half = f2.from_rational(rational(1, 2)).unwrap();
    let binom2 = Poly::from_coeffs(&f2, vec![f2.zero(), f2.int_elem(-1), f2.one()])
        .scale(&f2, &half)
        .unwrap();
    let whole = SubsetDesc::single(&f2, Atom::Ball(Ball::closed(f2.zero(), integer(0)))).unwrap();
    let verdict = int_member(&f2, &whole, &binom2, WINDOW).unwrap();
    assert!(verdict.member, "(X²-X)/2 is integer-valued on the 2-adic integers");
    let gauss = GaussPoint::new(f2.clone(), f2.zero(), integer(0));
    assert_eq!(gauss.value_poly(&binom2).unwrap(), ExtValue::from_int(-1));

    // Over hahn the Lemma is an equality: any Gauss-negative polynomial has a
    // concrete point of the ball where it fails, in 500 random trials.
    let hahn = ValuedField::hahn();
    let unit_ball = Ball::closed(hahn.zero(), integer(0));
    let desc = SubsetDesc::single(&hahn, Atom::Ball(unit_ball.clone())).unwrap();
    let point = GaussPoint::new(hahn.clone(), hahn.zero(), integer(0));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut trials = 0;
    while trials < 500 {
        let mut f = rand_poly(&hahn, &mut rng, 4);
        if f.is_zero() {
            continue;
        }
        let v = point.value_poly(&f).unwrap();
        if v.is_nonnegative() {
            // Push it below zero exactly.
            let drop = match v.as_finite() {
                Some(q) => -q - rational(1, 3),
                None => continue,
            };
            let shift = hahn.monomial(drop, integer(1)).unwrap();
            f = f.scale(&hahn, &shift).unwrap();
        }
        assert!(!point.value_poly(&f).unwrap().is_nonnegative());
        let verdict = int_member(&hahn, &desc, &f, WINDOW).unwrap();
        assert!(!verdict.member, "trial {trials}: Gauss-negative must be non-member");
        let (s, value) = verdict.witness.expect("ball witness");
        assert!(unit_ball.member(&hahn, &s).unwrap());
        assert!(!value.is_nonnegative());
        let direct = hahn.valuation(&f.evaluate(&hahn, &s).unwrap()).unwrap();
        assert_eq!(direct, value);
        trials += 1;
    }
    report("criterion 9 (DVR membership gap, 500 hahn trials)", started, None);
}

/// The families used by witnesses classify the same at several window sizes.
#[test]
fn classification_stability_across_windows() {
    let started = Instant::now();
    let hahn = parse_field("hahn").unwrap();
    for src in [
        "seq:hahn_partial(e_k=1-1/k)[kind=convergent,breadth=1,type=transcendental]",
        "seq:hahn_pow(e_n=1/(n+1))[kind=divergent,breadth=0,limit=0]",
    ] {
        let fam = parse_family(&hahn, src).unwrap();
        let kinds: Vec<SeqKind> = [5usize, 10, 20]
            .iter()
            .map(|&n| fam.classify_window(n).unwrap().kind)
            .collect();
        assert!(kinds.windows(2).all(|w| w[0] == w[1]), "{src}");
    }
    report("stability check (window independence)", started, None);
}
