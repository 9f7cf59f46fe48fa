//! Parsing and rendering of the textual grammar: field specs, element
//! literals, polynomial literals, subset descriptions and sequence-family
//! literals.
//!
//! Parsers accept general arithmetic expressions; renderers emit one
//! canonical normalized form, and `parse ∘ render` is the identity on it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fields::{FieldElem, ValuedField};
use crate::poly::{Poly, RatFunc};
use crate::sequences::{
    DeclaredLimit, ExpForm, FamilyGen, SeqFamily, SeqKind, TypeDecl,
};
use crate::sets::{Atom, Ball, BallFlavor, SubsetDesc};
use crate::values::ExtValue;

/// Parse a field spec: `qp:5`, `tadic`, `hahn`, `hahn:fp=3`,
/// `quad:d=-1,p=5,r0=2`.
pub fn parse_field(spec: &str) -> Result<ValuedField> {
    let spec = spec.trim();
    if let Some(p) = spec.strip_prefix("qp:") {
        let p: u64 = p.parse().map_err(|_| Error::BadFieldSpec(spec.into()))?;
        return ValuedField::padic(p);
    }
    if spec == "tadic" {
        return Ok(ValuedField::tadic());
    }
    if spec == "hahn" {
        return Ok(ValuedField::hahn());
    }
    if let Some(p) = spec.strip_prefix("hahn:fp=") {
        let p: u64 = p.parse().map_err(|_| Error::BadFieldSpec(spec.into()))?;
        return ValuedField::hahn_fp(p);
    }
    if let Some(args) = spec.strip_prefix("quad:") {
        let mut d: Option<BigInt> = None;
        let mut p: Option<u64> = None;
        let mut r0: Option<u64> = None;
        for part in args.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::BadFieldSpec(spec.into()))?;
            match key.trim() {
                "d" => {
                    d = Some(value.trim().parse().map_err(|_| Error::BadFieldSpec(spec.into()))?)
                }
                "p" => {
                    p = Some(value.trim().parse().map_err(|_| Error::BadFieldSpec(spec.into()))?)
                }
                "r0" => {
                    r0 = Some(value.trim().parse().map_err(|_| Error::BadFieldSpec(spec.into()))?)
                }
                _ => return Err(Error::BadFieldSpec(spec.into())),
            }
        }
        let d = d.ok_or_else(|| Error::BadFieldSpec("quad needs d=".into()))?;
        let p = p.ok_or_else(|| Error::BadFieldSpec("quad needs p=".into()))?;
        return ValuedField::quad(d, p, r0);
    }
    Err(Error::BadFieldSpec(spec.into()))
}

pub fn render_field(field: &ValuedField) -> String {
    field.to_string()
}

/// Parse an exact rational like `3/2` or `-7`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    Expr::parse(s)?.eval_rational(&[])
}

/// Parse an extended value: a rational or `inf`.
pub fn parse_ext_value(s: &str) -> Result<ExtValue> {
    if s.trim() == "inf" {
        Ok(ExtValue::Infinity)
    } else {
        Ok(ExtValue::Finite(parse_rational(s)?))
    }
}

fn eval_field_expr(field: &ValuedField, expr: &Expr) -> Result<RatFunc> {
    let constant = |e: FieldElem| RatFunc::poly(field, Poly::constant(field, e));
    Ok(match expr {
        Expr::Num(n) => {
            constant(field.from_rational(BigRational::from_integer(n.clone()))?)
        }
        Expr::Var(name) => match name.as_str() {
            "X" => RatFunc::poly(field, Poly::x(field)),
            "t" => constant(field.monomial(BigRational::from_integer(1.into()), BigRational::from_integer(1.into()))?),
            "w" => constant(field.quad_root()?),
            other => return Err(Error::Parse(format!("unknown symbol '{other}'"))),
        },
        Expr::Neg(e) => {
            let v = eval_field_expr(field, e)?;
            RatFunc { num: v.num.neg(field)?, den: v.den }
        }
        Expr::Add(a, b) => eval_field_expr(field, a)?.add(field, &eval_field_expr(field, b)?)?,
        Expr::Sub(a, b) => eval_field_expr(field, a)?.sub(field, &eval_field_expr(field, b)?)?,
        Expr::Mul(a, b) => eval_field_expr(field, a)?.mul(field, &eval_field_expr(field, b)?)?,
        Expr::Div(a, b) => eval_field_expr(field, a)?.div(field, &eval_field_expr(field, b)?)?,
        Expr::Pow(base, exp) => {
            let e = exp.eval_rational(&[])?;
            if !e.is_integer() {
                // Rational exponents are only meaningful on the series
                // variable itself: t^(1/2) and friends.
                if matches!(base.as_ref(), Expr::Var(v) if v == "t") {
                    return Ok(constant(field.monomial(e, BigRational::from_integer(1.into()))?));
                }
                return Err(Error::Parse("non-integer exponent on a non-t base".into()));
            }
            let k = e
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Parse("exponent too large".into()))?;
            let v = eval_field_expr(field, base)?;
            ratfunc_pow(field, &v, k)?
        }
    })
}

fn ratfunc_pow(field: &ValuedField, base: &RatFunc, k: i64) -> Result<RatFunc> {
    if k < 0 {
        let inv = RatFunc::poly(field, Poly::constant(field, field.one())).div(field, base)?;
        return ratfunc_pow(field, &inv, -k);
    }
    let mut acc = RatFunc::poly(field, Poly::constant(field, field.one()));
    for _ in 0..k {
        acc = acc.mul(field, base)?;
    }
    Ok(acc)
}

/// Parse an element literal in the field's syntax.
pub fn parse_elem(field: &ValuedField, s: &str) -> Result<FieldElem> {
    let v = eval_field_expr(field, &Expr::parse(s)?)?;
    let num = constant_of(field, &v.num, s)?;
    let den = constant_of(field, &v.den, s)?;
    field.div(&num, &den)
}

fn constant_of(field: &ValuedField, p: &Poly, src: &str) -> Result<FieldElem> {
    match p.degree() {
        None => Ok(field.zero()),
        Some(0) => Ok(p.coeffs()[0].clone()),
        Some(_) => Err(Error::Parse(format!("'{src}' is not a constant"))),
    }
}

/// Parse a polynomial or rational-function literal over the field.
pub fn parse_ratfunc(field: &ValuedField, s: &str) -> Result<RatFunc> {
    eval_field_expr(field, &Expr::parse(s)?)
}

/// Parse a literal that must be a polynomial (constant denominator).
pub fn parse_poly(field: &ValuedField, s: &str) -> Result<Poly> {
    let r = parse_ratfunc(field, s)?;
    r.as_poly(field)
        .ok_or_else(|| Error::Parse(format!("'{s}' is not a polynomial")))
}

/// Canonical polynomial form: `(c0)*X^0+(c1)*X^1+…`, zero coefficients
/// skipped, the zero polynomial as `(0)*X^0`.
pub fn render_poly(field: &ValuedField, p: &Poly) -> String {
    if p.is_zero() {
        return "(0)*X^0".into();
    }
    let mut parts = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if field.is_zero(c) {
            continue;
        }
        parts.push(format!("({})*X^{k}", field.render(c)));
    }
    parts.join("+")
}

pub fn render_ratfunc(field: &ValuedField, r: &RatFunc) -> String {
    match r.as_poly(field) {
        Some(p) => render_poly(field, &p),
        None => format!(
            "({}) / ({})",
            render_poly(field, &r.num),
            render_poly(field, &r.den)
        ),
    }
}

/// Split on a delimiter at nesting depth zero with respect to `()`, `{}`,
/// `[]`.
fn split_top(s: &str, delim: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth = depth.saturating_sub(1),
            c if c == delim && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parse a subset description: `finite{…}`, `cball(e;q)`, `oball(e;q)`,
/// `sphere(e;q)`, `union(d1;d2;…)`, `seq:…`.
pub fn parse_desc(field: &ValuedField, s: &str) -> Result<SubsetDesc> {
    let atoms = parse_desc_atoms(field, s.trim())?;
    SubsetDesc::new(field, atoms)
}

fn parse_desc_atoms(field: &ValuedField, s: &str) -> Result<Vec<Atom>> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix("union(").and_then(|r| r.strip_suffix(')')) {
        let mut atoms = Vec::new();
        for part in split_top(inner, ';') {
            atoms.extend(parse_desc_atoms(field, part)?);
        }
        return Ok(atoms);
    }
    if let Some(inner) = s.strip_prefix("finite{").and_then(|r| r.strip_suffix('}')) {
        let mut elems = Vec::new();
        for part in split_top(inner, ',') {
            if !part.trim().is_empty() {
                elems.push(parse_elem(field, part)?);
            }
        }
        return Ok(vec![Atom::Finite(elems)]);
    }
    for (prefix, flavor) in [
        ("cball(", BallFlavor::Closed),
        ("oball(", BallFlavor::Open),
        ("sphere(", BallFlavor::Sphere),
    ] {
        if let Some(inner) = s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')) {
            let parts = split_top(inner, ';');
            if parts.len() != 2 {
                return Err(Error::Parse(format!("'{s}': expected (center;radius)")));
            }
            let center = parse_elem(field, parts[0])?;
            let radius = parse_rational(parts[1])?;
            return Ok(vec![Atom::Ball(Ball { center, radius, flavor })]);
        }
    }
    if s.starts_with("seq:") {
        return Ok(vec![Atom::Family(parse_family(field, s)?)]);
    }
    Err(Error::Parse(format!("unrecognized description '{s}'")))
}

/// Parse a family literal: `seq:<name>(<k=v,…>)[kind=…,breadth=…,…]`.
pub fn parse_family(field: &ValuedField, s: &str) -> Result<SeqFamily> {
    let s = s.trim();
    let body = s
        .strip_prefix("seq:")
        .ok_or_else(|| Error::Parse(format!("family literal must start with seq: ({s})")))?;
    let open = body
        .find('(')
        .ok_or_else(|| Error::Parse(format!("family needs a parameter list ({s})")))?;
    let name = &body[..open];
    let rest = &body[open..];
    let close = matching_paren(rest)
        .ok_or_else(|| Error::Parse(format!("unbalanced parameter list ({s})")))?;
    let params_src = &rest[1..close];
    let meta_src = rest[close + 1..].trim();

    let mut params: Vec<(&str, &str)> = Vec::new();
    for part in split_top(params_src, ',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("family parameter '{part}' is not k=v")))?;
        params.push((k.trim(), v.trim()));
    }
    let lookup = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);

    let gen = match name {
        "enum" => FamilyGen::Enumerate,
        "geom" => {
            let c = lookup("c").ok_or_else(|| Error::Parse("geom needs c=".into()))?;
            let r = lookup("r").ok_or_else(|| Error::Parse("geom needs r=".into()))?;
            FamilyGen::Geometric { scale: parse_elem(field, c)?, ratio: parse_elem(field, r)? }
        }
        "arith" => {
            let a = lookup("a").ok_or_else(|| Error::Parse("arith needs a=".into()))?;
            let d = lookup("d").ok_or_else(|| Error::Parse("arith needs d=".into()))?;
            FamilyGen::Arith { start: parse_elem(field, a)?, step: parse_elem(field, d)? }
        }
        "hahn_partial" => {
            let e = lookup("e_k").ok_or_else(|| Error::Parse("hahn_partial needs e_k=".into()))?;
            FamilyGen::HahnPartial { exps: ExpForm::parse(e)? }
        }
        "hahn_pow" => {
            let e = lookup("e_n").ok_or_else(|| Error::Parse("hahn_pow needs e_n=".into()))?;
            let center = match lookup("c") {
                Some(c) => parse_elem(field, c)?,
                None => field.zero(),
            };
            FamilyGen::HahnPow { exps: ExpForm::parse(e)?, center }
        }
        other => return Err(Error::Parse(format!("unknown family '{other}'"))),
    };

    let mut kind: Option<SeqKind> = None;
    let mut breadth: Option<ExtValue> = None;
    let mut seq_type: Option<TypeDecl> = None;
    let mut limits: Vec<DeclaredLimit> = Vec::new();
    let mut shift: usize = 0;
    if !meta_src.is_empty() {
        let inner = meta_src
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("metadata must be [..] ({meta_src})")))?;
        for part in split_top(inner, ',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("metadata '{part}' is not k=v")))?;
            match k.trim() {
                "kind" => {
                    kind = Some(match v.trim() {
                        "convergent" => SeqKind::PseudoConvergent,
                        "stationary" => SeqKind::PseudoStationary,
                        "divergent" => SeqKind::PseudoDivergent,
                        other => return Err(Error::Parse(format!("unknown kind '{other}'"))),
                    })
                }
                "breadth" => breadth = Some(parse_ext_value(v)?),
                "type" => {
                    let v = v.trim();
                    seq_type = Some(if v == "transcendental" {
                        TypeDecl::Transcendental
                    } else if v == "unknown" {
                        TypeDecl::Unknown
                    } else if let Some(poly) =
                        v.strip_prefix("algebraic{").and_then(|r| r.strip_suffix('}'))
                    {
                        TypeDecl::Algebraic(parse_poly(field, poly)?)
                    } else {
                        return Err(Error::Parse(format!("unknown type '{v}'")));
                    });
                }
                "limit" => {
                    let v = v.trim();
                    if let Some(inner) = v.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
                        let (fspec, elem) = inner.split_once('|').ok_or_else(|| {
                            Error::Parse("extension limit must be {fieldspec|elem}".into())
                        })?;
                        let lf = parse_field(fspec)?;
                        if !lf.extends(field) {
                            return Err(Error::Parse(format!(
                                "limit field {lf} does not extend {field}"
                            )));
                        }
                        let le = parse_elem(&lf, elem)?;
                        limits.push(DeclaredLimit { field: lf, elem: le });
                    } else {
                        limits.push(DeclaredLimit {
                            field: field.clone(),
                            elem: parse_elem(field, v)?,
                        });
                    }
                }
                "shift" => {
                    shift = v
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad shift '{v}'")))?
                }
                other => return Err(Error::Parse(format!("unknown metadata key '{other}'"))),
            }
        }
    }
    let kind = kind.ok_or_else(|| Error::Parse("family metadata needs kind=".into()))?;
    let breadth = breadth.ok_or_else(|| Error::Parse("family metadata needs breadth=".into()))?;
    let mut fam = SeqFamily::new(field.clone(), gen, kind, breadth, seq_type, limits);
    fam.offset = shift;
    Ok(fam)
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

pub fn render_ball(field: &ValuedField, b: &Ball) -> String {
    let tag = match b.flavor {
        BallFlavor::Closed => "cball",
        BallFlavor::Open => "oball",
        BallFlavor::Sphere => "sphere",
    };
    format!("{tag}({};{})", field.render(&b.center), b.radius)
}

pub fn render_atom(field: &ValuedField, atom: &Atom) -> String {
    match atom {
        Atom::Finite(elems) => {
            let parts: Vec<String> = elems.iter().map(|e| field.render(e)).collect();
            format!("finite{{{}}}", parts.join(","))
        }
        Atom::Ball(b) => render_ball(field, b),
        Atom::Family(fam) => render_family(fam),
    }
}

pub fn render_desc(field: &ValuedField, desc: &SubsetDesc) -> String {
    match desc.atoms.len() {
        0 => "finite{}".into(),
        1 => render_atom(field, &desc.atoms[0]),
        _ => {
            let parts: Vec<String> =
                desc.atoms.iter().map(|a| render_atom(field, a)).collect();
            format!("union({})", parts.join(";"))
        }
    }
}

pub fn render_family(fam: &SeqFamily) -> String {
    let field = &fam.field;
    let head = match &fam.gen {
        FamilyGen::Enumerate => "seq:enum()".to_string(),
        FamilyGen::Arith { start, step } => {
            format!("seq:arith(a={},d={})", field.render(start), field.render(step))
        }
        FamilyGen::Geometric { scale, ratio } => {
            format!("seq:geom(c={},r={})", field.render(scale), field.render(ratio))
        }
        FamilyGen::HahnPartial { exps } => format!("seq:hahn_partial(e_k={})", exps.source),
        FamilyGen::HahnPow { exps, center } => {
            if field.is_zero(center) {
                format!("seq:hahn_pow(e_n={})", exps.source)
            } else {
                format!("seq:hahn_pow(e_n={},c={})", exps.source, field.render(center))
            }
        }
    };
    let mut meta = vec![
        format!("kind={}", fam.kind.as_str()),
        format!("breadth={}", fam.breadth),
    ];
    match &fam.seq_type {
        Some(TypeDecl::Transcendental) => meta.push("type=transcendental".into()),
        Some(TypeDecl::Unknown) => meta.push("type=unknown".into()),
        Some(TypeDecl::Algebraic(p)) => {
            meta.push(format!("type=algebraic{{{}}}", render_poly(field, p)))
        }
        None => {}
    }
    for lim in &fam.limits {
        if lim.field == *field {
            meta.push(format!("limit={}", lim.field.render(&lim.elem)));
        } else {
            meta.push(format!(
                "limit={{{}|{}}}",
                render_field(&lim.field),
                lim.field.render(&lim.elem)
            ));
        }
    }
    if fam.offset > 0 {
        meta.push(format!("shift={}", fam.offset));
    }
    format!("{head}[{}]", meta.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::{integer, rational};

    #[test]
    fn field_specs_round_trip() {
        for spec in ["qp:5", "tadic", "hahn", "hahn:fp=3", "quad:d=-1,p=5,r0=2", "quad:d=5,p=5"] {
            let f = parse_field(spec).unwrap();
            assert_eq!(render_field(&f), spec);
        }
        assert!(parse_field("qp:4").is_err());
        assert!(matches!(parse_field("quad:d=-1,p=5"), Err(Error::BranchRequired)));
    }

    #[test]
    fn element_literals() {
        let f5 = parse_field("qp:5").unwrap();
        let x = parse_elem(&f5, "-5/7").unwrap();
        assert_eq!(f5.render(&x), "-5/7");

        let w = parse_field("quad:d=-1,p=5,r0=2").unwrap();
        for lit in ["w", "2-w", "1/2+3/2*w", "-w"] {
            let e = parse_elem(&w, lit).unwrap();
            assert_eq!(w.render(&e), lit);
        }
        // General expressions normalize.
        let e = parse_elem(&w, "(2-w)*(2+w)").unwrap();
        assert_eq!(w.render(&e), "5");

        let h = parse_field("hahn").unwrap();
        let lit = "-1*t^(0)+3*t^(1/2)+2*t^(7/3)";
        let e = parse_elem(&h, lit).unwrap();
        assert_eq!(h.render(&e), lit);

        let t = parse_field("tadic").unwrap();
        assert!(parse_elem(&t, "t^(1/2)").is_err());
        let e = parse_elem(&t, "1/2").unwrap();
        assert_eq!(t.render(&e), "1/2*t^(0)");
    }

    #[test]
    fn poly_literals() {
        let f5 = parse_field("qp:5").unwrap();
        let p = parse_poly(&f5, "-X+2").unwrap();
        assert_eq!(render_poly(&f5, &p), "(2)*X^0+(-1)*X^1");
        let p2 = parse_poly(&f5, "( -1 )*X^1 + (2)*X^0").unwrap();
        assert!(p.eq(&f5, &p2));
        let p3 = parse_poly(&f5, "(X^2-X)/2").unwrap();
        assert_eq!(p3.degree(), Some(2));
        // A genuine rational function is not a polynomial.
        assert!(parse_poly(&f5, "X/(X-1)").is_err());
        let r = parse_ratfunc(&f5, "(X^2-1)/(X-1)").unwrap();
        assert_eq!(r.num.degree(), Some(2));
        assert_eq!(r.den.degree(), Some(1));
    }

    #[test]
    fn poly_round_trip_fuzz() {
        // Deterministic fuzz over the element and polynomial grammar.
        let fields = [
            parse_field("qp:5").unwrap(),
            parse_field("tadic").unwrap(),
            parse_field("hahn").unwrap(),
            parse_field("quad:d=-1,p=5,r0=2").unwrap(),
        ];
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for f in &fields {
            for _ in 0..200 {
                let mut coeffs = Vec::new();
                for _ in 0..(next() % 4 + 1) {
                    let n = (next() % 19) as i64 - 9;
                    let d = (next() % 7 + 1) as i64;
                    let q = rational(n, d);
                    let elem = if f.is_series() && next() % 2 == 0 {
                        let e = rational((next() % 9) as i64 - 4, (next() % 3 + 1) as i64);
                        let e = if *f == parse_field("tadic").unwrap() {
                            e.floor()
                        } else {
                            e
                        };
                        f.monomial(e, q).unwrap_or_else(|_| f.zero())
                    } else if f.is_quad() && next() % 2 == 0 {
                        FieldElem::Quad(q, rational((next() % 5) as i64 - 2, 1))
                    } else {
                        f.from_rational(q).unwrap()
                    };
                    coeffs.push(elem);
                }
                let p = Poly::from_coeffs(f, coeffs);
                let rendered = render_poly(f, &p);
                let reparsed = parse_poly(f, &rendered).unwrap();
                assert!(p.eq(f, &reparsed), "{f}: {rendered}");
                assert_eq!(rendered, render_poly(f, &reparsed));
            }
        }
    }

    #[test]
    fn desc_literals() {
        let f5 = parse_field("qp:5").unwrap();
        for lit in [
            "finite{0,1,2}",
            "cball(0;1)",
            "oball(0;1/2)",
            "sphere(5;2)",
            "union(cball(0;2);finite{1})",
        ] {
            let d = parse_desc(&f5, lit).unwrap();
            assert_eq!(render_desc(&f5, &d), lit);
        }
        // Sphere radius outside the group is rejected.
        assert!(parse_desc(&f5, "sphere(0;1/2)").is_err());
        // Nested balls merge on normalization.
        let d = parse_desc(&f5, "union(cball(0;1);cball(5;2))").unwrap();
        assert_eq!(render_desc(&f5, &d), "cball(0;1)");
    }

    #[test]
    fn family_literals() {
        let h = parse_field("hahn").unwrap();
        for lit in [
            "seq:hahn_partial(e_k=1-1/k)[kind=convergent,breadth=1,type=transcendental]",
            "seq:hahn_pow(e_n=1/(n+1))[kind=divergent,breadth=0,limit=0]",
            "seq:hahn_pow(e_n=1-1/(n+1))[kind=convergent,breadth=1,limit=0]",
            "seq:hahn_pow(e_n=1/(n+1),c=3*t^(0))[kind=divergent,breadth=0,limit=3*t^(0),shift=1]",
        ] {
            let fam = parse_family(&h, lit).unwrap();
            assert_eq!(render_family(&fam), lit);
        }
        let f5 = parse_field("qp:5").unwrap();
        for lit in [
            "seq:geom(c=1,r=5)[kind=convergent,breadth=inf,limit=0]",
            "seq:enum()[kind=stationary,breadth=0]",
            "seq:arith(a=1,d=1)[kind=stationary,breadth=0,limit=0]",
        ] {
            let fam = parse_family(&f5, lit).unwrap();
            assert_eq!(render_family(&fam), lit);
        }
        // Extension limit.
        let lit = "seq:geom(c=1,r=5)[kind=convergent,breadth=inf,limit={quad:d=-1,p=5,r0=2|w}]";
        let fam = parse_family(&f5, lit).unwrap();
        assert_eq!(render_family(&fam), lit);
        // Algebraic witness.
        let lit = "seq:hahn_pow(e_n=1-1/(n+1))[kind=convergent,breadth=1,type=algebraic{(1*t^(0))*X^1},limit=0]";
        let fam = parse_family(&h, lit).unwrap();
        assert_eq!(render_family(&fam), lit);
    }

    #[test]
    fn desc_round_trip_fuzz() {
        let fields = [parse_field("qp:5").unwrap(), parse_field("hahn").unwrap()];
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for f in &fields {
            for _ in 0..200 {
                let mut atoms = Vec::new();
                for _ in 0..(next() % 3 + 1) {
                    match next() % 3 {
                        0 => {
                            let es: Vec<FieldElem> =
                                (0..next() % 3 + 1).map(|_| f.int_elem((next() % 30) as i64)).collect();
                            atoms.push(Atom::Finite(es));
                        }
                        1 => {
                            let c = f.int_elem((next() % 30) as i64);
                            let r = integer((next() % 4) as i64);
                            atoms.push(Atom::Ball(Ball::closed(c, r)));
                        }
                        _ => {
                            let c = f.int_elem((next() % 30) as i64);
                            let r = integer((next() % 4) as i64);
                            atoms.push(Atom::Ball(Ball::open(c, r)));
                        }
                    }
                }
                let d = SubsetDesc::new(f, atoms).unwrap();
                let rendered = render_desc(f, &d);
                let reparsed = parse_desc(f, &rendered).unwrap();
                assert_eq!(rendered, render_desc(f, &reparsed), "{f}");
            }
        }
    }
}
