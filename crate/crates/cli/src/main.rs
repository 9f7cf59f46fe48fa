//! `vlab` — command-line front end for the valuation-theory library.
//!
//! Every subcommand prints a single JSON object (schema `vlab/1`) on stdout;
//! all numbers are exact rational strings. Errors go to stderr with exit code
//! 2 for parse errors and 1 for domain errors. `prufer` exits 3 on a negative
//! verdict so shell pipelines can branch without parsing JSON.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vlab_core::error::Error;
use vlab_core::gauss::GaussPoint;
use vlab_core::intring::int_member;
use vlab_core::literal::{
    parse_desc, parse_elem, parse_family, parse_field, parse_rational, parse_ratfunc,
    render_ball, render_desc, render_family, render_field,
};
use vlab_core::prufer::{decide_prufer, Certificate};
use vlab_core::sequences::SeqKind;
use vlab_core::sets::closure;

const SCHEMA: &str = "vlab/1";
const DEFAULT_WINDOW: usize = 12;

#[derive(Parser)]
#[command(
    name = "vlab",
    about = "Exact rank-one valuation theory: Gauss valuations, polynomial closure, \
             integer-valued polynomials and Prüfer certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output mode.
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Json)]
    output: OutputMode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Valuation of a field element.
    Val {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
    },
    /// Gauss valuation v_{alpha,gamma} of a polynomial or rational function.
    Gauss {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Order of two Gauss rings V_{alpha,gamma} ∩ K[X].
    Order {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha1: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma1: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha2: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma2: String,
    },
    /// Polynomial closure of a subset description.
    Closure {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// Window classification of a sequence family.
    Classify {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Membership of a polynomial in Int(S,V).
    Member {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Decide whether Int(S,V) is a Prüfer domain, with a certificate.
    Prufer {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        window: Option<usize>,
    },
    /// The ball of pseudo-limits of a family around a verified pseudo-limit.
    Limitset {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        window: Option<usize>,
    },
}

fn default_window(explicit: Option<usize>) -> usize {
    explicit.unwrap_or_else(|| {
        std::env::var("VLAB_WINDOW")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_WINDOW)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::BadFieldSpec(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn emit(mode: OutputMode, value: &Value, text: String) {
    match mode {
        OutputMode::Json => println!("{value}"),
        OutputMode::Text => println!("{text}"),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Val { field, elem } => {
            let f = parse_field(field)?;
            let x = parse_elem(&f, elem)?;
            let v = f.valuation(&x)?;
            emit(
                cli.output,
                &json!({"schema": SCHEMA, "value": v.to_string()}),
                format!("v({}) = {}", f.render(&x), v),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Gauss { field, alpha, gamma, poly } => {
            let f = parse_field(field)?;
            let a = parse_elem(&f, alpha)?;
            let g = parse_rational(gamma)?;
            let point = GaussPoint::new(f.clone(), a, g);
            let fr = parse_ratfunc(&f, poly)?;
            let value = match fr.as_poly(&f) {
                Some(p) => point.value_poly(&p)?,
                None => point.value_ratfunc(&fr)?,
            };
            let rt = point.is_residually_transcendental(&f.value_group());
            emit(
                cli.output,
                &json!({
                    "schema": SCHEMA,
                    "value": value.to_string(),
                    "residually_transcendental": rt,
                }),
                format!("v_(alpha,gamma)(f) = {value} (residually transcendental: {rt})"),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Order { field, alpha1, gamma1, alpha2, gamma2 } => {
            let f = parse_field(field)?;
            let p1 = GaussPoint::new(f.clone(), parse_elem(&f, alpha1)?, parse_rational(gamma1)?);
            let p2 = GaussPoint::new(f.clone(), parse_elem(&f, alpha2)?, parse_rational(gamma2)?);
            let order = p1.compare_rings(&p2)?;
            emit(
                cli.output,
                &json!({"schema": SCHEMA, "order": order.as_str()}),
                format!("order: {}", order.as_str()),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Closure { field, set } => {
            let f = parse_field(field)?;
            let desc = parse_desc(&f, set)?;
            let closed = closure(&f, &desc)?;
            let rendered = render_desc(&f, &closed);
            emit(
                cli.output,
                &json!({"schema": SCHEMA, "closure": rendered}),
                format!("closure: {rendered}"),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { field, seq, window } => {
            let f = parse_field(field)?;
            let fam = parse_family(&f, seq)?;
            let window = default_window(*window);
            let cls = fam.classify_window(window)?;
            let gaps: Vec<String> = cls.gaps.iter().map(|g| g.to_string()).collect();
            let mut out = json!({
                "schema": SCHEMA,
                "kind": cls.kind.as_str(),
                "gaps": gaps,
                "consistent": cls.consistent,
                "breadth": fam.breadth.to_string(),
                "window": window,
            });
            if cls.kind == SeqKind::PseudoConvergent && cls.consistent {
                let br = fam.breadth_ideal(window)?;
                out["breadth_ideal"] = json!({
                    "threshold": br.threshold.to_string(),
                    "principal": br.principal,
                    "zero": br.zero,
                });
            }
            emit(
                cli.output,
                &out,
                format!(
                    "kind: {} (consistent: {}), gaps: {}",
                    cls.kind.as_str(),
                    cls.consistent,
                    gaps.join(", ")
                ),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Member { field, set, poly, window } => {
            let f = parse_field(field)?;
            let desc = parse_desc(&f, set)?;
            let p = vlab_core::literal::parse_poly(&f, poly)?;
            let window = default_window(*window);
            let verdict = int_member(&f, &desc, &p, window)?;
            let mut out = json!({
                "schema": SCHEMA,
                "member": verdict.member,
                "criterion": verdict.criterion.as_str(),
                "window_certified": verdict.window_certified,
            });
            if let Some((s, v)) = &verdict.witness {
                out["witness"] = json!({"point": f.render(s), "value": v.to_string()});
            }
            emit(
                cli.output,
                &out,
                format!("member: {} ({})", verdict.member, verdict.criterion.as_str()),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Prufer { field, set, window } => {
            let f = parse_field(field)?;
            let desc = parse_desc(&f, set)?;
            let window = default_window(*window);
            let verdict = decide_prufer(&f, &desc, window)?;
            let certificate = match &verdict.certificate {
                Certificate::FiniteSet => json!({"kind": "FiniteSet"}),
                Certificate::Precompact => json!({"kind": "Precompact"}),
                Certificate::TranscendentalType { family } => {
                    json!({"kind": "TranscendentalType", "family": family})
                }
                Certificate::ZeroBreadthIdeal { family } => {
                    json!({"kind": "ZeroBreadthIdeal", "family": family})
                }
                Certificate::PseudoMonotoneWitness(w) => json!({
                    "kind": "PseudoMonotoneWitness",
                    "family": render_family(&w.family),
                    "limit": w.limit_field.render(&w.limit),
                    "limit_field": render_field(&w.limit_field),
                    "breadth": w.breadth.to_string(),
                }),
            };
            let out = json!({
                "schema": SCHEMA,
                "prufer": verdict.prufer,
                "rule": verdict.rule.as_str(),
                "certificate": certificate,
                "caveats": {
                    "window": verdict.caveats.window,
                    "notes": verdict.caveats.notes,
                },
            });
            emit(
                cli.output,
                &out,
                format!("prufer: {} (rule {})", verdict.prufer, verdict.rule.as_str()),
            );
            if verdict.prufer {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }
        Command::Limitset { field, seq, alpha, window } => {
            let f = parse_field(field)?;
            let fam = parse_family(&f, seq)?;
            let a = parse_elem(&f, alpha)?;
            let window = default_window(*window);
            fam.validate(window)?;
            let ball = fam.pseudo_limit_set(&f, &a, window)?;
            let rendered = render_ball(&f, &ball);
            emit(
                cli.output,
                &json!({
                    "schema": SCHEMA,
                    "ball": rendered,
                    "kind": fam.kind.as_str(),
                    "window": window,
                }),
                format!("pseudo-limit set: {rendered}"),
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
