//! Command-line front end. Each subcommand is a thin adapter over a library call.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::corpus::corpus;
use crate::error::{Error, Result};
use crate::finiteness::{duality_audit, goal_witnesses, nonsn_witness_search, StructureTag};
use crate::lambda::{normalize, parse_lambda_with, sn_explore, term_metrics, LambdaSum, SnVerdict};
use crate::resource::{format_coeff, parse_resource, Rig, RTerm};
use crate::taylor::{coeff, linear_expansion, nf_taylor, support_enum_limited, SupportQuery, DEFAULT_SUPPORT_LIMIT};
use crate::types::{check_derivation, parse_type, subtype, synthesize, Derivation};

const GRAMMAR: &str = "\
λ-terms:        x | \\x y. M | M N | M + N | (M)   (corpus names may appear inline)
resource terms: x | \\x. t | t [t1, ..., tn]      (empty bag: t [] or t 1)
types:          X | A -> B | A & B                 (& binds tighter than ->)";

#[derive(Parser, Debug)]
#[command(name = "lambda-taylor", about = "Non-deterministic λ-calculus, Taylor expansion and intersection types", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Corpus entry (I, K, Delta, Omega, Delta3, Omega3, Theta, ThetaSum, DeltaI, Remark1).
    #[arg(long, group = "source")]
    corpus: Option<String>,
    /// Inline term.
    #[arg(long, group = "source")]
    term: Option<String>,
    /// File holding the term (or, for typecheck, a derivation in JSON).
    #[arg(long, group = "source")]
    file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Options {
    #[arg(long, default_value_t = 2)]
    bag_bound: usize,
    #[arg(long, default_value_t = 10_000)]
    fuel: usize,
    #[arg(long, default_value = "rat")]
    rig: Rig,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 3)]
    max_bound: usize,
    /// Exit with status 1 unless the term is strongly normalising.
    #[arg(long)]
    expect_sn: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Tests {
    Singletons,
    Linear,
    Explicit,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and print a term with its metrics.
    Parse(Common),
    /// Leftmost-outermost β-normalisation.
    Normalize(Common),
    /// Explore the β-reduction graph.
    Sn(Common),
    /// List the Taylor support up to the bag bound, with coefficients.
    Taylor(Common),
    /// Coefficient of a resource term in the Taylor expansion.
    Coeff {
        #[command(flatten)]
        common: Common,
        /// The resource term.
        #[arg(long)]
        resource: String,
    },
    /// Normal form of the truncated Taylor expansion for bounds 0..=max-bound.
    NfTaylor(Common),
    /// The linear expansion: support terms whose bags all have one element.
    Linexp(Common),
    /// Intersection counts of truncated supports with cones of test sets.
    Audit {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Tests::Singletons)]
        tests: Tests,
        /// β-steps explored for the linear test set.
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// Test set for `--tests explicit`: resource terms separated by ';'. Repeatable.
        /// Defaults to the linear expansion of the term.
        #[arg(long = "test-set")]
        test_sets: Vec<String>,
    },
    /// Search for support terms witnessing non-termination, or reaching `--goal`.
    Witness {
        #[command(flatten)]
        common: Common,
        /// Resource term the witnesses must reduce to.
        #[arg(long)]
        goal: Option<String>,
        /// Witnesses wanted with `--goal`.
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Check a derivation read from a JSON file.
    Typecheck(Common),
    /// Synthesise a typing derivation.
    Synth(Common),
    /// Decide A ≤ B.
    Subtype {
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    options: Options,
}

/// Exit status and the text for each stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn negative(stdout: String) -> Self {
        Outcome { code: 1, stdout, stderr: String::new() }
    }

    fn usage(msg: String) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("{msg}\n"),
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: format!("{text}\n{GRAMMAR}\n"),
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) => o,
        Err(e @ (Error::Syntax { .. } | Error::Malformed(_))) => Outcome::usage(format!("error: {e}\n\n{GRAMMAR}")),
        Err(e) => Outcome::usage(format!("error: {e}")),
    }
}

fn read_source(src: &Source) -> Result<String> {
    if let Some(name) = &src.corpus {
        return corpus()
            .get(name)
            .map(|m| m.to_string())
            .ok_or_else(|| Error::Malformed(format!("unknown corpus entry '{name}'; known: {}", corpus().names().collect::<Vec<_>>().join(", "))));
    }
    if let Some(t) = &src.term {
        return Ok(t.clone());
    }
    if let Some(p) = &src.file {
        return std::fs::read_to_string(p).map_err(|e| Error::Malformed(format!("cannot read {}: {e}", p.display())));
    }
    Err(Error::Malformed("exactly one of --corpus, --term or --file is required".into()))
}

fn load(src: &Source) -> Result<LambdaSum> {
    if let Some(name) = &src.corpus {
        if let Some(m) = corpus().get(name) {
            return Ok(m.clone());
        }
    }
    parse_lambda_with(read_source(src)?.trim(), corpus().definitions())
}

/// The corpus name of `m` when it has one, otherwise its printed form.
fn label(m: &LambdaSum) -> String {
    corpus().name_of(m).map(str::to_string).unwrap_or_else(|| m.to_string())
}

fn emit(format: Format, mut text: String, value: Value) -> String {
    match format {
        Format::Text => {
            if !text.ends_with('\n') {
                text.push('\n');
            }
            text
        }
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("serialisable")),
    }
}

fn coeff_json(c: &crate::resource::Coeff) -> Value {
    json!(format_coeff(c))
}

fn rig_coeff(rig: Rig, c: crate::resource::Coeff) -> Result<crate::resource::Coeff> {
    let c = rig.normalize(c);
    if rig.contains(&c) {
        Ok(c)
    } else {
        Err(Error::Precondition(format!("coefficient {} is not an element of the {rig} rig", format_coeff(&c))))
    }
}

fn parse_test_set(text: &str) -> Result<BTreeSet<RTerm>> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).map(parse_resource).collect()
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Parse(c) => {
            let m = load(&c.source)?;
            let mt = term_metrics(&m);
            let fv: Vec<String> = m.free_vars().into_iter().collect();
            let text = format!("{m}\nsize {} height {} free {{{}}}\n", mt.size, mt.height, fv.join(", "));
            Ok(Outcome::ok(emit(c.options.format, text, json!({
                "term": m.to_string(), "size": mt.size, "height": mt.height, "free_vars": fv,
            }))))
        }
        Command::Normalize(c) => {
            let m = load(&c.source)?;
            let fuel = c.options.fuel;
            Ok(match normalize(&m, fuel) {
                Some((n, steps)) => Outcome::ok(emit(
                    c.options.format,
                    format!("{n}\n({steps} steps)\n"),
                    json!({"normal_form": n.to_string(), "steps": steps}),
                )),
                None => Outcome::negative(emit(
                    c.options.format,
                    format!("no normal form within {fuel} steps\n"),
                    json!({"normal_form": null, "fuel": fuel}),
                )),
            })
        }
        Command::Sn(c) => {
            let m = load(&c.source)?;
            let verdict = sn_explore(&m, c.options.fuel);
            let (text, value) = match &verdict {
                SnVerdict::StronglyNormalizing { max_reduction_length } => (
                    format!("SN: max reduction length {max_reduction_length}\n"),
                    json!({"verdict": "SN", "max_reduction_length": max_reduction_length}),
                ),
                SnVerdict::NotSn { cycle } => {
                    let names: Vec<String> = cycle.iter().map(label).collect();
                    (format!("NotSN: cycle {}\n", names.join(" -> ")), json!({"verdict": "NotSN", "cycle": names}))
                }
                SnVerdict::Unknown { visited } => (
                    format!("Unknown: fuel exhausted after {visited} terms\n"),
                    json!({"verdict": "Unknown", "visited": visited}),
                ),
            };
            let out = emit(c.options.format, text, value);
            Ok(if c.options.expect_sn && !verdict.is_sn() {
                Outcome::negative(out)
            } else {
                Outcome::ok(out)
            })
        }
        Command::Taylor(c) => {
            let m = load(&c.source)?;
            let support = support_enum_limited(&m, SupportQuery::bags(c.options.bag_bound), DEFAULT_SUPPORT_LIMIT)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for t in &support {
                let k = rig_coeff(c.options.rig, coeff(&m, t))?;
                writeln!(text, "{}  {t}", format_coeff(&k)).expect("string write");
                rows.push(json!({"term": t.to_string(), "coeff": coeff_json(&k)}));
            }
            writeln!(text, "{} terms with bags ≤ {}", support.len(), c.options.bag_bound).expect("string write");
            Ok(Outcome::ok(emit(c.options.format, text, json!({
                "term": m.to_string(), "bag_bound": c.options.bag_bound, "support": rows,
            }))))
        }
        Command::Coeff { common: c, resource } => {
            let m = load(&c.source)?;
            let t = parse_resource(&resource)?;
            let k = rig_coeff(c.options.rig, coeff(&m, &t))?;
            Ok(Outcome::ok(emit(
                c.options.format,
                format!("{}\n", format_coeff(&k)),
                json!({"term": m.to_string(), "resource": t.to_string(), "coeff": coeff_json(&k)}),
            )))
        }
        Command::NfTaylor(c) => {
            let m = load(&c.source)?;
            let report = nf_taylor(&m, c.options.max_bound);
            Ok(Outcome::ok(emit(c.options.format, report.to_string(), report.to_json())))
        }
        Command::Linexp(c) => {
            let m = load(&c.source)?;
            let l = linear_expansion(&m);
            let items: Vec<String> = l.iter().map(RTerm::to_string).collect();
            let mut text = String::new();
            for s in &items {
                writeln!(text, "{s}").expect("string write");
            }
            Ok(Outcome::ok(emit(c.options.format, text, json!({"term": m.to_string(), "linear_expansion": items}))))
        }
        Command::Audit { common: c, tests, steps, test_sets } => {
            let m = load(&c.source)?;
            let tag = match tests {
                Tests::Singletons => StructureTag::Singletons,
                Tests::Linear => StructureTag::Linear { steps },
                Tests::Explicit if test_sets.is_empty() => StructureTag::Explicit(vec![linear_expansion(&m)]),
                Tests::Explicit => StructureTag::Explicit(test_sets.iter().map(|s| parse_test_set(s)).collect::<Result<_>>()?),
            };
            let report = duality_audit(&m, &tag, c.options.max_bound);
            Ok(Outcome::ok(emit(c.options.format, report.to_string(), report.to_json())))
        }
        Command::Witness { common: c, goal, count } => {
            let m = load(&c.source)?;
            match goal {
                Some(g) => {
                    let g = parse_resource(&g)?;
                    let found = goal_witnesses(&m, &g, c.options.fuel, count, c.options.bag_bound);
                    let items: Vec<String> = found.iter().map(RTerm::to_string).collect();
                    let mut text = format!("{} support terms reducing to {g}\n", items.len());
                    for s in &items {
                        writeln!(text, "  {s}").expect("string write");
                    }
                    let out = emit(c.options.format, text, json!({"goal": g.to_string(), "witnesses": items}));
                    Ok(if found.is_empty() { Outcome::negative(out) } else { Outcome::ok(out) })
                }
                None => Ok(match nonsn_witness_search(&m, c.options.fuel) {
                    Some(p) => Outcome::ok(emit(c.options.format, p.to_string(), p.to_json())),
                    None => Outcome::negative(emit(
                        c.options.format,
                        "no witness found within fuel\n".into(),
                        json!({"witness": null}),
                    )),
                }),
            }
        }
        Command::Typecheck(c) => {
            let d = Derivation::from_json(&read_source(&c.source)?)?;
            Ok(match check_derivation(&d) {
                Ok(()) => Outcome::ok(emit(
                    c.options.format,
                    format!("valid: {} ⊢ {} : {}\n", context_text(&d), d.term, d.ty),
                    json!({"valid": true}),
                )),
                Err(e) => Outcome::negative(emit(c.options.format, format!("invalid: {e}\n"), json!({"valid": false, "error": e.to_string()}))),
            })
        }
        Command::Synth(c) => {
            let m = load(&c.source)?;
            Ok(match synthesize(&m, c.options.fuel) {
                Some(d) => Outcome::ok(emit(c.options.format, d.to_string(), d.to_json())),
                None => Outcome::negative(emit(
                    c.options.format,
                    format!("no derivation: {} is not known to be strongly normalising\n", label(&m)),
                    json!({"derivation": null}),
                )),
            })
        }
        Command::Subtype { left, right, format } => {
            let a = parse_type(&left)?;
            let b = parse_type(&right)?;
            let holds = subtype(&a, &b);
            let out = emit(format, format!("{a} ≤ {b}: {holds}\n"), json!({"left": a.to_string(), "right": b.to_string(), "holds": holds}));
            Ok(if holds { Outcome::ok(out) } else { Outcome::negative(out) })
        }
    }
}

fn context_text(d: &Derivation) -> String {
    d.context.iter().map(|(x, t)| format!("{x}:{t}")).collect::<Vec<_>>().join(", ")
}
