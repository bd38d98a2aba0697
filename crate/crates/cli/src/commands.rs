//! Argument parsing and command dispatch.

use std::path::Path;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use berkfilter::ball::{check_r_good, FormalBall};
use berkfilter::classifier::{
    canonicalize_trivial, classify_integer_seminorm, Classified, IntegerSeminormSpec, SeminormOracle,
    SpecOracle, TableOracle,
};
use berkfilter::exactnum::{fmt_decimal, fmt_rat, int, rat, to_exact, Rational};
use berkfilter::field::{Ambient, PAdicQ, TAdicField, TrivialQ, ValuedField};
use berkfilter::seminorm::{
    filter_seminorm_poly, hat_ball_poly, series_enclosure, verify_roundtrip_f, verify_roundtrip_x,
    FilterSeminorm, LinPoly, RoundtripReport,
};

use crate::error::{CliError, EXIT_FAIL};
use crate::lower::{lower_rational, print_filter, read_ball, read_filter, read_poly, read_series};
use crate::parse::parse_element;
use crate::tree::{emit_tree, TreeData, TreeKind};

#[derive(Parser, Debug)]
#[command(name = "berkfilter", version, about = "Seminorms, formal balls and R-good filters")]
pub struct Cli {
    /// Field instance: trivial, padic:P or tadic:B.
    #[arg(long, global = true, default_value = "trivial")]
    pub field: String,
    /// Radius R of the ambient disc.
    #[arg(long = "R", global = true, default_value = "1")]
    pub radius: String,
    /// Number of approximation stages to inspect.
    #[arg(long, global = true, default_value_t = 64)]
    pub depth: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Dot,
    Records,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a filter seminorm on a polynomial or series, or a ball seminorm on a polynomial.
    Eval {
        #[arg(long, conflicts_with = "ball")]
        filter: Option<String>,
        #[arg(long)]
        ball: Option<String>,
        #[arg(long, conflicts_with = "series")]
        poly: Option<String>,
        #[arg(long, conflicts_with = "ball")]
        series: Option<String>,
    },
    /// Check that a filter and its seminorm determine each other on random probes.
    Roundtrip {
        #[arg(long)]
        filter: String,
        #[arg(long, default_value_t = 20)]
        probes: usize,
    },
    /// Run the bounded filter-law verifier.
    CheckFilter {
        #[arg(long)]
        filter: String,
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Classify a seminorm on the integers given by an oracle fixture.
    ClassifyZ {
        /// Builtin fixture name, inline spec, or path to a JSON fixture.
        #[arg(long)]
        fixture: String,
        #[arg(long, default_value_t = 50)]
        primes: u64,
        #[arg(long, default_value = "1/1000000")]
        precision: String,
    },
    /// Canonical form of a filter over the trivially valued rationals.
    Canonicalize {
        #[arg(long)]
        filter: String,
    },
    /// Emit tree data as DOT and JSON.
    Tree {
        #[arg(long, value_parser = ["spec_Z", "trivial_R_lt_1", "trivial_R_geq_1"])]
        kind: Option<String>,
        #[arg(long, default_value = "2,3,5")]
        primes: String,
        #[arg(long, default_value = "0,1,2")]
        centers: String,
        /// Write PREFIX.dot and PREFIX.json instead of printing.
        #[arg(long)]
        out: Option<String>,
    },
}

/// Output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub status: i32,
}

#[derive(Serialize)]
struct Record<'a> {
    kind: &'a str,
    input: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    interval: Option<String>,
    status: &'a str,
}

struct Out {
    format: Format,
    text: String,
    status: i32,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn emit(&mut self, rec: Record<'_>, text: String) {
        match self.format {
            Format::Records => {
                let s = serde_json::to_string(&rec).expect("record serializes");
                self.line(s);
            }
            _ => self.line(text),
        }
    }

    fn fail(&mut self) {
        self.status = EXIT_FAIL;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Trivial,
    PAdic(u64),
    TAdic(Rational),
}

pub fn parse_field(text: &str) -> Result<FieldSpec, CliError> {
    let bad = || CliError::Usage(format!("unknown field '{text}'; expected trivial, padic:P or tadic:B"));
    match text.split_once(':') {
        None if text == "trivial" => Ok(FieldSpec::Trivial),
        Some(("padic", p)) => p.trim().parse().map(FieldSpec::PAdic).map_err(|_| bad()),
        Some(("tadic", b)) => Ok(FieldSpec::TAdic(parse_rational(b, "t-adic base")?)),
        _ => Err(bad()),
    }
}

pub fn parse_rational(text: &str, what: &str) -> Result<Rational, CliError> {
    lower_rational(&parse_element(text)?, what)
}

/// Runs the CLI on `args` (including the program name) without touching the process.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { crate::error::EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stderr: text,
                    status,
                    ..Outcome::default()
                }
            } else {
                Outcome {
                    stdout: text,
                    status,
                    ..Outcome::default()
                }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let mut out = Out {
        format: cli.format,
        text: String::new(),
        status: 0,
    };
    match dispatch(cli, &mut out) {
        Ok(()) => Outcome {
            stdout: out.text,
            stderr: String::new(),
            status: out.status,
        },
        Err(e) => Outcome {
            stdout: out.text,
            stderr: format!("error[{}]: {e}\n", e.code()),
            status: e.exit_status(),
        },
    }
}

fn dispatch(cli: &Cli, out: &mut Out) -> Result<(), CliError> {
    let is_tree = matches!(cli.command, Command::Tree { .. });
    if cli.format == Format::Dot && !is_tree {
        return Err(CliError::Usage("--format dot applies to the tree command only".into()));
    }
    let radius = parse_rational(&cli.radius, "R")?;
    match &cli.command {
        Command::ClassifyZ {
            fixture,
            primes,
            precision,
        } => classify_z(fixture, *primes, &parse_rational(precision, "precision")?, out),
        Command::Tree {
            kind,
            primes,
            centers,
            out: prefix,
        } => tree(cli, &radius, kind.as_deref(), primes, centers, prefix.as_deref(), out),
        cmd => match parse_field(&cli.field)? {
            FieldSpec::Trivial => run_in(Ambient::new(TrivialQ, radius)?, cli, cmd, out),
            FieldSpec::PAdic(p) => run_in(Ambient::new(PAdicQ::new(p)?, radius)?, cli, cmd, out),
            FieldSpec::TAdic(b) => run_in(Ambient::new(TAdicField::new(b)?, radius)?, cli, cmd, out),
        },
    }
}

fn run_in<F: ValuedField>(amb: Ambient<F>, cli: &Cli, cmd: &Command, out: &mut Out) -> Result<(), CliError> {
    let field = amb.field().clone();
    let depth = cli.depth;
    match cmd {
        Command::Eval {
            filter,
            ball,
            poly,
            series,
        } => match (filter, ball, poly, series) {
            (Some(fl), None, Some(p), None) => {
                let filter = read_filter(&amb, fl)?;
                let f = read_poly(&field, p)?;
                let v = filter_seminorm_poly(&filter, &f);
                let exact = to_exact(&v, depth).is_some();
                let desc = v.describe(depth);
                out.emit(
                    Record {
                        kind: "eval",
                        input: p,
                        value: Some(desc.clone()),
                        interval: None,
                        status: if exact { "exact" } else { "bound" },
                    },
                    desc,
                );
                Ok(())
            }
            (None, Some(b), Some(p), None) => {
                let ball = read_ball(&amb, b)?;
                let f = read_poly(&field, p)?;
                let v = fmt_rat(&hat_ball_poly(&field, &ball, &f));
                out.emit(
                    Record {
                        kind: "eval",
                        input: p,
                        value: Some(v.clone()),
                        interval: None,
                        status: "exact",
                    },
                    v,
                );
                Ok(())
            }
            (Some(fl), None, None, Some(s)) => {
                let filter = read_filter(&amb, fl)?;
                let s_val = read_series(&field, s)?;
                let e = series_enclosure(&filter, &s_val, depth);
                let iv = e.to_string();
                out.emit(
                    Record {
                        kind: "eval",
                        input: s,
                        value: None,
                        interval: Some(iv.clone()),
                        status: if e.exact_center { "enclosure" } else { "upper_enclosure" },
                    },
                    iv,
                );
                Ok(())
            }
            _ => Err(CliError::Usage(
                "eval needs --filter with --poly or --series, or --ball with --poly".into(),
            )),
        },
        Command::Roundtrip { filter, probes } => {
            let filter = read_filter(&amb, filter)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let (lin, balls) = roundtrip_probes(&amb, *probes, &mut rng);
            let x = FilterSeminorm::new(filter.clone()).into_dyn();
            let rx = verify_roundtrip_x(Arc::clone(&x), &lin, depth);
            let rf = verify_roundtrip_f(&filter, &balls, depth);
            let input = print_filter(&filter);
            report_roundtrip("roundtrip_x", &input, &rx, out);
            report_roundtrip("roundtrip_f", &input, &rf, out);
            Ok(())
        }
        Command::CheckFilter { filter, samples } => {
            let filter = read_filter(&amb, filter)?;
            let input = print_filter(&filter);
            let rep = check_r_good(&filter, depth, *samples);
            let status = if rep.passed() { "pass" } else { "fail" };
            out.emit(
                Record {
                    kind: "check_filter",
                    input: &input,
                    value: Some(format!("{} checks, {} failures", rep.checks, rep.failures.len())),
                    interval: None,
                    status,
                },
                format!("{} ({} checks)", status.to_uppercase(), rep.checks),
            );
            for fl in &rep.failures {
                let w = crate::lower::print_ball(&fl.witness);
                out.emit(
                    Record {
                        kind: "counterexample",
                        input: &w,
                        value: Some(format!("{}: {}", fl.clause, fl.detail)),
                        interval: None,
                        status: "fail",
                    },
                    format!("  {}: {w}: {}", fl.clause, fl.detail),
                );
            }
            if !rep.passed() {
                out.fail();
            }
            Ok(())
        }
        Command::Canonicalize { filter } => {
            let filter = read_filter(&amb, filter)?;
            let form = canonicalize_trivial(&filter, depth)?;
            let input = print_filter(&filter);
            let text = form.to_string();
            out.emit(
                Record {
                    kind: "canonicalize",
                    input: &input,
                    value: Some(text.clone()),
                    interval: None,
                    status: form.tag(),
                },
                text,
            );
            Ok(())
        }
        Command::ClassifyZ { .. } | Command::Tree { .. } => unreachable!("handled without a field"),
    }
}

const THRESHOLDS: [(i64, i64); 7] = [(1, 16), (1, 8), (1, 4), (1, 2), (3, 4), (1, 1), (2, 1)];

/// `n` linear probes `(T - k, q·R)` and `n` balls `B(q·R; k)`, half enumerated and half random.
pub fn roundtrip_probes<F: ValuedField>(
    amb: &Ambient<F>,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<(LinPoly<F::Elem>, Rational)>, Vec<FormalBall<F::Elem>>) {
    let field = amb.field();
    let r = amb.radius();
    let mut lin = Vec::with_capacity(n);
    let mut balls = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = THRESHOLDS[i % THRESHOLDS.len()];
        let q = r * rat(a, b);
        let k = if i % 2 == 0 {
            field.enumerate(i / 2)
        } else {
            field.sample(rng)
        };
        lin.push((LinPoly::monic(field, &k), q.clone()));
        let c = if amb.in_k_r(&k) { k } else { amb.sample_k_r(rng) };
        balls.push(FormalBall::unchecked(c, q));
    }
    (lin, balls)
}

fn report_roundtrip(kind: &str, input: &str, rep: &RoundtripReport, out: &mut Out) {
    let status = if rep.passed() { "pass" } else { "fail" };
    out.emit(
        Record {
            kind,
            input,
            value: Some(format!("{} probes, {} disagreements", rep.probes, rep.disagreements.len())),
            interval: None,
            status,
        },
        format!("{kind}: {} ({} probes)", status.to_uppercase(), rep.probes),
    );
    for d in &rep.disagreements {
        out.emit(
            Record {
                kind: "counterexample",
                input: &d.probe,
                value: Some(format!("{} vs {}", d.left, d.right)),
                interval: None,
                status: "fail",
            },
            format!("  probe {}: {}: {} vs {}", d.index, d.probe, d.left, d.right),
        );
    }
    if !rep.passed() {
        out.fail();
    }
}

/// Oracle fixture file: a spec, or triples with an optional spec fallback.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct OracleFixture {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triples: Vec<(String, String, bool)>,
}

const BUILTIN_FIXTURES: [(&str, &str); 8] = [
    ("trivial", "trivial"),
    ("padic2_alpha1", "padic:2:1"),
    ("padic3_alpha1", "padic:3:1"),
    ("padic5_alpha1_2", "padic:5:1/2"),
    ("arch_alpha1", "arch:1"),
    ("arch_alpha1_2", "arch:1/2"),
    ("residue2", "residue:2"),
    ("residue3", "residue:3"),
];

/// `trivial`, `arch:A`, `padic:P:A` or `residue:P`.
pub fn parse_spec(text: &str) -> Result<IntegerSeminormSpec, CliError> {
    let bad = || CliError::Usage(format!("unknown seminorm spec '{text}'"));
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let spec = match parts.as_slice() {
        ["trivial"] => IntegerSeminormSpec::Trivial,
        ["arch", a] => IntegerSeminormSpec::ArchPower(parse_rational(a, "exponent")?),
        ["padic", p, a] => {
            IntegerSeminormSpec::PAdicPower(p.parse().map_err(|_| bad())?, parse_rational(a, "exponent")?)
        }
        ["residue", p] => IntegerSeminormSpec::ResidueTrivial(p.parse().map_err(|_| bad())?),
        _ => return Err(bad()),
    };
    spec.validate()?;
    Ok(spec)
}

pub fn load_oracle(fixture: &str) -> Result<Box<dyn SeminormOracle>, CliError> {
    if let Some((_, s)) = BUILTIN_FIXTURES.iter().find(|(n, _)| *n == fixture) {
        return Ok(Box::new(SpecOracle::new(parse_spec(s)?)?));
    }
    if Path::new(fixture).is_file() {
        let text = std::fs::read_to_string(fixture)?;
        let fx: OracleFixture =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{fixture}: {e}")))?;
        let fallback = fx.spec.as_deref().map(parse_spec).transpose()?.map(SpecOracle::new).transpose()?;
        if fx.triples.is_empty() {
            return match fallback {
                Some(o) => Ok(Box::new(o)),
                None => Err(CliError::Usage(format!("{fixture}: neither spec nor triples given"))),
            };
        }
        let triples = fx
            .triples
            .iter()
            .map(|(n, q, b)| {
                let n: BigInt = n
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("{fixture}: '{n}' is not an integer")))?;
                Ok((n, parse_rational(q, "threshold")?, *b))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        return Ok(Box::new(TableOracle::new(triples, fallback)?));
    }
    Ok(Box::new(SpecOracle::new(parse_spec(fixture)?)?))
}

/// Number of decimal digits `d` with `10^-d <= precision`.
pub fn digits_for(precision: &Rational) -> usize {
    let mut d = 0;
    let mut step = int(1);
    while step > *precision && d < 40 {
        step /= int(10);
        d += 1;
    }
    d
}

pub fn format_classified(c: &Classified, digits: usize) -> String {
    let iv = |a: &berkfilter::exactnum::RatInterval| {
        format!("[{},{}]", fmt_decimal(&a.lo, digits, false), fmt_decimal(&a.hi, digits, true))
    };
    match c {
        Classified::Trivial => "Trivial".to_string(),
        Classified::ArchPower { alpha } => format!("ArchPower({})", iv(alpha)),
        Classified::PAdicPower { p, alpha } => format!("PAdicPower({p}, {})", iv(alpha)),
        Classified::ResidueTrivial { p } => format!("ResidueTrivial({p})"),
    }
}

fn classify_z(fixture: &str, primes: u64, precision: &Rational, out: &mut Out) -> Result<(), CliError> {
    let oracle = load_oracle(fixture)?;
    let c = classify_integer_seminorm(oracle.as_ref(), primes, precision)?;
    let text = format_classified(&c.result, digits_for(precision));
    let interval = c.result.alpha().map(|a| a.to_string());
    out.emit(
        Record {
            kind: "classify_z",
            input: fixture,
            value: Some(text.clone()),
            interval,
            status: c.result.tag(),
        },
        text,
    );
    Ok(())
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn tree(
    cli: &Cli,
    radius: &Rational,
    kind: Option<&str>,
    primes: &str,
    centers: &str,
    prefix: Option<&str>,
    out: &mut Out,
) -> Result<(), CliError> {
    let field = parse_field(&cli.field)?;
    let kind = match kind {
        Some(k) => k,
        None if field != FieldSpec::Trivial => {
            return Err(CliError::Usage(
                "--kind is required unless --field trivial".into(),
            ))
        }
        None if *radius < int(1) => "trivial_R_lt_1",
        None => "trivial_R_geq_1",
    };
    let tk = match kind {
        "spec_Z" => TreeKind::SpecZ {
            primes: split_list(primes)
                .map(|p| {
                    p.parse::<u64>()
                        .map_err(|_| CliError::Usage(format!("'{p}' is not a prime")))
                        .and_then(|n| Ok(PAdicQ::new(n).map(|_| n)?))
                })
                .collect::<Result<_, _>>()?,
        },
        _ => {
            let amb = Ambient::new(TrivialQ, radius.clone())?;
            if kind == "trivial_R_lt_1" {
                if *radius >= int(1) {
                    return Err(CliError::Usage(format!("trivial_R_lt_1 needs R < 1, got {}", fmt_rat(radius))));
                }
                TreeKind::TrivialBelowOne { radius: radius.clone() }
            } else {
                if *radius < int(1) {
                    return Err(CliError::Usage(format!("trivial_R_geq_1 needs R >= 1, got {}", fmt_rat(radius))));
                }
                let cs = split_list(centers)
                    .map(|c| {
                        let k = parse_rational(c, "center")?;
                        amb.check_center(&k)?;
                        Ok(fmt_rat(&k))
                    })
                    .collect::<Result<_, CliError>>()?;
                TreeKind::TrivialAboveOne {
                    radius: radius.clone(),
                    centers: cs,
                }
            }
        }
    };
    let t = emit_tree(&tk);
    if let Some(p) = prefix {
        let dot = format!("{p}.dot");
        let json = format!("{p}.json");
        std::fs::write(&dot, t.to_dot())?;
        std::fs::write(&json, t.to_json())?;
        out.emit(
            Record {
                kind: "tree",
                input: tk.name(),
                value: Some(format!("{dot}, {json}")),
                interval: None,
                status: "written",
            },
            format!("wrote {dot} and {json}"),
        );
        return Ok(());
    }
    match out.format {
        Format::Dot => out.text.push_str(&t.to_dot()),
        Format::Text => out.line(summary(&t)),
        Format::Records => {
            for n in &t.nodes {
                let id = format!("n{}", n.id);
                let rec = Record {
                    kind: "node",
                    input: &id,
                    value: Some(n.label.clone()),
                    interval: Some(n.parameter.clone()),
                    status: match n.kind {
                        crate::tree::NodeKind::Branch => "branch",
                        crate::tree::NodeKind::Leaf => "leaf",
                        crate::tree::NodeKind::Arc => "arc",
                    },
                };
                out.emit(rec, String::new());
            }
            for (a, b) in &t.edges {
                let e = format!("n{a} -> n{b}");
                out.emit(
                    Record {
                        kind: "edge",
                        input: &e,
                        value: None,
                        interval: None,
                        status: "ok",
                    },
                    String::new(),
                );
            }
        }
    }
    Ok(())
}

fn summary(t: &TreeData) -> String {
    let mut s = format!("{}: {} nodes, {} edges", t.kind, t.nodes.len(), t.edges.len());
    for n in &t.nodes {
        let kind = format!("{:?}", n.kind).to_lowercase();
        s.push_str(&format!("\n  n{} {kind} {} [{}]", n.id, n.label, n.parameter));
    }
    s
}
