//! Command runner: reads class, tree-class and structure documents, runs
//! constructions and checks, and renders deterministic reports.
//!
//! Exit codes: 0 success or Holds, 1 Fails, 2 parse or schema error,
//! 3 Undecided or unsupported.

pub mod codec;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use tokenspace::limit::Diagram;
use tokenspace::ops::{
    blending, generalizing, introduce_unknown, matchup, obscuring, powering, refering, retag,
    reversing, setops, union_y, Retag, SetOp,
};
use tokenspace::oracle::{verify_universal, Candidate, TestFamily};
use tokenspace::reify::{hom_correspondence, reify_class, ReifyError};
use tokenspace::rep::{rep_builtin, RepError};
use tokenspace::subobject::subclass_verdict;
use tokenspace::tree::{corr, flatten, scatter_flat, scatter_star, universal_of, TreeError};
use tokenspace::{
    abstract_stuff, constant_class, coproduct, exponent, hom_enumerate, limit, product,
    pullback_inclusion_check, AbstractKind, ClassError, Constant, Symbol, TokenClass, Verdict,
    Witness, DEFAULT_BOUND,
};

use codec::{print_map, print_symbol, print_term, print_token, CodecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "tokenspace",
    about = "Token classes, tree tokens and their constructions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Applies an operator and writes the resulting class (or map) document.
    Op {
        name: OpName,
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Comma-separated symbols for lift, abslift and release.
        #[arg(long)]
        symbols: Option<String>,
        /// Comma-separated `old=new` pairs for rename.
        #[arg(long)]
        rename: Option<String>,
    },
    /// Prints a class, map or tree-class document in canonical form.
    Fmt { doc: PathBuf },
    /// Checks subclass containment.
    Check {
        kind: CheckKind,
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Lists every map between two classes.
    Hom { a: PathBuf, b: PathBuf },
    /// Verifies a universal property against a test family.
    Verify {
        kind: VerifyKind,
        inputs: Vec<PathBuf>,
        /// `default` or `random:SEED:COUNT`.
        #[arg(long, default_value = "default")]
        family: String,
    },
    /// Tree-term utilities.
    Tree {
        action: TreeAction,
        args: Vec<String>,
    },
    /// Encodes a structure document as a class.
    Rep { kind: String, structure: PathBuf },
    /// Reifies a tree-class document.
    Reify { class: PathBuf },
    /// Compares t-maps with p-maps between reifications.
    HomCorr {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OpName {
    Product,
    Coproduct,
    Exponent,
    Merge,
    Meet,
    Forget,
    Delete,
    Unknown,
    #[value(alias = "power")]
    Powering,
    #[value(alias = "obscure")]
    Obscuring,
    Matchup,
    #[value(alias = "blend")]
    Blending,
    #[value(alias = "union")]
    UnionY,
    #[value(alias = "refer")]
    Refering,
    /// Takes a map document; writes a map document.
    #[value(alias = "reverse")]
    Reversing,
    /// Takes a map document `T → ∇T` and a subclass document.
    #[value(alias = "generalize")]
    Generalizing,
    Lift,
    Abslift,
    Release,
    Rename,
    Abstract,
    Stuff,
    Initial,
    Terminal,
    Truth,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CheckKind {
    Subclass,
    PullbackSubclass,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VerifyKind {
    Product,
    Coproduct,
    Exponent,
    Limit,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TreeAction {
    Measure,
    Flatten,
    Universal,
    Corr,
    Scatter,
}

/// A command failure with its exit code.
struct Failure(i32, String);

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::Class(c) => c.into(),
            other => Failure(EXIT_INPUT, other.to_string()),
        }
    }
}

impl From<ClassError> for Failure {
    fn from(e: ClassError) -> Self {
        let code = match e {
            ClassError::SymbolicExponentUnsupported
            | ClassError::SymbolicHeapUnsupported
            | ClassError::BaseTooLarge(_)
            | ClassError::UndecidedContainment(_) => EXIT_UNDECIDED,
            _ => EXIT_INPUT,
        };
        Failure(code, e.to_string())
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        Failure(EXIT_INPUT, e.to_string())
    }
}

impl From<ReifyError> for Failure {
    fn from(e: ReifyError) -> Self {
        match e {
            ReifyError::Class(c) => c.into(),
            ReifyError::Tree(t) => t.into(),
        }
    }
}

impl From<RepError> for Failure {
    fn from(e: RepError) -> Self {
        match e {
            RepError::Class(c) => c.into(),
            other => Failure(EXIT_INPUT, other.to_string()),
        }
    }
}

impl From<codec::SyntaxError> for Failure {
    fn from(e: codec::SyntaxError) -> Self {
        Failure(EXIT_INPUT, e.to_string())
    }
}

type Outcome = Result<(i32, String), Failure>;

/// Renders a witness with document-style symbol text.
pub fn format_witness(w: &Witness) -> String {
    match w {
        Witness::Token(t) => format!("token {}", print_token(t)),
        Witness::Symbol(s) => format!("symbol {}", print_symbol(s)),
        Witness::Map(m) => format!("map {}", print_map(m)),
        Witness::NoMediator(cone) => {
            let legs: Vec<String> = cone.iter().map(print_map).collect();
            format!("no mediator for cone [{}]", legs.join(", "))
        }
        Witness::TwoMediators(a, b) => {
            format!("two mediators {} and {}", print_map(a), print_map(b))
        }
    }
}

fn verdict_report(v: &Verdict) -> (i32, String) {
    match v {
        Verdict::Holds => (EXIT_OK, "Holds\n".into()),
        Verdict::Fails(w) => (EXIT_FAILS, format!("Fails: {}\n", format_witness(w))),
        Verdict::Undecided(b) => (EXIT_UNDECIDED, format!("Undecided (bound {b})\n")),
    }
}

fn inputs<const N: usize>(paths: &[PathBuf]) -> Result<[TokenClass; N], Failure> {
    if paths.len() != N {
        return Err(Failure(
            EXIT_INPUT,
            format!("expected {N} input file(s), got {}", paths.len()),
        ));
    }
    let classes = paths
        .iter()
        .map(|p| codec::read_class(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(classes
        .try_into()
        .unwrap_or_else(|_| unreachable!("length checked")))
}

fn symbol_list(text: Option<&str>, flag: &str) -> Result<BTreeSet<Symbol>, Failure> {
    let text = text.ok_or_else(|| Failure(EXIT_INPUT, format!("missing --{flag}")))?;
    text.split(',')
        .filter(|s| !s.is_empty())
        .map(|s| Ok(codec::parse_symbol(s.trim())?))
        .collect()
}

fn run_op(
    name: OpName,
    paths: &[PathBuf],
    symbols: Option<&str>,
    rename: Option<&str>,
) -> Result<Value, Failure> {
    use OpName::*;
    let out = match name {
        Reversing => match paths {
            [m] => return Ok(codec::map_to_json(&reversing(&codec::read_map(m)?)?)),
            _ => {
                return Err(Failure(
                    EXIT_INPUT,
                    format!("expected 1 input file(s), got {}", paths.len()),
                ))
            }
        },
        Generalizing => match paths {
            [m, t] => generalizing(&codec::read_map(m)?, &codec::read_class(t)?)?,
            _ => {
                return Err(Failure(
                    EXIT_INPUT,
                    format!("expected 2 input file(s), got {}", paths.len()),
                ))
            }
        },
        Product => {
            let [a, b] = inputs(paths)?;
            product(&a, &b)?.class
        }
        Coproduct => {
            let [a, b] = inputs(paths)?;
            coproduct(&a, &b)?.class
        }
        Exponent => {
            let [a, b] = inputs(paths)?;
            exponent(&a, &b)?.class
        }
        Merge | Meet | Delete => {
            let [a, b] = inputs(paths)?;
            let kind = match name {
                Merge => SetOp::Merge,
                Meet => SetOp::Meet,
                _ => SetOp::Delete,
            };
            setops(kind, &a, Some(&b))?
        }
        Forget => {
            let [a] = inputs(paths)?;
            setops(SetOp::Forget, &a, None)?
        }
        Unknown => introduce_unknown(&inputs::<1>(paths)?[0])?,
        Powering => powering(&inputs::<1>(paths)?[0])?,
        Obscuring => obscuring(&inputs::<1>(paths)?[0])?,
        Abstract => abstract_stuff(AbstractKind::Abstracting, &inputs::<1>(paths)?[0])?,
        Stuff => abstract_stuff(AbstractKind::Stuffing, &inputs::<1>(paths)?[0])?,
        Matchup | Blending | UnionY | Refering => {
            let [a, b] = inputs(paths)?;
            match name {
                Matchup => matchup(&a, &b)?,
                Blending => blending(&a, &b)?,
                UnionY => union_y(&a, &b)?,
                _ => refering(&a, &b)?,
            }
        }
        Lift | Abslift | Release => {
            let [a] = inputs(paths)?;
            let s = symbol_list(symbols, "symbols")?;
            let kind = match name {
                Lift => Retag::Lift(s),
                Abslift => Retag::AbsLift(s),
                _ => Retag::Release(s),
            };
            retag(&kind, &a)?
        }
        Rename => {
            let [a] = inputs(paths)?;
            let text = rename.ok_or_else(|| Failure(EXIT_INPUT, "missing --rename".into()))?;
            let mut m = tokenspace::SymbolMap::new();
            for pair in text.split(',').filter(|s| !s.is_empty()) {
                let (k, v) = pair.split_once('=').ok_or_else(|| {
                    Failure(EXIT_INPUT, format!("rename entry `{pair}` is not old=new"))
                })?;
                m.insert(
                    codec::parse_symbol(k.trim())?,
                    codec::parse_symbol(v.trim())?,
                );
            }
            retag(&Retag::Rename(m), &a)?
        }
        Initial | Terminal | Truth => {
            let [a] = inputs(paths)?;
            let kind = match name {
                Initial => Constant::Initial,
                Terminal => Constant::Terminal,
                _ => Constant::Truth,
            };
            constant_class(kind, a.core())
        }
    };
    Ok(codec::class_to_json(&out))
}

fn parse_family(text: &str, core: &BTreeSet<Symbol>) -> Result<TestFamily, Failure> {
    if text == "default" {
        return Ok(TestFamily::default_for(core));
    }
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        ["random", seed, count] => match (seed.parse(), count.parse()) {
            (Ok(seed), Ok(count)) => Ok(TestFamily::random(core, seed, count)),
            _ => Err(Failure(EXIT_INPUT, format!("invalid family `{text}`"))),
        },
        _ => Err(Failure(EXIT_INPUT, format!("invalid family `{text}`"))),
    }
}

fn run_verify(kind: VerifyKind, paths: &[PathBuf], family: &str) -> Outcome {
    let classes = paths
        .iter()
        .map(|p| codec::read_class(p))
        .collect::<Result<Vec<_>, _>>()?;
    let first = classes
        .first()
        .ok_or_else(|| Failure(EXIT_INPUT, "expected input files".into()))?;
    let fam = parse_family(family, first.core())?;
    let pair = || match classes.as_slice() {
        [a, b] => Ok((a, b)),
        _ => Err(Failure(
            EXIT_INPUT,
            format!("expected 2 input files, got {}", classes.len()),
        )),
    };
    let candidate = match kind {
        VerifyKind::Product => {
            let (a, b) = pair()?;
            Candidate::from(&product(a, b)?)
        }
        VerifyKind::Coproduct => {
            let (a, b) = pair()?;
            Candidate::from(&coproduct(a, b)?)
        }
        VerifyKind::Exponent => {
            let (a, b) = pair()?;
            Candidate::from(&exponent(a, b)?)
        }
        VerifyKind::Limit => {
            let mut d = Diagram::new(first.core().clone());
            for (i, c) in classes.iter().enumerate() {
                d = d.object(&format!("D{i}"), c);
            }
            let l = limit(&d)?;
            Candidate::from_limit(&d, &l)
        }
    };
    Ok(verdict_report(&verify_universal(&candidate, &fam)))
}

fn one_term(args: &[String], n: usize) -> Result<Vec<tokenspace::tree::TreeTerm>, Failure> {
    if args.len() != n {
        return Err(Failure(
            EXIT_INPUT,
            format!("expected {n} term(s), got {}", args.len()),
        ));
    }
    args.iter().map(|a| Ok(codec::parse_term(a)?)).collect()
}

fn run_tree(action: TreeAction, args: &[String]) -> Outcome {
    let mut out = String::new();
    match action {
        TreeAction::Measure => {
            if args.is_empty() {
                return Err(Failure(EXIT_INPUT, "expected at least one term".into()));
            }
            for a in args {
                let r = codec::parse_term(a)?;
                let tary = r.tary().map_or("n/a".to_string(), |n| n.to_string());
                writeln!(
                    out,
                    "{}: length={} depth={} ary={} tary={}",
                    print_term(&r),
                    r.length(),
                    r.depth(),
                    r.ary(),
                    tary
                )
                .expect("write to string");
            }
        }
        TreeAction::Flatten => {
            let [r] = <[_; 1]>::try_from(one_term(args, 1)?).expect("one term");
            writeln!(out, "{}", print_term(&flatten(&r)?)).expect("write to string");
        }
        TreeAction::Universal => {
            let [r] = <[_; 1]>::try_from(one_term(args, 1)?).expect("one term");
            writeln!(out, "{}", print_term(&universal_of(&r)?)).expect("write to string");
        }
        TreeAction::Corr => {
            let [s, d] = <[_; 2]>::try_from(one_term(args, 2)?).expect("two terms");
            match corr(&s, &d) {
                Some(c) => {
                    for (k, v) in &c.assignment {
                        writeln!(out, "{} -> {}", print_symbol(k), print_term(v))
                            .expect("write to string");
                    }
                }
                None => return Ok((EXIT_FAILS, "none\n".into())),
            }
        }
        TreeAction::Scatter => {
            let (kind, rest) = args
                .split_first()
                .ok_or_else(|| Failure(EXIT_INPUT, "expected flat|star and a term".into()))?;
            let [r] = <[_; 1]>::try_from(one_term(rest, 1)?).expect("one term");
            let set = match kind.as_str() {
                "flat" => scatter_flat(&r)?,
                "star" => scatter_star(&r)?,
                other => return Err(Failure(EXIT_INPUT, format!("unknown scattering `{other}`"))),
            };
            for t in &set {
                writeln!(out, "{}", print_term(t)).expect("write to string");
            }
        }
    }
    Ok((EXIT_OK, out))
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Op {
            name,
            inputs,
            output,
            symbols,
            rename,
        } => {
            let doc = codec::to_text(&run_op(
                name,
                &inputs,
                symbols.as_deref(),
                rename.as_deref(),
            )?);
            match output {
                Some(path) => {
                    std::fs::write(&path, doc).map_err(|e| {
                        Failure(EXIT_INPUT, format!("cannot write {}: {e}", path.display()))
                    })?;
                    Ok((EXIT_OK, format!("wrote {}\n", path.display())))
                }
                None => Ok((EXIT_OK, doc)),
            }
        }
        Command::Fmt { doc } => Ok((
            EXIT_OK,
            codec::to_text(&codec::canonical(&codec::read_json(&doc)?)?),
        )),
        Command::Check { kind, a, b, bound } => {
            let (a, b) = (codec::read_class(&a)?, codec::read_class(&b)?);
            let v = match kind {
                CheckKind::Subclass => subclass_verdict(&a, &b, bound)?,
                CheckKind::PullbackSubclass => pullback_inclusion_check(&a, &b)?,
            };
            Ok(verdict_report(&v))
        }
        Command::Hom { a, b } => {
            let (a, b) = (codec::read_class(&a)?, codec::read_class(&b)?);
            let homs = hom_enumerate(&a, &b);
            let mut out = format!("{} map(s)\n", homs.maps.len());
            for m in &homs.maps {
                writeln!(out, "{}", print_map(m.f0())).expect("write to string");
            }
            if homs.undecided.is_empty() {
                Ok((EXIT_OK, out))
            } else {
                for (m, bound) in &homs.undecided {
                    writeln!(out, "undecided (bound {bound}): {}", print_map(m))
                        .expect("write to string");
                }
                Ok((EXIT_UNDECIDED, out))
            }
        }
        Command::Verify {
            kind,
            inputs,
            family,
        } => run_verify(kind, &inputs, &family),
        Command::Tree { action, args } => run_tree(action, &args),
        Command::Rep { kind, structure } => {
            let b = codec::structure_from_json(&kind, &codec::read_json(&structure)?)?;
            Ok((
                EXIT_OK,
                codec::to_text(&codec::class_to_json(&rep_builtin(&b)?)),
            ))
        }
        Command::Reify { class } => {
            let t = codec::tree_class_from_json(&codec::read_json(&class)?)?;
            Ok((
                EXIT_OK,
                codec::to_text(&codec::class_to_json(&reify_class(&t)?)),
            ))
        }
        Command::HomCorr { a, b, depth } => {
            let t1 = codec::tree_class_from_json(&codec::read_json(&a)?)?;
            let t2 = codec::tree_class_from_json(&codec::read_json(&b)?)?;
            let rep = hom_correspondence(&t1, &t2, depth)?;
            let mut out = String::new();
            writeln!(out, "t-maps (depth <= {}): {}", rep.depth, rep.tmaps.len())
                .expect("write to string");
            writeln!(out, "p-maps: {}", rep.pmaps.len()).expect("write to string");
            writeln!(out, "p-maps within depth bound: {}", rep.pmaps_within_bound)
                .expect("write to string");
            writeln!(out, "reified t-maps are p-maps: {}", rep.reified_ok)
                .expect("write to string");
            writeln!(out, "p-maps restrict to t-maps: {}", rep.restrict_ok)
                .expect("write to string");
            writeln!(out, "f(r) = reified f(r): {}", rep.agree_on_heap).expect("write to string");
            if let Some(u) = rep.singleton_unique {
                writeln!(out, "at most one p-map: {u}").expect("write to string");
            }
            let holds = rep.holds();
            writeln!(out, "{}", if holds { "Holds" } else { "Fails" }).expect("write to string");
            Ok((if holds { EXIT_OK } else { EXIT_FAILS }, out))
        }
    }
}

/// Runs one command line (including the program name) and returns the exit
/// code with the full report.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    match dispatch(cli.command) {
        Ok(r) => r,
        Err(Failure(code, msg)) => (code, format!("error: {msg}\n")),
    }
}
