//! `hdts`: build, transform, check and compare finite HDTS documents.
//!
//! Exit codes: 0 true (or success), 1 false, 2 undecided, 3 usage error,
//! 4 malformed or invalid input, 5 precondition violated.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hdts::bisim::{bisimilar, is_open, span_from_relation, BisimMode, PathSet};
use hdts::builders;
use hdts::checks;
use hdts::colim::{colimit, coproduct_arc, product_arc, pushout, union_subobjects};
use hdts::functors::{self, FunctorResult};
use hdts::homotopy::{self, Verdict};
use hdts::homsearch::{is_cubical, is_isomorphic, SearchLimits, DEFAULT_MAX_NODES};
use hdts::io::{self, ClosureMode};
use hdts::{Hdts, HdtsError, HdtsMap, Label};

const EXIT_FALSE: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_PRECONDITION: u8 = 5;

#[derive(Parser)]
#[command(
    name = "hdts",
    version,
    about = "Finite higher-dimensional transition systems"
)]
struct Cli {
    /// Close transition sets under coherence on load.
    #[arg(long, global = true, conflicts_with = "no_close")]
    close: bool,
    /// Accept transition sets that are not closed under coherence.
    #[arg(long, global = true)]
    no_close: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a standard object.
    #[command(subcommand)]
    Build(Build),
    /// Coproducts, products, pushouts, colimits and unions.
    #[command(subcommand)]
    Op(Op),
    /// Apply a functor to a system.
    Functor(FunctorArgs),
    /// Check a structural property.
    Check(CheckArgs),
    /// Decide a relation between systems or a property of a map.
    #[command(subcommand)]
    Decide(Decide),
}

#[derive(Subcommand)]
enum Build {
    /// The n-cube on the given labels.
    Cube { labels: Vec<String> },
    /// The pure transition on the given labels.
    Ext { labels: Vec<String> },
    /// The cube on the given labels without its top transition.
    Boundary { labels: Vec<String> },
    /// One action realised by two disjoint transitions.
    Dd { label: String },
    /// States and nothing else.
    Discrete { states: Vec<String> },
    /// The map folding two disjoint edges onto the double transition.
    Fold { label: String },
}

#[derive(Subcommand)]
enum Op {
    /// Disjoint union of systems.
    Coproduct {
        inputs: Vec<PathBuf>,
    },
    Product {
        left: PathBuf,
        right: PathBuf,
    },
    /// Pushout of two maps with a common source.
    Pushout {
        f: PathBuf,
        g: PathBuf,
    },
    /// Colimit of a diagram document.
    Colimit {
        diagram: PathBuf,
    },
    /// Union of sub-systems, given as monos into a common system.
    Union {
        monos: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctorKind {
    /// Largest cubical sub-system.
    Coreflect,
    /// Cubification.
    Cub,
    /// CSA1 reflection.
    Csa1,
    /// Merge all equally-labelled actions.
    Collapse,
    /// Cylinder.
    Cyl,
    /// Path object.
    Pathobj,
}

#[derive(Args)]
struct FunctorArgs {
    kind: FunctorKind,
    input: PathBuf,
    /// Write the structural map (unit, counit or projection) to this path.
    #[arg(long, value_name = "PATH")]
    witness: Option<PathBuf>,
    /// For `pathobj`: the weak path object, without the cubical coreflection.
    #[arg(long)]
    weak: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Valid,
    Closed,
    Isa,
    Csa1,
    Csa2,
    Used,
    Cubical,
    Mono,
    Cofib,
    Open,
}

#[derive(Args)]
struct CheckArgs {
    kind: CheckKind,
    /// A system, or a map for `mono`, `cofib` and `open`.
    input: PathBuf,
    /// For `open`: a path cube, as comma-separated labels. Repeatable.
    /// Defaults to every 1-cube over the labels of both ends.
    #[arg(long = "path", value_name = "LABELS")]
    paths: Vec<String>,
    /// For `valid`: write the validation report to this path.
    #[arg(long, value_name = "PATH")]
    witness: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Total,
    Literal,
}

#[derive(Subcommand)]
enum Decide {
    /// Isomorphism of two systems.
    Iso {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_name = "PATH")]
        witness: Option<PathBuf>,
    },
    /// Whether two maps are connected by elementary homotopies.
    Homotopic {
        f: PathBuf,
        g: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
    },
    /// Weak equivalence in the left-determined structure.
    WeLd(WeArgs),
    /// Weak equivalence in the cubification-localized structure.
    WeCub(WeArgs),
    /// Bisimilarity for 1-cube paths.
    Bisim {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value = "total")]
        mode: ModeArg,
        /// Write the greatest bisimulation to this path.
        #[arg(long, value_name = "PATH")]
        witness: Option<PathBuf>,
        /// Write the span of open maps to this path when the answer is yes.
        #[arg(long, value_name = "PATH")]
        span: Option<PathBuf>,
    },
}

#[derive(Args)]
struct WeArgs {
    map: PathBuf,
    /// Replace the map by its cubical coreflection first.
    #[arg(long)]
    coreflect_first: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<HdtsError>() {
        Some(
            HdtsError::Precondition(_)
            | HdtsError::NonCommutingSquare
            | HdtsError::NotComposable
            | HdtsError::SearchLimit(_),
        ) => EXIT_PRECONDITION,
        Some(_) => EXIT_INPUT,
        None if e.downcast_ref::<Usage>().is_some() => EXIT_USAGE,
        None => EXIT_INPUT,
    }
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

struct Ctx {
    mode: ClosureMode,
}

impl Ctx {
    fn read(&self, path: &Path) -> Result<String> {
        if path == Path::new("-") {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .context("reading standard input")?;
            return Ok(s);
        }
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }

    fn system(&self, path: &Path) -> Result<Hdts> {
        let text = self.read(path)?;
        io::parse(&text, self.mode)
            .map_err(|e| anyhow::Error::new(e).context(path.display().to_string()))
    }

    fn map(&self, path: &Path) -> Result<HdtsMap> {
        let text = self.read(path)?;
        io::parse_map(&text, self.mode)
            .map_err(|e| anyhow::Error::new(e).context(path.display().to_string()))
    }
}

fn emit(text: &str) -> Result<()> {
    std::io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

/// Writes a witness document to `path`, or to stdout after the verdict for `-`.
fn write_witness(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        None => Ok(()),
        Some(p) if p == Path::new("-") => emit(text),
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
    }
}

fn verdict(v: Verdict) -> Result<u8> {
    let (word, code) = match v {
        Verdict::True => ("true", 0),
        Verdict::False => ("false", EXIT_FALSE),
        Verdict::Undecided => ("undecided", EXIT_UNDECIDED),
    };
    emit(&format!("{word}\n"))?;
    Ok(code)
}

fn labels(texts: &[String]) -> Result<Vec<Label>> {
    Ok(Label::list(texts)?)
}

fn run(cli: &Cli) -> Result<u8> {
    let ctx = Ctx {
        mode: if cli.close {
            ClosureMode::Apply
        } else if cli.no_close {
            ClosureMode::Skip
        } else {
            ClosureMode::Require
        },
    };
    match &cli.command {
        Command::Build(b) => build(b),
        Command::Op(op) => run_op(&ctx, op),
        Command::Functor(a) => run_functor(&ctx, a),
        Command::Check(a) => run_check(&ctx, a),
        Command::Decide(d) => run_decide(&ctx, d),
    }
}

fn build(b: &Build) -> Result<u8> {
    let text = match b {
        Build::Cube { labels: ls } => io::serialize(&builders::cube(&labels(ls)?)),
        Build::Ext { labels: ls } => io::serialize(&builders::pure_transition(&labels(ls)?)),
        Build::Boundary { labels: ls } => io::serialize(&builders::boundary(&labels(ls)?)),
        Build::Dd { label } => {
            io::serialize(&builders::double_transition(&Label::new(label.as_str())?))
        }
        Build::Discrete { states } => {
            if let Some(bad) = states
                .iter()
                .find(|s| s.is_empty() || s.chars().any(char::is_whitespace))
            {
                return Err(HdtsError::InvalidId(bad.clone()).into());
            }
            io::serialize(&builders::discrete(states.iter().cloned()))
        }
        Build::Fold { label } => {
            io::serialize_map(&builders::fold_map(&Label::new(label.as_str())?))
        }
    };
    emit(&text)?;
    Ok(0)
}

fn run_op(ctx: &Ctx, op: &Op) -> Result<u8> {
    let object = match op {
        Op::Coproduct { inputs } => {
            let parts = inputs
                .iter()
                .map(|p| ctx.system(p).map(Arc::new))
                .collect::<Result<Vec<_>>>()?;
            coproduct_arc(&parts)?.object
        }
        Op::Product { left, right } => {
            product_arc(&Arc::new(ctx.system(left)?), &Arc::new(ctx.system(right)?)).object
        }
        Op::Pushout { f, g } => pushout(&ctx.map(f)?, &ctx.map(g)?)?.object,
        Op::Colimit { diagram } => {
            let d = io::parse_diagram(&ctx.read(diagram)?, ctx.mode)?;
            colimit(&d)?.object
        }
        Op::Union { monos } => {
            let maps = monos
                .iter()
                .map(|p| ctx.map(p))
                .collect::<Result<Vec<_>>>()?;
            let Some(first) = maps.first() else {
                return Err(usage("union needs at least one map"));
            };
            let dst = first.dst().clone();
            if maps.iter().any(|m| m.dst().as_ref() != dst.as_ref()) {
                return Err(HdtsError::Precondition("maps have different codomains".into()).into());
            }
            let maps: Vec<HdtsMap> = maps
                .into_iter()
                .map(|m| {
                    HdtsMap::new(
                        m.src().clone(),
                        dst.clone(),
                        m.state_map().clone(),
                        m.action_map().clone(),
                    )
                })
                .collect();
            union_subobjects(&dst, &maps)?.0
        }
    };
    emit(&io::serialize(&object))?;
    Ok(0)
}

fn run_functor(ctx: &Ctx, a: &FunctorArgs) -> Result<u8> {
    let x = ctx.system(&a.input)?;
    let result = |r: FunctorResult| (r.object, Some(r.structural_map));
    let (object, map) = match a.kind {
        FunctorKind::Coreflect => result(functors::cts_coreflector(&x)?),
        FunctorKind::Cub => result(functors::cubification(&x)?),
        FunctorKind::Csa1 => result(functors::csa1_reflector(&x)?),
        FunctorKind::Collapse => result(functors::label_collapse(&x)?),
        FunctorKind::Cyl => {
            let c = homotopy::cylinder(&x);
            (c.object, Some(c.sigma))
        }
        FunctorKind::Pathobj if a.weak => (Arc::new(homotopy::path_object_whdts(&x)), None),
        FunctorKind::Pathobj => (Arc::new(homotopy::path_object_cts(&x)?), None),
    };
    emit(&io::serialize(&object))?;
    match (&a.witness, map) {
        (Some(_), None) => Err(usage("this functor has no structural map to write")),
        (w, Some(m)) => {
            write_witness(w, &io::serialize_map(&m))?;
            Ok(0)
        }
        (None, None) => Ok(0),
    }
}

fn run_check(ctx: &Ctx, a: &CheckArgs) -> Result<u8> {
    if a.witness.is_some() && !matches!(a.kind, CheckKind::Valid) {
        return Err(usage("--witness is only available for `check valid`"));
    }
    if !a.paths.is_empty() && !matches!(a.kind, CheckKind::Open) {
        return Err(usage("--path is only available for `check open`"));
    }
    let holds = match a.kind {
        CheckKind::Mono => checks::is_mono(&ctx.map(&a.input)?),
        CheckKind::Cofib => checks::is_cofibration(&ctx.map(&a.input)?),
        CheckKind::Open => {
            let f = ctx.map(&a.input)?;
            let paths = if a.paths.is_empty() {
                let all: BTreeSet<Label> =
                    f.src().sigma().union(&f.dst().sigma()).cloned().collect();
                PathSet::all_one_cubes(&all)
            } else {
                let cubes = a
                    .paths
                    .iter()
                    .map(|p| labels(&p.split(',').map(str::to_string).collect::<Vec<_>>()))
                    .collect::<Result<Vec<_>>>()?;
                PathSet::new(cubes)
            };
            is_open(&f, &paths)?
        }
        CheckKind::Valid => {
            // read without closing or rejecting, so that the report is complete
            let x = io::parse(&ctx.read(&a.input)?, ClosureMode::Skip)?;
            let report = hdts::validate(&x);
            let text = report
                .violations
                .iter()
                .map(|v| format!("{}: {}\n", v.rule, v.element))
                .collect::<String>();
            let ok = report.ok();
            verdict(ok.into())?;
            write_witness(&a.witness, &text)?;
            return Ok(if ok { 0 } else { EXIT_FALSE });
        }
        kind => {
            let x = io::parse(&ctx.read(&a.input)?, ClosureMode::Skip)?;
            match kind {
                CheckKind::Closed => checks::is_coherence_closed(&x),
                CheckKind::Isa => checks::check_isa(&x),
                CheckKind::Csa1 => checks::check_csa1(&x),
                CheckKind::Csa2 => checks::check_csa2(&x),
                CheckKind::Used => checks::check_all_actions_used(&x),
                CheckKind::Cubical => is_cubical(&x),
                _ => unreachable!("handled above"),
            }
        }
    };
    verdict(holds.into())
}

fn run_decide(ctx: &Ctx, d: &Decide) -> Result<u8> {
    match d {
        Decide::Iso {
            left,
            right,
            witness,
        } => {
            let found = is_isomorphic(&ctx.system(left)?, &ctx.system(right)?)?;
            let code = verdict(found.is_some().into())?;
            if let Some(f) = found {
                write_witness(witness, &io::serialize_map(&f))?;
            }
            Ok(code)
        }
        Decide::Homotopic { f, g, max_nodes } => {
            let f = ctx.map(f)?;
            let g = ctx.map(g)?;
            // the two documents carry their own copies of the ends
            if f.src().as_ref() != g.src().as_ref() || f.dst().as_ref() != g.dst().as_ref() {
                return Err(HdtsError::Precondition(
                    "maps have different domains or codomains".into(),
                )
                .into());
            }
            let g = HdtsMap::new(
                f.src().clone(),
                f.dst().clone(),
                g.state_map().clone(),
                g.action_map().clone(),
            );
            let limits = SearchLimits {
                max_nodes: *max_nodes,
                ..SearchLimits::default()
            };
            verdict(homotopy::homotopic(&f, &g, limits)?)
        }
        Decide::WeLd(w) => verdict(homotopy::we_left_determined(&we_input(ctx, w)?)?.into()),
        Decide::WeCub(w) => verdict(homotopy::we_cub_localized(&we_input(ctx, w)?)?.into()),
        Decide::Bisim {
            left,
            right,
            mode,
            witness,
            span,
        } => {
            let mode = match mode {
                ModeArg::Total => BisimMode::Total,
                ModeArg::Literal => BisimMode::Literal,
            };
            let r = bisimilar(&ctx.system(left)?, &ctx.system(right)?, mode)?;
            let code = verdict(r.holds.into())?;
            write_witness(witness, &io::serialize_relation(&r.relation))?;
            if span.is_some() {
                let s = match r.span {
                    Some(s) => s,
                    None => span_from_relation(&r.relation)?,
                };
                write_witness(span, &io::serialize_span(&s))?;
            }
            Ok(code)
        }
    }
}

fn we_input(ctx: &Ctx, w: &WeArgs) -> Result<HdtsMap> {
    let f = ctx.map(&w.map)?;
    if w.coreflect_first {
        return Ok(functors::cts_coreflector_map(&f)?);
    }
    Ok(f)
}
