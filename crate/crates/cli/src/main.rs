//! `dmono`: learn, decompose, measure, generate and verify d-monotone
//! functions. Records are single JSON lines; every run is reproducible from
//! the `config` echoed into its record.

mod verify;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dmono::consistent::ConsistentError;
use dmono::families::{self, FamilyError, Instance};
use dmono::format::{load_function, FormatError, FunctionFile, LatticeRef, Loaded};
use dmono::learner::TraceEntry;
use dmono::{
    consistent, learn, monotone_degree, strict_decompose, BoolFn, ExhaustiveEq, Function,
    LabeledSample, Lattice, LatticeError, LearnError, MembershipOracle, XorHypothesis,
};

#[derive(Debug, Parser)]
#[command(
    name = "dmono",
    version,
    about = "Exact learning of d-monotone Boolean functions"
)]
struct Cli {
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include per-counterexample traces in learn records.
    #[arg(long, global = true)]
    trace: bool,
    /// Refuse lattices with more than 2^max-n elements.
    #[arg(long, global = true, env = "DMONO_MAX_N", default_value_t = 22)]
    max_n: u32,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add wall-clock time to records (makes them non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Learn a target with membership and exhaustive equivalence queries.
    Learn {
        target: PathBuf,
        /// Degree bound; defaults to what the target's representation implies.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Build a hypothesis of degree d consistent with labeled points.
    Consistent {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        d: usize,
        /// Comma-separated positive points.
        #[arg(long, default_value = "")]
        pos: String,
        /// Comma-separated negative points.
        #[arg(long, default_value = "")]
        neg: String,
    },
    /// Strict monotone XOR decomposition of a target.
    Decompose { target: PathBuf },
    /// Monotonicity degree of a target.
    Degree { target: PathBuf },
    /// Maximal predecessor sum of a lattice.
    Sigma {
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// Generate a target from a structured or random family.
    Family {
        kind: FamilyKind,
        #[arg(long)]
        d: usize,
        /// Block width.
        #[arg(long, conflicts_with = "n")]
        t: Option<usize>,
        /// Number of variables (tightness, random) or nested size (takimoto).
        #[arg(long)]
        n: Option<u32>,
        /// Takimoto blocks of width floor(n/(j*d)) on the cube of dimension n.
        #[arg(long, requires = "n")]
        uneven: bool,
        /// Comma-separated size(g_i) for random targets.
        #[arg(long)]
        sizes: Option<String>,
    },
    /// Recheck decomposition, degree and query bounds for a file or directory.
    Verify {
        path: PathBuf,
        /// Function file or learn record that must agree with the target.
        #[arg(long)]
        against: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct LatticeArgs {
    #[arg(long)]
    cube: Option<u32>,
    #[arg(long)]
    lattice_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FamilyKind {
    Tightness,
    Takimoto,
    Random,
}

/// A failed run: message plus exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    msg: String,
}

pub const EXIT_INPUT: u8 = 1;
pub const EXIT_DEGREE: u8 = 2;
pub const EXIT_SIZE_CAP: u8 = 3;

impl Failure {
    pub fn input(msg: impl fmt::Display) -> Self {
        Self {
            code: EXIT_INPUT,
            msg: msg.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        let code = match e {
            FormatError::SizeCap { .. } => EXIT_SIZE_CAP,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<LearnError> for Failure {
    fn from(e: LearnError) -> Self {
        let code = match e {
            LearnError::DegreeTooSmall { .. } => EXIT_DEGREE,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<ConsistentError> for Failure {
    fn from(e: ConsistentError) -> Self {
        match e {
            ConsistentError::Inconsistent { degree, .. } => Self {
                code: EXIT_DEGREE,
                msg: format!("{e}; retry with degree {}", degree + 1),
            },
            _ => Failure::input(e),
        }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        Failure::input(e)
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        Failure::input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e)
    }
}

/// Global options shared by every command.
pub struct Ctx {
    seed: u64,
    trace: bool,
    pub max_n: u32,
    timing: bool,
    out: Option<PathBuf>,
}

impl Ctx {
    fn config(&self, command: &str, extra: Value) -> Value {
        let mut cfg = json!({
            "command": command,
            "seed": self.seed,
            "trace": self.trace,
            "max_n": self.max_n,
        });
        if let (Value::Object(cfg), Value::Object(extra)) = (&mut cfg, extra) {
            cfg.extend(extra);
        }
        cfg
    }

    pub fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(p) => {
                fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))
            }
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }

    fn emit_record(&self, record: &Value) -> Result<(), Failure> {
        let mut line = serde_json::to_string(record).expect("records serialize");
        line.push('\n');
        self.emit(&line)
    }

    fn check_cube(&self, n: u32) -> Result<(), Failure> {
        if n > self.max_n {
            return Err(FormatError::SizeCap {
                elements: 1usize.checked_shl(n).unwrap_or(usize::MAX),
                max_n: self.max_n,
            }
            .into());
        }
        Ok(())
    }
}

/// Lattice reference usable from any working directory.
pub fn portable_ref(r: &LatticeRef, target: &Path) -> LatticeRef {
    match r {
        LatticeRef::Cube(n) => LatticeRef::Cube(*n),
        LatticeRef::File(p) => {
            let joined = target.parent().unwrap_or(Path::new(".")).join(p);
            LatticeRef::File(fs::canonicalize(&joined).unwrap_or(joined))
        }
    }
}

fn repr_name(f: &Function) -> &'static str {
    match f {
        Function::Dense(_) => "dense",
        Function::Mdnf(_) => "mdnf",
        Function::Xor(_) => "xor",
        Function::Composed(_) => "composed",
    }
}

fn target_descriptor(path: &Path, loaded: &Loaded) -> Value {
    let mut v = json!({
        "path": path.display().to_string(),
        "repr": repr_name(&loaded.function),
    });
    if let Some(spec) = &loaded.family {
        v["family"] = serde_json::to_value(spec).expect("family specs serialize");
    }
    v
}

fn levels_payload(h: &XorHypothesis) -> Vec<Vec<String>> {
    h.levels()
        .iter()
        .map(|g| g.minimals().iter().map(|&m| h.lattice().name(m)).collect())
        .collect()
}

/// Degree a representation guarantees without inspecting the truth table:
/// composed targets need one extra level when `F(0^d) = 1`.
pub fn implied_degree(f: &Function) -> usize {
    match f {
        Function::Composed(c) => c.arity() + usize::from(!c.zero_at_origin()),
        Function::Mdnf(_) => 1,
        _ => monotone_degree(f).max(1),
    }
}

/// `size(g_i)` feeding the query bounds. Composed targets use their own
/// inner functions (plus the constant 1 when `F(0^d) = 1`); any other target
/// uses its strict decomposition.
pub fn bound_sizes(f: &Function) -> Result<Vec<usize>, Failure> {
    Ok(match f {
        Function::Composed(c) => {
            let mut sizes = c.inner_sizes();
            if !c.zero_at_origin() {
                sizes.push(1);
            }
            sizes
        }
        _ => strict_decompose(f, f.lattice().len())
            .map_err(Failure::input)?
            .level_sizes(),
    })
}

fn lattice_from_args(args: &LatticeArgs, ctx: &Ctx) -> Result<(Arc<Lattice>, LatticeRef), Failure> {
    match (&args.cube, &args.lattice_file) {
        (Some(n), _) => {
            ctx.check_cube(*n)?;
            Ok((Arc::new(Lattice::cube(*n)?), LatticeRef::Cube(*n)))
        }
        (None, Some(p)) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            let lattice = Lattice::parse(&text)
                .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            if lattice.len() as u128 > 1u128 << ctx.max_n {
                return Err(FormatError::SizeCap {
                    elements: lattice.len(),
                    max_n: ctx.max_n,
                }
                .into());
            }
            let r = LatticeRef::File(fs::canonicalize(p).unwrap_or_else(|_| p.clone()));
            Ok((Arc::new(lattice), r))
        }
        (None, None) => unreachable!("clap requires one lattice source"),
    }
}

fn trace_json(lattice: &Lattice, trace: &[TraceEntry]) -> Value {
    trace
        .iter()
        .map(|t| {
            json!({
                "counterexample": lattice.name(t.counterexample),
                "point": lattice.name(t.point),
                "label": t.label,
                "descent_steps": t.descent_steps,
                "inspections": t.inspections,
            })
        })
        .collect()
}

fn cmd_learn(ctx: &Ctx, target: &Path, d: Option<usize>) -> Result<(), Failure> {
    let started = Instant::now();
    let loaded = load_function(target, ctx.max_n)?;
    let f = &loaded.function;
    let lattice = f.lattice().clone();
    let d = d.unwrap_or_else(|| implied_degree(f));
    if d == 0 {
        return Err(Failure::input("degree must be at least 1"));
    }

    let mut mq = MembershipOracle::for_target(f);
    let mut eq = ExhaustiveEq::new(f);
    let outcome = learn(&lattice, d, &mut mq, &mut eq).map_err(|e| match e {
        LearnError::DegreeTooSmall { degree, point } => Failure {
            code: EXIT_DEGREE,
            msg: format!(
                "target is not {degree}-monotone (point {} cannot be fit); retry with --d {}",
                lattice.name(point),
                degree + 1
            ),
        },
        other => other.into(),
    })?;
    let stats = outcome
        .stats
        .clone()
        .with_bounds(&bound_sizes(f)?, lattice.sigma());
    let exact = outcome.hypothesis.to_dense() == f.to_dense();

    let lattice_ref = portable_ref(&loaded.lattice_ref, target);
    let hypothesis = FunctionFile::new(
        lattice_ref,
        &Function::Xor(outcome.hypothesis.clone()),
        None,
    );
    let mut record = json!({
        "config": ctx.config("learn", json!({ "target": target.display().to_string(), "d": d })),
        "target": target_descriptor(target, &loaded),
        "d": d,
        "n": lattice.cube_dim(),
        "elements": lattice.len(),
        "sigma": lattice.sigma(),
        "eq_used": stats.eq_used,
        "counterexamples": stats.counterexamples,
        "mq_used": stats.mq_used,
        "mq_inspections": stats.mq_inspections,
        "max_descent_inspections": stats.max_descent_inspections,
        "eq_bound": stats.eq_bound,
        "mq_bound": stats.mq_bound,
        "within_bounds": stats.within_bounds(),
        "exact": exact,
        "hypothesis": hypothesis,
    });
    if ctx.trace {
        record["trace"] = trace_json(&lattice, &outcome.trace);
    }
    if ctx.timing {
        record["wall_ms"] = json!(started.elapsed().as_secs_f64() * 1e3);
    }
    ctx.emit_record(&record)
}

fn parse_points(lattice: &Lattice, list: &str) -> Result<Vec<dmono::Elem>, Failure> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| lattice.parse_elem(s).map_err(Failure::from))
        .collect()
}

fn cmd_consistent(
    ctx: &Ctx,
    args: &LatticeArgs,
    d: usize,
    pos: &str,
    neg: &str,
) -> Result<(), Failure> {
    let (lattice, lattice_ref) = lattice_from_args(args, ctx)?;
    let sample = LabeledSample::new(parse_points(&lattice, neg)?, parse_points(&lattice, pos)?);
    let h = consistent(&lattice, d, &sample).map_err(|e| match e {
        ConsistentError::Inconsistent { degree, point } => Failure {
            code: EXIT_DEGREE,
            msg: format!(
                "no {degree}-monotone function fits the sample (point {} stays mislabeled); retry with --d {}",
                lattice.name(point),
                degree + 1
            ),
        },
        other => other.into(),
    })?;
    let record = json!({
        "config": ctx.config("consistent", json!({ "d": d, "pos": pos, "neg": neg })),
        "d": d,
        "sample_size": sample.len(),
        "level_sizes": h.level_sizes(),
        "size": h.size(),
        "hypothesis": FunctionFile::new(lattice_ref, &Function::Xor(h), None),
    });
    ctx.emit_record(&record)
}

fn cmd_decompose(ctx: &Ctx, target: &Path) -> Result<(), Failure> {
    let loaded = load_function(target, ctx.max_n)?;
    let f = &loaded.function;
    let h = strict_decompose(f, f.lattice().len()).map_err(Failure::input)?;
    let record = json!({
        "config": ctx.config("decompose", json!({ "target": target.display().to_string() })),
        "target": target_descriptor(target, &loaded),
        "n": f.lattice().cube_dim(),
        "levels": levels_payload(&h),
        "level_sizes": h.level_sizes(),
        "size": h.size(),
        "degree": h.levels().len(),
        "roundtrip": h.to_dense() == f.to_dense(),
    });
    ctx.emit_record(&record)
}

fn cmd_degree(ctx: &Ctx, target: &Path) -> Result<(), Failure> {
    let loaded = load_function(target, ctx.max_n)?;
    let record = json!({
        "config": ctx.config("degree", json!({ "target": target.display().to_string() })),
        "target": target_descriptor(target, &loaded),
        "degree": monotone_degree(&loaded.function),
    });
    ctx.emit_record(&record)
}

fn cmd_sigma(ctx: &Ctx, args: &LatticeArgs) -> Result<(), Failure> {
    let lattice = match (&args.cube, &args.lattice_file) {
        // closed form, nothing to enumerate
        (Some(n), _) => Lattice::cube(*n)?,
        _ => Arc::unwrap_or_clone(lattice_from_args(args, ctx)?.0),
    };
    ctx.emit(&format!("{}\n", lattice.sigma()))
}

fn parse_sizes(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Failure::input(format!("`{x}` is not a size")))
        })
        .collect()
}

fn cmd_family(
    ctx: &Ctx,
    kind: FamilyKind,
    d: usize,
    t: Option<usize>,
    n: Option<u32>,
    uneven: bool,
    sizes: Option<&str>,
) -> Result<(), Failure> {
    let missing = || Failure::input("give --t or --n");
    let inst: Instance = match kind {
        FamilyKind::Tightness => {
            let t = match (t, n) {
                (Some(t), _) => t,
                (None, Some(n)) => families::tightness_width(d, n)?,
                (None, None) => return Err(missing()),
            };
            ctx.check_cube((d * t) as u32)?;
            families::tightness_family(d, t)?
        }
        FamilyKind::Takimoto if uneven => {
            let n = n.ok_or_else(missing)?;
            ctx.check_cube(n)?;
            families::takimoto_uneven(d, n)?
        }
        FamilyKind::Takimoto => {
            let t = match (t, n) {
                (Some(t), _) => t,
                (None, Some(n)) => families::takimoto_width(d, n)?,
                (None, None) => return Err(missing()),
            };
            ctx.check_cube((d * (d + 1) * t / 2) as u32)?;
            families::takimoto_family(d, t)?
        }
        FamilyKind::Random => {
            let n = n.ok_or_else(|| Failure::input("random targets need --n"))?;
            ctx.check_cube(n)?;
            let sizes = match sizes {
                Some(s) => parse_sizes(s)?,
                None => vec![2; d],
            };
            if sizes.len() != d {
                return Err(Failure::input(format!(
                    "--sizes lists {} values for d = {d}",
                    sizes.len()
                )));
            }
            families::random_composed(n, &sizes, ctx.seed)?
        }
    };
    let n = inst.spec.n;
    let file = FunctionFile::new(
        LatticeRef::Cube(n),
        &Function::Composed(inst.target),
        Some(inst.spec),
    );
    ctx.emit(&file.to_json())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let ctx = Ctx {
        seed: cli.seed,
        trace: cli.trace,
        max_n: cli.max_n,
        timing: cli.timing,
        out: cli.out,
    };
    match cli.command {
        Command::Learn { target, d } => cmd_learn(&ctx, &target, d)?,
        Command::Consistent {
            lattice,
            d,
            pos,
            neg,
        } => cmd_consistent(&ctx, &lattice, d, &pos, &neg)?,
        Command::Decompose { target } => cmd_decompose(&ctx, &target)?,
        Command::Degree { target } => cmd_degree(&ctx, &target)?,
        Command::Sigma { lattice } => cmd_sigma(&ctx, &lattice)?,
        Command::Family {
            kind,
            d,
            t,
            n,
            uneven,
            sizes,
        } => cmd_family(&ctx, kind, d, t, n, uneven, sizes.as_deref())?,
        Command::Verify { path, against } => {
            return verify::run(&ctx, &path, against.as_deref());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("dmono: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
