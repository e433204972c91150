//! Command line front end: construct, verify, decide, search, and export
//! magic partially filled arrays. Exit codes: 0 success/pass, 1 verification
//! failure or proven nonexistence, 2 unknown/unsupported/budget, 3 usage.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mpfa::constructions::{
    self, feasibility, BuildError, Construction, FeasibilityStatus,
};
use mpfa::ingredients::{Oracle, Registry};
use mpfa::search::{search, SearchBudget, SearchOutcome};
use mpfa::serial::{self, Format};
use mpfa::verify::verify;
use mpfa::{Group, MagicSpec, OmegaSpec};

#[derive(Parser)]
#[command(
    name = "mpfa",
    version,
    about = "Magic partially filled arrays over finite abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an array set for a spec and print it
    Construct(ConstructArgs),
    /// Check an array file against a spec file
    Verify(VerifyArgs),
    /// Decide whether a spec is satisfiable
    Feasibility(FeasibilityArgs),
    /// Exhaustively search for a matching array set
    Search(SearchArgs),
    /// Convert an array file between formats
    Export(ExportArgs),
    /// Explain which construction route covers a spec
    Info(ConstructArgs),
}

/// One family shorthand sets the group and symbol set together.
#[derive(ValueEnum, Clone, Copy)]
enum Kind {
    /// Integer rectangle set over [1, nkc]
    Mrs,
    /// Signed magic array over a symmetric integer range
    Sma,
    /// Zero-sum set using every element of a group
    MosFull,
    /// Zero-sum set using every nonzero element of a group
    MosNonzero,
    /// Heffter array: one of each +-/- class, zero sums
    Heffter,
}

#[derive(ValueEnum, Clone, Copy)]
enum OmegaKind {
    Interval,
    Signed,
    Full,
    Nonzero,
    Heffter,
    Explicit,
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Json,
    Csv,
    Dot,
    Text,
}

impl FormatArg {
    fn to_serial(self) -> Format {
        match self {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Dot => Format::Dot,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Family shorthand (fixes group and symbol set)
    #[arg(long, value_enum, conflicts_with = "omega")]
    kind: Option<Kind>,
    /// Rows per array
    #[arg(long)]
    m: usize,
    /// Columns per array
    #[arg(long)]
    n: usize,
    /// Filled cells per row (default n: tight)
    #[arg(long)]
    s: Option<usize>,
    /// Filled cells per column (default m: tight)
    #[arg(long)]
    k: Option<usize>,
    /// Number of arrays in the set
    #[arg(long, default_value_t = 1)]
    c: usize,
    /// Group moduli "a,b,c", or "Z" for the integers
    #[arg(long)]
    group: Option<String>,
    /// Symbol set, when --kind is not used
    #[arg(long, value_enum)]
    omega: Option<OmegaKind>,
    /// Require all row and column sums to be zero
    #[arg(long)]
    zero_sum: bool,
    /// Require the filled cells to lie on consecutive diagonals
    #[arg(long)]
    diagonal: bool,
}

#[derive(Args)]
struct BudgetArgs {
    /// Node budget for searches and searched ingredients
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Time budget in seconds for searches and searched ingredients
    #[arg(long)]
    budget_seconds: Option<u64>,
}

impl BudgetArgs {
    fn to_budget(&self) -> SearchBudget {
        let mut b = SearchBudget::default();
        if let Some(n) = self.budget_nodes {
            b.max_nodes = n;
        }
        if let Some(s) = self.budget_seconds {
            b.time_limit = Duration::from_secs(s);
        }
        b
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Output format for the set
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the set here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra ingredient registry (JSON) merged over the built-ins
    #[arg(long)]
    registry: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct FeasibilityArgs {
    #[command(flatten)]
    spec: SpecArgs,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Output format for a found set
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write a found set here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Spec file (JSON)
    #[arg(long)]
    spec: PathBuf,
    /// Input format (default: from the file extension, else json)
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Array set file to check
    input: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    /// Array set file to convert
    input: PathBuf,
    /// Input format (default: from the file extension)
    #[arg(long, value_enum)]
    from: Option<FormatArg>,
    /// Output format (default: from the --out extension)
    #[arg(long, value_enum)]
    to: Option<FormatArg>,
    /// Group moduli for CSV input, "a,b,c" or "Z"
    #[arg(long)]
    group: Option<String>,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Construct(args) => cmd_construct(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Feasibility(args) => cmd_feasibility(args),
        Cmd::Search(args) => cmd_search(args),
        Cmd::Export(args) => cmd_export(args),
        Cmd::Info(args) => cmd_info(args),
    }
}

fn parse_group(text: &str) -> Result<Group> {
    if text.eq_ignore_ascii_case("z") {
        return Ok(Group::integers());
    }
    let moduli = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| anyhow!("bad modulus {t:?}: {e}"))
        })
        .collect::<Result<Vec<_>>>()?;
    Group::new(moduli).map_err(|e| anyhow!("{e}"))
}

fn assemble(args: &SpecArgs) -> Result<MagicSpec> {
    let s = args.s.unwrap_or(args.n);
    let k = args.k.unwrap_or(args.m);
    let total = (args.n * k * args.c) as u64;
    let named_group = || -> Result<Group> {
        let text = args
            .group
            .as_deref()
            .ok_or_else(|| anyhow!("this symbol set needs --group"))?;
        parse_group(text)
    };
    let fixed_group = |what: &str| -> Result<()> {
        if args.group.is_some() {
            bail!("{what} fixes the group; drop --group");
        }
        Ok(())
    };
    let signed_range = || {
        if total % 2 == 0 {
            OmegaSpec::SignedRange { half: (total / 2) as i64, include_zero: false }
        } else {
            OmegaSpec::SignedRange { half: ((total - 1) / 2) as i64, include_zero: true }
        }
    };
    let heffter = || -> Result<(Group, OmegaSpec)> {
        let modulus = 2 * total + 1;
        let g = Group::cyclic(modulus).map_err(|e| anyhow!("{e}"))?;
        Ok((g, OmegaSpec::HalfClasses { modulus }))
    };

    let (group, omega, zero_forced) = match (args.kind, args.omega) {
        (Some(kind), None) => match kind {
            Kind::Mrs => {
                fixed_group("--kind mrs")?;
                (
                    Group::integers(),
                    OmegaSpec::IntegerInterval { upper: total as i64 },
                    false,
                )
            }
            Kind::Sma => {
                fixed_group("--kind sma")?;
                (Group::integers(), signed_range(), true)
            }
            Kind::MosFull => (named_group()?, OmegaSpec::FullGroup, true),
            Kind::MosNonzero => (named_group()?, OmegaSpec::NonzeroGroup, true),
            Kind::Heffter => {
                fixed_group("--kind heffter")?;
                let (g, o) = heffter()?;
                (g, o, true)
            }
        },
        (None, Some(omega)) => match omega {
            OmegaKind::Interval => {
                fixed_group("--omega interval")?;
                (
                    Group::integers(),
                    OmegaSpec::IntegerInterval { upper: total as i64 },
                    false,
                )
            }
            OmegaKind::Signed => {
                fixed_group("--omega signed")?;
                (Group::integers(), signed_range(), false)
            }
            OmegaKind::Full => (named_group()?, OmegaSpec::FullGroup, false),
            OmegaKind::Nonzero => (named_group()?, OmegaSpec::NonzeroGroup, false),
            OmegaKind::Heffter => {
                fixed_group("--omega heffter")?;
                let (g, o) = heffter()?;
                (g, o, true)
            }
            OmegaKind::Explicit => {
                bail!("explicit symbol sets are only supported through JSON spec files")
            }
        },
        (None, None) => bail!("pass --kind or --omega"),
        (Some(_), Some(_)) => unreachable!("clap conflict"),
    };

    let mut spec = MagicSpec::new(group, args.m, args.n, s, k, args.c, omega);
    if args.zero_sum || zero_forced {
        spec = spec.zero_sum();
    }
    if args.diagonal {
        spec = spec.diagonal();
    }
    spec.validate().map_err(|e| anyhow!("invalid spec: {e}"))?;
    Ok(spec)
}

fn describe(spec: &MagicSpec) -> String {
    let omega = match &spec.omega {
        OmegaSpec::IntegerInterval { upper } => format!("integers [1, {upper}]"),
        OmegaSpec::SignedRange { half, include_zero } => {
            if *include_zero {
                format!("integers [-{half}, {half}]")
            } else {
                format!("signed integers 1..{half}")
            }
        }
        OmegaSpec::FullGroup => format!("all of {}", spec.group),
        OmegaSpec::NonzeroGroup => format!("nonzero elements of {}", spec.group),
        OmegaSpec::HalfClasses { modulus } => {
            format!("one of each +-/- pair of Z{modulus}")
        }
        OmegaSpec::Explicit { elements } => format!("{} listed elements", elements.len()),
    };
    let mut out = format!(
        "{} array(s) of {}x{}, fills {}/{}, symbols {omega}",
        spec.arrays, spec.rows, spec.cols, spec.row_fill, spec.col_fill
    );
    if spec.zero_sum {
        out.push_str(", zero-sum");
    }
    if spec.diagonal {
        out.push_str(", diagonal");
    }
    out
}

fn oracle_from(registry: Option<&Path>, budget: &BudgetArgs) -> Result<Oracle> {
    let mut reg = Registry::builtin();
    if let Some(path) = registry {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading registry {}", path.display()))?;
        let added = reg.merge_json(&text).map_err(|e| anyhow!("registry: {e}"))?;
        eprintln!("registry: merged {added} entries");
    }
    Ok(Oracle::new(reg, budget.to_budget()))
}

/// Route a spec to the matching library constructor.
fn build(spec: &MagicSpec, oracle: &Oracle) -> Result<Construction, BuildError> {
    let (m, n) = (spec.rows, spec.cols);
    let (s, k, c) = (spec.row_fill, spec.col_fill, spec.arrays);
    match &spec.omega {
        OmegaSpec::IntegerInterval { .. } if !spec.zero_sum && !spec.diagonal => {
            constructions::magic_rectangle_set(m, n, s, k, c, oracle)
        }
        OmegaSpec::SignedRange { .. } if spec.zero_sum && !spec.diagonal && c == 1 => {
            constructions::signed_magic_array(m, n, s, k, oracle)
        }
        OmegaSpec::FullGroup if spec.zero_sum && spec.diagonal => {
            constructions::zero_sum_diagonal(&spec.group, n, k, c)
        }
        OmegaSpec::FullGroup if spec.zero_sum => {
            constructions::zero_sum_group(&spec.group, m, n, s, k, c, oracle)
        }
        OmegaSpec::NonzeroGroup if spec.zero_sum && !spec.diagonal => {
            constructions::nonzero_group(&spec.group, m, n, s, k, c, oracle)
        }
        _ => Err(BuildError::Unsupported(
            "no direct construction route covers this spec; try `mpfa search`".into(),
        )),
    }
}

fn build_exit_code(e: &BuildError) -> u8 {
    match e {
        BuildError::Infeasible(_) => 1,
        BuildError::Invalid(_) => 3,
        _ => 2,
    }
}

fn emit(data: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, data).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            print!("{data}");
            if !data.ends_with('\n') {
                println!();
            }
        }
    }
    Ok(())
}

fn cmd_construct(args: ConstructArgs) -> Result<u8> {
    let spec = assemble(&args.spec)?;
    let oracle = oracle_from(args.registry.as_deref(), &args.budget)?;
    // Heffter arrays have no direct construction; find them exhaustively.
    if matches!(spec.omega, OmegaSpec::HalfClasses { .. }) {
        let cert = search(&spec, oracle.budget());
        return match cert.outcome {
            SearchOutcome::Found(set) => {
                eprintln!(
                    "found by exhaustive search, {} nodes in {:.3}s",
                    cert.nodes,
                    cert.elapsed.as_secs_f64()
                );
                eprintln!("{}", verify(&set, &spec).summary());
                emit(&serial::write_set(&set, args.format.to_serial()), args.out.as_deref())?;
                Ok(0)
            }
            SearchOutcome::NoneExists => {
                eprintln!("exhaustive search: no such set exists");
                Ok(1)
            }
            SearchOutcome::BudgetExceeded => {
                eprintln!("search budget exceeded before an answer was reached");
                Ok(2)
            }
        };
    }
    match build(&spec, &oracle) {
        Ok(built) => {
            for line in &built.trace {
                eprintln!("route: {line}");
            }
            eprintln!("{}", built.report().summary());
            emit(
                &serial::write_set(&built.set, args.format.to_serial()),
                args.out.as_deref(),
            )?;
            Ok(0)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(build_exit_code(&e))
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let spec_text = fs::read_to_string(&args.spec)
        .with_context(|| format!("reading {}", args.spec.display()))?;
    let spec = serial::spec_from_json(&spec_text).map_err(|e| anyhow!("spec file: {e}"))?;
    let input_text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let format = args
        .format
        .map(FormatArg::to_serial)
        .or_else(|| Format::from_path(&args.input.to_string_lossy()))
        .unwrap_or(Format::Json);
    let set = serial::read_set(&input_text, format, Some(&spec.group))
        .map_err(|e| anyhow!("input file: {e}"))?;
    let report = verify(&set, &spec);
    println!("{}", report.summary());
    Ok(if report.pass() { 0 } else { 1 })
}

fn cmd_feasibility(args: FeasibilityArgs) -> Result<u8> {
    let spec = assemble(&args.spec)?;
    let verdict = feasibility(&spec);
    println!("{}: {}", verdict.status.label(), verdict.reason);
    Ok(match verdict.status {
        FeasibilityStatus::Exists => 0,
        FeasibilityStatus::NotExists => 1,
        FeasibilityStatus::Unknown => 2,
    })
}

fn cmd_search(args: SearchArgs) -> Result<u8> {
    let spec = assemble(&args.spec)?;
    let cert = search(&spec, &args.budget.to_budget());
    eprintln!(
        "search: {} after {} nodes in {:.3}s",
        cert.outcome.label(),
        cert.nodes,
        cert.elapsed.as_secs_f64()
    );
    match cert.outcome {
        SearchOutcome::Found(set) => {
            emit(&serial::write_set(&set, args.format.to_serial()), args.out.as_deref())?;
            Ok(0)
        }
        SearchOutcome::NoneExists => Ok(1),
        SearchOutcome::BudgetExceeded => Ok(2),
    }
}

fn cmd_export(args: ExportArgs) -> Result<u8> {
    let input_text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let from = args
        .from
        .map(FormatArg::to_serial)
        .or_else(|| Format::from_path(&args.input.to_string_lossy()))
        .ok_or_else(|| anyhow!("cannot tell the input format; pass --from"))?;
    let to = args
        .to
        .map(FormatArg::to_serial)
        .or_else(|| {
            args.out
                .as_deref()
                .and_then(|p| Format::from_path(&p.to_string_lossy()))
        })
        .ok_or_else(|| anyhow!("cannot tell the output format; pass --to"))?;
    let group = match args.group.as_deref() {
        Some(text) => Some(parse_group(text)?),
        None => None,
    };
    let set = serial::read_set(&input_text, from, group.as_ref())
        .map_err(|e| anyhow!("input file: {e}"))?;
    emit(&serial::write_set(&set, to), args.out.as_deref())?;
    Ok(0)
}

fn cmd_info(args: ConstructArgs) -> Result<u8> {
    let spec = assemble(&args.spec)?;
    println!("spec: {}", describe(&spec));
    let verdict = feasibility(&spec);
    println!("feasibility: {}: {}", verdict.status.label(), verdict.reason);
    let oracle = oracle_from(args.registry.as_deref(), &args.budget)?;
    if matches!(spec.omega, OmegaSpec::HalfClasses { .. }) {
        println!("route: exhaustive search (no direct construction)");
        return Ok(0);
    }
    match build(&spec, &oracle) {
        Ok(built) => {
            println!("route:");
            for line in &built.trace {
                println!("  - {line}");
            }
            println!("verification: {}", built.report().summary());
            Ok(0)
        }
        Err(e) => {
            println!("route: none ({e})");
            Ok(build_exit_code(&e))
        }
    }
}
