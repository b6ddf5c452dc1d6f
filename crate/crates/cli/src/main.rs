//! `fzmut`: exchange sequences, approximation tables, mutation classes and the
//! acceptance checks from the command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 numeric
//! degeneration or an exhausted limit.

mod config;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fzmut_core::mutation::{self, class_graph_stats, enumerate_class, io, mutate};
use fzmut_core::rank2::{
    self, approx_sequence, error_scaling_probe, g_sequence, generate_x, table_csv, ErrorReport,
    ErrorRow, Rank2Params,
};
use fzmut_core::verify::{self, VerifyOptions};
use fzmut_core::Error;

use config::{pick, switch, FileConfig};

#[derive(Debug, Parser)]
#[command(
    name = "fzmut",
    version,
    about = "Mutation of noncrystallographic exchange data"
)]
struct Cli {
    /// TOML file with default parameter values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Start outputs with a "# config" line recording the resolved parameters
    #[arg(long, global = true)]
    seed_echo: bool,
    /// Suppress the header line even when --seed-echo is given
    #[arg(long, global = true)]
    no_header: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank-2 exchange sequence as CSV
    Seq(SeqArgs),
    /// Approximating sequence against the true one, and an error-scaling probe
    Approx(ApproxArgs),
    /// The g-sequence with its closed form
    Gseq(GseqArgs),
    /// Enumerate the mutation class of a matrix
    Class(ClassArgs),
    /// Mutate a matrix at one or more 1-based indices, in order
    Mutate(MutateArgs),
    /// Run the acceptance checks
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct InitialPair {
    #[arg(long, allow_negative_numbers = true)]
    x1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x2: Option<f64>,
}

#[derive(Debug, Args)]
struct SeqArgs {
    /// Dihedral order; sets a = 4cos²(π/m), b = 1
    #[arg(long, conflicts_with_all = ["a", "b"])]
    m: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[command(flatten)]
    pair: InitialPair,
    #[arg(long, allow_negative_numbers = true)]
    lo: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    hi: Option<i64>,
    /// Add the approximation and relative error columns (needs --m > 4)
    #[arg(long)]
    with_approx: bool,
    #[arg(long)]
    full_precision: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ApproxArgs {
    #[arg(long)]
    m: Option<u32>,
    #[command(flatten)]
    pair: InitialPair,
    /// Also scale the pair by 2⁻ˢ for s below this and report max relerr / (t² x1 x2)
    #[arg(long)]
    probe_steps: Option<usize>,
    #[arg(long)]
    full_precision: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GseqArgs {
    #[arg(long)]
    m: Option<u32>,
    /// Last index computed, default 2m + 1
    #[arg(long)]
    len: Option<usize>,
    #[arg(long)]
    full_precision: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassArgs {
    /// Matrix JSON file
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    limit: Option<usize>,
    /// Write the class JSON here
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write the mutation graph in DOT format here
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MutateArgs {
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// 1-based index; repeat to mutate several times
    #[arg(long = "k", required = true)]
    k: Vec<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Replace every numeric tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Listed H3 fixture to use instead of the embedded one
    #[arg(long)]
    fixture: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NumericOverflow { .. }
            | Error::NonPositiveTerm { .. }
            | Error::Degenerate(_)
            | Error::Overflow { .. }
            | Error::LimitExceeded { .. } => 3,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

struct Ctx {
    file: FileConfig,
    header: bool,
}

impl Ctx {
    fn header_line(&self, command: &str, params: Value) -> Option<String> {
        self.header.then(|| {
            format!(
                "# config {}\n",
                json!({ "command": command, "params": params })
            )
        })
    }
}

/// Writes via a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| CliError::usage(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn emit(output: Option<&Path>, contents: &str) -> CliResult<()> {
    match output {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn read_matrix(path: Option<PathBuf>) -> CliResult<mutation::BMatrix> {
    let path = path.ok_or_else(|| CliError::usage("--matrix is required"))?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    io::matrix_from_json(&text).map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

fn pair(ctx: &Ctx, p: &InitialPair) -> CliResult<(f64, f64)> {
    match (p.x1.or(ctx.file.x1), p.x2.or(ctx.file.x2)) {
        (Some(x1), Some(x2)) => Ok((x1, x2)),
        _ => Err(CliError::usage("--x1 and --x2 are required")),
    }
}

fn require_m(ctx: &Ctx, m: Option<u32>) -> CliResult<u32> {
    m.or(ctx.file.m)
        .ok_or_else(|| CliError::usage("--m is required"))
}

fn cmd_seq(ctx: &Ctx, args: SeqArgs) -> CliResult<()> {
    let (x1, x2) = pair(ctx, &args.pair)?;
    let lo = pick(args.lo, ctx.file.lo, -6);
    let hi = pick(args.hi, ctx.file.hi, 10);
    if lo > hi {
        return Err(CliError::usage(format!("--lo {lo} exceeds --hi {hi}")));
    }
    let with_approx = switch(args.with_approx, ctx.file.with_approx);
    let full = switch(args.full_precision, ctx.file.full_precision);
    let exps = (args.a.or(ctx.file.a), args.b.or(ctx.file.b));
    let m = args.m.or(if args.a.is_some() || args.b.is_some() {
        None
    } else {
        ctx.file.m
    });
    let params = match (m, exps) {
        (Some(m), _) => Rank2Params::from_m(m)?,
        (None, (Some(a), Some(b))) => Rank2Params::from_exponents(a, b)?,
        _ => return Err(CliError::usage("give --m, or both --a and --b")),
    };
    let seq = generate_x(params, x1, x2, lo, hi)?;
    let report = if with_approx {
        let m = m.ok_or_else(|| CliError::usage("--with-approx needs --m"))?;
        let ap = approx_sequence(m, x1, x2)?;
        let rows = ap
            .index_set()
            .iter()
            .filter_map(|&i| {
                let y = seq.get(2 * i)?;
                let approx = ap.get(i)?;
                Some(ErrorRow {
                    i,
                    n: 2 * i,
                    y,
                    approx,
                    relerr: (approx - y).abs() / y,
                })
            })
            .collect();
        Some(ErrorReport { rows })
    } else {
        None
    };
    let header = ctx.header_line(
        "seq",
        json!({
            "m": m, "a": params.a(), "b": params.b(), "x1": x1, "x2": x2,
            "lo": lo, "hi": hi, "with_approx": with_approx, "full_precision": full,
        }),
    );
    let body = table_csv(&seq, report.as_ref(), full);
    emit(
        args.output.as_deref(),
        &format!("{}{body}", header.unwrap_or_default()),
    )
}

fn fmt_f(x: f64, full: bool) -> String {
    let s = if full {
        format!("{:?}", x + 0.0)
    } else {
        format!("{x:.6}")
    };
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|c| c == b'0' || c == b'.') => rest.to_string(),
        _ => s,
    }
}

fn cmd_approx(ctx: &Ctx, args: ApproxArgs) -> CliResult<()> {
    let m = require_m(ctx, args.m)?;
    let (x1, x2) = pair(ctx, &args.pair)?;
    let steps = pick(args.probe_steps, ctx.file.probe_steps, 0);
    let full = switch(args.full_precision, ctx.file.full_precision);
    let (seq, ap) = rank2::sequences_for(m, x1, x2)?;
    let report = rank2::error_report(&seq, &ap)?;
    let mut out = ctx
        .header_line(
            "approx",
            json!({ "m": m, "x1": x1, "x2": x2, "probe_steps": steps, "full_precision": full }),
        )
        .unwrap_or_default();
    out.push_str("i,n,y,Y,relerr\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.i,
            r.n,
            fmt_f(r.y, full),
            fmt_f(r.approx, full),
            fmt_f(r.relerr, full)
        ));
    }
    if steps > 0 {
        let probe = error_scaling_probe(m, x1, x2, steps)?;
        out.push_str("\nt,max_relerr,ratio\n");
        for r in &probe.rows {
            out.push_str(&format!(
                "{},{:e},{}\n",
                r.t,
                r.max_relerr,
                fmt_f(r.ratio, full)
            ));
        }
        if let Some(why) = probe.truncated {
            eprintln!("probe truncated: {why}");
        }
    }
    emit(args.output.as_deref(), &out)
}

fn cmd_gseq(ctx: &Ctx, args: GseqArgs) -> CliResult<()> {
    let m = require_m(ctx, args.m)?;
    let len = pick(args.len, ctx.file.len, 2 * m as usize + 1);
    let full = switch(args.full_precision, ctx.file.full_precision);
    let g = g_sequence(m, len)?;
    let mut out = ctx
        .header_line(
            "gseq",
            json!({ "m": m, "len": len, "full_precision": full }),
        )
        .unwrap_or_default();
    out.push_str("i,g_i,closed_form\n");
    for (i, v) in g.values().iter().enumerate() {
        let cf = g.closed_form(i as i64);
        out.push_str(&format!("{i},{},{}\n", fmt_f(*v, full), fmt_f(cf, full)));
    }
    emit(args.output.as_deref(), &out)
}

fn cmd_class(ctx: &Ctx, args: ClassArgs) -> CliResult<()> {
    let path = args.matrix.or_else(|| ctx.file.matrix.clone());
    let limit = pick(args.limit, ctx.file.limit, mutation::DEFAULT_LIMIT);
    let seed = read_matrix(path.clone())?;
    let cls = enumerate_class(&seed, limit).map_err(|e| match e {
        Error::Overflow { .. } => CliError {
            code: 3,
            message: format!("mutation-infinite before limit {limit}: {e}"),
        },
        e => e.into(),
    })?;
    let stats = class_graph_stats(&cls);
    if let Some(out) = &args.output {
        write_atomic(out, &io::class_to_json(&cls))?;
    }
    if let Some(dot) = &args.dot {
        write_atomic(dot, &io::class_to_dot(&cls))?;
    }
    if let Some(h) = ctx.header_line("class", json!({ "matrix": path, "limit": limit })) {
        print!("{h}");
    }
    println!("size={} edges={}", stats.nodes, stats.edges);
    Ok(())
}

fn cmd_mutate(ctx: &Ctx, args: MutateArgs) -> CliResult<()> {
    let mut b = read_matrix(args.matrix.or_else(|| ctx.file.matrix.clone()))?;
    for &k in &args.k {
        if k == 0 {
            return Err(CliError::usage("--k is 1-based"));
        }
        b = mutate(&b, k - 1).map_err(|e| match e {
            Error::IndexOutOfRange { n, .. } => {
                CliError::usage(format!("--k {k} out of range for a {n}x{n} matrix"))
            }
            e => e.into(),
        })?;
    }
    emit(args.output.as_deref(), &(io::matrix_to_json(&b) + "\n"))
}

fn cmd_verify(ctx: &Ctx, args: VerifyArgs) -> CliResult<bool> {
    let opts = VerifyOptions {
        tol: args.tol.or(ctx.file.tol),
        fixture: args.fixture.or_else(|| ctx.file.fixture.clone()),
        seed: pick(args.seed, ctx.file.seed, 0),
    };
    if let Some(h) = ctx.header_line(
        "verify",
        json!({ "tol": opts.tol, "fixture": opts.fixture, "seed": opts.seed }),
    ) {
        print!("{h}");
    }
    let outcomes = verify::run_all(&opts);
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} passed, {failed} failed", outcomes.len() - failed);
    Ok(failed == 0)
}

fn run(cli: Cli) -> CliResult<bool> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let ctx = Ctx {
        file,
        header: cli.seed_echo && !cli.no_header,
    };
    match cli.command {
        Command::Seq(a) => cmd_seq(&ctx, a).map(|_| true),
        Command::Approx(a) => cmd_approx(&ctx, a).map(|_| true),
        Command::Gseq(a) => cmd_gseq(&ctx, a).map(|_| true),
        Command::Class(a) => cmd_class(&ctx, a).map(|_| true),
        Command::Mutate(a) => cmd_mutate(&ctx, a).map(|_| true),
        Command::Verify(a) => cmd_verify(&ctx, a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("fzmut: {e}");
            ExitCode::from(e.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::LimitExceeded { limit: 5 }).code, 3);
        assert_eq!(CliError::from(Error::NonPositiveTerm { index: 4 }).code, 3);
        assert_eq!(CliError::from(Error::InvalidParams("x".into())).code, 2);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        let missing = dir.path().join("no/such/dir/out.csv");
        let err = write_atomic(&missing, "x").unwrap_err();
        assert!(err.message.contains("no/such/dir/out.csv"));
    }
}
