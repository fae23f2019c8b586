//! Command-line front door to the workbench: run verification suites, apply
//! operator expressions to vectors, enumerate bases and weight tables, and
//! extract (optionally cached) class matrices.
//!
//! Output is machine-first: JSON by default, with `--format pretty` for
//! humans and `--format csv` for spreadsheets. Exit code 0 means every
//! executed check passed; suite failures exit 1 with the witness embedded in
//! the report; usage and input errors exit 2.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use spin7_core::basis::{enumerate_class, label_count, seq_class_key, ClassKey, Seq};
use spin7_core::exprlang::{eval, parse, print as print_expr, Mode};
use spin7_core::verify::{
    check_cartan, default_columns, run_suite, weight_dims, Report, Suite,
};
use spin7_core::zmod::{apply, matrix_of, ColumnSelection, SparseIntMatrix, ZVec};

const CACHE_ENV: &str = "SPIN7_CACHE_DIR";
const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Parser)]
#[command(name = "spin7", version, about = "Exact workbench for the categorified spin action")]
struct Cli {
    /// Seed for sampled column selections (recorded in every report).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Columns per sampled check.
    #[arg(long, global = true, default_value_t = 4096)]
    sample_size: usize,

    /// Directory to write verification reports into.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Matrix cache directory; overrides the SPIN7_CACHE_DIR environment
    /// variable. Content-addressed and safe to delete at any time.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExprMode {
    Strict,
    Virtual,
}

impl From<ExprMode> for Mode {
    fn from(m: ExprMode) -> Mode {
        match m {
            ExprMode::Strict => Mode::Strict,
            ExprMode::Virtual => Mode::Virtual,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ColumnPolicy {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate class sizes, or the labels of one class.
    Basis {
        #[arg(long)]
        n: usize,
        /// Class invariants "c1,c2,c3"; omit to list every class with its size.
        #[arg(long, value_parser = parse_class_triple, allow_hyphen_values = true)]
        class: Option<(i64, i64, i64)>,
    },
    /// Apply an operator expression to a vector and print the image.
    Apply {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = ExprMode::Strict)]
        mode: ExprMode,
        /// Inline JSON (a ZVec object or a bare terms array) or a path to a
        /// file holding the same.
        #[arg(long)]
        vec: String,
    },
    /// Run a verification suite; exit code 0 iff everything passed.
    Verify {
        /// bijection | intertwine | relations | oracle | serre | all
        suite: String,
        #[arg(long)]
        n: usize,
        /// Restrict to one relation id or one generator symbol.
        #[arg(long)]
        only: Option<String>,
        /// Column policy; default is exhaustive for n <= 4, sampled above.
        #[arg(long, value_enum)]
        mode: Option<ColumnPolicy>,
    },
    /// Weight space dimension table (cross-checked two ways).
    Weights {
        #[arg(long)]
        n: usize,
    },
    /// The matrix of an expression restricted to one class.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        expr: String,
        #[arg(long, value_parser = parse_class_triple, allow_hyphen_values = true)]
        class: (i64, i64, i64),
        #[arg(long, value_enum, default_value_t = ExprMode::Strict)]
        mode: ExprMode,
        /// Reuse (and populate) the content-addressed matrix cache.
        #[arg(long)]
        cache: bool,
        /// Force a fresh computation, bypassing the cache entirely.
        #[arg(long)]
        no_cache: bool,
    },
}

fn parse_class_triple(s: &str) -> Result<(i64, i64, i64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected three comma-separated integers, e.g. \"1,-2,0\"".into());
    }
    let mut vals = [0i64; 3];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|_| format!("bad integer '{part}'"))?;
    }
    Ok((vals[0], vals[1], vals[2]))
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes, like other unix filters
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    // the Cartan conventions are rederived before any command runs
    let startup = check_cartan();
    if !startup.pass {
        eprintln!("startup self-check failed: {}", startup.summary_line());
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    let format = cli.format;
    let n = match &cli.command {
        Command::Basis { n, .. }
        | Command::Apply { n, .. }
        | Command::Verify { n, .. }
        | Command::Weights { n }
        | Command::Matrix { n, .. } => *n,
    };
    if n == 0 || n > spin7_core::basis::MAX_LEN {
        bail!("--n must be in 1..={}", spin7_core::basis::MAX_LEN);
    }
    match cli.command {
        Command::Basis { n, class } => {
            cmd_basis(n, class, format)?;
            Ok(true)
        }
        Command::Apply { n, expr, mode, vec } => {
            cmd_apply(n, &expr, mode.into(), &vec, format)?;
            Ok(true)
        }
        Command::Verify { suite, n, only, mode } => {
            let columns = match mode {
                None => default_columns(n, cli.seed, cli.sample_size),
                Some(ColumnPolicy::Exhaustive) => ColumnSelection::All,
                Some(ColumnPolicy::Sampled) => {
                    ColumnSelection::Sample { seed: cli.seed, count: cli.sample_size }
                }
            };
            cmd_verify(&suite, n, columns, only.as_deref(), cli.out_dir.as_deref(), format)
        }
        Command::Weights { n } => {
            cmd_weights(n, format)?;
            Ok(true)
        }
        Command::Matrix { n, expr, class, mode, cache, no_cache } => {
            let cache_dir = resolve_cache_dir(cli.cache_dir);
            cmd_matrix(n, &expr, class, mode.into(), cache && !no_cache, &cache_dir, format)?;
            Ok(true)
        }
    }
}

fn class_key(triple: (i64, i64, i64), n: usize) -> ClassKey {
    ClassKey { c1: triple.0, c2: triple.1, c3: triple.2, n }
}

// ---------------------------------------------------------------------------
// basis / weights
// ---------------------------------------------------------------------------

fn class_size_table(n: usize) -> Vec<(ClassKey, u64)> {
    let mut sizes = std::collections::BTreeMap::new();
    for r in 0..label_count(n) {
        let seq = Seq::unrank(n, r).expect("rank < 8^n");
        *sizes.entry(seq_class_key(&seq)).or_insert(0u64) += 1;
    }
    sizes.into_iter().collect()
}

fn print_size_table(table: &[(ClassKey, u64)], format: Format) -> Result<()> {
    match format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .iter()
                .map(|(k, size)| {
                    serde_json::json!({"c1": k.c1, "c2": k.c2, "c3": k.c3, "n": k.n, "size": size})
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows)?);
        }
        Format::Csv => {
            println!("c1,c2,c3,n,size");
            for (k, size) in table {
                println!("{},{},{},{},{}", k.c1, k.c2, k.c3, k.n, size);
            }
        }
        Format::Pretty => {
            println!("{:>6} {:>6} {:>6} {:>10}", "c1", "c2", "c3", "size");
            for (k, size) in table {
                println!("{:>6} {:>6} {:>6} {:>10}", k.c1, k.c2, k.c3, size);
            }
            let total: u64 = table.iter().map(|(_, s)| s).sum();
            println!("# {} classes, {total} labels", table.len());
        }
    }
    Ok(())
}

fn cmd_basis(n: usize, class: Option<(i64, i64, i64)>, format: Format) -> Result<()> {
    match class {
        None => print_size_table(&class_size_table(n), format),
        Some(triple) => {
            let labels: Vec<Seq> = enumerate_class(n, class_key(triple, n)).collect();
            match format {
                Format::Json => println!("{}", serde_json::to_string(&labels)?),
                Format::Csv => {
                    println!("seq");
                    for s in &labels {
                        println!("{}", join_letters(s));
                    }
                }
                Format::Pretty => {
                    for s in &labels {
                        println!("{s}");
                    }
                    println!("# {} labels", labels.len());
                }
            }
            Ok(())
        }
    }
}

fn cmd_weights(n: usize, format: Format) -> Result<()> {
    let dims = weight_dims(n).map_err(|e| anyhow!(e))?;
    let table: Vec<(ClassKey, u64)> = dims.into_iter().collect();
    print_size_table(&table, format)
}

fn join_letters(s: &Seq) -> String {
    s.letters().iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
}

// ---------------------------------------------------------------------------
// apply
// ---------------------------------------------------------------------------

fn parse_vec_input(input: &str, n: usize) -> Result<ZVec> {
    let text = if input.trim_start().starts_with(['[', '{']) {
        input.to_string()
    } else {
        std::fs::read_to_string(input).with_context(|| format!("reading vector file {input}"))?
    };
    let trimmed = text.trim_start();
    let wrapped;
    let json = if trimmed.starts_with('[') {
        wrapped = format!("{{\"n\":{n},\"terms\":{text}}}");
        &wrapped
    } else {
        &text
    };
    let v: ZVec = serde_json::from_str(json).context("parsing input vector")?;
    if v.n() != n {
        bail!("vector has n = {}, expected {n}", v.n());
    }
    Ok(v)
}

fn cmd_apply(n: usize, expr_text: &str, mode: Mode, vec_arg: &str, format: Format) -> Result<()> {
    let expr = parse(expr_text, mode).map_err(|e| anyhow!(e))?;
    let v = parse_vec_input(vec_arg, n)?;
    let image = apply(&eval(&expr, n), &v).map_err(|e| anyhow!(e))?;
    match format {
        Format::Json => println!("{}", serde_json::to_string(&image)?),
        Format::Csv => {
            println!("seq,coef");
            for (s, c) in image.iter() {
                println!("{},{c}", join_letters(s));
            }
        }
        Format::Pretty => println!("{image}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn report_file_name(report: &Report) -> String {
    let mut name: String = report
        .suite
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_(),".contains(c) { c } else { '-' })
        .collect();
    name.push_str(&format!("-n{}.json", report.n));
    name
}

fn cmd_verify(
    suite: &str,
    n: usize,
    columns: ColumnSelection,
    only: Option<&str>,
    out_dir: Option<&Path>,
    format: Format,
) -> Result<bool> {
    let suite = Suite::parse(suite)
        .ok_or_else(|| anyhow!("unknown suite '{suite}' (expected bijection, intertwine, relations, oracle, serre or all)"))?;
    let reports = run_suite(suite, n, columns, only).map_err(|e| anyhow!(e))?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        for report in &reports {
            let path = dir.join(report_file_name(report));
            std::fs::write(&path, serde_json::to_string_pretty(report)?)?;
        }
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
        Format::Csv => {
            println!("suite,n,mode,pass,checks");
            for r in &reports {
                let mode = match r.mode {
                    spin7_core::verify::RunMode::Exhaustive => "exhaustive".to_string(),
                    spin7_core::verify::RunMode::Sampled { seed, columns } => {
                        format!("sampled seed={seed:#x} columns={columns}")
                    }
                };
                println!("{},{},{},{},{}", r.suite, r.n, mode, r.pass, r.checks);
            }
        }
        Format::Pretty => {
            for r in &reports {
                println!("{}", r.summary_line());
            }
        }
    }
    Ok(reports.iter().all(|r| r.pass))
}

// ---------------------------------------------------------------------------
// matrix (with content-addressed cache)
// ---------------------------------------------------------------------------

fn resolve_cache_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".spin7-cache"))
}

fn matrix_cache_key(expr_canonical: &str, n: usize, class: (i64, i64, i64)) -> String {
    let mut h = Sha256::new();
    h.update(b"spin7-matrix-v1\0");
    h.update(expr_canonical.as_bytes());
    h.update(b"\0");
    h.update(n.to_le_bytes());
    for c in [class.0, class.1, class.2] {
        h.update(c.to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn cmd_matrix(
    n: usize,
    expr_text: &str,
    class: (i64, i64, i64),
    mode: Mode,
    use_cache: bool,
    cache_dir: &Path,
    format: Format,
) -> Result<()> {
    let expr = parse(expr_text, mode).map_err(|e| anyhow!(e))?;
    let canonical = print_expr(&expr);
    let cache_path = cache_dir.join(format!("{}.json", matrix_cache_key(&canonical, n, class)));

    let matrix: SparseIntMatrix = if use_cache && cache_path.is_file() {
        let text = std::fs::read_to_string(&cache_path)
            .with_context(|| format!("reading cache entry {}", cache_path.display()))?;
        serde_json::from_str(&text).context("parsing cached matrix")?
    } else {
        let m = matrix_of(&eval(&expr, n), n, class_key(class, n)).map_err(|e| anyhow!(e))?;
        if use_cache {
            std::fs::create_dir_all(cache_dir)?;
            let mut tmp = tempfile::NamedTempFile::new_in(cache_dir)?;
            tmp.write_all(serde_json::to_string(&m)?.as_bytes())?;
            tmp.persist(&cache_path)
                .map_err(|e| anyhow!("publishing cache entry: {e}"))?;
        }
        m
    };

    match format {
        Format::Json => println!("{}", serde_json::to_string(&matrix)?),
        Format::Csv => {
            println!("row,col,value");
            for (r, c, v) in &matrix.entries {
                println!("{r},{c},{v}");
            }
        }
        Format::Pretty => {
            println!(
                "# {} -> {} ({} columns, {} rows, {} entries)",
                canonical,
                class_display(class, n),
                matrix.cols(),
                matrix.rows(),
                matrix.entries.len()
            );
            for (r, c, v) in &matrix.entries {
                println!(
                    "[{}] <- {v} * [{}]",
                    matrix.target_basis[*r],
                    matrix.source_basis[*c]
                );
            }
        }
    }
    Ok(())
}

fn class_display(class: (i64, i64, i64), n: usize) -> String {
    format!("class ({},{},{}) at n={n}", class.0, class.1, class.2)
}
