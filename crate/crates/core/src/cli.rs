//! Command-line surface for the `sinkpoly` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, ExactMatrix};
use crate::pipeline::{campaign, matrix_rng, random_matrix, suggested_count, target_degree, CampaignConfig};
use crate::recognition::{default_precision, minimal_polynomial, parse_decimal, Recognition};
use crate::scaling::{certified, certified_kruithof, decimal, KruithofTargets};
use crate::symmetry::SymmetryGroup;
use crate::tables::{builtin_table, degenerate_3x3, move_to_top_left, polynomial_for, verify_polynomial};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;
pub const EXIT_FALSIFIED: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "sinkpoly", version, about = "Exact polynomials for Sinkhorn and Kruithof limit entries")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Working precision in bits
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, default_value = "sinkpoly-data")]
    pub data_dir: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sinkhorn (or Kruithof) limit of a matrix file
    Limit {
        matrix: PathBuf,
        /// Row and column target files
        #[arg(long, num_args = 2, value_names = ["V", "W"])]
        kruithof: Option<Vec<PathBuf>>,
    },
    /// Exact polynomial for one limit entry
    Poly {
        matrix: PathBuf,
        /// 1-based row and column
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        entry: Option<Vec<usize>>,
    },
    /// Minimal polynomial of a decimal expansion
    Recognize {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Interpolate a coefficient table from random matrices
    Interpolate {
        m: usize,
        n: usize,
        /// Matrices to generate
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        resume: bool,
        /// One record per matrix instead of one per entry
        #[arg(long)]
        no_harvest: bool,
    },
    /// Check table polynomials against random matrices
    Verify {
        m: usize,
        n: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Equivalence classes of size-k subsets of D(m, n)
    Classes { m: usize, n: usize, k: usize },
}

/// Resolved settings shared by the subcommands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub precision: Option<u32>,
    pub seed: u64,
    pub data_dir: PathBuf,
    pub workers: usize,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<Self> {
        if g.precision.is_some_and(|p| p < 64) {
            return Err(Error::Precondition("precision must be at least 64 bits".into()));
        }
        let workers = g
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map(|v| v.get()).unwrap_or(1));
        if workers == 0 {
            return Err(Error::Precondition("worker count must be at least 1".into()));
        }
        Ok(Self { precision: g.precision, seed: g.seed, data_dir: g.data_dir.clone(), workers })
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ConjectureFalsified { .. } => EXIT_FALSIFIED,
        Error::Convergence { .. } | Error::InsufficientPrecision(_) => EXIT_FAILURE,
        _ => EXIT_INPUT,
    }
}

/// Parses arguments, runs one command, and returns the exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::from_args(&cli.global)?;
    match &cli.command {
        Command::Limit { matrix, kruithof } => cmd_limit(&cfg, matrix, kruithof.as_deref(), out),
        Command::Poly { matrix, entry } => cmd_poly(matrix, entry.as_deref(), out),
        Command::Recognize { file, degree } => cmd_recognize(&cfg, file, *degree, out),
        Command::Interpolate { m, n, count, resume, no_harvest } => {
            cmd_interpolate(&cfg, *m, *n, *count, *resume, !no_harvest, out)
        }
        Command::Verify { m, n, trials } => cmd_verify(&cfg, *m, *n, *trials, out),
        Command::Classes { m, n, k } => cmd_classes(*m, *n, *k, out),
    }
}

fn read_matrix(path: &Path) -> Result<ExactMatrix> {
    std::fs::read_to_string(path)?.parse()
}

fn read_vector(path: &Path) -> Result<Vec<Rational>> {
    std::fs::read_to_string(path)?.split_whitespace().map(parse_rational).collect()
}

/// Certified digits followed by the "±" marker for the uncertified tail.
pub fn certified_text(x: &Float, digits: u32) -> String {
    format!("{}±", decimal(x, digits.max(1) as usize))
}

pub fn cmd_limit(cfg: &RunConfig, matrix: &Path, kruithof: Option<&[PathBuf]>, out: &mut dyn Write) -> Result<i32> {
    let a = read_matrix(matrix)?;
    let p = cfg.precision.unwrap_or(256);
    let r = match kruithof {
        Some([v, w]) => certified_kruithof(&a, &KruithofTargets::new(read_vector(v)?, read_vector(w)?)?, p)?,
        Some(_) => return Err(Error::Precondition("--kruithof takes two files".into())),
        None => certified(&a, p)?,
    };
    for i in 0..a.rows() {
        let row: Vec<String> = (0..a.cols()).map(|j| certified_text(r.limit.get(i, j), r.certified_digits)).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    writeln!(out, "residual {}", r.residual.to_string_radix(10, Some(3)))?;
    writeln!(out, "certified digits {}", r.certified_digits)?;
    Ok(EXIT_OK)
}

pub fn cmd_poly(matrix: &Path, entry: Option<&[usize]>, out: &mut dyn Write) -> Result<i32> {
    let a = read_matrix(matrix)?;
    let (i, j) = match entry {
        Some([i, j]) if *i >= 1 && *j >= 1 => (i - 1, j - 1),
        Some(_) => return Err(Error::Precondition("--entry takes two 1-based indices".into())),
        None => (0, 0),
    };
    let b = move_to_top_left(&a, i, j)?;
    let table = builtin_table(b.rows(), b.cols())?;
    let mut poly = polynomial_for(&b, &table)?;
    if poly.is_zero() {
        if (b.rows(), b.cols()) != (3, 3) {
            return Err(Error::DegenerateInput("every coefficient vanishes for this matrix".into()));
        }
        writeln!(out, "# general polynomial vanishes; using the proportional-rows cubic")?;
        poly = degenerate_3x3(&b)?;
    }
    let prim = poly.primitive.expect("nonzero polynomial");
    writeln!(out, "{prim}")?;
    let lead = poly.exact.coeff(poly.exact.degree().unwrap_or(0));
    let scale = lead / Rational::from(prim.leading().unwrap());
    writeln!(out, "# scale {scale} ({})", table.provenance())?;
    Ok(EXIT_OK)
}

pub fn cmd_recognize(cfg: &RunConfig, file: &Path, degree: usize, out: &mut dyn Write) -> Result<i32> {
    let mut x = parse_decimal(&std::fs::read_to_string(file)?)?;
    if let Some(p) = cfg.precision {
        x = Float::with_val(p, &x);
    }
    match minimal_polynomial(&x, degree)? {
        Recognition::Found(r) => {
            writeln!(out, "{}", r.poly)?;
            writeln!(out, "# degree {} stable {} residual {}", r.degree, r.stable, r.residual.to_string_radix(10, Some(3)))?;
            if r.below_target {
                writeln!(out, "# degree below the target {degree}")?;
            }
            Ok(EXIT_OK)
        }
        Recognition::Failed(f) => {
            writeln!(out, "no relation found (target degree {}, {:?}, {} iterations)", f.target, f.stop, f.iterations)?;
            Ok(EXIT_FAILURE)
        }
    }
}

pub fn cmd_interpolate(
    cfg: &RunConfig,
    m: usize,
    n: usize,
    count: Option<usize>,
    resume: bool,
    harvest: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let mut c = CampaignConfig::new(m, n, &cfg.data_dir);
    c.count = count.unwrap_or_else(|| suggested_count(m, n, harvest));
    c.seed = cfg.seed;
    c.workers = cfg.workers;
    c.precision = cfg.precision;
    c.resume = resume;
    c.harvest = harvest;
    let report = campaign(&c)?;
    writeln!(out, "records {} (new {}), discarded {}", report.dataset.len(), report.new_records, report.discarded.len())?;
    for d in &report.discarded {
        writeln!(out, "# discarded {d}")?;
    }
    for (line, why) in &report.quarantined {
        writeln!(out, "# quarantined line {line}: {why}")?;
    }
    for p in report.table.pinning() {
        writeln!(out, "k={} unknowns={} equations={} nullity={} determined={}", p.k, p.unknowns, p.equations, p.nullity, p.determined)?;
    }
    writeln!(out, "table written to {}", c.table_path().display())?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(cfg: &RunConfig, m: usize, n: usize, trials: usize, out: &mut dyn Write) -> Result<i32> {
    let table = builtin_table(m, n)?;
    let p = cfg.precision.unwrap_or_else(|| default_precision(target_degree(m, n)));
    let mut passed = 0;
    for t in 0..trials {
        let a = random_matrix(m, n, &mut matrix_rng(cfg.seed, t as u64))?;
        let (ok, residual) = verify_polynomial(&a, &table, p)?;
        passed += ok as usize;
        writeln!(out, "trial {t}: {} residual {}", if ok { "pass" } else { "FAIL" }, residual.to_string_radix(10, Some(3)))?;
    }
    writeln!(out, "{passed}/{trials} pass")?;
    Ok(if passed == trials { EXIT_OK } else { EXIT_FAILURE })
}

pub fn cmd_classes(m: usize, n: usize, k: usize, out: &mut dyn Write) -> Result<i32> {
    let classes = SymmetryGroup::new(m, n).enumerate_classes(k)?;
    writeln!(out, "{}", classes.len())?;
    for c in &classes {
        writeln!(out, "{c}")?;
    }
    Ok(EXIT_OK)
}
