//! Interpolation of coefficient tables from recognized limit entries of
//! random integer matrices: generation, recognition, persistence and exact
//! solving.

use std::collections::HashSet;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer, Rational};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{solve_affine, ExactMatrix, SolveOutcome};
use crate::minors::MinorCache;
use crate::poly::IntPolynomial;
use crate::recognition::{
    default_precision, minimal_polynomial_with, same_relation, verify_root, Recognition, RecognitionOptions,
};
use crate::scaling::sinkhorn_limit;
use crate::symmetry::{binomial, ClassRep, SymmetryGroup};
use crate::tables::{binomial_target, CoefficientTable, PinningReport, Provenance};

pub const ENTRY_MAX: i64 = 20;
pub const MAX_REJECTIONS: usize = 10_000;
/// Extra equations per unknown, in percent.
pub const REDUNDANCY_PERCENT: usize = 25;

/// Degree of the limit entry for an m×n matrix: C(m+n−2, m−1).
pub fn target_degree(m: usize, n: usize) -> usize {
    binomial(m + n - 2, m - 1) as usize
}

/// True when some square submatrix of any size has determinant 0.
pub fn has_zero_minor(a: &ExactMatrix) -> bool {
    let (m, n) = (a.rows(), a.cols());
    for k in 1..=m.min(n) {
        for rows in subsets(m, k) {
            for cols in subsets(n, k) {
                if a.submatrix(&rows, &cols).det().map(|d| d.is_zero()).unwrap_or(true) {
                    return true;
                }
            }
        }
    }
    false
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Uniform entries in 1..=20, resampled until no minor vanishes.
pub fn random_matrix<R: Rng>(m: usize, n: usize, rng: &mut R) -> Result<ExactMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::Dimension(format!("{m}x{n} matrix")));
    }
    for _ in 0..MAX_REJECTIONS {
        let entries = (0..m * n).map(|_| Rational::from(rng.gen_range(1..=ENTRY_MAX))).collect();
        let a = ExactMatrix::new(m, n, entries)?;
        if !has_zero_minor(&a) {
            return Ok(a);
        }
    }
    Err(Error::Generation(format!("{MAX_REJECTIONS} consecutive {m}x{n} samples had a zero minor")))
}

/// The generator for matrix number `index` of a run seeded with `seed`.
pub fn matrix_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Where a record came from: run seed, matrix index, and the (0-based)
/// entry moved to the top left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lineage {
    pub seed: u64,
    pub index: u64,
    pub entry: (usize, usize),
}

impl fmt::Display for Lineage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{},{}", self.seed, self.index, self.entry.0, self.entry.1)
    }
}

impl std::str::FromStr for Lineage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad lineage {s:?}"));
        let mut it = s.split('/');
        let seed = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        let index = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        let (i, j) = it.next().and_then(|t| t.split_once(',')).ok_or_else(bad)?;
        if it.next().is_some() {
            return Err(bad());
        }
        Ok(Self { seed, index, entry: (i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checks {
    pub ratio_check: bool,
    pub stability: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatumRecord {
    pub lineage: Lineage,
    /// Matrix whose top-left limit entry the polynomial annihilates.
    pub matrix: ExactMatrix,
    pub polynomial: IntPolynomial,
    pub precision_used: u32,
    pub degree: usize,
    pub checks: Checks,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscardReport {
    pub lineage: Option<Lineage>,
    pub reason: String,
}

impl fmt::Display for DiscardReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lineage {
            Some(l) => write!(f, "{l}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

/// c_D(m, n) implied by Σ c_S x^|S| ∝ (x − 1)^a (x − m/n)^b with c_{} = 1.
pub fn expected_full_coefficient(m: usize, n: usize) -> Rational {
    let t = binomial_target(m, n);
    let lead = t.coeff(t.degree().unwrap_or(0));
    lead / t.coeff(0)
}

/// Leading over constant coefficient equals c_D·M(D)/M({}).
pub fn ratio_check(a: &ExactMatrix, poly: &IntPolynomial) -> Result<bool> {
    let cache = MinorCache::new(a)?;
    let ratios = cache.ratios()?;
    let mut r = expected_full_coefficient(a.rows(), a.cols());
    for x in &ratios {
        r *= x;
    }
    let (Some(lead), Some(d)) = (poly.leading(), poly.degree()) else {
        return Ok(false);
    };
    if d != ratios.len() || poly.coeff(0).is_zero() {
        return Ok(false);
    }
    Ok(Rational::from((lead.clone(), poly.coeff(0))) == r)
}

fn precision_for(m: usize, n: usize) -> u32 {
    default_precision(target_degree(m, n))
}

/// Recognizes the top-left limit entry of `a` at precision `p`, keeping it
/// only at full degree, with the ratio check, and when PSLQ at 2p returns
/// the same polynomial.
pub fn collect_datum(a: &ExactMatrix, p: u32, lineage: Lineage) -> Result<std::result::Result<DatumRecord, DiscardReport>> {
    let d = target_degree(a.rows(), a.cols());
    let discard = |reason: String| Ok(Err(DiscardReport { lineage: Some(lineage), reason }));
    let x = sinkhorn_limit(a, p)?;
    let opts = RecognitionOptions { check_stability: false, ..Default::default() };
    let r = match minimal_polynomial_with(x.top_left(), d, &opts)? {
        Recognition::Found(r) => r,
        Recognition::Failed(f) => {
            return discard(format!(
                "no relation at target degree {} ({:?} after {} iterations)",
                f.target, f.stop, f.iterations
            ))
        }
    };
    if r.degree < d {
        return discard(format!("recognized degree {} below {d}", r.degree));
    }
    if !ratio_check(a, &r.poly)? {
        return discard("leading/constant ratio differs from c_D·M(D)/M({})".into());
    }
    let hi = sinkhorn_limit(a, 2 * p)?;
    if !verify_root(&r.poly, hi.top_left()).0 {
        return discard("polynomial fails at double precision".into());
    }
    if !same_relation(&r.poly, hi.top_left(), opts.max_iter)? {
        return discard("relation not reproduced at double precision".into());
    }
    Ok(Ok(DatumRecord {
        lineage,
        matrix: a.clone(),
        polynomial: r.poly,
        precision_used: p,
        degree: r.degree,
        checks: Checks { ratio_check: true, stability: true },
    }))
}

/// The distinct matrices obtained by moving each entry to the top left.
pub fn harvest(a: &ExactMatrix) -> Vec<((usize, usize), ExactMatrix)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let mut b = a.clone();
            b.swap_rows(0, i);
            b.swap_cols(0, j);
            if seen.insert(b.to_string()) {
                out.push(((i, j), b));
            }
        }
    }
    out
}

fn record_body(r: &DatumRecord) -> String {
    let entries: Vec<String> = r.matrix.entries().iter().map(|v| v.to_string()).collect();
    let coeffs: Vec<String> = r.polynomial.coeffs().iter().map(|c| c.to_string()).collect();
    let flags = format!(
        "{}{}",
        if r.checks.ratio_check { "R" } else { "-" },
        if r.checks.stability { "S" } else { "-" }
    );
    format!(
        "{} {} | {} | {} | {} | {} | {}",
        r.matrix.rows(),
        r.matrix.cols(),
        r.lineage,
        entries.join(" "),
        r.precision_used,
        coeffs.join(" "),
        flags
    )
}

fn checksum(body: &str) -> String {
    let digest = Sha256::digest(body.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// One dataset line: fields separated by " | ", then " #" and a checksum.
pub fn encode_record(r: &DatumRecord) -> String {
    let body = record_body(r);
    let sum = checksum(&body);
    format!("{body} #{sum}")
}

pub fn decode_record(line: &str) -> Result<DatumRecord> {
    let (body, sum) = line.rsplit_once(" #").ok_or_else(|| Error::Parse("missing checksum".into()))?;
    if checksum(body) != sum.trim() {
        return Err(Error::Parse("checksum mismatch".into()));
    }
    let f: Vec<&str> = body.split(" | ").collect();
    let [dims, lineage, entries, prec, coeffs, flags] = f[..] else {
        return Err(Error::Parse(format!("expected 6 fields, got {}", f.len())));
    };
    let dims: Vec<usize> = dims
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad dimension {t:?}"))))
        .collect::<Result<_>>()?;
    let [m, n] = dims[..] else {
        return Err(Error::Parse("bad dimensions".into()));
    };
    let entries = entries
        .split_whitespace()
        .map(crate::exact::parse_rational)
        .collect::<Result<Vec<_>>>()?;
    let coeffs = coeffs
        .split_whitespace()
        .map(|t| t.parse::<Integer>().map_err(|_| Error::Parse(format!("bad coefficient {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let polynomial = IntPolynomial::new(coeffs);
    Ok(DatumRecord {
        lineage: lineage.parse()?,
        matrix: ExactMatrix::new(m, n, entries)?,
        degree: polynomial.degree().unwrap_or(0),
        polynomial,
        precision_used: prec.trim().parse().map_err(|_| Error::Parse(format!("bad precision {prec:?}")))?,
        checks: Checks { ratio_check: flags.contains('R'), stability: flags.contains('S') },
    })
}

/// Append-only collection of accepted records for one ambient.
#[derive(Clone, Debug, Default)]
pub struct Dataset {
    pub ambient: (usize, usize),
    records: Vec<DatumRecord>,
    matrices: HashSet<String>,
}

impl Dataset {
    pub fn new(m: usize, n: usize) -> Self {
        Self { ambient: (m, n), records: vec![], matrices: HashSet::new() }
    }

    pub fn records(&self) -> &[DatumRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains_index(&self, seed: u64, index: u64) -> bool {
        self.records.iter().any(|r| r.lineage.seed == seed && r.lineage.index == index)
    }

    /// Adds a record; rejects duplicate matrices, wrong ambients and records
    /// failing a check.
    pub fn push(&mut self, r: DatumRecord) -> Result<()> {
        if (r.matrix.rows(), r.matrix.cols()) != self.ambient {
            return Err(Error::Dimension("record ambient differs from the dataset".into()));
        }
        if !(r.checks.ratio_check && r.checks.stability) {
            return Err(Error::Precondition(format!("record {} failed a check", r.lineage)));
        }
        if !self.matrices.insert(r.matrix.to_string()) {
            return Err(Error::Precondition(format!("duplicate matrix in record {}", r.lineage)));
        }
        self.records.push(r);
        Ok(())
    }

    /// Records ordered by lineage, independent of collection order.
    pub fn sorted(&self) -> Vec<&DatumRecord> {
        let mut v: Vec<&DatumRecord> = self.records.iter().collect();
        v.sort_by_key(|r| r.lineage);
        v
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        let mut w = DatasetWriter::create(path)?;
        for r in &self.records {
            w.append(r)?;
        }
        Ok(())
    }
}

/// Outcome of loading a dataset file.
#[derive(Debug)]
pub struct LoadReport {
    pub dataset: Dataset,
    /// (line number, reason) for every skipped line.
    pub quarantined: Vec<(usize, String)>,
}

/// Loads every valid record; corrupt or duplicate lines are skipped and
/// copied to `<path>.quarantine`.
pub fn dataset_load(path: &Path, m: usize, n: usize) -> Result<LoadReport> {
    let mut dataset = Dataset::new(m, n);
    let mut quarantined = Vec::new();
    let mut bad_lines = Vec::new();
    if !path.exists() {
        return Ok(LoadReport { dataset, quarantined });
    }
    let reader = BufReader::new(File::open(path)?);
    for (no, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let result = decode_record(&line).and_then(|r| dataset.push(r));
        if let Err(e) = result {
            quarantined.push((no + 1, e.to_string()));
            bad_lines.push(line);
        }
    }
    if !bad_lines.is_empty() {
        let mut q = OpenOptions::new().create(true).append(true).open(quarantine_path(path))?;
        for l in bad_lines {
            writeln!(q, "{l}")?;
        }
    }
    Ok(LoadReport { dataset, quarantined })
}

pub fn dataset_store(dataset: &Dataset, path: &Path) -> Result<()> {
    dataset.store(path)
}

fn quarantine_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".quarantine");
    PathBuf::from(s)
}

/// Single appending writer; every line is flushed as it is written.
pub struct DatasetWriter {
    file: File,
}

impl DatasetWriter {
    pub fn create(path: &Path) -> Result<Self> {
        Ok(Self { file: File::create(path)? })
    }

    pub fn append_to(path: &Path) -> Result<Self> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        Ok(Self { file: OpenOptions::new().create(true).append(true).open(path)? })
    }

    pub fn append(&mut self, r: &DatumRecord) -> Result<()> {
        writeln!(self.file, "{}", encode_record(r))?;
        self.file.flush()?;
        Ok(())
    }
}

/// Number of equations wanted for `unknowns` unknowns.
pub fn required_equations(unknowns: usize) -> usize {
    unknowns + (unknowns * REDUNDANCY_PERCENT).div_ceil(100).max(1)
}

/// Σ(S)/M({}) for every class, from the Δ/Γ ratios of one matrix.
fn class_ratio_sums(group: &SymmetryGroup, classes: &[ClassRep], ratios: &[Rational]) -> Result<Vec<Rational>> {
    classes
        .iter()
        .map(|c| {
            let idx = group.basis().indices(&c.rep)?;
            let mut total = Rational::new();
            for t in group.orbit_indices(&idx) {
                let mut prod = Rational::from(1);
                for i in t {
                    prod *= &ratios[i];
                }
                total += prod;
            }
            Ok(total)
        })
        .collect()
}

/// Linear system in the size-k class coefficients: per record,
/// Σ_classes c_S·Σ(S)/M({}) = q_k/q_0 for the recognized polynomial q.
pub fn assemble_system(
    m: usize,
    n: usize,
    k: usize,
    records: &[&DatumRecord],
) -> Result<(ExactMatrix, Vec<Rational>, Vec<ClassRep>)> {
    let group = SymmetryGroup::new(m, n);
    let classes = group.enumerate_classes(k)?;
    let required = required_equations(classes.len());
    if records.len() < required {
        return Err(Error::NeedsMoreData { required, available: records.len() });
    }
    let mut entries = Vec::with_capacity(records.len() * classes.len());
    let mut rhs = Vec::with_capacity(records.len());
    for r in records {
        if (r.matrix.rows(), r.matrix.cols()) != (m, n) {
            return Err(Error::Dimension(format!("record {} is not {m}x{n}", r.lineage)));
        }
        let cache = MinorCache::with_basis(&r.matrix, group.basis().clone())?;
        let ratios = cache.ratios()?;
        entries.extend(class_ratio_sums(&group, &classes, &ratios)?);
        let q0 = r.polynomial.coeff(0);
        if q0.is_zero() {
            return Err(Error::DegenerateInput(format!("record {} has zero constant term", r.lineage)));
        }
        rhs.push(Rational::from((r.polynomial.coeff(k), q0)));
    }
    Ok((ExactMatrix::new(records.len(), classes.len(), entries)?, rhs, classes))
}

/// Solves every size k (in parallel) and pins free variables to 0.
pub fn solve_table(m: usize, n: usize, dataset: &Dataset) -> Result<CoefficientTable> {
    let records = dataset.sorted();
    let d = SymmetryGroup::new(m, n).basis().len();
    let solved: Vec<Result<(Vec<(ClassRep, Rational)>, PinningReport)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (1..=d)
            .map(|k| {
                let records = &records;
                scope.spawn(move || solve_size(m, n, k, records))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });
    let mut values = vec![("{}".parse().unwrap(), Rational::from(1))];
    let mut pinning = Vec::new();
    for s in solved {
        let (vals, pin) = s?;
        values.extend(vals.into_iter().map(|(c, v)| (c.rep, v)));
        pinning.push(pin);
    }
    let mut table = CoefficientTable::from_values(m, n, Provenance::PipelineInterpolated, &values, true)?;
    table.set_pinning(pinning);
    Ok(table)
}

fn solve_size(m: usize, n: usize, k: usize, records: &[&DatumRecord]) -> Result<(Vec<(ClassRep, Rational)>, PinningReport)> {
    let (a, b, classes) = assemble_system(m, n, k, records)?;
    match solve_affine(&a, &b)? {
        SolveOutcome::Inconsistent { .. } => Err(Error::ConjectureFalsified { m, n, k }),
        SolveOutcome::Solved(sol) => {
            let report = PinningReport {
                k,
                unknowns: classes.len(),
                equations: a.rows(),
                nullity: sol.nullity(),
                determined: sol.determined_count(),
                pinned: sol.pinned.iter().map(|&(i, _)| classes[i].rep.clone()).collect(),
                undetermined: (0..classes.len())
                    .filter(|&i| !sol.is_determined(i))
                    .map(|i| classes[i].rep.clone())
                    .collect(),
            };
            Ok((classes.into_iter().zip(sol.particular).collect(), report))
        }
    }
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub m: usize,
    pub n: usize,
    /// Matrices to generate (each yields up to m·n records when harvesting).
    pub count: usize,
    pub seed: u64,
    pub workers: usize,
    pub precision: Option<u32>,
    pub data_dir: PathBuf,
    pub resume: bool,
    pub harvest: bool,
}

impl CampaignConfig {
    pub fn new(m: usize, n: usize, data_dir: impl Into<PathBuf>) -> Self {
        Self {
            m,
            n,
            count: suggested_count(m, n, true),
            seed: 1,
            workers: std::thread::available_parallelism().map(|v| v.get()).unwrap_or(1),
            precision: None,
            data_dir: data_dir.into(),
            resume: false,
            harvest: true,
        }
    }

    pub fn dataset_path(&self) -> PathBuf {
        self.data_dir.join(format!("dataset_{}x{}.txt", self.m, self.n))
    }

    pub fn table_path(&self) -> PathBuf {
        self.data_dir.join(format!("table_{}x{}.txt", self.m, self.n))
    }
}

/// Matrices needed to cover the largest size class count with margin.
pub fn suggested_count(m: usize, n: usize, harvest: bool) -> usize {
    let group = SymmetryGroup::new(m, n);
    let d = group.basis().len();
    let widest = (0..=d)
        .filter_map(|k| group.enumerate_classes(k).ok().map(|c| c.len()))
        .max()
        .unwrap_or(1);
    let per = if harvest { m * n } else { 1 };
    // harvested entries of one matrix are often identical up to symmetry
    (2 * required_equations(widest)).div_ceil(per) + 1
}

#[derive(Debug)]
pub struct CampaignReport {
    pub dataset: Dataset,
    pub new_records: usize,
    pub discarded: Vec<DiscardReport>,
    pub quarantined: Vec<(usize, String)>,
    pub table: CoefficientTable,
}

/// Generates, recognizes and stores records with a worker pool, then solves
/// for the table and writes it next to the dataset.
pub fn campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    if cfg.workers == 0 {
        return Err(Error::Precondition("worker count must be at least 1".into()));
    }
    std::fs::create_dir_all(&cfg.data_dir)?;
    let path = cfg.dataset_path();
    if path.exists() && !cfg.resume {
        return Err(Error::Precondition(format!("{} exists; pass --resume to extend it", path.display())));
    }
    let LoadReport { mut dataset, quarantined } = dataset_load(&path, cfg.m, cfg.n)?;
    let p = cfg.precision.unwrap_or_else(|| precision_for(cfg.m, cfg.n));
    let todo: Vec<u64> = (0..cfg.count as u64).filter(|&i| !dataset.contains_index(cfg.seed, i)).collect();
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<Result<std::result::Result<DatumRecord, DiscardReport>>>();
    let mut writer = DatasetWriter::append_to(&path)?;
    let mut discarded = Vec::new();
    let mut new_records = 0;
    std::thread::scope(|scope| -> Result<()> {
        for _ in 0..cfg.workers {
            let tx = tx.clone();
            let (next, todo) = (&next, &todo);
            scope.spawn(move || loop {
                let slot = next.fetch_add(1, Ordering::Relaxed);
                let Some(&index) = todo.get(slot) else { break };
                let mut rng = matrix_rng(cfg.seed, index);
                let a = match random_matrix(cfg.m, cfg.n, &mut rng) {
                    Ok(a) => a,
                    Err(e) => {
                        let _ = tx.send(Err(e));
                        break;
                    }
                };
                let jobs = if cfg.harvest { harvest(&a) } else { vec![((0, 0), a)] };
                for (entry, b) in jobs {
                    let lineage = Lineage { seed: cfg.seed, index, entry };
                    if tx.send(collect_datum(&b, p, lineage)).is_err() {
                        return;
                    }
                }
            });
        }
        drop(tx);
        for msg in rx {
            match msg? {
                Ok(r) => {
                    if dataset.push(r.clone()).is_ok() {
                        writer.append(&r)?;
                        new_records += 1;
                    }
                }
                Err(d) => discarded.push(d),
            }
        }
        Ok(())
    })?;
    let table = solve_table(cfg.m, cfg.n, &dataset)?;
    table.save(&cfg.table_path())?;
    Ok(CampaignReport { dataset, new_records, discarded, quarantined, table })
}

/// Recomputes the limit at twice the record's precision and re-checks the root.
pub fn reverify(r: &DatumRecord) -> Result<(bool, Float)> {
    let x = sinkhorn_limit(&r.matrix, 2 * r.precision_used)?;
    Ok(verify_root(&r.polynomial, x.top_left()))
}
