//! Coefficient tables c_S(m, n) over equivalence classes, the polynomials
//! they assemble, and table-level identity checks.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, ExactMatrix};
use crate::links::SignEvidence;
use crate::minors::{MinorCache, SubsetS};
use crate::poly::{IntPolynomial, RatPolynomial};
use crate::recognition::verify_root;
use crate::scaling::sinkhorn_limit;
use crate::symmetry::{binomial, dual_subset, transpose_subset, ClassRep, SymmetryGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    PaperProved,
    PaperConjecturedForm,
    PipelineInterpolated,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::PaperProved => "PAPER_PROVED",
            Provenance::PaperConjecturedForm => "PAPER_CONJECTURED_FORM",
            Provenance::PipelineInterpolated => "PIPELINE_INTERPOLATED",
        })
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "PAPER_PROVED" => Ok(Provenance::PaperProved),
            "PAPER_CONJECTURED_FORM" => Ok(Provenance::PaperConjecturedForm),
            "PIPELINE_INTERPOLATED" => Ok(Provenance::PipelineInterpolated),
            _ => Err(Error::Parse(format!("unknown provenance {s:?}"))),
        }
    }
}

/// How the linear system for one size k was resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinningReport {
    pub k: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub nullity: usize,
    pub determined: usize,
    /// Classes whose coefficient was set to 0 as a free variable.
    pub pinned: Vec<SubsetS>,
    /// Classes whose value depends on the pins (the pins included).
    pub undetermined: Vec<SubsetS>,
}

impl fmt::Display for PinningReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "#pin\t{}\t{}\t{}\t{}\t{}",
            self.k, self.unknowns, self.equations, self.nullity, self.determined
        )?;
        for s in &self.pinned {
            write!(f, "\t{s}")?;
        }
        if !self.undetermined.is_empty() {
            write!(f, "\n#dep\t{}", self.k)?;
            for s in &self.undetermined {
                write!(f, "\t{s}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for PinningReport {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('\t');
        if parts.next() != Some("#pin") {
            return Err(Error::Parse(format!("not a pinning line: {s:?}")));
        }
        let mut num = || -> Result<usize> {
            parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad pinning line {s:?}")))
        };
        let (k, unknowns, equations, nullity, determined) = (num()?, num()?, num()?, num()?, num()?);
        let pinned = parts.map(str::parse).collect::<Result<Vec<_>>>()?;
        Ok(Self { k, unknowns, equations, nullity, determined, pinned, undetermined: Vec::new() })
    }
}

/// c_S(m, n) for every equivalence class of subsets of D(m, n).
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    group: SymmetryGroup,
    entries: Vec<(ClassRep, Rational)>,
    index: HashMap<String, usize>,
    provenance: Provenance,
    pinning: Vec<PinningReport>,
}

impl CoefficientTable {
    /// Builds a table from values keyed by any member of each class.
    ///
    /// With `strict`, every class must be given; otherwise missing classes get 0.
    pub fn from_values(
        m: usize,
        n: usize,
        provenance: Provenance,
        values: &[(SubsetS, Rational)],
        strict: bool,
    ) -> Result<Self> {
        let group = SymmetryGroup::new(m, n);
        let mut given: HashMap<String, Rational> = HashMap::new();
        for (s, v) in values {
            let rep = group.canonical_form(s)?.encode();
            if let Some(old) = given.insert(rep.clone(), v.clone()) {
                if old != *v {
                    return Err(Error::Parse(format!("class {rep} given twice with different values")));
                }
            }
        }
        let classes = group.enumerate_all_classes()?;
        let mut entries = Vec::with_capacity(classes.len());
        for c in classes {
            let key = c.rep.encode();
            let v = match given.remove(&key) {
                Some(v) => v,
                None if strict => return Err(Error::Parse(format!("missing class {key}"))),
                None => Rational::new(),
            };
            entries.push((c, v));
        }
        if let Some(extra) = given.keys().next() {
            return Err(Error::Parse(format!("{extra} is not a class of D({m}, {n})")));
        }
        Self::from_entries(group, entries, provenance)
    }

    fn from_entries(group: SymmetryGroup, entries: Vec<(ClassRep, Rational)>, provenance: Provenance) -> Result<Self> {
        let index = entries.iter().enumerate().map(|(i, (c, _))| (c.rep.encode(), i)).collect();
        let table = Self { group, entries, index, provenance, pinning: vec![] };
        if table.by_encoding("{}") != Some(&Rational::from(1)) {
            return Err(Error::Precondition("c of the empty subset must be 1".into()));
        }
        let (m, n) = table.ambient();
        if m == n && provenance == Provenance::PaperProved {
            let full = table.group.basis().full();
            if table.coefficient(&full)? != 1 {
                return Err(Error::Precondition("c_D must be 1 for a square ambient".into()));
            }
        }
        Ok(table)
    }

    pub fn ambient(&self) -> (usize, usize) {
        (self.group.m(), self.group.n())
    }

    pub fn group(&self) -> &SymmetryGroup {
        &self.group
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn pinning(&self) -> &[PinningReport] {
        &self.pinning
    }

    /// False when the class's value depends on a pinned free variable.
    pub fn is_canonical(&self, rep: &SubsetS) -> bool {
        !self.pinning.iter().any(|r| r.undetermined.contains(rep))
    }

    pub fn set_pinning(&mut self, pinning: Vec<PinningReport>) {
        self.pinning = pinning;
    }

    pub fn entries(&self) -> &[(ClassRep, Rational)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn by_encoding(&self, rep: &str) -> Option<&Rational> {
        self.index.get(rep).map(|&i| &self.entries[i].1)
    }

    /// c_S for any subset, canonicalized first.
    pub fn coefficient(&self, s: &SubsetS) -> Result<Rational> {
        let rep = self.group.canonical_form(s)?.encode();
        self.by_encoding(&rep)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("no entry for {rep}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_string())?;
        Ok(())
    }
}

impl fmt::Display for CoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, n) = self.ambient();
        writeln!(f, "{m} {n} {}", self.provenance)?;
        for p in &self.pinning {
            writeln!(f, "{p}")?;
        }
        for (c, v) in &self.entries {
            writeln!(f, "{}\t{v}", c.rep)?;
        }
        Ok(())
    }
}

impl FromStr for CoefficientTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut header = None;
        let mut pinning = Vec::new();
        let mut values = Vec::new();
        for line in s.lines() {
            let line = line.trim_end();
            if line.starts_with("#pin\t") {
                pinning.push(line.parse::<PinningReport>()?);
                continue;
            }
            if let Some(rest) = line.strip_prefix("#dep\t") {
                let mut parts = rest.split('\t');
                let k: usize = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad dependency line {line:?}")))?;
                let report = pinning
                    .iter_mut()
                    .find(|r| r.k == k)
                    .ok_or_else(|| Error::Parse(format!("#dep line for k = {k} before its #pin line")))?;
                report.undetermined = parts.map(str::parse).collect::<Result<Vec<_>>>()?;
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if header.is_none() {
                let t: Vec<&str> = line.split_whitespace().collect();
                let [m, n, p] = t[..] else {
                    return Err(Error::Parse(format!("bad table header {line:?}")));
                };
                let dim = |x: &str| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension {x:?}")));
                header = Some((dim(m)?, dim(n)?, p.parse::<Provenance>()?));
                continue;
            }
            let (rep, v) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("expected <class>\\t<value>, got {line:?}")))?;
            values.push((rep.parse::<SubsetS>()?, parse_rational(v.trim())?));
        }
        let (m, n, provenance) = header.ok_or_else(|| Error::Parse("empty table file".into()))?;
        let mut table = Self::from_values(m, n, provenance, &values, true)?;
        table.pinning = pinning;
        Ok(table)
    }
}

fn subset(text: &str) -> SubsetS {
    text.parse().expect("valid subset literal")
}

/// The 3×3 table: 19 nonzero class coefficients, the other 5 classes 0.
pub fn table_3x3() -> CoefficientTable {
    const ROWS: [(&str, i64); 19] = [
        ("{};{} | {2};{2} | {2};{3} | {3};{2} | {3};{3} | {2,3};{2,3}", 1),
        ("{};{} | {2};{2} | {2};{3} | {3};{2} | {3};{3}", -3),
        ("{};{} | {2};{2} | {2};{3} | {3};{2} | {2,3};{2,3}", -1),
        ("{2};{2} | {2};{3} | {3};{2} | {3};{3} | {2,3};{2,3}", 1),
        ("{};{} | {2};{2} | {2};{3} | {3};{2}", 4),
        ("{};{} | {2};{2} | {3};{3} | {2,3};{2,3}", 1),
        ("{2};{2} | {2};{3} | {3};{2} | {3};{3}", -3),
        ("{};{} | {2};{2} | {2};{3}", -4),
        ("{};{} | {2};{2} | {3};{3}", -5),
        ("{};{} | {2};{2} | {2,3};{2,3}", 1),
        ("{2};{2} | {2};{3} | {3};{2}", 1),
        ("{2};{2} | {3};{3} | {2,3};{2,3}", -1),
        ("{};{} | {2};{2}", 4),
        ("{};{} | {2,3};{2,3}", -3),
        ("{2};{2} | {3};{3}", 1),
        ("{};{}", -3),
        ("{2};{2}", -1),
        ("{2,3};{2,3}", 1),
        ("{}", 1),
    ];
    let values: Vec<_> = ROWS.iter().map(|&(s, v)| (subset(s), Rational::from(v))).collect();
    CoefficientTable::from_values(3, 3, Provenance::PaperProved, &values, false).expect("3x3 table")
}

/// 2^k c_{S_k} = (−n)^(k−1)(2k − 2n − 2), 2^k c_{T_k} = (−n)^(k−1)(2k − n), where
/// S_k contains ({},{}) and T_k does not.
pub fn table_2xn(n: usize) -> Result<CoefficientTable> {
    if n < 2 {
        return Err(Error::Precondition(format!("2xn closed form needs n >= 2, got {n}")));
    }
    let group = SymmetryGroup::new(2, n);
    let empty_spec = crate::minors::MinorSpec::empty();
    let nn = Rational::from(-(n as i64));
    let mut entries = Vec::new();
    for c in group.enumerate_all_classes()? {
        let k = c.k() as i32;
        let power = nn.clone().pow(k - 1);
        let factor = if c.rep.contains(&empty_spec) { 2 * k - 2 * n as i32 - 2 } else { 2 * k - n as i32 };
        let v = power * Rational::from(factor) / Rational::from(Integer::from(1) << k as u32);
        entries.push((c, v));
    }
    let provenance = if n == 2 { Provenance::PaperProved } else { Provenance::PaperConjecturedForm };
    CoefficientTable::from_entries(group, entries, provenance)
}

/// 1×n and m×1: the limit entry is 1/n, so c_{} = 1 and c_{D} = −n.
fn table_thin(m: usize, n: usize) -> Result<CoefficientTable> {
    let group = SymmetryGroup::new(m, n);
    let entries = group
        .enumerate_all_classes()?
        .into_iter()
        .map(|c| {
            let v = if c.k() == 0 { Rational::from(1) } else { Rational::from(-(n as i64)) };
            (c, v)
        })
        .collect();
    CoefficientTable::from_entries(group, entries, Provenance::PaperConjecturedForm)
}

/// c_S(m, n) = c_{Sᵀ}(n, m)·(n/m)^|S|, since the transposed problem's entry is (n/m)·x.
pub fn transpose_table(t: &CoefficientTable) -> Result<CoefficientTable> {
    let (n, m) = t.ambient();
    let group = SymmetryGroup::new(m, n);
    let ratio = Rational::from((n as i64, m as i64));
    let mut entries = Vec::new();
    for c in group.enumerate_all_classes()? {
        let v = t.coefficient(&transpose_subset(&c.rep))? * ratio.clone().pow(c.k() as i32);
        entries.push((c, v));
    }
    let mut out = CoefficientTable::from_entries(group, entries, t.provenance())?;
    out.pinning = t.pinning.clone();
    Ok(out)
}

const SHIPPED: &[((usize, usize), &str)] = &[
    ((3, 4), include_str!("../data/table_3x4.txt")),
    ((3, 5), include_str!("../data/table_3x5.txt")),
];

/// Ambients with a shipped interpolated table.
pub fn shipped_ambients() -> Vec<(usize, usize)> {
    SHIPPED.iter().filter(|(_, text)| has_entries(text)).map(|&(a, _)| a).collect()
}

fn has_entries(text: &str) -> bool {
    text.lines().any(|l| !l.trim().is_empty() && !l.starts_with('#'))
}

/// Built-in or shipped table for an ambient.
pub fn builtin_table(m: usize, n: usize) -> Result<CoefficientTable> {
    if m == 0 || n == 0 {
        return Err(Error::Dimension(format!("{m}x{n} matrix")));
    }
    if m == 1 || n == 1 {
        return table_thin(m, n);
    }
    if m == 2 {
        return table_2xn(n);
    }
    if (m, n) == (3, 3) {
        return Ok(table_3x3());
    }
    for &((sm, sn), text) in SHIPPED {
        if has_entries(text) {
            if (sm, sn) == (m, n) {
                return text.parse();
            }
            if (sn, sm) == (m, n) {
                return transpose_table(&text.parse()?);
            }
        }
    }
    if n == 2 {
        return transpose_table(&table_2xn(m)?);
    }
    Err(Error::Unsupported(format!(
        "no built-in table for {m}x{n}; interpolate one with `sinkpoly interpolate {m} {n}`"
    )))
}

/// An assembled polynomial in exact and primitive form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TablePolynomial {
    pub exact: RatPolynomial,
    /// None when every coefficient vanishes.
    pub primitive: Option<IntPolynomial>,
}

impl TablePolynomial {
    fn new(exact: RatPolynomial) -> Result<Self> {
        let primitive = if exact.is_zero() { None } else { Some(exact.primitive()?) };
        Ok(Self { exact, primitive })
    }

    pub fn is_zero(&self) -> bool {
        self.primitive.is_none()
    }

    /// The exact polynomial when all coefficients are integers.
    pub fn integer(&self) -> Option<IntPolynomial> {
        self.exact.to_integer()
    }
}

/// Σ_k (Σ_classes c_S·Σ(S))·x^k.
pub fn polynomial_for(a: &ExactMatrix, table: &CoefficientTable) -> Result<TablePolynomial> {
    if (a.rows(), a.cols()) != table.ambient() {
        let (m, n) = table.ambient();
        return Err(Error::Dimension(format!("{}x{} matrix with a {m}x{n} table", a.rows(), a.cols())));
    }
    if !a.is_positive() {
        return Err(Error::Domain("matrix entries must be positive".into()));
    }
    let group = table.group();
    let cache = MinorCache::with_basis(a, group.basis().clone())?;
    let mut coeffs = vec![Rational::new(); group.basis().len() + 1];
    for (c, v) in table.entries() {
        if v.is_zero() {
            continue;
        }
        coeffs[c.k()] += group.class_sum_cached(&cache, &c.rep)? * v;
    }
    TablePolynomial::new(RatPolynomial::new(coeffs))
}

/// Swaps row 1 with row i and column 1 with column j (0-based), so that the
/// top-left entry of the result's limit is entry (i, j) of the original's.
pub fn move_to_top_left(a: &ExactMatrix, i: usize, j: usize) -> Result<ExactMatrix> {
    if i >= a.rows() || j >= a.cols() {
        return Err(Error::Dimension(format!("entry ({i}, {j}) outside a {}x{} matrix", a.rows(), a.cols())));
    }
    let mut b = a.clone();
    b.swap_rows(0, i);
    b.swap_cols(0, j);
    Ok(b)
}

/// Exact polynomial for entry (i, j) (0-based) of the limit.
pub fn entry_polynomial(a: &ExactMatrix, i: usize, j: usize) -> Result<TablePolynomial> {
    let b = move_to_top_left(a, i, j)?;
    polynomial_for(&b, &builtin_table(b.rows(), b.cols())?)
}

fn rows_proportional(a: &ExactMatrix, r: usize, s: usize) -> bool {
    (0..a.cols()).all(|j| (0..a.cols()).all(|k| {
        Rational::from(a.get(r, j) * a.get(s, k)) == Rational::from(a.get(r, k) * a.get(s, j))
    }))
}

/// Cubic e₃x³ + e₂x² + e₁x + e₀ for a positive 3×3 matrix whose rows 2 and 3
/// (or columns 2 and 3) are proportional.
pub fn degenerate_3x3(a: &ExactMatrix) -> Result<TablePolynomial> {
    let b = degenerate_orientation(a)?;
    let e = |i: usize, j: usize| b.get(i - 1, j - 1).clone();
    let (a11, a12, a13, a21, a22, a23) = (e(1, 1), e(1, 2), e(1, 3), e(2, 1), e(2, 2), e(2, 3));
    let p = |xs: &[&Rational]| xs.iter().fold(Rational::from(1), |acc, x| acc * *x);
    let e3 = p(&[&a11, &(p(&[&a11, &a22]) - p(&[&a12, &a21])), &(p(&[&a11, &a23]) - p(&[&a13, &a21]))]);
    let e2 = p(&[
        &a11,
        &(p(&[&a11, &a12, &a21, &a23]) + p(&[&a11, &a13, &a21, &a22]) - p(&[&a11, &a11, &a22, &a23]) * 3u32
            + p(&[&a12, &a13, &a21, &a21])),
    ]);
    let e1 = p(&[&a11, &a11, &a11, &a22, &a23]) * 3u32;
    let e0 = -p(&[&a11, &a11, &a11, &a22, &a23]);
    TablePolynomial::new(RatPolynomial::new(vec![e0, e1, e2, e3]))
}

fn degenerate_orientation(a: &ExactMatrix) -> Result<ExactMatrix> {
    if (a.rows(), a.cols()) != (3, 3) || !a.is_positive() {
        return Err(Error::Precondition("degenerate form needs a positive 3x3 matrix".into()));
    }
    if rows_proportional(a, 1, 2) {
        Ok(a.clone())
    } else if rows_proportional(&a.transpose(), 1, 2) {
        Ok(a.transpose())
    } else {
        Err(Error::Precondition("neither rows 2, 3 nor columns 2, 3 are proportional".into()))
    }
}

/// The cubic's coefficients as class sums over D(2, 3), negated so that c_{} = 1.
pub fn degenerate_table() -> CoefficientTable {
    let values = [
        ("{};{} | {2};{2} | {2};{3}", -1),
        ("{};{} | {2};{2}", 2),
        ("{2};{2} | {2};{3}", -1),
        ("{};{}", -3),
        ("{}", 1),
    ];
    let values: Vec<_> = values.iter().map(|&(s, v)| (subset(s), Rational::from(v))).collect();
    CoefficientTable::from_values(2, 3, Provenance::PaperProved, &values, false).expect("degenerate table")
}

/// Same cubic as `degenerate_3x3`, assembled from class sums of the first two rows.
pub fn degenerate_3x3_class_sums(a: &ExactMatrix) -> Result<TablePolynomial> {
    let b = degenerate_orientation(a)?;
    let top = ExactMatrix::new(2, 3, b.entries()[..6].to_vec())?;
    let p = polynomial_for(&top, &degenerate_table())?;
    TablePolynomial::new(p.exact.scaled(&Rational::from(-1)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    /// Σ c_S x^|S| over all S against (x − 1)^a (x − m/n)^b.
    pub binomial: bool,
    /// c_S = c_dual(S); None for rectangular ambients.
    pub duality: Option<bool>,
    pub mismatches: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.binomial && self.duality != Some(false)
    }
}

/// Σ_S c_S x^|S| with class multiplicities expanded.
pub fn expanded_sum(table: &CoefficientTable) -> RatPolynomial {
    let mut coeffs = vec![Rational::new(); table.group().basis().len() + 1];
    for (c, v) in table.entries() {
        coeffs[c.k()] += Rational::from(v * c.class_size as u64);
    }
    RatPolynomial::new(coeffs)
}

/// (x − 1)^C(m+n−3, n−1) · (x − m/n)^C(m+n−3, m−1); (x − 1)^|D| when square.
pub fn binomial_target(m: usize, n: usize) -> RatPolynomial {
    let a = binomial(m + n - 3, n - 1) as usize;
    let b = binomial(m + n - 3, m - 1) as usize;
    let mut acc = vec![Rational::from(1)];
    let roots = std::iter::repeat_n(Rational::from(1), a).chain(std::iter::repeat_n(Rational::from((m as i64, n as i64)), b));
    for r in roots {
        let mut next = vec![Rational::new(); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= Rational::from(c * &r);
        }
        acc = next;
    }
    RatPolynomial::new(acc)
}

/// Every canonical coefficient of the table, as evidence for sign fitting.
pub fn sign_evidence(table: &CoefficientTable) -> Vec<SignEvidence> {
    let (m, n) = table.ambient();
    table
        .entries()
        .iter()
        .filter(|(c, _)| table.is_canonical(&c.rep))
        .map(|(c, v)| SignEvidence { subset: c.rep.clone(), m, n, value: v.clone() })
        .collect()
}

/// Checks the binomial identity (exactly for square ambients, up to a
/// constant factor otherwise) and, when square, duality over every class.
pub fn table_identities(table: &CoefficientTable) -> Result<IdentityReport> {
    let (m, n) = table.ambient();
    let mut mismatches = Vec::new();
    let sum = expanded_sum(table);
    let target = binomial_target(m, n);
    let binomial = if m == n {
        sum == target
    } else {
        let scale = Rational::from(sum.coeff(0) / target.coeff(0));
        target.scaled(&scale) == sum
    };
    if !binomial {
        mismatches.push(format!("class-weighted sum is not proportional to (x-1)^a (x-{m}/{n})^b"));
    }
    let duality = if m == n {
        let mut ok = true;
        for (c, v) in table.entries() {
            let dual = dual_subset(&c.rep, m, n)?;
            let w = table.coefficient(&dual)?;
            if w != *v {
                ok = false;
                mismatches.push(format!("c({}) = {v} but c(dual) = {w}", c.rep));
            }
        }
        Some(ok)
    } else {
        None
    };
    Ok(IdentityReport { binomial, duality, mismatches })
}

/// Assembles the table polynomial for `a` and tests it at the numerically
/// computed top-left limit entry.
pub fn verify_polynomial(a: &ExactMatrix, table: &CoefficientTable, p: u32) -> Result<(bool, Float)> {
    let poly = polynomial_for(a, table)?;
    let q = poly
        .primitive
        .ok_or_else(|| Error::DegenerateInput("assembled polynomial is identically zero".into()))?;
    let x = sinkhorn_limit(a, p)?;
    Ok(verify_root(&q, x.top_left()))
}
