//! Minor specifications (R, C), the index set D(m, n), the minors Δ and Γ,
//! and the monomials M(S).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rug::Rational;

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;

/// A pair of equal-size index sets R ⊆ {2..m}, C ⊆ {2..n}, using 1-based labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinorSpec {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorSpec {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Result<Self> {
        rows.sort_unstable();
        cols.sort_unstable();
        let distinct = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if rows.len() != cols.len() {
            return Err(Error::Dimension(format!("|R| = {} but |C| = {}", rows.len(), cols.len())));
        }
        if !distinct(&rows) || !distinct(&cols) {
            return Err(Error::DegenerateInput("repeated index in a minor specification".into()));
        }
        if rows.iter().chain(&cols).any(|&i| i < 2) {
            return Err(Error::Dimension("minor indices start at 2".into()));
        }
        Ok(Self { rows, cols })
    }

    pub fn empty() -> Self {
        Self { rows: vec![], cols: vec![] }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn fits(&self, m: usize, n: usize) -> bool {
        self.rows.iter().all(|&r| r <= m) && self.cols.iter().all(|&c| c <= n)
    }

    pub fn transpose(&self) -> Self {
        Self { rows: self.cols.clone(), cols: self.rows.clone() }
    }

    /// Orders specs by size, then R, then C.
    pub fn basis_cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.size(), &self.rows, &self.cols).cmp(&(other.size(), &other.rows, &other.cols))
    }

    /// Δ(R, C) = det A[{1} ∪ R, {1} ∪ C].
    pub fn delta(&self, a: &ExactMatrix) -> Result<Rational> {
        self.check(a)?;
        let rows: Vec<usize> = std::iter::once(0).chain(self.rows.iter().map(|r| r - 1)).collect();
        let cols: Vec<usize> = std::iter::once(0).chain(self.cols.iter().map(|c| c - 1)).collect();
        a.submatrix(&rows, &cols).det()
    }

    /// Γ(R, C) = a11 · det A[R, C].
    pub fn gamma(&self, a: &ExactMatrix) -> Result<Rational> {
        self.check(a)?;
        let rows: Vec<usize> = self.rows.iter().map(|r| r - 1).collect();
        let cols: Vec<usize> = self.cols.iter().map(|c| c - 1).collect();
        Ok(a.submatrix(&rows, &cols).det()? * a.get(0, 0))
    }

    fn check(&self, a: &ExactMatrix) -> Result<()> {
        if self.fits(a.rows(), a.cols()) {
            Ok(())
        } else {
            Err(Error::Dimension(format!("{self} out of range for a {}x{} matrix", a.rows(), a.cols())))
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for MinorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}};{{{}}}", join(&self.rows), join(&self.cols))
    }
}

fn parse_set(s: &str) -> Result<Vec<usize>> {
    let inner = s
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("expected {{...}}, got {s:?}")))?;
    if inner.is_empty() {
        return Ok(vec![]);
    }
    inner
        .split(',')
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad index {t:?}"))))
        .collect()
}

impl FromStr for MinorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (r, c) = s
            .trim()
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing ';' in {s:?}")))?;
        Self::new(parse_set(r)?, parse_set(c)?)
    }
}

/// Shorthand for tests and tables: `spec(&[2, 3], &[2, 4])`.
pub fn spec(rows: &[usize], cols: &[usize]) -> MinorSpec {
    MinorSpec::new(rows.to_vec(), cols.to_vec()).expect("valid minor spec")
}

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets_of_size(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The ordered index set D(m, n).
#[derive(Clone, Debug)]
pub struct MinorBasis {
    m: usize,
    n: usize,
    specs: Vec<MinorSpec>,
    index: HashMap<MinorSpec, usize>,
}

impl MinorBasis {
    pub fn new(m: usize, n: usize) -> Self {
        assert!(m >= 1 && n >= 1, "empty ambient");
        let row_labels: Vec<usize> = (2..=m).collect();
        let col_labels: Vec<usize> = (2..=n).collect();
        let mut specs = Vec::new();
        for k in 0..=row_labels.len().min(col_labels.len()) {
            for r in subsets_of_size(&row_labels, k) {
                for c in subsets_of_size(&col_labels, k) {
                    specs.push(MinorSpec { rows: r.clone(), cols: c });
                }
            }
        }
        let index = specs.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self { m, n, specs, index }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn specs(&self) -> &[MinorSpec] {
        &self.specs
    }

    pub fn spec(&self, i: usize) -> &MinorSpec {
        &self.specs[i]
    }

    pub fn index_of(&self, s: &MinorSpec) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn full(&self) -> SubsetS {
        SubsetS { members: self.specs.clone() }
    }

    /// Basis indices of the members of `s`, ascending.
    pub fn indices(&self, s: &SubsetS) -> Result<Vec<usize>> {
        s.members
            .iter()
            .map(|x| {
                self.index_of(x).ok_or_else(|| {
                    Error::Dimension(format!("{x} is not in D({}, {})", self.m, self.n))
                })
            })
            .collect()
    }

    pub fn subset(&self, indices: &[usize]) -> SubsetS {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        SubsetS { members: idx.into_iter().map(|i| self.specs[i].clone()).collect() }
    }
}

pub fn minor_basis(m: usize, n: usize) -> MinorBasis {
    MinorBasis::new(m, n)
}

/// A set of minor specifications, kept sorted in basis order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SubsetS {
    members: Vec<MinorSpec>,
}

impl SubsetS {
    pub fn new(mut members: Vec<MinorSpec>) -> Self {
        members.sort_by(|a, b| a.basis_cmp(b));
        members.dedup();
        Self { members }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn members(&self) -> &[MinorSpec] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &MinorSpec) -> bool {
        self.members.contains(s)
    }

    pub fn fits(&self, m: usize, n: usize) -> bool {
        self.members.iter().all(|s| s.fits(m, n))
    }

    /// Canonical text encoding used by table files and the CLI.
    pub fn encode(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SubsetS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.members.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.members.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

impl FromStr for SubsetS {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "{}" {
            return Ok(Self::empty());
        }
        let members = s.split(" | ").map(str::parse).collect::<Result<Vec<MinorSpec>>>()?;
        let set = Self::new(members.clone());
        if set.len() != members.len() {
            return Err(Error::Parse(format!("repeated specification in {s:?}")));
        }
        Ok(set)
    }
}

/// Δ and Γ of one specification.
pub fn delta_gamma(a: &ExactMatrix, s: &MinorSpec) -> Result<(Rational, Rational)> {
    Ok((s.delta(a)?, s.gamma(a)?))
}

/// Δ and Γ of every basis specification for one matrix.
#[derive(Clone, Debug)]
pub struct MinorCache {
    basis: MinorBasis,
    delta: Vec<Rational>,
    gamma: Vec<Rational>,
}

impl MinorCache {
    pub fn new(a: &ExactMatrix) -> Result<Self> {
        let basis = MinorBasis::new(a.rows(), a.cols());
        Self::with_basis(a, basis)
    }

    pub fn with_basis(a: &ExactMatrix, basis: MinorBasis) -> Result<Self> {
        if (basis.m(), basis.n()) != (a.rows(), a.cols()) {
            return Err(Error::Dimension("basis does not match the matrix".into()));
        }
        let mut delta = Vec::with_capacity(basis.len());
        let mut gamma = Vec::with_capacity(basis.len());
        for s in basis.specs() {
            let (d, g) = delta_gamma(a, s)?;
            delta.push(d);
            gamma.push(g);
        }
        Ok(Self { basis, delta, gamma })
    }

    pub fn basis(&self) -> &MinorBasis {
        &self.basis
    }

    pub fn delta(&self, i: usize) -> &Rational {
        &self.delta[i]
    }

    pub fn gamma(&self, i: usize) -> &Rational {
        &self.gamma[i]
    }

    /// M(S) for a subset given by basis-membership flags.
    pub fn monomial_flags(&self, member: &[bool]) -> Rational {
        let mut acc = Rational::from(1);
        for (i, &inside) in member.iter().enumerate() {
            acc *= if inside { &self.delta[i] } else { &self.gamma[i] };
        }
        acc
    }

    pub fn monomial(&self, s: &SubsetS) -> Result<Rational> {
        let mut flags = vec![false; self.basis.len()];
        for i in self.basis.indices(s)? {
            flags[i] = true;
        }
        Ok(self.monomial_flags(&flags))
    }

    /// Δ/Γ per basis specification; fails on the first vanishing Γ.
    pub fn ratios(&self) -> Result<Vec<Rational>> {
        self.delta
            .iter()
            .zip(&self.gamma)
            .enumerate()
            .map(|(i, (d, g))| {
                if g.is_zero() {
                    Err(Error::ZeroMinor { spec: self.basis.spec(i).to_string() })
                } else {
                    Ok(Rational::from(d / g))
                }
            })
            .collect()
    }

    pub fn monomial_ratio(&self, s: &SubsetS) -> Result<Rational> {
        let ratios = self.ratios()?;
        let mut acc = Rational::from(1);
        for i in self.basis.indices(s)? {
            acc *= &ratios[i];
        }
        Ok(acc)
    }
}

/// M(S) = Π_{S} Δ · Π_{D∖S} Γ.
pub fn monomial(a: &ExactMatrix, s: &SubsetS) -> Result<Rational> {
    MinorCache::new(a)?.monomial(s)
}

/// M(S) / M({}) as a product of Δ/Γ over S.
pub fn monomial_ratio(a: &ExactMatrix, s: &SubsetS) -> Result<Rational> {
    MinorCache::new(a)?.monomial_ratio(s)
}
