//! Links between minor specifications, the link graph of a subset, the
//! signed adjacency-style matrices and the conjectured coefficients built
//! from their determinants.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use rug::Rational;

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::minors::{MinorSpec, SubsetS};

/// Largest component handled by the fingerprint search.
pub const MAX_FINGERPRINT_VERTICES: usize = 12;
/// Largest subset accepted by the exhaustive switching-equivalence search.
pub const MAX_SWITCHING_VERTICES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkLabel {
    Type1,
    Type2Row,
    Type2Col,
    None,
}

fn sorted_subset(small: &[usize], large: &[usize]) -> bool {
    small.iter().all(|x| large.contains(x))
}

fn differ_in_one(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && a.iter().filter(|x| !b.contains(x)).count() == 1
}

pub fn link_type(p: &MinorSpec, q: &MinorSpec) -> Result<LinkLabel> {
    if p == q {
        return Err(Error::DegenerateInput(format!("{p} linked with itself")));
    }
    let (sp, sq) = (p.size(), q.size());
    if sp + 1 == sq || sq + 1 == sp {
        let (small, large) = if sp < sq { (p, q) } else { (q, p) };
        if sorted_subset(small.rows(), large.rows()) && sorted_subset(small.cols(), large.cols()) {
            return Ok(LinkLabel::Type1);
        }
        return Ok(LinkLabel::None);
    }
    if sp == sq {
        if p.rows() == q.rows() && differ_in_one(p.cols(), q.cols()) {
            return Ok(LinkLabel::Type2Row);
        }
        if p.cols() == q.cols() && differ_in_one(p.rows(), q.rows()) {
            return Ok(LinkLabel::Type2Col);
        }
    }
    Ok(LinkLabel::None)
}

/// Off-diagonal entry of the unscaled, unsigned matrix in row `i`'s view:
/// a type-1 link carries +m in the smaller spec's row and −n in the larger's.
fn base_entry(p: &MinorSpec, q: &MinorSpec, m: i64, n: i64) -> i64 {
    match link_type(p, q).expect("distinct specs") {
        LinkLabel::Type1 if p.size() < q.size() => m,
        LinkLabel::Type1 => -n,
        LinkLabel::Type2Row => -m,
        LinkLabel::Type2Col => -n,
        LinkLabel::None => 0,
    }
}

/// G_S: vertices are the members of S in basis order.
#[derive(Clone, Debug)]
pub struct LinkGraph {
    vertices: Vec<MinorSpec>,
    labels: Vec<Vec<LinkLabel>>,
}

impl LinkGraph {
    pub fn new(s: &SubsetS) -> Self {
        let vertices = s.members().to_vec();
        let k = vertices.len();
        let mut labels = vec![vec![LinkLabel::None; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let l = link_type(&vertices[i], &vertices[j]).expect("distinct members");
                labels[i][j] = l;
                labels[j][i] = l;
            }
        }
        Self { vertices, labels }
    }

    pub fn vertices(&self) -> &[MinorSpec] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn label(&self, i: usize, j: usize) -> LinkLabel {
        self.labels[i][j]
    }

    /// Edges (i < j) with their labels.
    pub fn edges(&self) -> Vec<(usize, usize, LinkLabel)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.labels[i][j] != LinkLabel::None {
                    out.push((i, j, self.labels[i][j]));
                }
            }
        }
        out
    }

    /// Connected components as ascending vertex-index lists, ordered by first vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let k = self.len();
        let mut comp = vec![usize::MAX; k];
        let mut out = Vec::new();
        for start in 0..k {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = vec![];
            comp[start] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for w in 0..k {
                    if comp[w] == usize::MAX && self.labels[v][w] != LinkLabel::None {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn component_subsets(&self) -> Vec<SubsetS> {
        self.components()
            .into_iter()
            .map(|c| SubsetS::new(c.into_iter().map(|i| self.vertices[i].clone()).collect()))
            .collect()
    }

    /// Oriented label code of (i, j) used by fingerprints.
    fn code(&self, i: usize, j: usize) -> u8 {
        match self.labels[i][j] {
            LinkLabel::None => b'N',
            LinkLabel::Type1 if self.vertices[i].size() < self.vertices[j].size() => b'U',
            LinkLabel::Type1 => b'D',
            LinkLabel::Type2Row => b'R',
            LinkLabel::Type2Col => b'C',
        }
    }

    /// Triangle code for three mutually type-2 linked vertices of one kind:
    /// `S` when the three links share their common index set, `K` when the
    /// pairwise common sets differ, `-` otherwise.
    fn triangle(&self, a: usize, b: usize, c: usize) -> u8 {
        let kind = self.labels[a][b];
        if !matches!(kind, LinkLabel::Type2Row | LinkLabel::Type2Col)
            || self.labels[a][c] != kind
            || self.labels[b][c] != kind
        {
            return b'-';
        }
        let side = |i: usize| match kind {
            LinkLabel::Type2Row => self.vertices[i].cols(),
            _ => self.vertices[i].rows(),
        };
        let common = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().copied().filter(|v| y.contains(v)).collect() };
        let (ab, ac, bc) = (common(side(a), side(b)), common(side(a), side(c)), common(side(b), side(c)));
        if ab == ac && ac == bc {
            b'S'
        } else {
            b'K'
        }
    }

    /// Canonical code of the labelled graph and the vertex order realising it.
    ///
    /// The code lists, for positions p = 1..k, the oriented labels between
    /// the vertex placed at p and each earlier one, then the triangle codes
    /// of p with each earlier pair; the canonical order minimises it. The
    /// fingerprint shows the labels, then the triangle codes when any
    /// triangle is type-2 of one kind.
    pub fn fingerprint(&self) -> Result<(String, Vec<usize>)> {
        let k = self.len();
        if k > MAX_FINGERPRINT_VERTICES {
            return Err(Error::WorkLimit(format!(
                "fingerprint of a {k}-vertex graph (limit {MAX_FINGERPRINT_VERTICES})"
            )));
        }
        let codes: Vec<Vec<u8>> =
            (0..k).map(|i| (0..k).map(|j| if i == j { b'-' } else { self.code(i, j) }).collect()).collect();
        let tri: Vec<Vec<Vec<u8>>> = (0..k)
            .map(|a| (0..k).map(|b| (0..k).map(|c| if a == b || a == c || b == c { b'-' } else { self.triangle(a, b, c) }).collect()).collect())
            .collect();
        let signature: Vec<Vec<u8>> = (0..k)
            .map(|i| {
                let mut s = codes[i].clone();
                s.sort_unstable();
                let mut t: Vec<u8> = tri[i].iter().flatten().copied().filter(|&c| c != b'-').collect();
                t.sort_unstable();
                s.extend(t);
                s
            })
            .collect();
        let mut search = Canon {
            codes: &codes,
            tri: &tri,
            signature: &signature,
            best: None,
            order: Vec::new(),
            code: Vec::new(),
            nodes: 0,
        };
        let mut used = vec![false; k];
        search.descend(&mut used)?;
        let (_, order) = search.best.unwrap_or_default();
        let mut pairs = String::new();
        let mut triangles = String::new();
        for p in 0..k {
            for q in 0..p {
                pairs.push(codes[order[p]][order[q]] as char);
                for r in 0..q {
                    triangles.push(tri[order[p]][order[q]][order[r]] as char);
                }
            }
        }
        let fp = if triangles.bytes().any(|c| c != b'-') {
            format!("{k}:{pairs}:{triangles}")
        } else {
            format!("{k}:{pairs}")
        };
        Ok((fp, order))
    }
}

struct Canon<'a> {
    codes: &'a [Vec<u8>],
    tri: &'a [Vec<Vec<u8>>],
    signature: &'a [Vec<u8>],
    best: Option<(Vec<u8>, Vec<usize>)>,
    order: Vec<usize>,
    code: Vec<u8>,
    nodes: usize,
}

impl Canon<'_> {
    const NODE_LIMIT: usize = 2_000_000;

    fn twins(&self, v: usize, w: usize) -> bool {
        let k = self.codes.len();
        self.codes[v][w] == self.codes[w][v]
            && (0..k).all(|u| u == v || u == w || self.codes[v][u] == self.codes[w][u])
            && (0..k).all(|u| {
                (0..k).all(|x| u == v || u == w || x == v || x == w || self.tri[v][u][x] == self.tri[w][u][x])
            })
    }

    fn descend(&mut self, used: &mut [bool]) -> Result<()> {
        self.nodes += 1;
        if self.nodes > Self::NODE_LIMIT {
            return Err(Error::WorkLimit("fingerprint search".into()));
        }
        let k = self.codes.len();
        if let Some((best, _)) = &self.best {
            let cur = &self.code[..];
            if cur > &best[..cur.len()] {
                return Ok(());
            }
        }
        if self.order.len() == k {
            if self.best.as_ref().is_none_or(|(b, _)| self.code < *b) {
                self.best = Some((self.code.clone(), self.order.clone()));
            }
            return Ok(());
        }
        // only vertices with the least signature may come next
        let free: Vec<usize> = (0..k).filter(|&v| !used[v]).collect();
        let least = free.iter().map(|&v| &self.signature[v]).min().unwrap().clone();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &free {
            if self.signature[v] != least || tried.iter().any(|&t| self.twins(t, v)) {
                continue;
            }
            tried.push(v);
            let before = self.code.len();
            for (q, &u) in self.order.iter().enumerate() {
                self.code.push(self.codes[v][u]);
                for &x in &self.order[..q] {
                    self.code.push(self.tri[v][u][x]);
                }
            }
            self.order.push(v);
            used[v] = true;
            self.descend(used)?;
            used[v] = false;
            self.order.pop();
            self.code.truncate(before);
        }
        Ok(())
    }
}

pub fn link_graph(s: &SubsetS) -> LinkGraph {
    LinkGraph::new(s)
}

/// Symmetric ±1 pattern with +1 on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignAlteration {
    k: usize,
    signs: Vec<i8>,
}

impl SignAlteration {
    pub fn identity(k: usize) -> Self {
        Self { k, signs: vec![1; k * k] }
    }

    pub fn new(k: usize, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != k * k {
            return Err(Error::Dimension(format!("{} signs for a {k}x{k} alteration", signs.len())));
        }
        for i in 0..k {
            if signs[i * k + i] != 1 {
                return Err(Error::DegenerateInput("diagonal signs must be +1".into()));
            }
            for j in 0..k {
                let s = signs[i * k + j];
                if s != 1 && s != -1 {
                    return Err(Error::DegenerateInput(format!("sign {s} is not ±1")));
                }
                if s != signs[j * k + i] {
                    return Err(Error::DegenerateInput("sign alteration must be symmetric".into()));
                }
            }
        }
        Ok(Self { k, signs })
    }

    /// Identity except the listed off-diagonal pairs, which are negated.
    pub fn with_negated(k: usize, pairs: &[(usize, usize)]) -> Self {
        let mut s = Self::identity(k);
        for &(i, j) in pairs {
            s.signs[i * k + j] = -s.signs[i * k + j];
            s.signs[j * k + i] = s.signs[i * k + j];
        }
        s
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.signs[i * self.k + j]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Relabels vertices: the result's (p, q) entry is self's (order[p], order[q]).
    pub fn permuted(&self, order: &[usize]) -> Self {
        let k = self.k;
        let mut signs = vec![1; k * k];
        for p in 0..k {
            for q in 0..k {
                signs[p * k + q] = self.get(order[p], order[q]);
            }
        }
        Self { k, signs }
    }

    /// Inverse of `permuted`.
    pub fn unpermuted(&self, order: &[usize]) -> Self {
        let k = self.k;
        let mut signs = vec![1; k * k];
        for p in 0..k {
            for q in 0..k {
                signs[order[p] * k + order[q]] = self.get(p, q);
            }
        }
        Self { k, signs }
    }
}

impl fmt::Display for SignAlteration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.signs.iter().map(|&s| if s > 0 { "+1" } else { "-1" }).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Negates rows and columns in `v`; the diagonal stays +1.
pub fn sign_switch(sigma: &SignAlteration, v: &[usize]) -> Result<SignAlteration> {
    let k = sigma.k;
    if let Some(&bad) = v.iter().find(|&&i| i >= k) {
        return Err(Error::Dimension(format!("index {bad} outside a {k}-vertex alteration")));
    }
    let mut flip = vec![1i8; k];
    for &i in v {
        flip[i] = -1;
    }
    let mut out = sigma.clone();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                out.signs[i * k + j] = sigma.get(i, j) * flip[i] * flip[j];
            }
        }
    }
    Ok(out)
}

/// Exhaustive search over switchings (vertex 0 held fixed, which loses nothing).
pub fn switching_equivalent(a: &SignAlteration, b: &SignAlteration) -> Result<bool> {
    if a.k != b.k {
        return Err(Error::Dimension("alterations of different sizes".into()));
    }
    let k = a.k;
    if k > MAX_SWITCHING_VERTICES {
        return Err(Error::WorkLimit(format!("switching search on {k} vertices")));
    }
    if k <= 1 {
        return Ok(true);
    }
    for mask in 0u32..1 << (k - 1) {
        let v: Vec<usize> = (1..k).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        if sign_switch(a, &v)? == *b {
            return Ok(true);
        }
    }
    Ok(false)
}

/// adj_{S,σ}(m, n): diagonal (|R_i|(m+n) − mn)/m, off-diagonal σ/m times the base entry.
pub fn adjacency_matrix(s: &SubsetS, sigma: &SignAlteration, m: usize, n: usize) -> Result<ExactMatrix> {
    let k = s.len();
    if sigma.k != k {
        return Err(Error::Dimension(format!("alteration of size {} for |S| = {k}", sigma.k)));
    }
    let (mi, ni) = (m as i64, n as i64);
    let mut a = ExactMatrix::zeros(k, k);
    let v = s.members();
    for i in 0..k {
        for j in 0..k {
            let num = if i == j {
                v[i].size() as i64 * (mi + ni) - mi * ni
            } else {
                sigma.get(i, j) as i64 * base_entry(&v[i], &v[j], mi, ni)
            };
            a.set(i, j, Rational::from((num, mi)));
        }
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Confidence {
    ProvedCase,
    VerifiedForm,
    UnverifiedSigns,
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::ProvedCase => "PROVED_CASE",
            Confidence::VerifiedForm => "VERIFIED_FORM",
            Confidence::UnverifiedSigns => "UNVERIFIED_SIGNS",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjecturedCoefficient {
    pub value: Rational,
    pub confidence: Confidence,
}

/// Verified sign alterations keyed by link-structure fingerprint; each is
/// stored in the fingerprint's canonical vertex order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignStore {
    entries: HashMap<String, SignAlteration>,
}

const SHIPPED_SIGNS: &str = include_str!("../data/signs.txt");

impl SignStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// The store shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(SHIPPED_SIGNS).expect("shipped sign store parses")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, fingerprint: &str) -> Option<&SignAlteration> {
        self.entries.get(fingerprint)
    }

    pub fn insert(&mut self, fingerprint: String, sigma: SignAlteration) {
        self.entries.insert(fingerprint, sigma);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &SignAlteration)> {
        self.entries.iter()
    }

    /// Sign alteration for a connected subset, in the subset's own vertex order.
    pub fn lookup(&self, component: &SubsetS) -> Option<SignAlteration> {
        let g = LinkGraph::new(component);
        let (fp, order) = g.fingerprint().ok()?;
        self.entries.get(&fp).map(|s| s.unpermuted(&order))
    }

    /// Records σ (given in the subset's vertex order) under its fingerprint.
    pub fn record(&mut self, component: &SubsetS, sigma: &SignAlteration) -> Result<String> {
        let (fp, order) = LinkGraph::new(component).fingerprint()?;
        self.entries.insert(fp.clone(), sigma.permuted(&order));
        Ok(fp)
    }

    /// One record per line: fingerprint, then k² signs row-major. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let fp = fields.next().unwrap().to_string();
            let k: usize = fp
                .split(':')
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("line {}: bad fingerprint {fp:?}", lineno + 1)))?;
            let signs = fields
                .map(|t| match t {
                    "+1" | "1" => Ok(1),
                    "-1" => Ok(-1),
                    _ => Err(Error::Parse(format!("line {}: bad sign {t:?}", lineno + 1))),
                })
                .collect::<Result<Vec<i8>>>()?;
            entries.insert(fp, SignAlteration::new(k, signs)?);
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_string())?)
    }
}

impl fmt::Display for SignStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&String> = self.entries.keys().collect();
        keys.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        for k in keys {
            writeln!(f, "{k} {}", self.entries[k])?;
        }
        Ok(())
    }
}

/// det adj_{T,σ}(m, n) for one connected component T.
pub fn component_value(t: &SubsetS, sigma: &SignAlteration, m: usize, n: usize) -> Result<Rational> {
    adjacency_matrix(t, sigma, m, n)?.det()
}

/// Product over the components of S of det adj_{T,σ(T)}(m, n).
pub fn conjectured_coefficient(
    s: &SubsetS,
    m: usize,
    n: usize,
    store: &SignStore,
) -> Result<ConjecturedCoefficient> {
    if !s.fits(m, n) {
        return Err(Error::Dimension(format!("{s} is not inside D({m}, {n})")));
    }
    if s.is_empty() {
        return Ok(ConjecturedCoefficient { value: Rational::from(1), confidence: Confidence::ProvedCase });
    }
    let g = LinkGraph::new(s);
    let mut value = Rational::from(1);
    let mut confidence = Confidence::VerifiedForm;
    for t in g.component_subsets() {
        let sigma = if t.len() >= 3 {
            match store.lookup(&t) {
                Some(sigma) => sigma,
                None => {
                    confidence = Confidence::UnverifiedSigns;
                    SignAlteration::identity(t.len())
                }
            }
        } else {
            SignAlteration::identity(t.len())
        };
        value *= component_value(&t, &sigma, m, n)?;
    }
    Ok(ConjecturedCoefficient { value, confidence })
}

/// Every switching class of sign patterns on the edges of a connected
/// subset, one representative each (the non-tree edges of a spanning tree
/// enumerate the classes).
pub fn sign_classes(t: &SubsetS) -> Result<Vec<SignAlteration>> {
    let g = LinkGraph::new(t);
    let k = g.len();
    let mut in_tree = vec![false; k];
    let mut tree_edges = Vec::new();
    if k > 0 {
        in_tree[0] = true;
        let mut frontier = vec![0];
        while let Some(v) = frontier.pop() {
            for w in 0..k {
                if !in_tree[w] && g.label(v, w) != LinkLabel::None {
                    in_tree[w] = true;
                    tree_edges.push((v.min(w), v.max(w)));
                    frontier.push(w);
                }
            }
        }
    }
    let free: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(i, j, _)| (i, j))
        .filter(|e| !tree_edges.contains(e))
        .collect();
    if free.len() > 20 {
        return Err(Error::WorkLimit(format!("{} independent cycles", free.len())));
    }
    Ok((0u32..1 << free.len())
        .map(|mask| {
            let neg: Vec<(usize, usize)> =
                free.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            SignAlteration::with_negated(k, &neg)
        })
        .collect())
}

/// A known coefficient c_S(m, n), used as evidence when fitting signs.
#[derive(Clone, Debug)]
pub struct SignEvidence {
    pub subset: SubsetS,
    pub m: usize,
    pub n: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, Default)]
pub struct SignDerivation {
    pub store: SignStore,
    /// Fingerprint, number of evidence items, number of surviving switching classes.
    pub fitted: Vec<(String, usize, usize)>,
    /// Fingerprints for which no switching class fits every item.
    pub contradictions: Vec<String>,
    /// Fingerprints with more than `MAX_FIT_CYCLES` independent cycles.
    pub too_large: Vec<String>,
    /// Evidence items left with two or more unknown components, or zero elsewhere.
    pub unused: usize,
}

/// Exhaustive sign fitting tries 2^cycles switching classes.
pub const MAX_FIT_CYCLES: usize = 12;

/// Number of independent cycles of a connected subset's link graph.
pub fn cycle_rank(t: &SubsetS) -> usize {
    let g = LinkGraph::new(t);
    (g.edges().len() + 1).saturating_sub(g.len())
}

struct Unknown {
    component: SubsetS,
    rest: Rational,
    target: Rational,
    m: usize,
    n: usize,
}

/// Fits a sign alteration for each link structure with three or more
/// vertices, in rounds: an item is usable once all but one of its large
/// components are on file and the remaining factor is nonzero.
pub fn derive_signs(evidence: &[SignEvidence], seed: SignStore) -> Result<SignDerivation> {
    let mut out = SignDerivation { store: seed, ..Default::default() };
    let mut settled: Vec<bool> = vec![false; evidence.len()];
    loop {
        let mut groups: HashMap<String, Vec<Unknown>> = HashMap::new();
        let mut order: Vec<String> = Vec::new();
        for (idx, e) in evidence.iter().enumerate() {
            if settled[idx] || e.subset.is_empty() {
                settled[idx] = true;
                continue;
            }
            let mut rest = Rational::from(1);
            let mut open: Vec<SubsetS> = Vec::new();
            for t in LinkGraph::new(&e.subset).component_subsets() {
                let sigma = if t.len() >= 3 { out.store.lookup(&t) } else { Some(SignAlteration::identity(t.len())) };
                match sigma {
                    Some(sigma) => rest *= component_value(&t, &sigma, e.m, e.n)?,
                    None => open.push(t),
                }
            }
            if open.len() != 1 || rest == 0 {
                continue;
            }
            let component = open.pop().unwrap();
            if component.len() > MAX_FINGERPRINT_VERTICES {
                let label = format!("{}:?", component.len());
                if !out.too_large.contains(&label) {
                    out.too_large.push(label);
                }
                continue;
            }
            let (fp, _) = LinkGraph::new(&component).fingerprint()?;
            if out.contradictions.contains(&fp) || out.too_large.contains(&fp) {
                continue;
            }
            if cycle_rank(&component) > MAX_FIT_CYCLES {
                out.too_large.push(fp);
                continue;
            }
            if !groups.contains_key(&fp) {
                order.push(fp.clone());
            }
            settled[idx] = true;
            groups.entry(fp).or_default().push(Unknown {
                component,
                rest,
                target: e.value.clone(),
                m: e.m,
                n: e.n,
            });
        }
        if groups.is_empty() {
            break;
        }
        for fp in order {
            let items = &groups[&fp];
            let first = &items[0].component;
            let (_, first_order) = LinkGraph::new(first).fingerprint()?;
            let mut survivors = Vec::new();
            for sigma in sign_classes(first)? {
                let canonical = sigma.permuted(&first_order);
                let mut ok = true;
                for u in items {
                    let (_, o) = LinkGraph::new(&u.component).fingerprint()?;
                    let v = component_value(&u.component, &canonical.unpermuted(&o), u.m, u.n)?;
                    if v * &u.rest != u.target {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    survivors.push(canonical);
                }
            }
            match survivors.first() {
                Some(sigma) => {
                    out.store.insert(fp.clone(), sigma.clone());
                    out.fitted.push((fp, items.len(), survivors.len()));
                }
                None => out.contradictions.push(fp),
            }
        }
    }
    out.unused = settled.iter().filter(|&&s| !s).count();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::{minor_basis, spec};
    use proptest::prelude::*;

    fn set(specs: &[MinorSpec]) -> SubsetS {
        SubsetS::new(specs.to_vec())
    }

    fn value(s: &SubsetS, m: usize, n: usize) -> Rational {
        conjectured_coefficient(s, m, n, &SignStore::new()).unwrap().value
    }

    #[test]
    fn link_type_examples() {
        let e = MinorSpec::empty();
        assert_eq!(link_type(&e, &spec(&[2], &[2])).unwrap(), LinkLabel::Type1);
        assert_eq!(link_type(&spec(&[2], &[2]), &spec(&[2], &[3])).unwrap(), LinkLabel::Type2Row);
        assert_eq!(link_type(&spec(&[2], &[2]), &spec(&[3], &[2])).unwrap(), LinkLabel::Type2Col);
        assert_eq!(link_type(&spec(&[2], &[2]), &spec(&[2, 3, 4], &[2, 3, 4])).unwrap(), LinkLabel::None);
        assert_eq!(link_type(&spec(&[2], &[2]), &spec(&[2, 3], &[2, 3])).unwrap(), LinkLabel::Type1);
        assert_eq!(link_type(&spec(&[2], &[2]), &spec(&[3, 4], &[2, 3])).unwrap(), LinkLabel::None);
        assert_eq!(link_type(&spec(&[2], &[2]), &spec(&[3], &[3])).unwrap(), LinkLabel::None);
        assert!(link_type(&e, &e).is_err());
    }

    #[test]
    fn components_examples() {
        let s = set(&[MinorSpec::empty(), spec(&[2], &[2]), spec(&[2, 3], &[3, 4]), spec(&[2, 4], &[3, 4])]);
        let g = link_graph(&s);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(link_graph(&set(&[spec(&[2], &[2])])).components().len(), 1);
        let path = set(&[spec(&[2], &[2]), spec(&[3], &[3]), spec(&[2, 3], &[2, 3])]);
        assert_eq!(link_graph(&path).components(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn adjacency_examples() {
        let path = set(&[spec(&[2], &[2]), spec(&[3], &[3]), spec(&[2, 3], &[2, 3])]);
        let id = SignAlteration::identity(3);
        assert_eq!(adjacency_matrix(&path, &id, 3, 3).unwrap().det().unwrap(), -1);

        let s = set(&[MinorSpec::empty(), spec(&[2], &[2]), spec(&[3], &[3])]);
        let a = adjacency_matrix(&s, &id, 3, 3).unwrap();
        let expect = ExactMatrix::from_ints(&[[-9, 3, 3], [-3, -3, 0], [-3, 0, -3]]).scaled(&Rational::from((1, 3)));
        assert_eq!(a, expect);
        assert_eq!(a.det().unwrap(), -5);

        let tri = set(&[spec(&[2, 3], &[2, 3]), spec(&[2, 3], &[2, 4]), spec(&[2, 3], &[2, 5])]);
        let plain = adjacency_matrix(&tri, &id, 3, 5).unwrap().det().unwrap();
        assert_ne!(plain, Rational::from((28, 27)));
        let flipped = SignAlteration::with_negated(3, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(adjacency_matrix(&tri, &flipped, 3, 5).unwrap().det().unwrap(), Rational::from((28, 27)));
        assert!(adjacency_matrix(&tri, &SignAlteration::identity(2), 3, 5).is_err());
    }

    #[test]
    fn small_subset_values() {
        for (m, n) in [(2, 2), (3, 4), (5, 3)] {
            assert_eq!(value(&set(&[MinorSpec::empty()]), m, n), -(n as i64));
        }
        assert_eq!(value(&set(&[MinorSpec::empty(), spec(&[2], &[2])]), 2, 2), 1);
        assert_eq!(value(&set(&[spec(&[2], &[2]), spec(&[2], &[3])]), 2, 3), Rational::from((-3, 4)));
        assert_eq!(value(&SubsetS::empty(), 4, 4), 1);
    }

    #[test]
    fn size_two_closed_forms() {
        let e = MinorSpec::empty();
        for m in 2..=6i64 {
            for n in 2..=6i64 {
                let (mu, nu) = (m as usize, n as usize);
                let m2 = Rational::from(m * m);
                let check = |s: SubsetS, want: i64| {
                    if s.fits(mu, nu) {
                        assert_eq!(value(&s, mu, nu) * &m2, want, "{s} at {m}x{n}");
                    }
                };
                check(set(&[e.clone(), spec(&[2], &[2])]), (m - m * n) * (n - m * n));
                check(set(&[spec(&[2], &[2]), spec(&[2], &[3])]), (n - m * n) * (2 * m + n - m * n));
                check(
                    set(&[spec(&[2], &[2]), spec(&[2, 3], &[2, 3])]),
                    (m + 2 * n - m * n) * (2 * m + n - m * n),
                );
                check(
                    set(&[spec(&[2, 3], &[2, 3]), spec(&[2, 4], &[2, 3])]),
                    (2 * m + n - m * n) * (2 * m + 3 * n - m * n),
                );
                check(
                    set(&[spec(&[2], &[2]), spec(&[2, 3, 4], &[2, 3, 4])]),
                    (m + n - m * n) * (3 * m + 3 * n - m * n),
                );
            }
        }
    }

    #[test]
    fn fingerprints_respect_isomorphism() {
        let a = set(&[spec(&[2], &[2]), spec(&[2], &[3]), spec(&[2], &[4])]);
        let b = set(&[spec(&[2, 3], &[2, 3]), spec(&[2, 3], &[2, 4]), spec(&[2, 3], &[2, 5])]);
        let fa = link_graph(&a).fingerprint().unwrap().0;
        assert_eq!(fa, link_graph(&b).fingerprint().unwrap().0);
        assert_eq!(fa, "3:RRR:S");
        // same labels, but the three links have different common columns
        let k = set(&[spec(&[2, 3], &[2, 3]), spec(&[2, 3], &[2, 4]), spec(&[2, 3], &[3, 4])]);
        assert_eq!(link_graph(&k).fingerprint().unwrap().0, "3:RRR:K");
        let c = set(&[spec(&[2], &[2]), spec(&[3], &[2]), spec(&[4], &[2])]);
        assert_ne!(fa, link_graph(&c).fingerprint().unwrap().0);
        // orientation matters: a path small-large-small vs large-small-large
        let p1 = set(&[MinorSpec::empty(), spec(&[2], &[2]), spec(&[3], &[3])]);
        let p2 = set(&[spec(&[2], &[2]), spec(&[3], &[3]), spec(&[2, 3], &[2, 3])]);
        assert_ne!(link_graph(&p1).fingerprint().unwrap().0, link_graph(&p2).fingerprint().unwrap().0);
    }

    #[test]
    fn fingerprint_of_large_symmetric_graph_is_fast() {
        let s = SubsetS::new((2..=13).map(|c| spec(&[2], &[c])).collect());
        let (fp, order) = link_graph(&s).fingerprint().unwrap();
        assert_eq!(order.len(), 12);
        assert_eq!(fp, format!("12:{}:{}", "R".repeat(66), "S".repeat(220)));
    }

    #[test]
    fn store_lookup_transports_signs() {
        let tri = set(&[spec(&[2, 3], &[2, 3]), spec(&[2, 3], &[2, 4]), spec(&[2, 3], &[2, 5])]);
        let flipped = SignAlteration::with_negated(3, &[(0, 1), (0, 2), (1, 2)]);
        let mut store = SignStore::new();
        store.record(&tri, &flipped).unwrap();
        let other = set(&[spec(&[2], &[2]), spec(&[2], &[3]), spec(&[2], &[4])]);
        let got = conjectured_coefficient(&other, 2, 5, &store).unwrap();
        assert_eq!(got.confidence, Confidence::VerifiedForm);
        let text = store.to_string();
        assert_eq!(SignStore::parse(&text).unwrap(), store);
        assert_eq!(text.trim(), "3:RRR:S +1 -1 -1 -1 +1 -1 -1 -1 +1");
    }

    #[test]
    fn unverified_signs_flagged() {
        let tri = set(&[spec(&[2, 3], &[2, 3]), spec(&[2, 3], &[2, 4]), spec(&[2, 3], &[2, 5])]);
        let c = conjectured_coefficient(&tri, 3, 5, &SignStore::new()).unwrap();
        assert_eq!(c.confidence, Confidence::UnverifiedSigns);
        let pair = set(&[MinorSpec::empty(), spec(&[2], &[2])]);
        assert_eq!(conjectured_coefficient(&pair, 3, 3, &SignStore::new()).unwrap().confidence, Confidence::VerifiedForm);
    }

    #[test]
    fn switching_examples() {
        let s = SignAlteration::with_negated(3, &[(0, 1)]);
        assert_eq!(sign_switch(&s, &[]).unwrap(), s);
        let all_minus = SignAlteration::with_negated(3, &[(0, 1), (0, 2), (1, 2)]);
        let all_plus = SignAlteration::identity(3);
        // triangle sign product differs (−1 vs +1): not equivalent
        assert!(!switching_equivalent(&all_minus, &all_plus).unwrap());
        let by_hand = sign_switch(&all_plus, &[1]).unwrap();
        assert!(switching_equivalent(&by_hand, &all_plus).unwrap());
        assert!(matches!(
            switching_equivalent(&SignAlteration::identity(21), &SignAlteration::identity(21)),
            Err(Error::WorkLimit(_))
        ));
    }

    #[test]
    fn sign_classes_of_a_triangle() {
        let tri = set(&[spec(&[2], &[2]), spec(&[2], &[3]), spec(&[2], &[4])]);
        let classes = sign_classes(&tri).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(!switching_equivalent(&classes[0], &classes[1]).unwrap());
    }

    fn arb_subset() -> impl Strategy<Value = SubsetS> {
        let b = minor_basis(4, 4);
        prop::collection::vec(0usize..20, 1..7).prop_map(move |idx| b.subset(&idx))
    }

    proptest! {
        #[test]
        fn switching_preserves_determinant(
            s in arb_subset(),
            bits in prop::collection::vec(any::<bool>(), 36),
            vmask in 0u32..64,
        ) {
            let k = s.len();
            let neg: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .filter(|&(i, j)| bits[i * 6 + j])
                .collect();
            let sigma = SignAlteration::with_negated(k, &neg);
            let v: Vec<usize> = (0..k).filter(|i| vmask >> i & 1 == 1).collect();
            let switched = sign_switch(&sigma, &v).unwrap();
            prop_assert!(switching_equivalent(&sigma, &switched).unwrap());
            prop_assert_eq!(
                adjacency_matrix(&s, &switched, 4, 5).unwrap().det().unwrap(),
                adjacency_matrix(&s, &sigma, 4, 5).unwrap().det().unwrap()
            );
        }

        #[test]
        fn link_type_is_symmetric(a in 0usize..20, b in 0usize..20) {
            prop_assume!(a != b);
            let basis = minor_basis(4, 4);
            let (p, q) = (basis.spec(a), basis.spec(b));
            prop_assert_eq!(link_type(p, q).unwrap(), link_type(q, p).unwrap());
        }

        #[test]
        fn value_factors_over_components(s in arb_subset()) {
            let whole = value(&s, 4, 4);
            let g = link_graph(&s);
            let parts: Rational = g
                .component_subsets()
                .iter()
                .map(|t| value(t, 4, 4))
                .product();
            prop_assert_eq!(whole.clone(), parts);
            // with identity signs the whole-S determinant is the same product
            let full = adjacency_matrix(&s, &SignAlteration::identity(s.len()), 4, 4).unwrap().det().unwrap();
            prop_assert_eq!(full, whole);
        }
    }
}
