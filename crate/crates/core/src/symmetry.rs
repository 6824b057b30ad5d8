//! The action of row/column permutations (and transposition for square
//! ambients) on subsets of D(m, n): canonical forms, orbits, equivalence
//! classes, class sums and the complement duality.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use rug::Rational;

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::minors::{MinorBasis, MinorCache, MinorSpec, SubsetS};

/// Default cap on the number of subsets visited by class enumeration.
pub const DEFAULT_WORK_LIMIT: u128 = 40_000_000;

fn map_labels(labels: &[usize], swap: Option<usize>) -> Vec<usize> {
    // swaps labels l and l + 1
    let mut v: Vec<usize> = labels
        .iter()
        .map(|&x| match swap {
            Some(l) if x == l => l + 1,
            Some(l) if x == l + 1 => l,
            _ => x,
        })
        .collect();
    v.sort_unstable();
    v
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// The symmetry group acting on basis indices of D(m, n), held as
/// generators: adjacent row-label swaps, adjacent column-label swaps, and
/// transposition when m = n.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    basis: MinorBasis,
    gens: Vec<Vec<usize>>,
    tables: MaskTables,
    rank: Vec<u32>,
}

impl SymmetryGroup {
    pub fn new(m: usize, n: usize) -> Self {
        let basis = MinorBasis::new(m, n);
        let index_of = |s: MinorSpec| basis.index_of(&s).expect("image stays in the basis");
        let mut gens: Vec<Vec<usize>> = Vec::new();
        for l in 2..m {
            gens.push(
                basis.specs().iter().map(|s| index_of(MinorSpec::new(map_labels(s.rows(), Some(l)), s.cols().to_vec()).unwrap())).collect(),
            );
        }
        for l in 2..n {
            gens.push(
                basis.specs().iter().map(|s| index_of(MinorSpec::new(s.rows().to_vec(), map_labels(s.cols(), Some(l))).unwrap())).collect(),
            );
        }
        if m == n {
            gens.push(basis.specs().iter().map(|s| index_of(s.transpose())).collect());
        }
        let mut by_text: Vec<(String, usize)> =
            basis.specs().iter().enumerate().map(|(i, s)| (s.to_string(), i)).collect();
        by_text.sort();
        let mut rank = vec![0u32; basis.len()];
        for (r, (_, i)) in by_text.into_iter().enumerate() {
            rank[i] = r as u32;
        }
        let tables = MaskTables::new(basis.len(), &gens);
        Self { basis, gens, tables, rank }
    }

    pub fn basis(&self) -> &MinorBasis {
        &self.basis
    }

    pub fn m(&self) -> usize {
        self.basis.m()
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    /// Group order (m−1)!·(n−1)!, doubled when m = n.
    pub fn order(&self) -> u128 {
        let (m, n) = (self.m(), self.n());
        factorial(m - 1) * factorial(n - 1) * if m == n { 2 } else { 1 }
    }

    /// Generators as permutations of basis indices.
    pub fn generators(&self) -> &[Vec<usize>] {
        &self.gens
    }

    /// Image of a sorted index list under generator `g`, sorted.
    pub fn apply(&self, g: usize, indices: &[usize]) -> Vec<usize> {
        let p = &self.gens[g];
        let mut v: Vec<usize> = indices.iter().map(|&i| p[i]).collect();
        v.sort_unstable();
        v
    }

    /// Compares two same-size subsets by their encoded text.
    pub fn text_cmp(&self, a: &[usize], b: &[usize]) -> Ordering {
        for (x, y) in a.iter().zip(b) {
            match self.rank[*x].cmp(&self.rank[*y]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }

    /// Orbit of a bit mask, by breadth-first search over the generators.
    fn orbit_masks(&self, mask: u128) -> Vec<u128> {
        let mut seen: HashSet<u128> = HashSet::from([mask]);
        let mut out = vec![mask];
        let mut i = 0;
        while i < out.len() {
            let cur = out[i];
            i += 1;
            for g in 0..self.gens.len() {
                let img = self.tables.apply(g, cur);
                if seen.insert(img) {
                    out.push(img);
                }
            }
        }
        out
    }

    fn mask_of(&self, indices: &[usize]) -> u128 {
        indices.iter().fold(0u128, |acc, &i| acc | 1 << i)
    }

    fn least(&self, orbit: &[u128]) -> Vec<usize> {
        let mut best = mask_indices(orbit[0]);
        for &o in &orbit[1..] {
            let idx = mask_indices(o);
            if self.text_cmp(&idx, &best).is_lt() {
                best = idx;
            }
        }
        best
    }

    pub fn canonical_indices(&self, indices: &[usize]) -> Vec<usize> {
        self.least(&self.orbit_masks(self.mask_of(indices)))
    }

    /// Distinct images of `indices`, in text order.
    pub fn orbit_indices(&self, indices: &[usize]) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self.orbit_masks(self.mask_of(indices)).into_iter().map(mask_indices).collect();
        v.sort_by(|a, b| self.text_cmp(a, b));
        v
    }

    pub fn canonical_form(&self, s: &SubsetS) -> Result<SubsetS> {
        let idx = self.basis.indices(s)?;
        Ok(self.basis.subset(&self.canonical_indices(&idx)))
    }

    pub fn orbit(&self, s: &SubsetS) -> Result<Vec<SubsetS>> {
        let idx = self.basis.indices(s)?;
        Ok(self.orbit_indices(&idx).iter().map(|o| self.basis.subset(o)).collect())
    }

    pub fn class_of(&self, s: &SubsetS) -> Result<ClassRep> {
        let idx = self.basis.indices(s)?;
        let orbit = self.orbit_indices(&idx);
        Ok(ClassRep {
            rep: self.basis.subset(&orbit[0]),
            class_size: orbit.len(),
            ambient: (self.m(), self.n()),
        })
    }

    pub fn enumerate_classes(&self, k: usize) -> Result<Vec<ClassRep>> {
        self.enumerate_classes_limited(k, DEFAULT_WORK_LIMIT)
    }

    /// Every class of size-k subsets, sorted by representative text.
    ///
    /// Visits each of the C(|D|, k) subsets once; memory grows with that
    /// count when |D| > 26, so larger counts than `work_limit` are refused.
    pub fn enumerate_classes_limited(&self, k: usize, work_limit: u128) -> Result<Vec<ClassRep>> {
        let d = self.basis.len();
        if k > d {
            return Err(Error::Precondition(format!("k = {k} exceeds |D| = {d}")));
        }
        if d > 128 {
            return Err(Error::Unsupported(format!("class enumeration with |D| = {d} > 128")));
        }
        let total = binomial(d, k);
        if total > work_limit {
            return Err(Error::WorkLimit(format!(
                "{total} subsets of size {k} in D({}, {}) (limit {work_limit})",
                self.m(),
                self.n()
            )));
        }
        let mut visited = Visited::new(d);
        let mut out = Vec::new();
        for mask in Combinations::new(d, k) {
            if visited.contains(mask) {
                continue;
            }
            let images = self.orbit_masks(mask);
            for &img in &images {
                visited.insert(img);
            }
            out.push((self.least(&images), images.len()));
        }
        out.sort_by(|a, b| self.text_cmp(&a.0, &b.0));
        Ok(out
            .into_iter()
            .map(|(idx, size)| ClassRep {
                rep: self.basis.subset(&idx),
                class_size: size,
                ambient: (self.m(), self.n()),
            })
            .collect())
    }

    pub fn enumerate_all_classes(&self) -> Result<Vec<ClassRep>> {
        let mut out = Vec::new();
        for k in 0..=self.basis.len() {
            out.extend(self.enumerate_classes(k)?);
        }
        Ok(out)
    }

    /// Σ over the orbit of `rep` of M(T), using a per-matrix minor cache.
    pub fn class_sum_cached(&self, cache: &MinorCache, rep: &SubsetS) -> Result<Rational> {
        let idx = self.basis.indices(rep)?;
        let mut total = Rational::new();
        let mut flags = vec![false; self.basis.len()];
        for t in self.orbit_indices(&idx) {
            flags.iter_mut().for_each(|f| *f = false);
            for i in t {
                flags[i] = true;
            }
            total += cache.monomial_flags(&flags);
        }
        Ok(total)
    }

    pub fn class_sum(&self, a: &ExactMatrix, rep: &SubsetS) -> Result<Rational> {
        let cache = MinorCache::with_basis(a, self.basis.clone())?;
        self.class_sum_cached(&cache, rep)
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn mask_indices(mut mask: u128) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        v.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    v
}

/// Per-generator byte lookup tables for permuting bit masks.
#[derive(Clone, Debug)]
struct MaskTables {
    chunks: usize,
    tables: Vec<u128>,
}

impl MaskTables {
    fn new(d: usize, perms: &[Vec<usize>]) -> Self {
        let chunks = d.div_ceil(8);
        let mut tables = vec![0u128; perms.len() * chunks * 256];
        for (e, perm) in perms.iter().enumerate() {
            for c in 0..chunks {
                for byte in 0..256usize {
                    let mut img = 0u128;
                    for bit in 0..8 {
                        let i = c * 8 + bit;
                        if byte >> bit & 1 == 1 && i < d {
                            img |= 1u128 << perm[i];
                        }
                    }
                    tables[(e * chunks + c) * 256 + byte] = img;
                }
            }
        }
        Self { chunks, tables }
    }

    fn apply(&self, g: usize, mask: u128) -> u128 {
        let mut out = 0;
        for c in 0..self.chunks {
            let byte = (mask >> (8 * c)) as usize & 0xff;
            if byte != 0 {
                out |= self.tables[(g * self.chunks + c) * 256 + byte];
            }
        }
        out
    }
}

enum Visited {
    Bits(Vec<u64>),
    Set(HashSet<u128>),
}

impl Visited {
    fn new(d: usize) -> Self {
        if d <= 26 {
            Visited::Bits(vec![0; (1usize << d).div_ceil(64)])
        } else {
            Visited::Set(HashSet::new())
        }
    }

    fn contains(&self, mask: u128) -> bool {
        match self {
            Visited::Bits(b) => b[(mask >> 6) as usize] >> (mask & 63) & 1 == 1,
            Visited::Set(s) => s.contains(&mask),
        }
    }

    fn insert(&mut self, mask: u128) {
        match self {
            Visited::Bits(b) => b[(mask >> 6) as usize] |= 1 << (mask & 63),
            Visited::Set(s) => {
                s.insert(mask);
            }
        }
    }
}

/// k-subsets of {0..d} as bit masks, in increasing numeric order.
struct Combinations {
    next: Option<u128>,
    limit: u128,
}

impl Combinations {
    fn new(d: usize, k: usize) -> Self {
        let first = if k == 0 { 0 } else { u128::MAX >> (128 - k) };
        let limit = if d == 128 { u128::MAX } else { (1u128 << d) - 1 };
        Self { next: Some(first), limit }
    }
}

impl Iterator for Combinations {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur.checked_add(c);
            match r {
                Some(r) if r != 0 => {
                    let nxt = (((r ^ cur) >> 2) / c) | r;
                    (nxt & !self.limit == 0).then_some(nxt)
                }
                _ => None,
            }
        };
        Some(cur)
    }
}

/// A canonical class representative with its orbit size.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassRep {
    pub rep: SubsetS,
    pub class_size: usize,
    pub ambient: (usize, usize),
}

impl ClassRep {
    pub fn k(&self) -> usize {
        self.rep.len()
    }
}

impl fmt::Display for ClassRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.rep, self.class_size)
    }
}

pub fn canonical_form(s: &SubsetS, m: usize, n: usize) -> Result<SubsetS> {
    SymmetryGroup::new(m, n).canonical_form(s)
}

pub fn enumerate_classes(m: usize, n: usize, k: usize) -> Result<Vec<ClassRep>> {
    SymmetryGroup::new(m, n).enumerate_classes(k)
}

pub fn class_sum(a: &ExactMatrix, rep: &ClassRep) -> Result<Rational> {
    if rep.ambient != (a.rows(), a.cols()) {
        return Err(Error::Dimension("class ambient does not match the matrix".into()));
    }
    SymmetryGroup::new(a.rows(), a.cols()).class_sum(a, &rep.rep)
}

/// T = {(E∖R, E∖C) : (R, C) ∈ D∖S} with E = {2..n}; square ambients only.
pub fn dual_subset(s: &SubsetS, m: usize, n: usize) -> Result<SubsetS> {
    if m != n {
        return Err(Error::Unsupported(format!("duality needs a square ambient, got {m}x{n}")));
    }
    let basis = MinorBasis::new(m, n);
    basis.indices(s)?;
    let all: Vec<usize> = (2..=n).collect();
    let complement = |v: &[usize]| all.iter().copied().filter(|x| !v.contains(x)).collect::<Vec<_>>();
    Ok(SubsetS::new(
        basis
            .specs()
            .iter()
            .filter(|x| !s.contains(x))
            .map(|x| MinorSpec::new(complement(x.rows()), complement(x.cols())).unwrap())
            .collect(),
    ))
}

/// Replaces every (R, C) by (C, R); the ambient (m, n) becomes (n, m).
pub fn transpose_subset(s: &SubsetS) -> SubsetS {
    SubsetS::new(s.members().iter().map(MinorSpec::transpose).collect())
}
