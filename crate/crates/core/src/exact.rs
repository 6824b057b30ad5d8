//! Exact rational matrices, fraction-free determinants and affine solution spaces.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Rational::new(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::from(1));
        }
        m
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(m * n);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), n, "ragged rows");
            entries.extend(r.iter().map(|&v| Rational::from(v)));
        }
        Self { rows: m, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|v| v.cmp0().is_gt())
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|v| *v.denom() == 1)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Submatrix on the given (0-based) row and column indices, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { rows: rows.len(), cols: cols.len(), entries }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::new();
                for k in 0..self.cols {
                    acc += Rational::from(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::new();
                for (a, b) in self.row(i).iter().zip(x) {
                    acc += Rational::from(a * b);
                }
                acc
            })
            .collect())
    }

    pub fn scaled(&self, t: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| Rational::from(v * t)).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn scale_row(&mut self, i: usize, t: &Rational) {
        for j in 0..self.cols {
            self.entries[i * self.cols + j] *= t;
        }
    }

    pub fn det(&self) -> Result<Rational> {
        det(self)
    }
}

impl fmt::Display for ExactMatrix {
    /// Matrix-file format: header line "m n", then one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for ExactMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let mut dim = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
        };
        let m = dim("row count")?;
        let n = dim("column count")?;
        let entries = tokens
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, n, entries)
    }
}

/// Parses "p", "p/q" or a finite decimal such as "3.25".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num: Integer = digits.parse().map_err(|_| bad())?;
        let den = Integer::from(10).pow(frac.len() as u32);
        let r = Rational::from((num, den));
        return Ok(if neg { -r } else { r });
    }
    Rational::from_str(s).map_err(|_| bad())
}

/// Exact determinant by Bareiss elimination on the integer-scaled matrix.
pub fn det(a: &ExactMatrix) -> Result<Rational> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(Rational::from(1));
    }
    let mut scale = Integer::from(1);
    let mut m: Vec<Vec<Integer>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut l = Integer::from(1);
        for v in a.row(i) {
            l.lcm_mut(v.denom());
        }
        m.push(
            a.row(i)
                .iter()
                .map(|v| Integer::from(v.numer() * Integer::from(&l / v.denom())))
                .collect(),
        );
        scale *= l;
    }
    let d = bareiss(&mut m);
    Ok(Rational::from((d, scale)))
}

/// Fraction-free determinant of an integer matrix; consumes the working copy.
pub fn bareiss(m: &mut [Vec<Integer>]) -> Integer {
    let n = m.len();
    let mut sign = 1;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = Integer::from(&m[i][j] * &m[k][k]) - Integer::from(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 { -d } else { d }
}

/// All solutions of a linear system: particular + span(nullspace_basis).
///
/// The particular solution has every free variable pinned to zero; the pins
/// are listed in `pinned`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub nullspace_basis: Vec<Vec<Rational>>,
    pub pinned: Vec<(usize, Rational)>,
}

impl AffineSolution {
    pub fn nullity(&self) -> usize {
        self.nullspace_basis.len()
    }

    /// True when unknown `i` takes the same value in every solution.
    pub fn is_determined(&self, i: usize) -> bool {
        self.nullspace_basis.iter().all(|v| v[i].is_zero())
    }

    pub fn determined_count(&self) -> usize {
        (0..self.particular.len()).filter(|&i| self.is_determined(i)).count()
    }

    /// particular + Σ t_i·basis_i
    pub fn member(&self, t: &[Rational]) -> Vec<Rational> {
        let mut x = self.particular.clone();
        for (ti, v) in t.iter().zip(&self.nullspace_basis) {
            for (xj, vj) in x.iter_mut().zip(v) {
                *xj += Rational::from(ti * vj);
            }
        }
        x
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(AffineSolution),
    /// Row `row` of the reduced system reads 0 = nonzero.
    Inconsistent { row: usize },
}

/// Solves A·x = b exactly by Gauss-Jordan elimination.
///
/// Pivots are taken column by column from the first remaining row with a
/// nonzero entry, so the output is deterministic.
pub fn solve_affine(a: &ExactMatrix, b: &[Rational]) -> Result<SolveOutcome> {
    if a.rows != b.len() {
        return Err(Error::Dimension(format!(
            "{} equations but {} right-hand sides",
            a.rows,
            b.len()
        )));
    }
    let (m, n) = (a.rows, a.cols);
    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::from(1) / rows[r][c].clone();
        for v in rows[r][c..].iter_mut() {
            *v *= &inv;
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(tail.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let f = other[c].clone();
            for j in c..=n {
                if !pivot_row[j].is_zero() {
                    other[j] -= Rational::from(&f * &pivot_row[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if let Some(row) = (r..m).find(|&i| !rows[i][n].is_zero()) {
        return Ok(SolveOutcome::Inconsistent { row });
    }
    let mut particular = vec![Rational::new(); n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rows[i][n].clone();
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut nullspace_basis = Vec::new();
    let mut pinned = Vec::new();
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::new(); n];
        v[f] = Rational::from(1);
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -rows[i][f].clone();
        }
        nullspace_basis.push(v);
        pinned.push((f, Rational::new()));
    }
    Ok(SolveOutcome::Solved(AffineSolution { particular, nullspace_basis, pinned }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det(&ExactMatrix::zeros(0, 0)).unwrap(), 1);
        assert_eq!(ExactMatrix::from_ints(&[[1, 2], [3, 4]]).det().unwrap(), -2);
        let a = [vec![3, 9, 1], vec![3, 2, 9], vec![5, 3, 4]];
        assert_eq!(cofactor_det(&a), 239);
        assert_eq!(ExactMatrix::from_ints(&a).det().unwrap(), 239);
        assert!(matches!(ExactMatrix::zeros(2, 3).det(), Err(Error::Dimension(_))));
    }

    #[test]
    fn det_needs_row_swap() {
        let a = ExactMatrix::from_ints(&[[0, 1, 2], [1, 0, 3], [4, -3, 8]]);
        assert_eq!(a.det().unwrap(), cofactor_det(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]));
    }

    #[test]
    fn det_rational_entries() {
        let a = ExactMatrix::new(
            2,
            2,
            vec![
                Rational::from((1, 2)),
                Rational::from((1, 3)),
                Rational::from((1, 4)),
                Rational::from((1, 5)),
            ],
        )
        .unwrap();
        assert_eq!(a.det().unwrap(), Rational::from((1, 10)) - Rational::from((1, 12)));
    }

    #[test]
    fn solve_identity_and_underdetermined() {
        let b: Vec<Rational> = vec![Rational::from(3), Rational::from((-1, 2))];
        let SolveOutcome::Solved(s) = solve_affine(&ExactMatrix::identity(2), &b).unwrap() else {
            panic!()
        };
        assert_eq!(s.particular, b);
        assert_eq!(s.nullity(), 0);

        let a = ExactMatrix::from_ints(&[[1, 1]]);
        let SolveOutcome::Solved(s) = solve_affine(&a, &[Rational::from(2)]).unwrap() else {
            panic!()
        };
        assert_eq!(s.nullity(), 1);
        assert_eq!(s.pinned, vec![(1, Rational::new())]);
        assert_eq!(s.particular, vec![Rational::from(2), Rational::new()]);
        assert!(!s.is_determined(0));
    }

    #[test]
    fn solve_inconsistent_and_mismatch() {
        let a = ExactMatrix::from_ints(&[[1, 1], [2, 2]]);
        let out = solve_affine(&a, &[Rational::from(1), Rational::from(3)]).unwrap();
        assert!(matches!(out, SolveOutcome::Inconsistent { .. }));
        assert!(solve_affine(&a, &[Rational::from(1)]).is_err());
    }

    #[test]
    fn parse_matrix_file() {
        let m: ExactMatrix = "2 3\n1 2/3 4\n0.5 6 7\n".parse().unwrap();
        assert_eq!(*m.get(0, 1), Rational::from((2, 3)));
        assert_eq!(*m.get(1, 0), Rational::from((1, 2)));
        let again: ExactMatrix = m.to_string().parse().unwrap();
        assert_eq!(again, m);
        assert!("2 2\n1 2 3".parse::<ExactMatrix>().is_err());
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-6i64..=6, n), n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn det_matches_cofactor_oracle(m in (1usize..=5).prop_flat_map(small_matrix)) {
            prop_assert_eq!(ExactMatrix::from_ints(&m).det().unwrap(), cofactor_det(&m));
        }

        #[test]
        fn row_swap_negates(m in small_matrix(4), a in 0usize..4, b in 0usize..4) {
            prop_assume!(a != b);
            let x = ExactMatrix::from_ints(&m);
            let mut y = x.clone();
            y.swap_rows(a, b);
            prop_assert_eq!(y.det().unwrap(), -x.det().unwrap());
        }

        #[test]
        fn det_is_multiplicative(
            p in small_matrix(3),
            q in small_matrix(3),
            d in prop::collection::vec(1i64..5, 9),
        ) {
            let mut a = ExactMatrix::from_ints(&p);
            for (k, den) in d.iter().enumerate() {
                let v = Rational::from((a.get(k / 3, k % 3).numer().clone(), *den));
                a.set(k / 3, k % 3, v);
            }
            let b = ExactMatrix::from_ints(&q);
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }

        #[test]
        fn solutions_satisfy_system(
            rows in 1usize..5,
            cols in 1usize..6,
            seed in prop::collection::vec(-4i64..=4, 30),
            t in prop::collection::vec(-3i64..=3, 6),
        ) {
            let entries: Vec<Vec<i64>> = (0..rows).map(|i| seed[i * cols..(i + 1) * cols].to_vec()).collect();
            let a = ExactMatrix::from_ints(&entries);
            // b in the column space so the system is consistent
            let x0: Vec<Rational> = (0..cols).map(|j| Rational::from(seed[25 + j % 5])).collect();
            let b = a.mul_vec(&x0).unwrap();
            let SolveOutcome::Solved(s) = solve_affine(&a, &b).unwrap() else {
                return Err(TestCaseError::fail("consistent system reported inconsistent"));
            };
            let ts: Vec<Rational> = t.iter().take(s.nullity()).map(|&v| Rational::from(v)).collect();
            prop_assert_eq!(a.mul_vec(&s.member(&ts)).unwrap(), b.clone());
            for v in &s.nullspace_basis {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(|z| z.is_zero()));
            }
        }
    }
}
