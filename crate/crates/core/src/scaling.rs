//! Arbitrary-precision iterative proportional scaling: Sinkhorn limits
//! (rows to 1, columns to m/n) and Kruithof limits (arbitrary targets).

use std::fmt;

use rug::float::Round;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;

/// Guard bits between the working precision and the stopping residual.
pub const GUARD_BITS: u32 = 64;

/// Row-major matrix of floats sharing one precision.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMatrix {
    rows: usize,
    cols: usize,
    prec: u32,
    entries: Vec<Float>,
}

impl FloatMatrix {
    pub fn from_exact(a: &ExactMatrix, prec: u32) -> Self {
        Self {
            rows: a.rows(),
            cols: a.cols(),
            prec,
            entries: a.entries().iter().map(|v| Float::with_val(prec, v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn get(&self, i: usize, j: usize) -> &Float {
        &self.entries[i * self.cols + j]
    }

    fn row_sum(&self, i: usize) -> Float {
        Float::with_val(self.prec, Float::sum(self.entries[i * self.cols..(i + 1) * self.cols].iter()))
    }

    fn col_sum(&self, j: usize) -> Float {
        Float::with_val(self.prec, Float::sum((0..self.rows).map(|i| self.get(i, j))))
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, prec: self.prec, entries }
    }
}

impl fmt::Display for FloatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| decimal(self.get(i, j), digits)).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Plain (non-scientific) decimal text with `sig` significant digits.
pub fn decimal(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let (neg, digits, exp) = x.to_sign_string_exp_round(10, Some(sig.max(1)), Round::Nearest);
    let exp = exp.unwrap_or(0) as i64;
    let body = if exp <= 0 {
        format!("0.{}{}", "0".repeat((-exp) as usize), digits)
    } else if exp as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(exp as usize - digits.len()))
    } else {
        format!("{}.{}", &digits[..exp as usize], &digits[exp as usize..])
    };
    if neg { format!("-{body}") } else { body }
}

/// Positive row targets V and column targets W with equal totals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KruithofTargets {
    v: Vec<Rational>,
    w: Vec<Rational>,
}

impl KruithofTargets {
    pub fn new(v: Vec<Rational>, w: Vec<Rational>) -> Result<Self> {
        if v.iter().chain(&w).any(|t| t.cmp0().is_le()) {
            return Err(Error::Domain("targets must be positive".into()));
        }
        let sv: Rational = v.iter().sum();
        let sw: Rational = w.iter().sum();
        if sv != sw {
            return Err(Error::InconsistentTargets { rows: sv.to_string(), cols: sw.to_string() });
        }
        Ok(Self { v, w })
    }

    /// Rows to 1, columns to m/n.
    pub fn sinkhorn(m: usize, n: usize) -> Self {
        Self {
            v: vec![Rational::from(1); m],
            w: vec![Rational::from((m as u64, n as u64)); n],
        }
    }

    pub fn rows(&self) -> &[Rational] {
        &self.v
    }

    pub fn cols(&self) -> &[Rational] {
        &self.w
    }
}

#[derive(Clone, Debug)]
pub struct ScalingResult {
    pub limit: FloatMatrix,
    pub row_multipliers: Vec<Float>,
    pub col_multipliers: Vec<Float>,
    pub iterations: usize,
    pub residual: Float,
    /// Leading decimal digits confirmed by a double-precision rerun; 0 until `certified` runs.
    pub certified_digits: u32,
}

impl ScalingResult {
    pub fn top_left(&self) -> &Float {
        self.limit.get(0, 0)
    }

    pub fn prec(&self) -> u32 {
        self.limit.prec
    }
}

fn check_positive(a: &ExactMatrix) -> Result<()> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    if !a.is_positive() {
        return Err(Error::Domain("scaling needs strictly positive entries".into()));
    }
    Ok(())
}

pub fn sinkhorn_limit(a: &ExactMatrix, p: u32) -> Result<ScalingResult> {
    kruithof_limit(a, &KruithofTargets::sinkhorn(a.rows(), a.cols()), p)
}

/// Alternating row then column scaling until every row and column sum is
/// within 2^-(p-64) of its target, then on until the residual stops shrinking.
pub fn kruithof_limit(a: &ExactMatrix, t: &KruithofTargets, p: u32) -> Result<ScalingResult> {
    check_positive(a)?;
    if p < GUARD_BITS {
        return Err(Error::Precondition(format!("precision {p} below {GUARD_BITS} bits")));
    }
    let (m, n) = (a.rows(), a.cols());
    if t.v.len() != m || t.w.len() != n {
        return Err(Error::Dimension(format!(
            "{} row and {} column targets for a {m}x{n} matrix",
            t.v.len(),
            t.w.len()
        )));
    }
    let v: Vec<Float> = t.v.iter().map(|x| Float::with_val(p, x)).collect();
    let w: Vec<Float> = t.w.iter().map(|x| Float::with_val(p, x)).collect();
    let mut s = FloatMatrix::from_exact(a, p);
    let mut r = vec![Float::with_val(p, 1); m];
    let mut c = vec![Float::with_val(p, 1); n];
    let tol = Float::with_val(p, Float::i_exp(1, GUARD_BITS as i32 - p as i32));
    let cap = 10 * p as usize;
    let mut residual = Float::with_val(p, f64::INFINITY);
    let mut below: Option<Float> = None;
    for it in 1..=cap {
        for i in 0..m {
            let f = Float::with_val(p, &v[i] / &s.row_sum(i));
            for x in &mut s.entries[i * n..(i + 1) * n] {
                *x *= &f;
            }
            r[i] *= &f;
        }
        for j in 0..n {
            let f = Float::with_val(p, &w[j] / &s.col_sum(j));
            for i in 0..m {
                s.entries[i * n + j] *= &f;
            }
            c[j] *= &f;
        }
        residual = Float::with_val(p, 0);
        for (i, vi) in v.iter().enumerate() {
            let d = Float::with_val(p, &s.row_sum(i) - vi).abs();
            residual.max_mut(&d);
        }
        for (j, wj) in w.iter().enumerate() {
            let d = Float::with_val(p, &s.col_sum(j) - wj).abs();
            residual.max_mut(&d);
        }
        // below the threshold, keep going while the residual still shrinks
        let polished = it == cap
            || match &below {
                Some(prev) => residual.is_zero() || Float::with_val(p, &residual * 16u32) > Float::with_val(p, prev * 15u32),
                None => residual.is_zero(),
            };
        if residual < tol && !polished {
            below = Some(residual.clone());
        }
        if residual < tol && polished {
            return Ok(ScalingResult {
                limit: s,
                row_multipliers: r,
                col_multipliers: c,
                iterations: it,
                residual,
                certified_digits: 0,
            });
        }
    }
    Err(Error::Convergence { iterations: cap, residual: residual.to_string_radix(10, Some(6)) })
}

/// Leading decimal digits on which x and y agree, capped at the precision of `x`.
pub fn agreeing_digits(x: &Float, y: &Float) -> u32 {
    let cap = (x.prec() as f64 * std::f64::consts::LOG10_2).floor() as u32;
    let diff = Float::with_val(y.prec(), y - x).abs();
    if diff.is_zero() {
        return cap;
    }
    let scale = Float::with_val(y.prec(), y.abs_ref());
    if scale.is_zero() {
        return 0;
    }
    let rel = (diff / scale).log10().to_f64();
    ((-rel).floor().max(0.0) as u32).min(cap)
}

/// Runs at p and 2p bits; returns the p-bit result with the minimum number
/// of agreeing leading digits over all entries.
pub fn certified(a: &ExactMatrix, p: u32) -> Result<ScalingResult> {
    certified_kruithof(a, &KruithofTargets::sinkhorn(a.rows(), a.cols()), p)
}

pub fn certified_kruithof(a: &ExactMatrix, t: &KruithofTargets, p: u32) -> Result<ScalingResult> {
    let mut lo = kruithof_limit(a, t, p)?;
    let hi = kruithof_limit(a, t, 2 * p)?;
    lo.certified_digits = lo
        .limit
        .entries
        .iter()
        .zip(&hi.limit.entries)
        .map(|(x, y)| agreeing_digits(x, y))
        .min()
        .unwrap_or(0);
    Ok(lo)
}
