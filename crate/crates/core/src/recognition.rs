//! PSLQ integer-relation detection and minimal-polynomial recognition of
//! high-precision reals.

use rug::ops::Pow;
use rug::{Assign, Float, Integer};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Bits of agreement sacrificed to rounding in every relation test.
pub const DETECTION_GUARD_BITS: i64 = 64;
/// Default iteration budget for one PSLQ run.
pub const DEFAULT_MAX_ITER: usize = 5_000_000;

/// Largest coefficient bit length a relation among `n` numbers may have and
/// still be distinguishable from noise at precision `p`.
pub fn credible_bits(n: usize, p: u32) -> f64 {
    0.9 * (p as f64 - DETECTION_GUARD_BITS as f64).max(0.0) / n.max(2) as f64
}

/// 2^credible_bits(n, p), the default relation bound.
pub fn credible_bound(n: usize, p: u32) -> Integer {
    let bits = credible_bits(n, p).floor().max(1.0) as u32;
    Integer::from(1) << bits
}

/// Precision heuristic: 1.2·(d + 3)·coefficient bits.
pub fn required_precision(d: usize, coeff_bits: u32) -> u32 {
    (1.2 * (d + 3) as f64 * coeff_bits as f64).ceil() as u32
}

/// Default working precision for a target degree.
pub fn default_precision(d: usize) -> u32 {
    match d {
        0..=6 => 512,
        7..=15 => 1024,
        _ => 4096,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PslqStop {
    Found,
    /// Every relation has norm above the requested bound.
    BoundExceeded,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct PslqReport {
    pub relation: Option<Vec<Integer>>,
    pub stop: PslqStop,
    pub iterations: usize,
    /// log2 of the proven lower bound on the norm of any relation.
    pub norm_bound_bits: f64,
}

fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mant, exp) = x.to_f64_exp();
    exp as f64 + mant.abs().log2()
}

struct Pslq {
    n: usize,
    p: u32,
    y: Vec<Float>,
    h: Vec<Vec<Float>>,
    /// Columns of B.
    b: Vec<Vec<Integer>>,
    tmp: Float,
}

impl Pslq {
    fn new(xs: &[Float], p: u32) -> Self {
        let n = xs.len();
        let mut s = vec![Float::new(p); n];
        let mut acc = Float::with_val(p, 0);
        for j in (0..n).rev() {
            acc += Float::with_val(p, xs[j].square_ref());
            s[j] = Float::with_val(p, acc.sqrt_ref());
        }
        let t = Float::with_val(p, 1) / &s[0];
        let y: Vec<Float> = xs.iter().map(|v| Float::with_val(p, v * &t)).collect();
        for v in s.iter_mut() {
            *v *= &t;
        }
        let mut h = vec![vec![Float::with_val(p, 0); n - 1]; n];
        for i in 0..n {
            for j in 0..(n - 1).min(i + 1) {
                if i == j {
                    h[i][j] = Float::with_val(p, &s[j + 1] / &s[j]);
                } else {
                    let den = Float::with_val(p, &s[j] * &s[j + 1]);
                    h[i][j] = -Float::with_val(p, &y[i] * &y[j]) / den;
                }
            }
        }
        let b = (0..n).map(|j| (0..n).map(|k| Integer::from((j == k) as i32)).collect()).collect();
        let mut me = Self { n, p, y, h, b, tmp: Float::new(p) };
        for i in 1..n {
            for j in (0..i).rev() {
                me.reduce(i, j);
            }
        }
        me
    }

    /// Subtracts round(H_ij / H_jj) times row j from row i (and the matching
    /// column operation on B).
    fn reduce(&mut self, i: usize, j: usize) {
        let (a, ea) = self.h[i][j].to_f64_exp();
        let (d, ed) = self.h[j][j].to_f64_exp();
        if a == 0.0 || d == 0.0 {
            return;
        }
        // cheap screen: |H_ij / H_jj| < 1/2 means the quotient rounds to 0
        let e = ea - ed;
        if e < -1 || (e <= 1 && (a / d * 2f64.powi(e)).abs() < 0.49) {
            return;
        }
        let q = Float::with_val(self.p, &self.h[i][j] / &self.h[j][j]).round();
        if q.is_zero() {
            return;
        }
        let t = q.to_integer().expect("finite quotient");
        let (upper, lower) = self.h.split_at_mut(i);
        let (hj, hi) = (&upper[j], &mut lower[0]);
        if let Some(ts) = t.to_i64() {
            for k in 0..=j {
                self.tmp.assign(&hj[k] * ts);
                hi[k] -= &self.tmp;
            }
            self.tmp.assign(&self.y[i] * ts);
            self.y[j] += &self.tmp;
            let (bi, bj) = pair_mut(&mut self.b, i, j);
            for (x, z) in bj.iter_mut().zip(bi.iter()) {
                *x += Integer::from(z * ts);
            }
        } else {
            for k in 0..=j {
                self.tmp.assign(&hj[k] * &t);
                hi[k] -= &self.tmp;
            }
            self.tmp.assign(&self.y[i] * &t);
            self.y[j] += &self.tmp;
            let (bi, bj) = pair_mut(&mut self.b, i, j);
            for (x, z) in bj.iter_mut().zip(bi.iter()) {
                *x += Integer::from(z * &t);
            }
        }
    }

    /// One PSLQ iteration.
    fn step(&mut self, log_gamma: f64) {
        let n = self.n;
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for i in 0..n - 1 {
            let v = log2_abs(&self.h[i][i]) + i as f64 * log_gamma;
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        let m = best;
        self.y.swap(m, m + 1);
        self.h.swap(m, m + 1);
        self.b.swap(m, m + 1);
        if m + 1 < n - 1 {
            let p = self.p;
            let t0 = Float::with_val(p, self.h[m][m].hypot_ref(&self.h[m][m + 1]));
            if !t0.is_zero() {
                let t1 = Float::with_val(p, &self.h[m][m] / &t0);
                let t2 = Float::with_val(p, &self.h[m][m + 1] / &t0);
                for i in m..n {
                    let t3 = self.h[i][m].clone();
                    let t4 = self.h[i][m + 1].clone();
                    self.h[i][m] = Float::with_val(p, &t1 * &t3) + Float::with_val(p, &t2 * &t4);
                    self.h[i][m + 1] = Float::with_val(p, &t1 * &t4) - Float::with_val(p, &t2 * &t3);
                }
            }
        }
        for i in m + 1..n {
            for j in (0..i.min(m + 2)).rev() {
                self.reduce(i, j);
            }
        }
    }

    fn max_diag_bits(&self) -> f64 {
        (0..self.n - 1).map(|j| log2_abs(&self.h[j][j])).fold(f64::NEG_INFINITY, f64::max)
    }

    fn column_norm(&self, j: usize) -> Float {
        let mut acc = Integer::new();
        for v in &self.b[j] {
            acc += v.square_ref();
        }
        Float::with_val(self.p, &acc).sqrt()
    }
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&a[i], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&b[0], &mut a[j])
    }
}

/// |Σ aᵢxᵢ| < 2^(64−p)·‖a‖₂·‖x‖₂ evaluated at the precision of `xs`.
pub fn relation_holds(xs: &[Float], a: &[Integer]) -> bool {
    let p = xs.iter().map(|x| x.prec()).min().unwrap_or(64);
    let mut sum = Float::with_val(p, 0);
    let mut xn = Float::with_val(p, 0);
    let mut an = Integer::new();
    for (x, c) in xs.iter().zip(a) {
        sum += Float::with_val(p, x * c);
        xn += Float::with_val(p, x.square_ref());
        an += c.square_ref();
    }
    let rhs = Float::with_val(p, &an).sqrt() * xn.sqrt() * Float::with_val(p, Float::i_exp(1, DETECTION_GUARD_BITS as i32 - p as i32));
    sum.abs() < rhs
}

/// PSLQ with γ = 2/√3.
pub fn pslq_report(xs: &[Float], bound: &Integer, max_iter: usize) -> Result<PslqReport> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::Precondition("PSLQ needs at least two numbers".into()));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("PSLQ input is not finite".into()));
    }
    if xs.iter().all(|x| x.is_zero()) {
        return Err(Error::DegenerateInput("PSLQ on the zero vector".into()));
    }
    let p = xs.iter().map(|x| x.prec()).min().unwrap();
    let bound_bits = bound.significant_bits().max(1) as f64;
    if bound.cmp0().is_le() {
        return Err(Error::Precondition("relation bound must be positive".into()));
    }
    if bound_bits > credible_bits(n, p) + 1.0 {
        return Err(Error::InsufficientPrecision(format!(
            "{p} bits cannot separate relations of {bound_bits} bits among {n} numbers"
        )));
    }
    if let Some(i) = xs.iter().position(|x| x.is_zero()) {
        let mut e = vec![Integer::new(); n];
        e[i] = Integer::from(1);
        return Ok(PslqReport { relation: Some(e), stop: PslqStop::Found, iterations: 0, norm_bound_bits: 0.0 });
    }
    let log_gamma = 0.5 * (4.0f64 / 3.0).log2();
    let prefilter = DETECTION_GUARD_BITS - p as i64 + bound_bits as i64 + (n as f64).log2().ceil() as i64 + 2;
    let threshold = Float::with_val(p, Float::i_exp(1, DETECTION_GUARD_BITS as i32 - p as i32));
    let mut st = Pslq::new(xs, p);
    let mut norm_bound_bits = 0.0;
    for it in 1..=max_iter {
        st.step(log_gamma);
        for j in 0..n {
            let small = match st.y[j].get_exp() {
                None => true,
                Some(e) => (e as i64) <= prefilter,
            };
            if !small {
                continue;
            }
            let nb = st.column_norm(j);
            if Float::with_val(p, st.y[j].abs_ref()) < Float::with_val(p, &threshold * &nb) {
                let rel = st.b[j].clone();
                if !relation_holds(xs, &rel) {
                    continue;
                }
                let within = rel.iter().all(|c| c.cmp_abs(bound).is_le());
                return Ok(PslqReport {
                    relation: within.then_some(rel),
                    stop: if within { PslqStop::Found } else { PslqStop::BoundExceeded },
                    iterations: it,
                    norm_bound_bits,
                });
            }
        }
        norm_bound_bits = -st.max_diag_bits();
        if norm_bound_bits > bound_bits {
            return Ok(PslqReport { relation: None, stop: PslqStop::BoundExceeded, iterations: it, norm_bound_bits });
        }
    }
    Ok(PslqReport { relation: None, stop: PslqStop::IterationLimit, iterations: max_iter, norm_bound_bits })
}

/// Integers a, not all zero, |aᵢ| ≤ bound, with Σ aᵢxᵢ ≈ 0; None when no
/// such relation was found.
pub fn pslq(xs: &[Float], bound: &Integer, max_iter: usize) -> Result<Option<Vec<Integer>>> {
    Ok(pslq_report(xs, bound, max_iter)?.relation)
}

fn powers(x: &Float, d: usize) -> Vec<Float> {
    let p = x.prec();
    let mut out = Vec::with_capacity(d + 1);
    let mut acc = Float::with_val(p, 1);
    for _ in 0..=d {
        out.push(acc.clone());
        acc *= x;
    }
    out
}

/// Coefficient bound for any integer factor of `q` (Mignotte-style).
fn factor_bound(q: &IntPolynomial) -> Integer {
    let deg = q.degree().unwrap_or(0) as u32;
    let norm = Float::with_val(64, q.norm2_squared()).sqrt().ceil();
    (norm.to_integer().unwrap() + 1u32) << deg
}

#[derive(Clone, Debug)]
pub struct RecognitionOptions {
    /// Extra degrees above the target used for the first relation search.
    pub extra_degree: usize,
    pub check_stability: bool,
    pub max_iter: usize,
}

impl Default for RecognitionOptions {
    fn default() -> Self {
        Self { extra_degree: 2, check_stability: true, max_iter: DEFAULT_MAX_ITER }
    }
}

#[derive(Clone, Debug)]
pub struct RecognitionResult {
    /// Primitive, positive leading coefficient.
    pub poly: IntPolynomial,
    pub degree: usize,
    pub residual: Float,
    /// Same polynomial recovered from the first half of the bits.
    pub stable: bool,
    /// Actual degree is below the requested target.
    pub below_target: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct RecognitionFailure {
    pub target: usize,
    pub stop: PslqStop,
    pub iterations: usize,
    pub norm_bound_bits: f64,
}

#[derive(Clone, Debug)]
pub enum Recognition {
    Found(RecognitionResult),
    Failed(RecognitionFailure),
}

impl Recognition {
    pub fn found(self) -> Option<RecognitionResult> {
        match self {
            Recognition::Found(r) => Some(r),
            Recognition::Failed(_) => None,
        }
    }
}

/// Searches (1, x, …, x^(d+2)) for a relation, then shrinks it degree by
/// degree until no smaller relation exists within the factor bound.
pub fn minimal_polynomial(x: &Float, d: usize) -> Result<Recognition> {
    minimal_polynomial_with(x, d, &RecognitionOptions::default())
}

pub fn minimal_polynomial_with(x: &Float, d: usize, opts: &RecognitionOptions) -> Result<Recognition> {
    let (poly, iterations) = match descend(x, d + opts.extra_degree, opts.max_iter)? {
        Ok(found) => found,
        Err(fail) => return Ok(Recognition::Failed(fail)),
    };
    let degree = poly.degree().unwrap_or(0);
    let (_, residual) = verify_root(&poly, x);
    let stable = opts.check_stability && same_relation(&poly, &Float::with_val(x.prec() / 2, x), opts.max_iter)?;
    Ok(Recognition::Found(RecognitionResult {
        poly,
        degree,
        residual,
        stable,
        below_target: degree < d,
        iterations,
    }))
}

/// True when PSLQ on (1, y, …, y^deg q) at the precision of `y` returns ±q.
///
/// False when that precision cannot credibly resolve q's coefficients.
pub fn same_relation(q: &IntPolynomial, y: &Float, max_iter: usize) -> Result<bool> {
    let Some(deg) = q.degree().filter(|&g| g >= 1) else {
        return Ok(false);
    };
    let bound = credible_bound(deg + 1, y.prec());
    if q.max_abs() > bound {
        return Ok(false);
    }
    match pslq(&powers(y, deg), &bound, max_iter)? {
        Some(rel) => Ok(IntPolynomial::new(rel).primitive_part()? == *q),
        None => Ok(false),
    }
}

type Descent = std::result::Result<(IntPolynomial, usize), RecognitionFailure>;

fn descend(x: &Float, target: usize, max_iter: usize) -> Result<Descent> {
    let p = x.prec();
    let xs = powers(x, target);
    let bound = credible_bound(target + 1, p);
    let first = pslq_report(&xs, &bound, max_iter)?;
    let mut iterations = first.iterations;
    let Some(rel) = first.relation else {
        return Ok(Err(RecognitionFailure {
            target,
            stop: first.stop,
            iterations,
            norm_bound_bits: first.norm_bound_bits,
        }));
    };
    let mut q = IntPolynomial::new(rel).primitive_part()?;
    while let Some(deg) = q.degree().filter(|&g| g >= 2) {
        let lower = deg - 1;
        let bound = factor_bound(&q).min(credible_bound(lower + 1, p));
        let r = pslq_report(&xs[..=lower], &bound, max_iter)?;
        iterations += r.iterations;
        match r.relation {
            Some(rel) => q = IntPolynomial::new(rel).primitive_part()?,
            None => break,
        }
    }
    Ok(Ok((q, iterations)))
}

/// |p(x)| < 2^(−prec/2)·‖p‖₁·max(1, |x|)^deg; also returns |p(x)|.
pub fn verify_root(p: &IntPolynomial, x: &Float) -> (bool, Float) {
    let prec = x.prec();
    let value = p.eval_float(x).abs();
    let deg = p.degree().unwrap_or(0) as u32;
    let xabs = Float::with_val(prec, x.abs_ref()).max(&Float::with_val(prec, 1));
    let scale = Float::with_val(prec, p.norm1()) * xabs.pow(deg);
    let tol = scale * Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32)));
    (value < tol, value)
}

/// Parses a decimal expansion such as "0.4494897427831780981972840747..."
/// into a float carrying as many bits as the digits justify (at least 64).
pub fn parse_decimal(text: &str) -> Result<Float> {
    let t = text.trim();
    let digits = t.chars().filter(|c| c.is_ascii_digit()).count();
    let bits = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32;
    let prec = bits.max(64);
    let parsed = Float::parse(t).map_err(|e| Error::Parse(format!("{t:?}: {e}")))?;
    Ok(Float::with_val(prec, parsed))
}
