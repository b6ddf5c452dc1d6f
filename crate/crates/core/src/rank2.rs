//! Rank-2 exchange sequences and their periodic approximation.
//!
//! The sequence `(x_i)` satisfies `x_{i-1} x_{i+1} = x_i^a + 1` for even `i`
//! and `x_i^b + 1` for odd `i`. For the dihedral type `I₂(m)` the weights are
//! `a = 4cos²(π/m)` and `b = 1`. The even subsequence `y_i = x_{2i}` is
//! approximated by `Y_i`, whose exponents are governed by the Chebyshev-like
//! sequence `g_i`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalars::GoldenInt;

/// `4cos²(π/m)`.
pub fn weight_for(m: u32) -> f64 {
    let c = (PI / m as f64).cos();
    4.0 * c * c
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank2Params {
    a: f64,
    b: f64,
    m: Option<u32>,
}

impl Rank2Params {
    /// Dihedral type `I₂(m)`: `a = 4cos²(π/m)`, `b = 1`.
    pub fn from_m(m: u32) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidParams(format!("m must be >= 3, got {m}")));
        }
        let a = weight_for(m);
        assert!((1.0 - 1e-12..4.0).contains(&a), "weight {a} outside [1, 4)");
        if m > 4 {
            assert!(a > 2.0, "m > 4 must give a > 2, got {a}");
        }
        Ok(Rank2Params {
            a,
            b: 1.0,
            m: Some(m),
        })
    }

    pub fn from_exponents(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::InvalidParams(format!(
                "exponents must be positive, got a = {a}, b = {b}"
            )));
        }
        Ok(Rank2Params { a, b, m: None })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn m(&self) -> Option<u32> {
        self.m
    }

    /// Exponent used in the exchange relation centred at `i`.
    pub fn weight(&self, i: i64) -> f64 {
        if i.rem_euclid(2) == 0 {
            self.a
        } else {
            self.b
        }
    }
}

/// A finite window `lo..=hi` of the exchange sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeSequence {
    params: Rank2Params,
    lo: i64,
    terms: Vec<f64>,
}

impl ExchangeSequence {
    pub fn params(&self) -> &Rank2Params {
        &self.params
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, i: i64) -> Option<f64> {
        let k = i.checked_sub(self.lo)?;
        usize::try_from(k)
            .ok()
            .and_then(|k| self.terms.get(k).copied())
    }

    pub fn at(&self, i: i64) -> Result<f64> {
        self.get(i).ok_or(Error::MissingIndex(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.terms
            .iter()
            .enumerate()
            .map(|(k, &x)| (self.lo + k as i64, x))
    }

    /// Largest relative residual of the exchange relation over the window.
    pub fn max_relation_residual(&self) -> f64 {
        (self.lo + 1..self.hi())
            .map(|i| {
                let lhs = self.terms_at(i - 1) * self.terms_at(i + 1);
                let rhs = self.terms_at(i).powf(self.params.weight(i)) + 1.0;
                (lhs - rhs).abs() / rhs
            })
            .fold(0.0, f64::max)
    }

    /// `max |x_{i+shift} − x_i| / x_i` over the window.
    pub fn max_shift_deviation(&self, shift: usize) -> f64 {
        self.terms
            .iter()
            .zip(self.terms.iter().skip(shift))
            .map(|(x, y)| (y - x).abs() / x)
            .fold(0.0, f64::max)
    }

    fn terms_at(&self, i: i64) -> f64 {
        self.terms[(i - self.lo) as usize]
    }
}

fn checked_term(x: f64, index: i64) -> Result<f64> {
    if x.is_infinite() {
        Err(Error::NumericOverflow { index })
    } else if x.is_nan() || x <= 0.0 {
        Err(Error::NonPositiveTerm { index })
    } else {
        Ok(x)
    }
}

/// Computes `x_lo … x_hi` from `(x_1, x_2)`, extending forwards and backwards
/// with the exchange relation.
pub fn generate_x(
    params: Rank2Params,
    x1: f64,
    x2: f64,
    lo: i64,
    hi: i64,
) -> Result<ExchangeSequence> {
    if !(x1.is_finite() && x2.is_finite() && x1 > 0.0 && x2 > 0.0) {
        return Err(Error::InvalidParams(format!(
            "initial values must be positive, got x1 = {x1}, x2 = {x2}"
        )));
    }
    if lo > 1 || hi < 2 {
        return Err(Error::InvalidParams(format!(
            "window {lo}..={hi} must contain indices 1 and 2"
        )));
    }
    let len = (hi - lo + 1) as usize;
    let mut terms = vec![0.0; len];
    let off = |i: i64| (i - lo) as usize;
    terms[off(1)] = x1;
    terms[off(2)] = x2;
    for i in 2..hi {
        let next = (terms[off(i)].powf(params.weight(i)) + 1.0) / terms[off(i - 1)];
        terms[off(i + 1)] = checked_term(next, i + 1)?;
    }
    for i in (lo + 1..=1).rev() {
        let prev = (terms[off(i)].powf(params.weight(i)) + 1.0) / terms[off(i + 1)];
        terms[off(i - 1)] = checked_term(prev, i - 1)?;
    }
    Ok(ExchangeSequence { params, lo, terms })
}

/// True iff `|x_{i+period} − x_i| / x_i <= tol` wherever both are in the window.
pub fn check_period(seq: &ExchangeSequence, period: usize, tol: f64) -> Result<bool> {
    let needed = 2 * period.max(1);
    if seq.len() < needed {
        return Err(Error::WindowTooSmall {
            needed,
            have: seq.len(),
        });
    }
    Ok(seq.max_shift_deviation(period) <= tol)
}

/// `y_i = x_{2i}` for every even index in the window.
pub fn y_subsequence(seq: &ExchangeSequence) -> BTreeMap<i64, f64> {
    seq.iter()
        .filter(|(n, _)| n.rem_euclid(2) == 0)
        .map(|(n, x)| (n / 2, x))
        .collect()
}

/// `y_i = x_{2i}` for a single index.
pub fn y_at(seq: &ExchangeSequence, i: i64) -> Result<f64> {
    seq.at(2 * i)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualCheck {
    pub residuals: Vec<(i64, f64)>,
    pub tol: f64,
}

impl ResidualCheck {
    pub fn max(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        !self.residuals.is_empty() && self.residuals.iter().all(|r| r.1 <= self.tol)
    }
}

/// Relative residuals of `y_{i-1} y_i y_{i+1} = y_{i-1} + y_{i+1} + y_i^{a-1}`
/// at every `i` whose neighbours are present.
pub fn verify_y_recursion(y: &BTreeMap<i64, f64>, a: f64, tol: f64) -> ResidualCheck {
    let residuals = y
        .iter()
        .filter_map(|(&i, &yi)| {
            let prev = *y.get(&(i - 1))?;
            let next = *y.get(&(i + 1))?;
            let product = prev * yi * next;
            let r = (product - prev - next - yi.powf(a - 1.0)).abs() / product;
            Some((i, r))
        })
        .collect();
    ResidualCheck { residuals, tol }
}

/// `g_0 = 0`, `g_1 = 1`, `g_{i+1} = (a − 2) g_i − g_{i−1}` with `a = 4cos²(π/m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GSequence {
    m: u32,
    a: f64,
    values: Vec<f64>,
}

pub fn g_sequence(m: u32, len: usize) -> Result<GSequence> {
    if m < 3 {
        return Err(Error::InvalidParams(format!("m must be >= 3, got {m}")));
    }
    if len < 2 {
        return Err(Error::InvalidParams(format!("need L >= 2, got {len}")));
    }
    let a = weight_for(m);
    let mut values = Vec::with_capacity(len + 1);
    values.extend([0.0, 1.0]);
    for i in 1..len {
        values.push((a - 2.0) * values[i] - values[i - 1]);
    }
    Ok(GSequence { m, a, values })
}

/// The same recurrence at `m = 5` carried out exactly in ℤ[a]
/// (`a − 2` is `GoldenInt::new(-2, 1)`).
pub fn golden_g_sequence(len: usize) -> Result<Vec<GoldenInt>> {
    let step = GoldenInt::new(-2, 1);
    let mut values = vec![GoldenInt::ZERO, GoldenInt::ONE];
    for i in 1..len {
        let next = step.checked_mul(values[i])?.checked_sub(values[i - 1])?;
        values.push(next);
    }
    values.truncate(len + 1);
    Ok(values)
}

impl GSequence {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `g_0 … g_L`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The primitive root `ω = exp(2πi/m)`.
    pub fn omega(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI / self.m as f64)
    }

    /// `(ωⁱ − ω̄ⁱ) / (ω − ω̄)`.
    pub fn closed_form(&self, i: i64) -> f64 {
        let w = self.omega();
        let wb = w.conj();
        ((w.powi(i as i32) - wb.powi(i as i32)) / (w - wb)).re
    }

    /// `sin(2πi/m) / sin(2π/m)`.
    pub fn closed_form_sin(&self, i: i64) -> f64 {
        let t = 2.0 * PI / self.m as f64;
        (t * i as f64).sin() / t.sin()
    }

    /// Value on the two-sided extension of the recurrence (`g_{−i} = −g_i`).
    pub fn at(&self, i: i64) -> Option<f64> {
        let k = i.unsigned_abs() as usize;
        let v = *self.values.get(k)?;
        Some(if i < 0 { -v } else { v })
    }

    pub fn max_closed_form_deviation(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, g)| (g - self.closed_form(i as i64)).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_recurrence_residual(&self) -> f64 {
        self.values
            .windows(3)
            .map(|w| (w[2] - ((self.a - 2.0) * w[1] - w[0])).abs())
            .fold(0.0, f64::max)
    }

    /// `|g_{i+p} − g_i| <= tol` over the stored values.
    pub fn is_periodic(&self, p: usize, tol: f64) -> bool {
        p < self.values.len()
            && self
                .values
                .iter()
                .zip(&self.values[p..])
                .all(|(x, y)| (y - x).abs() <= tol)
    }

    /// `|g_{i+p} + g_i| <= tol` over the stored values.
    pub fn is_antiperiodic(&self, p: usize, tol: f64) -> bool {
        p < self.values.len()
            && self
                .values
                .iter()
                .zip(&self.values[p..])
                .all(|(x, y)| (y + x).abs() <= tol)
    }

    /// Smallest period of the recurrence: always `m`. For even `m` the
    /// sequence is additionally antiperiodic with shift `m/2`.
    pub fn period(&self) -> usize {
        self.m as usize
    }
}

/// `I = {−2, …, m/2}` for even `m`, `{−(m+1)/2, …, (m+5)/2}` for odd `m`.
pub fn index_set(m: u32) -> Vec<i64> {
    let m = m as i64;
    if m % 2 == 0 {
        (-2..=m / 2).collect()
    } else {
        (-(m + 1) / 2..=(m + 5) / 2).collect()
    }
}

/// Index pairs `(j, k)` with `Y_j = Y_k` after one period.
pub fn closure_pairs(m: u32) -> [(i64, i64); 2] {
    let m = m as i64;
    if m % 2 == 0 {
        [(-2, (m - 2) / 2), (-1, m / 2)]
    } else {
        [(-(m + 1) / 2, (m + 3) / 2), (-(m - 1) / 2, (m + 5) / 2)]
    }
}

/// The approximating sequence `Y_i`, `i ∈ I`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxSequence {
    m: u32,
    a: f64,
    x1: f64,
    x2: f64,
    index: Vec<i64>,
    values: BTreeMap<i64, f64>,
}

fn positive_denominator(d: f64, what: &str) -> Result<f64> {
    if d.is_finite() && d > 0.0 {
        Ok(d)
    } else {
        Err(Error::Degenerate(format!("{what} = {d} is not positive")))
    }
}

/// Builds `Y_i` for `i ∈ I` from the recursive definitions, starting with
/// `Y_1 = x_2` and `Y_2 = (1 + x_1 + x_2^a) / (x_1 x_2)`.
pub fn approx_sequence(m: u32, x1: f64, x2: f64) -> Result<ApproxSequence> {
    if m <= 4 {
        return Err(Error::InvalidParams(format!(
            "the approximation needs m > 4, got {m}"
        )));
    }
    if !(x1.is_finite() && x2.is_finite() && x1 > 0.0 && x2 > 0.0) {
        return Err(Error::InvalidParams(format!(
            "initial values must be positive, got x1 = {x1}, x2 = {x2}"
        )));
    }
    let a = weight_for(m);
    let mi = m as i64;
    let mut y = BTreeMap::new();
    let get = |y: &BTreeMap<i64, f64>, i: i64| y[&i];

    y.insert(1, x2);
    y.insert(2, (1.0 + x1 + x2.powf(a)) / (x1 * x2));
    let d12 = positive_denominator(get(&y, 1) * get(&y, 2) - 1.0, "Y1*Y2 - 1")?;
    y.insert(0, get(&y, 2) / d12);
    let d01 = positive_denominator(get(&y, 0) * get(&y, 1) - 1.0, "Y0*Y1 - 1")?;
    y.insert(-1, get(&y, 0).powf(a - 1.0) / d01);
    y.insert(-2, get(&y, -1).powf(a - 2.0) / get(&y, 0));
    y.insert(3, get(&y, 2).powf(a - 1.0) / d12);
    for i in 3..=(mi - 1) / 2 {
        y.insert(i + 1, get(&y, i).powf(a - 2.0) / get(&y, i - 1));
    }

    if mi % 2 == 1 {
        let h = (mi + 1) / 2;
        let (yh, yh1) = (get(&y, h), get(&y, h - 1));
        y.insert(h + 1, (yh.powf(a - 1.0) + yh1) / (yh * yh1));
        let d = positive_denominator(get(&y, h + 1) * yh - 1.0, "Y_{(m+3)/2}*Y_{(m+1)/2} - 1")?;
        y.insert(h + 2, yh / d);

        for i in (-(mi - 3) / 2..=-2).rev() {
            y.insert(i - 1, get(&y, i).powf(a - 2.0) / get(&y, i + 1));
        }
        let k = -(mi - 1) / 2;
        let (yk, yk1) = (get(&y, k), get(&y, k + 1));
        y.insert(k - 1, (yk.powf(a - 1.0) + yk1) / (yk * yk1));
    }

    let index = index_set(m);
    debug_assert!(index.iter().copied().eq(y.keys().copied()));
    if let Some((i, v)) = y.iter().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Degenerate(format!("Y_{i} = {v}")));
    }
    Ok(ApproxSequence {
        m,
        a,
        x1,
        x2,
        index,
        values: y,
    })
}

impl ApproxSequence {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn index_set(&self) -> &[i64] {
        &self.index
    }

    pub fn get(&self, i: i64) -> Option<f64> {
        self.values.get(&i).copied()
    }

    pub fn values(&self) -> &BTreeMap<i64, f64> {
        &self.values
    }

    /// `x_3 = Y_1 Y_2 − 1 = (1 + x_2^a) / x_1`.
    pub fn x3(&self) -> f64 {
        (1.0 + self.x2.powf(self.a)) / self.x1
    }

    /// `x`-window `lo..=hi` covering `2i` for every `i ∈ I`.
    pub fn x_window(&self) -> (i64, i64) {
        let lo = 2 * self.index[0];
        let hi = 2 * self.index[self.index.len() - 1];
        (lo.min(1), hi.max(2))
    }

    /// `(j, k, |Y_j − Y_k| / Y_k)` for both closure equalities.
    pub fn closure_residuals(&self) -> Vec<(i64, i64, f64)> {
        closure_pairs(self.m)
            .iter()
            .map(|&(j, k)| {
                let (yj, yk) = (self.values[&j], self.values[&k]);
                (j, k, (yj - yk).abs() / yk)
            })
            .collect()
    }
}

fn rel(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

/// Largest relative deviation between the recursively defined `Y_i` and the
/// closed exponent formulas in `Y_2`, `Y_0` and `x_3`.
pub fn exponent_formula_deviation(ap: &ApproxSequence, g: &GSequence, x3: f64) -> f64 {
    let m = ap.m as i64;
    let y0 = ap.values[&0];
    let y2 = ap.values[&2];
    let gi = |i: i64| g.at(i).expect("g sequence too short");
    let mut worst: f64 = 0.0;
    for i in 0..=(m - 3) / 2 {
        let Some(target) = ap.get(i + 2) else {
            continue;
        };
        let s = gi(i) + gi(i + 1);
        worst = worst.max(rel(y2.powf(s) * x3.powf(-gi(i)), target));
        worst = worst.max(rel(y0.powf(s) * x3.powf(gi(i + 1)), target));
    }
    for i in 0..=(m - 1) / 2 {
        let Some(target) = ap.get(-i) else { continue };
        let s = gi(i) + gi(i + 1);
        worst = worst.max(rel(y2.powf(s) * x3.powf(-gi(i + 1)), target));
        worst = worst.max(rel(y0.powf(s) * x3.powf(gi(i)), target));
    }
    worst
}

/// Checks `Y_{i+2} = Y_2^{g_i+g_{i+1}} x_3^{−g_i} = Y_0^{g_i+g_{i+1}} x_3^{g_{i+1}}`
/// and `Y_{−i} = Y_2^{g_i+g_{i+1}} x_3^{−g_{i+1}} = Y_0^{g_i+g_{i+1}} x_3^{g_i}`
/// over the admissible ranges of `i`, relative tolerance `tol`.
pub fn verify_exponent_formula(ap: &ApproxSequence, g: &GSequence, x3: f64, tol: f64) -> bool {
    exponent_formula_deviation(ap, g, x3) <= tol
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    /// Subsequence index `i`.
    pub i: i64,
    /// Index `n = 2i` in the `x` sequence.
    pub n: i64,
    pub y: f64,
    pub approx: f64,
    pub relerr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    pub fn max_relerr(&self) -> f64 {
        self.rows.iter().map(|r| r.relerr).fold(0.0, f64::max)
    }

    pub fn row(&self, i: i64) -> Option<&ErrorRow> {
        self.rows.iter().find(|r| r.i == i)
    }
}

/// One row per `i ∈ I` comparing `y_i = x_{2i}` with `Y_i`.
pub fn error_report(seq: &ExchangeSequence, ap: &ApproxSequence) -> Result<ErrorReport> {
    let rows = ap
        .index
        .iter()
        .map(|&i| {
            let y = y_at(seq, i)?;
            let approx = ap.values[&i];
            Ok(ErrorRow {
                i,
                n: 2 * i,
                y,
                approx,
                relerr: (approx - y).abs() / y,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorReport { rows })
}

/// Generates both sequences for `I₂(m)` over the window that `I` needs.
pub fn sequences_for(m: u32, x1: f64, x2: f64) -> Result<(ExchangeSequence, ApproxSequence)> {
    let ap = approx_sequence(m, x1, x2)?;
    let (lo, hi) = ap.x_window();
    let seq = generate_x(Rank2Params::from_m(m)?, x1, x2, lo, hi)?;
    Ok((seq, ap))
}

/// CSV table `n,x_n` or, with a report, `n,x_n,Y,relerr` where the last two
/// columns are filled on even rows `n = 2i`, `i ∈ I`.
pub fn table_csv(
    seq: &ExchangeSequence,
    report: Option<&ErrorReport>,
    full_precision: bool,
) -> String {
    let fmt = |x: f64| {
        if full_precision {
            format!("{x:?}")
        } else {
            format!("{x:.6}")
        }
    };
    let mut out = String::new();
    out.push_str(if report.is_some() {
        "n,x_n,Y,relerr\n"
    } else {
        "n,x_n\n"
    });
    for (n, x) in seq.iter() {
        write!(out, "{n},{}", fmt(x)).unwrap();
        if let Some(report) = report {
            match report.rows.iter().find(|r| r.n == n) {
                Some(r) => write!(out, ",{},{}", fmt(r.approx), fmt(r.relerr)).unwrap(),
                None => out.push_str(",,"),
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub t: f64,
    pub max_relerr: f64,
    /// `max_relerr / (t² x_1 x_2)`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingProbe {
    pub rows: Vec<ProbeRow>,
    /// Set when a step could not be evaluated and the probe stopped early.
    pub truncated: Option<String>,
}

impl ScalingProbe {
    /// Every ratio stays below `factor` times the first one.
    pub fn bounded_by(&self, factor: f64) -> bool {
        match self.rows.first() {
            Some(first) => self.rows.iter().all(|r| r.ratio <= factor * first.ratio),
            None => false,
        }
    }
}

/// Scales the initial pair by `t = 2⁰, 2⁻¹, …, 2^{−(steps−1)}` and records the
/// largest relative error of the approximation at each scale.
pub fn error_scaling_probe(m: u32, x1: f64, x2: f64, steps: usize) -> Result<ScalingProbe> {
    if !(x1 > 0.0 && x1 < 1.0 && x2 > 0.0 && x2 < 1.0) {
        return Err(Error::InvalidParams(format!(
            "probe needs x1, x2 in (0, 1), got {x1}, {x2}"
        )));
    }
    if steps < 3 {
        return Err(Error::InvalidParams(format!(
            "need steps >= 3, got {steps}"
        )));
    }
    let mut rows = Vec::with_capacity(steps);
    let mut truncated = None;
    for s in 0..steps {
        let t = 0.5f64.powi(s as i32);
        let report = sequences_for(m, t * x1, t * x2).and_then(|(seq, ap)| error_report(&seq, &ap));
        match report {
            Ok(report) => {
                let max_relerr = report.max_relerr();
                rows.push(ProbeRow {
                    t,
                    max_relerr,
                    ratio: max_relerr / (t * t * x1 * x2),
                });
            }
            Err(e) => {
                truncated = Some(format!("stopped at t = {t}: {e}"));
                break;
            }
        }
    }
    Ok(ScalingProbe { rows, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Starting values behind the reference m = 5 table; they round to
    // 0.829497 and 0.363532.
    const X1: f64 = 0.829_497_45;
    const X2: f64 = 0.363_531_77;

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    #[test]
    fn params_from_m() {
        let p = Rank2Params::from_m(5).unwrap();
        assert!(close(p.a(), 2.618_033_988, 1e-9));
        assert_eq!(p.b(), 1.0);
        assert!(close(Rank2Params::from_m(3).unwrap().a(), 1.0, 1e-12));
        assert!(close(Rank2Params::from_m(6).unwrap().a(), 3.0, 1e-12));
        assert!(Rank2Params::from_m(2).is_err());
        assert!(Rank2Params::from_exponents(0.0, 1.0).is_err());
    }

    #[test]
    fn forward_and_backward_reference_values() {
        let seq = generate_x(Rank2Params::from_m(5).unwrap(), X1, X2, -6, 10).unwrap();
        for (i, want) in [
            (3, 1.290794),
            (4, 6.301497),
            (5, 96.739925),
            (0, 5.032565),
            (-1, 84.093907),
        ] {
            let got = seq.at(i).unwrap();
            assert!(close(got, want, 1e-5), "x_{i}: {got} vs {want}");
        }
        assert_eq!(seq.at(1).unwrap(), X1);
        assert_eq!(seq.at(2).unwrap(), X2);
        assert!(seq.max_relation_residual() < 1e-12);
    }

    #[test]
    fn a2_hand_iteration() {
        let p = Rank2Params::from_exponents(1.0, 1.0).unwrap();
        let seq = generate_x(p, 1.0, 1.0, 1, 11).unwrap();
        let xs: Vec<f64> = (3..=7).map(|i| seq.at(i).unwrap()).collect();
        assert_eq!(xs, vec![2.0, 3.0, 2.0, 1.0, 1.0]);
        assert!(check_period(&seq, 5, 1e-12).unwrap());
    }

    #[test]
    fn generator_rejects_bad_input() {
        let p = Rank2Params::from_m(5).unwrap();
        assert!(matches!(
            generate_x(p, 0.0, 1.0, 1, 2),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            generate_x(p, 1.0, -1.0, 1, 2),
            Err(Error::InvalidParams(_))
        ));
        assert!(generate_x(p, 1.0, 1.0, 2, 5).is_err());
        let big = Rank2Params::from_exponents(50.0, 50.0).unwrap();
        assert!(matches!(
            generate_x(big, 0.5, 9.0, 1, 40),
            Err(Error::NumericOverflow { .. })
        ));
    }

    #[test]
    fn crystallographic_periods() {
        for ((a, b), period) in [((1.0, 1.0), 5), ((2.0, 1.0), 6), ((3.0, 1.0), 8)] {
            let p = Rank2Params::from_exponents(a, b).unwrap();
            let seq = generate_x(p, 0.7, 1.9, -20, 20).unwrap();
            assert!(check_period(&seq, period, 1e-9).unwrap(), "({a},{b})");
            assert!(!check_period(&seq, period - 1, 1e-3).unwrap());
        }
    }

    #[test]
    fn m5_is_only_approximately_periodic() {
        let seq = generate_x(Rank2Params::from_m(5).unwrap(), X1, X2, -6, 10).unwrap();
        assert!(seq.max_shift_deviation(14) < 0.05);
        let wide = generate_x(Rank2Params::from_m(5).unwrap(), X1, X2, -20, 20).unwrap();
        assert!(!check_period(&wide, 14, 1e-9).unwrap());
        let short = generate_x(Rank2Params::from_m(5).unwrap(), X1, X2, 1, 10).unwrap();
        assert!(matches!(
            check_period(&short, 14, 0.1),
            Err(Error::WindowTooSmall {
                needed: 28,
                have: 10
            })
        ));
    }

    #[test]
    fn y_subsequence_halves_the_window() {
        let seq = generate_x(Rank2Params::from_m(5).unwrap(), X1, X2, -6, 10).unwrap();
        let y = y_subsequence(&seq);
        assert_eq!(y.len(), 9);
        assert_eq!(*y.keys().next().unwrap(), -3);
        assert_eq!(y[&1], X2);
        assert!(close(y[&2], 6.301497, 1e-5));
        assert!(close(y[&0], 5.032565, 1e-5));
        assert!(matches!(y_at(&seq, 6), Err(Error::MissingIndex(12))));
    }

    #[test]
    fn y_recursion_on_reference_values() {
        let y: BTreeMap<i64, f64> = [(0, 5.032565), (1, 0.363532), (2, 6.301497)].into();
        let check = verify_y_recursion(&y, 2.618033988, 1e-5);
        assert_eq!(check.residuals.len(), 1);
        assert!(check.passed(), "{:?}", check.residuals);
    }

    #[test]
    fn y_recursion_exact_fixed_point() {
        // a = 2: y_{i-1} y_i y_{i+1} = y_{i-1} + y_{i+1} + y_i holds at y = √3
        let s = 3f64.sqrt();
        let y: BTreeMap<i64, f64> = [(0, s), (1, s), (2, s)].into();
        let check = verify_y_recursion(&y, 2.0, 0.0);
        assert!(check.max() < 1e-15);
    }

    #[test]
    fn g_sequence_examples() {
        let g = g_sequence(5, 5).unwrap();
        let want = [0.0, 1.0, 0.618034, -0.618034, -1.0, 0.0];
        for (got, want) in g.values().iter().zip(want) {
            assert!(close(*got, want, 1e-6), "{got} vs {want}");
        }
        let g6 = g_sequence(6, 6).unwrap();
        assert!(close(g6.values()[2], 1.0, 1e-12));
        assert!(close(g6.values()[3], 0.0, 1e-12));
        for m in 3..20 {
            let g = g_sequence(m, 2).unwrap();
            assert_eq!(&g.values()[..2], &[0.0, 1.0]);
        }
        assert!(g_sequence(2, 5).is_err());
        assert!(g_sequence(5, 1).is_err());
    }

    #[test]
    fn g_closed_forms_and_period() {
        for m in 3..=16 {
            let g = g_sequence(m, 200).unwrap();
            assert!(g.max_closed_form_deviation() < 1e-9, "m={m}");
            assert!(g.max_recurrence_residual() < 1e-12);
            for i in 0..=200 {
                assert!((g.closed_form(i) - g.closed_form_sin(i)).abs() < 1e-9);
            }
            assert!(g.is_periodic(g.period(), 1e-9), "m={m}");
            if m % 2 == 0 {
                assert!(g.is_antiperiodic(m as usize / 2, 1e-9));
                assert!(!g.is_periodic(m as usize / 2, 1e-9));
            }
        }
    }

    #[test]
    fn g_sign_pattern() {
        for m in 5..=15u32 {
            let g = g_sequence(m, 2 * m as usize).unwrap();
            let h = (m as i64 - 1) / 2;
            for i in 1..=h {
                assert!(g.at(i).unwrap() > 0.0, "m={m} i={i}");
                assert!(g.at(-i).unwrap() < 0.0, "m={m} i={i}");
            }
        }
    }

    #[test]
    fn golden_g_sequence_is_exactly_periodic() {
        let g = golden_g_sequence(20).unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[5], GoldenInt::ZERO);
        assert_eq!(g[6], GoldenInt::ONE);
        assert_eq!(g[2], GoldenInt::new(-2, 1));
        let floats = g_sequence(5, 20).unwrap();
        for (exact, float) in g.iter().zip(floats.values()) {
            assert!(close(exact.to_f64(), *float, 1e-12));
        }
    }

    #[test]
    fn index_sets() {
        assert_eq!(index_set(5), vec![-3, -2, -1, 0, 1, 2, 3, 4, 5]);
        assert_eq!(index_set(8), vec![-2, -1, 0, 1, 2, 3, 4]);
        assert_eq!(index_set(7), (-4..=6).collect::<Vec<_>>());
    }

    #[test]
    fn approx_reference_values() {
        let ap = approx_sequence(5, X1, X2).unwrap();
        for (i, want) in [
            (3, 15.228954),
            (4, 0.919721),
            (5, 1.170883),
            (0, 4.881875),
            (-1, 16.788570),
        ] {
            let got = ap.get(i).unwrap();
            assert!(close(got, want, 1e-5), "Y_{i}: {got} vs {want}");
        }
        assert_eq!(ap.get(1).unwrap(), X2);
        assert!(approx_sequence(4, X1, X2).is_err());
        assert!(approx_sequence(5, 0.0, X2).is_err());
    }

    #[test]
    fn exponent_formula_examples() {
        let ap = approx_sequence(5, X1, X2).unwrap();
        let g = g_sequence(5, 10).unwrap();
        assert!(verify_exponent_formula(&ap, &g, ap.x3(), 1e-9));
        // i = 1 with reference table values
        let (y2, y3): (f64, f64) = (6.301497, 15.228954);
        let x3 = 1.290794;
        let a = weight_for(5);
        assert!(rel(y2.powf(a - 1.0) / x3, y3) < 1e-5);
        // perturbing x3 breaks the identity
        assert!(!verify_exponent_formula(&ap, &g, ap.x3() * 1.01, 1e-6));
    }

    #[test]
    fn error_report_reference_rows() {
        let (seq, ap) = sequences_for(5, X1, X2).unwrap();
        let report = error_report(&seq, &ap).unwrap();
        assert_eq!(report.rows.len(), 9);
        assert!(close(report.row(3).unwrap().relerr, 0.018158, 1e-5));
        assert!(close(report.row(-1).unwrap().relerr, 0.007102, 1e-5));
        assert_eq!(report.row(1).unwrap().relerr, 0.0);
        assert!(report.row(2).unwrap().relerr < 1e-15);
        assert!(report.rows.iter().all(|r| r.relerr >= 0.0));
    }

    #[test]
    fn table_layout() {
        let (seq, ap) = sequences_for(5, X1, X2).unwrap();
        let report = error_report(&seq, &ap).unwrap();
        let csv = table_csv(&seq, Some(&report), false);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,x_n,Y,relerr");
        assert_eq!(lines.len(), 18);
        assert_eq!(lines[2], "-5,0.136311,,");
        assert!(
            lines[13].starts_with("6,15.510588,15.22895"),
            "{}",
            lines[13]
        );
        let plain = table_csv(&seq, None, true);
        assert!(plain.starts_with("n,x_n\n-6,"));
    }

    #[test]
    fn scaling_probe_first_row_matches_report() {
        let probe = error_scaling_probe(5, X1, X2, 4).unwrap();
        let (seq, ap) = sequences_for(5, X1, X2).unwrap();
        let report = error_report(&seq, &ap).unwrap();
        assert_eq!(probe.rows.len(), 4);
        assert_eq!(probe.rows[0].max_relerr, report.max_relerr());
        assert!(probe.bounded_by(2.0));
        assert!(probe.truncated.is_none());
        assert!(error_scaling_probe(5, 1.5, 0.5, 4).is_err());
        assert!(error_scaling_probe(5, 0.5, 0.5, 2).is_err());
    }

    #[test]
    fn scaling_probe_truncates_on_underflow() {
        let probe = error_scaling_probe(12, 0.9, 0.9, 400).unwrap();
        assert!(probe.truncated.is_some());
        assert!(probe.rows.len() < 400);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn forward_backward_agree(
            m in prop::sample::select(vec![5u32, 7, 8, 9, 11, 12]),
            x1 in 0.01f64..1.0, x2 in 0.01f64..1.0, start in -8i64..8,
        ) {
            let p = Rank2Params::from_m(m).unwrap();
            let seq = generate_x(p, x1, x2, -12, 12).unwrap();
            // regenerate from the adjacent pair (x_start, x_start+1), shifted so
            // the parity of the weights is preserved
            let shift = start - 1 - (start - 1).rem_euclid(2);
            let (u, v) = (seq.at(shift + 1).unwrap(), seq.at(shift + 2).unwrap());
            let lo = -12 - shift;
            let hi = 12 - shift;
            prop_assume!(lo <= 1 && hi >= 2);
            let again = generate_x(p, u, v, lo, hi).unwrap();
            let back = (again.at(1 - shift).unwrap(), again.at(2 - shift).unwrap());
            prop_assert!(rel(back.0, x1) < 1e-9 && rel(back.1, x2) < 1e-9);
        }

        #[test]
        fn y_recursion_holds_on_generated_data(
            m in prop::sample::select(vec![5u32, 7, 8, 9]),
            x1 in 0.01f64..1.0, x2 in 0.01f64..1.0,
        ) {
            let (seq, _) = sequences_for(m, x1, x2).unwrap();
            let check = verify_y_recursion(&y_subsequence(&seq), weight_for(m), 1e-9);
            prop_assert!(check.passed(), "{:?}", check.residuals);
        }

        #[test]
        fn exponent_formula_random_m7(x1 in 0.01f64..1.0, x2 in 0.01f64..1.0) {
            let ap = approx_sequence(7, x1, x2).unwrap();
            let g = g_sequence(7, 10).unwrap();
            prop_assert!(verify_exponent_formula(&ap, &g, ap.x3(), 1e-9));
        }

        #[test]
        fn closure_equalities(m in 5u32..=12, x1 in 0.01f64..1.0, x2 in 0.01f64..1.0) {
            let ap = approx_sequence(m, x1, x2).unwrap();
            for (_, _, r) in ap.closure_residuals() {
                prop_assert!(r < 1e-9);
            }
        }
    }
}
