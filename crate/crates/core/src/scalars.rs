//! Numeric tower shared by the sequence and mutation code.
//!
//! Exact values live in the golden ring ℤ[a] with `a = 4cos²(π/5) = (3+√5)/2`,
//! which satisfies `a² = 3a − 1`, and in its fraction field. Everything else is
//! an `f64`. A [`Scalar`] carries its mode and refuses to mix modes.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Values with `|x| <= DEFAULT_ZERO_TOL` count as zero in float mode.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// The real number `a = (3 + √5) / 2`.
pub fn golden_a() -> f64 {
    (3.0 + 5f64.sqrt()) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn of_i128(x: i128) -> Sign {
        match x.cmp(&0) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }
}

/// `p + q·a` with `a² = 3a − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GoldenInt {
    pub p: i64,
    pub q: i64,
}

const OVERFLOW_ADD: Error = Error::Overflow { op: "addition" };
const OVERFLOW_MUL: Error = Error::Overflow {
    op: "multiplication",
};

impl GoldenInt {
    pub const ZERO: GoldenInt = GoldenInt { p: 0, q: 0 };
    pub const ONE: GoldenInt = GoldenInt { p: 1, q: 0 };
    pub const A: GoldenInt = GoldenInt { p: 0, q: 1 };

    pub const fn new(p: i64, q: i64) -> Self {
        GoldenInt { p, q }
    }

    pub const fn from_int(p: i64) -> Self {
        GoldenInt { p, q: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.p == 0 && self.q == 0
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        Ok(GoldenInt {
            p: self.p.checked_add(rhs.p).ok_or(OVERFLOW_ADD)?,
            q: self.q.checked_add(rhs.q).ok_or(OVERFLOW_ADD)?,
        })
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        Ok(GoldenInt {
            p: self.p.checked_sub(rhs.p).ok_or(OVERFLOW_ADD)?,
            q: self.q.checked_sub(rhs.q).ok_or(OVERFLOW_ADD)?,
        })
    }

    pub fn checked_neg(self) -> Result<Self> {
        Ok(GoldenInt {
            p: self.p.checked_neg().ok_or(OVERFLOW_ADD)?,
            q: self.q.checked_neg().ok_or(OVERFLOW_ADD)?,
        })
    }

    /// `(p₁ + q₁a)(p₂ + q₂a) = (p₁p₂ − q₁q₂) + (p₁q₂ + q₁p₂ + 3q₁q₂)·a`
    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        let (p1, q1, p2, q2) = (self.p as i128, self.q as i128, rhs.p as i128, rhs.q as i128);
        let p = p1 * p2 - q1 * q2;
        let q = p1 * q2 + q1 * p2 + 3 * q1 * q2;
        Ok(GoldenInt {
            p: i64::try_from(p).map_err(|_| OVERFLOW_MUL)?,
            q: i64::try_from(q).map_err(|_| OVERFLOW_MUL)?,
        })
    }

    pub fn checked_scale(self, k: i64) -> Result<Self> {
        Ok(GoldenInt {
            p: self.p.checked_mul(k).ok_or(OVERFLOW_MUL)?,
            q: self.q.checked_mul(k).ok_or(OVERFLOW_MUL)?,
        })
    }

    /// Galois conjugate, sending `a` to `3 − a`.
    pub fn conj(self) -> Result<Self> {
        let p = (self.p as i128) + 3 * (self.q as i128);
        Ok(GoldenInt {
            p: i64::try_from(p).map_err(|_| OVERFLOW_ADD)?,
            q: self.q.checked_neg().ok_or(OVERFLOW_ADD)?,
        })
    }

    /// Field norm `x·conj(x) = p² + 3pq + q²`.
    pub fn norm(self) -> Result<i64> {
        let (p, q) = (self.p as i128, self.q as i128);
        i64::try_from(p * p + 3 * p * q + q * q).map_err(|_| OVERFLOW_MUL)
    }

    /// Exact sign of `p + q(3+√5)/2`, i.e. of `(2p + 3q) + q√5`.
    pub fn sign(self) -> Sign {
        let u = 2 * self.p as i128 + 3 * self.q as i128;
        let v = self.q as i128;
        let su = Sign::of_i128(u);
        let sv = Sign::of_i128(v);
        match (su, sv) {
            (Sign::Zero, s) | (s, Sign::Zero) => s,
            (s, t) if s == t => s,
            // opposite signs: compare u² against 5v²
            _ => {
                let lhs = u * u;
                let rhs = 5 * v * v;
                let dominant = Sign::of_i128(lhs - rhs);
                match dominant {
                    Sign::Positive => su,
                    Sign::Negative => sv,
                    // u² = 5v² has no nonzero integer solutions
                    Sign::Zero => unreachable!("sqrt(5) is irrational"),
                }
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        self.p as f64 + self.q as f64 * golden_a()
    }

    fn content(self) -> i64 {
        gcd(self.p.unsigned_abs(), self.q.unsigned_abs()) as i64
    }
}

/// Checked product in ℤ[a].
pub fn golden_mul(x: GoldenInt, y: GoldenInt) -> Result<GoldenInt> {
    x.checked_mul(y)
}

fn expect_ok<T>(r: Result<T>) -> T {
    r.unwrap_or_else(|e| panic!("golden-ring arithmetic aborted: {e}"))
}

impl Add for GoldenInt {
    type Output = GoldenInt;
    fn add(self, rhs: Self) -> Self {
        expect_ok(self.checked_add(rhs))
    }
}

impl Sub for GoldenInt {
    type Output = GoldenInt;
    fn sub(self, rhs: Self) -> Self {
        expect_ok(self.checked_sub(rhs))
    }
}

impl Mul for GoldenInt {
    type Output = GoldenInt;
    fn mul(self, rhs: Self) -> Self {
        expect_ok(self.checked_mul(rhs))
    }
}

impl Neg for GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> Self {
        expect_ok(self.checked_neg())
    }
}

impl fmt::Display for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}*a", self.p, self.q)
    }
}

fn parse_err(input: &str, reason: &str) -> Error {
    Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    }
}

impl FromStr for GoldenInt {
    type Err = Error;

    /// Accepts `p+q*a`, `p-q*a`, `p+-q*a`, `q*a` and bare integers.
    fn from_str(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(parse_err(input, "empty"));
        }
        let int = |t: &str| {
            t.parse::<i64>()
                .map_err(|e| parse_err(input, &format!("bad integer {t:?}: {e}")))
        };
        let Some(body) = s.strip_suffix("*a") else {
            return Ok(GoldenInt::from_int(int(&s)?));
        };
        let digits_start = body
            .rfind(|c: char| !c.is_ascii_digit())
            .map_or(0, |i| i + 1);
        if digits_start == body.len() {
            return Err(parse_err(input, "missing coefficient of a"));
        }
        let (mut rest, q) = match body[..digits_start].chars().last() {
            Some('+' | '-') => (&body[..digits_start - 1], int(&body[digits_start - 1..])?),
            Some(_) => return Err(parse_err(input, "unexpected character before coefficient")),
            None => (&body[..0], int(body)?),
        };
        if let Some(r) = rest.strip_suffix('+') {
            rest = r;
        }
        let p = if rest.is_empty() { 0 } else { int(rest)? };
        Ok(GoldenInt::new(p, q))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Element `(p + q·a) / den` of ℚ(√5), kept with `den > 0` and
/// `gcd(p, q, den) = 1` so that equality is structural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GoldenRational {
    num: GoldenInt,
    den: i64,
}

impl GoldenRational {
    pub const ZERO: GoldenRational = GoldenRational {
        num: GoldenInt::ZERO,
        den: 1,
    };
    pub const ONE: GoldenRational = GoldenRational {
        num: GoldenInt::ONE,
        den: 1,
    };

    pub fn new(num: GoldenInt, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let g = gcd(num.content() as u64, den.unsigned_abs()) as i64;
        let g = if den < 0 { -g } else { g };
        Ok(GoldenRational {
            num: GoldenInt::new(num.p / g, num.q / g),
            den: den / g,
        })
    }

    pub fn numer(&self) -> GoldenInt {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn as_golden_int(&self) -> Option<GoldenInt> {
        (self.den == 1).then_some(self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.num.sign()
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64() / self.den as f64
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let l = self.num.checked_scale(rhs.den)?;
        let r = rhs.num.checked_scale(self.den)?;
        let den = self.den.checked_mul(rhs.den).ok_or(OVERFLOW_MUL)?;
        Self::new(l.checked_add(r)?, den)
    }

    pub fn checked_neg(&self) -> Result<Self> {
        Ok(GoldenRational {
            num: self.num.checked_neg()?,
            den: self.den,
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&rhs.checked_neg()?)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let den = self.den.checked_mul(rhs.den).ok_or(OVERFLOW_MUL)?;
        Self::new(self.num.checked_mul(rhs.num)?, den)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // x / y = x·conj(y) / N(y)
        let num = self
            .num
            .checked_mul(rhs.num.conj()?)?
            .checked_scale(rhs.den)?;
        let den = self.den.checked_mul(rhs.num.norm()?).ok_or(OVERFLOW_MUL)?;
        Self::new(num, den)
    }

    /// Total order by real value, decided exactly.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let diff = expect_ok(self.checked_sub(other));
        match diff.sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl From<GoldenInt> for GoldenRational {
    fn from(x: GoldenInt) -> Self {
        GoldenRational { num: x, den: 1 }
    }
}

impl PartialOrd for GoldenRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl fmt::Display for GoldenRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl FromStr for GoldenRational {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        if let Some((num, den)) = s.rsplit_once('/') {
            let num = num.trim();
            let num = num
                .strip_prefix('(')
                .and_then(|n| n.strip_suffix(')'))
                .unwrap_or(num);
            let den: i64 = den
                .trim()
                .parse()
                .map_err(|e| parse_err(input, &format!("bad denominator: {e}")))?;
            GoldenRational::new(num.parse()?, den)
        } else {
            Ok(s.parse::<GoldenInt>()?.into())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(parse_err(other, "mode must be \"exact\" or \"float\"")),
        }
    }
}

/// A real number that is either exact in ℚ(√5) or a double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Exact(GoldenRational),
    Float(f64),
}

impl Scalar {
    pub fn exact(p: i64, q: i64) -> Scalar {
        Scalar::Exact(GoldenInt::new(p, q).into())
    }

    pub fn zero(mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::Exact(GoldenRational::ZERO),
            Mode::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::Exact(GoldenRational::ONE),
            Mode::Float => Scalar::Float(1.0),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(x) => x.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    /// Converts an exact value to float mode; floats pass through.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn sign(&self) -> Sign {
        self.sign_with_tol(DEFAULT_ZERO_TOL)
    }

    /// `tol` only affects float mode.
    pub fn sign_with_tol(&self, tol: f64) -> Sign {
        match self {
            Scalar::Exact(x) => x.sign(),
            Scalar::Float(x) if x.abs() <= tol => Sign::Zero,
            Scalar::Float(x) if *x > 0.0 => Sign::Positive,
            Scalar::Float(_) => Sign::Negative,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Sign::Zero
    }

    fn binary(
        &self,
        rhs: &Scalar,
        exact: impl FnOnce(&GoldenRational, &GoldenRational) -> Result<GoldenRational>,
        float: impl FnOnce(f64, f64) -> f64,
    ) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(x), Scalar::Exact(y)) => exact(x, y).map(Scalar::Exact),
            (Scalar::Float(x), Scalar::Float(y)) => Ok(Scalar::Float(float(*x, *y))),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn try_add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, |x, y| x.checked_add(y), |x, y| x + y)
    }

    pub fn try_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, |x, y| x.checked_sub(y), |x, y| x - y)
    }

    pub fn try_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, |x, y| x.checked_mul(y), |x, y| x * y)
    }

    pub fn try_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if let Scalar::Float(y) = rhs {
            if *y == 0.0 {
                return Err(Error::DivisionByZero);
            }
        }
        self.binary(rhs, |x, y| x.checked_div(y), |x, y| x / y)
    }

    pub fn try_neg(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(x) => x.checked_neg().map(Scalar::Exact),
            Scalar::Float(x) => Ok(Scalar::Float(-x)),
        }
    }

    pub fn try_abs(&self) -> Result<Scalar> {
        match self.sign() {
            Sign::Negative => self.try_neg(),
            _ => Ok(*self),
        }
    }

    /// Six decimals for floats unless `full_precision` is set.
    pub fn render(&self, full_precision: bool) -> String {
        match self {
            Scalar::Exact(x) => x.to_string(),
            Scalar::Float(x) if full_precision => format!("{x:?}"),
            Scalar::Float(x) => format!("{x:.6}"),
        }
    }

    pub fn parse(s: &str, mode: Mode) -> Result<Scalar> {
        match mode {
            Mode::Exact => Ok(Scalar::Exact(s.parse()?)),
            Mode::Float => s
                .trim()
                .parse::<f64>()
                .map(Scalar::Float)
                .map_err(|e| parse_err(s, &e.to_string())),
        }
    }
}

impl From<GoldenInt> for Scalar {
    fn from(x: GoldenInt) -> Self {
        Scalar::Exact(x.into())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Free-function form of [`Scalar::sign`].
pub fn scalar_sign(x: &Scalar) -> Sign {
    x.sign()
}

/// `xᵉ` in real arithmetic; the result is always float mode.
pub fn golden_pow_real(x: &Scalar, e: &Scalar) -> Result<Scalar> {
    let base = x.to_f64();
    if base.is_nan() || base <= 0.0 {
        return Err(Error::NonPositiveBase(base));
    }
    Ok(Scalar::Float(base.powf(e.to_f64())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const G: fn(i64, i64) -> GoldenInt = GoldenInt::new;

    #[test]
    fn multiplication_examples() {
        assert_eq!(golden_mul(G(0, 1), G(0, 1)).unwrap(), G(-1, 3));
        assert_eq!(golden_mul(G(1, 0), G(7, -4)).unwrap(), G(7, -4));
        assert_eq!(golden_mul(G(-2, 1), G(-2, 1)).unwrap(), G(3, -1));
    }

    #[test]
    fn multiplication_overflow_is_reported() {
        let big = G(i64::MAX / 2, i64::MAX / 2);
        assert!(matches!(golden_mul(big, big), Err(Error::Overflow { .. })));
        assert!(G(i64::MAX, 0).checked_add(G(1, 0)).is_err());
    }

    #[test]
    fn sign_examples() {
        assert_eq!(G(-2, 1).sign(), Sign::Positive);
        assert_eq!(G(0, 0).sign(), Sign::Zero);
        assert_eq!(G(3, -1).sign(), Sign::Positive);
        assert_eq!(G(2, -1).sign(), Sign::Negative);
        assert_eq!(G(-3, 1).sign(), Sign::Negative);
        assert_eq!(scalar_sign(&Scalar::exact(-2, 1)).to_i8(), 1);
    }

    #[test]
    fn float_sign_uses_tolerance() {
        assert_eq!(Scalar::Float(1e-10).sign(), Sign::Zero);
        assert_eq!(Scalar::Float(-1e-9).sign(), Sign::Zero);
        assert_eq!(Scalar::Float(-2e-9).sign(), Sign::Negative);
        assert_eq!(Scalar::Float(1e-10).sign_with_tol(0.0), Sign::Positive);
    }

    #[test]
    fn pow_real_examples() {
        let a = Scalar::exact(0, 1);
        assert_eq!(
            golden_pow_real(&Scalar::Float(1.0), &a).unwrap(),
            Scalar::Float(1.0)
        );
        let two = golden_pow_real(&Scalar::Float(2.0), &Scalar::Float(1.0)).unwrap();
        assert_eq!(two, Scalar::Float(2.0));
        // 0.363532^2.618033988 via mpmath at 30 digits: 0.07071079342031...
        let v = golden_pow_real(&Scalar::Float(0.363532), &Scalar::Float(2.618033988))
            .unwrap()
            .to_f64();
        assert!((v - 0.070_710_793_420_313).abs() < 1e-12, "{v}");
        assert!(golden_pow_real(&Scalar::Float(0.0), &a).is_err());
        assert!(golden_pow_real(&Scalar::exact(2, -1), &a).is_err());
    }

    #[test]
    fn modes_do_not_mix() {
        let e = Scalar::exact(1, 0);
        let f = Scalar::Float(1.0);
        assert!(matches!(e.try_add(&f), Err(Error::ModeMismatch)));
        assert!(matches!(f.try_mul(&e), Err(Error::ModeMismatch)));
    }

    #[test]
    fn rational_normalization() {
        let x = GoldenRational::new(G(4, -6), -8).unwrap();
        assert_eq!(x.numer(), G(-2, 3));
        assert_eq!(x.denom(), 4);
        let y = GoldenRational::new(G(-2, 3), 4).unwrap();
        assert_eq!(x, y);
        assert!(GoldenRational::new(G(1, 0), 0).is_err());
    }

    #[test]
    fn rational_division_by_conjugate() {
        let a: GoldenRational = G(0, 1).into();
        let one = GoldenRational::ONE;
        let inv = one.checked_div(&a).unwrap();
        // 1/a = 3 - a
        assert_eq!(inv, G(3, -1).into());
        let back = inv.checked_mul(&a).unwrap();
        assert_eq!(back, one);
        let q = GoldenRational::from(G(1, -1))
            .checked_div(&G(-2, 1).into())
            .unwrap();
        assert!((q.to_f64() - (1.0 - golden_a()) / (golden_a() - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn render_and_parse() {
        assert_eq!(G(-1, 1).to_string(), "-1+1*a");
        assert_eq!(G(2, -1).to_string(), "2-1*a");
        for s in [
            "-1+1*a",
            "2-1*a",
            "2+-1*a",
            " 3 + 4 * a ",
            "1*a",
            "-1*a",
            "7",
            "-12",
        ] {
            let x: GoldenInt = s.parse().unwrap();
            let y: GoldenInt = x.to_string().parse().unwrap();
            assert_eq!(x, y, "{s}");
        }
        assert_eq!("2+-1*a".parse::<GoldenInt>().unwrap(), G(2, -1));
        assert_eq!("-1*a".parse::<GoldenInt>().unwrap(), G(0, -1));
        assert!("1+*a".parse::<GoldenInt>().is_err());
        assert!("x".parse::<GoldenInt>().is_err());
        let r: GoldenRational = "(1-1*a)/3".parse().unwrap();
        assert_eq!(r.to_string(), "(1-1*a)/3");
        assert_eq!(Scalar::Float(0.5).render(false), "0.500000");
        assert_eq!(Scalar::Float(0.1).render(true), "0.1");
    }

    fn small() -> impl Strategy<Value = GoldenInt> {
        (-1000i64..1000, -1000i64..1000).prop_map(|(p, q)| G(p, q))
    }

    proptest! {
        #[test]
        fn ring_axioms(x in small(), y in small(), z in small()) {
            prop_assert_eq!((x * y) * z, x * (y * z));
            prop_assert_eq!(x * (y + z), x * y + x * z);
            prop_assert_eq!(x * y, y * x);
        }

        #[test]
        fn embedding_is_homomorphism(
            p1 in -1_000_000i64..1_000_000, q1 in -1_000_000i64..1_000_000,
            p2 in -1_000_000i64..1_000_000, q2 in -1_000_000i64..1_000_000,
        ) {
            let (x, y) = (G(p1, q1), G(p2, q2));
            let rel = |u: f64, v: f64| (u - v).abs() / v.abs().max(1.0);
            prop_assert!(rel((x + y).to_f64(), x.to_f64() + y.to_f64()) < 1e-12);
            prop_assert!(rel((x * y).to_f64(), x.to_f64() * y.to_f64()) < 1e-9);
            // the float embedding can only disagree in sign when it rounds to ~0
            let f = x.to_f64();
            if f.abs() > 1e-6 {
                prop_assert_eq!(x.sign(), if f > 0.0 { Sign::Positive } else { Sign::Negative });
            }
        }

        #[test]
        fn rational_field_inverse(p in -50i64..50, q in -50i64..50, d in 1i64..20) {
            let x = GoldenRational::new(G(p, q), d).unwrap();
            prop_assume!(!x.is_zero());
            let inv = GoldenRational::ONE.checked_div(&x).unwrap();
            prop_assert_eq!(inv.checked_mul(&x).unwrap(), GoldenRational::ONE);
        }
    }

    #[test]
    fn sign_agrees_with_embedding_on_many_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let x = G(
                rng.random_range(-1_000_000..=1_000_000),
                rng.random_range(-1_000_000..=1_000_000),
            );
            let f = x.to_f64();
            let expected = if f.abs() < 1e-6 {
                x.sign()
            } else if f > 0.0 {
                Sign::Positive
            } else {
                Sign::Negative
            };
            assert_eq!(x.sign(), expected, "{x}");
        }
    }
}
