//! Numbers of the form `a + b·√d` with rational `a`, `b` and a square-free-ish
//! integer radicand `d`.
//!
//! Every intersection point of two rational circles lives in such a field.
//! Arithmetic is only defined between numbers of the same field (or with a
//! rational operand); comparisons work across fields by exact sign
//! evaluation after squaring. With the `float-filter` feature, signs first
//! go through a floating-point filter with a generous error bound; only
//! results the filter proves are taken from it, everything near zero falls
//! through to exact arithmetic. Without the feature no float is consulted.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Small primes used to pull square factors out of radicands.
const SQUARE_SIEVE_LIMIT: u32 = 1000;

/// `a + b·√d`. Invariant: `d == 0` iff `b == 0`, and `d` is never a perfect
/// square, so `a + b·√d == 0` iff `a == 0 && b == 0`.
#[derive(Clone, Debug)]
pub struct QuadNum {
    a: Rational,
    b: Rational,
    d: BigInt,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Relative error charged per floating-point step in filters, far above the
/// real rounding error.
const FILTER_EPS: f64 = 1e-12;

/// A float value with an absolute error bound.
#[derive(Clone, Copy, Debug)]
pub struct Approx {
    pub v: f64,
    pub err: f64,
}

impl Approx {
    /// `None` when the value is out of range or the filter is compiled out.
    pub fn of_rational(r: &Rational) -> Option<Approx> {
        if !cfg!(feature = "float-filter") {
            return None;
        }
        let v = r.to_f64()?;
        if !v.is_finite() || (v == 0.0) != r.is_zero() || (v != 0.0 && v.abs() < 1e-200) {
            return None;
        }
        Some(Approx {
            v,
            err: FILTER_EPS * v.abs(),
        })
    }

    /// The sign when the error bound separates the value from zero.
    pub fn sign(self) -> Option<Ordering> {
        (self.v.abs() > self.err)
            .then(|| self.v.partial_cmp(&0.0))
            .flatten()
    }
}

impl Mul for Approx {
    type Output = Approx;
    fn mul(self, o: Approx) -> Approx {
        let v = self.v * o.v;
        Approx {
            v,
            err: self.v.abs() * o.err
                + o.v.abs() * self.err
                + self.err * o.err
                + FILTER_EPS * v.abs()
                + 1e-300,
        }
    }
}

impl Add for Approx {
    type Output = Approx;
    fn add(self, o: Approx) -> Approx {
        Approx {
            v: self.v + o.v,
            err: self.err + o.err + FILTER_EPS * (self.v.abs() + o.v.abs()),
        }
    }
}

impl Sub for Approx {
    type Output = Approx;
    fn sub(self, o: Approx) -> Approx {
        Approx {
            v: self.v - o.v,
            err: self.err + o.err + FILTER_EPS * (self.v.abs() + o.v.abs()),
        }
    }
}

fn approx_quad(a: &Rational, b: &Rational, d: &BigInt) -> Option<Approx> {
    let a = Approx::of_rational(a)?;
    if b.is_zero() || d.is_zero() {
        return Some(a);
    }
    let b = Approx::of_rational(b)?;
    let s = d.to_f64().filter(|x| x.is_finite())?.sqrt();
    let bs = b.v * s;
    Some(Approx {
        v: a.v + bs,
        err: a.err + 2.0 * FILTER_EPS * (a.v.abs() + bs.abs()),
    })
}

fn sign_of(r: &Rational) -> Ordering {
    r.numer().sign().cmp_zero()
}

trait CmpZero {
    fn cmp_zero(self) -> Ordering;
}

impl CmpZero for Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        (2..SQUARE_SIEVE_LIMIT)
            .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
            .collect()
    })
}

/// Splits a positive integer into `f²·g`, removing small square factors and
/// detecting a perfect-square remainder.
fn extract_square(mut n: BigInt) -> (BigInt, BigInt) {
    let mut f = BigInt::one();
    for &p in small_primes() {
        let sq = p * p;
        if n < BigInt::from(sq) {
            break;
        }
        while (&n % sq).is_zero() {
            n /= sq;
            f *= p;
        }
    }
    if let Some(r) = is_perfect_square(&n) {
        return (f * r, BigInt::one());
    }
    (f, n)
}

/// Sign of `a + b·√d` for `d ≥ 0`.
fn sign_quad(a: &Rational, b: &Rational, d: &BigInt) -> Ordering {
    let sa = sign_of(a);
    let sb = if d.is_zero() {
        Ordering::Equal
    } else {
        sign_of(b)
    };
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    if let Some(sign) = approx_quad(a, b, d).and_then(Approx::sign) {
        return sign;
    }
    // Opposite signs: compare a² with b²·d.
    let lhs = a * a;
    let rhs = b * b * Rational::from_integer(d.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Sign of `u + v·√e` where `u` and `v` share a field and `e ≥ 0` is an
/// integer radicand from a possibly different field.
pub fn sign_ext(u: &QuadNum, v: &QuadNum, e: &BigInt) -> Ordering {
    let su = u.signum();
    let sv = if e.is_zero() {
        Ordering::Equal
    } else {
        v.signum()
    };
    if sv == Ordering::Equal {
        return su;
    }
    if su == Ordering::Equal || su == sv {
        return sv;
    }
    let w = &(u * u) - &(&(v * v) * &QuadNum::from(Rational::from_integer(e.clone())));
    match w.signum() {
        Ordering::Greater => su,
        Ordering::Less => sv,
        Ordering::Equal => Ordering::Equal,
    }
}

impl QuadNum {
    /// Builds `a + b·√d`, normalizing the radicand. Panics if `d < 0`.
    pub fn new(a: Rational, b: Rational, d: Rational) -> Self {
        assert!(!d.is_negative(), "negative radicand");
        if b.is_zero() || d.is_zero() {
            return QuadNum::from(a);
        }
        // √(p/q) = √(p·q)/q
        let (p, q) = (d.numer().clone(), d.denom().clone());
        let b = b / Rational::from_integer(q.clone());
        let (f, g) = extract_square(p * q);
        let b = b * Rational::from_integer(f);
        if g.is_one() {
            QuadNum::from(a + b)
        } else {
            QuadNum { a, b, d: g }
        }
    }

    pub fn zero() -> Self {
        QuadNum::from(Rational::zero())
    }

    pub fn int(n: i64) -> Self {
        QuadNum::from(rat(n))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Integer radicand; zero for rational values.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        sign_quad(&self.a, &self.b, &self.d)
    }

    /// True when both numbers can be combined arithmetically.
    pub fn compatible(&self, other: &QuadNum) -> bool {
        self.d.is_zero() || other.d.is_zero() || self.d == other.d
    }

    fn joint_radicand(&self, other: &QuadNum) -> BigInt {
        assert!(
            self.compatible(other),
            "radicand mismatch: √{} vs √{}",
            self.d,
            other.d
        );
        if self.d.is_zero() {
            other.d.clone()
        } else {
            self.d.clone()
        }
    }

    fn build(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() || d.is_zero() {
            QuadNum::from(a)
        } else {
            QuadNum { a, b, d }
        }
    }

    pub fn conj(&self) -> Self {
        QuadNum::build(self.a.clone(), -self.b.clone(), self.d.clone())
    }

    /// Field norm `a² − b²d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(QuadNum::build(&c.a / &n, &c.b / &n, c.d))
    }

    pub fn div(&self, other: &QuadNum) -> Option<Self> {
        other.inv().map(|i| self * &i)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadNum::build(&self.a * r, &self.b * r, self.d.clone())
    }

    /// Exact comparison, valid across different fields.
    pub fn cmp_exact(&self, other: &QuadNum) -> Ordering {
        if let Some(sign) = self
            .approx()
            .zip(other.approx())
            .and_then(|(x, y)| (x - y).sign())
        {
            return sign;
        }
        if self.compatible(other) {
            return (self - other).signum();
        }
        // (a1 − a2 + b1√d1) + (−b2)·√d2
        let u = QuadNum::build(&self.a - &other.a, self.b.clone(), self.d.clone());
        let v = QuadNum::from(-other.b.clone());
        sign_ext(&u, &v, &other.d)
    }

    /// Splits the product of two numbers from different fields as
    /// `self·other = u + v·√e`, with `u`, `v` in `self`'s field and `e` the
    /// radicand of `other`.
    pub fn mul_split(&self, other: &QuadNum) -> (QuadNum, QuadNum) {
        (self.scale(&other.a), self.scale(&other.b))
    }

    /// Float value with a conservative error bound, `None` outside the
    /// usable f64 range.
    pub fn approx(&self) -> Option<Approx> {
        approx_quad(&self.a, &self.b, &self.d)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        a + b * d.sqrt()
    }
}

impl From<Rational> for QuadNum {
    fn from(a: Rational) -> Self {
        QuadNum {
            a,
            b: Rational::zero(),
            d: BigInt::zero(),
        }
    }
}

impl PartialEq for QuadNum {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for QuadNum {}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl<'a> Add<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &QuadNum) -> QuadNum {
        let d = self.joint_radicand(rhs);
        QuadNum::build(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl<'a> Sub<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: &QuadNum) -> QuadNum {
        let d = self.joint_radicand(rhs);
        QuadNum::build(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl<'a> Mul<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &QuadNum) -> QuadNum {
        let d = self.joint_radicand(rhs);
        let dr = Rational::from_integer(d.clone());
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dr;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadNum::build(a, b, d)
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::build(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return fmt_rational(&self.a, f);
        }
        if !self.a.is_zero() {
            fmt_rational(&self.a, f)?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        fmt_rational(&self.b, f)?;
        write!(f, "*sqrt({})", self.d)
    }
}
