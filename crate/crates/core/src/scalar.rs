//! Coefficient fields and the q-series primitives shared by the other modules.
//!
//! Exact computations run over [`Rational`] with the parameters supplied as
//! square roots `a = q^{1/2}`, `b = t^{1/2}`, so every half-integer power of
//! `q` and `t` stays rational. Floating-point computations use `f64` for
//! coefficients and [`Complex64`] for evaluation.

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{Integer, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A field the polynomial machinery can compute in.
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + Send + Sync + 'static {
    /// Exact fields compare denominators against zero; float fields use a threshold.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;

    fn from_i128(v: i128) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }
    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    /// True when `self` must be treated as a vanishing denominator.
    fn is_degenerate(&self) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() < 1e-13
        }
    }

    fn powi(&self, e: i32) -> Self {
        let mut base = if e < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn checked_inv(&self, what: &str) -> Result<Self> {
        if self.is_degenerate() {
            Err(Error::Degenerate(what.to_string()))
        } else {
            Ok(Self::one() / self.clone())
        }
    }

    /// A nonzero factor making all of `values` cheap to combine; for
    /// rationals it clears every denominator. Only used where an overall
    /// scale is irrelevant.
    fn common_scale(_values: &[Self]) -> Self {
        Self::one()
    }

    /// `sum_k a_k b_k v_k` with small integer factors.
    fn integer_weighted_sum(terms: &[(i128, i128, &Self)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, (a, b, v)| {
            acc + Self::from_i128(*a) * Self::from_i128(*b) * (*v).clone()
        })
    }

    /// JSON encoding used in reports: `{numerator, denominator}` for exact
    /// values, `{float}` or `{re, im}` otherwise.
    fn to_json(&self) -> serde_json::Value;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
    fn common_scale(values: &[Self]) -> Self {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for v in values.iter().filter(|v| !v.is_zero()) {
            den = den.lcm(v.denom());
            num = num.gcd(v.numer());
        }
        if num.is_zero() {
            return Self::one();
        }
        Rational::new(den, num)
    }
    fn integer_weighted_sum(terms: &[(i128, i128, &Self)]) -> Self {
        // With integral values (see `common_scale`) no gcd is needed until the end.
        if terms.iter().all(|(_, _, v)| v.is_integer()) {
            let mut acc = BigInt::zero();
            for (a, b, v) in terms {
                acc += BigInt::from(*a) * BigInt::from(*b) * v.numer();
            }
            return Rational::from_integer(acc);
        }
        terms.iter().fold(Self::zero(), |acc, (a, b, v)| {
            acc + Self::from_i128(*a) * Self::from_i128(*b) * (*v).clone()
        })
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "numerator": self.numer().to_string(), "denominator": self.denom().to_string() })
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn conj(&self) -> Self {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn from_i128(v: i128) -> Self {
        v as f64
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "float": self })
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_i128(v: i128) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "re": self.re, "im": self.im })
    }
}

/// Embedding of coefficients of type `F` into the evaluation field `Self`.
pub trait Lift<F>: Scalar {
    fn lift(v: &F) -> Self;
}

impl<F: Scalar> Lift<F> for F {
    fn lift(v: &F) -> Self {
        v.clone()
    }
}

impl Lift<Rational> for f64 {
    fn lift(v: &Rational) -> Self {
        rational_to_f64(v)
    }
}

impl Lift<Rational> for Complex64 {
    fn lift(v: &Rational) -> Self {
        Complex64::new(rational_to_f64(v), 0.0)
    }
}

impl Lift<f64> for Complex64 {
    fn lift(v: &f64) -> Self {
        Complex64::new(*v, 0.0)
    }
}

/// Correctly rounded for all magnitudes we meet; big numerators and
/// denominators are scaled before the division.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift > 0 {
        Rational::new(r.numer().clone(), r.denom().clone() << (shift as usize))
    } else {
        Rational::new(r.numer().clone() << ((-shift) as usize), r.denom().clone())
    };
    let v = scaled.to_integer().to_f64().unwrap_or(f64::NAN);
    v * 2f64.powi(shift as i32)
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Ok(r) = Rational::from_str(s) {
        return Ok(r);
    }
    // decimal literals such as "0.7"
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let n = BigInt::from_str(&digits).map_err(|_| Error::Parse(s.to_string()))?;
        let d = num::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    Err(Error::Parse(s.to_string()))
}

/// Which parameter a half-power refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Q,
    T,
}

/// The deformation parameters, stored through their square roots
/// `a = q^{1/2}` and `b = t^{1/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSet<F> {
    pub a: F,
    pub b: F,
}

impl<F: Scalar> ParamSet<F> {
    pub fn from_sqrt(a: F, b: F) -> Self {
        ParamSet { a, b }
    }

    pub fn q(&self) -> F {
        self.a.clone() * self.a.clone()
    }

    pub fn t(&self) -> F {
        self.b.clone() * self.b.clone()
    }

    /// `q^{r/2}` or `t^{r/2}`.
    pub fn half_power(&self, base: Base, r: i32) -> F {
        match base {
            Base::Q => self.a.powi(r),
            Base::T => self.b.powi(r),
        }
    }

    /// Parameters `(q^{-1}, t^{-1})`.
    pub fn inverted(&self) -> Self {
        ParamSet {
            a: F::one() / self.a.clone(),
            b: F::one() / self.b.clone(),
        }
    }

    /// Parameters `(t, q)`.
    pub fn swapped(&self) -> Self {
        ParamSet { a: self.b.clone(), b: self.a.clone() }
    }

    pub fn lift<E: Lift<F>>(&self) -> ParamSet<E> {
        ParamSet { a: E::lift(&self.a), b: E::lift(&self.b) }
    }

    pub fn to_f64(&self) -> ParamSet<f64> {
        ParamSet {
            a: self.a.to_c64().re,
            b: self.b.to_c64().re,
        }
    }
}

impl ParamSet<Rational> {
    /// `q = 0.49`, `t = 0.25`.
    pub fn default_exact() -> Self {
        ParamSet {
            a: Rational::new(7.into(), 10.into()),
            b: Rational::new(1.into(), 2.into()),
        }
    }
}

impl ParamSet<f64> {
    pub fn from_qt(q: f64, t: f64) -> Result<Self> {
        if !(q > 0.0 && t > 0.0) {
            return Err(Error::InvalidParams(format!("need q, t > 0, got q={q}, t={t}")));
        }
        Ok(ParamSet { a: q.sqrt(), b: t.sqrt() })
    }

    /// `M(q,t) = max(sqrt(q/t), sqrt(t/q))`.
    pub fn max_ratio(&self) -> f64 {
        let r = self.a / self.b;
        r.max(1.0 / r)
    }

    /// The default regime `0 < q < 1`, `0 < t < 1`.
    pub fn validate_regime(&self) -> Result<()> {
        let (q, t) = (self.a * self.a, self.b * self.b);
        if q > 0.0 && q < 1.0 && t > 0.0 && t < 1.0 && self.a > 0.0 && self.b > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("need 0<q<1 and 0<t<1, got q={q}, t={t}")))
        }
    }
}

/// Truncated q-Pochhammer symbol `prod_{k<K} (1 - z q^k)`.
pub fn qpochhammer<F: Scalar>(z: &F, q: &F, truncation: usize) -> F {
    let mut acc = F::one();
    let mut zk = z.clone();
    for _ in 0..truncation {
        acc = acc * (F::one() - zk.clone());
        zk = zk * q.clone();
    }
    acc
}

/// Relative truncation error bound `|z| |q|^K / (1 - |q|)` for the
/// truncated product (first order in the tail).
pub fn qpochhammer_tail_bound(z_abs: f64, q_abs: f64, truncation: usize) -> f64 {
    z_abs * q_abs.powi(truncation as i32) / (1.0 - q_abs)
}

/// `(1 - q^r) / (1 - t^r)`, guarded against `t^r = 1`.
pub fn qt_ratio<F: Scalar>(q: &F, t: &F, r: u32) -> Result<F> {
    let den = F::one() - t.powi(r as i32);
    Ok((F::one() - q.powi(r as i32)) * den.checked_inv("1 - t^r")?)
}
