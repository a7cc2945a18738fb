//! Truncated power series (Taylor jets) with complex coefficients.
//!
//! A [`Series`] of order `N` stores `c_0, ..., c_N`. Binary operations on
//! series of different orders first truncate both operands to the smaller
//! order, so the result is always valid to that order and no further.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{format_complex, int, Mode, Real};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct Series<R: Real> {
    coeffs: Vec<Complex<R>>,
}

impl<R: Real> Series<R> {
    /// Builds a series from `c_0..c_N`; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex<R>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse(
                "a series needs at least one coefficient".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn from_reals(coeffs: Vec<R>) -> Result<Self> {
        Self::new(
            coeffs
                .into_iter()
                .map(|c| Complex::new(c, R::zero()))
                .collect(),
        )
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, order)
    }

    /// The series `z` (zero when `order == 0`).
    pub fn variable(order: usize) -> Self {
        Self::monomial(1, order)
    }

    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = Complex::one();
        }
        s
    }

    pub fn constant(c: Complex<R>, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mode(&self) -> Mode {
        R::MODE
    }

    pub fn coeffs(&self) -> &[Complex<R>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<R>> {
        self.coeffs
    }

    /// Coefficient of `z^n`; zero past the stored order.
    pub fn coeff(&self, n: usize) -> Complex<R> {
        self.coeffs.get(n).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, Complex::zero());
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n)
                .map(|k| self.coeffs[k].clone() + other.coeffs[k].clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n)
                .map(|k| self.coeffs[k].clone() - other.coeffs[k].clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, k: &Complex<R>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Complex::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs: out }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = Complex::<R>::one() / c0.clone();
        let n = self.order();
        let mut out: Vec<Complex<R>> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Complex::<R>::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * out[k - j].clone();
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(Self { coeffs: out })
    }

    /// Taylor jet of `self ∘ inner`; `inner` must vanish at the origin.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroInnerConstant);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// Termwise derivative; the result has order `N - 1`.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() < 1 {
            return Err(Error::OrderTooSmall {
                min: 1,
                got: self.order(),
            });
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * int::<R>(k as i64))
                .collect(),
        })
    }

    /// Evaluates the jet as a polynomial at `z` (Horner).
    pub fn eval(&self, z: &Complex<R>) -> Complex<R> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    /// Drops the constant term and shifts down: `(s - c_0) / z`.
    pub fn shift_down(&self) -> Result<Self> {
        if self.order() < 1 {
            return Err(Error::OrderTooSmall {
                min: 1,
                got: self.order(),
            });
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Multiplies by `z`, raising the order by one.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn map<S: Real>(&self, f: impl Fn(&Complex<R>) -> Complex<S>) -> Series<S> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_float(&self) -> Series<f64> {
        self.map(crate::scalar::to_c64)
    }
}

impl Series<BigRational> {
    /// Exact series from float coefficients (each double converted exactly).
    pub fn from_float(s: &Series<f64>) -> Result<Self> {
        let coeffs = s
            .coeffs
            .iter()
            .map(|c| crate::scalar::from_c64::<BigRational>(*c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

impl<R: Real> fmt::Display for Series<R> {
    /// Writes `c_0 + c_1 z + ...` skipping zero terms, using `var` = `z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_polynomial(self, "z"))
    }
}

/// Renders a jet as a polynomial in `var`, e.g. `w - 2w^2 + 5w^3`.
pub fn format_polynomial<R: Real>(s: &Series<R>, var: &str) -> String {
    let mut out = String::new();
    for (k, c) in s.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let negative_real = c.im.is_zero() && c.re < R::zero();
        let body = if negative_real { -c.clone() } else { c.clone() };
        let mut term = match (k, body.is_one(), body.im.is_zero()) {
            (0, _, _) => format_complex(&body),
            (_, true, _) => String::new(),
            (_, false, true) => format_complex(&body),
            (_, false, false) => format!("({})", format_complex(&body)),
        };
        match k {
            0 => {}
            1 => term.push_str(var),
            _ => term.push_str(&format!("{var}^{k}")),
        }
        if out.is_empty() {
            if negative_real {
                out.push('-');
            }
        } else {
            out.push_str(if negative_real { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A series with `c_0 = 0` and `c_1 = 1` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedSeries<R: Real>(Series<R>);

impl<R: Real> NormalizedSeries<R> {
    pub fn new(series: Series<R>) -> Result<Self> {
        if series.order() < 1 || !series.coeffs[0].is_zero() || !series.coeffs[1].is_one() {
            return Err(Error::NotNormalized);
        }
        Ok(Self(series))
    }

    /// `z + a_2 z^2 + ... + a_N z^N` from the tail `[a_2, ..., a_N]`.
    pub fn from_tail(order: usize, tail: &[Complex<R>]) -> Result<Self> {
        if order < 1 {
            return Err(Error::OrderTooSmall { min: 1, got: order });
        }
        let mut s = Series::variable(order);
        for (k, c) in tail.iter().enumerate().take(order.saturating_sub(1)) {
            s.coeffs[k + 2] = c.clone();
        }
        Ok(Self(s))
    }

    pub fn identity(order: usize) -> Result<Self> {
        Self::from_tail(order, &[])
    }

    pub fn series(&self) -> &Series<R> {
        &self.0
    }

    pub fn into_series(self) -> Series<R> {
        self.0
    }

    /// Compositional inverse `F` with `f(F(w)) = w + O(w^{N+1})`.
    ///
    /// Each `A_n` enters the order-`n` coefficient of `f ∘ F` linearly with
    /// unit weight, so the coefficients are solved one order at a time.
    pub fn revert(&self) -> Self {
        let n = self.0.order();
        let mut inverse = Series::variable(n);
        for k in 2..=n {
            let residual = self
                .0
                .compose(&inverse)
                .expect("inverse jet has zero constant term");
            inverse.coeffs[k] = -residual.coeffs[k].clone();
        }
        Self(inverse)
    }

    /// `f ∘ g - w` for a candidate inverse `g`.
    pub fn composition_residual(&self, g: &Series<R>) -> Result<Series<R>> {
        let comp = self.0.compose(g)?;
        Ok(comp.sub(&Series::variable(comp.order())))
    }
}

impl<R: Real> std::ops::Deref for NormalizedSeries<R> {
    type Target = Series<R>;

    fn deref(&self) -> &Series<R> {
        &self.0
    }
}

impl<R: Real> fmt::Display for NormalizedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `(A_2, A_3, A_4)` of the inverse from `(a_2, a_3, a_4)` of the function.
pub fn inverse_coeffs_closed<R: Real>(
    a2: &Complex<R>,
    a3: &Complex<R>,
    a4: &Complex<R>,
) -> (Complex<R>, Complex<R>, Complex<R>) {
    let two = int::<R>(2);
    let five = int::<R>(5);
    let a2sq = a2.clone() * a2.clone();
    let big_a2 = -a2.clone();
    let big_a3 = -a3.clone() + two * a2sq.clone();
    let big_a4 = -a4.clone() + five.clone() * a2.clone() * a3.clone() - five * a2sq * a2.clone();
    (big_a2, big_a3, big_a4)
}

/// A series whose arithmetic mode is only known at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum AnySeries {
    Exact(Series<BigRational>),
    Float(Series<f64>),
}

impl AnySeries {
    pub fn mode(&self) -> Mode {
        match self {
            AnySeries::Exact(_) => Mode::Exact,
            AnySeries::Float(_) => Mode::Float,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            AnySeries::Exact(s) => s.order(),
            AnySeries::Float(s) => s.order(),
        }
    }

    fn mismatch(&self, other: &Self) -> Error {
        Error::ModeMismatch {
            left: self.mode(),
            right: other.mode(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AnySeries::Exact(a), AnySeries::Exact(b)) => Ok(AnySeries::Exact(a.mul(b))),
            (AnySeries::Float(a), AnySeries::Float(b)) => Ok(AnySeries::Float(a.mul(b))),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn compose(&self, inner: &Self) -> Result<Self> {
        match (self, inner) {
            (AnySeries::Exact(a), AnySeries::Exact(b)) => Ok(AnySeries::Exact(a.compose(b)?)),
            (AnySeries::Float(a), AnySeries::Float(b)) => Ok(AnySeries::Float(a.compose(b)?)),
            _ => Err(self.mismatch(inner)),
        }
    }

    pub fn reciprocal(&self) -> Result<Self> {
        Ok(match self {
            AnySeries::Exact(s) => AnySeries::Exact(s.reciprocal()?),
            AnySeries::Float(s) => AnySeries::Float(s.reciprocal()?),
        })
    }

    pub fn derivative(&self) -> Result<Self> {
        Ok(match self {
            AnySeries::Exact(s) => AnySeries::Exact(s.derivative()?),
            AnySeries::Float(s) => AnySeries::Float(s.derivative()?),
        })
    }

    /// Reverts a normalized series.
    pub fn revert(&self) -> Result<Self> {
        Ok(match self {
            AnySeries::Exact(s) => {
                AnySeries::Exact(NormalizedSeries::new(s.clone())?.revert().into_series())
            }
            AnySeries::Float(s) => {
                AnySeries::Float(NormalizedSeries::new(s.clone())?.revert().into_series())
            }
        })
    }

    pub fn truncate(&self, order: usize) -> Self {
        match self {
            AnySeries::Exact(s) => AnySeries::Exact(s.truncate(order)),
            AnySeries::Float(s) => AnySeries::Float(s.truncate(order)),
        }
    }

    pub fn to_float(&self) -> Series<f64> {
        match self {
            AnySeries::Exact(s) => s.to_float(),
            AnySeries::Float(s) => s.clone(),
        }
    }

    pub fn format(&self, var: &str) -> String {
        match self {
            AnySeries::Exact(s) => format_polynomial(s, var),
            AnySeries::Float(s) => format_polynomial(s, var),
        }
    }

    /// JSON array, lowest order first: `[re_num, re_den, im_num, im_den]`
    /// per coefficient in exact mode, `[re, im]` in float mode.
    pub fn to_json(&self) -> Value {
        match self {
            AnySeries::Exact(s) => Value::Array(
                s.coeffs()
                    .iter()
                    .map(|c| {
                        Value::Array(vec![
                            bigint_json(c.re.numer()),
                            bigint_json(c.re.denom()),
                            bigint_json(c.im.numer()),
                            bigint_json(c.im.denom()),
                        ])
                    })
                    .collect(),
            ),
            AnySeries::Float(s) => Value::Array(
                s.coeffs()
                    .iter()
                    .map(|c| serde_json::json!([c.re, c.im]))
                    .collect(),
            ),
        }
    }

    /// Parses either JSON layout; the mode is inferred from the entry width.
    pub fn from_json(value: &Value) -> Result<Self> {
        let entries = value
            .as_array()
            .ok_or_else(|| Error::Parse("series JSON must be an array".into()))?;
        let first = entries.first().and_then(Value::as_array).ok_or_else(|| {
            Error::Parse("series JSON must be a non-empty array of arrays".into())
        })?;
        match first.len() {
            4 => {
                let coeffs = entries
                    .iter()
                    .map(|e| {
                        let parts = e.as_array().filter(|p| p.len() == 4).ok_or_else(|| {
                            Error::Parse("exact coefficient needs 4 integers".into())
                        })?;
                        let re = ratio_json(&parts[0], &parts[1])?;
                        let im = ratio_json(&parts[2], &parts[3])?;
                        Ok(Complex::new(re, im))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnySeries::Exact(Series::new(coeffs)?))
            }
            2 => {
                let coeffs = entries
                    .iter()
                    .map(|e| {
                        let parts = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                            Error::Parse("float coefficient needs [re, im]".into())
                        })?;
                        let re = parts[0].as_f64();
                        let im = parts[1].as_f64();
                        match (re, im) {
                            (Some(re), Some(im)) => Ok(Complex::new(re, im)),
                            _ => Err(Error::Parse(
                                "float coefficient parts must be numbers".into(),
                            )),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnySeries::Float(Series::new(coeffs)?))
            }
            n => Err(Error::Parse(format!(
                "coefficient entries must have 4 (exact) or 2 (float) items, got {n}"
            ))),
        }
    }
}

fn bigint_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("expected an integer, got {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::Parse(format!("expected an integer, got `{s}`"))),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

fn ratio_json(num: &Value, den: &Value) -> Result<BigRational> {
    let den = bigint_from_json(den)?;
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(bigint_from_json(num)?, den))
}
