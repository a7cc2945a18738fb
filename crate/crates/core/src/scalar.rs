//! Scalar fields used for series coefficients.
//!
//! Every coefficient is a complex number stored as a `(re, im)` pair of a
//! real field. Two real fields are supported: `f64` (float mode) and
//! [`BigRational`] (exact mode). Code that has to work in both modes is
//! generic over [`Real`] and uses `Complex<R>` for coefficients.

use std::fmt::{self, Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Arithmetic mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// A real field that can back complex series coefficients.
pub trait Real:
    Num + Neg<Output = Self> + Clone + PartialOrd + Debug + Send + Sync + 'static
{
    const MODE: Mode;

    /// Slack allowed when testing boundary inequalities (zero in exact mode).
    fn boundary_tol() -> Self;

    fn to_f64(&self) -> f64;

    /// Converts a finite double. In exact mode the conversion is exact (the
    /// dyadic rational equal to `x`).
    fn from_f64(x: f64) -> Option<Self>;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_rational(q: &BigRational) -> Result<Self, Error>;

    /// Human-readable form: `p/q` in exact mode, shortest round-trip decimal
    /// in float mode.
    fn display(&self) -> String;
}

impl Real for f64 {
    const MODE: Mode = Mode::Float;

    fn boundary_tol() -> Self {
        1e-12
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(q: &BigRational) -> Result<Self, Error> {
        let x = Real::to_f64(q);
        x.is_finite().then_some(x).ok_or(Error::NonFinite)
    }

    fn display(&self) -> String {
        format!("{self}")
    }
}

impl Real for BigRational {
    const MODE: Mode = Mode::Exact;

    fn boundary_tol() -> Self {
        BigRational::zero()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(q: &BigRational) -> Result<Self, Error> {
        Ok(q.clone())
    }

    fn display(&self) -> String {
        format!("{self}")
    }
}

/// Complex number with exact rational parts.
pub type ExactComplex = Complex<BigRational>;

pub fn to_c64<R: Real>(z: &Complex<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn real<R: Real>(x: R) -> Complex<R> {
    Complex::new(x, R::zero())
}

pub fn int<R: Real>(n: i64) -> Complex<R> {
    real(R::from_ratio(n, 1))
}

/// Converts a float complex number into the target field.
pub fn from_c64<R: Real>(z: Complex<f64>) -> Result<Complex<R>, Error> {
    match (R::from_f64(z.re), R::from_f64(z.im)) {
        (Some(re), Some(im)) => Ok(Complex::new(re, im)),
        _ => Err(Error::NonFinite),
    }
}

pub fn is_real<R: Real>(z: &Complex<R>) -> bool {
    z.im.is_zero()
}

/// Parses a rational literal: `3`, `-7/4`, `0.125`, `1e-3`, `2.5E2`.
///
/// Decimal literals are read digit by digit, so `0.1` becomes exactly `1/10`.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&all_digits).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Parses a real number in the requested field.
pub fn parse_real<R: Real>(s: &str) -> Result<R, Error> {
    R::from_rational(&parse_rational(s)?)
}

/// Formats a complex value as `a`, `a+bi` or `a-bi`.
pub fn format_complex<R: Real>(z: &Complex<R>) -> String {
    if z.im.is_zero() {
        return z.re.display();
    }
    let im = z.im.clone();
    let (sign, mag) = if im < R::zero() {
        ('-', -im)
    } else {
        ('+', im)
    };
    let mag = if mag.is_one() {
        String::new()
    } else {
        mag.display()
    };
    if z.re.is_zero() {
        let sign = if sign == '-' { "-" } else { "" };
        format!("{sign}{mag}i")
    } else {
        format!("{}{sign}{mag}i", z.re.display())
    }
}
