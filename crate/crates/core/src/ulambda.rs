//! The class U(λ): functions `f(z) = z + a2 z^2 + ...` in the unit disk with
//! `|(z/f(z))^2 f'(z) - 1| < λ`, restricted to those satisfying
//! `f(z)/z = 1/((1 - ω(z))(1 - λω(z)))` for a Schwarz function `ω`.

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{int, real, to_c64, Real};
use crate::schwarz::SchwarzJet;
use crate::series::{inverse_coeffs_closed, NormalizedSeries, Series};

pub fn check_lambda<R: Real>(lambda: &R) -> Result<()> {
    if *lambda > R::zero() && *lambda <= R::one() {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda.display()))
    }
}

/// The class parameter λ ∈ (0, 1]; the arithmetic mode is the type `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct ULambdaParams<R: Real> {
    lambda: R,
}

impl<R: Real> ULambdaParams<R> {
    pub fn new(lambda: R) -> Result<Self> {
        check_lambda(&lambda)?;
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> &R {
        &self.lambda
    }

    fn lam(&self) -> Complex<R> {
        real(self.lambda.clone())
    }

    /// `σ_n(λ) = 1 + λ + ... + λ^n`, which equals `(1 - λ^{n+1})/(1 - λ)` for
    /// λ < 1 and `n + 1` at λ = 1.
    pub fn sigma(&self, n: usize) -> R {
        (0..n).fold(R::one(), |acc, _| acc * self.lambda.clone() + R::one())
    }
}

/// `(a2, a3, a4)` of `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectTriple<R: Real> {
    pub a2: Complex<R>,
    pub a3: Complex<R>,
    pub a4: Complex<R>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InverseSource {
    ClosedForm,
    Reversion,
}

/// `(A2, A3, A4)` of `f^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseTriple<R: Real> {
    pub a2: Complex<R>,
    pub a3: Complex<R>,
    pub a4: Complex<R>,
    pub source: InverseSource,
}

impl<R: Real> InverseTriple<R> {
    pub fn values(&self) -> [Complex<R>; 3] {
        [self.a2.clone(), self.a3.clone(), self.a4.clone()]
    }

    /// Same coefficients, ignoring provenance.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.values() == other.values()
    }
}

pub fn direct_coeffs<R: Real>(params: &ULambdaParams<R>, jet: &SchwarzJet<R>) -> DirectTriple<R> {
    let s1 = real(params.sigma(1));
    let s2 = real(params.sigma(2));
    let s3 = real(params.sigma(3));
    let SchwarzJet { c1, c2, c3 } = jet;
    DirectTriple {
        a2: s1.clone() * c1.clone(),
        a3: s1.clone() * c2.clone() + s2.clone() * c1.clone() * c1.clone(),
        a4: s1 * c3.clone()
            + int::<R>(2) * s2 * c1.clone() * c2.clone()
            + s3 * c1.clone() * c1.clone() * c1.clone(),
    }
}

/// Inverse coefficients straight from the jet.
pub fn inverse_coeffs<R: Real>(params: &ULambdaParams<R>, jet: &SchwarzJet<R>) -> InverseTriple<R> {
    let lam = params.lam();
    let one = Complex::<R>::one();
    let lam2 = lam.clone() * lam.clone();
    let one_plus = one.clone() + lam.clone();
    let p3 = one.clone() + int::<R>(3) * lam.clone() + lam2.clone();
    let p4 = int::<R>(3) + int::<R>(8) * lam.clone() + int::<R>(3) * lam2.clone();
    let p5 = one_plus.clone() * (one + int::<R>(5) * lam + lam2);
    let SchwarzJet { c1, c2, c3 } = jet;
    let c1sq = c1.clone() * c1.clone();
    InverseTriple {
        a2: -(one_plus.clone() * c1.clone()),
        a3: -(one_plus.clone() * c2.clone()) + p3 * c1sq.clone(),
        a4: -(one_plus * c3.clone()) + p4 * c1.clone() * c2.clone() - p5 * c1sq * c1.clone(),
        source: InverseSource::ClosedForm,
    }
}

/// Inverse coefficients by composing the general inversion formulas with
/// [`direct_coeffs`].
pub fn inverse_coeffs_via_direct<R: Real>(
    params: &ULambdaParams<R>,
    jet: &SchwarzJet<R>,
) -> InverseTriple<R> {
    let d = direct_coeffs(params, jet);
    let (a2, a3, a4) = inverse_coeffs_closed(&d.a2, &d.a3, &d.a4);
    InverseTriple {
        a2,
        a3,
        a4,
        source: InverseSource::ClosedForm,
    }
}

/// Inverse coefficients by building the order-4 jet of `f` and reverting it.
pub fn inverse_coeffs_via_reversion<R: Real>(
    params: &ULambdaParams<R>,
    jet: &SchwarzJet<R>,
) -> InverseTriple<R> {
    let f = series_from_schwarz(params, &jet.to_series(), 4).expect("jet series has ω(0) = 0");
    let inv = f.revert();
    InverseTriple {
        a2: inv.coeff(2),
        a3: inv.coeff(3),
        a4: inv.coeff(4),
        source: InverseSource::Reversion,
    }
}

/// Jet of `f` of order `n` from `f(z)/z = Σ σ_k(λ) ω(z)^k`.
///
/// `omega` is read as a polynomial: coefficients past its stored order are
/// taken as zero.
pub fn series_from_schwarz<R: Real>(
    params: &ULambdaParams<R>,
    omega: &Series<R>,
    n: usize,
) -> Result<NormalizedSeries<R>> {
    if n < 1 {
        return Err(Error::OrderTooSmall { min: 1, got: n });
    }
    if !omega.coeff(0).is_zero() {
        return Err(Error::NonzeroInnerConstant);
    }
    let inner_order = n - 1;
    let omega = omega.truncate(inner_order);
    let outer = Series::from_reals((0..=inner_order).map(|k| params.sigma(k)).collect())?;
    let quotient = outer.compose(&omega)?;
    NormalizedSeries::new(quotient.shift_up())
}

/// Taylor jet of `z / ((1 - z)(1 - λz))`.
pub fn extremal_function<R: Real>(
    params: &ULambdaParams<R>,
    n: usize,
) -> Result<NormalizedSeries<R>> {
    if n < 1 {
        return Err(Error::OrderTooSmall { min: 1, got: n });
    }
    let mut coeffs = vec![Complex::zero()];
    coeffs.extend((0..n).map(|k| real(params.sigma(k))));
    NormalizedSeries::new(Series::new(coeffs)?)
}

/// Jet of the inverse of the extremal function.
///
/// The first coefficients are
/// `w - (1+λ)w^2 + (1+3λ+λ^2)w^3 - (1+λ)(1+5λ+λ^2)w^4`; higher ones come
/// from reversion.
pub fn extremal_inverse<R: Real>(
    params: &ULambdaParams<R>,
    n: usize,
) -> Result<NormalizedSeries<R>> {
    let reverted = extremal_function(params, n)?.revert().into_series();
    let closed = inverse_coeffs(params, &SchwarzJet::corner());
    let mut coeffs = reverted.into_coeffs();
    for (k, value) in [(2, closed.a2), (3, closed.a3), (4, closed.a4)] {
        if k < coeffs.len() {
            coeffs[k] = value;
        }
    }
    NormalizedSeries::new(Series::new(coeffs)?)
}

/// `A3 - μ A2^2`.
pub fn fekete_szego_value<R: Real>(
    params: &ULambdaParams<R>,
    jet: &SchwarzJet<R>,
    mu: &Complex<R>,
) -> Complex<R> {
    let inv = inverse_coeffs(params, jet);
    inv.a3 - mu.clone() * inv.a2.clone() * inv.a2
}

/// `-((1+λ)c2 - λc1^2) + (1-μ)(1+λ)^2 c1^2`, algebraically equal to
/// [`fekete_szego_value`].
pub fn fekete_szego_regrouped<R: Real>(
    params: &ULambdaParams<R>,
    jet: &SchwarzJet<R>,
    mu: &Complex<R>,
) -> Complex<R> {
    let lam = params.lam();
    let one = Complex::<R>::one();
    let one_plus = one.clone() + lam.clone();
    let c1sq = jet.c1.clone() * jet.c1.clone();
    let inner = one_plus.clone() * jet.c2.clone() - lam * c1sq.clone();
    -inner + (one - mu.clone()) * one_plus.clone() * one_plus * c1sq
}

/// `|A3 - μ A2^2|`.
pub fn fekete_szego<R: Real>(
    params: &ULambdaParams<R>,
    jet: &SchwarzJet<R>,
    mu: &Complex<R>,
) -> f64 {
    to_c64(&fekete_szego_value(params, jet, mu)).norm()
}

/// Upper bounds for `|A2|`, `|A3|`, `|A4|`.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoreticalBounds<R: Real> {
    pub b2: R,
    pub b3: R,
    pub b4: R,
}

impl<R: Real> TheoreticalBounds<R> {
    pub fn as_array(&self) -> [R; 3] {
        [self.b2.clone(), self.b3.clone(), self.b4.clone()]
    }
}

pub fn theoretical_bounds<R: Real>(params: &ULambdaParams<R>) -> TheoreticalBounds<R> {
    let l = params.lambda.clone();
    let one = R::one();
    let l2 = l.clone() * l.clone();
    let b2 = one.clone() + l.clone();
    let b3 = one.clone() + R::from_ratio(3, 1) * l.clone() + l2.clone();
    let b4 = b2.clone() * (one + R::from_ratio(5, 1) * l + l2);
    TheoreticalBounds { b2, b3, b4 }
}

/// `λ + |1 - μ|(1+λ)^2`.
pub fn fekete_szego_bound<R: Real>(params: &ULambdaParams<R>, mu: &Complex<R>) -> f64 {
    let l = params.lambda.to_f64();
    let mu = to_c64(mu);
    l + (Complex::new(1.0, 0.0) - mu).norm() * (1.0 + l) * (1.0 + l)
}

/// Exact form of [`fekete_szego_bound`] for real `μ`.
pub fn fekete_szego_bound_real<R: Real>(params: &ULambdaParams<R>, mu: &R) -> R {
    let l = params.lambda.clone();
    let diff = R::one() - mu.clone();
    let abs = if diff < R::zero() { -diff } else { diff };
    let one_plus = R::one() + l.clone();
    l + abs * one_plus.clone() * one_plus
}

/// A function whose defect can be evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionModel<R: Real> {
    /// A truncated Taylor jet; evaluations are approximate near the circle.
    Series(NormalizedSeries<R>),
    /// `z / ((1 - z)(1 - λz))` in closed form (λ = 1 is the Koebe function).
    Extremal(R),
}

impl<R: Real> FunctionModel<R> {
    pub fn identity() -> Self {
        FunctionModel::Series(NormalizedSeries::identity(1).expect("order 1"))
    }

    pub fn koebe() -> Self {
        FunctionModel::Extremal(R::one())
    }

    pub fn is_jet(&self) -> bool {
        matches!(self, FunctionModel::Series(_))
    }
}

/// `g(z) - z g'(z) - 1` with `g = z/f`, which equals `(z/f)^2 f' - 1`.
pub fn defect<R: Real>(f: &FunctionModel<R>, z: &Complex<R>) -> Result<Complex<R>> {
    let one = Complex::<R>::one();
    match f {
        FunctionModel::Series(s) => {
            if !z.is_zero() && s.eval(z).is_zero() {
                return Err(Error::ZeroOfFunction);
            }
            let g = s.shift_down()?.reciprocal()?;
            let g_value = g.eval(z);
            let dg_value = if g.order() == 0 {
                Complex::zero()
            } else {
                g.derivative()?.eval(z)
            };
            Ok(g_value - z.clone() * dg_value - one)
        }
        FunctionModel::Extremal(lambda) => {
            let lam = real(lambda.clone());
            if z.clone() == one || lam.clone() * z.clone() == one {
                return Err(Error::ZeroOfFunction);
            }
            let g_value = (one.clone() - z.clone()) * (one.clone() - lam.clone() * z.clone());
            let dg_value = -(one.clone() + lam.clone()) + int::<R>(2) * lam * z.clone();
            Ok(g_value - z.clone() * dg_value - one)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub lambda: f64,
    pub radius: f64,
    pub samples: usize,
    pub max_defect: f64,
    pub argmax_theta: f64,
    pub argmax_z: [f64; 2],
    /// `max_defect < λ` on the sampled circle.
    pub member: bool,
    /// The input was a truncated jet, so the verdict is approximate.
    pub jet_approximate: bool,
    #[serde(skip)]
    pub profile: Vec<(f64, f64)>,
}

impl MembershipVerdict {
    pub fn label(&self) -> &'static str {
        if self.member {
            "member-at-radius"
        } else {
            "fails"
        }
    }

    /// `theta,abs_defect` rows.
    pub fn profile_csv(&self) -> String {
        let mut out = String::from("theta,abs_defect\n");
        for (theta, value) in &self.profile {
            out.push_str(&format!("{theta},{value}\n"));
        }
        out
    }
}

/// Samples `|defect|` at `m` equispaced points of `|z| = r`. Ties in the
/// maximum go to the smallest sample index.
pub fn membership_scan(
    f: &FunctionModel<f64>,
    lambda: f64,
    radius: f64,
    samples: usize,
) -> Result<MembershipVerdict> {
    check_lambda(&lambda)?;
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::OutOfRange(format!(
            "radius must lie in (0, 1), got {radius}"
        )));
    }
    if samples < 8 {
        return Err(Error::OutOfRange(format!(
            "need at least 8 samples, got {samples}"
        )));
    }
    let profile: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / samples as f64;
            let z = Complex::from_polar(radius, theta);
            defect(f, &z).map(|d| (theta, d.norm()))
        })
        .collect::<Result<_>>()?;
    let (theta, max_defect) = profile
        .iter()
        .copied()
        .reduce(|best, p| if p.1 > best.1 { p } else { best })
        .expect("at least 8 samples");
    let z = Complex::from_polar(radius, theta);
    Ok(MembershipVerdict {
        lambda,
        radius,
        samples,
        max_defect,
        argmax_theta: theta,
        argmax_z: [z.re, z.im],
        member: max_defect < lambda,
        jet_approximate: f.is_jet(),
        profile,
    })
}

/// Solves `(1 - ω)(1 - λω) = z/f` for the jet of `ω` with `ω(0) = 0`.
///
/// Returns a series of order `N - 1` for `f` of order `N`. Boundary sampling
/// of `|ω|` is left to the caller.
pub fn subordination_witness<R: Real>(
    params: &ULambdaParams<R>,
    f: &NormalizedSeries<R>,
) -> Result<Series<R>> {
    let g = f.shift_down()?.reciprocal()?;
    let lam = params.lam();
    let one_plus = Complex::<R>::one() + lam.clone();
    let n = g.order();
    let mut omega: Vec<Complex<R>> = vec![Complex::zero(); n + 1];
    for k in 1..=n {
        let mut square = Complex::zero();
        for i in 1..k {
            square = square + omega[i].clone() * omega[k - i].clone();
        }
        omega[k] = (lam.clone() * square - g.coeff(k)) / one_plus.clone();
    }
    Series::new(omega)
}
