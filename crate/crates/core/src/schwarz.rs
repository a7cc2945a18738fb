//! Initial coefficients of Schwarz functions and the admissible region they
//! range over for members of U(λ).
//!
//! A Schwarz function `ω(z) = c1 z + c2 z^2 + c3 z^3 + ...` maps the disk into
//! itself with `ω(0) = 0`, which gives `|c1| <= 1` and `|c2| <= 1 - |c1|^2`.
//! Membership of `f` in U(λ) adds two more constraints on the jet:
//!
//! ```text
//! t := |(1+λ)c2 - λc1^2| <= λ
//! |2(1+λ)c3 - 4λc1c2|    <= λ - t^2/λ
//! ```
//!
//! The sampler only emits jets satisfying all of the above.

use std::f64::consts::TAU;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{int, parse_rational, real, to_c64, Real};
use crate::ulambda::check_lambda;

/// `(c1, c2, c3)` of a Schwarz function.
#[derive(Clone, Debug, PartialEq)]
pub struct SchwarzJet<R: Real> {
    pub c1: Complex<R>,
    pub c2: Complex<R>,
    pub c3: Complex<R>,
}

impl<R: Real> SchwarzJet<R> {
    pub fn new(c1: Complex<R>, c2: Complex<R>, c3: Complex<R>) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn zero() -> Self {
        Self::new(Complex::zero(), Complex::zero(), Complex::zero())
    }

    /// The extremal jet `(1, 0, 0)`, i.e. `ω(z) = z`.
    pub fn corner() -> Self {
        Self::new(Complex::one(), Complex::zero(), Complex::zero())
    }

    /// The jet of `ω` as a series `c1 z + c2 z^2 + c3 z^3` of order 3.
    pub fn to_series(&self) -> crate::Series<R> {
        crate::Series::new(vec![
            Complex::zero(),
            self.c1.clone(),
            self.c2.clone(),
            self.c3.clone(),
        ])
        .expect("non-empty")
    }

    pub fn to_float(&self) -> SchwarzJet<f64> {
        SchwarzJet::new(to_c64(&self.c1), to_c64(&self.c2), to_c64(&self.c3))
    }

    pub fn to_record(&self) -> JetRecord {
        let f = self.to_float();
        JetRecord {
            c1: [f.c1.re, f.c1.im],
            c2: [f.c2.re, f.c2.im],
            c3: [f.c3.re, f.c3.im],
        }
    }

    /// Reads `{c1:[re,im], c2:[re,im], c3:[re,im]}`; parts may be numbers or
    /// rational strings such as `"1/3"`. Missing coefficients default to 0.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("jet JSON must be an object".into()))?;
        let part = |v: &Value| -> Result<R> {
            let q = match v {
                Value::Number(n) => {
                    let x = n
                        .as_f64()
                        .ok_or_else(|| Error::Parse(format!("bad number {n}")))?;
                    parse_rational(&format!("{x:e}"))?
                }
                Value::String(s) => parse_rational(s)?,
                other => return Err(Error::Parse(format!("bad jet component {other}"))),
            };
            R::from_rational(&q)
        };
        let coeff = |name: &str| -> Result<Complex<R>> {
            match obj.get(name) {
                None => Ok(Complex::zero()),
                Some(Value::Array(parts)) if parts.len() == 2 => {
                    Ok(Complex::new(part(&parts[0])?, part(&parts[1])?))
                }
                Some(other) => Err(Error::Parse(format!(
                    "{name} must be [re, im], got {other}"
                ))),
            }
        };
        Ok(Self::new(coeff("c1")?, coeff("c2")?, coeff("c3")?))
    }
}

impl SchwarzJet<f64> {
    /// Jet of `z ↦ e^{-iθ} ω(e^{iθ} z)`.
    pub fn rotate(&self, theta: f64) -> Self {
        let u = Complex::from_polar(1.0, theta);
        Self::new(self.c1 * u, self.c2 * u * u, self.c3 * u * u * u)
    }
}

/// Serialized form of a jet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetRecord {
    pub c1: [f64; 2],
    pub c2: [f64; 2],
    pub c3: [f64; 2],
}

impl From<JetRecord> for SchwarzJet<f64> {
    fn from(r: JetRecord) -> Self {
        SchwarzJet::new(
            Complex::new(r.c1[0], r.c1[1]),
            Complex::new(r.c2[0], r.c2[1]),
            Complex::new(r.c3[0], r.c3[1]),
        )
    }
}

/// Tests `|c1| <= 1` and `|c2| <= 1 - |c1|^2`, with the mode's boundary
/// tolerance.
pub fn is_schur_admissible<R: Real>(c1: &Complex<R>, c2: &Complex<R>) -> bool {
    let tol = R::boundary_tol();
    let n1 = c1.norm_sqr();
    if n1 > R::one() + tol.clone() {
        return false;
    }
    let room = R::one() - n1 + tol;
    room >= R::zero() && c2.norm_sqr() <= room.clone() * room
}

/// Values entering the U(λ) jet constraints.
///
/// `t` itself is a modulus and generally irrational, so it is stored squared;
/// `c3_slack = λ - t^2/λ` is then exact in exact mode.
#[derive(Clone, Debug, PartialEq)]
pub struct JetConstraintProfile<R: Real> {
    pub lambda: R,
    pub t_sqr: R,
    pub c3_slack: R,
    /// `|2(1+λ)c3 - 4λc1c2|^2`
    pub c3_term_sqr: R,
}

impl<R: Real> JetConstraintProfile<R> {
    pub fn t(&self) -> f64 {
        self.t_sqr.to_f64().max(0.0).sqrt()
    }

    /// `t <= λ`.
    pub fn satisfies_first(&self) -> bool {
        let bound = self.lambda.clone() + R::boundary_tol();
        self.t_sqr <= bound.clone() * bound
    }

    /// `|2(1+λ)c3 - 4λc1c2| <= λ - t^2/λ`.
    pub fn satisfies_second(&self) -> bool {
        let bound = self.c3_slack.clone() + R::boundary_tol();
        bound >= R::zero() && self.c3_term_sqr <= bound.clone() * bound
    }

    pub fn is_admissible(&self) -> bool {
        self.satisfies_first() && self.satisfies_second()
    }
}

pub fn jet_constraint_profile<R: Real>(
    lambda: &R,
    jet: &SchwarzJet<R>,
) -> Result<JetConstraintProfile<R>> {
    check_lambda(lambda)?;
    let lam = real(lambda.clone());
    let one_plus = Complex::<R>::one() + lam.clone();
    let first = one_plus.clone() * jet.c2.clone() - lam.clone() * jet.c1.clone() * jet.c1.clone();
    let t_sqr = first.norm_sqr();
    let c3_slack = lambda.clone() - t_sqr.clone() / lambda.clone();
    let second = int::<R>(2) * one_plus * jet.c3.clone()
        - int::<R>(4) * lam * jet.c1.clone() * jet.c2.clone();
    Ok(JetConstraintProfile {
        lambda: lambda.clone(),
        t_sqr,
        c3_slack,
        c3_term_sqr: second.norm_sqr(),
    })
}

/// Schur–Carlson plus both U(λ) constraints.
pub fn is_admissible<R: Real>(lambda: &R, jet: &SchwarzJet<R>) -> bool {
    is_schur_admissible(&jet.c1, &jet.c2)
        && jet_constraint_profile(lambda, jet).is_ok_and(|p| p.is_admissible())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleStrategy {
    Uniform,
    #[default]
    BoundaryBiased,
    Grid,
}

impl FromStr for SampleStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "boundary-biased" => Ok(Self::BoundaryBiased),
            "grid" => Ok(Self::Grid),
            other => Err(Error::Parse(format!("unknown strategy `{other}`"))),
        }
    }
}

impl std::fmt::Display for SampleStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::BoundaryBiased => "boundary-biased",
            Self::Grid => "grid",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerOptions {
    /// Restrict `c1` to the non-negative real axis.
    #[serde(default)]
    pub rotation_reduction: bool,
    /// Enforce only the Schur–Carlson constraints and set `c3 = 0`.
    /// Sufficient for functionals that do not involve `c3`.
    #[serde(default)]
    pub schur_only: bool,
}

/// Jets per independent RNG stream. Sample `i` always comes from stream
/// `i / BATCH_SIZE`, so any partition of the index range reproduces the
/// sequential sequence.
pub const BATCH_SIZE: usize = 4096;

const MAX_REJECTIONS: usize = 64;

/// Deterministic generator of admissible jets for a fixed λ.
#[derive(Clone, Debug)]
pub struct JetSampler {
    lambda: f64,
    seed: u64,
    strategy: SampleStrategy,
    options: SamplerOptions,
    count: usize,
    lattice_axis: usize,
}

impl JetSampler {
    pub fn new(
        lambda: f64,
        count: usize,
        seed: u64,
        strategy: SampleStrategy,
        options: SamplerOptions,
    ) -> Result<Self> {
        check_lambda(&lambda)?;
        if count == 0 {
            return Err(Error::OutOfRange("sample count must be at least 1".into()));
        }
        let dims = if options.rotation_reduction { 5 } else { 6 };
        let mut axis = 2usize;
        while axis.pow(dims) < count {
            axis += 1;
        }
        Ok(Self {
            lambda,
            seed,
            strategy,
            options,
            count,
            lattice_axis: axis,
        })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn batches(&self) -> usize {
        self.count.div_ceil(BATCH_SIZE)
    }

    /// Jets with indices in `[b * BATCH_SIZE, min((b+1) * BATCH_SIZE, count))`.
    pub fn batch(&self, b: usize) -> Vec<SchwarzJet<f64>> {
        let start = b * BATCH_SIZE;
        let end = (start + BATCH_SIZE).min(self.count);
        if start >= end {
            return Vec::new();
        }
        match self.strategy {
            SampleStrategy::Grid => {
                let lattice = Lattice::new(self.lambda, self.lattice_axis, self.options);
                let total = lattice.len();
                (start..end)
                    .map(|i| lattice.jet((i as u128 * total as u128 / self.count as u128) as usize))
                    .collect()
            }
            SampleStrategy::Uniform | SampleStrategy::BoundaryBiased => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(b as u64);
                (start..end).map(|_| self.draw(&mut rng)).collect()
            }
        }
    }

    pub fn all(&self) -> Vec<SchwarzJet<f64>> {
        (0..self.batches()).flat_map(|b| self.batch(b)).collect()
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> SchwarzJet<f64> {
        let biased = self.strategy == SampleStrategy::BoundaryBiased;
        let r1 = if biased {
            1.0 - rng.random::<f64>().powi(3)
        } else {
            rng.random::<f64>().sqrt()
        };
        let phase1 = if self.options.rotation_reduction {
            0.0
        } else {
            TAU * rng.random::<f64>()
        };
        let c1 = Complex::from_polar(r1, phase1);

        let c2 = if biased {
            let dir = TAU * rng.random::<f64>();
            let frac = 1.0 - rng.random::<f64>().powi(3);
            Complex::from_polar(frac * self.max_c2_radius(c1, dir), dir)
        } else {
            self.uniform_c2(c1, rng)
        };

        let c3 = if self.options.schur_only {
            Complex::zero()
        } else {
            let (center, radius) = c3_disk(self.lambda, c1, c2);
            let frac = if biased {
                1.0 - rng.random::<f64>().powi(3)
            } else {
                rng.random::<f64>().sqrt()
            };
            center + Complex::from_polar(frac * radius, TAU * rng.random::<f64>())
        };
        SchwarzJet::new(c1, c2, c3)
    }

    fn uniform_c2(&self, c1: Complex<f64>, rng: &mut ChaCha8Rng) -> Complex<f64> {
        let rho = (1.0 - c1.norm_sqr()).max(0.0);
        for _ in 0..MAX_REJECTIONS {
            let c2 =
                Complex::from_polar(rho * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>());
            if self.options.schur_only || t_value(self.lambda, c1, c2) <= self.lambda {
                return c2;
            }
        }
        // c2 = 0 always satisfies both constraints: t = λ|c1|^2 <= λ.
        Complex::zero()
    }

    /// Largest `s >= 0` with `s e^{i dir}` admissible for the given `c1`.
    fn max_c2_radius(&self, c1: Complex<f64>, dir: f64) -> f64 {
        max_c2_radius(self.lambda, c1, dir, self.options.schur_only)
    }
}

fn t_value(lambda: f64, c1: Complex<f64>, c2: Complex<f64>) -> f64 {
    ((1.0 + lambda) * c2 - lambda * c1 * c1).norm()
}

/// Feasible disk for `c3`: `|2(1+λ)c3 - 4λc1c2| <= λ - t^2/λ`.
fn c3_disk(lambda: f64, c1: Complex<f64>, c2: Complex<f64>) -> (Complex<f64>, f64) {
    let t = t_value(lambda, c1, c2);
    let slack = (lambda - t * t / lambda).max(0.0);
    let center = 2.0 * lambda * c1 * c2 / (1.0 + lambda);
    (center, slack / (2.0 * (1.0 + lambda)))
}

fn max_c2_radius(lambda: f64, c1: Complex<f64>, dir: f64, schur_only: bool) -> f64 {
    let rho = (1.0 - c1.norm_sqr()).max(0.0);
    if schur_only {
        return rho;
    }
    // |(1+λ) s e^{i dir} - b| = λ with b = λ c1^2, |b| <= λ, solved for s >= 0.
    let a = 1.0 + lambda;
    let b = lambda * c1 * c1;
    let proj = (Complex::from_polar(1.0, dir) * b.conj()).re;
    let disc = (proj * proj - (b.norm_sqr() - lambda * lambda)).max(0.0);
    let s_t = (proj + disc.sqrt()) / a;
    rho.min(s_t.max(0.0))
}

/// Regular lattice over `(|c1|, arg c1, c2 fraction, arg c2, c3 fraction, arg c3)`.
///
/// `|c1|` runs from 1 down to 0, so index 0 is the corner jet `(1, 0, 0)`.
#[derive(Clone, Copy, Debug)]
pub struct Lattice {
    lambda: f64,
    axis: usize,
    options: SamplerOptions,
}

impl Lattice {
    pub fn new(lambda: f64, axis: usize, options: SamplerOptions) -> Self {
        Self {
            lambda,
            axis: axis.max(2),
            options,
        }
    }

    fn dims(&self) -> u32 {
        if self.options.rotation_reduction {
            5
        } else {
            6
        }
    }

    pub fn len(&self) -> usize {
        self.axis.pow(self.dims())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn jet(&self, index: usize) -> SchwarzJet<f64> {
        let m = self.axis;
        let mut rest = index;
        let mut next = || {
            let d = rest % m;
            rest /= m;
            d
        };
        let level = |d: usize| d as f64 / (m - 1) as f64;
        let angle = |d: usize| TAU * d as f64 / m as f64;

        let r1 = 1.0 - level(next());
        let phase1 = if self.options.rotation_reduction {
            0.0
        } else {
            angle(next())
        };
        let c1 = Complex::from_polar(r1, phase1);
        let frac2 = level(next());
        let dir2 = angle(next());
        let c2 = Complex::from_polar(
            frac2 * max_c2_radius(self.lambda, c1, dir2, self.options.schur_only),
            dir2,
        );
        let frac3 = level(next());
        let dir3 = angle(next());
        let c3 = if self.options.schur_only {
            Complex::zero()
        } else {
            let (center, radius) = c3_disk(self.lambda, c1, c2);
            center + Complex::from_polar(frac3 * radius, dir3)
        };
        SchwarzJet::new(c1, c2, c3)
    }
}

/// Deterministic admissible jets; see [`JetSampler`].
pub fn sample_jets(
    lambda: f64,
    count: usize,
    seed: u64,
    strategy: SampleStrategy,
) -> Result<Vec<SchwarzJet<f64>>> {
    Ok(JetSampler::new(lambda, count, seed, strategy, SamplerOptions::default())?.all())
}
