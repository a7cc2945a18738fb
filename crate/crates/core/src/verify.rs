//! Search-based verification of the coefficient bounds, and the two-variable
//! analysis of the `|A4|` estimate.
//!
//! For `|A4|` the estimate reduces to maximizing
//!
//! ```text
//! h(t) = λ - t^2/λ + 6(1+λ)|c1| t + 2(1+λ)^3 |c1|^3,    0 <= t <= λ
//! ```
//!
//! a concave parabola in `t` with vertex `t0 = 3λ(1+λ)|c1|`. The vertex lies
//! inside `[0, λ]` exactly when `|c1| <= 1/(3(1+λ))` (case one); otherwise
//! the maximum sits at `t = λ` (case two).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_complex, Real};
use crate::schwarz::{
    JetRecord, JetSampler, Lattice, SampleStrategy, SamplerOptions, SchwarzJet, BATCH_SIZE,
};
use crate::ulambda::{
    check_lambda, fekete_szego, fekete_szego_bound, inverse_coeffs, theoretical_bounds,
    ULambdaParams,
};

fn r<T: Real>(n: i64) -> T {
    T::from_ratio(n, 1)
}

fn check_unit<T: Real>(name: &str, x: &T, upper: &T) -> Result<()> {
    if *x < T::zero() || *x > *upper {
        return Err(Error::OutOfRange(format!(
            "{name} = {} outside [0, {}]",
            x.display(),
            upper.display()
        )));
    }
    Ok(())
}

/// `λ - t^2/λ + 6(1+λ)c t + 2(1+λ)^3 c^3` with `c = |c1|`.
pub fn h_function<T: Real>(lambda: &T, c1_abs: &T, t: &T) -> Result<T> {
    check_lambda(lambda)?;
    check_unit("c1_abs", c1_abs, &T::one())?;
    check_unit("t", t, lambda)?;
    Ok(h_unchecked(lambda, c1_abs, t))
}

fn h_unchecked<T: Real>(lambda: &T, c: &T, t: &T) -> T {
    let l = lambda.clone();
    let p = T::one() + l.clone();
    l.clone() - t.clone() * t.clone() / l
        + r::<T>(6) * p.clone() * c.clone() * t.clone()
        + r::<T>(2) * p.clone() * p.clone() * p * c.clone() * c.clone() * c.clone()
}

/// Vertex `t0 = 3λ(1+λ)c` of the parabola.
pub fn t_vertex<T: Real>(lambda: &T, c1_abs: &T) -> T {
    r::<T>(3) * lambda.clone() * (T::one() + lambda.clone()) * c1_abs.clone()
}

/// `1 / (3(1+λ))`, where the vertex reaches `t = λ`.
pub fn case_threshold<T: Real>(lambda: &T) -> T {
    T::one() / (r::<T>(3) * (T::one() + lambda.clone()))
}

/// `h(t0)` by completing the square: `λ + 9λ(1+λ)^2 c^2 + 2(1+λ)^3 c^3`.
pub fn h_vertex_value<T: Real>(lambda: &T, c1_abs: &T) -> T {
    vertex_expression(lambda, c1_abs, 9)
}

/// The looser case-one expression `λ + 27λ(1+λ)^2 c^2 + 2(1+λ)^3 c^3`.
pub fn h_vertex_value_loose<T: Real>(lambda: &T, c1_abs: &T) -> T {
    vertex_expression(lambda, c1_abs, 27)
}

fn vertex_expression<T: Real>(lambda: &T, c: &T, quad: i64) -> T {
    let l = lambda.clone();
    let p = T::one() + l.clone();
    let c2 = c.clone() * c.clone();
    l.clone()
        + r::<T>(quad) * l * p.clone() * p.clone() * c2.clone()
        + r::<T>(2) * p.clone() * p.clone() * p * c2 * c.clone()
}

/// The case-one cap `2λ + 1/27` on `|A4|`.
pub fn case_one_cap<T: Real>(lambda: &T) -> T {
    r::<T>(2) * lambda.clone() + T::from_ratio(1, 27)
}

/// `(1+λ)(1+5λ+λ^2)`.
pub fn a4_bound<T: Real>(lambda: &T) -> T {
    let l = lambda.clone();
    (T::one() + l.clone()) * (T::one() + r::<T>(5) * l.clone() + l.clone() * l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum A4Case {
    One,
    Two,
}

#[derive(Clone, Debug, PartialEq)]
pub struct A4CaseAnalysis<T: Real> {
    pub lambda: T,
    pub c1_abs: T,
    pub t_vertex: T,
    pub case: A4Case,
    pub t_star: T,
    pub h_max: T,
}

impl<T: Real> A4CaseAnalysis<T> {
    /// Bound candidate for `|A4|` at this `|c1|`: `h_max / 2`.
    pub fn candidate(&self) -> T {
        self.h_max.clone() / r::<T>(2)
    }
}

/// Maximizes `h` over `t ∈ [0, λ]` for a fixed `|c1|`.
pub fn a4_case_bound<T: Real>(lambda: &T, c1_abs: &T) -> Result<A4CaseAnalysis<T>> {
    check_lambda(lambda)?;
    check_unit("c1_abs", c1_abs, &T::one())?;
    let t0 = t_vertex(lambda, c1_abs);
    let (case, t_star) = if t0 <= *lambda {
        (A4Case::One, t0.clone())
    } else {
        (A4Case::Two, lambda.clone())
    };
    let h_max = h_unchecked(lambda, c1_abs, &t_star);
    Ok(A4CaseAnalysis {
        lambda: lambda.clone(),
        c1_abs: c1_abs.clone(),
        t_vertex: t0,
        case,
        t_star,
        h_max,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct A4Reduction {
    pub lambda: f64,
    /// `max h/2` over `|c1| ∈ [0, 1]`.
    pub value: f64,
    pub argmax_c1_abs: f64,
    /// `max h/2` restricted to `|c1| <= 1/(3(1+λ))`.
    pub case_one_max: f64,
}

/// Maximizes `h_max(|c1|)/2` over a uniform grid of `[0, 1]`, then polishes
/// the best cell by golden-section search.
pub fn a4_global_bound(lambda: f64, grid: usize) -> Result<A4Reduction> {
    check_lambda(&lambda)?;
    if grid < 2 {
        return Err(Error::OutOfRange(format!(
            "grid must be at least 2, got {grid}"
        )));
    }
    let candidate = |c: f64| -> f64 {
        a4_case_bound(&lambda, &c.clamp(0.0, 1.0))
            .map(|a| a.candidate())
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (value, arg) = polished_max(&candidate, 0.0, 1.0, grid);
    let threshold = case_threshold(&lambda);
    let (case_one_max, _) = polished_max(&candidate, 0.0, threshold, grid);
    Ok(A4Reduction {
        lambda,
        value,
        argmax_c1_abs: arg,
        case_one_max,
    })
}

fn polished_max(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, grid: usize) -> (f64, f64) {
    let step = (hi - lo) / (grid - 1) as f64;
    let point = |i: usize| {
        if i + 1 == grid {
            hi
        } else {
            lo + step * i as f64
        }
    };
    let (best_i, mut best_v) =
        (0..grid)
            .map(|i| (i, f(point(i))))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
            );
    let mut best_x = point(best_i);
    let mut a = point(best_i.saturating_sub(1));
    let mut b = point((best_i + 1).min(grid - 1));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        if b - a < 1e-15 {
            break;
        }
        let x1 = b - inv_phi * (b - a);
        let x2 = a + inv_phi * (b - a);
        if f(x1) >= f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    for x in [a, b, 0.5 * (a + b)] {
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_x = x;
        }
    }
    (best_v, best_x)
}

/// True iff `(1+λ)(1+5λ+λ^2) > 2λ + 1/27` at every grid point.
pub fn verify_gap_inequality(lambda_grid: &[f64]) -> bool {
    lambda_grid
        .iter()
        .all(|l| check_lambda(l).is_ok() && a4_bound(l) > case_one_cap(l))
}

/// `n` equispaced points `1/n, 2/n, ..., 1`.
pub fn lambda_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / n as f64).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionalKind {
    A2,
    A3,
    A4,
    #[serde(rename = "FS")]
    FeketeSzego,
}

impl FromStr for FunctionalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a2" => Ok(Self::A2),
            "a3" => Ok(Self::A3),
            "a4" => Ok(Self::A4),
            "fs" | "fekete-szego" => Ok(Self::FeketeSzego),
            _ => Err(Error::Parse(format!("unknown functional `{s}`"))),
        }
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::A2 => "A2",
            Self::A3 => "A3",
            Self::A4 => "A4",
            Self::FeketeSzego => "FS",
        })
    }
}

/// Search settings, as read from a JSON config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// Random samples per (λ, functional).
    pub samples: usize,
    pub seed: u64,
    pub strategy: SampleStrategy,
    /// Lattice points per axis added on top of the random samples (0 = none).
    pub grid: usize,
    /// Allowed excess of the empirical maximum over the bound.
    pub tolerance: f64,
    /// Allowed shortfall of the empirical maximum where sharpness is claimed.
    pub attainment_tolerance: f64,
    /// Also run the two-variable `h` reduction for `A4`.
    pub a4_reduction: bool,
    /// Grid size for the `h` reduction.
    pub reduction_grid: usize,
    /// Search A2/A3 over the Schur–Carlson set only.
    pub schur_only_a2_a3: bool,
    pub rotation_reduction: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0x5eed,
            strategy: SampleStrategy::BoundaryBiased,
            grid: 4,
            tolerance: 1e-9,
            attainment_tolerance: 1e-3,
            a4_reduction: false,
            reduction_grid: 1001,
            schur_only_a2_a3: false,
            rotation_reduction: false,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(
                "tolerance must be a finite non-negative number".into(),
            ));
        }
        if !(self.attainment_tolerance >= 0.0 && self.attainment_tolerance.is_finite()) {
            return Err(Error::Config(
                "attainment_tolerance must be a finite non-negative number".into(),
            ));
        }
        if self.grid == 1 {
            return Err(Error::Config("grid must be 0 (off) or at least 2".into()));
        }
        if self.a4_reduction && self.reduction_grid < 2 {
            return Err(Error::Config("reduction_grid must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub functional: String,
    pub lambda: f64,
    pub mu: Option<[f64; 2]>,
    pub theoretical: f64,
    pub empirical_max: f64,
    pub argmax_jet: JetRecord,
    /// `theoretical - empirical_max`
    pub gap: f64,
    pub samples: usize,
    pub seed: u64,
    /// Whether the bound is claimed to be attained for this query.
    pub sharpness_asserted: bool,
    pub tolerance: f64,
    pub attainment_tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a4_reduction: Option<A4Reduction>,
}

impl BoundReport {
    pub fn is_sound(&self) -> bool {
        self.gap >= -self.tolerance
            && self
                .a4_reduction
                .is_none_or(|r| r.value <= self.theoretical + self.tolerance)
    }

    pub fn is_attained(&self) -> bool {
        !self.sharpness_asserted || self.gap <= self.attainment_tolerance
    }

    pub fn passed(&self) -> bool {
        self.is_sound() && self.is_attained()
    }

    fn mu_label(&self) -> String {
        self.mu
            .map(|[re, im]| format_complex(&Complex::new(re, im)))
            .unwrap_or_default()
    }
}

pub const CSV_HEADER: &str = "functional,lambda,mu,theoretical,empirical_max,gap,samples,seed";

/// One row per report, using [`CSV_HEADER`].
pub fn reports_to_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.functional,
            r.lambda,
            r.mu_label(),
            r.theoretical,
            r.empirical_max,
            r.gap,
            r.samples,
            r.seed
        ));
    }
    out
}

pub fn reports_to_json(reports: &[BoundReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

#[derive(Clone, Copy)]
enum WorkUnit {
    Corner,
    Random(usize),
    Lattice(usize),
}

#[derive(Clone, Copy, Debug)]
struct Best {
    value: f64,
    index: usize,
    jet: JetRecord,
}

impl Best {
    /// Larger value wins; equal values go to the smaller index.
    fn merge(self, other: Self) -> Self {
        if other.value > self.value || (other.value == self.value && other.index < self.index) {
            other
        } else {
            self
        }
    }
}

fn is_sharp(functional: FunctionalKind, mu: Option<Complex<f64>>) -> bool {
    match functional {
        FunctionalKind::FeketeSzego => {
            mu.is_some_and(|m| m.im == 0.0 && (0.0..=1.0).contains(&m.re))
        }
        _ => true,
    }
}

/// Maximizes a functional over admissible jets (forced corner `(1,0,0)`,
/// seeded random samples, optional lattice) and compares with its bound.
///
/// Work is split into fixed batches evaluated on the current rayon pool;
/// the reduction is a max with smallest-index tie-break, so the report does
/// not depend on the number of workers.
pub fn verify_bound(
    params: &ULambdaParams<f64>,
    functional: FunctionalKind,
    mu: Option<Complex<f64>>,
    search: &SearchConfig,
) -> Result<BoundReport> {
    search.validate()?;
    let lambda = *params.lambda();
    if functional == FunctionalKind::FeketeSzego && mu.is_none() {
        return Err(Error::Config(
            "the FS functional needs a value of mu".into(),
        ));
    }
    let mu_value = mu.unwrap_or_default();
    let options = SamplerOptions {
        rotation_reduction: search.rotation_reduction,
        schur_only: search.schur_only_a2_a3
            && matches!(functional, FunctionalKind::A2 | FunctionalKind::A3),
    };
    let sampler = JetSampler::new(
        lambda,
        search.samples,
        search.seed,
        search.strategy,
        options,
    )?;
    let lattice = (search.grid >= 2).then(|| Lattice::new(lambda, search.grid, options));
    let lattice_len = lattice.map_or(0, |l| l.len());

    let evaluate = |jet: &SchwarzJet<f64>| -> f64 {
        let inv = inverse_coeffs(params, jet);
        match functional {
            FunctionalKind::A2 => inv.a2.norm(),
            FunctionalKind::A3 => inv.a3.norm(),
            FunctionalKind::A4 => inv.a4.norm(),
            FunctionalKind::FeketeSzego => fekete_szego(params, jet, &mu_value),
        }
    };
    let best_of = |offset: usize, jets: &[SchwarzJet<f64>]| -> Option<Best> {
        jets.iter()
            .enumerate()
            .map(|(i, jet)| Best {
                value: evaluate(jet),
                index: offset + i,
                jet: jet.to_record(),
            })
            .reduce(Best::merge)
    };

    let mut units = vec![WorkUnit::Corner];
    units.extend((0..sampler.batches()).map(WorkUnit::Random));
    units.extend((0..lattice_len.div_ceil(BATCH_SIZE)).map(WorkUnit::Lattice));
    let random_offset = 1;
    let lattice_offset = 1 + search.samples;

    let best = units
        .par_iter()
        .filter_map(|unit| match *unit {
            WorkUnit::Corner => best_of(0, &[SchwarzJet::corner()]),
            WorkUnit::Random(b) => best_of(random_offset + b * BATCH_SIZE, &sampler.batch(b)),
            WorkUnit::Lattice(c) => {
                let lattice = lattice.expect("lattice units only exist with a lattice");
                let start = c * BATCH_SIZE;
                let end = (start + BATCH_SIZE).min(lattice_len);
                let jets: Vec<_> = (start..end).map(|i| lattice.jet(i)).collect();
                best_of(lattice_offset + start, &jets)
            }
        })
        .reduce_with(Best::merge)
        .expect("the corner unit always yields a value");

    let theoretical = match functional {
        FunctionalKind::A2 => theoretical_bounds(params).b2,
        FunctionalKind::A3 => theoretical_bounds(params).b3,
        FunctionalKind::A4 => theoretical_bounds(params).b4,
        FunctionalKind::FeketeSzego => fekete_szego_bound(params, &mu_value),
    };
    let a4_reduction = if functional == FunctionalKind::A4 && search.a4_reduction {
        Some(a4_global_bound(lambda, search.reduction_grid)?)
    } else {
        None
    };
    let name = match functional {
        FunctionalKind::FeketeSzego => format!("FS({})", format_complex(&mu_value)),
        other => other.to_string(),
    };
    Ok(BoundReport {
        functional: name,
        lambda,
        mu: mu.map(|m| [m.re, m.im]),
        theoretical,
        empirical_max: best.value,
        argmax_jet: best.jet,
        gap: theoretical - best.value,
        samples: 1 + search.samples + lattice_len,
        seed: search.seed,
        sharpness_asserted: is_sharp(functional, mu),
        tolerance: search.tolerance,
        attainment_tolerance: search.attainment_tolerance,
        a4_reduction,
    })
}

/// One report per λ (and per μ for the FS functional).
pub fn scan_lambda(
    functional: FunctionalKind,
    lambda_grid: &[f64],
    mu_grid: Option<&[Complex<f64>]>,
    search: &SearchConfig,
) -> Result<Vec<BoundReport>> {
    if lambda_grid.is_empty() {
        return Err(Error::Config("lambda grid is empty".into()));
    }
    let mus: Vec<Option<Complex<f64>>> = match (functional, mu_grid) {
        (FunctionalKind::FeketeSzego, Some(m)) if !m.is_empty() => {
            m.iter().copied().map(Some).collect()
        }
        (FunctionalKind::FeketeSzego, _) => {
            return Err(Error::Config(
                "the FS functional needs a non-empty mu grid".into(),
            ))
        }
        _ => vec![None],
    };
    let mut reports = Vec::with_capacity(lambda_grid.len() * mus.len());
    for &lambda in lambda_grid {
        let params = ULambdaParams::new(lambda)?;
        for mu in &mus {
            reports.push(verify_bound(&params, functional, *mu, search)?);
        }
    }
    Ok(reports)
}
