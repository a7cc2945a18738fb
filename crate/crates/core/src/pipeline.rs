//! End-to-end verification runs driven by a JSON config.

use num_complex::Complex;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::ulambda::{check_lambda, ULambdaParams};
use crate::verify::{
    a4_global_bound, lambda_grid, reports_to_csv, verify_bound, verify_gap_inequality, A4Reduction,
    BoundReport, FunctionalKind, SearchConfig,
};

/// Points of the λ grid used for the gap-inequality sweep.
pub const GAP_GRID_POINTS: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub lambda_grid: Vec<f64>,
    pub mu_grid: Vec<Complex<f64>>,
    pub functionals: Vec<FunctionalKind>,
    pub search: SearchConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            lambda_grid: vec![0.2, 0.4, 0.6, 0.8, 1.0],
            mu_grid: vec![Complex::new(0.5, 0.0)],
            functionals: vec![
                FunctionalKind::A2,
                FunctionalKind::A3,
                FunctionalKind::A4,
                FunctionalKind::FeketeSzego,
            ],
            search: SearchConfig::default(),
        }
    }
}

impl VerifyConfig {
    /// Reads a config object. Search keys (`samples`, `seed`, `strategy`,
    /// `grid`, `tolerance`, ...) sit at the top level next to the optional
    /// `lambda_grid`, `mu_grid` and `functionals` keys. `mu_grid` entries may
    /// be numbers or `[re, im]` pairs.
    pub fn from_json(value: &Value) -> Result<Self> {
        let mut obj: Map<String, Value> = value
            .as_object()
            .cloned()
            .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
        let mut config = VerifyConfig::default();
        if let Some(v) = obj.remove("lambda_grid") {
            config.lambda_grid = serde_json::from_value(v)
                .map_err(|e| Error::Config(format!("lambda_grid: {e}")))?;
        }
        if let Some(v) = obj.remove("mu_grid") {
            let items = v
                .as_array()
                .ok_or_else(|| Error::Config("mu_grid must be an array".into()))?;
            config.mu_grid = items.iter().map(parse_mu).collect::<Result<_>>()?;
        }
        if let Some(v) = obj.remove("functionals") {
            let names: Vec<String> = serde_json::from_value(v)
                .map_err(|e| Error::Config(format!("functionals: {e}")))?;
            config.functionals = names
                .iter()
                .map(|n| {
                    n.parse()
                        .map_err(|_| Error::Config(format!("unknown functional `{n}`")))
                })
                .collect::<Result<_>>()?;
        }
        config.search =
            serde_json::from_value(Value::Object(obj)).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        Self::from_json(&value)
    }

    pub fn validate(&self) -> Result<()> {
        self.search.validate()?;
        if self.functionals.is_empty() {
            return Err(Error::Config("functional list is empty".into()));
        }
        if self.lambda_grid.is_empty() {
            return Err(Error::Config("lambda_grid is empty".into()));
        }
        for l in &self.lambda_grid {
            check_lambda(l).map_err(|_| Error::Config(format!("lambda {l} outside (0, 1]")))?;
        }
        if self.functionals.contains(&FunctionalKind::FeketeSzego) && self.mu_grid.is_empty() {
            return Err(Error::Config(
                "mu_grid is empty but FS was requested".into(),
            ));
        }
        Ok(())
    }
}

fn parse_mu(v: &Value) -> Result<Complex<f64>> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .map(|re| Complex::new(re, 0.0))
            .ok_or_else(|| Error::Config(format!("bad mu {n}"))),
        Value::Array(parts) if parts.len() == 2 => match (parts[0].as_f64(), parts[1].as_f64()) {
            (Some(re), Some(im)) => Ok(Complex::new(re, im)),
            _ => Err(Error::Config(format!("bad mu {v}"))),
        },
        other => Err(Error::Config(format!("bad mu {other}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationOutcome {
    pub reports: Vec<BoundReport>,
    /// `B4(λ) > 2λ + 1/27` on a 1000-point grid.
    pub gap_inequality: bool,
    pub a4_reductions: Vec<A4Reduction>,
    pub passed: bool,
}

impl VerificationOutcome {
    pub fn csv(&self) -> String {
        reports_to_csv(&self.reports)
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes")
    }
}

/// Runs every (λ, functional[, μ]) search plus the analytic `A4` checks.
pub fn run_verification(config: &VerifyConfig) -> Result<VerificationOutcome> {
    config.validate()?;
    let mut reports = Vec::new();
    let mut a4_reductions = Vec::new();
    for &lambda in &config.lambda_grid {
        let params = ULambdaParams::new(lambda)?;
        for &functional in &config.functionals {
            if functional == FunctionalKind::FeketeSzego {
                for &mu in &config.mu_grid {
                    reports.push(verify_bound(&params, functional, Some(mu), &config.search)?);
                }
            } else {
                reports.push(verify_bound(&params, functional, None, &config.search)?);
            }
        }
        if config.functionals.contains(&FunctionalKind::A4) {
            a4_reductions.push(a4_global_bound(
                lambda,
                config.search.reduction_grid.max(2),
            )?);
        }
    }
    let gap_inequality = verify_gap_inequality(&lambda_grid(GAP_GRID_POINTS));
    let tol = config.search.tolerance;
    let reductions_ok = a4_reductions.iter().all(|r| {
        let bound = crate::verify::a4_bound(&r.lambda);
        (r.value - bound).abs() <= tol
            && r.case_one_max <= crate::verify::case_one_cap(&r.lambda) + tol
    });
    let passed = gap_inequality && reductions_ok && reports.iter().all(BoundReport::passed);
    Ok(VerificationOutcome {
        reports,
        gap_inequality,
        a4_reductions,
        passed,
    })
}
