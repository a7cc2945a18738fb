use std::fs;

use coeffforge::scalar::{parse_rational, parse_real};
use coeffforge::series::AnySeries;
use coeffforge::ulambda::{extremal_function, FunctionModel, ULambdaParams};
use coeffforge::{BigRational, Complex, Mode, NormalizedSeries, Real, SchwarzJet};

use crate::CliError;

/// A function given on the command line: a built-in alias or a series file.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionArg {
    Identity,
    Koebe,
    /// `extremal` (λ from `--lambda`) or `extremal:<λ>`.
    Extremal(Option<String>),
    File(String),
}

impl FunctionArg {
    pub fn parse(s: &str) -> Self {
        match s {
            "identity" => FunctionArg::Identity,
            "koebe" => FunctionArg::Koebe,
            "extremal" => FunctionArg::Extremal(None),
            other => match other.strip_prefix("extremal:") {
                Some(l) => FunctionArg::Extremal(Some(l.to_string())),
                None => FunctionArg::File(other.to_string()),
            },
        }
    }

    fn extremal_lambda(&self, fallback: Option<&str>) -> Result<String, CliError> {
        match self {
            FunctionArg::Extremal(Some(l)) => Ok(l.clone()),
            FunctionArg::Extremal(None) => fallback.map(str::to_string).ok_or_else(|| {
                CliError::Usage("`extremal` needs --lambda or extremal:<lambda>".into())
            }),
            FunctionArg::Koebe => Ok("1".into()),
            _ => unreachable!("only extremal-type aliases carry a lambda"),
        }
    }

    /// The normalized jet of order `order` in the requested mode.
    pub fn series(
        &self,
        order: usize,
        mode: Mode,
        lambda: Option<&str>,
    ) -> Result<AnySeries, CliError> {
        match mode {
            Mode::Exact => Ok(AnySeries::Exact(
                self.series_in::<BigRational>(order, lambda)?,
            )),
            Mode::Float => Ok(AnySeries::Float(self.series_in::<f64>(order, lambda)?)),
        }
    }

    fn series_in<R: Real>(
        &self,
        order: usize,
        lambda: Option<&str>,
    ) -> Result<coeffforge::Series<R>, CliError> {
        match self {
            FunctionArg::Identity => Ok(NormalizedSeries::<R>::identity(order)?.into_series()),
            FunctionArg::Koebe | FunctionArg::Extremal(_) => {
                let l: R = parse_real(&self.extremal_lambda(lambda)?)?;
                Ok(extremal_function(&ULambdaParams::new(l)?, order)?.into_series())
            }
            FunctionArg::File(path) => {
                let any = read_series_file(path)?;
                let s = match any {
                    AnySeries::Exact(s) => s.map(|c| convert::<R>(c)),
                    AnySeries::Float(s) => s.map(|c| {
                        Complex::new(
                            R::from_f64(c.re).unwrap_or_else(R::zero),
                            R::from_f64(c.im).unwrap_or_else(R::zero),
                        )
                    }),
                };
                Ok(s)
            }
        }
    }

    /// Function model for defect evaluation (float).
    pub fn model(
        &self,
        order: usize,
        lambda: Option<&str>,
    ) -> Result<FunctionModel<f64>, CliError> {
        match self {
            FunctionArg::Identity => Ok(FunctionModel::identity()),
            FunctionArg::Koebe | FunctionArg::Extremal(_) => {
                let l: f64 = parse_real(&self.extremal_lambda(lambda)?)?;
                ULambdaParams::new(l)?;
                Ok(FunctionModel::Extremal(l))
            }
            FunctionArg::File(_) => {
                let s = self.series_in::<f64>(order, lambda)?;
                Ok(FunctionModel::Series(NormalizedSeries::new(s)?))
            }
        }
    }
}

fn convert<R: Real>(c: &Complex<BigRational>) -> Complex<R> {
    Complex::new(
        R::from_rational(&c.re).unwrap_or_else(|_| R::zero()),
        R::from_rational(&c.im).unwrap_or_else(|_| R::zero()),
    )
}

pub fn read_series_file(path: &str) -> Result<AnySeries, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Core(coeffforge::Error::Parse(format!("{path}: {e}"))))?;
    Ok(AnySeries::from_json(&value)?)
}

/// A jet from inline JSON or a path to a JSON file; defaults to `(1, 0, 0)`.
pub fn read_jet<R: Real>(arg: Option<&str>) -> Result<SchwarzJet<R>, CliError> {
    let Some(arg) = arg else {
        return Ok(SchwarzJet::corner());
    };
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))?
    };
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Core(coeffforge::Error::Parse(format!("jet: {e}"))))?;
    Ok(SchwarzJet::from_json(&value)?)
}

/// `re` or `re,im`, each part a rational literal.
pub fn parse_complex<R: Real>(s: &str) -> Result<Complex<R>, CliError> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    Ok(Complex::new(parse_real(re)?, parse_real(im)?))
}

/// Comma-separated real list.
pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| Ok(Real::to_f64(&parse_rational(p)?)))
        .collect()
}

/// Semicolon-separated list of complex values (`re` or `re,im`).
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex<f64>>, CliError> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_complex::<f64>)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aliases() {
        assert_eq!(FunctionArg::parse("koebe"), FunctionArg::Koebe);
        assert_eq!(
            FunctionArg::parse("extremal:1/2"),
            FunctionArg::Extremal(Some("1/2".into()))
        );
        assert_eq!(
            FunctionArg::parse("f.json"),
            FunctionArg::File("f.json".into())
        );
        let s = FunctionArg::parse("extremal:0.5")
            .series(4, Mode::Exact, None)
            .unwrap();
        assert_eq!(s.format("z"), "z + 3/2z^2 + 7/4z^3 + 15/8z^4");
        assert!(FunctionArg::parse("extremal")
            .series(4, Mode::Exact, None)
            .is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("0.1,1/2, 1").unwrap(), vec![0.1, 0.5, 1.0]);
        let mus = parse_complex_list("0;0.5,1").unwrap();
        assert_eq!(mus, vec![Complex::new(0.0, 0.0), Complex::new(0.5, 1.0)]);
        assert!(parse_list("x").is_err());
    }
}
