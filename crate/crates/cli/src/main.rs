//! `coeffforge` command-line interface.

mod input;

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coeffforge::pipeline::{run_verification, VerifyConfig};
use coeffforge::scalar::{format_complex, parse_real};
use coeffforge::schwarz::SampleStrategy;
use coeffforge::ulambda::{
    direct_coeffs, fekete_szego_bound, fekete_szego_bound_real, fekete_szego_regrouped,
    fekete_szego_value, inverse_coeffs, inverse_coeffs_via_direct, inverse_coeffs_via_reversion,
    membership_scan, theoretical_bounds,
};
use coeffforge::verify::{
    reports_to_csv, reports_to_json, scan_lambda, verify_bound, FunctionalKind, SearchConfig,
};
use coeffforge::{BigRational, Complex, Mode, Real, SchwarzJet, ULambdaParams};
use serde_json::json;

use input::{parse_complex, parse_complex_list, parse_list, read_jet, FunctionArg};

const THREADS_ENV: &str = "COEFFFORGE_THREADS";

#[derive(Debug)]
pub enum CliError {
    Core(coeffforge::Error),
    Io(String),
    Usage(String),
    /// A search found a value above a proven bound, or missed a sharp one.
    Violation(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
            CliError::Violation(_) => "bound-violation",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(m) | CliError::Usage(m) | CliError::Violation(m) => m.clone(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            _ => 2,
        }
    }
}

impl From<coeffforge::Error> for CliError {
    fn from(e: coeffforge::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "coeffforge",
    version,
    about = "Coefficient bounds for the class U(lambda)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Uniform,
    BoundaryBiased,
    Grid,
}

impl From<StrategyArg> for SampleStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Uniform => SampleStrategy::Uniform,
            StrategyArg::BoundaryBiased => SampleStrategy::BoundaryBiased,
            StrategyArg::Grid => SampleStrategy::Grid,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    /// JSON search config ({samples, seed, strategy, grid, tolerance, ...})
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
}

impl SearchArgs {
    fn config(&self) -> Result<VerifyConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => {
                let text =
                    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
                VerifyConfig::from_json_str(&text)?
            }
            None => VerifyConfig::default(),
        };
        if let Some(samples) = self.samples {
            config.search.samples = samples;
        }
        if let Some(seed) = self.seed {
            config.search.seed = seed;
        }
        if let Some(strategy) = self.strategy {
            config.search.strategy = strategy.into();
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invert a normalized series: identity, koebe, extremal[:lambda] or a JSON file.
    Revert {
        function: String,
        #[arg(long, default_value_t = coeffforge::series::DEFAULT_ORDER)]
        order: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Parameter of the `extremal` alias.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Coefficients of f and of its inverse from a Schwarz jet, by three routes.
    Coeffs {
        #[arg(long)]
        lambda: String,
        /// Inline JSON `{c1:[re,im], c2:[re,im], c3:[re,im]}` or a file; default (1,0,0).
        #[arg(long)]
        jet: Option<String>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Theoretical bounds B2, B3, B4 and optionally the Fekete-Szego bound.
    Bounds {
        #[arg(long)]
        lambda: String,
        /// `re` or `re,im`.
        #[arg(long)]
        mu: Option<String>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Search-based verification of all bounds; exit 0 iff every check passes.
    Verify {
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// One report per lambda (and mu) for a single functional.
    Scan {
        /// A2, A3, A4 or FS
        #[arg(long, default_value = "A4")]
        functional: String,
        /// Comma-separated lambda values.
        #[arg(long, conflicts_with = "lambda_points")]
        lambda: Option<String>,
        /// Use the grid k/n, k = 1..n.
        #[arg(long)]
        lambda_points: Option<usize>,
        /// Semicolon-separated mu values, each `re` or `re,im`.
        #[arg(long)]
        mu: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Sample the defect |(z/f)^2 f' - 1| on |z| = radius against lambda.
    Membership {
        function: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 0.9)]
        radius: f64,
        #[arg(long, default_value_t = 720)]
        samples: usize,
        /// Truncation order for series files.
        #[arg(long, default_value_t = coeffforge::series::DEFAULT_ORDER)]
        order: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the angular profile as CSV here.
        #[arg(long)]
        out: Option<String>,
    },
    /// |A3 - mu A2^2|: bound, value at a jet, and a search check.
    FeketeSzego {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        jet: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
}

fn emit(out: Option<&str>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| CliError::Io(format!("{path}: {e}"))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn params<R: Real>(lambda: &str) -> Result<ULambdaParams<R>, CliError> {
    Ok(ULambdaParams::new(parse_real::<R>(lambda)?)?)
}

fn cmd_revert(
    function: &str,
    order: usize,
    mode: Mode,
    lambda: Option<&str>,
    format: Format,
    out: Option<&str>,
) -> Result<(), CliError> {
    if order < 1 {
        return Err(coeffforge::Error::OrderTooSmall { min: 1, got: order }.into());
    }
    let f = FunctionArg::parse(function).series(order, mode, lambda)?;
    let f = f.truncate(order.min(f.order()));
    let inverse = f.revert()?;
    let text = match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "mode": mode.to_string(),
                "order": inverse.order(),
                "input": f.to_json(),
                "inverse": inverse.to_json(),
            }))
            .expect("json")
        ),
        Format::Text | Format::Csv => format!("{}\n", inverse.format("w")),
    };
    emit(out, &text)
}

fn coeffs_report<R: Real>(
    lambda: &str,
    jet: Option<&str>,
    format: Format,
) -> Result<String, CliError> {
    let p = params::<R>(lambda)?;
    let jet: SchwarzJet<R> = read_jet(jet)?;
    let direct = direct_coeffs(&p, &jet);
    let closed = inverse_coeffs(&p, &jet);
    let via_direct = inverse_coeffs_via_direct(&p, &jet);
    let via_reversion = inverse_coeffs_via_reversion(&p, &jet);
    let agree = closed.agrees_with(&via_direct) && closed.agrees_with(&via_reversion);
    let f = |z: &Complex<R>| format_complex(z);
    Ok(match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "lambda": p.lambda().display(),
                "jet": [f(&jet.c1), f(&jet.c2), f(&jet.c3)],
                "direct": [f(&direct.a2), f(&direct.a3), f(&direct.a4)],
                "inverse_closed_form": closed.values().iter().map(f).collect::<Vec<_>>(),
                "inverse_via_direct": via_direct.values().iter().map(f).collect::<Vec<_>>(),
                "inverse_via_reversion": via_reversion.values().iter().map(f).collect::<Vec<_>>(),
                "routes_agree": agree,
            }))
            .expect("json")
        ),
        Format::Csv => {
            let mut s = String::from("name,closed_form,via_direct,via_reversion\n");
            for (i, name) in ["A2", "A3", "A4"].iter().enumerate() {
                s.push_str(&format!(
                    "{name},{},{},{}\n",
                    f(&closed.values()[i]),
                    f(&via_direct.values()[i]),
                    f(&via_reversion.values()[i])
                ));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "lambda = {}\njet    = ({}, {}, {})\n",
                p.lambda().display(),
                f(&jet.c1),
                f(&jet.c2),
                f(&jet.c3)
            );
            for (name, v) in [("a2", &direct.a2), ("a3", &direct.a3), ("a4", &direct.a4)] {
                s.push_str(&format!("{name} = {}\n", f(v)));
            }
            for (name, v) in ["A2", "A3", "A4"].iter().zip(closed.values()) {
                s.push_str(&format!("{name} = {}\n", f(&v)));
            }
            s.push_str(&format!(
                "routes agree: {}\n",
                if agree { "yes" } else { "no" }
            ));
            s
        }
    })
}

fn bounds_report<R: Real>(
    lambda: &str,
    mu: Option<&str>,
    format: Format,
) -> Result<String, CliError> {
    let p = params::<R>(lambda)?;
    let b = theoretical_bounds(&p);
    let fs = match mu {
        None => None,
        Some(m) => {
            let mu: Complex<R> = parse_complex(m)?;
            let value = if mu.im.is_zero() {
                fekete_szego_bound_real(&p, &mu.re).display()
            } else {
                fekete_szego_bound(&p, &mu).to_string()
            };
            Some((format_complex(&mu), value))
        }
    };
    let l = p.lambda().display();
    Ok(match format {
        Format::Json => {
            let mut v = json!({"lambda": l, "B2": b.b2.display(), "B3": b.b3.display(), "B4": b.b4.display()});
            if let Some((mu, value)) = &fs {
                v["mu"] = json!(mu);
                v["FS"] = json!(value);
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Csv => {
            let (head, row) = match &fs {
                Some((mu, value)) => (",mu,FS".to_string(), format!(",{mu},{value}")),
                None => (String::new(), String::new()),
            };
            format!(
                "lambda,B2,B3,B4{head}\n{l},{},{},{}{row}\n",
                b.b2.display(),
                b.b3.display(),
                b.b4.display()
            )
        }
        Format::Text => {
            let mut s = format!(
                "lambda = {l}\nB2 = {}\nB3 = {}\nB4 = {}\n",
                b.b2.display(),
                b.b3.display(),
                b.b4.display()
            );
            if let Some((mu, value)) = fs {
                s.push_str(&format!("FS(mu={mu}) = {value}\n"));
            }
            s
        }
    })
}

fn summary_line(r: &coeffforge::BoundReport) -> String {
    format!(
        "{} {} lambda={} theoretical={} empirical_max={} gap={:e}",
        if r.passed() { "PASS" } else { "FAIL" },
        r.functional,
        r.lambda,
        r.theoretical,
        r.empirical_max,
        r.gap
    )
}

fn cmd_verify(search: &SearchArgs, out: Option<&str>, format: Format) -> Result<(), CliError> {
    let config = search.config()?;
    let outcome = run_verification(&config)?;
    let artifact = match format {
        Format::Json => outcome.json() + "\n",
        _ => outcome.csv(),
    };
    match out {
        Some(path) => {
            emit(Some(path), &artifact)?;
            for r in &outcome.reports {
                println!("{}", summary_line(r));
            }
            println!(
                "{} gap inequality B4(lambda) > 2 lambda + 1/27 on 1000-point grid",
                if outcome.gap_inequality {
                    "PASS"
                } else {
                    "FAIL"
                }
            );
        }
        None => emit(None, &artifact)?,
    }
    if outcome.passed {
        Ok(())
    } else {
        let failed: Vec<String> = outcome
            .reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| format!("{}@{}", r.functional, r.lambda))
            .collect();
        Err(CliError::Violation(format!(
            "failed checks: {}",
            failed.join(" ")
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    functional: &str,
    lambda: Option<&str>,
    lambda_points: Option<usize>,
    mu: Option<&str>,
    search: &SearchArgs,
    out: Option<&str>,
    format: Format,
) -> Result<(), CliError> {
    let kind: FunctionalKind = functional.parse()?;
    let grid = match (lambda, lambda_points) {
        (Some(list), _) => parse_list(list)?,
        (None, Some(n)) if n > 0 => coeffforge::verify::lambda_grid(n),
        _ => coeffforge::verify::lambda_grid(10),
    };
    let mus = mu.map(parse_complex_list).transpose()?;
    let config: SearchConfig = search.config()?.search;
    let reports = scan_lambda(kind, &grid, mus.as_deref(), &config)?;
    let text = match format {
        Format::Json => reports_to_json(&reports) + "\n",
        Format::Csv => reports_to_csv(&reports),
        Format::Text => reports.iter().map(|r| summary_line(r) + "\n").collect(),
    };
    emit(out, &text)?;
    if reports.iter().all(|r| r.is_sound()) {
        Ok(())
    } else {
        Err(CliError::Violation(
            "a sampled value exceeded its bound".into(),
        ))
    }
}

fn cmd_membership(
    function: &str,
    lambda: &str,
    radius: f64,
    samples: usize,
    order: usize,
    format: Format,
    out: Option<&str>,
) -> Result<(), CliError> {
    let model = FunctionArg::parse(function).model(order, Some(lambda))?;
    let l: f64 = parse_real(lambda)?;
    let v = membership_scan(&model, l, radius, samples)?;
    if let Some(path) = out {
        emit(Some(path), &v.profile_csv())?;
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&v).expect("json") + "\n",
        Format::Csv => format!(
            "lambda,radius,samples,max_defect,argmax_theta,verdict,jet_approximate\n{},{},{},{},{},{},{}\n",
            v.lambda, v.radius, v.samples, v.max_defect, v.argmax_theta, v.label(), v.jet_approximate
        ),
        Format::Text => format!(
            "max_defect = {}\nargmax_theta = {}\nverdict = {}{}\n",
            v.max_defect,
            v.argmax_theta,
            v.label(),
            if v.jet_approximate { " (jet-approximate)" } else { "" }
        ),
    };
    print!("{text}");
    Ok(())
}

fn cmd_fekete_szego(
    lambda: &str,
    mu: &str,
    jet: Option<&str>,
    search: &SearchArgs,
    format: Format,
    out: Option<&str>,
) -> Result<(), CliError> {
    let exact = params::<BigRational>(lambda)?;
    let mu_exact: Complex<BigRational> = parse_complex(mu)?;
    let jet_exact: SchwarzJet<BigRational> = read_jet(jet)?;
    let value = fekete_szego_value(&exact, &jet_exact, &mu_exact);
    let regrouped = fekete_szego_regrouped(&exact, &jet_exact, &mu_exact);
    let bound = fekete_szego_bound(&exact, &mu_exact);

    let float = params::<f64>(lambda)?;
    let mu_float: Complex<f64> = parse_complex(mu)?;
    let config = search.config()?.search;
    let report = verify_bound(&float, FunctionalKind::FeketeSzego, Some(mu_float), &config)?;
    let modulus = coeffforge::scalar::to_c64(&value).norm();
    let text = match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "lambda": exact.lambda().display(),
                "mu": format_complex(&mu_exact),
                "bound": bound,
                "value": format_complex(&value),
                "modulus": modulus,
                "regrouped_agrees": value == regrouped,
                "report": report,
            }))
            .expect("json")
        ),
        Format::Csv => reports_to_csv(std::slice::from_ref(&report)),
        Format::Text => format!(
            "bound = {bound}\nA3 - mu A2^2 = {} (|.| = {modulus})\nregrouped form agrees: {}\n{}\n",
            format_complex(&value),
            if value == regrouped { "yes" } else { "no" },
            summary_line(&report)
        ),
    };
    emit(out, &text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Violation(summary_line(&report)))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Revert {
            function,
            order,
            mode,
            lambda,
            format,
            out,
        } => cmd_revert(
            &function,
            order,
            mode.into(),
            lambda.as_deref(),
            format,
            out.as_deref(),
        ),
        Command::Coeffs {
            lambda,
            jet,
            mode,
            format,
            out,
        } => {
            let text = match Mode::from(mode) {
                Mode::Exact => coeffs_report::<BigRational>(&lambda, jet.as_deref(), format)?,
                Mode::Float => coeffs_report::<f64>(&lambda, jet.as_deref(), format)?,
            };
            emit(out.as_deref(), &text)
        }
        Command::Bounds {
            lambda,
            mu,
            mode,
            format,
            out,
        } => {
            let text = match Mode::from(mode) {
                Mode::Exact => bounds_report::<BigRational>(&lambda, mu.as_deref(), format)?,
                Mode::Float => bounds_report::<f64>(&lambda, mu.as_deref(), format)?,
            };
            emit(out.as_deref(), &text)
        }
        Command::Verify {
            search,
            out,
            format,
        } => cmd_verify(&search, out.as_deref(), format),
        Command::Scan {
            functional,
            lambda,
            lambda_points,
            mu,
            search,
            out,
            format,
        } => cmd_scan(
            &functional,
            lambda.as_deref(),
            lambda_points,
            mu.as_deref(),
            &search,
            out.as_deref(),
            format,
        ),
        Command::Membership {
            function,
            lambda,
            radius,
            samples,
            order,
            format,
            out,
        } => cmd_membership(
            &function,
            &lambda,
            radius,
            samples,
            order,
            format,
            out.as_deref(),
        ),
        Command::FeketeSzego {
            lambda,
            mu,
            jet,
            search,
            format,
            out,
        } => cmd_fekete_szego(
            &lambda,
            &mu,
            jet.as_deref(),
            &search,
            format,
            out.as_deref(),
        ),
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{value}`"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("coeffforge: error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    match init_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "coeffforge: error[{}]: {}",
                e.code(),
                e.message().replace('\n', " ")
            );
            ExitCode::from(e.exit_code())
        }
    }
}
