//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or I/O error, 2 certification failure,
//! 3 internal numerical inconsistency.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::caratheodory::{coeffs_from_schur, BoundaryRegime, CaratheodoryCoeffs, SchurParams};
use crate::certify::{self, SearchGrid, DEFAULT_REFINEMENT_ROUNDS};
use crate::classes::{coeff_map, FunctionClass};
use crate::error::Error;
use crate::hankel::{h21_from_a, h21_in_c, h21_in_tau, h21_via_series_from_a};
use crate::report::{self, complex, complex_list, num, OutputFormat};
use crate::selftest::{run_selftest, SelftestScale};
use crate::series::{
    gamma_closed_form, inverse_closed_form, inverse_log_coefficients, logarithmic_coefficients,
    TaylorSeries, DEFAULT_ORDER,
};
use crate::ymax::{y_eval, y_oracle, YInput, ORACLE_ANGULAR_STEPS, ORACLE_RADIAL_STEPS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CERTIFICATION: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

/// Agreement required between independent evaluations of the same quantity,
/// relative to `1 + |value|`.
pub const CROSS_CHECK_TOL: f64 = 1e-10;
/// Agreement required between `y_eval` and the grid oracle.
pub const YMAX_ORACLE_TOL: f64 = 1e-5;

pub const THREADS_ENV: &str = "HANKELFORGE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "hankelforge",
    version,
    about = "Inverse logarithmic coefficients and Hankel-determinant bounds"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    pub format: OutputFormat,

    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Carathéodory coefficients c1..c3 from Schur parameters.
    #[command(allow_negative_numbers = true)]
    Coeffs(CoeffsArgs),
    /// Coefficients of the compositional inverse.
    #[command(allow_negative_numbers = true)]
    Invert(SeriesArgs),
    /// Logarithmic coefficients of f and of its inverse.
    #[command(allow_negative_numbers = true)]
    Logcoeffs(SeriesArgs),
    /// H21 = Γ1Γ3 - Γ2² from a, c or τ coordinates, cross-checked.
    #[command(allow_negative_numbers = true)]
    Hankel(HankelArgs),
    /// Maximum of |A + Bz + Cz²| + 1 - |z|² over the closed disk.
    #[command(allow_negative_numbers = true)]
    Ymax(YmaxArgs),
    /// Grid search for the maximum of |H21| over a class.
    Certify(CertifyArgs),
    /// Evaluate the extremal functions of a class.
    Extremal(ClassArg),
    /// Run the oracle-equivalence suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct TauArgs {
    #[arg(long)]
    pub tau1: Option<f64>,
    #[arg(long)]
    pub tau2: Option<f64>,
    #[arg(long = "tau2-im")]
    pub tau2_im: Option<f64>,
    #[arg(long)]
    pub tau3: Option<f64>,
    #[arg(long = "tau3-im")]
    pub tau3_im: Option<f64>,
}

impl TauArgs {
    fn any(&self) -> bool {
        self.tau1.is_some()
            || self.tau2.is_some()
            || self.tau2_im.is_some()
            || self.tau3.is_some()
            || self.tau3_im.is_some()
    }

    fn params(&self) -> Result<SchurParams, Failure> {
        let tau1 = self
            .tau1
            .ok_or_else(|| Failure::validation("--tau1 is required"))?;
        let tau2 = Complex64::new(self.tau2.unwrap_or(0.0), self.tau2_im.unwrap_or(0.0));
        let tau3 = Complex64::new(self.tau3.unwrap_or(0.0), self.tau3_im.unwrap_or(0.0));
        Ok(SchurParams::new(tau1, tau2, tau3)?)
    }
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub tau: TauArgs,
    /// Also map to a2..a4 and H21 for this class.
    #[arg(long)]
    pub class: Option<FunctionClass>,
}

#[derive(Debug, Args)]
pub struct ACoeffArgs {
    #[arg(long)]
    pub a2: Option<f64>,
    #[arg(long = "a2-im")]
    pub a2_im: Option<f64>,
    #[arg(long)]
    pub a3: Option<f64>,
    #[arg(long = "a3-im")]
    pub a3_im: Option<f64>,
    #[arg(long)]
    pub a4: Option<f64>,
    #[arg(long = "a4-im")]
    pub a4_im: Option<f64>,
}

impl ACoeffArgs {
    fn any(&self) -> bool {
        [
            self.a2, self.a2_im, self.a3, self.a3_im, self.a4, self.a4_im,
        ]
        .iter()
        .any(Option::is_some)
    }

    fn values(&self) -> [Complex64; 3] {
        let c =
            |re: Option<f64>, im: Option<f64>| Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0));
        [
            c(self.a2, self.a2_im),
            c(self.a3, self.a3_im),
            c(self.a4, self.a4_im),
        ]
    }
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub a: ACoeffArgs,
    #[arg(long)]
    pub a5: Option<f64>,
    #[arg(long = "a5-im")]
    pub a5_im: Option<f64>,
    /// Truncation order N (coefficients z^0..z^N).
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
}

impl SeriesArgs {
    fn series(&self) -> Result<TaylorSeries, Failure> {
        if self.order < 5 {
            return Err(Failure::validation(format!(
                "--order {} is too small, need at least 5",
                self.order
            )));
        }
        let [a2, a3, a4] = self.a.values();
        let a5 = Complex64::new(self.a5.unwrap_or(0.0), self.a5_im.unwrap_or(0.0));
        Ok(TaylorSeries::normalized(&[a2, a3, a4, a5], self.order))
    }
}

#[derive(Debug, Args)]
pub struct HankelArgs {
    #[arg(long)]
    pub class: Option<FunctionClass>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long = "c1-im")]
    pub c1_im: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long = "c2-im")]
    pub c2_im: Option<f64>,
    #[arg(long)]
    pub c3: Option<f64>,
    #[arg(long = "c3-im")]
    pub c3_im: Option<f64>,
    #[command(flatten)]
    pub tau: TauArgs,
    #[command(flatten)]
    pub a: ACoeffArgs,
}

impl HankelArgs {
    fn c_given(&self) -> bool {
        [
            self.c1, self.c1_im, self.c2, self.c2_im, self.c3, self.c3_im,
        ]
        .iter()
        .any(Option::is_some)
    }

    fn c_values(&self) -> CaratheodoryCoeffs {
        let c =
            |re: Option<f64>, im: Option<f64>| Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0));
        CaratheodoryCoeffs::new(
            c(self.c1, self.c1_im),
            c(self.c2, self.c2_im),
            c(self.c3, self.c3_im),
        )
    }
}

#[derive(Debug, Args)]
pub struct YmaxArgs {
    #[arg(long = "A")]
    pub a: f64,
    #[arg(long = "B")]
    pub b: f64,
    #[arg(long = "C")]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct ClassArg {
    #[arg(long)]
    pub class: FunctionClass,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub class: FunctionClass,
    #[arg(long = "n-tau1")]
    pub n_tau1: Option<usize>,
    #[arg(long = "n-tau2-modulus")]
    pub n_tau2_modulus: Option<usize>,
    #[arg(long = "n-tau2-phase")]
    pub n_tau2_phase: Option<usize>,
    #[arg(long = "n-tau3-phase")]
    pub n_tau3_phase: Option<usize>,
    /// Zoom rounds around the incumbent.
    #[arg(long, default_value_t = DEFAULT_REFINEMENT_ROUNDS)]
    pub rounds: usize,
}

impl CertifyArgs {
    pub fn grid(&self) -> SearchGrid {
        let d = SearchGrid::default();
        SearchGrid {
            n_tau1: self.n_tau1.unwrap_or(d.n_tau1),
            n_tau2_modulus: self.n_tau2_modulus.unwrap_or(d.n_tau2_modulus),
            n_tau2_phase: self.n_tau2_phase.unwrap_or(d.n_tau2_phase),
            n_tau3_phase: self.n_tau3_phase.unwrap_or(d.n_tau3_phase),
        }
    }
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Full sample counts (default).
    #[arg(long, conflicts_with = "quick")]
    pub full: bool,
    /// Reduced sample counts.
    #[arg(long)]
    pub quick: bool,
}

/// Rendered result of one command.
#[derive(Debug)]
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub code: i32,
    /// Printed on standard error.
    pub message: Option<String>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::validation(e.to_string())
    }
}

fn rel_gap(values: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    for (i, x) in values.iter().enumerate() {
        for y in &values[i + 1..] {
            worst = worst.max((x - y).norm() / (1.0 + x.norm().max(y.norm())));
        }
    }
    worst
}

fn check_consistency(what: &str, gap: f64) -> Option<String> {
    (gap > CROSS_CHECK_TOL).then(|| format!("{what} disagree: relative gap {gap:.3e}"))
}

fn finish(value: Value, format: OutputFormat, code: i32, message: Option<String>) -> Outcome {
    Outcome {
        bytes: report::render(&value, format),
        code,
        message,
    }
}

fn coeffs(args: &CoeffsArgs, format: OutputFormat) -> Result<Outcome, Failure> {
    let params = args.tau.params()?;
    let c = coeffs_from_schur(&params);
    let regime = BoundaryRegime::classify(&params)
        .ok()
        .map(|r| format!("{r:?}"));
    let mut out = json!({
        "tau1": num(params.tau1()),
        "tau2": complex(params.tau2()),
        "tau3": complex(params.tau3()),
        "c1": complex(c.c1),
        "c2": complex(c.c2),
        "c3": complex(c.c3),
        "boundary_regime": regime,
    });
    let mut message = None;
    if let Some(class) = args.class {
        let [a2, a3, a4] = coeff_map(class, &c);
        let h_tau = h21_in_tau(class, &params).value;
        let h_c = h21_in_c(class, &c).value;
        let h_a = h21_from_a(a2, a3, a4).value;
        message = check_consistency("H21 tau/c/a forms", rel_gap(&[h_tau, h_c, h_a]));
        let map = out.as_object_mut().expect("object");
        map.insert("class".into(), json!(class.slug()));
        map.insert("a2".into(), complex(a2));
        map.insert("a3".into(), complex(a3));
        map.insert("a4".into(), complex(a4));
        map.insert("h21".into(), complex(h_tau));
        map.insert("h21_abs".into(), num(h_tau.norm()));
    }
    let code = if message.is_some() {
        EXIT_INCONSISTENT
    } else {
        EXIT_OK
    };
    Ok(finish(out, format, code, message))
}

fn invert(args: &SeriesArgs, format: OutputFormat) -> Result<Outcome, Failure> {
    let f = args.series()?;
    let inv = f.invert()?;
    let closed = inverse_closed_form(f.coeff(2), f.coeff(3), f.coeff(4), f.coeff(5));
    let gap = rel_gap_pairs(&inv.coeffs()[2..6], &closed);
    let message = check_consistency("series inversion and closed form", gap);
    let out = json!({
        "order": args.order,
        "inverse": complex_list(inv.coeffs()),
        "closed_form_A2_A5": complex_list(&closed),
        "closed_form_gap": num(gap),
    });
    let code = if message.is_some() {
        EXIT_INCONSISTENT
    } else {
        EXIT_OK
    };
    Ok(finish(out, format, code, message))
}

fn rel_gap_pairs(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| rel_gap(&[*x, *y]))
        .fold(0.0, f64::max)
}

fn logcoeffs(args: &SeriesArgs, format: OutputFormat) -> Result<Outcome, Failure> {
    let f = args.series()?;
    let gamma = logarithmic_coefficients(&f)?;
    let big_gamma = inverse_log_coefficients(&f)?;
    let closed = gamma_closed_form(f.coeff(2), f.coeff(3), f.coeff(4), f.coeff(5));
    let gap = rel_gap_pairs(&big_gamma[..4], &closed);
    let message = check_consistency("series path and closed form", gap);
    let out = json!({
        "order": args.order,
        "gamma": complex_list(&gamma),
        "inverse_gamma": complex_list(&big_gamma),
        "closed_form_Gamma1_Gamma4": complex_list(&closed),
        "closed_form_gap": num(gap),
    });
    let code = if message.is_some() {
        EXIT_INCONSISTENT
    } else {
        EXIT_OK
    };
    Ok(finish(out, format, code, message))
}

fn hankel(args: &HankelArgs, format: OutputFormat) -> Result<Outcome, Failure> {
    let given = [args.c_given(), args.tau.any(), args.a.any()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(Failure::validation(
            "give exactly one of --c1/--c2/--c3, --tau1/--tau2/--tau3 or --a2/--a3/--a4",
        ));
    }
    let mut forms: Vec<(&str, Complex64)> = Vec::new();
    let (input, a) = if args.a.any() {
        ("a", args.a.values())
    } else {
        let class = args
            .class
            .ok_or_else(|| Failure::validation("--class is required with c or tau inputs"))?;
        let (input, c) = if args.tau.any() {
            let params = args.tau.params()?;
            forms.push(("tau", h21_in_tau(class, &params).value));
            ("tau", coeffs_from_schur(&params))
        } else {
            let c = args.c_values();
            if !c.within_bounds() {
                return Err(Failure::validation(
                    "Carathéodory coefficients need |c_n| <= 2",
                ));
            }
            ("c", c)
        };
        forms.push(("c", h21_in_c(class, &c).value));
        (input, coeff_map(class, &c))
    };
    let [a2, a3, a4] = a;
    forms.push(("a", h21_from_a(a2, a3, a4).value));
    forms.push(("gamma", h21_via_series_from_a(a2, a3, a4)?.value));
    let values: Vec<Complex64> = forms.iter().map(|(_, v)| *v).collect();
    let gap = rel_gap(&values);
    let message = check_consistency("H21 coordinate forms", gap);
    let h = forms[0].1;
    let mut by_form = serde_json::Map::new();
    for (name, v) in &forms {
        by_form.insert((*name).to_string(), complex(*v));
    }
    let out = json!({
        "class": args.class.map(FunctionClass::slug),
        "input": input,
        "a2": complex(a2),
        "a3": complex(a3),
        "a4": complex(a4),
        "h21": complex(h),
        "h21_abs": num(h.norm()),
        "forms": by_form,
        "max_relative_gap": num(gap),
    });
    let code = if message.is_some() {
        EXIT_INCONSISTENT
    } else {
        EXIT_OK
    };
    Ok(finish(out, format, code, message))
}

fn ymax(args: &YmaxArgs, format: OutputFormat) -> Result<Outcome, Failure> {
    let input = YInput::new(args.a, args.b, args.c);
    if ![args.a, args.b, args.c].iter().all(|x| x.is_finite()) {
        return Err(Failure::validation("--A, --B and --C must be finite"));
    }
    let result = y_eval(input);
    let oracle = y_oracle(input, ORACLE_RADIAL_STEPS, ORACLE_ANGULAR_STEPS);
    let diff = (result.value - oracle.value).abs();
    let message = if result.inconsistent {
        Some("square-root branch met a negative radicand".to_string())
    } else if diff > YMAX_ORACLE_TOL {
        Some(format!("closed form and oracle differ by {diff:.3e}"))
    } else {
        None
    };
    let out = json!({
        "A": num(args.a),
        "B": num(args.b),
        "C": num(args.c),
        "value": num(result.value),
        "branch": result.branch.label(),
        "argmax_hint": result.argmax_hint.map_or(Value::Null, complex),
        "oracle_value": num(oracle.value),
        "oracle_argmax": complex(oracle.argmax),
        "oracle_diff": num(diff),
    });
    let code = if message.is_some() {
        EXIT_INCONSISTENT
    } else {
        EXIT_OK
    };
    Ok(finish(out, format, code, message))
}

fn certify_cmd(args: &CertifyArgs, format: OutputFormat) -> Result<Outcome, Failure> {
    let report = certify::search_max(args.class, args.grid(), args.rounds)?;
    let message = if report.bound_exceeded() || !report.sound() {
        Some(format!(
            "bound {} exceeded: search max {} (largest excess {:.3e})",
            report.bound, report.search_max, report.max_excess
        ))
    } else if !report.attained() {
        Some(format!(
            "bound {} not attained: gap {:.3e}",
            report.bound, report.gap
        ))
    } else {
        None
    };
    let code = if message.is_some() {
        EXIT_CERTIFICATION
    } else {
        EXIT_OK
    };
    Ok(Outcome {
        bytes: report::emit_report(&report, format),
        code,
        message,
    })
}

fn extremal(args: &ClassArg, format: OutputFormat) -> Result<Outcome, Failure> {
    let report = certify::extremal_check(args.class)?;
    let inconsistent = report
        .candidates
        .iter()
        .any(|c| rel_gap(&[c.h21, c.h21_gamma_path]) > CROSS_CHECK_TOL);
    let message = inconsistent.then(|| "gamma path and a-form disagree".to_string());
    let code = if inconsistent {
        EXIT_INCONSISTENT
    } else {
        EXIT_OK
    };
    Ok(finish(
        report::extremal_value(&report),
        format,
        code,
        message,
    ))
}

fn selftest(args: &SelftestArgs, format: OutputFormat) -> Result<Outcome, Failure> {
    let scale = if args.quick {
        SelftestScale::quick()
    } else {
        SelftestScale::full()
    };
    let checks = run_selftest(args.seed, scale)?;
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "samples": c.samples,
                "max_error": num(c.max_error),
                "tolerance": num(c.tolerance),
                "passed": c.passed,
            })
        })
        .collect();
    let out = json!({ "seed": args.seed, "all_passed": failed.is_empty(), "checks": rows });
    let (code, message) = if failed.is_empty() {
        (EXIT_OK, None)
    } else {
        (
            EXIT_INCONSISTENT,
            Some(format!("failed: {}", failed.join(", "))),
        )
    };
    Ok(finish(out, format, code, message))
}

/// Runs a parsed command and renders its result. Nothing is written.
pub fn execute(cli: &Cli) -> Outcome {
    let format = cli.format;
    let result = match &cli.command {
        Command::Coeffs(a) => coeffs(a, format),
        Command::Invert(a) => invert(a, format),
        Command::Logcoeffs(a) => logcoeffs(a, format),
        Command::Hankel(a) => hankel(a, format),
        Command::Ymax(a) => ymax(a, format),
        Command::Certify(a) => certify_cmd(a, format),
        Command::Extremal(a) => extremal(a, format),
        Command::Selftest(a) => selftest(a, format),
    };
    result.unwrap_or_else(|f| Outcome {
        bytes: Vec::new(),
        code: f.code,
        message: Some(f.message),
    })
}

fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(format!("{THREADS_ENV} must be an integer >= 1, got '{s}'")),
        },
    }
}

/// Parses `args`, runs the command and writes its output; returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
        }
    };
    match thread_cap() {
        Ok(Some(n)) => {
            // Fails only if a global pool already exists, which is harmless.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        Ok(None) => {}
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_VALIDATION;
        }
    }
    let outcome = execute(&cli);
    if let Some(msg) = &outcome.message {
        eprintln!("error: {msg}");
    }
    if !outcome.bytes.is_empty() {
        let written = match &cli.output {
            Some(path) => std::fs::write(path, &outcome.bytes)
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => {
                use std::io::Write;
                std::io::stdout()
                    .write_all(&outcome.bytes)
                    .map_err(|e| format!("cannot write to standard output: {e}"))
            }
        };
        if let Err(msg) = written {
            eprintln!("error: {msg}");
            return EXIT_VALIDATION;
        }
    }
    outcome.code
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}
