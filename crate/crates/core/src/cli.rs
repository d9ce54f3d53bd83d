//! The `nblab` command line.
//!
//! Every subcommand prints either a JSON envelope `{"config": …, "result": …}`
//! or CSV preceded by `# config: …` comment lines. Floats are printed with the
//! shortest representation that round-trips.
//!
//! Exit codes: 0 success, 1 invalid input or domain error, 2 requested
//! precision unreachable (or singular solve), 64 usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analytic::{critical_zero_brackets, functional_equation_residual, xi, zeta, ComplexPoint};
use crate::approx::{best_approximation, necessary_condition_gap, sweep, sweep_csv, DilationFamily};
use crate::bstar::BStarFunction;
use crate::error::Error;
use crate::integrals::{
    bstar_moment, constants_report, gram_system, lemma1_moment, mstar_norm, mstar_norm_of_constant,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_PRECISION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "nblab",
    version,
    about = "Dilated fractional parts, ζ and the distance from 1"
)]
pub struct CliConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomly generated inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// ζ(s) with an error estimate.
    Zeta(PointArgs),
    /// ξ(s) = ½ s(s−1) π^{−s/2} Γ(s/2) ζ(s).
    Xi(PointArgs),
    /// Relative residual of ζ(s) = χ(s) ζ(1−s).
    FeCheck(PointArgs),
    /// Zeros of ξ(½ + it) for 0 < t ≤ t_max.
    Zeros(ZerosArgs),
    /// γ, λ = 1 − γ and λ_n.
    Constants(ConstantsArgs),
    /// ∫₁^∞ {t/l} dt/t² for each l.
    Lemma1(Lemma1Args),
    /// First moment of a constrained function Σ h_k {t/l_k}.
    Moment(MomentArgs),
    /// ‖φ‖ in L_p(dt/t²).
    Norm(NormArgs),
    /// Certified Gram system of {t/l_k}.
    Gram(DilationArgs),
    /// Best constrained approximation of 1.
    Approx(DilationArgs),
    /// Distances along a nested dilation family.
    Sweep(SweepArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub re: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub im: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub target: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ZerosArgs {
    #[arg(long)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = 1e-12)]
    pub target: f64,
    /// n values at which λ_n is reported.
    #[arg(long, value_delimiter = ',', default_values_t = [10u64, 100, 1000, 10_000, 100_000, 1_000_000])]
    pub trace: Vec<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct Lemma1Args {
    #[arg(long, value_delimiter = ',', required = true)]
    pub l: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct FunctionArgs {
    /// Terms as `h:l` pairs, e.g. `-1:1,2:2`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["function_file", "random"])]
    pub terms: Option<String>,
    /// JSON file holding `{"terms": [{"h": …, "l": …}], "constrained": …}`.
    #[arg(long, conflicts_with = "random")]
    pub function_file: Option<PathBuf>,
    /// Random constrained function with this many terms (uses --seed).
    #[arg(long)]
    pub random: Option<usize>,
    /// Accept terms violating Σ h_k/l_k = 0.
    #[arg(long)]
    pub unconstrained: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct MomentArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct NormArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Norm of a constant function instead.
    #[arg(long, allow_hyphen_values = true)]
    pub constant: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub target: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DilationArgs {
    /// Dilations, ascending.
    #[arg(long, value_delimiter = ',', conflicts_with = "n")]
    pub l: Option<Vec<f64>>,
    /// Shorthand for `--l 1,2,…,N`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Gram entry error; for `approx` also the required error on the distance.
    #[arg(long, default_value_t = 1e-10)]
    pub target: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Integers,
    Geometric,
    List,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = FamilyKind::Integers)]
    pub family: FamilyKind,
    /// Ratio of the geometric family.
    #[arg(long, required_if_eq("family", "geometric"))]
    pub ratio: Option<f64>,
    /// Members of the list family.
    #[arg(long, value_delimiter = ',', required_if_eq("family", "list"))]
    pub values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 1e-12)]
    pub target: f64,
}

/// Failure of a subcommand after argument parsing.
#[derive(Debug)]
enum Failure {
    Lab(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lab(e)
    }
}

/// A subcommand's result: JSON value plus CSV body (header row first).
struct Output {
    json: Value,
    csv: String,
}

/// Parses `argv` (including the program name), runs the subcommand and writes
/// its output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&config) {
        Ok(output) => {
            let config_json = serde_json::to_value(&config).expect("config serializes");
            let written = match config.format {
                Format::Json => {
                    let envelope = json!({ "config": config_json, "result": output.json });
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&envelope).expect("serializable")
                    )
                }
                Format::Csv => write!(out, "# config: {config_json}\n{}", output.csv),
            };
            if written.is_err() {
                return EXIT_DOMAIN;
            }
            EXIT_OK
        }
        Err(Failure::Lab(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_precision() {
                EXIT_PRECISION
            } else {
                EXIT_DOMAIN
            }
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
    }
}

fn execute(config: &CliConfig) -> Result<Output, Failure> {
    match &config.command {
        Command::Zeta(a) => {
            let r = zeta(ComplexPoint::new(a.re, a.im)?, a.target)?;
            Ok(complex_output(
                r.value.re,
                r.value.im,
                r.abs_error_estimate,
                r.terms_used,
            ))
        }
        Command::Xi(a) => {
            let r = xi(ComplexPoint::new(a.re, a.im)?)?;
            if r.abs_error_estimate > a.target * r.value.norm().max(1.0) {
                return Err(Error::PrecisionUnreachable {
                    target: a.target,
                    achieved: r.abs_error_estimate,
                }
                .into());
            }
            Ok(complex_output(
                r.value.re,
                r.value.im,
                r.abs_error_estimate,
                r.terms_used,
            ))
        }
        Command::FeCheck(a) => {
            let residual = functional_equation_residual(ComplexPoint::new(a.re, a.im)?)?;
            Ok(Output {
                json: json!({ "relative_residual": residual, "passed": residual < a.target }),
                csv: format!("relative_residual\n{residual:?}\n"),
            })
        }
        Command::Zeros(a) => {
            let brackets = critical_zero_brackets(a.t_max, a.tol)?;
            let mut csv = String::from("t,lo,hi,xi_abs\n");
            for b in &brackets {
                csv.push_str(&format!("{:?},{:?},{:?},{:?}\n", b.t, b.lo, b.hi, b.xi_abs));
            }
            let ordinates: Vec<f64> = brackets.iter().map(|b| b.t).collect();
            Ok(Output {
                json: json!({ "ordinates": ordinates, "brackets": brackets }),
                csv,
            })
        }
        Command::Constants(a) => {
            let r = constants_report(a.target, &a.trace)?;
            let mut csv = format!("name,n,value\ngamma,,{:?}\nlambda,,{:?}\n", r.gamma, r.lambda);
            for (n, v) in &r.lambda_n_trace {
                csv.push_str(&format!("lambda_n,{n},{v:?}\n"));
            }
            let trace: Vec<Value> = r
                .lambda_n_trace
                .iter()
                .map(|(n, v)| json!({ "n": n, "lambda_n": v }))
                .collect();
            Ok(Output {
                json: json!({ "gamma": r.gamma, "lambda": r.lambda, "lambda_n": trace }),
                csv,
            })
        }
        Command::Lemma1(a) => {
            let mut csv = String::from("l,moment\n");
            let mut rows = Vec::new();
            for &l in &a.l {
                let m = lemma1_moment(l)?;
                csv.push_str(&format!("{l:?},{m:?}\n"));
                rows.push(json!({ "l": l, "moment": m }));
            }
            Ok(Output {
                json: Value::Array(rows),
                csv,
            })
        }
        Command::Moment(a) => {
            let phi = load_function(&a.function, config.seed)?;
            let r = bstar_moment(&phi)?;
            let csv = format!(
                "integral_value,integral_error,closed_form,constraint_sum,truncation\n{:?},{:?},{:?},{:?},{:?}\n",
                r.integral_value, r.integral_error, r.closed_form, r.constraint_sum, r.truncation
            );
            Ok(Output {
                json: json!({ "function": phi, "moment": r }),
                csv,
            })
        }
        Command::Norm(a) => {
            if let Some(c) = a.constant {
                let norm = mstar_norm_of_constant(c, a.p)?;
                return Ok(Output {
                    json: json!({ "constant": c, "p": a.p, "norm": norm }),
                    csv: format!("p,norm\n{:?},{norm:?}\n", a.p),
                });
            }
            let phi = load_function(&a.function, config.seed)?;
            let r = mstar_norm(&phi, a.p, a.target)?;
            let csv = format!(
                "p,norm,integral,integral_error,truncation\n{:?},{:?},{:?},{:?},{:?}\n",
                r.p, r.norm, r.integral, r.integral_error, r.truncation
            );
            Ok(Output {
                json: json!({ "function": phi, "norm": r }),
                csv,
            })
        }
        Command::Gram(a) => {
            let system = gram_system(&resolve_dilations(a)?, a.target)?;
            Ok(Output {
                json: system.to_json(),
                csv: system.to_csv(),
            })
        }
        Command::Approx(a) => {
            let r = best_approximation(&resolve_dilations(a)?, a.target)?;
            let gap = necessary_condition_gap(&r);
            let mut csv = String::from("l,h\n");
            for (l, h) in r.dilations.iter().zip(&r.h_star) {
                csv.push_str(&format!("{l:?},{h:?}\n"));
            }
            csv.push_str(&format!(
                "# distance={:?} theta_log_sum={:?} gap={gap:?} constraint_residual={:?} kkt_residual={:?} gram_condition={:?} certified_error={:?}\n",
                r.distance, r.theta_log_sum, r.constraint_residual, r.kkt_residual, r.gram_condition, r.certified_error
            ));
            let mut json = serde_json::to_value(&r).expect("serializable");
            json["gap"] = json!(gap);
            Ok(Output { json, csv })
        }
        Command::Sweep(a) => {
            let family = match a.family {
                FamilyKind::Integers => DilationFamily::Integers,
                FamilyKind::Geometric => DilationFamily::Geometric {
                    ratio: a.ratio.expect("required by clap"),
                },
                FamilyKind::List => DilationFamily::List {
                    values: a.values.clone().expect("required by clap"),
                },
            };
            let records = sweep(&family, &a.n, a.target)?;
            Ok(Output {
                json: json!({ "family": family, "records": records }),
                csv: sweep_csv(&records),
            })
        }
    }
}

fn complex_output(re: f64, im: f64, err: f64, terms: usize) -> Output {
    Output {
        json: json!({ "re": re, "im": im, "abs_error_estimate": err, "terms_used": terms }),
        csv: format!("re,im,abs_error_estimate,terms_used\n{re:?},{im:?},{err:?},{terms}\n"),
    }
}

fn resolve_dilations(a: &DilationArgs) -> Result<Vec<f64>, Failure> {
    match (&a.l, a.n) {
        (Some(l), _) => Ok(l.clone()),
        (None, Some(n)) => Ok((1..=n).map(|k| k as f64).collect()),
        (None, None) => Err(Failure::Input("give --l or --n".into())),
    }
}

fn load_function(a: &FunctionArgs, seed: u64) -> Result<BStarFunction, Failure> {
    if let Some(k) = a.random {
        return Ok(random_constrained(k, seed)?);
    }
    if let Some(path) = &a.function_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        let phi: BStarFunction =
            serde_json::from_str(&text).map_err(|e| Failure::Input(format!("invalid function JSON: {e}")))?;
        return Ok(phi);
    }
    let Some(text) = &a.terms else {
        return Err(Failure::Input("give --terms, --function-file or --random".into()));
    };
    let terms = parse_terms(text).map_err(Failure::Input)?;
    let phi = if a.unconstrained {
        BStarFunction::unconstrained(&terms)?
    } else {
        BStarFunction::constrained(&terms)?
    };
    Ok(phi)
}

/// Parses `h:l,h:l,…`.
pub fn parse_terms(text: &str) -> Result<Vec<(f64, f64)>, String> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (h, l) = pair
                .split_once(':')
                .ok_or_else(|| format!("term `{pair}` is not of the form h:l"))?;
            let h = h.trim().parse::<f64>().map_err(|e| format!("coefficient `{h}`: {e}"))?;
            let l = l.trim().parse::<f64>().map_err(|e| format!("dilation `{l}`: {e}"))?;
            Ok((h, l))
        })
        .collect()
}

/// `k` terms with `h ∈ [−1, 1]` and `l ∈ [1, 20]`, projected onto the
/// constraint.
fn random_constrained(k: usize, seed: u64) -> crate::Result<BStarFunction> {
    if k < 2 {
        return Err(Error::domain("a random constrained function needs at least two terms"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, f64)> = (0..k)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(1.0..20.0)))
        .collect();
    BStarFunction::projected(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("nblab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parses_term_lists() {
        assert_eq!(parse_terms("-1:1, 2:2").unwrap(), vec![(-1.0, 1.0), (2.0, 2.0)]);
        assert!(parse_terms("1-2").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["zeta", "--re", "1"]).0, EXIT_DOMAIN);
        assert_eq!(run_capture(&["constants", "--target", "1e-20"]).0, EXIT_PRECISION);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn csv_has_config_and_header() {
        let (code, out, _) = run_capture(&["--format", "csv", "lemma1", "--l", "1,2"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("# config: "));
        assert_eq!(lines[1], "l,moment");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn random_functions_depend_on_seed_only() {
        let a = random_constrained(5, 7).unwrap();
        let b = random_constrained(5, 7).unwrap();
        let c = random_constrained(5, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
