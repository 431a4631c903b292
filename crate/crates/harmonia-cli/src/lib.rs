//! Command dispatch for the `harmonia` binary: parse inputs, run the
//! requested subcommand, and emit CSV or JSON.
//!
//! Output written to files or stdout is deterministic for identical
//! configurations: numeric columns are printed with 17 significant digits
//! and the per-level `elapsed_ms` column is reserved (always 0) so that
//! repeated runs are byte-identical. Measured timings go to stderr instead.

use harmonia::{
    cached_rule, harmonic_decompose, sweep, BoundResult, Error, HomogeneousPolynomial, KernelKind,
    Result, RulePolicy,
};
use std::io::Write;
use std::path::PathBuf;

/// Output encoding for `bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!(
                "unknown format '{other}' (expected csv|json)"
            ))),
        }
    }
}

/// Where a polynomial-consuming subcommand gets its input.
#[derive(Debug, Clone)]
pub enum PolynomialInput {
    Path(PathBuf),
    Builtin(String),
}

impl PolynomialInput {
    /// Exactly one of `--poly` and `--builtin`.
    pub fn from_options(poly: Option<PathBuf>, builtin: Option<String>) -> Result<Self> {
        match (poly, builtin) {
            (Some(path), None) => Ok(PolynomialInput::Path(path)),
            (None, Some(name)) => Ok(PolynomialInput::Builtin(name)),
            (Some(_), Some(_)) => Err(Error::InvalidParameter(
                "--poly and --builtin are mutually exclusive".into(),
            )),
            (None, None) => Err(Error::InvalidParameter(
                "one of --poly or --builtin is required".into(),
            )),
        }
    }

    pub fn load(&self) -> Result<HomogeneousPolynomial> {
        match self {
            PolynomialInput::Path(path) => {
                let text = std::fs::read_to_string(path)?;
                // shape violations in an input file are parse failures too
                HomogeneousPolynomial::from_json_str(&text).map_err(|e| match e {
                    Error::Io(io) => Error::Io(io),
                    other => Error::Parse(format!("{}: {other}", path.display())),
                })
            }
            PolynomialInput::Builtin(name) => builtin_polynomial(name),
        }
    }
}

/// A fully resolved invocation.
#[derive(Debug, Clone)]
pub enum RunConfig {
    Cubature {
        n: usize,
        t: usize,
        verify: bool,
        out: Option<PathBuf>,
    },
    Decompose {
        input: PolynomialInput,
        out: Option<PathBuf>,
    },
    Kernel {
        n: usize,
        k: Option<usize>,
        s: usize,
        kind: KernelKind,
        out: Option<PathBuf>,
    },
    Bound {
        input: PolynomialInput,
        kernel: KernelKind,
        s_min: usize,
        s_max: usize,
        format: Format,
        out: Option<PathBuf>,
    },
}

/// The exact integer-coefficient example forms.
///
/// `motzkin` is the ternary sextic x1²x2⁴ + x1⁴x2² + x3⁶ - 3x1²x2²x3²;
/// `robinson` is the quaternary quartic
/// Σ_i xi²(xi - x4)² + 2x1x2x3(x1 + x2 + x3 - 2x4), expanded.
pub fn builtin_polynomial(name: &str) -> Result<HomogeneousPolynomial> {
    match name {
        "motzkin" => HomogeneousPolynomial::new(
            3,
            6,
            [
                (vec![2, 4, 0], 1.0),
                (vec![4, 2, 0], 1.0),
                (vec![0, 0, 6], 1.0),
                (vec![2, 2, 2], -3.0),
            ],
        ),
        "robinson" => {
            let mut terms: Vec<(Vec<u32>, f64)> = Vec::new();
            for i in 0..3usize {
                // xi²(xi - x4)² = xi⁴ - 2xi³x4 + xi²x4²
                let mut e = vec![0u32; 4];
                e[i] = 4;
                terms.push((e, 1.0));
                let mut e = vec![0u32; 4];
                e[i] = 3;
                e[3] = 1;
                terms.push((e, -2.0));
                let mut e = vec![0u32; 4];
                e[i] = 2;
                e[3] = 2;
                terms.push((e, 1.0));
            }
            // 2x1x2x3(x1 + x2 + x3 - 2x4)
            for i in 0..3usize {
                let mut e = vec![1u32, 1, 1, 0];
                e[i] += 1;
                terms.push((e, 2.0));
            }
            terms.push((vec![1, 1, 1, 1], -4.0));
            HomogeneousPolynomial::new(4, 4, terms)
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown builtin polynomial '{other}' (expected motzkin|robinson)"
        ))),
    }
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render sweep results as the CSV table
/// `s,kernel,tau,lower,upper,cubature_size,elapsed_ms`.
pub fn bound_results_to_csv(results: &[BoundResult]) -> String {
    let mut out = String::from("s,kernel,tau,lower,upper,cubature_size,elapsed_ms\n");
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{},0\n",
            r.s,
            r.kernel_kind,
            fmt17(r.tau),
            fmt17(r.lower),
            fmt17(r.upper),
            r.cubature_size,
        ));
    }
    out
}

/// Render sweep results as a JSON array mirroring the CSV values.
pub fn bound_results_to_json(results: &[BoundResult]) -> String {
    let rows: Vec<String> = results
        .iter()
        .map(|r| {
            format!(
                r#"{{"s":{},"kernel":"{}","tau":{},"lower":{},"upper":{},"cubature_size":{},"elapsed_ms":0}}"#,
                r.s,
                r.kernel_kind,
                fmt17(r.tau),
                fmt17(r.lower),
                fmt17(r.upper),
                r.cubature_size,
            )
        })
        .collect();
    format!("[{}]\n", rows.join(","))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

/// Execute a resolved configuration, writing results to `--out` or stdout.
pub fn execute(config: &RunConfig) -> Result<()> {
    match config {
        RunConfig::Cubature { n, t, verify, out } => {
            if *n < 2 {
                return Err(Error::InvalidParameter(format!(
                    "cubature needs n >= 2, got {n}"
                )));
            }
            let rule = cached_rule(*n, *t)?;
            let mut csv = Vec::new();
            rule.write_csv(&mut csv)?;
            let csv = String::from_utf8(csv).expect("csv output is ascii");
            if *verify {
                let mut worst = 0.0f64;
                for degree in 0..=2 * t {
                    worst = worst.max(rule.verify_exactness(degree));
                }
                let line = format!("max residual over degrees <= {}: {:e}\n", 2 * t, worst);
                match out {
                    Some(path) => {
                        std::fs::write(path, &csv)?;
                        print!("{line}");
                    }
                    None => print!("{line}"),
                }
            } else {
                write_output(out, &csv)?;
            }
            Ok(())
        }
        RunConfig::Decompose { input, out } => {
            let poly = input.load()?;
            let expansion = harmonic_decompose(&poly)?;
            let rows: Vec<String> = expansion
                .components()
                .iter()
                .map(|c| c.to_json_string())
                .collect();
            write_output(out, &format!("[{}]\n", rows.join(",")))
        }
        RunConfig::Kernel { n, k, s, kind, out } => {
            if *n < 3 {
                return Err(Error::InvalidParameter(format!(
                    "kernels need n >= 3, got {n}"
                )));
            }
            let kernel = match kind {
                KernelKind::Power => {
                    if *s < 1 {
                        return Err(Error::InvalidParameter("power kernels need s >= 1".into()));
                    }
                    harmonia::power_kernel(*n, *s)
                }
                KernelKind::FangFawzi => {
                    let k = k.ok_or_else(|| {
                        Error::InvalidParameter("--k is required for fangfawzi kernels".into())
                    })?;
                    harmonia::fang_fawzi_kernel(*n, k, *s)?.kernel
                }
            };
            write_output(out, &format!("{}\n", kernel.to_json_string()))
        }
        RunConfig::Bound {
            input,
            kernel,
            s_min,
            s_max,
            format,
            out,
        } => {
            if s_min > s_max {
                return Err(Error::InvalidParameter(format!(
                    "--s-min ({s_min}) must not exceed --s-max ({s_max})"
                )));
            }
            let poly = input.load()?;
            if *kernel == KernelKind::FangFawzi && *s_min < poly.degree() / 2 {
                return Err(Error::InvalidParameter(format!(
                    "fangfawzi needs --s-min >= k = {}",
                    poly.degree() / 2
                )));
            }
            let results = sweep(&poly, *kernel, *s_min, *s_max, RulePolicy::PerLevel)?;
            for r in &results {
                eprintln!(
                    "level s = {}: {:.1} ms on {} nodes",
                    r.s, r.elapsed_ms, r.cubature_size
                );
            }
            let content = match format {
                Format::Csv => bound_results_to_csv(&results),
                Format::Json => bound_results_to_json(&results),
            };
            write_output(out, &content)
        }
    }
}

/// Exit code mapping: 0 on success, 2 for numeric/singularity failures,
/// 3 for I/O and parse failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Parse(_) => 3,
        _ => 2,
    }
}

/// Run a configuration and return the process exit code, reporting errors on
/// stderr.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
