//! Command-line front end: evaluate any operation, run verification
//! suites, and manage the prime cache. All output is deterministic for a
//! fixed flag set and seed.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::harmonic::{fourier, BPoint, FourierGrid, TestBump, TorusForm};
use crate::intertwiner::{
    assemble_rank2, complex_local_closed, mw_character, padic_local_closed, real_local_closed,
};
use crate::lfunction::{
    l_dirichlet, l_euler, l_star, phi_k, LContext, LValue, SpectralPoint, TruncationPolicy,
};
use crate::numberfield::{load_or_compute_primes, make_field, unit_lattice};
use crate::shuffle::Evaluator;
use crate::verify::{self, Suite, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "hecke-shuffle",
    about = "Hecke L-functions, shuffle-algebra kernels, and intertwiner local factors",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one operation and print a JSON (or CSV) record.
    Eval(EvalArgs),
    /// Run a verification suite; exit 0 iff every check passes.
    Verify(VerifyArgs),
    /// Manage the prime-ideal cache.
    Cache(CacheArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalSubject {
    Lfunction,
    Phi,
    Phiw,
    Shuffle,
    Local,
    Assemble,
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LVariant {
    Euler,
    Dirichlet,
    Completed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Place {
    Real,
    Complex,
    Padic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// Field selector: 0 for the rationals, otherwise a whitelisted
    /// squarefree quadratic d.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    d: i64,
    /// Truncation bound X for Euler products and ideal sums.
    #[arg(long = "X", default_value_t = 10_000)]
    x: u64,
    /// Tail tolerance for truncated evaluations.
    #[arg(long, default_value_t = 1e12)]
    tol: f64,
    /// Seed for all sampled data.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Library-level parallelism degree (0 = library default).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Prime-cache directory (overridden by $HECKE_SHUFFLE_CACHE).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl CommonArgs {
    fn cache(&self) -> Option<PathBuf> {
        std::env::var_os("HECKE_SHUFFLE_CACHE")
            .map(PathBuf::from)
            .or_else(|| self.cache_dir.clone())
    }

    fn policy(&self) -> TruncationPolicy {
        TruncationPolicy {
            norm_bound: self.x,
            tail_tolerance: self.tol,
        }
    }

    fn context(&self) -> Result<LContext> {
        if self.jobs > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(self.jobs)
                .build_global();
        }
        let field = make_field(self.d)?;
        let lattice = unit_lattice(&field);
        LContext::new(field, lattice, self.x, self.cache().as_deref())
    }
}

#[derive(Args)]
struct EvalArgs {
    #[arg(value_enum)]
    subject: EvalSubject,
    #[command(flatten)]
    common: CommonArgs,
    /// Spectral parameter s (one per copy, semicolon-separated;
    /// each entry `re` or `re,im`).
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Torus character λ* (one comma-list per copy, semicolon-separated).
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// L-function evaluation route.
    #[arg(long, value_enum, default_value_t = LVariant::Dirichlet)]
    variant: LVariant,
    /// Permutation for phiw, as comma-separated images.
    #[arg(long)]
    w: Option<String>,
    /// Generator list for shuffle, e.g. g1,g2 (g<k> evaluates exp(0.1k·s)).
    #[arg(long)]
    gens: Option<String>,
    /// Evaluation point for shuffle (same syntax as --s).
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    /// Local place for `eval local`.
    #[arg(long, value_enum)]
    place: Option<Place>,
    /// s-difference for local factors.
    #[arg(long, allow_hyphen_values = true)]
    sdiff: Option<String>,
    /// λ^∨-difference (a real number) for archimedean local factors.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    lamdiff: f64,
    /// Rational prime selecting the p-adic local factor.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Torus mode of the test bump for `eval fourier`.
    #[arg(long, allow_hyphen_values = true)]
    mode: Option<String>,
    /// Log-width of the test bump for `eval fourier`.
    #[arg(long, default_value_t = 0.5)]
    width: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// cocycle | assoc | bijection | inversion | local | assembly |
    /// functional | roundtrip | all
    suite: String,
    #[command(flatten)]
    common: CommonArgs,
    /// Exhaustive size for bijection/inversion suites.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct CacheArgs {
    #[command(subcommand)]
    action: CacheAction,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Precompute and store the prime table for a field.
    Build {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the cache file path that would be used.
    Path {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || Error::PreconditionViolated(format!("cannot parse complex number '{text}'"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(';').map(parse_complex).collect()
}

fn parse_int_list(text: &str) -> Result<Vec<i64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim().parse().map_err(|_| {
                Error::PreconditionViolated(format!("cannot parse integer list '{text}'"))
            })
        })
        .collect()
}

fn parse_lambda(text: Option<&str>, copies: usize, rank: usize) -> Result<Vec<Vec<i64>>> {
    let parsed: Vec<Vec<i64>> = match text {
        None | Some("") => vec![vec![0; rank]; copies],
        Some(t) => t.split(';').map(parse_int_list).collect::<Result<_>>()?,
    };
    if parsed.len() != copies {
        return Err(Error::PreconditionViolated(format!(
            "expected {copies} λ* entries, got {}",
            parsed.len()
        )));
    }
    for per in &parsed {
        if per.len() != rank {
            return Err(Error::PreconditionViolated(format!(
                "λ* entry length {} ≠ unit rank {rank}",
                per.len()
            )));
        }
    }
    Ok(parsed)
}

struct EvalRecord {
    subject: String,
    field_d: i64,
    lambda: Vec<Vec<i64>>,
    s: Vec<Complex64>,
    value: Complex64,
    error_estimate: f64,
    truncation: u64,
}

impl EvalRecord {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let obj = json!({
                    "schema": 1,
                    "subject": self.subject,
                    "field": self.field_d,
                    "lambda_star": self.lambda,
                    "s": self.s.iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>(),
                    "value": [self.value.re, self.value.im],
                    "error_estimate": self.error_estimate,
                    "truncation": self.truncation,
                });
                format!("{obj}")
            }
            Format::Csv => {
                let lam = self
                    .lambda
                    .iter()
                    .map(|per| {
                        per.iter()
                            .map(|l| l.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect::<Vec<_>>()
                    .join(";");
                let s = self
                    .s
                    .iter()
                    .map(|z| format!("{};{}", z.re, z.im))
                    .collect::<Vec<_>>()
                    .join("|");
                format!(
                    "subject,field,lambda_star,s,value_re,value_im,error_estimate,truncation\n{},{},{},{},{:e},{:e},{:e},{}",
                    self.subject, self.field_d, lam, s,
                    self.value.re, self.value.im, self.error_estimate, self.truncation
                )
            }
        }
    }
}

fn eval_command(args: &EvalArgs) -> Result<String> {
    let ctx = args.common.context()?;
    let policy = args.common.policy();
    let rank = ctx.lattice.rank;
    let record = match args.subject {
        EvalSubject::Lfunction | EvalSubject::Phi => {
            let s = parse_complex(args.s.as_deref().ok_or_else(|| {
                Error::PreconditionViolated("--s is required".to_string())
            })?)?;
            let lambda = parse_lambda(args.lambda.as_deref(), 1, rank)?;
            let z = SpectralPoint::new(lambda[0].clone(), s);
            let LValue { value, tail_bound } = match args.subject {
                EvalSubject::Phi => phi_k(&ctx, &z, &policy)?,
                _ => match args.variant {
                    LVariant::Euler => l_euler(&ctx, &z, &policy)?,
                    LVariant::Dirichlet => l_dirichlet(&ctx, &z, &policy)?,
                    LVariant::Completed => l_star(&ctx, &z, &policy)?,
                },
            };
            EvalRecord {
                subject: if args.subject == EvalSubject::Phi {
                    "phi".to_string()
                } else {
                    format!("lfunction_{:?}", args.variant).to_lowercase()
                },
                field_d: args.common.d,
                lambda,
                s: vec![s],
                value,
                error_estimate: tail_bound,
                truncation: args.common.x,
            }
        }
        EvalSubject::Phiw => {
            let s = parse_complex_list(args.s.as_deref().ok_or_else(|| {
                Error::PreconditionViolated("--s is required".to_string())
            })?)?;
            let images: Vec<usize> = parse_int_list(args.w.as_deref().ok_or_else(|| {
                Error::PreconditionViolated("--w is required".to_string())
            })?)?
            .into_iter()
            .map(|i| i as usize)
            .collect();
            let w = crate::shuffle::Permutation::from_images(images)?;
            let lambda = parse_lambda(args.lambda.as_deref(), s.len(), rank)?;
            let (_, _, kernel) = mw_character(&ctx, &w, &lambda, &s, &policy)?;
            EvalRecord {
                subject: "phiw".to_string(),
                field_d: args.common.d,
                lambda,
                s,
                value: kernel,
                error_estimate: 0.0,
                truncation: args.common.x,
            }
        }
        EvalSubject::Shuffle => {
            let point = parse_complex_list(args.at.as_deref().ok_or_else(|| {
                Error::PreconditionViolated("--at is required".to_string())
            })?)?;
            let gens = args.gens.as_deref().ok_or_else(|| {
                Error::PreconditionViolated("--gens is required".to_string())
            })?;
            let mut expr = Evaluator::one();
            for name in gens.split(',').rev() {
                let k: f64 = name
                    .trim()
                    .strip_prefix('g')
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| {
                        Error::PreconditionViolated(format!(
                            "generator '{name}' not of the form g<k>"
                        ))
                    })?;
                let gen = Evaluator::generator(name.trim(), move |z: &SpectralPoint| {
                    Ok((0.1 * k * z.s).exp())
                });
                expr = if matches!(expr, Evaluator::One) {
                    gen
                } else {
                    Evaluator::shuffle(gen, expr)
                };
            }
            let lambda = parse_lambda(args.lambda.as_deref(), point.len(), rank)?;
            let z: Vec<SpectralPoint> = lambda
                .iter()
                .zip(&point)
                .map(|(l, s)| SpectralPoint::new(l.clone(), *s))
                .collect();
            let value = expr.eval(&ctx, &z, &policy)?;
            EvalRecord {
                subject: "shuffle".to_string(),
                field_d: args.common.d,
                lambda,
                s: point,
                value,
                error_estimate: 0.0,
                truncation: args.common.x,
            }
        }
        EvalSubject::Local => {
            let place = args.place.ok_or_else(|| {
                Error::PreconditionViolated("--place is required".to_string())
            })?;
            let sdiff = parse_complex(args.sdiff.as_deref().ok_or_else(|| {
                Error::PreconditionViolated("--sdiff is required".to_string())
            })?)?;
            let value = match place {
                Place::Real => real_local_closed(args.lamdiff, sdiff)?,
                Place::Complex => complex_local_closed(args.lamdiff, sdiff)?,
                Place::Padic => {
                    let prime = ctx
                        .primes
                        .iter()
                        .find(|q| q.p == args.p)
                        .ok_or_else(|| {
                            Error::PreconditionViolated(format!(
                                "no prime ideal above {} within X={}",
                                args.p, args.common.x
                            ))
                        })?;
                    let lambda = parse_lambda(args.lambda.as_deref(), 1, rank)?;
                    let vee = ctx.lattice.lambda_vee(&lambda[0]);
                    padic_local_closed(prime, &vee, sdiff)?
                }
            };
            EvalRecord {
                subject: format!("local_{place:?}").to_lowercase(),
                field_d: args.common.d,
                lambda: vec![],
                s: vec![sdiff],
                value,
                error_estimate: 0.0,
                truncation: args.common.x,
            }
        }
        EvalSubject::Assemble => {
            let s = parse_complex_list(args.s.as_deref().ok_or_else(|| {
                Error::PreconditionViolated("--s is required (two entries)".to_string())
            })?)?;
            if s.len() != 2 {
                return Err(Error::PreconditionViolated(
                    "assemble needs exactly two s entries".to_string(),
                ));
            }
            let lambda = parse_lambda(args.lambda.as_deref(), 2, rank)?;
            let z1 = SpectralPoint::new(lambda[0].clone(), s[0]);
            let z2 = SpectralPoint::new(lambda[1].clone(), s[1]);
            let LValue { value, tail_bound } = assemble_rank2(&ctx, &z1, &z2, &policy)?;
            EvalRecord {
                subject: "assemble".to_string(),
                field_d: args.common.d,
                lambda,
                s,
                value,
                error_estimate: tail_bound,
                truncation: args.common.x,
            }
        }
        EvalSubject::Fourier => {
            let s = parse_complex(args.s.as_deref().ok_or_else(|| {
                Error::PreconditionViolated("--s is required".to_string())
            })?)?;
            let lambda = parse_lambda(args.lambda.as_deref(), 1, rank)?;
            let mode = match args.mode.as_deref() {
                None | Some("") => vec![0; rank],
                Some(t) => parse_int_list(t)?,
            };
            if mode.len() != rank {
                return Err(Error::PreconditionViolated(format!(
                    "--mode length {} ≠ unit rank {rank}",
                    mode.len()
                )));
            }
            let bump = TestBump {
                center: BPoint::raw(vec![1.0; ctx.field.places()]),
                log_width: args.width,
                torus_mode: mode,
                form: TorusForm::Phase,
            };
            let grid = FourierGrid::default();
            let value = fourier(&ctx.lattice, &[bump], &[lambda[0].clone()], &[s], &grid)?;
            EvalRecord {
                subject: "fourier".to_string(),
                field_d: args.common.d,
                lambda,
                s: vec![s],
                value,
                error_estimate: grid.tolerance,
                truncation: args.common.x,
            }
        }
    };
    Ok(record.render(args.common.format))
}

fn verify_command(args: &VerifyArgs) -> Result<(String, bool)> {
    let suite: Suite = args.suite.parse()?;
    let mut cfg = VerifyConfig {
        d: args.common.d,
        norm_bound: args.common.x,
        seed: args.common.seed,
        cache_dir: args.common.cache(),
        ..VerifyConfig::default()
    };
    if let Some(n) = args.n {
        cfg.bijection_total = n;
        cfg.inversion_total = n;
    }
    let reports = verify::run(suite, &cfg)?;
    let all_pass = reports.iter().all(|r| r.passed);
    let text = match args.common.format {
        Format::Json => {
            let mut out = String::new();
            for r in &reports {
                out.push_str(&serde_json::to_string(r).expect("report serialization"));
                out.push('\n');
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("suite,check,passed,residual,tolerance\n");
            for r in &reports {
                for c in &r.checks {
                    out.push_str(&format!(
                        "{},{},{},{:e},{:e}\n",
                        r.suite, c.name, c.passed, c.residual, c.tolerance
                    ));
                }
            }
            out
        }
    };
    // PASS/FAIL lines always accompany the structured output
    Ok((format!("{}{}", verify::render_text(&reports), text), all_pass))
}

fn cache_command(args: &CacheArgs) -> Result<String> {
    match &args.action {
        CacheAction::Build { common } => {
            let dir = common.cache().ok_or_else(|| {
                Error::PreconditionViolated(
                    "cache build needs --cache-dir or $HECKE_SHUFFLE_CACHE".to_string(),
                )
            })?;
            let field = make_field(common.d)?;
            let lattice = unit_lattice(&field);
            let primes = load_or_compute_primes(&field, &lattice, common.x, Some(&dir))?;
            Ok(format!(
                "cached {} prime ideals for d={} up to norm {} in {}",
                primes.len(),
                common.d,
                common.x,
                dir.display()
            ))
        }
        CacheAction::Path { common } => {
            make_field(common.d)?;
            let name = crate::numberfield::cache_file_name(common.d, common.x);
            let dir = common
                .cache()
                .unwrap_or_else(|| PathBuf::from("."));
            Ok(dir.join(name).display().to_string())
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::PreconditionViolated(_) | Error::DomainError(_) | Error::NotWhitelisted(_) => 2,
        _ => 1,
    }
}

/// Entry point shared by the binary; returns the process exit code.
pub fn run_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with its own exit codes
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match &cli.command {
        Command::Eval(args) => eval_command(args).map(|text| (text, true)),
        Command::Verify(args) => verify_command(args),
        Command::Cache(args) => cache_command(args).map(|text| (text, true)),
    };
    match outcome {
        Ok((text, passed)) => {
            println!("{}", text.trim_end());
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("2.5").unwrap(), Complex64::new(2.5, 0.0));
        assert_eq!(
            parse_complex("-1.5,0.25").unwrap(),
            Complex64::new(-1.5, 0.25)
        );
        assert!(parse_complex("fish").is_err());
        assert_eq!(
            parse_complex_list("1;2,3").unwrap(),
            vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 3.0)]
        );
    }

    #[test]
    fn lambda_parsing_defaults_to_zero() {
        let lam = parse_lambda(None, 2, 1).unwrap();
        assert_eq!(lam, vec![vec![0], vec![0]]);
        let lam = parse_lambda(Some("1;-2"), 2, 1).unwrap();
        assert_eq!(lam, vec![vec![1], vec![-2]]);
        assert!(parse_lambda(Some("1,2"), 1, 1).is_err());
    }

    #[test]
    fn eval_local_real_classical() {
        let args = Cli::try_parse_from([
            "hecke-shuffle",
            "eval",
            "local",
            "--place",
            "real",
            "--sdiff",
            "2",
            "--lamdiff",
            "0",
        ])
        .unwrap();
        let Command::Eval(eval) = args.command else {
            panic!("expected eval");
        };
        let out = eval_command(&eval).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((parsed["value"][0].as_f64().unwrap() - 2.0).abs() < 1e-12, "{out}");
        assert!(parsed["value"][1].as_f64().unwrap().abs() < 1e-12, "{out}");
        assert_eq!(parsed["schema"], 1);
    }

    #[test]
    fn verify_local_gaussian_field() {
        let args = Cli::try_parse_from([
            "hecke-shuffle",
            "verify",
            "local",
            "--d",
            "-1",
            "--X",
            "500",
        ])
        .unwrap();
        let Command::Verify(v) = args.command else {
            panic!("expected verify");
        };
        let (text, passed) = verify_command(&v).unwrap();
        assert!(passed, "{text}");
        assert_eq!(text.matches("PASS").count(), 3, "{text}");
    }
}
