mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use supermac::quadrature::{hermitian_form, norm_nn, norm_nnm, QuadratureSpec};
use supermac::scalar::{parse_rational, rational_to_f64};
use supermac::supermac::SuperMacdonald;
use supermac::symfunc::MacdonaldContext;
use supermac::verify::{self, BoxRange, SuiteReport};
use supermac::{Error, ParamSet, Partition, Rational, Scalar};

const DEFAULT_SEED: u64 = 20240611;

#[derive(Parser)]
#[command(name = "supermac", version, about = "Macdonald and super-Macdonald polynomials, their operators and norms")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// q^{1/2} as an exact rational, e.g. 7/10
    #[arg(long, global = true, conflicts_with = "q")]
    qsqrt: Option<String>,
    /// t^{1/2} as an exact rational, e.g. 1/2
    #[arg(long, global = true, conflicts_with = "t")]
    tsqrt: Option<String>,
    /// q as a float (float mode)
    #[arg(long, global = true)]
    q: Option<f64>,
    /// t as a float (float mode)
    #[arg(long, global = true)]
    t: Option<f64>,
    /// Terms kept in each infinite q-Pochhammer product
    #[arg(long, global = true, default_value_t = 40)]
    truncation: usize,
    /// Trapezoid nodes per angle
    #[arg(long, global = true, default_value_t = 64)]
    grid: usize,
    /// Radius of the x torus
    #[arg(long, global = true, default_value_t = 4.0)]
    xi: f64,
    /// Radius of the y torus
    #[arg(long, global = true, default_value_t = 1.0)]
    xip: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for quadrature
    #[arg(long, global = true, env = "SUPERMAC_THREADS")]
    threads: Option<usize>,
    /// Write the report into this directory instead of stdout
    #[arg(long, global = true, env = "SUPERMAC_OUT_DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Pretty,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Pretty => "txt",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a polynomial, structure constant or norm
    #[command(subcommand)]
    Compute(Compute),
    /// Run a verification suite
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum Compute {
    /// P_λ in the monomial basis
    Macdonald {
        #[arg(long)]
        lambda: Partition,
        /// Number of variables; unrestricted when omitted
        #[arg(long)]
        n: Option<usize>,
    },
    /// SP_λ(x; y) in n + m variables
    Super {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// P_{λ/μ} in the monomial basis
    Skew {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        mu: Partition,
        #[arg(long)]
        n: Option<usize>,
    },
    /// P_μ P_ν in the Macdonald basis, or one coefficient of it
    Pieri {
        #[arg(long)]
        mu: Partition,
        #[arg(long)]
        nu: Partition,
        #[arg(long)]
        lambda: Option<Partition>,
    },
    /// Closed-form norm of SP_λ, optionally against quadrature
    Norm {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long)]
        quadrature: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    Eigen,
    Orthogonality,
    Norms,
    Radii,
    SelfAdjoint,
    AppendixD,
    Factorization,
    Commutators,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Restrict to one shape; both --n and --m are needed
    #[arg(long, requires = "m")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    m: Option<usize>,
    /// Single λ for the eigen suite
    #[arg(long)]
    lambda: Option<Partition>,
    #[arg(long)]
    max_weight: Option<usize>,
    /// Degree bound for commutators and self-adjointness
    #[arg(long)]
    degree: Option<usize>,
    /// Random points per check
    #[arg(long)]
    points: Option<usize>,
    /// Also integrate at ξ = ξ' inside the excluded band (diagnostic)
    #[arg(long)]
    probe_excluded: bool,
}

/// Exact or float parameters as requested on the command line.
#[derive(Clone)]
enum Params {
    Exact(ParamSet<Rational>),
    Float(ParamSet<f64>),
}

impl Params {
    fn floats(&self) -> ParamSet<f64> {
        match self {
            Params::Exact(p) => p.to_f64(),
            Params::Float(p) => p.clone(),
        }
    }

    /// Exact parameters for the suites; float input is replaced by the
    /// nearest rationals with denominator at most `10^6`.
    fn exact(&self) -> ParamSet<Rational> {
        match self {
            Params::Exact(p) => p.clone(),
            Params::Float(p) => ParamSet::from_sqrt(nearest_rational(p.a, 1_000_000), nearest_rational(p.b, 1_000_000)),
        }
    }

    fn mode(&self) -> &'static str {
        match self {
            Params::Exact(_) => "exact",
            Params::Float(_) => "float",
        }
    }
}

/// Best rational approximation with bounded denominator, by continued fractions.
fn nearest_rational(x: f64, max_den: i64) -> Rational {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor() as i64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    Rational::new(h1.into(), k1.into())
}

#[derive(Serialize)]
struct ParamsOut {
    qsqrt: String,
    tsqrt: String,
    q: f64,
    t: f64,
}

/// Everything needed to reproduce a report.
#[derive(Serialize)]
struct RunConfig {
    command: String,
    mode: &'static str,
    params: ParamsOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    spec: QuadratureSpec,
    seed: u64,
    output: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<Partition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_weight: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    probe_excluded: bool,
}

/// A failure to run at all, reported with exit code 2.
struct Invalid(String);

impl From<Error> for Invalid {
    fn from(e: Error) -> Self {
        Invalid(e.to_string())
    }
}

fn parse_params(c: &Common) -> Result<Params, Invalid> {
    let params = match (&c.qsqrt, &c.tsqrt, c.q, c.t) {
        (None, None, None, None) => Params::Exact(ParamSet::default_exact()),
        (Some(a), Some(b), None, None) => Params::Exact(ParamSet::from_sqrt(parse_rational(a)?, parse_rational(b)?)),
        (None, None, Some(q), Some(t)) => Params::Float(ParamSet::from_qt(q, t)?),
        _ => return Err(Invalid("give both --qsqrt and --tsqrt, or both --q and --t".into())),
    };
    let fp = params.floats();
    if !(fp.a > 0.0 && fp.b > 0.0) {
        return Err(Invalid("q^{1/2} and t^{1/2} must be positive".into()));
    }
    fp.validate_regime()?;
    Ok(params)
}

fn params_out(params: &Params) -> ParamsOut {
    match params {
        Params::Exact(p) => ParamsOut {
            qsqrt: p.a.to_string(),
            tsqrt: p.b.to_string(),
            q: rational_to_f64(&p.q()),
            t: rational_to_f64(&p.t()),
        },
        Params::Float(p) => ParamsOut { qsqrt: p.a.to_string(), tsqrt: p.b.to_string(), q: p.q(), t: p.t() },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Invalid> {
    let c = &cli.common;
    let params = parse_params(c)?;
    let spec = QuadratureSpec { xi: c.xi, xip: c.xip, grid: c.grid, truncation: c.truncation };
    spec.validate_shape()?;
    let mut config = RunConfig {
        command: String::new(),
        mode: params.mode(),
        params: params_out(&params),
        n: None,
        m: None,
        spec,
        seed: c.seed,
        output: c.format,
        lambda: None,
        max_weight: None,
        degree: None,
        points: None,
        probe_excluded: false,
    };
    match &cli.command {
        Command::Compute(cmd) => {
            let (name, body) = compute(cmd, &params, &spec, &mut config)?;
            config.command = format!("compute {name}");
            let doc = json!({ "config": config, "result": body });
            emit(c, &format!("compute-{name}"), &report::render_compute(&doc, c.format))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            config.command = format!("verify {}", suite_name(args.suite));
            let reports = run_verify(args, &params, &spec, &mut config)?;
            let passed = reports.iter().all(|r| r.first_failure().is_none());
            let doc = json!({ "config": config, "passed": passed, "reports": reports });
            let text = report::render_verify(&doc, &reports, c.format)
                .map_err(|e| Invalid(format!("cannot write report: {e}")))?;
            emit(c, &format!("verify-{}", suite_name(args.suite)), &text)?;
            for r in &reports {
                if let Some(f) = r.first_failure() {
                    eprintln!(
                        "FAIL {}: {} = {:e} (tolerance {:e}){}",
                        r.suite,
                        f.name,
                        f.value,
                        f.tolerance,
                        f.counterexample.as_ref().map(|s| format!(" at {s}")).unwrap_or_default()
                    );
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit(c: &Common, stem: &str, text: &str) -> Result<(), Invalid> {
    match &c.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Invalid(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!("{stem}.{}", c.format.extension()));
            std::fs::write(&path, text).map_err(|e| Invalid(format!("{}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Eigen => "eigen",
        Suite::Orthogonality => "orthogonality",
        Suite::Norms => "norms",
        Suite::Radii => "radii",
        Suite::SelfAdjoint => "self-adjoint",
        Suite::AppendixD => "appendix-d",
        Suite::Factorization => "factorization",
        Suite::Commutators => "commutators",
        Suite::All => "all",
    }
}

fn compute(cmd: &Compute, params: &Params, spec: &QuadratureSpec, config: &mut RunConfig) -> Result<(&'static str, Value), Invalid> {
    match cmd {
        Compute::Norm { lambda, n, m, quadrature } => {
            config.lambda = Some(lambda.clone());
            (config.n, config.m) = (Some(*n), Some(*m));
            Ok(("norm", norm(lambda, *n, *m, *quadrature, params, spec)?))
        }
        _ => match params {
            Params::Exact(p) => compute_algebra(cmd, p, config),
            Params::Float(p) => compute_algebra(cmd, p, config),
        },
    }
}

fn compute_algebra<F: Scalar>(cmd: &Compute, params: &ParamSet<F>, config: &mut RunConfig) -> Result<(&'static str, Value), Invalid> {
    match cmd {
        Compute::Macdonald { lambda, n } => {
            config.lambda = Some(lambda.clone());
            config.n = *n;
            let ctx = MacdonaldContext::from_params(params);
            let p = match n {
                Some(n) => ctx.p_in(lambda, *n)?,
                None => ctx.p(lambda)?,
            };
            Ok(("macdonald", p.to_json()))
        }
        Compute::Super { lambda, n, m } => {
            config.lambda = Some(lambda.clone());
            (config.n, config.m) = (Some(*n), Some(*m));
            if !lambda.in_fat_hook(*n, *m) {
                eprintln!("warning: ({lambda}) is not in H_{{{n},{m}}}, so SP vanishes");
            }
            let sm = SuperMacdonald::new(params.clone());
            Ok(("super", sm.sp(lambda, *n, *m)?.to_json()))
        }
        Compute::Skew { lambda, mu, n } => {
            config.lambda = Some(lambda.clone());
            config.n = *n;
            let ctx = MacdonaldContext::from_params(params);
            let mut out = ctx.skew_p_monomial(lambda, mu, *n)?.to_json();
            out["mu"] = mu.to_string().into();
            Ok(("skew", out))
        }
        Compute::Pieri { mu, nu, lambda } => {
            config.lambda = lambda.clone();
            let ctx = MacdonaldContext::from_params(params);
            let body = match lambda {
                Some(l) => {
                    let mut v = ctx.pieri_f(l, mu, nu)?.to_json();
                    v["partition"] = l.to_string().into();
                    json!({ "mu": mu.to_string(), "nu": nu.to_string(), "terms": [v] })
                }
                None => {
                    let mut v = ctx.product(mu, nu)?.to_json();
                    v["mu"] = mu.to_string().into();
                    v["nu"] = nu.to_string().into();
                    v
                }
            };
            Ok(("pieri", body))
        }
        Compute::Norm { .. } => unreachable!("handled by compute"),
    }
}

fn norm(lambda: &Partition, n: usize, m: usize, quadrature: bool, params: &Params, spec: &QuadratureSpec) -> Result<Value, Invalid> {
    let fp = params.floats();
    let formula = if !lambda.in_fat_hook(n, m) {
        eprintln!("warning: ({lambda}) is not in H_{{{n},{m}}}, so SP vanishes");
        0.0
    } else if m == 0 {
        norm_nn(lambda, n, fp.q(), fp.t(), spec.truncation)?
    } else {
        norm_nnm(lambda, n, m, &fp, spec.truncation)?
    };
    let mut out = json!({ "lambda": lambda.to_string(), "formula": formula });
    if quadrature {
        spec.validate(&fp, n, m)?;
        let sm = SuperMacdonald::new(params.exact());
        let p = sm.sp(lambda, n, m)?.compile();
        let v: Complex64 = hermitian_form(&p, &p, spec, &fp)?;
        out["quad_re"] = v.re.into();
        out["quad_im"] = v.im.into();
        out["rel_err"] = ((v - formula).norm() / formula.abs().max(1.0)).into();
    }
    Ok(out)
}

fn shapes4() -> Vec<(usize, usize)> {
    vec![(1, 1), (2, 1), (1, 2), (2, 2)]
}

fn shapes3() -> Vec<(usize, usize)> {
    vec![(1, 1), (2, 1), (1, 2)]
}

/// Defaults reproduce the acceptance configuration; `--n/--m` and the size
/// flags narrow it.
fn run_verify(args: &VerifyArgs, params: &Params, spec: &QuadratureSpec, config: &mut RunConfig) -> Result<Vec<SuiteReport>, Invalid> {
    (config.n, config.m) = (args.n, args.m);
    config.lambda = args.lambda.clone();
    config.max_weight = args.max_weight;
    config.degree = args.degree;
    config.points = args.points;
    config.probe_excluded = args.probe_excluded;
    let exact = params.exact();
    let fp = params.floats();
    let sm = SuperMacdonald::new(exact.clone());
    let seed = config.seed;
    let given = args.n.zip(args.m).map(|s| vec![s]);
    let shapes = |default: Vec<(usize, usize)>| given.clone().unwrap_or(default);
    let weight = |default: usize| args.max_weight.unwrap_or(default);
    let degree = |default: usize| args.degree.or(args.max_weight).unwrap_or(default);
    let points = |default: usize| args.points.unwrap_or(default);

    if args.lambda.is_some() && args.suite != Suite::Eigen {
        return Err(Invalid("--lambda applies to the eigen suite only".into()));
    }
    let quad_shapes: Vec<(usize, usize)> = match args.suite {
        Suite::Eigen | Suite::Orthogonality | Suite::Commutators => Vec::new(),
        Suite::Factorization => shapes(vec![(2, 0), (1, 1), (2, 1)]),
        _ => shapes(shapes3()),
    };
    for &(n, m) in &quad_shapes {
        spec.validate(&fp, n, m)?;
    }

    let run_one = |suite: Suite| -> Result<Vec<SuiteReport>, Invalid> {
        Ok(match suite {
            Suite::Eigen => {
                let eigen_shapes = shapes(shapes4());
                let lambdas = args.lambda.clone().map(|l| vec![l]);
                if let Some(l) = &args.lambda {
                    for &(n, m) in &eigen_shapes {
                        if !l.in_fat_hook(n, m) {
                            return Err(Error::NotInFatHook { lambda: l.clone(), n, m }.into());
                        }
                    }
                }
                let identity_shapes = given.clone().unwrap_or_else(|| {
                    (0..=3).flat_map(|n| (0..=3).map(move |m| (n, m))).filter(|&(n, m)| n + m > 0).collect()
                });
                vec![
                    verify::eigen(&sm, &eigen_shapes, lambdas.as_deref(), weight(6), points(20), seed)?,
                    verify::identity(&exact, &identity_shapes, points(5), seed)?,
                ]
            }
            Suite::Orthogonality => vec![
                verify::macdonald_core(sm.context(), weight(8), BoxRange::default())?,
                verify::super_cross(&sm, &shapes(shapes4()), weight(6), 2, seed)?,
            ],
            Suite::Norms => {
                let mut out = Vec::new();
                let norm_shapes: Vec<(usize, usize)> = shapes(shapes3()).into_iter().filter(|&(_, m)| m > 0).collect();
                if !norm_shapes.is_empty() {
                    out.push(verify::norms(&sm, &norm_shapes, weight(5), spec)?);
                }
                let max_n = match given {
                    Some(ref s) if s[0].1 == 0 => s[0].0,
                    Some(_) => 0,
                    None => 3,
                };
                if max_n > 0 {
                    out.push(verify::m0_regression(sm.context(), max_n, weight(5), spec)?);
                }
                out
            }
            Suite::Radii => vec![verify::radii(
                &sm,
                &shapes(shapes3()),
                weight(4),
                spec,
                &verify::default_radii_configs(),
                args.probe_excluded || args.suite == Suite::All,
            )?],
            Suite::SelfAdjoint => vec![verify::self_adjoint(&sm, &shapes(vec![(1, 1)]), degree(3), spec)?],
            Suite::AppendixD => vec![verify::appendix_d(&sm, spec)?],
            Suite::Factorization => {
                vec![verify::factorization(&fp, &shapes(vec![(2, 0), (1, 1), (2, 1)]), spec, points(10), seed)?]
            }
            Suite::Commutators => vec![verify::commutators(&sm, &shapes(vec![(1, 1), (2, 1)]), degree(4), points(10), seed)?],
            Suite::All => unreachable!("expanded by the caller"),
        })
    };

    if args.suite != Suite::All {
        return run_one(args.suite);
    }
    let mut out = Vec::new();
    for s in [
        Suite::Orthogonality,
        Suite::Eigen,
        Suite::Norms,
        Suite::Radii,
        Suite::AppendixD,
        Suite::Factorization,
        Suite::Commutators,
        Suite::SelfAdjoint,
    ] {
        out.extend(run_one(s)?);
    }
    Ok(out)
}
