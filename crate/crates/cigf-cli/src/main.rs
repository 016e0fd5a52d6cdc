//! Command-line front end: evaluate measures, verify bounds, tabulate
//! reliability profiles, compute distorted Gini values, explore the
//! bivariate examples, and run the full verification battery.
//!
//! Exit codes: 0 success, 2 parse/usage errors, 3 domain errors
//! (including detected divergence), 4 accuracy failures.

mod config;
mod suites;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cigf::bivariate::{self, BivariateExample};
use cigf::bounds;
use cigf::distributions::{parse_spec, Distribution};
use cigf::entropy::{self, MeasureKind, RecoveryOrder};
use cigf::gini::{self, Distortion, DistortionPair};
use cigf::reliability::{self, SystemSpec};
use cigf::{cigf as cigf_fn, cigf_odds, h_measure, k_measure, Error, MeasureReport, ParamPair};

use config::Overrides;

#[derive(Parser)]
#[command(
    name = "cigf",
    about = "Cumulative information generating function toolkit",
    version
)]
struct Cli {
    /// Path to a key=value config file (also read from CIGF_CONFIG)
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one measure of one distribution
    Measure(MeasureArgs),
    /// Verify the analytic inequalities for a distribution
    Bounds(BoundsArgs),
    /// Stress-strength reliability profiles
    Reliability(ReliabilityArgs),
    /// Distorted Gini measures
    Gini(GiniArgs),
    /// Bivariate generating function on an example vector
    Bivariate(BivariateArgs),
    /// Run the oracle and invariant suites; nonzero exit on violation
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureName {
    Cigf,
    Cre,
    Ce,
    #[value(name = "cre_n")]
    CreN,
    #[value(name = "ce_n")]
    CeN,
    #[value(name = "cre_frac")]
    CreFrac,
    #[value(name = "ce_frac")]
    CeFrac,
    H,
    K,
    Odds,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Direct,
    Cigf,
    Marginal,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct MeasureArgs {
    /// Distribution spec, e.g. exp:1.5, unif:0:1, power:2, bern:0.3,
    /// laplace:1, erlang2:1, degen:2, emp:@samples.csv
    #[arg(long)]
    dist: String,
    #[arg(long, value_enum)]
    measure: MeasureName,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Integer order for cre_n / ce_n
    #[arg(long)]
    n: Option<u32>,
    /// Fractional order for cre_frac / ce_frac
    #[arg(long)]
    nu: Option<f64>,
    /// Evaluation route for the entropy measures
    #[arg(long, value_enum, default_value = "direct")]
    via: Route,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextOrJson {
    Json,
    Text,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    dist: String,
    #[arg(long, value_enum, default_value = "json")]
    out: TextOrJson,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RelMethod {
    Closed,
    Sum,
    Mc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CsvOrJson {
    Csv,
    Json,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ReliabilityArgs {
    /// Strength distribution spec
    #[arg(long)]
    dist: String,
    /// Number of components
    #[arg(long)]
    n: u32,
    /// Threshold range lo:hi (inclusive)
    #[arg(long, default_value = "0:0", value_name = "LO:HI")]
    k_range: String,
    #[arg(long, value_enum, default_value = "sum")]
    method: RelMethod,
    /// Stress distribution spec; defaults to uniform over the strength support
    #[arg(long)]
    stress: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    streams: Option<u32>,
    /// csv emits a header row `k,value,err_est,method`, one row per threshold
    #[arg(long, value_enum, default_value = "csv")]
    out: CsvOrJson,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct GiniArgs {
    #[arg(long)]
    dist: String,
    /// Distortion pair: `id` or `pow:a:b`
    #[arg(long, default_value = "id")]
    distortion: String,
    /// Mixing distribution for the weighted variant
    #[arg(long)]
    weight: Option<String>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct BivariateArgs {
    /// Example selector: fgm2x2:THETA, triangle, sum, or product:SPEC:SPEC
    #[arg(long)]
    example: String,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Evaluate on the cross product of this comma-separated exponent
    /// list instead of the single (alpha, beta) pair
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::Domain(_) | Error::Divergent(_) => 3,
        Error::Accuracy { .. } => 4,
    }
}

fn report_json(r: &MeasureReport, extra: serde_json::Value) -> String {
    let mut v = serde_json::to_value(r).expect("report serializes");
    if let (Some(obj), Some(add)) = (v.as_object_mut(), extra.as_object()) {
        for (k, val) in add {
            obj.insert(k.clone(), val.clone());
        }
    }
    v.to_string()
}

fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn run_measure(args: &MeasureArgs, ov: &Overrides) -> cigf::Result<()> {
    let spec = ov.quad_spec();
    let d = parse_spec(&args.dist)?;
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Error::Parse(format!("--{name} is required for this measure")))
    };
    let report = match (args.measure, args.via) {
        (MeasureName::Cigf, _) => {
            let p = ParamPair::new(need(args.alpha, "alpha")?, need(args.beta, "beta")?);
            cigf_fn(&d, p, &spec)?
        }
        (MeasureName::H, _) => h_measure(&d, need(args.alpha, "alpha")?, &spec)?,
        (MeasureName::K, _) => k_measure(&d, need(args.beta, "beta")?, &spec)?,
        (MeasureName::Odds, _) => cigf_odds(&d, need(args.beta, "beta")?, &spec)?,
        (MeasureName::Cre, Route::Direct) => entropy::cre(&d, &spec)?,
        (MeasureName::Cre, Route::Cigf) => entropy::cre_from_cigf(&d, &spec)?,
        (MeasureName::Cre, Route::Marginal) => {
            entropy::marginal_recovery(&d, MeasureKind::Cre, RecoveryOrder::Integer(1), &spec)?
        }
        (MeasureName::Ce, Route::Direct) => entropy::ce(&d, &spec)?,
        (MeasureName::Ce, Route::Cigf) => entropy::ce_from_cigf(&d, &spec)?,
        (MeasureName::Ce, Route::Marginal) => {
            entropy::marginal_recovery(&d, MeasureKind::Ce, RecoveryOrder::Integer(1), &spec)?
        }
        (MeasureName::CreN, route) => {
            let n = args
                .n
                .ok_or_else(|| Error::Parse("--n is required for cre_n".into()))?;
            match route {
                Route::Direct => entropy::cre_n(&d, n, &spec)?,
                Route::Cigf => entropy::cre_n_from_cigf(&d, n, &spec)?,
                Route::Marginal => entropy::marginal_recovery(
                    &d,
                    MeasureKind::Cre,
                    RecoveryOrder::Integer(n),
                    &spec,
                )?,
            }
        }
        (MeasureName::CeN, route) => {
            let n = args
                .n
                .ok_or_else(|| Error::Parse("--n is required for ce_n".into()))?;
            match route {
                Route::Direct => entropy::ce_n(&d, n, &spec)?,
                Route::Cigf => entropy::ce_n_from_cigf(&d, n, &spec)?,
                Route::Marginal => entropy::marginal_recovery(
                    &d,
                    MeasureKind::Ce,
                    RecoveryOrder::Integer(n),
                    &spec,
                )?,
            }
        }
        (MeasureName::CreFrac, route) => {
            let nu = args
                .nu
                .ok_or_else(|| Error::Parse("--nu is required for cre_frac".into()))?;
            match route {
                Route::Direct => entropy::cre_frac(&d, nu, &spec)?,
                Route::Cigf => entropy::cre_frac_from_cigf(&d, nu, &spec)?,
                Route::Marginal => entropy::marginal_recovery(
                    &d,
                    MeasureKind::Cre,
                    RecoveryOrder::Fractional(nu),
                    &spec,
                )?,
            }
        }
        (MeasureName::CeFrac, route) => {
            let nu = args
                .nu
                .ok_or_else(|| Error::Parse("--nu is required for ce_frac".into()))?;
            match route {
                Route::Direct => entropy::ce_frac(&d, nu, &spec)?,
                Route::Cigf => entropy::ce_frac_from_cigf(&d, nu, &spec)?,
                Route::Marginal => entropy::marginal_recovery(
                    &d,
                    MeasureKind::Ce,
                    RecoveryOrder::Fractional(nu),
                    &spec,
                )?,
            }
        }
    };
    println!("{}", report_json(&report, json!({ "dist": args.dist })));
    Ok(())
}

fn run_bounds(args: &BoundsArgs, ov: &Overrides) -> cigf::Result<bool> {
    let spec = ov.quad_spec();
    let d = parse_spec(&args.dist)?;
    let checks = bounds::verify_bounds(&d, &spec)?;
    let all_pass = checks.iter().all(|c| c.pass);
    match args.out {
        TextOrJson::Json => {
            for c in &checks {
                println!(
                    "{}",
                    serde_json::to_value(c).expect("bound check serializes")
                );
            }
        }
        TextOrJson::Text => {
            for c in &checks {
                println!(
                    "{:<55} bound {:>24} value {:>24} margin {:>12.3e} {}",
                    c.name,
                    sig17(c.bound),
                    sig17(c.value),
                    c.margin,
                    if c.pass { "PASS" } else { "FAIL" }
                );
            }
        }
    }
    Ok(all_pass)
}

fn parse_k_range(s: &str, n: u32) -> cigf::Result<(u32, u32)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("--k-range must be LO:HI, got {s:?}")))?;
    let lo: u32 = lo
        .parse()
        .map_err(|_| Error::Parse(format!("bad k-range low {lo:?}")))?;
    let hi: u32 = hi
        .parse()
        .map_err(|_| Error::Parse(format!("bad k-range high {hi:?}")))?;
    if lo > hi || hi > n {
        return Err(Error::Parse(format!(
            "k-range {lo}:{hi} out of bounds for n = {n}"
        )));
    }
    Ok((lo, hi))
}

fn run_reliability(args: &ReliabilityArgs, ov: &Overrides) -> cigf::Result<()> {
    let spec = ov.quad_spec();
    let d = parse_spec(&args.dist)?;
    let (k_lo, k_hi) = parse_k_range(&args.k_range, args.n)?;
    let mut mc = ov.mc_config();
    if let Some(t) = args.trials {
        mc.n_trials = t;
    }
    if let Some(s) = args.seed {
        mc.seed = s;
    }
    if let Some(s) = args.streams {
        mc.n_streams = s;
    }
    let stress = match &args.stress {
        Some(s) => parse_spec(s)?,
        None => {
            let sup = d.support();
            if !sup.is_bounded() {
                return Err(Error::Parse(
                    "--stress is required when the strength support is unbounded".into(),
                ));
            }
            Distribution::uniform(sup.lo, sup.hi)?
        }
    };

    let mut rows: Vec<(u32, f64, f64, &'static str)> = Vec::new();
    for k in k_lo..=k_hi {
        let (value, err, method) = match args.method {
            RelMethod::Closed => {
                let theta = match d.tag() {
                    cigf::Tag::Power { theta } => *theta,
                    cigf::Tag::Uniform { lo, hi } if *lo == 0.0 && *hi == 1.0 => 1.0,
                    _ => {
                        return Err(Error::Domain(
                            "the closed form needs a power-law strength (power:THETA)".into(),
                        ))
                    }
                };
                (
                    reliability::rkn_power_closed(theta, k, args.n)?,
                    0.0,
                    "closed",
                )
            }
            RelMethod::Sum => {
                let sys = SystemSpec::new(args.n, k, d.clone(), stress.clone())?;
                let r = reliability::rkn_general(&sys, &spec)?;
                (r.value, r.err_est, "sum")
            }
            RelMethod::Mc => {
                let sys = SystemSpec::new(args.n, k, d.clone(), stress.clone())?;
                let r = reliability::rkn_monte_carlo(&sys, &mc)?;
                (r.value, r.err_est, "mc")
            }
        };
        rows.push((k, value, err, method));
    }

    match args.out {
        CsvOrJson::Csv => {
            println!("k,value,err_est,method");
            for (k, v, e, m) in rows {
                println!("{k},{},{},{m}", sig17(v), sig17(e));
            }
        }
        CsvOrJson::Json => {
            for (k, v, e, m) in rows {
                println!(
                    "{}",
                    json!({ "k": k, "value": v, "err_est": e, "method": m, "n": args.n })
                );
            }
        }
    }
    Ok(())
}

fn parse_distortion(s: &str) -> cigf::Result<DistortionPair> {
    if s == "id" {
        return Ok(DistortionPair::identity());
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["pow", a, b] => {
            let a: f64 = a
                .parse()
                .map_err(|_| Error::Parse(format!("bad distortion exponent {a:?}")))?;
            let b: f64 = b
                .parse()
                .map_err(|_| Error::Parse(format!("bad distortion exponent {b:?}")))?;
            DistortionPair::new(Distortion::Power(a), Distortion::Power(b))
        }
        _ => Err(Error::Parse(format!(
            "distortion must be `id` or `pow:a:b`, got {s:?}"
        ))),
    }
}

fn run_gini(args: &GiniArgs, ov: &Overrides) -> cigf::Result<()> {
    let spec = ov.quad_spec();
    let d = parse_spec(&args.dist)?;
    let q = parse_distortion(&args.distortion)?;
    let report = match &args.weight {
        Some(w) => {
            let t = parse_spec(w)?;
            gini::weighted_q_gini(&d, &q, &t, &spec)?
        }
        None => gini::q_gini(&d, &q, &spec)?,
    };
    println!(
        "{}",
        report_json(
            &report,
            json!({ "dist": args.dist, "distortion": args.distortion, "weight": args.weight })
        )
    );
    Ok(())
}

fn parse_example(s: &str) -> cigf::Result<BivariateExample> {
    if let Some(theta) = s.strip_prefix("fgm2x2:") {
        let theta: f64 = theta
            .parse()
            .map_err(|_| Error::Parse(format!("bad dependence parameter {theta:?}")))?;
        return Ok(BivariateExample::FourPoint { theta });
    }
    if s == "triangle" {
        return Ok(BivariateExample::TriangleUniform);
    }
    if s == "sum" {
        return Ok(BivariateExample::SumDensity);
    }
    if let Some(rest) = s.strip_prefix("product:") {
        let (a, b) = rest.split_once(',').ok_or_else(|| {
            Error::Parse(format!(
                "product needs two comma-separated specs, got {rest:?}"
            ))
        })?;
        return Ok(BivariateExample::Product(parse_spec(a)?, parse_spec(b)?));
    }
    Err(Error::Parse(format!(
        "example must be fgm2x2:THETA, triangle, sum, or product:SPEC,SPEC, got {s:?}"
    )))
}

fn run_bivariate(args: &BivariateArgs, ov: &Overrides) -> cigf::Result<()> {
    let spec = ov.quad_spec();
    let v = bivariate::make_bivariate(parse_example(&args.example)?)?;
    let pairs: Vec<(f64, f64)> = match &args.grid {
        Some(g) => {
            let vals: Vec<f64> = g
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad grid entry {t:?}")))
                })
                .collect::<cigf::Result<_>>()?;
            let mut out = Vec::new();
            for &a in &vals {
                for &b in &vals {
                    out.push((a, b));
                }
            }
            out
        }
        None => vec![(args.alpha, args.beta)],
    };
    for (a, b) in pairs {
        let report = bivariate::cigf2(&v, ParamPair::new(a, b), &spec)?;
        println!(
            "{}",
            report_json(
                &report,
                json!({ "example": args.example, "alpha": a, "beta": b })
            )
        );
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs, ov: &Overrides) -> cigf::Result<bool> {
    let spec = ov.quad_spec();
    let checks = suites::run_suite(&args.suite, &spec)?;
    let mut all_pass = true;
    for c in &checks {
        println!(
            "{} {} — {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        all_pass &= c.passed;
    }
    let (n_pass, n_total) = (checks.iter().filter(|c| c.passed).count(), checks.len());
    println!("{n_pass}/{n_total} checks passed");
    Ok(all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = match Overrides::load(cli.config.as_deref()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    let outcome: cigf::Result<bool> = match &cli.command {
        Command::Measure(a) => run_measure(a, &overrides).map(|_| true),
        Command::Bounds(a) => run_bounds(a, &overrides),
        Command::Reliability(a) => run_reliability(a, &overrides).map(|_| true),
        Command::Gini(a) => run_gini(a, &overrides).map(|_| true),
        Command::Bivariate(a) => run_bivariate(a, &overrides).map(|_| true),
        Command::Verify(a) => run_verify(a, &overrides),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
