use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use heisenlab::estimator::{
    reference_points, refine_and_classify, scan_operators, scan_typeset, ScanSettings,
};
use heisenlab::exponents::{
    format_rational, geometry_summary, parse_rational, ExponentPoint, Rational, RegionSpec,
};
use heisenlab::group::{HeisenbergDim, SymmetricCoefficientMatrix};
use heisenlab::verify::{run_suite, SuiteSettings};

#[derive(Parser)]
#[command(
    name = "heisenlab",
    version,
    about = "Identity checks, type-set scans and norm estimates on the Heisenberg group"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite and print a JSON report.
    Verify(Common),
    /// Classify sample exponent pairs and write CSV rows.
    Scan(Common),
    /// Estimate one L^p → L^q norm across resolutions.
    Estimate(Common),
    /// Print the vertices and constraint lines of the exponent region.
    Geometry(GeometryArgs),
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Output path; overrides the configuration.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Seed; overrides the configuration.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args)]
struct GeometryArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GammaText {
    Text(String),
    Number(serde_json::Number),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct GridConfig {
    spatial_halfwidth: Option<f64>,
    spatial_points: Option<usize>,
    t_halfwidth: Option<f64>,
    t_points: Option<usize>,
    resolutions: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ExperimentConfig {
    n: usize,
    #[serde(rename = "A")]
    a: Option<Vec<Vec<f64>>>,
    gamma: Option<GammaText>,
    grid: GridConfig,
    lambdas: Option<Vec<f64>>,
    seed: u64,
    output: Option<PathBuf>,
    points: Option<Vec<[String; 2]>>,
    p: Option<f64>,
    q: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 1,
            a: None,
            gamma: None,
            grid: GridConfig::default(),
            lambdas: None,
            seed: 0,
            output: None,
            points: None,
            p: None,
            q: None,
        }
    }
}

struct Resolved {
    n: HeisenbergDim,
    a: SymmetricCoefficientMatrix,
    gamma: Rational,
    raw: ExperimentConfig,
}

/// Anything that should map to exit code 2.
#[derive(Debug)]
struct ConfigError(anyhow::Error);

impl From<anyhow::Error> for ConfigError {
    fn from(e: anyhow::Error) -> Self {
        ConfigError(e)
    }
}

impl From<heisenlab::Error> for ConfigError {
    fn from(e: heisenlab::Error) -> Self {
        ConfigError(e.into())
    }
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig, ConfigError> {
    let Some(path) = path else {
        return Ok(ExperimentConfig::default());
    };
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cfg = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(cfg)
}

fn parse_gamma(g: &Option<GammaText>) -> Result<Rational, ConfigError> {
    match g {
        None => Ok(Rational::from_integer(0.into())),
        Some(GammaText::Text(s)) => Ok(parse_rational(s)?),
        Some(GammaText::Number(x)) => Ok(parse_rational(&x.to_string())?),
    }
}

fn resolve(mut raw: ExperimentConfig, common: &Common) -> Result<Resolved, ConfigError> {
    if let Some(seed) = common.seed {
        raw.seed = seed;
    }
    if let Some(out) = &common.output {
        raw.output = Some(out.clone());
    }
    let n = HeisenbergDim::new(raw.n)?;
    let a = match &raw.a {
        None => SymmetricCoefficientMatrix::identity(n),
        Some(rows) => SymmetricCoefficientMatrix::from_rows(rows)?,
    };
    if a.dim() != n {
        return Err(ConfigError(anyhow!(
            "A is {0}×{0} but n = {1} needs {2}×{2}",
            a.matrix().rows(),
            n.n(),
            n.spatial()
        )));
    }
    let gamma = parse_gamma(&raw.gamma)?;
    Ok(Resolved { n, a, gamma, raw })
}

fn writer(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json(path: Option<&Path>, value: &Value) -> anyhow::Result<()> {
    let mut w = writer(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn cmd_verify(common: &Common) -> Result<bool, ConfigError> {
    let cfg = resolve(load_config(common.config.as_deref())?, common)?;
    let mut s = SuiteSettings::reference(cfg.n);
    s.a = cfg.a;
    s.seed = cfg.raw.seed;
    if let Some(l) = cfg.raw.lambdas {
        s.lambdas = l;
    }
    let g = &cfg.raw.grid;
    s.spatial_halfwidth = g.spatial_halfwidth.unwrap_or(s.spatial_halfwidth);
    s.spatial_points = g.spatial_points.unwrap_or(s.spatial_points);
    s.t_halfwidth = g.t_halfwidth.unwrap_or(s.t_halfwidth);
    s.t_points = g.t_points.unwrap_or(s.t_points);
    let report = run_suite(&s)?;
    if common.verbose > 0 {
        for c in &report.checks {
            eprintln!("{:<28} {:?}", c.check, c.status);
        }
    }
    emit_json(
        cfg.raw.output.as_deref(),
        &serde_json::to_value(&report).map_err(anyhow::Error::from)?,
    )?;
    Ok(report.all_pass())
}

fn scan_settings(cfg: &Resolved) -> ScanSettings {
    let mut s = ScanSettings::reference(cfg.n);
    s.a = cfg.a.clone();
    s.estimator.seed = cfg.raw.seed;
    let g = &cfg.raw.grid;
    s.spatial_halfwidth = g.spatial_halfwidth.unwrap_or(s.spatial_halfwidth);
    s.t_halfwidth = g.t_halfwidth.unwrap_or(s.t_halfwidth);
    if let Some(r) = &g.resolutions {
        s.resolutions = r.clone();
    }
    s
}

fn cmd_scan(common: &Common) -> Result<bool, ConfigError> {
    let cfg = resolve(load_config(common.config.as_deref())?, common)?;
    let region = RegionSpec::new(cfg.n, cfg.gamma.clone())?;
    let points = match &cfg.raw.points {
        None => reference_points(),
        Some(list) => list
            .iter()
            .map(|[a, b]| ExponentPoint::new(parse_rational(a)?, parse_rational(b)?))
            .collect::<heisenlab::Result<Vec<_>>>()?,
    };
    let settings = scan_settings(&cfg);
    let result = scan_typeset(&region, &points, &settings)?;
    let csv_path = cfg.raw.output.as_deref();
    {
        let mut w = csv::Writer::from_writer(writer(csv_path)?);
        for row in result.rows() {
            w.serialize(row).map_err(anyhow::Error::from)?;
        }
        w.flush().map_err(anyhow::Error::from)?;
    }
    let summary = serde_json::to_value(result.summary()).map_err(anyhow::Error::from)?;
    match csv_path {
        Some(p) => emit_json(Some(&p.with_extension("summary.json")), &summary)?,
        None => eprintln!(
            "{}",
            serde_json::to_string_pretty(&summary).map_err(anyhow::Error::from)?
        ),
    }
    if common.verbose > 0 {
        eprintln!("agreement {}/{}", result.agreement(), result.samples.len());
    }
    Ok(true)
}

fn cmd_estimate(common: &Common) -> Result<bool, ConfigError> {
    let cfg = resolve(load_config(common.config.as_deref())?, common)?;
    let (Some(p), Some(q)) = (cfg.raw.p, cfg.raw.q) else {
        return Err(ConfigError(anyhow!(
            "estimate needs \"p\" and \"q\" in the configuration"
        )));
    };
    if !(p >= 1.0 && q >= 1.0) {
        return Err(ConfigError(anyhow!(
            "p and q must be at least 1, got p = {p}, q = {q}"
        )));
    }
    let region = RegionSpec::new(cfg.n, cfg.gamma.clone())?;
    let settings = scan_settings(&cfg);
    let family = scan_operators(&region, &settings)?;
    let (estimate, class) = refine_and_classify(&family, p, q, &settings.estimator)?;
    let out = json!({
        "n": cfg.n.n(),
        "gamma": format_rational(&cfg.gamma),
        "estimate": estimate,
        "classification": class,
    });
    emit_json(cfg.raw.output.as_deref(), &out)?;
    Ok(true)
}

fn point_text(p: &ExponentPoint) -> String {
    format!(
        "{}, {}",
        format_rational(p.inv_p()),
        format_rational(p.inv_q())
    )
}

fn cmd_geometry(args: &GeometryArgs) -> Result<bool, ConfigError> {
    let cfg = load_config(args.config.as_deref())?;
    let n = HeisenbergDim::new(args.n.unwrap_or(cfg.n))?;
    let gamma = match &args.gamma {
        Some(g) => parse_rational(g)?,
        None => parse_gamma(&cfg.gamma)?,
    };
    let region = RegionSpec::new(n, gamma)?;
    let g = geometry_summary(&region);
    let vertices: serde_json::Map<String, Value> = g
        .vertices
        .iter()
        .map(|(name, p)| (name.clone(), Value::String(point_text(p))))
        .collect();
    let lines: Vec<Value> = g
        .lines
        .iter()
        .map(|(l, text)| {
            json!({
                "name": l.name,
                "slope": format_rational(&l.slope),
                "intercept": format_rational(&l.intercept),
                "equation": text,
            })
        })
        .collect();
    let out = json!({
        "n": g.n,
        "gamma": format_rational(&g.gamma),
        "vertices": vertices,
        "lines": lines,
        "theta_star": format_rational(&g.theta_star),
        "d_on_scaling_line": g.d_on_scaling_line,
    });
    emit_json(args.output.as_deref().or(cfg.output.as_deref()), &out)?;
    Ok(true)
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(text) = std::env::var("HEISENLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .with_context(|| format!("HEISENLAB_THREADS must be a positive integer, got {text:?}"))?;
    if threads == 0 {
        bail!("HEISENLAB_THREADS must be a positive integer, got 0");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let outcome = match &cli.command {
        Command::Verify(c) => cmd_verify(c),
        Command::Scan(c) => cmd_scan(c),
        Command::Estimate(c) => cmd_estimate(c),
        Command::Geometry(g) => cmd_geometry(g),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(ConfigError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
