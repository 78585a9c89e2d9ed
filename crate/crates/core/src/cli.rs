//! Command-line front end. Every subcommand produces a
//! [`VerificationReport`]; the exit status is 0 when it passes, 1 when it
//! fails and 2 when the run could not be carried out.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ample::ampleness_audit;
use crate::ci::{ci_solve, demo_input, GammaSpec};
use crate::coeff::Point;
use crate::contact::{is_contact_on, is_formal_contact_on, FormalPair};
use crate::dbar::{extend_form, form_dbar_defect, RealSliceFunction};
use crate::error::{Error, Result};
use crate::fit::closure_step;
use crate::form::Form;
use crate::gallery::gallery_verify_all;
use crate::grid::{CubeGrid, GridSection};
use crate::io::{read_form, read_map, write_form, write_report, AnyForm};
use crate::laurent::Laurent;
use crate::report::VerificationReport;

type NumForm = Form<Laurent<Complex64>>;

#[derive(Debug, Parser)]
#[command(name = "hcontact", version, about = "Checks and constructions for complex contact forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Subcommand, Clone, PartialEq)]
pub enum Command {
    /// Contact condition of --form (pulled back by --map if given) at seeded samples.
    Verify,
    /// Formal contact condition of the pair (--form, --beta).
    Formal,
    /// Randomized audit of the relation's slices for --n.
    Ample,
    /// Extends the real-slice coefficients of --form to order --degree.
    Extend,
    /// Convex integration on the demo pair, or on (--form, --beta) sampled on the grid.
    Integrate,
    /// Verifies the named gallery identities (all of them by default).
    Gallery { names: Vec<String> },
    /// Fits a holomorphic form to --form on the grid, or to the integration output.
    Fit,
}

#[derive(Debug, Args, Clone, PartialEq)]
pub struct RunConfig {
    #[arg(long, global = true)]
    pub form: Option<PathBuf>,
    #[arg(long, global = true)]
    pub beta: Option<PathBuf>,
    #[arg(long, global = true)]
    pub map: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 33)]
    pub grid: usize,
    #[arg(long, global = true, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub delta: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 8)]
    pub sweeps: usize,
    /// Output directory for report.json and any dumps.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: usize,
    /// Include per-sample margins in reports.
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Cli::parse_from(["hcontact", "verify"]).config
    }
}

/// Seeded points with every coordinate in the annulus `1/2 ≤ |z| ≤ 2`.
pub fn annulus_points(m: usize, count: usize, seed: u64) -> Vec<Point<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            Point::new(
                (0..m)
                    .map(|_| Complex64::from_polar(rng.gen_range(0.5..=2.0), rng.gen_range(0.0..std::f64::consts::TAU)))
                    .collect(),
            )
        })
        .collect()
}

fn real_points(m: usize, count: usize, seed: u64) -> Vec<Point<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| Point::real(&(0..m).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>())).collect()
}

fn need<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref().ok_or_else(|| Error::Invalid(format!("{flag} is required")))
}

fn numeric_form(p: &Option<PathBuf>, flag: &str) -> Result<NumForm> {
    Ok(read_form(need(p, flag)?)?.to_c64())
}

fn out_file(cfg: &RunConfig, name: &str) -> Option<PathBuf> {
    cfg.out.as_ref().map(|d| d.join(name))
}

/// Runs one subcommand and returns its report. Side outputs (extended and
/// fitted forms, frame dumps) go to `--out` when given.
pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<VerificationReport> {
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir)?;
    }
    let mut report = match cmd {
        Command::Verify => {
            let mut alpha = numeric_form(&cfg.form, "--form")?;
            if let Some(map) = &cfg.map {
                alpha = alpha.pullback(&read_map(map)?)?;
            }
            is_contact_on(&alpha, &annulus_points(alpha.dim(), cfg.samples, cfg.seed), cfg.tol)?
        }
        Command::Formal => {
            let pair = FormalPair::new(numeric_form(&cfg.form, "--form")?, numeric_form(&cfg.beta, "--beta")?)?;
            let m = pair.alpha.dim();
            is_formal_contact_on(&pair, &annulus_points(m, cfg.samples, cfg.seed), cfg.tol)?
        }
        Command::Ample => ampleness_audit(cfg.n, cfg.samples, 4, cfg.delta, cfg.seed)?.0,
        Command::Extend => extend(cfg)?,
        Command::Integrate => integrate(cfg)?,
        Command::Gallery { names } => gallery_verify_all(if names.is_empty() { None } else { Some(names) }, cfg.seed)?,
        Command::Fit => fit(cfg)?,
    };
    report.seed = Some(cfg.seed);
    Ok(report)
}

fn extend(cfg: &RunConfig) -> Result<VerificationReport> {
    let AnyForm::Exact(src) = read_form(need(&cfg.form, "--form")?)? else {
        return Err(Error::Invalid("extend needs exact polynomial coefficients".into()));
    };
    let m = src.dim();
    let l = cfg.degree.unwrap_or(2);
    let coeffs = (0..m).map(|i| RealSliceFunction::symbolic(src.dz_coefficient(i))).collect::<Result<Vec<_>>>()?;
    let ext = extend_form(&coeffs, l)?;
    if let Some(path) = out_file(cfg, "extended.form") {
        write_form(&path, &ext)?;
    }
    let pts = real_points(m, cfg.samples, cfg.seed);
    let mut rep = VerificationReport::new(format!("extend l={l}"));
    let defect = form_dbar_defect(&ext, &pts, l)?;
    rep.check("dbar_flat", defect <= cfg.tol, format!("order-{l} dbar defect {defect:.3e} on the real slice"));
    let restrict = pts
        .iter()
        .map(|p| Ok(ext.evaluate(p)?.distance(&src.evaluate(p)?)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    rep.check("restriction", restrict <= cfg.tol, format!("max |F - f| on the real slice {restrict:.3e}"));
    Ok(rep)
}

fn integrate_input(cfg: &RunConfig) -> Result<GridSection> {
    match (&cfg.form, &cfg.beta) {
        (None, None) => demo_input(cfg.n, cfg.grid),
        (Some(_), Some(_)) => {
            let alpha = numeric_form(&cfg.form, "--form")?;
            let beta = numeric_form(&cfg.beta, "--beta")?;
            let n = crate::contact::half_dim(alpha.dim())?;
            GridSection::sample(CubeGrid::unit(n, cfg.grid)?, &alpha, &beta)
        }
        _ => Err(Error::Invalid("give both --form and --beta, or neither for the demo pair".into())),
    }
}

fn integrate(cfg: &RunConfig) -> Result<VerificationReport> {
    let input = integrate_input(cfg)?;
    let res = ci_solve(&input, &GammaSpec::empty(), cfg.eps, cfg.delta, cfg.sweeps)?;
    if let Some(dir) = &cfg.out {
        res.dump(&dir.join("frames"))?;
    }
    let mut rep = res.report.clone();
    rep.name = "integrate".into();
    rep.check(
        "solver",
        res.pass,
        format!(
            "kappa {:.3e}, frequencies {:?}, margin {:.3e}, deviation {:.3e}, unchanged {}",
            res.kappa, res.frequencies, res.achieved_margin, res.achieved_deviation, res.unchanged
        ),
    );
    Ok(rep)
}

fn fit(cfg: &RunConfig) -> Result<VerificationReport> {
    let (section, degree) = match &cfg.form {
        Some(_) => {
            let alpha = numeric_form(&cfg.form, "--form")?;
            let n = crate::contact::half_dim(alpha.dim())?;
            (GridSection::sample_holonomic(CubeGrid::unit(n, cfg.grid)?, &alpha)?, cfg.degree.unwrap_or(1))
        }
        None => {
            let input = integrate_input(cfg)?;
            let res = ci_solve(&input, &GammaSpec::empty(), cfg.eps, cfg.delta, cfg.sweeps)?;
            if !res.pass {
                return Err(Error::Precondition("convex integration did not produce a section to fit".into()));
            }
            (res.output, cfg.degree.unwrap_or(10))
        }
    };
    let step = if section.grid.nodes_per_axis() > 17 { 2 } else { 1 };
    let (fitted, rep) = closure_step(&section, degree, cfg.delta, step)?;
    if let Some(path) = out_file(cfg, "fit.form") {
        write_form(&path, &fitted.form)?;
    }
    Ok(rep)
}

/// A failing report describing an error, so that every run leaves one.
pub fn error_report(cmd: &Command, e: &Error) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("{cmd:?}").to_lowercase());
    rep.check("error", false, e.to_string());
    rep
}

/// Parses `args`, runs, writes `report.json` and prints the report.
/// Returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (report, status) = match run(&cli.command, &cli.config) {
        Ok(r) => {
            let s = if r.pass { 0 } else { 1 };
            (r, s)
        }
        Err(e) => {
            eprintln!("error: {e}");
            (error_report(&cli.command, &e), 2)
        }
    };
    let text = report.to_text(cli.config.verbose);
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if let Some(path) = out_file(&cli.config, "report.json") {
        if let Err(e) = write_report(&path, &report, cli.config.verbose) {
            eprintln!("error: {e}");
            return 2;
        }
    }
    status
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!((c.tol, c.eps, c.delta, c.grid, c.seed, c.sweeps), (1e-9, 0.5, 1e-3, 33, 0, 8));
    }

    #[test]
    fn flags_parse_after_subcommand() {
        let cli = Cli::try_parse_from(["hcontact", "gallery", "circle:2", "std", "--seed", "4"]).unwrap();
        assert_eq!(cli.command, Command::Gallery { names: vec!["circle:2".into(), "std".into()] });
        assert_eq!(cli.config.seed, 4);
        assert!(Cli::try_parse_from(["hcontact", "bogus"]).is_err());
    }

    #[test]
    fn missing_inputs_are_errors() {
        let cfg = RunConfig::default();
        assert!(matches!(run(&Command::Verify, &cfg), Err(Error::Invalid(_))));
        let cfg = RunConfig { form: Some("x".into()), ..RunConfig::default() };
        assert!(run(&Command::Integrate, &cfg).is_err());
    }
}
