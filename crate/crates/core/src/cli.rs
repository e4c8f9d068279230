//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 when a pass flag is false, 1 on usage, configuration
//! or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;

use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::grid::{Domain, Exponent, GridSpec};
use crate::operators::{self, LipschitzFunction};
use crate::report::{self, Envelope, Format, Report, VerifySummary};
use crate::spaces::{self, NormParams};
use crate::synth::{self, Synthesized, TestFamily};
use crate::verify::{self, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILED: i32 = 2;
pub const JOBS_ENV: &str = "ALPHAMOD_JOBS";
/// Largest accepted partition residual for `covering validate`.
pub const PARTITION_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "alphamod", version, about = "Alpha-modulation spaces and pseudo-differential operators on a periodic grid")]
pub struct Cli {
    /// Worker threads; defaults to $ALPHAMOD_JOBS or the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Suppress the per-check lines of `verify`.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or validate an alpha-covering with its partition of unity.
    Covering {
        #[command(subcommand)]
        action: CoveringAction,
    },
    /// Alpha-modulation norm of a function or product norm of a symbol.
    Norm {
        #[command(subcommand)]
        action: NormAction,
    },
    /// Apply an operator, a commutator, or estimate an operator norm.
    Op {
        #[command(subcommand)]
        action: OpAction,
    },
    /// Run verification suites.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        suite_args: SuiteArgs,
        /// Output directory for report.csv and summary.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a test family and write it as a JSON envelope.
    Synth {
        /// Family as JSON, e.g. '{"family":"gaussian","width":1.0}'.
        #[arg(long)]
        family: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Thm11,
    Thm12,
    Lemmas,
    Appendix,
    All,
}

impl SuiteArg {
    fn suite(self) -> Suite {
        match self {
            SuiteArg::Thm11 => Suite::Operator,
            SuiteArg::Thm12 => Suite::Commutator,
            SuiteArg::Lemmas => Suite::Lemmas,
            SuiteArg::Appendix => Suite::Appendix,
            SuiteArg::All => Suite::All,
        }
    }

    fn name(self) -> &'static str {
        match self {
            SuiteArg::Thm11 => "thm11",
            SuiteArg::Thm12 => "thm12",
            SuiteArg::Lemmas => "lemmas",
            SuiteArg::Appendix => "appendix",
            SuiteArg::All => "all",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum CoveringAction {
    /// Write the covering geometry and windows as JSON.
    Build {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the admissibility report; fails when the partition residual exceeds 1e-8.
    Validate {
        #[command(flatten)]
        grid: GridArgs,
        /// Comma-separated list.
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
        /// Write the report here; the extension selects CSV or JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum NormAction {
    /// `M^{p,q}_{s,alpha}` norm of a function envelope.
    Function {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value = "2")]
        p: Exponent,
        #[arg(long, default_value = "2")]
        q: Exponent,
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        #[command(flatten)]
        band: BandArgs,
        /// Per-piece breakdown; the extension selects CSV or JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Product norm with exponents `(inf, inf), (1, 1)` of a symbol envelope.
    Symbol {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        s1: f64,
        #[arg(long, default_value_t = 0.0)]
        s2: f64,
        #[command(flatten)]
        band: BandArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum OpAction {
    /// `sigma(X, D) f`.
    Apply {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// `[sigma(X, D), a] f` for a real multiplier `a`.
    Commutator {
        #[arg(long)]
        symbol: PathBuf,
        /// Real-valued function envelope in the space domain.
        #[arg(long)]
        multiplier: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Largest singular value by power iteration.
    NormEstimate {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub dim: Option<usize>,
    /// Points per axis.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub period: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    /// Comma-separated list.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub functions: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Skip the refined-grid pass.
    #[arg(long)]
    pub no_refine: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BandArgs {
    /// Truncate spectra outside the band with a warning instead of failing.
    #[arg(long)]
    pub lenient_band: bool,
}

/// Settings read from `--config`; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<Vec<f64>>,
    pub dim: Option<usize>,
    pub grid: Option<usize>,
    pub period: Option<f64>,
    pub trials: Option<usize>,
    pub functions: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub max_iter: Option<usize>,
    pub refine: Option<bool>,
    pub refinement_tolerance: Option<f64>,
    pub strict_band: Option<bool>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}

fn grid_spec(args: &GridArgs, file: &FileConfig) -> Result<GridSpec> {
    let d = VerifyConfig::default();
    GridSpec::new(
        args.dim.or(file.dim).unwrap_or(d.dim),
        args.grid.or(file.grid).unwrap_or(d.points_per_axis),
        args.period.or(file.period).unwrap_or(d.period),
    )
}

fn alpha_list(flag: &[f64], file: &FileConfig, default: &[f64]) -> Result<Vec<f64>> {
    let list = if !flag.is_empty() {
        flag.to_vec()
    } else {
        file.alpha.clone().unwrap_or_else(|| default.to_vec())
    };
    if let Some(a) = list.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(Error::InvalidParameter(format!("alpha {a} not in [0, 1]")));
    }
    if list.is_empty() {
        return Err(Error::InvalidParameter("empty alpha list".into()));
    }
    Ok(list)
}

fn single_alpha(flag: Option<f64>, file: &FileConfig) -> Result<f64> {
    let list = alpha_list(&flag.into_iter().collect::<Vec<_>>(), file, &[0.0])?;
    match list.as_slice() {
        [a] => Ok(*a),
        _ => Err(Error::InvalidParameter("expected a single alpha".into())),
    }
}

fn strict_band(args: &BandArgs, file: &FileConfig) -> bool {
    !args.lenient_band && file.strict_band.unwrap_or(true)
}

fn verify_config(grid: &GridArgs, s: &SuiteArgs, file: &FileConfig) -> Result<VerifyConfig> {
    let d = VerifyConfig::default();
    let g = grid_spec(grid, file)?;
    let cfg = VerifyConfig {
        dim: g.dim(),
        points_per_axis: g.points_per_axis(),
        period: g.period(),
        trials: s.trials.or(file.trials).unwrap_or(d.trials),
        functions: s.functions.or(file.functions).unwrap_or(d.functions),
        seed: s.seed.or(file.seed).unwrap_or(d.seed),
        tolerance: s.tolerance.or(file.tolerance).unwrap_or(d.tolerance),
        max_iter: s.max_iter.or(file.max_iter).unwrap_or(d.max_iter),
        refine: !s.no_refine && file.refine.unwrap_or(d.refine),
        refinement_tolerance: file.refinement_tolerance.unwrap_or(d.refinement_tolerance),
        ..d
    };
    if cfg.trials == 0 || cfg.functions == 0 {
        return Err(Error::InvalidParameter("trials and functions must be positive".into()));
    }
    if !(cfg.tolerance > 0.0) || cfg.max_iter == 0 {
        return Err(Error::InvalidParameter("tolerance and max_iter must be positive".into()));
    }
    Ok(cfg)
}

fn format_for(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    }
}

fn configure_jobs(flag: Option<usize>, file: &FileConfig) -> Result<()> {
    let env = match std::env::var(JOBS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("{JOBS_ENV}={v:?} is not a count")))?,
        ),
        Err(_) => None,
    };
    if let Some(n) = flag.or(env).or(file.jobs) {
        if n == 0 {
            return Err(Error::InvalidParameter("--jobs must be positive".into()));
        }
        // A pool built earlier in the same process keeps its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    configure_jobs(cli.jobs, &file)?;
    match cli.command {
        Command::Covering { action } => run_covering(action, &file),
        Command::Norm { action } => run_norm(action, &file),
        Command::Op { action } => run_op(action, &file),
        Command::Verify {
            suite,
            grid,
            suite_args,
            out,
        } => run_verify(suite, &grid, &suite_args, out.as_deref(), &file, cli.quiet),
        Command::Synth {
            family,
            grid,
            seed,
            out,
        } => {
            let family: TestFamily = serde_json::from_str(&family)
                .map_err(|e| Error::InvalidParameter(format!("family: {e}")))?;
            let grid = grid_spec(&grid, &file)?;
            let seed = seed.or(file.seed).unwrap_or(VerifyConfig::default().seed);
            let env = match synth::synthesize(&family, &grid, seed)? {
                Synthesized::Function(f) => Envelope::from_function(&f),
                Synthesized::Symbol(s) => Envelope::from_symbol(&s),
                Synthesized::Lipschitz(a) => Envelope::from_function(&a.to_function()),
            };
            env.write(&out)?;
            Ok(EXIT_OK)
        }
    }
}

fn run_covering(action: CoveringAction, file: &FileConfig) -> Result<i32> {
    match action {
        CoveringAction::Build { grid, alpha, out } => {
            let grid = grid_spec(&grid, file)?;
            let cov = Covering::build(single_alpha(alpha, file)?, &grid)?;
            let text = report::covering_json(&cov)?;
            fs::write(&out, text).map_err(|e| Error::io(&out, e))?;
            println!("{} pieces written to {}", cov.len(), out.display());
            Ok(EXIT_OK)
        }
        CoveringAction::Validate { grid, alpha, out } => {
            let grid = grid_spec(&grid, file)?;
            let mut pass = true;
            let mut reports = Vec::new();
            for a in alpha_list(&alpha, file, &[0.0])? {
                let r = Covering::build(a, &grid)?.validate();
                print!("{}", report::admissibility_table(&r));
                let ok = r.is_finite() && r.partition_residual <= PARTITION_TOLERANCE;
                println!("{}\n", if ok { "PASS" } else { "FAIL" });
                pass &= ok;
                reports.push(r);
            }
            if let Some(out) = out {
                let text = match (format_for(&out), reports.as_slice()) {
                    (Format::Json, _) => serde_json::to_string_pretty(&reports)? + "\n",
                    (Format::Csv, [r]) => report::render(&Report::Admissibility(r), Format::Csv)?,
                    (Format::Csv, _) => reports.iter().map(report::admissibility_csv).collect::<Vec<_>>().join("\n"),
                };
                fs::write(&out, text).map_err(|e| Error::io(&out, e))?;
            }
            Ok(if pass { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn run_norm(action: NormAction, file: &FileConfig) -> Result<i32> {
    let (breakdown, out) = match action {
        NormAction::Function {
            input,
            alpha,
            p,
            q,
            s,
            band,
            out,
        } => {
            let f = Envelope::read(&input)?.into_function()?;
            let alpha = single_alpha(alpha, file)?;
            let params = NormParams::function(alpha, p, q, s).with_strict_band(strict_band(&band, file));
            let cov = Covering::build(alpha, f.grid())?;
            (spaces::alpha_modulation_norm(&f, &params, &cov)?, out)
        }
        NormAction::Symbol {
            input,
            alpha,
            s1,
            s2,
            band,
            out,
        } => {
            let sigma = Envelope::read(&input)?.into_symbol()?;
            let alpha = single_alpha(alpha, file)?;
            let params = NormParams::symbol(alpha, s1, s2).with_strict_band(strict_band(&band, file));
            let cov = Covering::build(alpha, sigma.grid())?;
            (spaces::product_symbol_norm(&sigma, &params, &cov)?, out)
        }
    };
    println!("{:.16e}", breakdown.total);
    if let Some(out) = out {
        report::emit_report(&Report::Norm(&breakdown), format_for(&out), &out)?;
    }
    Ok(EXIT_OK)
}

fn read_multiplier(path: &Path) -> Result<LipschitzFunction> {
    let f = Envelope::read(path)?.into_function()?;
    if f.domain() != Domain::Space {
        return Err(Error::WrongDomain {
            expected: Domain::Space.name(),
            found: f.domain().name(),
        });
    }
    let scale = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    if f.values().iter().any(|v| v.im.abs() > 1e-12 * scale.max(1.0)) {
        return Err(Error::InvalidParameter("multiplier must be real-valued".into()));
    }
    LipschitzFunction::new(f.grid(), f.values().iter().map(|v: &Complex64| v.re).collect())
}

fn run_op(action: OpAction, file: &FileConfig) -> Result<i32> {
    match action {
        OpAction::Apply { symbol, input, out } => {
            let sigma = Envelope::read(&symbol)?.into_symbol()?;
            let f = Envelope::read(&input)?.into_function()?;
            Envelope::from_function(&operators::quantize_apply(&sigma, &f)?).write(&out)?;
        }
        OpAction::Commutator {
            symbol,
            multiplier,
            input,
            out,
        } => {
            let sigma = Envelope::read(&symbol)?.into_symbol()?;
            let a = read_multiplier(&multiplier)?;
            let f = Envelope::read(&input)?.into_function()?;
            Envelope::from_function(&operators::commutator_apply(&sigma, &a, &f)?).write(&out)?;
        }
        OpAction::NormEstimate {
            symbol,
            tolerance,
            max_iter,
        } => {
            let sigma = Envelope::read(&symbol)?.into_symbol()?;
            let d = VerifyConfig::default();
            let est = operators::operator_norm_estimate(
                &sigma,
                tolerance.or(file.tolerance).unwrap_or(d.tolerance),
                max_iter.or(file.max_iter).unwrap_or(d.max_iter),
            )?;
            println!("{:.16e}", est.norm);
            println!("iterations {} converged {}", est.iterations, est.converged);
        }
    }
    Ok(EXIT_OK)
}

fn run_verify(
    suite: SuiteArg,
    grid: &GridArgs,
    args: &SuiteArgs,
    out: Option<&Path>,
    file: &FileConfig,
    quiet: bool,
) -> Result<i32> {
    let cfg = verify_config(grid, args, file)?;
    let alphas = alpha_list(&args.alpha, file, &[0.0, 0.5, 1.0])?;
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let reports = verify::run_suite(suite.suite(), &alphas, &cfg)?;
    let summary = VerifySummary::new(suite.name(), &alphas, &cfg, &reports);
    for c in summary.checks.iter().filter(|_| !quiet) {
        let alpha = c.alpha.map(|a| format!(" alpha={a}")).unwrap_or_default();
        let change = c.refinement_change.map(|x| format!(" change={x:.3e}")).unwrap_or_default();
        println!(
            "{} {}{} max={:.6e} median={:.6e}{}",
            if c.pass { "PASS" } else { "FAIL" },
            c.check,
            alpha,
            c.max_ratio,
            c.median_ratio,
            change
        );
    }
    if let Some(dir) = out {
        report::emit_report(&Report::Bound(&reports), Format::Csv, dir.join("report.csv"))?;
        report::emit_report(&Report::Summary(&summary), Format::Json, dir.join("summary.json"))?;
    }
    Ok(if summary.pass { EXIT_OK } else { EXIT_FAILED })
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(dispatch(["alphamod", "frobnicate"]), EXIT_ERROR);
        assert_eq!(dispatch(["alphamod", "verify", "thm99"]), EXIT_ERROR);
        assert_eq!(dispatch(["alphamod", "--help"]), EXIT_OK);
    }

    #[test]
    fn bad_alpha_is_a_usage_error() {
        assert_eq!(
            dispatch(["alphamod", "covering", "validate", "--alpha", "1.5", "--grid", "64"]),
            EXIT_ERROR
        );
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str("grid = 64\ntrials = 3\nseed = 9\nalpha = [0.25]").unwrap();
        let args = SuiteArgs {
            alpha: vec![],
            trials: Some(4),
            functions: None,
            seed: None,
            tolerance: None,
            max_iter: None,
            no_refine: true,
        };
        let grid = GridArgs {
            dim: None,
            grid: None,
            period: None,
        };
        let cfg = verify_config(&grid, &args, &file).unwrap();
        assert_eq!((cfg.points_per_axis, cfg.trials, cfg.seed, cfg.refine), (64, 4, 9, false));
        assert_eq!(alpha_list(&[], &file, &[0.0]).unwrap(), vec![0.25]);
        assert!(toml::from_str::<FileConfig>("gird = 3").is_err());
    }
}
