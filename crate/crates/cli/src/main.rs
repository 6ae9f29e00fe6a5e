mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hkslope::corpus::run_all;
use hkslope::hk::{frobenius_exponent, HkFunctionTable};
use hkslope::p1::{stabilize, Stabilization};
use hkslope::rational::parse_rational;
use hkslope::reconstruct::{default_window_constant, estimate_ehk, nu2_from_ehk, DenominatorBound};
use hkslope::slopes::{add_generator, ehk_from_hn, ehk_n3, ehk_plane_curve, ehk_strongly_semistable, ehk_t2};
use hkslope::{HkError, P1Error, Rational};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};
use crate::report::Report;

#[derive(Parser)]
#[command(name = "hkslope", version, about = "Exact Hilbert-Kunz functions and slope formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-degree colengths and phi(q) as CSV.
    Compute {
        #[arg(long)]
        config: PathBuf,
    },
    /// Splitting types on the projective line and the resulting filtration.
    Splitting {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate a closed-form multiplicity.
    Formula(FormulaArgs),
    /// Recover the multiplicity from a `q,phi` table.
    Reconstruct {
        /// CSV written by `compute`.
        #[arg(long)]
        table: PathBuf,
        /// Supplies default bound and window constant.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        bound: Option<u128>,
        #[arg(long = "window-k")]
        window_k: Option<String>,
        /// Plane-curve degree; also prints nu2.
        #[arg(long)]
        h: Option<u64>,
    },
    /// Run the known-answer corpus.
    VerifyCorpus,
}

#[derive(Args)]
struct FormulaArgs {
    /// Filtration `r1:nu1,r2:nu2,...`.
    #[arg(long)]
    hn: Option<String>,
    /// Generator degrees, comma separated.
    #[arg(long, value_delimiter = ',')]
    d: Vec<u64>,
    #[arg(long = "degY", default_value_t = 1)]
    deg_y: u64,
    #[arg(long)]
    semistable: bool,
    #[arg(long = "plane-curve")]
    plane_curve: bool,
    #[arg(long)]
    t2: bool,
    #[arg(long)]
    n3: bool,
    #[arg(long)]
    h: Option<u64>,
    #[arg(long)]
    nu2: Option<String>,
    #[arg(long, default_value_t = 1)]
    r2: u64,
    /// With `--hn`: adjoin a generator of this degree.
    #[arg(long = "add-generator")]
    add_generator: Option<u64>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    User(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0} corpus checks failed")]
    Corpus(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::User(_) => 1,
            CliError::Cap(_) => 2,
            CliError::Corpus(_) => 3,
        }
    }
}

fn user(e: impl std::fmt::Display) -> CliError {
    CliError::User(e.to_string())
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        user(e)
    }
}

impl From<HkError> for CliError {
    fn from(e: HkError) -> Self {
        match e {
            HkError::CutoffNotReached { .. } | HkError::MatrixTooLarge { .. } => CliError::Cap(e.to_string()),
            other => user(other),
        }
    }
}

impl From<P1Error> for CliError {
    fn from(e: P1Error) -> Self {
        match e {
            P1Error::Hk(h) => h.into(),
            other => user(other),
        }
    }
}

fn load(path: &PathBuf) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| user(format!("{}: {e}", path.display())))?;
    Ok(RunConfig::parse(&text)?)
}

fn rational_arg(name: &str, v: &Option<String>) -> Result<Rational, CliError> {
    let v = v.as_deref().ok_or_else(|| user(format!("--{name} is required")))?;
    parse_rational(v).map_err(|e| user(format!("--{name}: {e}")))
}

fn compute(config: &RunConfig) -> Result<(), CliError> {
    if config.qs.is_empty() {
        return Err(user("config gives no `q` or `e`"));
    }
    let ideal = config.ideal()?;
    let table = HkFunctionTable::compute(&ideal, &config.qs, &config.hk_options())?;
    let per_degree = report::per_degree_csv(config, &table).map_err(user)?;
    let summary = report::summary_csv(config, &table).map_err(user)?;
    match (&config.per_degree_csv, &config.summary_csv) {
        (None, None) => print!("{per_degree}\n{summary}"),
        (a, b) => {
            for (path, body) in [(a, &per_degree), (b, &summary)] {
                match path {
                    Some(p) => std::fs::write(p, body).map_err(|e| user(format!("{p}: {e}")))?,
                    None => print!("{body}"),
                }
            }
        }
    }
    Ok(())
}

fn splitting(config: &RunConfig) -> Result<(), CliError> {
    let ideal = config.ideal()?;
    let mut rep = Report::new(Some(config), "splitting");
    let outcome = stabilize(&ideal, config.max_e.max(1))?;
    let strong = match outcome {
        Ok(s) => s,
        Err(last) => {
            if let Stabilization::NotStabilized { coarse, fine } = last {
                rep.twists(&coarse);
                rep.twists(&fine);
            }
            rep.line("stabilization", format!("not reached by e = {}", config.max_e.max(1) + 1));
            print!("{rep}");
            return Err(CliError::Cap(format!("splitting types did not stabilize within max_e = {}", config.max_e)));
        }
    };
    for s in &strong.splittings {
        rep.twists(s);
    }
    rep.line("stabilization", format!("stable at q = {}", strong.level));
    rep.line("hn", &strong.hn);
    let ehk = ehk_from_hn(&strong.hn, ideal.degrees()).map_err(user)?;
    rep.line("ehk", ehk);
    let qs: Vec<u64> =
        if config.qs.is_empty() { strong.splittings.iter().map(|s| s.q).collect() } else { config.qs.clone() };
    let table = HkFunctionTable::compute(&ideal, &qs, &config.hk_options())?;
    rep.residuals(&table, &ehk);
    print!("{rep}");
    Ok(())
}

fn formula(a: &FormulaArgs) -> Result<(), CliError> {
    let need_d = || if a.d.is_empty() { Err(user("--d is required")) } else { Ok(a.d.clone()) };
    let value = if a.plane_curve {
        let h = a.h.ok_or_else(|| user("--h is required"))?;
        ehk_plane_curve(h, rational_arg("nu2", &a.nu2)?).map_err(user)?
    } else if a.semistable {
        ehk_strongly_semistable(&need_d()?, a.deg_y).map_err(user)?
    } else if a.t2 {
        ehk_t2(a.r2, rational_arg("nu2", &a.nu2)?, &need_d()?, a.deg_y).map_err(user)?
    } else if a.n3 {
        let d: [u64; 3] = need_d()?.try_into().map_err(|_| user("--n3 needs exactly three degrees"))?;
        ehk_n3(rational_arg("nu2", &a.nu2)?, &d, a.deg_y).map_err(user)?
    } else if let Some(text) = &a.hn {
        let d = need_d()?;
        let hn = report::parse_hn(text, d.len(), a.deg_y).map_err(user)?;
        if let Some(e) = a.add_generator {
            let (bigger, degs) = add_generator(&hn, &d, e).map_err(user)?;
            let value = ehk_from_hn(&bigger, &degs).map_err(user)?;
            let degs: Vec<String> = degs.iter().map(u64::to_string).collect();
            println!("hn: {bigger}\nd: {}\nehk: {value}", degs.join(","));
            return Ok(());
        }
        ehk_from_hn(&hn, &d).map_err(user)?
    } else {
        return Err(user("choose one of --hn, --semistable, --t2, --n3, --plane-curve"));
    };
    println!("{value}");
    Ok(())
}

fn reconstruct(
    table: &PathBuf,
    config: Option<&RunConfig>,
    bound: Option<u128>,
    window_k: Option<&str>,
    h: Option<u64>,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(table).map_err(|e| user(format!("{}: {e}", table.display())))?;
    let pairs = report::read_summary(&text).map_err(user)?;
    let t = HkFunctionTable::from_summary(&pairs);
    let ideal = config.map(RunConfig::ideal).transpose()?;
    let bound = match (bound, config.and_then(|c| c.denominator_bound), &ideal, config) {
        (Some(b), ..) | (None, Some(b), ..) => DenominatorBound(b),
        (None, None, Some(i), Some(c)) => {
            let e_cap = pairs.iter().filter_map(|&(q, _)| frobenius_exponent(c.p as u32, q)).max().unwrap_or(0);
            DenominatorBound::default_for(i.n(), i.ring().curve_degree().unwrap_or(1), c.p, e_cap)
        }
        _ => return Err(user("give --bound or --config")),
    };
    let k = match (window_k, config.and_then(|c| c.window_k), &ideal) {
        (Some(v), ..) => parse_rational(v).map_err(|e| user(format!("--window-k: {e}")))?,
        (None, Some(v), _) => v,
        (None, None, Some(i)) => default_window_constant(i.degrees()),
        _ => return Err(user("give --window-k or --config")),
    };
    let mut rep = Report::new(config, "reconstruct");
    rep.line("bound", bound.0);
    rep.line("window_k", k);
    let rec = estimate_ehk(&t, bound, &k).map_err(user)?;
    rep.line("alpha_hat", rec.alpha_hat);
    rep.line("window", rec.window);
    rep.line("ehk", rec.ehk);
    if let Some(h) = h {
        rep.line("nu2", nu2_from_ehk(h, &rec.ehk).map_err(user)?);
    }
    rep.residuals(&t, &rec.ehk);
    print!("{rep}");
    Ok(())
}

fn verify_corpus() -> Result<(), CliError> {
    let outcomes = run_all();
    for o in &outcomes {
        println!("{o}");
    }
    match outcomes.iter().filter(|o| !o.passed()).count() {
        0 => Ok(()),
        n => Err(CliError::Corpus(n)),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compute { config } => compute(&load(&config)?),
        Command::Splitting { config } => splitting(&load(&config)?),
        Command::Formula(args) => formula(&args),
        Command::Reconstruct { table, config, bound, window_k, h } => {
            let config = config.as_ref().map(load).transpose()?;
            reconstruct(&table, config.as_ref(), bound, window_k.as_deref(), h)
        }
        Command::VerifyCorpus => verify_corpus(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
