//! The `lowcarb` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lowcarb_core::analysis::{carbon_price_sweep_with, compare_deterministic, solve_instance, StudyOptions};
use lowcarb_core::formulation::{ModelOptions, DEFAULT_SEGMENTS, DEFAULT_SHED_PENALTY};
use lowcarb_core::milp::{Branching, SolveOptions};
use lowcarb_core::scenario::{elbow_k_with, joint_scenarios, kmeans, ClusterResult, CurveSet};
use lowcarb_core::{ScenarioSet, SystemConfig};

use crate::config::{config_files, read_config, write_config, ConfigFile};
use crate::csvio::{history_table, read_history, write_file, Series};
use crate::error::{Error, Result};
use crate::exec::Threads;
use crate::manifest::RunManifest;
use crate::monitor::Console;
use crate::output::{
    commitment_table, compare_table, dispatch_table, sweep_table, CompareReport, SolveReport, COMPARE_FORMAT,
    OUTPUT_VERSION,
};
use crate::scenarios::{write_json, ClusterSummary, ScenarioDocument};
use crate::{desk, mps};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const COMMITMENT_FILE: &str = "commitment.csv";
pub const DISPATCH_FILE: &str = "dispatch.csv";
pub const REPORT_FILE: &str = "report.json";
pub const MPS_FILE: &str = "model.mps";
pub const COMPARE_CSV: &str = "compare.csv";
pub const COMPARE_JSON: &str = "compare.json";
pub const DETERMINISTIC_COMMITMENT_FILE: &str = "deterministic_commitment.csv";

#[derive(Debug, Parser)]
#[command(name = "lowcarb", version, about = "Two-stage stochastic unit commitment under carbon trading")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce wind and solar histories to a joint scenario set.
    Cluster(ClusterArgs),
    /// Solve the two-stage problem; write commitment, dispatch and costs.
    Solve(SolveArgs),
    /// Re-solve at several carbon prices.
    Sweep(SweepArgs),
    /// Stochastic against expected-value (deterministic) commitment.
    Compare(CompareArgs),
    /// Write the shipped six-unit instance and its histories.
    Desk(DeskArgs),
    /// Recompute the digests recorded in a run manifest.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Wind history: one row per day, label column then one column per period.
    #[arg(long)]
    pub wind: PathBuf,
    #[arg(long)]
    pub solar: PathBuf,
    /// Series CSV with a `hydro` column; hydro capacity is zero without it.
    #[arg(long)]
    pub hydro: Option<PathBuf>,
    /// Clusters per signal, or `auto` for the elbow of the SSE curve.
    #[arg(long, default_value = "auto")]
    pub k: KChoice,
    #[arg(long, default_value_t = 1)]
    pub k_min: usize,
    #[arg(long, default_value_t = 8)]
    pub k_max: usize,
    #[arg(long)]
    pub seed: u64,
    /// Scenario document; the manifest goes next to it as `<stem>.manifest.json`.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KChoice {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for KChoice {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(KChoice::Auto),
            _ => match s.parse() {
                Ok(k) if k >= 1 => Ok(KChoice::Fixed(k)),
                _ => Err(format!("expected `auto` or a positive integer, got `{s}`")),
            },
        }
    }
}

impl std::fmt::Display for KChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KChoice::Auto => f.write_str("auto"),
            KChoice::Fixed(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "LOWCARB_THREADS", default_value_t = 1)]
    pub threads: usize,
    /// Suppress progress lines on stderr.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchingArg {
    MostFractional,
    PseudoCost,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// System configuration (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Scenario document (JSON).
    #[arg(long)]
    pub scenarios: PathBuf,
    #[arg(long, default_value_t = 1e-4)]
    pub mip_gap: f64,
    #[arg(long)]
    pub node_limit: Option<usize>,
    /// Seconds per solve; each sweep row gets its own limit.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Piecewise segments per quadratic curve.
    #[arg(long, default_value_t = DEFAULT_SEGMENTS)]
    pub segments: usize,
    #[arg(long, value_enum, default_value = "most-fractional")]
    pub branching: BranchingArg,
    /// Cost per MWh of shed or spilled energy when a fixed schedule is re-costed.
    #[arg(long, default_value_t = DEFAULT_SHED_PENALTY)]
    pub shed_penalty: f64,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the model in free MPS format.
    #[arg(long)]
    pub mps: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated carbon prices.
    #[arg(long, allow_hyphen_values = true)]
    pub prices: String,
    /// Sweep table (CSV); the manifest goes next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DeskArgs {
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub manifest: PathBuf,
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    run_from(std::env::args_os())
}

/// Parses `args` (program name first), runs, reports errors on stderr and
/// returns the exit code.
pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cluster(a) => cmd_cluster(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Compare(a) => cmd_compare(&a),
        Command::Desk(a) => cmd_desk(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

/// `dir/<stem>.manifest.json` for an output file.
pub fn manifest_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map_or_else(|| "out".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.manifest.json"))
}

fn dir_of(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned())
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn cluster_one(curves: &CurveSet, args: &ClusterArgs, exec: &Threads) -> Result<ClusterResult> {
    let k = match args.k {
        KChoice::Fixed(k) => k,
        KChoice::Auto => {
            let k_max = args.k_max.min(curves.days());
            elbow_k_with(curves, args.k_min, k_max, args.seed, exec)
                .map_err(|e| Error::Usage(format!("--k auto on {}: {e}", curves.label)))?
        }
    };
    kmeans(curves, k, args.seed).map_err(|e| Error::Usage(format!("clustering {}: {e}", curves.label)))
}

/// Clusters both histories and composes the joint scenario document.
pub fn cluster_document(
    wind: &CurveSet,
    solar: &CurveSet,
    hydro: &[f64],
    args: &ClusterArgs,
    exec: &Threads,
) -> Result<ScenarioDocument> {
    let w = cluster_one(wind, args, exec)?;
    let s = cluster_one(solar, args, exec)?;
    let set = joint_scenarios(&w, &s, hydro).map_err(|e| Error::Usage(e.to_string()))?;
    let mut doc = ScenarioDocument::new(&set);
    doc.seed = Some(args.seed);
    doc.wind = Some((&w).into());
    doc.solar = Some((&s).into());
    Ok(doc)
}

fn read_hydro(path: &Path) -> Result<Vec<f64>> {
    let series = Series::read(path)?;
    Ok(series.get("hydro").ok_or_else(|| Error::invalid(path, "no `hydro` column"))?.to_vec())
}

fn cmd_cluster(args: &ClusterArgs) -> Result<()> {
    let start = Instant::now();
    let exec = Threads::new(args.run.threads);
    let wind = read_history(&args.wind, "wind")?;
    let solar = read_history(&args.solar, "solar")?;
    let hydro = match &args.hydro {
        Some(p) => read_hydro(p)?,
        None => vec![0.0; wind.periods()],
    };
    let doc = cluster_document(&wind, &solar, &hydro, args, &exec)?;
    doc.write(&args.out)?;

    let mut m = RunManifest::new("cluster", Some(args.seed));
    m.option("k", args.k);
    if args.k == KChoice::Auto {
        m.option("k_min", args.k_min);
        m.option("k_max", args.k_max);
    }
    m.input(&args.wind)?;
    m.input(&args.solar)?;
    if let Some(h) = &args.hydro {
        m.input(h)?;
    }
    m.output(dir_of(&args.out), &file_name(&args.out))?;
    m.wall_time_s = start.elapsed().as_secs_f64();
    m.write(&manifest_path(&args.out))?;
    if !args.run.quiet {
        let k = |c: &Option<ClusterSummary>| c.as_ref().map_or(0, |c| c.k);
        eprintln!("{} scenarios (wind k={}, solar k={})", doc.scenarios.len(), k(&doc.wind), k(&doc.solar));
    }
    Ok(())
}

fn study_options(p: &ProblemArgs) -> Result<StudyOptions> {
    if !(p.mip_gap >= 0.0) {
        return Err(Error::Usage(format!("--mip-gap must be nonnegative, got {}", p.mip_gap)));
    }
    if p.segments == 0 {
        return Err(Error::Usage("--segments must be at least 1".into()));
    }
    if p.time_limit.is_some_and(|t| !(t >= 0.0)) {
        return Err(Error::Usage("--time-limit must be nonnegative".into()));
    }
    if !(p.shed_penalty >= 0.0) {
        return Err(Error::Usage("--shed-penalty must be nonnegative".into()));
    }
    let branching = match p.branching {
        BranchingArg::MostFractional => Branching::MostFractional,
        BranchingArg::PseudoCost => Branching::PseudoCost,
    };
    Ok(StudyOptions {
        model: ModelOptions::with_segments(p.segments),
        solve: SolveOptions {
            mip_gap: p.mip_gap,
            node_limit: p.node_limit,
            time_limit: p.time_limit,
            branching,
            ..SolveOptions::default()
        },
        shed_penalty: p.shed_penalty,
        ..StudyOptions::default()
    })
}

fn load_problem(p: &ProblemArgs) -> Result<(SystemConfig, ScenarioSet)> {
    let config = read_config(&p.config)?;
    let doc = ScenarioDocument::read(&p.scenarios)?;
    if doc.periods != config.horizon {
        return Err(Error::invalid(
            &p.scenarios,
            format!("{} periods, but the configuration has {}", doc.periods, config.horizon),
        ));
    }
    Ok((config, doc.set()))
}

fn problem_manifest(command: &str, p: &ProblemArgs) -> Result<RunManifest> {
    let mut m = RunManifest::new(command, None);
    m.option("mip_gap", p.mip_gap);
    m.option("segments", p.segments);
    m.option("branching", p.branching.to_possible_value().expect("no skipped variants").get_name());
    m.option("shed_penalty", p.shed_penalty);
    if let Some(n) = p.node_limit {
        m.option("node_limit", n);
    }
    if let Some(t) = p.time_limit {
        m.option("time_limit", t);
    }
    for f in config_files(&p.config)? {
        m.input(&f)?;
    }
    m.input(&p.scenarios)?;
    Ok(m)
}

fn monitor(run: &RunArgs) -> Console {
    Console::new((!run.quiet).then_some(5.0))
}

fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let start = Instant::now();
    let p = &args.problem;
    let options = study_options(p)?;
    let (config, set) = load_problem(p)?;
    let exec = Threads::new(p.run.threads);
    let mut mon = monitor(&p.run);
    let solved = solve_instance(&config, &set, &options, &exec, &mut mon)?;

    create_dir(&args.out)?;
    let mut m = problem_manifest("solve", p)?;
    commitment_table(&config, &solved.schedule).write(&args.out.join(COMMITMENT_FILE))?;
    dispatch_table(&config, &solved.dispatch).write(&args.out.join(DISPATCH_FILE))?;
    let violations = solved.feasibility.violations.iter().map(|v| v.to_string()).collect();
    write_json(&args.out.join(REPORT_FILE), &SolveReport::new(&solved.result, violations, solved.report.clone()))?;
    let mut files = vec![COMMITMENT_FILE, DISPATCH_FILE, REPORT_FILE];
    if args.mps {
        write_file(&args.out.join(MPS_FILE), mps::to_mps(&solved.model, "lowcarb").as_bytes())?;
        files.push(MPS_FILE);
    }
    for f in files {
        m.output(&args.out, f)?;
    }
    m.wall_time_s = start.elapsed().as_secs_f64();
    m.write(&args.out.join(MANIFEST_FILE))?;

    if !p.run.quiet {
        let r = &solved.result;
        eprintln!(
            "{:?}: objective {:.9e}, bound {:.9e}, gap {:.2e}, {} nodes",
            r.status, r.objective, r.bound, r.gap, r.nodes
        );
    }
    if !solved.feasibility.is_empty() {
        return Err(Error::Feasibility(solved.feasibility));
    }
    Ok(())
}

/// Parses a comma-separated price list; an empty list is a usage error.
pub fn parse_prices(s: &str) -> Result<Vec<f64>> {
    let prices = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().map_err(|_| Error::Usage(format!("`{p}` is not a price"))))
        .collect::<Result<Vec<f64>>>()?;
    if prices.is_empty() {
        return Err(Error::Usage("--prices needs at least one price".into()));
    }
    Ok(prices)
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let start = Instant::now();
    let p = &args.problem;
    let prices = parse_prices(&args.prices)?;
    let options = study_options(p)?;
    let (config, set) = load_problem(p)?;
    let exec = Threads::new(p.run.threads);
    let rows = carbon_price_sweep_with(&config, &set, &prices, &options, &exec, || Console::new(None))?;

    let mut m = problem_manifest("sweep", p)?;
    m.option("prices", &args.prices);
    sweep_table(&rows).write(&args.out)?;
    m.output(dir_of(&args.out), &file_name(&args.out))?;
    m.wall_time_s = start.elapsed().as_secs_f64();
    m.write(&manifest_path(&args.out))?;
    for r in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("price {}: {}", r.carbon_price, r.error.as_deref().unwrap_or_default());
    }
    if rows.iter().all(|r| r.error.is_some()) {
        return Err(Error::SweepFailed);
    }
    Ok(())
}

fn cmd_compare(args: &CompareArgs) -> Result<()> {
    let start = Instant::now();
    let p = &args.problem;
    let options = study_options(p)?;
    let (config, set) = load_problem(p)?;
    let exec = Threads::new(p.run.threads);
    let mut mon = monitor(&p.run);
    let c = compare_deterministic(&config, &set, &options, &exec, &mut mon)?;

    create_dir(&args.out)?;
    let mut m = problem_manifest("compare", p)?;
    let stochastic = &c.stochastic;
    compare_table(
        (&stochastic.report, stochastic.result.objective),
        (&c.deterministic.report, c.deterministic.model_objective),
    )
    .write(&args.out.join(COMPARE_CSV))?;
    let report = CompareReport {
        format: COMPARE_FORMAT.into(),
        version: OUTPUT_VERSION,
        vss: c.vss,
        stochastic_solve: (&stochastic.result).into(),
        stochastic: stochastic.report.clone(),
        deterministic: c.deterministic.report.clone(),
        deterministic_shed: c.deterministic.report.shed_scenarios.clone(),
    };
    write_json(&args.out.join(COMPARE_JSON), &report)?;
    commitment_table(&config, &stochastic.schedule).write(&args.out.join(COMMITMENT_FILE))?;
    commitment_table(&config, &c.deterministic_schedule).write(&args.out.join(DETERMINISTIC_COMMITMENT_FILE))?;
    for f in [COMPARE_CSV, COMPARE_JSON, COMMITMENT_FILE, DETERMINISTIC_COMMITMENT_FILE] {
        m.output(&args.out, f)?;
    }
    m.wall_time_s = start.elapsed().as_secs_f64();
    m.write(&args.out.join(MANIFEST_FILE))?;
    if !p.run.quiet {
        eprintln!(
            "stochastic {:.9e}, deterministic {:.9e}, vss {:.6e}",
            stochastic.result.objective, c.deterministic.model_objective, c.vss
        );
    }
    if !stochastic.feasibility.is_empty() {
        return Err(Error::Feasibility(stochastic.feasibility.clone()));
    }
    Ok(())
}

pub const DESK_CONFIG: &str = "config.toml";
pub const DESK_SERIES: &str = "series.csv";
pub const DESK_WIND: &str = "wind.csv";
pub const DESK_SOLAR: &str = "solar.csv";
pub const DESK_SCENARIOS: &str = "scenarios.json";

/// Writes the desk instance: configuration, load and hydro series, both
/// histories and the k = 3 scenario document clustered from them.
pub fn cmd_desk(args: &DeskArgs) -> Result<()> {
    let dir = &args.out;
    create_dir(dir)?;
    let config = desk::config();
    let mut doc = ConfigFile::from_config(&config);
    doc.load = None;
    doc.series = Some(DESK_SERIES.into());
    write_config(&dir.join(DESK_CONFIG), &doc)?;
    let series = Series { names: vec!["load".into(), "hydro".into()], values: vec![config.load.clone(), desk::hydro_cap()] };
    series.to_table().write(&dir.join(DESK_SERIES))?;
    let (wind, solar) = desk::histories();
    history_table(&wind).write(&dir.join(DESK_WIND))?;
    history_table(&solar).write(&dir.join(DESK_SOLAR))?;
    cmd_cluster(&ClusterArgs {
        wind: dir.join(DESK_WIND),
        solar: dir.join(DESK_SOLAR),
        hydro: Some(dir.join(DESK_SERIES)),
        k: KChoice::Fixed(3),
        k_min: 1,
        k_max: 8,
        seed: desk::CLUSTER_SEED,
        out: dir.join(DESK_SCENARIOS),
        run: RunArgs { threads: 1, quiet: true },
    })?;
    // The cluster manifest records machine-specific paths; the desk files
    // are meant to be shipped.
    let _ = std::fs::remove_file(manifest_path(&dir.join(DESK_SCENARIOS)));
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let m = RunManifest::read(&args.manifest)?;
    let bad = m.verify(dir_of(&args.manifest));
    if bad.is_empty() {
        println!("{} files match", m.inputs.len() + m.outputs.len());
        return Ok(());
    }
    let list: Vec<String> = bad.iter().map(|p| p.display().to_string()).collect();
    Err(Error::invalid(&args.manifest, format!("digest mismatch: {}", list.join(", "))))
}
