//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant violation.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::data::{
    align_to, forward_sample, load_csv, make_local_structure_benchmark, write_csv, DataError, HeaderPolicy,
};
use crate::experiments::{sweep_all_nodes_fixed_g, sweep_full_search, sweep_static};
use crate::model::serial::StructureDocument;
use crate::model::{Dataset, GlobalStructure, ModelError, NetworkStructure};
use crate::score::{log_score, ScoreConfig, ScoreError, StructurePrior};
use crate::search::{combined_greedy_from, OperatorSet, SearchConstraints, SearchError};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ScoreError> for CliError {
    fn from(e: ScoreError) -> Self {
        match e {
            ScoreError::BadEss(_) | ScoreError::BadKappa(_) => CliError::Usage(e.to_string()),
            ScoreError::Model(m) => m.into(),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Score(s) => s.into(),
            SearchError::Model(m) => m.into(),
            SearchError::Constraints(m) => CliError::Usage(m),
            SearchError::Inapplicable(i) => CliError::Internal(i.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

/// Parameter prior as given on the command line.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "String")]
pub enum PriorSpec {
    Uniform,
    UniformPriorNetwork(f64),
    PriorNetwork(PathBuf, f64),
}

fn parse_positive(s: &str, what: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{what} {s:?} is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{what} must be positive, got {s}"))
    }
}

impl FromStr for PriorSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "uniform" {
            return Ok(PriorSpec::Uniform);
        }
        if let Some(ess) = s.strip_prefix("upn:") {
            return Ok(PriorSpec::UniformPriorNetwork(parse_positive(ess, "ess")?));
        }
        if let Some(rest) = s.strip_prefix("pn:") {
            let (path, ess) = rest.rsplit_once(':').ok_or("expected pn:<network-path>:<ess>")?;
            if path.is_empty() {
                return Err("pn prior needs a network path".into());
            }
            return Ok(PriorSpec::PriorNetwork(path.into(), parse_positive(ess, "ess")?));
        }
        Err(format!("unknown prior {s:?}; use uniform, upn:<ess> or pn:<network-path>:<ess>"))
    }
}

impl From<PriorSpec> for String {
    fn from(p: PriorSpec) -> String {
        match p {
            PriorSpec::Uniform => "uniform".into(),
            PriorSpec::UniformPriorNetwork(e) => format!("upn:{e}"),
            PriorSpec::PriorNetwork(path, e) => format!("pn:{}:{e}", path.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "String")]
pub enum StructurePriorSpec {
    Uniform,
    Kappa(f64),
}

impl FromStr for StructurePriorSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "uniform" {
            return Ok(StructurePriorSpec::Uniform);
        }
        if let Some(k) = s.strip_prefix("kappa:") {
            let k = parse_positive(k, "kappa")?;
            if k > 1.0 {
                return Err(format!("kappa must lie in (0, 1], got {k}"));
            }
            return Ok(StructurePriorSpec::Kappa(k));
        }
        Err(format!("unknown structure prior {s:?}; use uniform or kappa:<k>"))
    }
}

impl From<StructurePriorSpec> for String {
    fn from(p: StructurePriorSpec) -> String {
        match p {
            StructurePriorSpec::Uniform => "uniform".into(),
            StructurePriorSpec::Kappa(k) => format!("kappa:{k}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dgbn", version, about = "Learn Bayesian networks with decision-graph local structure")]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn a structure with the combined global and local greedy search.
    Learn(LearnArgs),
    /// Print the log score of a structure on a dataset.
    Score(ScoreArgs),
    /// Draw cases from a network file.
    Sample(SampleArgs),
    /// Generate a random benchmark network with parameter-set equalities.
    Genbench(GenbenchArgs),
    /// Run an operator-set sweep and write a report directory.
    Sweep(SweepArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DataArgs {
    /// CSV file of categorical cases.
    #[arg(long)]
    pub data: PathBuf,
    /// Treat the first row as data instead of column names.
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct PriorArgs {
    /// uniform | upn:<ess> | pn:<network-path>:<ess>
    #[arg(long, default_value = "uniform")]
    pub prior: PriorSpec,
    /// uniform | kappa:<k> with 0 < k <= 1
    #[arg(long, default_value = "uniform")]
    pub structure_prior: StructurePriorSpec,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstraintArgs {
    /// File listing every variable once (names or indices), parents first.
    #[arg(long)]
    pub order: Option<PathBuf>,
    /// Maximum parents per node, including temporary candidates.
    #[arg(long)]
    pub max_parents: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct LearnArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub prior: PriorArgs,
    /// Operators to search with, any of C, B, M.
    #[arg(long, default_value = "CBM")]
    pub opset: OperatorSet,
    #[command(flatten)]
    pub constraints: ConstraintArgs,
    /// Keep the global structure of --structure fixed.
    #[arg(long, requires = "structure")]
    pub fixed_structure: bool,
    /// Initial structure file.
    #[arg(long)]
    pub structure: Option<PathBuf>,
    /// Recorded in the output; the search itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output structure file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub prior: PriorArgs,
    /// Structure or network file.
    #[arg(long)]
    pub structure: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    /// Network file with leaf distributions.
    #[arg(long)]
    pub network: PathBuf,
    /// Number of cases.
    #[arg(long, short = 'n')]
    pub cases: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; the config goes to `<out>.meta.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct GenbenchArgs {
    #[arg(long, default_value_t = 37)]
    pub vars: usize,
    /// Fraction of parent states merged away, in [0, 1].
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output network file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    /// One node with a fixed parent set.
    Static,
    /// Every node, global structure fixed; baseline is complete tables.
    FixedG,
    /// Full structure search; baseline is greedy complete-table search.
    Full,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum)]
    pub mode: SweepMode,
    /// Parameter priors, one report row each.
    #[arg(long = "prior", default_value = "uniform", num_args = 1..)]
    pub priors: Vec<PriorSpec>,
    #[arg(long, default_value = "uniform")]
    pub structure_prior: StructurePriorSpec,
    /// Comma-separated operator sets, one report column each.
    #[arg(long, value_delimiter = ',', default_value = "C,B,CB,CM,BM,CBM")]
    pub opsets: Vec<OperatorSet>,
    /// Static mode: the node whose graph is learned (name or index).
    #[arg(long)]
    pub target: Option<String>,
    /// Static mode: comma-separated parents (default: all other variables).
    #[arg(long, value_delimiter = ',')]
    pub parents: Option<Vec<String>>,
    /// Fixed-G mode: file whose global structure is used.
    #[arg(long)]
    pub structure: Option<PathBuf>,
    #[command(flatten)]
    pub constraints: ConstraintArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report directory.
    #[arg(long)]
    pub out: PathBuf,
}

fn load_data(args: &DataArgs) -> Result<Dataset, CliError> {
    let policy = if args.no_header { HeaderPolicy::Absent } else { HeaderPolicy::Present };
    Ok(load_csv(&args.data, policy)?)
}

fn score_config(prior: &PriorSpec, structure_prior: StructurePriorSpec, data: &Dataset) -> Result<ScoreConfig, CliError> {
    let cfg = match prior {
        PriorSpec::Uniform => ScoreConfig::uniform(),
        PriorSpec::UniformPriorNetwork(ess) => ScoreConfig::uniform_pn(*ess),
        PriorSpec::PriorNetwork(path, ess) => {
            let net = StructureDocument::read(path)?.network()?;
            if net.domain().cardinalities() != data.domain().cardinalities() {
                return Err(CliError::Data(format!("prior network {} has a different domain", path.display())));
            }
            ScoreConfig::prior_network(net, *ess)
        }
    };
    let sp = match structure_prior {
        StructurePriorSpec::Uniform => StructurePrior::Uniform,
        StructurePriorSpec::Kappa(k) => StructurePrior::Kappa(k),
    };
    let cfg = cfg.with_structure_prior(sp);
    cfg.check()?;
    Ok(cfg)
}

fn lookup_var(data: &Dataset, token: &str) -> Result<usize, CliError> {
    let d = data.domain();
    d.index_of(token)
        .or_else(|| token.parse::<usize>().ok().filter(|&i| i < d.len()))
        .ok_or_else(|| CliError::Usage(format!("unknown variable {token:?}")))
}

fn constraints(args: &ConstraintArgs, data: &Dataset, fixed: bool) -> Result<SearchConstraints, CliError> {
    let order = match &args.order {
        None => None,
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let vars = text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| lookup_var(data, t))
                .collect::<Result<Vec<_>, _>>()?;
            Some(vars)
        }
    };
    let c = SearchConstraints { order, max_parents: args.max_parents, fixed_structure: fixed };
    c.check(data.domain().len())?;
    Ok(c)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn provenance<T: Serialize>(command: &str, args: &T) -> Value {
    json!({ "command": command, "version": env!("CARGO_PKG_VERSION"), "args": args })
}

fn read_structure(path: &Path, data: &Dataset) -> Result<(NetworkStructure, Dataset), CliError> {
    let s = StructureDocument::read(path)?.structure()?;
    let aligned = align_to(data, &s.domain)?;
    Ok((s, aligned))
}

fn cmd_learn(args: &LearnArgs) -> Result<(), CliError> {
    let data = load_data(&args.data)?;
    let (initial, data) = match &args.structure {
        Some(p) => read_structure(p, &data)?,
        None => (NetworkStructure::empty(data.domain().clone()), data),
    };
    let cfg = score_config(&args.prior.prior, args.prior.structure_prior, &data)?;
    let cons = constraints(&args.constraints, &data, args.fixed_structure)?;
    let start = Instant::now();
    let out = combined_greedy_from(initial.clone(), &data, &cfg, args.opset, &cons)?;
    let secs = start.elapsed().as_secs_f64();
    if !out.structure.validate().is_empty() {
        return Err(CliError::Internal("search produced an invalid structure".into()));
    }
    if args.fixed_structure && out.structure.global != initial.global {
        return Err(CliError::Internal("global structure changed under --fixed-structure".into()));
    }
    let rescored = log_score(&out.structure, &data, &cfg)?;
    if (rescored - out.score).abs() > 1e-6 * rescored.abs().max(1.0) {
        return Err(CliError::Internal(format!("incremental score {} differs from rescore {rescored}", out.score)));
    }
    let doc = StructureDocument::from_structure(&out.structure, Some(provenance("learn", args)));
    write_text(&args.out, &doc.to_json())?;
    let leaves: Vec<usize> = out.structure.local.iter().map(|g| g.leaf_count()).collect();
    let summary = json!({
        "log_score": rescored,
        "edges": out.structure.global.edge_count(),
        "leaves": leaves,
        "rounds": out.steps.len(),
        "wall_seconds": secs,
    });
    println!("{}", serde_json::to_string_pretty(&summary).expect("plain json"));
    Ok(())
}

fn cmd_score(args: &ScoreArgs) -> Result<(), CliError> {
    let data = load_data(&args.data)?;
    let (s, data) = read_structure(&args.structure, &data)?;
    let cfg = score_config(&args.prior.prior, args.prior.structure_prior, &data)?;
    println!("{}", log_score(&s, &data, &cfg)?);
    Ok(())
}

fn cmd_sample(args: &SampleArgs) -> Result<(), CliError> {
    let net = StructureDocument::read(&args.network)?.network()?;
    let data = forward_sample(&net, args.cases, args.seed);
    let mut buf = Vec::new();
    write_csv(&data, &mut buf)?;
    let text = String::from_utf8(buf).map_err(|e| CliError::Internal(e.to_string()))?;
    write_text(&args.out, &text)?;
    let mut meta = args.out.clone().into_os_string();
    meta.push(".meta.json");
    let config = serde_json::to_string_pretty(&provenance("sample", args)).expect("plain json");
    write_text(Path::new(&meta), &config)
}

fn cmd_genbench(args: &GenbenchArgs) -> Result<(), CliError> {
    let spec = make_local_structure_benchmark(args.vars, args.seed, args.density).map_err(|e| match e {
        DataError::TooFewVariables(_) | DataError::BadDensity(_) => CliError::Usage(e.to_string()),
        other => other.into(),
    })?;
    let mut config = provenance("genbench", args);
    config["generator"] = spec.config();
    write_text(&args.out, &StructureDocument::from_network(&spec.network, Some(config)).to_json())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let data = load_data(&args.data)?;
    let priors =
        args.priors.iter().map(|p| score_config(p, args.structure_prior, &data)).collect::<Result<Vec<_>, _>>()?;
    let n = data.domain().len();
    let report = match args.mode {
        SweepMode::Static => {
            let target = args
                .target
                .as_deref()
                .ok_or_else(|| CliError::Usage("--target is required in static mode".into()))
                .and_then(|t| lookup_var(&data, t))?;
            let parents = match &args.parents {
                Some(ps) => {
                    let mut v = ps.iter().map(|p| lookup_var(&data, p)).collect::<Result<Vec<_>, _>>()?;
                    v.sort_unstable();
                    v.dedup();
                    v
                }
                None => (0..n).filter(|&i| i != target).collect(),
            };
            sweep_static(&data, target, &parents, &args.opsets, &priors)?
        }
        SweepMode::FixedG => {
            let path = args
                .structure
                .as_ref()
                .ok_or_else(|| CliError::Usage("--structure is required in fixed-g mode".into()))?;
            let (s, aligned) = read_structure(path, &data)?;
            sweep_all_nodes_fixed_g(&aligned, &s.global, &args.opsets, &priors)?
        }
        SweepMode::Full => {
            let cons = constraints(&args.constraints, &data, false)?;
            sweep_full_search(&data, &args.opsets, &priors, &cons, &GlobalStructure::empty(n))?
        }
    };
    report.save(&args.out).map_err(|e| io_err(&args.out, e))?;
    let config = serde_json::to_string_pretty(&provenance("sweep", args)).expect("plain json");
    write_text(&args.out.join("config.json"), &config)?;
    print!("{}", report.to_text());
    eprint!("{}", report.timings_text());
    Ok(())
}

/// Run with the given arguments (including the program name) and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("usage error: --threads must be at least 1");
            return 1;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("internal error: {e}");
            return 3;
        }
    }
    let result = match &cli.command {
        Command::Learn(a) => cmd_learn(a),
        Command::Score(a) => cmd_score(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Genbench(a) => cmd_genbench(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prior_specs_parse() {
        assert_eq!("uniform".parse::<PriorSpec>(), Ok(PriorSpec::Uniform));
        assert_eq!("upn:10".parse::<PriorSpec>(), Ok(PriorSpec::UniformPriorNetwork(10.0)));
        assert_eq!("pn:a:b.json:4".parse::<PriorSpec>(), Ok(PriorSpec::PriorNetwork("a:b.json".into(), 4.0)));
        assert!("upn:0".parse::<PriorSpec>().is_err());
        assert!("pn:4".parse::<PriorSpec>().is_err());
        assert_eq!(String::from(PriorSpec::UniformPriorNetwork(2.5)), "upn:2.5");
    }

    #[test]
    fn kappa_must_be_in_unit_interval() {
        assert_eq!("kappa:1".parse::<StructurePriorSpec>(), Ok(StructurePriorSpec::Kappa(1.0)));
        assert!("kappa:1.5".parse::<StructurePriorSpec>().is_err());
        assert!("kappa:0".parse::<StructurePriorSpec>().is_err());
    }

    #[test]
    fn bad_opset_is_usage_error() {
        assert_eq!(run(["dgbn", "learn", "--data", "x.csv", "--out", "o.json", "--opset", "X"]), 1);
        assert_eq!(run(["dgbn", "genbench", "--vars", "2", "--out", "o.json"]), 1);
    }

    #[test]
    fn missing_file_is_data_error() {
        assert_eq!(run(["dgbn", "score", "--data", "/nonexistent.csv", "--structure", "/nonexistent.json"]), 2);
    }
}
