//! Argument parsing and dispatch for the `cliquebound` binary.
//!
//! Every subcommand reads its inputs from flags and files, calls one library
//! operation and writes the JSON (or CSV) payload to `--out` or stdout.
//! Exit codes: 0 success, 1 the inputs violate a precondition of the
//! requested operation (a `{"status", "reason"}` record is still written),
//! 2 unreadable or malformed input, I/O failure, or bad usage.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cliquebound::bounds::{
    self, chromatic_window, clique_lower_main, clique_upper_hom, clique_upper_inhom,
    corollary_window, extreme_regimes, find_feasible_params, log_bounds, recursion_chain,
    BoundParams, Case, ExtremeRegime, FeasibleCase,
};
use cliquebound::density::{log_average_tn, min_average_density};
use cliquebound::model::{build_matrix, sample_graph};
use cliquebound::montecarlo::{
    reference_suite, run_experiment, summarize, ExperimentConfig, ExperimentResult,
};
use cliquebound::solvers::{
    chromatic_exact, chromatic_sandwich, independence_number, max_clique, Budget,
};
use cliquebound::{Graph, ModelSpec};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The inputs are well-formed but outside the operation's hypotheses.
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Precondition(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl From<cliquebound::Error> for CliError {
    fn from(e: cliquebound::Error) -> Self {
        if e.is_precondition() {
            CliError::Precondition(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub code: i32,
    /// Files written; empty when the payload went to stdout.
    pub outputs: Vec<PathBuf>,
    /// One human-readable line.
    pub summary: String,
}

#[derive(Parser, Debug)]
#[command(name = "cliquebound", version, about = "Random graph clique and chromatic bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample one graph from a model.
    Generate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Clique number, independence number or chromatic number of a graph.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        what: What,
        /// Search-node limit.
        #[arg(long, default_value_t = Budget::DEFAULT_NODES)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one statement at finite n.
    Bounds(BoundsArgs),
    /// Density floor (`--a`) or log-average edge weight (`--un`) of a model.
    Density {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, conflicts_with = "un", required_unless_present = "un")]
        a: Option<f64>,
        #[arg(long)]
        un: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run Monte Carlo experiments from a config file (object or array) or
    /// the built-in reference suite.
    Experiment {
        #[arg(long, required_unless_present = "suite", conflicts_with = "suite")]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        /// Trials per experiment for `--suite`.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Overrides the seed of every config.
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the summary table here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Merge experiment result files into one CSV table.
    Summarize {
        #[arg(long, num_args = 1.., required = true)]
        results: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum What {
    Clique,
    Independent,
    Chromatic,
    Sandwich,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Suite {
    Reference,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// clq-upper-hom, clq-upper-inhom, clq-main-{i,ii,iii}, clq-extrem-{1,2,3},
    /// cor-{i,ii,iii}, chr-{i,ii,iii}, chernoff, recursion, log-bounds,
    /// feasible-{clq,chr}-{i,ii,iii}.
    #[arg(long)]
    statement: String,
    #[arg(long)]
    n: Option<usize>,
    /// Constant edge probability.
    #[arg(long)]
    p: Option<f64>,
    /// Exponent of `p_n = n^-theta1`.
    #[arg(long)]
    theta1: Option<f64>,
    /// Exponent of `p_n = 1 - n^-theta2`.
    #[arg(long)]
    theta2: Option<f64>,
    /// Model file, instead of `--n` with a family parameter.
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long = "fn")]
    f_n: Option<f64>,
    /// Use `f_n = log n`.
    #[arg(long)]
    fn_log_n: bool,
    #[arg(long)]
    un: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    zeta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long)]
    mean: Option<f64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long = "L")]
    depth: Option<usize>,
    #[arg(long)]
    a_floor: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn need<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Input(format!("missing --{flag}")))
}

impl BoundsArgs {
    fn params(&self) -> BoundParams {
        BoundParams {
            eta: self.eta,
            gamma: self.gamma,
            xi: self.xi,
            zeta: self.zeta,
            epsilon: self.epsilon,
            delta: self.delta,
            a: self.a,
            beta: None,
        }
    }

    fn model(&self) -> CliResult<ModelSpec> {
        if let Some(path) = &self.model {
            return read_json(path);
        }
        let n = need(self.n, "n")?;
        match (self.p, self.theta1, self.theta2) {
            (Some(p), None, None) => Ok(ModelSpec::constant(n, p)),
            (None, Some(t), None) => Ok(ModelSpec::power_law_sparse(n, t)),
            (None, None, Some(t)) => Ok(ModelSpec::near_complete(n, t)),
            _ => Err(CliError::Input(
                "give --model, or --n with exactly one of --p, --theta1, --theta2".into(),
            )),
        }
    }

    fn p_n(&self) -> CliResult<(usize, f64)> {
        let m = self.model()?;
        Ok((m.n, m.p_n()?))
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Reads a graph file, rejecting self-loops, non-canonical or duplicate
/// edges and out-of-range labels.
pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    read_json(path)
}

/// Writes `value` as compact JSON plus a newline to `path`, or to `stdout`.
pub fn save_result<T: Serialize>(
    value: &T,
    path: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let mut text =
        serde_json::to_string(value).map_err(|e| CliError::Input(format!("serialize: {e}")))?;
    text.push('\n');
    write_text(&text, path, stdout)
}

fn write_text(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(format!("stdout: {e}"))),
    }
}

struct Done {
    outputs: Vec<PathBuf>,
    summary: String,
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>, stdout: &mut dyn Write, summary: String) -> CliResult<Done> {
    save_result(value, out.map(PathBuf::as_path), stdout)?;
    Ok(Done {
        outputs: out.cloned().into_iter().collect(),
        summary,
    })
}

fn run_bounds(b: &BoundsArgs, stdout: &mut dyn Write) -> CliResult<Done> {
    let id = b.statement.as_str();
    let out = b.out.as_ref();
    let case_of = |s: &str| -> CliResult<Case> { s.parse().map_err(CliError::from) };
    let summary = |what: &str| format!("{id}: {what}");

    if let Some(rest) = id.strip_prefix("feasible-") {
        let case: FeasibleCase = rest.parse()?;
        let f = find_feasible_params(
            case,
            b.alpha1.unwrap_or(0.0),
            b.alpha2.unwrap_or(0.0),
            b.a.unwrap_or(0.0),
        );
        return emit(&f, out, stdout, summary("parameter search"));
    }
    match id {
        "clq-upper-hom" => {
            let (n, p) = b.p_n()?;
            let f_n = match (b.f_n, b.fn_log_n) {
                (Some(f), false) => f,
                (None, true) => (n as f64).ln(),
                _ => return Err(CliError::Input("give exactly one of --fn, --fn-log-n".into())),
            };
            let r = clique_upper_hom(n, p, f_n)?;
            let s = summary(&format!("U_n = {}", r.threshold));
            emit(&r, out, stdout, s)
        }
        "clq-upper-inhom" => {
            let model = b.model()?;
            let un = need(b.un, "un")?;
            let lat = log_average_tn(&build_matrix(&model)?, un)?;
            let r = clique_upper_inhom(model.n, un, lat.conservative())?;
            let s = summary(&format!("U_n = {}", r.threshold));
            emit(&r, out, stdout, s)
        }
        _ if id.starts_with("clq-main-") => {
            let case = case_of(&id["clq-main-".len()..])?;
            let (n, p) = b.p_n()?;
            let r = clique_lower_main(case, n, p, b.a.unwrap_or(0.0), &b.params())?;
            let s = summary(&format!("L_n = {}", r.threshold));
            emit(&r, out, stdout, s)
        }
        "clq-extrem-1" | "clq-extrem-2" | "clq-extrem-3" => {
            let regime = match id {
                "clq-extrem-1" => ExtremeRegime::Alpha1Above2,
                "clq-extrem-2" => ExtremeRegime::Alpha2Above2,
                _ => ExtremeRegime::Alpha2Between1And2,
            };
            let r = extreme_regimes(need(b.n, "n")?, regime, need(b.alpha, "alpha")?, need(b.epsilon, "epsilon")?)?;
            let s = summary(&format!("guarantee {}", r.guarantee_raw));
            emit(&r, out, stdout, s)
        }
        _ if id.starts_with("cor-") || id.starts_with("chr-") => {
            let case = case_of(&id[4..])?;
            let model = b.model()?;
            let w = if id.starts_with("cor-") {
                corollary_window(case, &model, &b.params())?
            } else {
                chromatic_window(case, &model, &b.params())?
            };
            let s = summary(&format!("window [{}, {}]", w.lower.threshold, w.upper.threshold));
            emit(&w, out, stdout, s)
        }
        "chernoff" => {
            let failure = bounds::chernoff_tail(need(b.epsilon, "epsilon")?, need(b.mean, "mean")?)?;
            let v = serde_json::json!({
                "statement_id": bounds::ids::CHERNOFF,
                "epsilon": b.epsilon,
                "mean": b.mean,
                "failure_raw": failure,
            });
            emit(&v, out, stdout, summary(&format!("tail bound {failure}")))
        }
        "recursion" => {
            let c = recursion_chain(
                need(b.q, "q")?,
                need(b.p, "p")?,
                need(b.delta, "delta")?,
                need(b.epsilon, "epsilon")?,
                need(b.depth, "L")?,
                b.a_floor.unwrap_or(0.0),
            )?;
            let s = summary(&format!("t_bound {}", c.t_bound));
            emit(&c, out, stdout, s)
        }
        "log-bounds" => {
            let s = log_bounds(need(b.x, "x")?)?;
            emit(&s, out, stdout, summary("ordered"))
        }
        _ => Err(CliError::Input(format!("unknown statement {id:?}"))),
    }
}

fn run_experiments(
    configs: Vec<ExperimentConfig>,
    seed: u64,
    threads: Option<usize>,
) -> CliResult<Vec<ExperimentResult>> {
    let configs: Vec<ExperimentConfig> = configs
        .into_iter()
        .map(|mut c| {
            c.seed = seed;
            c
        })
        .collect();
    let go = || -> CliResult<Vec<ExperimentResult>> {
        configs
            .iter()
            .map(|c| run_experiment(c).map_err(CliError::from))
            .collect()
    };
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Input(format!("thread pool: {e}")))?
            .install(go),
        None => go(),
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write) -> CliResult<Done> {
    match cmd {
        Command::Generate { model, seed, trial, out } => {
            let spec: ModelSpec = read_json(&model)?;
            let g = sample_graph(&build_matrix(&spec)?, seed, trial);
            let s = format!("sampled n = {}, {} edges", g.n(), g.edge_count());
            emit(&g, out.as_ref(), stdout, s)
        }
        Command::Solve { graph, what, budget, out } => {
            let g = load_graph(&graph)?;
            let budget = Budget::nodes(budget);
            match what {
                What::Sandwich => {
                    let s = chromatic_sandwich(&g, budget);
                    let line = format!("chi in [{}, {}]", s.lower, s.upper);
                    emit(&s, out.as_ref(), stdout, line)
                }
                _ => {
                    let r = match what {
                        What::Clique => max_clique(&g, budget),
                        What::Independent => independence_number(&g, budget),
                        _ => chromatic_exact(&g, budget),
                    };
                    let q = format!("{:?}", r.quantity).to_lowercase();
                    let line = if r.exact {
                        format!("{q} = {}", r.value)
                    } else {
                        format!("{q} in [{}, {}] (budget exhausted)", r.lower(), r.upper())
                    };
                    emit(&r, out.as_ref(), stdout, line)
                }
            }
        }
        Command::Bounds(b) => run_bounds(&b, stdout),
        Command::Density { model, a, un, out } => {
            let spec: ModelSpec = read_json(&model)?;
            let m = build_matrix(&spec)?;
            match (a, un) {
                (Some(a), _) => {
                    let c = min_average_density(&m, a)?;
                    let s = format!("p_floor = {} over sets of size >= {}", c.p_floor, c.m);
                    emit(&c, out.as_ref(), stdout, s)
                }
                (None, Some(u)) => {
                    let r = log_average_tn(&m, u)?;
                    let s = format!("log(1/t_n) >= {} ({:?})", r.conservative(), r.mode);
                    emit(&r, out.as_ref(), stdout, s)
                }
                (None, None) => Err(CliError::Input("give --a or --un".into())),
            }
        }
        Command::Experiment { config, suite, trials, seed, threads, out, csv } => {
            let configs = match (config, suite) {
                (Some(path), _) => {
                    let v: serde_json::Value = read_json(&path)?;
                    let parsed = if v.is_array() {
                        serde_json::from_value(v)
                    } else {
                        serde_json::from_value(v).map(|c| vec![c])
                    };
                    parsed.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
                }
                (None, Some(Suite::Reference)) => reference_suite(seed, trials),
                (None, None) => return Err(CliError::Input("give --config or --suite".into())),
            };
            let results = run_experiments(configs, seed, threads)?;
            let mut done = emit(&results, out.as_ref(), stdout, format!("{} experiments", results.len()))?;
            if let Some(path) = csv {
                fs::write(&path, summarize(&results)?)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                done.outputs.push(path);
            }
            Ok(done)
        }
        Command::Summarize { results, out } => {
            let mut all = Vec::new();
            for path in &results {
                let v: serde_json::Value = read_json(path)?;
                let parsed: Result<Vec<ExperimentResult>, _> = if v.is_array() {
                    serde_json::from_value(v)
                } else {
                    serde_json::from_value(v).map(|r| vec![r])
                };
                all.extend(parsed.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?);
            }
            let table = summarize(&all)?;
            write_text(&table, out.as_deref(), stdout)?;
            Ok(Done {
                outputs: out.into_iter().collect(),
                summary: format!("{} rows", table.lines().count().saturating_sub(1)),
            })
        }
    }
}

/// Output target named by `--out`, if the arguments parse that far.
fn out_path(argv: &[String]) -> Option<PathBuf> {
    argv.iter()
        .position(|a| a == "--out")
        .and_then(|i| argv.get(i + 1))
        .map(PathBuf::from)
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run_command(argv: &[String], stdout: &mut dyn Write) -> CommandOutcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            }
            return CommandOutcome {
                code,
                outputs: Vec::new(),
                summary: text.trim_end().to_string(),
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(done) => CommandOutcome {
            code: 0,
            outputs: done.outputs,
            summary: done.summary,
        },
        Err(e) => {
            let code = e.code();
            let mut outputs = Vec::new();
            if let CliError::Precondition(reason) = &e {
                let record = serde_json::json!({ "status": "precondition-failed", "reason": reason });
                let out = out_path(argv);
                if save_result(&record, out.as_deref(), stdout).is_ok() {
                    outputs.extend(out);
                }
            }
            CommandOutcome {
                code,
                outputs,
                summary: format!("error: {e}"),
            }
        }
    }
}
