//! `kchroma`: generate, solve, analyze, estimate, query oracles, and run
//! batch experiments on list-coloring instances. All randomized commands
//! are deterministic in `--seed`; machine-readable output goes through
//! `--json` (the `analyze` report is always JSON).

mod experiment;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde::Serialize;

use kchroma_core::analysis::{lll_certificate, regime_report, LllCertificate, RegimeReport, ThresholdParams};
use kchroma_core::generators::{adversarial_lists, complete_kpartite, random_kpartite, ListStyle};
use kchroma_core::hypergraph::{KPartiteHypergraph, VertexId};
use kchroma_core::io;
use kchroma_core::lists::ListAssignment;
use kchroma_core::oracle::{
    choice::choice_number, estimate_block_prob, estimate_color_blocked,
    estimate_edge_problematic, exact_block_prob_star, exact_color_blocked_star,
    exhaustive_colorable,
};
use kchroma_core::sampler::problematic_prob;
use kchroma_core::solver::{solve, verify, SolveStatus};

#[derive(Parser)]
#[command(name = "kchroma", version, about = "List coloring of k-partite k-uniform hypergraphs")]
struct Cli {
    /// Base seed for every randomized operation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for estimators and experiments.
    #[arg(long, global = true, env = "KCHROMA_THREADS")]
    threads: Option<usize>,
    /// Emit machine-readable JSON instead of a text summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file, optionally with a list assignment.
    Gen(GenArgs),
    /// Run the resampling solver on an instance.
    Solve(SolveArgs),
    /// List-size thresholds, load bounds, and the local-lemma certificate.
    Analyze(AnalyzeArgs),
    /// Monte Carlo estimates of landing and blocking probabilities.
    Estimate(EstimateArgs),
    /// Exact ground truth at small scale.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Expand a JSON sweep spec into a CSV report.
    Experiment(ExperimentArgs),
    /// Check a coloring file against an instance and its lists.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Complete,
    Random,
}

#[derive(Args)]
struct GenArgs {
    /// Instance family.
    #[arg(long, value_enum, default_value_t = GenKind::Complete)]
    kind: GenKind,
    /// Number of parts (edge size).
    #[arg(long)]
    k: u32,
    /// Vertices per part.
    #[arg(long)]
    n: u32,
    /// Edge probability for the random family.
    #[arg(long, default_value_t = 0.5)]
    edge_prob: f64,
    /// Also produce lists in this style (identical, disjoint-per-part,
    /// random-windowed, latin).
    #[arg(long)]
    lists: Option<ListStyle>,
    /// List size for --lists.
    #[arg(long, default_value_t = 3)]
    q: u32,
    /// Instance output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// List output path (stdout when omitted).
    #[arg(long)]
    lists_out: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file (khg format).
    #[arg(long)]
    instance: PathBuf,
    /// List file; mutually exclusive with --uniform-lists.
    #[arg(long, conflicts_with = "uniform_lists")]
    lists: Option<PathBuf>,
    /// Give every vertex the list {0..q−1}.
    #[arg(long)]
    uniform_lists: Option<u32>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Resample budget (default: 100 per last-part vertex).
    #[arg(long)]
    budget: Option<u64>,
    /// Write the coloring as 'part:index color' lines.
    #[arg(long)]
    coloring_out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Number of parts.
    #[arg(long)]
    k: u32,
    /// Slack parameter.
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// Degree at which to evaluate thresholds and the certificate.
    #[arg(long)]
    delta: Option<f64>,
    /// Also scan for the degree where the asymptotic regime begins.
    #[arg(long)]
    regime: bool,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Last-part vertex (part:index) whose blocking is estimated.
    #[arg(long)]
    vertex: Option<String>,
    /// Restrict to this color.
    #[arg(long)]
    color: Option<u32>,
    /// Edge index: estimate how often the edge lands on --color.
    #[arg(long, conflicts_with = "vertex")]
    edge: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Also report the exact value (edge landings always have one; vertex
    /// targets need independent star structure).
    #[arg(long)]
    exact: bool,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Exhaustively decide list colorability.
    Colorable(ColorableArgs),
    /// Exact choice number by exhaustive search over list assignments.
    ChoiceNumber(ChoiceArgs),
    /// Monte Carlo estimators (same engine as the top-level estimate).
    Estimate(EstimateArgs),
}

#[derive(Args)]
struct ColorableArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Write a proper coloring here when one exists.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Args)]
struct ChoiceArgs {
    /// Instance file (khg format).
    #[arg(long)]
    instance: PathBuf,
    /// Largest list size to try.
    #[arg(long, default_value_t = 6)]
    max_q: u32,
    /// Cap on distinct colors per searched assignment (default q·|V|).
    #[arg(long)]
    universe: Option<u32>,
    /// Write the defeating list assignment found at value−1.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON sweep description.
    #[arg(long)]
    spec: PathBuf,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Coloring file ('part:index color' lines).
    #[arg(long)]
    coloring: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Gen(args) => cmd_gen(&cli, args),
        Command::Solve(args) => cmd_solve(&cli, args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Estimate(args) => cmd_estimate(&cli, args),
        Command::Oracle(OracleCmd::Colorable(args)) => cmd_colorable(&cli, args),
        Command::Oracle(OracleCmd::ChoiceNumber(args)) => cmd_choice(&cli, args),
        Command::Oracle(OracleCmd::Estimate(args)) => cmd_estimate(&cli, args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Verify(args) => cmd_verify(&cli, args),
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_instance(args: &InstanceArgs) -> Result<(KPartiteHypergraph, ListAssignment)> {
    let h = io::parse_instance(&read_file(&args.instance)?)
        .with_context(|| format!("parsing {}", args.instance.display()))?;
    let lists = match (&args.lists, args.uniform_lists) {
        (Some(path), None) => io::parse_lists(&read_file(path)?, &h)
            .with_context(|| format!("parsing {}", path.display()))?,
        (None, Some(q)) => ListAssignment::uniform(&h, q),
        (None, None) => bail!("provide --lists FILE or --uniform-lists Q"),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    Ok((h, lists))
}

/// The uniform list size of an assignment, required by the sampling-based
/// commands.
fn normalized_q(lists: &ListAssignment) -> Result<u32> {
    let q = lists
        .lists()
        .first()
        .map(|l| l.len() as u32)
        .unwrap_or_default();
    if q < 2 || !lists.is_normalized(q) {
        bail!("this command needs every list to have the same size q >= 2");
    }
    Ok(q)
}

fn parse_vertex(text: &str) -> Result<VertexId> {
    let (p, i) = text
        .split_once(':')
        .with_context(|| format!("expected part:index, got {text:?}"))?;
    Ok(VertexId::new(
        p.parse().with_context(|| format!("bad part in {text:?}"))?,
        i.parse().with_context(|| format!("bad index in {text:?}"))?,
    ))
}

/// Writes to stdout, treating a closed pipe (e.g. `kchroma ... | head`) as
/// an ordinary end of output instead of a panic.
fn out_text(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(e).context("writing to stdout")
        }
        _ => Ok(()),
    }
}

fn out_line(text: impl std::fmt::Display) -> Result<()> {
    out_text(&format!("{text}\n"))
}

fn emit<T: Serialize>(report: &T) -> Result<()> {
    out_line(serde_json::to_string_pretty(report)?)
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> Result<ExitCode> {
    let h = match args.kind {
        GenKind::Complete => complete_kpartite(args.k, args.n)?,
        GenKind::Random => random_kpartite(args.k, args.n, args.edge_prob, cli.seed)?,
    };
    let instance_text = io::write_instance(&h);
    match &args.out {
        Some(path) => {
            write_file(path, &instance_text)?;
            eprintln!("instance -> {}", path.display());
        }
        None => out_text(&instance_text)?,
    }
    if let Some(style) = args.lists {
        let lists = adversarial_lists(&h, args.q, style, cli.seed)?;
        let list_text = io::write_lists(&lists, &h);
        match &args.lists_out {
            Some(path) => {
                write_file(path, &list_text)?;
                eprintln!("lists -> {}", path.display());
            }
            None => out_text(&list_text)?,
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SolveReport {
    schema: &'static str,
    status: SolveStatus,
    rounds: u64,
    resamples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    coloring_out: Option<String>,
}

fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Success => "SUCCESS",
        SolveStatus::BudgetExhausted => "BUDGET_EXHAUSTED",
    }
}

fn cmd_solve(cli: &Cli, args: &SolveArgs) -> Result<ExitCode> {
    let (h, lists) = load_instance(&args.input)?;
    let q = normalized_q(&lists)?;
    let outcome = solve(&h, &lists, q, args.budget, cli.seed)?;
    let mut coloring_out = None;
    if let (Some(path), Some(coloring)) = (&args.coloring_out, &outcome.coloring) {
        write_file(path, &io::write_coloring(coloring, &h))?;
        coloring_out = Some(path.display().to_string());
    }
    if cli.json {
        emit(&SolveReport {
            schema: "kchroma-solve v1",
            status: outcome.status,
            rounds: outcome.rounds,
            resamples: outcome.resamples,
            coloring_out,
        })?;
    } else {
        out_line(format!(
            "status {} after {} rounds ({} resamples)",
            status_name(outcome.status),
            outcome.rounds,
            outcome.resamples
        ))?;
        if let Some(path) = coloring_out {
            out_line(format!("coloring -> {path}"))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct AnalyzeReport {
    schema: &'static str,
    k: u32,
    epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    thresholds: Option<ThresholdParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<LllCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    regime: Option<RegimeReport>,
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<ExitCode> {
    if args.delta.is_none() && !args.regime {
        bail!("nothing to analyze: pass --delta and/or --regime");
    }
    let mut report = AnalyzeReport {
        schema: "kchroma-analyze v1",
        k: args.k,
        epsilon: args.epsilon,
        thresholds: None,
        certificate: None,
        regime: None,
    };
    if let Some(delta) = args.delta {
        report.thresholds = Some(ThresholdParams::new(args.k, delta, args.epsilon)?);
        report.certificate = Some(lll_certificate(args.k, args.epsilon, delta, None)?);
    }
    if args.regime {
        report.regime = Some(regime_report(args.k, args.epsilon)?);
    }
    emit(&report)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct EstimateReport {
    schema: &'static str,
    target: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    color: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge: Option<usize>,
    estimate: f64,
    std_error: f64,
    trials: u64,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<f64>,
}

fn cmd_estimate(cli: &Cli, args: &EstimateArgs) -> Result<ExitCode> {
    let (h, lists) = load_instance(&args.input)?;
    let q = normalized_q(&lists)?;
    let report = match (&args.vertex, args.edge) {
        (Some(vtext), None) => {
            let v = parse_vertex(vtext)?;
            match args.color {
                Some(c) => {
                    let est = estimate_color_blocked(&h, &lists, q, v, c, args.trials, cli.seed)?;
                    let exact = if args.exact {
                        Some(
                            exact_color_blocked_star(&h, &lists, q, v, c)?
                                .to_f64()
                                .context("exact value does not fit in a float")?,
                        )
                    } else {
                        None
                    };
                    EstimateReport {
                        schema: "kchroma-estimate v1",
                        target: "color-blocked",
                        vertex: Some(v.to_string()),
                        color: Some(c),
                        edge: None,
                        estimate: est.estimate,
                        std_error: est.std_error,
                        trials: est.trials,
                        seed: est.seed,
                        exact,
                    }
                }
                None => {
                    let est = estimate_block_prob(&h, &lists, q, v, args.trials, cli.seed)?;
                    let exact = if args.exact {
                        Some(
                            exact_block_prob_star(&h, &lists, q, v)?
                                .to_f64()
                                .context("exact value does not fit in a float")?,
                        )
                    } else {
                        None
                    };
                    EstimateReport {
                        schema: "kchroma-estimate v1",
                        target: "block-prob",
                        vertex: Some(v.to_string()),
                        color: None,
                        edge: None,
                        estimate: est.estimate,
                        std_error: est.std_error,
                        trials: est.trials,
                        seed: est.seed,
                        exact,
                    }
                }
            }
        }
        (None, Some(edge)) => {
            let color = args
                .color
                .context("--edge needs --color to name the landing color")?;
            let est =
                estimate_edge_problematic(&h, &lists, q, edge, color, args.trials, cli.seed)?;
            let exact = if args.exact {
                if edge >= h.edge_count() {
                    bail!("edge index {edge} out of range");
                }
                Some(
                    problematic_prob(&h, &lists, q, h.edge(edge), color)?
                        .to_f64()
                        .context("exact value does not fit in a float")?,
                )
            } else {
                None
            };
            EstimateReport {
                schema: "kchroma-estimate v1",
                target: "edge-landing",
                vertex: None,
                color: Some(color),
                edge: Some(edge),
                estimate: est.estimate,
                std_error: est.std_error,
                trials: est.trials,
                seed: est.seed,
                exact,
            }
        }
        _ => bail!("pick a target: --vertex PART:INDEX [--color C] or --edge E --color C"),
    };
    if cli.json {
        emit(&report)?;
    } else {
        let what = match report.target {
            "color-blocked" => format!(
                "P[color {} blocked at {}]",
                report.color.unwrap(),
                report.vertex.as_deref().unwrap()
            ),
            "block-prob" => format!("P[{} fully blocked]", report.vertex.as_deref().unwrap()),
            _ => format!(
                "P[edge {} lands on color {}]",
                report.edge.unwrap(),
                report.color.unwrap()
            ),
        };
        out_line(format!(
            "{what} = {:.6} +/- {:.6} ({} trials, seed {})",
            report.estimate, report.std_error, report.trials, report.seed
        ))?;
        if let Some(exact) = report.exact {
            out_line(format!("exact value {exact:.6}"))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ColorableReport {
    schema: &'static str,
    query: &'static str,
    colorable: bool,
    leaves_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_out: Option<String>,
}

fn cmd_colorable(cli: &Cli, args: &ColorableArgs) -> Result<ExitCode> {
    let (h, lists) = load_instance(&args.input)?;
    let result = exhaustive_colorable(&h, &lists)?;
    let mut witness_out = None;
    if let (Some(path), Some(witness)) = (&args.witness_out, &result.witness) {
        write_file(path, &io::write_coloring(witness, &h))?;
        witness_out = Some(path.display().to_string());
    }
    if cli.json {
        emit(&ColorableReport {
            schema: "kchroma-oracle v1",
            query: "colorable",
            colorable: result.colorable,
            leaves_checked: result.leaves_checked,
            witness_out,
        })?;
    } else {
        out_line(format!(
            "colorable: {} ({} assignments tried)",
            result.colorable, result.leaves_checked
        ))?;
        if let Some(path) = witness_out {
            out_line(format!("witness -> {path}"))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ChoiceReport {
    schema: &'static str,
    query: &'static str,
    value: u32,
    assignments_checked: u64,
    universe: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_out: Option<String>,
}

fn cmd_choice(cli: &Cli, args: &ChoiceArgs) -> Result<ExitCode> {
    let h = io::parse_instance(&read_file(&args.instance)?)
        .with_context(|| format!("parsing {}", args.instance.display()))?;
    let result = choice_number(&h, args.max_q, args.universe)?;
    let mut witness_out = None;
    if let (Some(path), Some(witness)) = (&args.witness_out, &result.witness) {
        write_file(path, &io::write_lists(witness, &h))?;
        witness_out = Some(path.display().to_string());
    }
    if cli.json {
        emit(&ChoiceReport {
            schema: "kchroma-oracle v1",
            query: "choice-number",
            value: result.value,
            assignments_checked: result.stats.assignments_checked,
            universe: result.stats.universe,
            witness_out,
        })?;
    } else {
        out_line(format!(
            "choice number: {} ({} assignments checked, universe {})",
            result.value, result.stats.assignments_checked, result.stats.universe
        ))?;
        if let Some(path) = witness_out {
            out_line(format!("defeating lists -> {path}"))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<ExitCode> {
    let spec = experiment::ExperimentSpec::from_json(&read_file(&args.spec)?)?;
    let csv = experiment::run_experiment(&spec)?;
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            eprintln!(
                "report -> {} ({} rows)",
                path.display(),
                csv.lines().count().saturating_sub(2)
            );
        }
        None => out_text(&csv)?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyReport {
    schema: &'static str,
    valid: bool,
    violations: Vec<String>,
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode> {
    let (h, lists) = load_instance(&args.input)?;
    let coloring = io::parse_coloring(&read_file(&args.coloring)?, &h)
        .with_context(|| format!("parsing {}", args.coloring.display()))?;
    let report = verify(&h, &lists, &coloring);
    let valid = report.is_valid();
    if cli.json {
        emit(&VerifyReport {
            schema: "kchroma-verify v1",
            valid,
            violations: report.violations.iter().map(|v| v.to_string()).collect(),
        })?;
    } else if valid {
        out_line("coloring is valid")?;
    } else {
        for v in &report.violations {
            out_line(format!("violation: {v}"))?;
        }
    }
    Ok(if valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
