use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pebbling::engine::{
    is_solvable_with, t_pebbling_number, Budget, DistributionJson, EngineError, Limits, SweepOptions,
};
use pebbling::formula::{check_claim, check_graham, ClaimId, ClaimLedger, ClaimRecord, Params, Status};
use pebbling::graph::{
    cartesian_product, complete, cycle, delete_vertices, middle_cycle, middle_graph, middle_path_trimmed, path, Graph,
    GraphSpec, VertexId, VertexLabel,
};
use pebbling::strategy::{
    collect_on_path, greedy_solver, middle_path_strategy, product_collection_strategy, run_middle_cycle, CycleOptions,
    MiddleCycleLayout, PathContext, StrategyError, StrategyReport,
};
use pebbling::{Distribution, MoveSequence};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const INCONCLUSIVE: u8 = 2;
const USAGE: u8 = 3;

/// Exact graph pebbling from the command line.
///
/// Exit status: 0 confirmed/solvable/holds, 1 refuted/unsolvable/violated,
/// 2 inconclusive (budget), 3 usage or parse error.
#[derive(Parser, Debug)]
#[command(name = "pebble", version)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Total search-node budget for a sweep
    #[arg(long, global = true, env = "PEBBLE_MAX_NODES")]
    max_nodes: Option<u64>,
    /// Wall-clock budget in seconds
    #[arg(long, global = true, env = "PEBBLE_MAX_TIME")]
    max_time: Option<f64>,
    /// Node cap for a single solvability decision
    #[arg(long, global = true, env = "PEBBLE_CALL_NODES", default_value_t = 5_000_000)]
    call_nodes: u64,
    /// Sweep levels with more distributions than this are not attempted
    #[arg(long, global = true, env = "PEBBLE_MAX_LEVEL", default_value_t = 10_000_000)]
    max_level: u128,
    /// Worker threads (0: one per core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a graph and write it as JSON (and optionally DOT)
    Construct(ConstructArgs),
    /// Decide whether a distribution can put t pebbles on a target
    Solve(SolveArgs),
    /// Exact (t-)pebbling number by exhaustive sweep
    PebblingNumber(NumberArgs),
    /// Run a constructive strategy and narrate its moves
    Explain(ExplainArgs),
    /// Check a registered claim over a parameter range
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Complete,
    /// middle graph M(C_2n) of the even cycle
    MiddleCycle,
    /// middle graph M(P_n) of the path
    MiddlePath,
    /// M(P_n) with both end vertices removed
    MPathTrimmed,
    /// middle graph of --of
    Middle,
    /// Cartesian product of --left and --right
    Product,
    /// --of with the --remove vertices deleted
    Delete,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    /// Graph file or family shorthand such as `m-cycle:2`
    #[arg(long)]
    left: Option<String>,
    #[arg(long)]
    right: Option<String>,
    #[arg(long)]
    of: Option<String>,
    /// Comma-separated vertex labels
    #[arg(long, value_delimiter = ',')]
    remove: Vec<String>,
    /// Write JSON here instead of stdout
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Graph file or family shorthand
    #[arg(long, short)]
    graph: String,
    /// Distribution file, or inline JSON such as `{"v2": 10}`
    #[arg(long, short)]
    distribution: String,
    #[arg(long)]
    target: String,
    #[arg(long, short, default_value_t = 1)]
    t: u32,
    /// Write the witness move sequence here when solvable
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Replay this move sequence instead of searching
    #[arg(long, conflicts_with = "witness")]
    replay: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NumberArgs {
    #[arg(long, short)]
    graph: String,
    /// Representative targets (user-asserted symmetry); default all vertices
    #[arg(long, value_delimiter = ',')]
    targets: Vec<String>,
    #[arg(long, short, default_value_t = 1)]
    t: u32,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyName {
    /// collection along a path
    #[value(name = "cor2.3")]
    PathCollect,
    /// trimmed middle path
    #[value(name = "cor2.4")]
    MiddlePath,
    /// middle even cycle, t pebbles
    #[value(name = "cor2.7")]
    MiddleCycle,
    /// product of two middle even cycles
    #[value(name = "thm2.8")]
    Product,
    Greedy,
}

#[derive(Args, Debug)]
struct ExplainArgs {
    strategy: StrategyName,
    #[arg(long, short)]
    graph: String,
    #[arg(long, short)]
    distribution: String,
    #[arg(long)]
    target: String,
    #[arg(long, short, default_value_t = 1)]
    t: u32,
    /// Vertex order for cor2.3 (default: the graph itself, if it is a path)
    #[arg(long, value_delimiter = ',')]
    path: Vec<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Claim name, e.g. ineq22, cor24, cor2.7, graham
    claim: String,
    /// Value or inclusive range `a..b`
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    t: Option<String>,
    /// Graham only: graph file or shorthand
    #[arg(long)]
    left: Option<String>,
    #[arg(long)]
    right: Option<String>,
    /// JSON-lines ledger the records are appended to
    #[arg(long, env = "PEBBLE_LEDGER", default_value = "pebble-ledger.jsonl")]
    ledger: PathBuf,
    #[arg(long)]
    no_ledger: bool,
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Usage(String),
    Inconclusive(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::BudgetExceeded(r) => Failure::Inconclusive(r),
            other => Failure::Usage(other.to_string()),
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Usage(e.to_string())
            }
        }
    )*};
}
usage_from!(
    pebbling::graph::GraphError,
    pebbling::formula::FormulaError,
    StrategyError,
    std::io::Error,
    serde_json::Error
);

type Outcome = Result<u8, Failure>;

/// `println!` that exits quietly when stdout is closed (e.g. piped into `head`).
macro_rules! out {
    (raw $($a:tt)*) => { emit(format_args!($($a)*), false) };
    ($($a:tt)*) => { emit(format_args!($($a)*), true) };
}

fn emit(args: std::fmt::Arguments, newline: bool) {
    let mut o = std::io::stdout().lock();
    let done = std::io::Write::write_fmt(&mut o, args).and_then(|_| {
        if newline {
            std::io::Write::write_all(&mut o, b"\n")
        } else {
            Ok(())
        }
    });
    if done.is_err() {
        std::process::exit(OK as i32);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Construct(a) => construct(a, &cli.run),
        Command::Solve(a) => solve(a, &cli.run),
        Command::PebblingNumber(a) => pebbling_number(a, &cli.run),
        Command::Explain(a) => explain(a, &cli.run),
        Command::Verify(a) => verify(a, &cli.run),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Inconclusive(msg)) => {
            out!("inconclusive: {msg}");
            ExitCode::from(INCONCLUSIVE)
        }
    }
}

impl RunConfig {
    fn sweep(&self) -> SweepOptions {
        SweepOptions {
            budget: Budget {
                max_nodes: self.max_nodes,
                max_time: self.max_time.map(Duration::from_secs_f64),
                per_call_nodes: self.call_nodes,
                max_level_size: self.max_level,
            },
            threads: self.threads,
            ..SweepOptions::default()
        }
    }

    fn limits(&self) -> Limits {
        Limits {
            max_nodes: self.max_nodes.unwrap_or(self.call_nodes),
            deadline: self
                .max_time
                .map(|s| std::time::Instant::now() + Duration::from_secs_f64(s)),
        }
    }
}

/// A graph file, or a family shorthand when no such file exists.
fn load_graph(arg: &str) -> Result<Graph, Failure> {
    let p = Path::new(arg);
    if p.is_file() {
        return Ok(Graph::from_json(&fs::read_to_string(p)?)?);
    }
    match arg.parse::<GraphSpec>() {
        Ok(spec) => Ok(spec.build()?),
        Err(_) => Err(Failure::Usage(format!(
            "`{arg}` is neither a graph file nor a family shorthand"
        ))),
    }
}

/// A distribution file, inline `{"counts": {...}}`, or inline `{"v2": 10}`.
fn load_distribution(g: &Graph, arg: &str) -> Result<Distribution, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)?
    };
    let json: DistributionJson = match serde_json::from_str(&text) {
        Ok(j) => j,
        Err(_) => DistributionJson {
            counts: serde_json::from_str(&text)?,
        },
    };
    Ok(Distribution::from_json(g, &json)?)
}

fn resolve(g: &Graph, label: &str) -> Result<VertexId, Failure> {
    Ok(g.resolve(label)?)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => out!("{text}"),
    }
    Ok(())
}

fn construct(a: &ConstructArgs, run: &RunConfig) -> Outcome {
    let need_n = || {
        a.n.ok_or_else(|| Failure::Usage("--n is required for this family".into()))
    };
    let need = |v: &Option<String>, flag: &str| {
        v.as_deref()
            .ok_or_else(|| Failure::Usage(format!("--{flag} is required for this family")))
            .and_then(load_graph)
    };
    let g = match a.family {
        Family::Path => path(need_n()?)?,
        Family::Cycle => cycle(need_n()?)?,
        Family::Complete => complete(need_n()?)?,
        Family::MiddleCycle => middle_cycle(need_n()?)?,
        Family::MiddlePath => middle_graph(&path(need_n()?)?)?,
        Family::MPathTrimmed => middle_path_trimmed(need_n()?)?,
        Family::Middle => middle_graph(&need(&a.of, "of")?)?,
        Family::Product => cartesian_product(&need(&a.left, "left")?, &need(&a.right, "right")?)?,
        Family::Delete => {
            let g = need(&a.of, "of")?;
            let labels = a
                .remove
                .iter()
                .map(|l| g.resolve(l).map(|v| g.label(v).clone()))
                .collect::<Result<Vec<VertexLabel>, _>>()?;
            delete_vertices(&g, &labels)?
        }
    };
    if let Some(p) = &a.dot {
        fs::write(p, g.to_dot())?;
    }
    if run.format == Format::Dot {
        write_or_print(a.out.as_deref(), &g.to_dot())?;
    } else {
        write_or_print(a.out.as_deref(), &g.to_json())?;
    }
    if a.out.is_some() {
        eprintln!("{} vertices, {} edges", g.vertex_count(), g.edge_count());
    }
    Ok(OK)
}

fn solve(a: &SolveArgs, run: &RunConfig) -> Outcome {
    let g = load_graph(&a.graph)?;
    let d = load_distribution(&g, &a.distribution)?;
    let target = resolve(&g, &a.target)?;
    if let Some(file) = &a.replay {
        let json: Vec<[String; 2]> = serde_json::from_str(&fs::read_to_string(file)?)?;
        let moves = MoveSequence::from_json(&g, &json)?;
        return Ok(match moves.replay(&g, &d) {
            Ok(end) if end.get(target) >= a.t => {
                out!(
                    "replay ok: {} pebble(s) on {} after {} move(s)",
                    end.get(target),
                    g.label(target),
                    moves.len()
                );
                OK
            }
            Ok(end) => {
                out!(
                    "replay ends with {} pebble(s) on {}, need {}",
                    end.get(target),
                    g.label(target),
                    a.t
                );
                NEGATIVE
            }
            Err(e) => {
                out!("replay invalid: {e}");
                NEGATIVE
            }
        });
    }
    let out = is_solvable_with(&g, &d, target, a.t, run.limits())?;
    let verdict = if out.solvable { "solvable" } else { "unsolvable" };
    match run.format {
        Format::Json => {
            let v = serde_json::json!({
                "verdict": verdict,
                "decided_by": out.decided_by,
                "nodes": out.nodes_explored,
                "witness": out.witness.as_ref().map(|w| w.to_json(&g)),
            });
            out!("{}", serde_json::to_string_pretty(&v)?);
        }
        _ => {
            let moves = out
                .witness
                .as_ref()
                .map_or(String::new(), |w| format!(", {}-move witness", w.len()));
            out!(
                "{verdict}{moves} (decided by {:?}, {} nodes)",
                out.decided_by,
                out.nodes_explored
            );
        }
    }
    if let (Some(file), Some(w)) = (&a.witness, &out.witness) {
        fs::write(file, serde_json::to_string_pretty(&w.to_json(&g))?)?;
    }
    Ok(if out.solvable { OK } else { NEGATIVE })
}

fn pebbling_number(a: &NumberArgs, run: &RunConfig) -> Outcome {
    let g = load_graph(&a.graph)?;
    let targets = a
        .targets
        .iter()
        .map(|l| resolve(&g, l))
        .collect::<Result<Vec<_>, _>>()?;
    let mut opts = run.sweep();
    opts.checkpoint = a.checkpoint.clone();
    let report = t_pebbling_number(&g, a.t, (!targets.is_empty()).then_some(&targets[..]), &opts)?;
    if run.format == Format::Json {
        out!("{}", serde_json::to_string_pretty(&report.to_json(&g))?);
    } else {
        let name = if a.t == 1 {
            "f".to_string()
        } else {
            format!("f_{}", a.t)
        };
        match report.value {
            Some(v) => out!("{name} = {v}"),
            None => out!(
                "{name}: inconclusive ({})",
                report.inconclusive.as_deref().unwrap_or("budget exhausted")
            ),
        }
        if report.targets_restricted {
            let ts: Vec<_> = report.targets.iter().map(|&v| g.label(v).to_string()).collect();
            out!("targets restricted to {}", ts.join(", "));
        }
        if let Some(w) = &report.witness {
            out!(
                "largest unsolvable: {} pebble(s), target {}, {}",
                w.distribution.total(),
                g.label(w.target),
                serde_json::to_string(&w.distribution.to_json(&g))?
            );
        }
        out!("search nodes: {}", report.nodes);
    }
    Ok(if report.value.is_some() { OK } else { INCONCLUSIVE })
}

/// Vertices of a path graph from one end to the other.
fn path_order(g: &Graph) -> Result<Vec<VertexId>, Failure> {
    let not_path = || Failure::Usage("cor2.3 needs a path graph or an explicit --path".into());
    if g.vertex_count() == 1 {
        return Ok(vec![0]);
    }
    if g.edge_count() + 1 != g.vertex_count() || (0..g.vertex_count()).any(|v| g.degree(v) > 2) {
        return Err(not_path());
    }
    let start = (0..g.vertex_count()).find(|&v| g.degree(v) == 1).ok_or_else(not_path)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = g.neighbors(cur).iter().find(|&&x| x != prev) {
        order.push(next);
        prev = cur;
        cur = next;
    }
    Ok(order)
}

fn explain(a: &ExplainArgs, run: &RunConfig) -> Outcome {
    let g = load_graph(&a.graph)?;
    let d = load_distribution(&g, &a.distribution)?;
    let target = resolve(&g, &a.target)?;
    let report: StrategyReport = match a.strategy {
        StrategyName::PathCollect => {
            let order = if a.path.is_empty() {
                path_order(&g)?
            } else {
                a.path.iter().map(|l| resolve(&g, l)).collect::<Result<_, _>>()?
            };
            let k = order
                .iter()
                .position(|&v| v == target)
                .ok_or_else(|| Failure::Usage("target is not on the path".into()))?
                + 1;
            let ctx = PathContext {
                path: order,
                distribution: &d,
                target_index: k,
            };
            collect_on_path(&g, &ctx, a.t)?
        }
        StrategyName::MiddlePath => {
            if a.t != 1 {
                return Err(Failure::Usage("cor2.4 moves a single pebble; use -t 1".into()));
            }
            let n = (g.vertex_count() + 3) / 2;
            middle_path_strategy(&g, n, &d, target)?
        }
        StrategyName::MiddleCycle => {
            let layout = MiddleCycleLayout::detect(&g)?;
            run_middle_cycle(&g, &layout, &d, target, a.t, &CycleOptions::default())?
        }
        StrategyName::Product => {
            if a.t != 1 {
                return Err(Failure::Usage("thm2.8 moves a single pebble; use -t 1".into()));
            }
            product_collection_strategy(&g, &d, target)?
        }
        StrategyName::Greedy => greedy_solver(&g, &d, target, a.t)?,
    };
    if run.format == Format::Json {
        out!("{}", serde_json::to_string_pretty(&report.to_json(&g))?);
    } else {
        out!(raw "{}", report.narrate(&g));
    }
    Ok(if report.succeeded { OK } else { NEGATIVE })
}

/// `5`, `5..30` (inclusive) or `5..=30`.
fn parse_range(s: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::Usage(format!("bad range `{s}`"));
    let num = |x: &str| x.trim().parse::<u32>().map_err(|_| bad());
    match s.split_once("..") {
        None => Ok(vec![num(s)?]),
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
            if lo > hi {
                return Err(bad());
            }
            Ok((lo..=hi).collect())
        }
    }
}

fn points(id: ClaimId, a: &VerifyArgs) -> Result<Vec<Params>, Failure> {
    let wants = |p: &str| id.info().params.contains(&p);
    let axis = |name: &str, arg: &Option<String>, default: Option<u32>| -> Result<Vec<Option<u32>>, Failure> {
        if !wants(name) {
            return Ok(vec![None]);
        }
        match (arg, default) {
            (Some(s), _) => Ok(parse_range(s)?.into_iter().map(Some).collect()),
            (None, Some(d)) => Ok(vec![Some(d)]),
            (None, None) => Err(Failure::Usage(format!("{id} needs --{name}"))),
        }
    };
    let mut out = Vec::new();
    for n in axis("n", &a.n, None)? {
        for m in axis("m", &a.m, None)? {
            for t in axis("t", &a.t, Some(1))? {
                out.push(Params { n, m, t });
            }
        }
    }
    Ok(out)
}

fn verify(a: &VerifyArgs, run: &RunConfig) -> Outcome {
    let id: ClaimId = a.claim.parse()?;
    let opts = run.sweep();
    let records: Vec<ClaimRecord> = if id == ClaimId::Graham {
        let (Some(l), Some(r)) = (&a.left, &a.right) else {
            return Err(Failure::Usage("graham needs --left and --right".into()));
        };
        let report = check_graham(&load_graph(l)?, &load_graph(r)?, &opts)?;
        vec![report.record(l, r)]
    } else {
        check_claim(id, &points(id, a)?, &opts)?
    };
    let ledger = ClaimLedger { records };
    if !a.no_ledger {
        ledger.append_to(&a.ledger)?;
    }
    match run.format {
        Format::Json => {
            for r in &ledger.records {
                out!("{}", serde_json::to_string(r)?);
            }
        }
        Format::Csv => {
            ledger
                .write_csv(std::io::stdout())
                .map_err(|e| Failure::Usage(e.to_string()))?;
        }
        _ => out!(raw "{}", table(&ledger.records)),
    }
    let any = |s: Status| ledger.records.iter().any(|r| r.status == s);
    Ok(if any(Status::Refuted) {
        NEGATIVE
    } else if any(Status::Inconclusive) {
        INCONCLUSIVE
    } else {
        OK
    })
}

fn table(records: &[ClaimRecord]) -> String {
    let rows: Vec<[String; 5]> = records
        .iter()
        .map(|r| {
            let params = match &r.params {
                serde_json::Value::Object(map) => map
                    .iter()
                    .map(|(k, v)| format!("{k}={}", v.as_str().map_or(v.to_string(), str::to_string)))
                    .collect::<Vec<_>>()
                    .join(" "),
                other => other.to_string(),
            };
            [
                r.claim.clone(),
                params,
                r.status.to_string(),
                r.expected.clone(),
                r.observed.clone().unwrap_or_else(|| "-".into()),
            ]
        })
        .collect();
    let head = ["claim", "params", "status", "expected", "observed"];
    let mut width = head.map(str::len);
    for row in &rows {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let parts: Vec<_> = cells.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
    };
    line(&head);
    for row in &rows {
        line(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    for r in records.iter().filter(|r| r.note.is_some()) {
        writeln!(out, "note ({}): {}", r.claim, r.note.as_deref().unwrap()).unwrap();
    }
    out
}
