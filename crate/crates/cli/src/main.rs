//! `tgx`: command-line front end for tgx-core.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or input
//! errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tgx_core::baselines::caw::{caw_encode_event, render_walks};
use tgx_core::expressiveness::{
    corpus_build, corpus_catalog, corpus_verify, distinguish_events, distinguish_nodes,
    simple_cycle_count, static_properties, Model, StaticProps, Verdict,
};
use tgx_core::pint::{MemoryKind, Mode, PintConfig, PintEngine};
use tgx_core::posfeat::{normalize_l1, PosStore};
use tgx_core::twl::{twl_compare, TwlReport};
use tgx_core::{
    build_monotone_tct, build_tct, ctdg_to_dtdg, dtdg_to_ctdg, exhaustive_injectivity,
    feature_states, load_events, load_snapshots, save_events, tct_canonical, NodeId,
    TemporalGraph, TgxError, Timestamp,
};

#[derive(Parser)]
#[command(name = "tgx", version, about = "Expressiveness tooling for temporal graph networks")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for numeric parameter sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Temporal WL test on two event files.
    Wl {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        time: Option<Timestamp>,
    },
    /// Dump the temporal computation tree of a node.
    Tct {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        node: NodeId,
        #[arg(long)]
        time: Option<Timestamp>,
        /// Tree depth; ignored with --monotone.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long)]
        monotone: bool,
    },
    /// Relative positional features as `i u k1,...,kd` lines.
    Posfeat {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        time: Option<Timestamp>,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, value_enum)]
        normalize: Option<Normalize>,
    },
    /// PINT embedding of an edge or node.
    Embed {
        #[arg(long)]
        graph: PathBuf,
        /// Edge query `u,v,t`.
        #[arg(long, conflicts_with = "node", required_unless_present = "node")]
        edge: Option<String>,
        /// Node query `v,t`.
        #[arg(long)]
        node: Option<String>,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Anonymized causal walks of an event.
    Caw {
        #[arg(long)]
        graph: PathBuf,
        /// Event `u,v,t`.
        #[arg(long)]
        event: String,
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
    /// Ask one model whether two nodes or two events can be told apart.
    Distinguish {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        model: ModelKind,
        /// Node pair `u,v`; needs --time.
        #[arg(long, conflicts_with_all = ["a", "b"])]
        nodes: Option<String>,
        #[arg(long)]
        time: Option<Timestamp>,
        /// First event `u,v,t`.
        #[arg(long, requires = "b")]
        a: Option<String>,
        /// Second event `u,v,t`.
        #[arg(long, requires = "a")]
        b: Option<String>,
        #[command(flatten)]
        params: ModelArgs,
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
    /// Static properties of the projected graph.
    Props {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        time: Option<Timestamp>,
    },
    /// Counterexample corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Exhaustive injectivity check of the slot-sum aggregator.
    InjectivityCheck {
        #[arg(long, default_value_t = 2)]
        features: u64,
        #[arg(long, default_value_t = 2)]
        edge_features: u64,
        #[arg(long, default_value_t = 2)]
        tmax: Timestamp,
        /// Strict bound on multiset size.
        #[arg(long, default_value_t = 4)]
        n: u64,
    },
    /// Convert between snapshot sequences and event streams.
    Convert {
        /// Snapshot file to turn into events.
        #[arg(long, conflicts_with = "ctdg", required_unless_present = "ctdg")]
        dtdg: Option<PathBuf>,
        /// Event file to turn into snapshots.
        #[arg(long)]
        ctdg: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        delta: Timestamp,
        /// Output path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Check every expected verdict.
    Verify {
        #[arg(long = "case")]
        cases: Vec<String>,
    },
    /// List case names.
    List,
    /// Write case graphs as event files named `<case>_<i>.events`.
    Export {
        #[arg(long = "case")]
        cases: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long, default_value_t = 2)]
    layers: usize,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    /// Drop positional features.
    #[arg(long)]
    no_pos: bool,
    #[arg(long, value_enum, default_value_t = MemoryArg::Identity)]
    memory: MemoryArg,
    /// Float arithmetic with seeded parameters instead of interning.
    #[arg(long)]
    numeric: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MemoryArg {
    Identity,
    Injective,
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalize {
    L1,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Twl,
    Mptgn,
    Pint,
    Tgat,
    TgnAtt,
    Caw,
}

impl ModelArgs {
    fn config(&self, seed: u64) -> PintConfig {
        PintConfig {
            layers: self.layers,
            dim: self.dim,
            mode: if self.numeric { Mode::Numeric } else { Mode::Exact },
            use_positional: !self.no_pos,
            memory: match self.memory {
                MemoryArg::Identity => MemoryKind::Identity,
                MemoryArg::Injective => MemoryKind::Injective,
            },
            seed,
            ..PintConfig::default()
        }
    }
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<TgxError> for Failure {
    fn from(e: TgxError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_list<const N: usize>(s: &str, what: &str) -> Result<[u64; N], Failure> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("{what} must be {N} comma-separated integers, got `{s}`")))?;
    parts
        .try_into()
        .map_err(|_| usage(format!("{what} must be {N} comma-separated integers, got `{s}`")))
}

fn node_id(x: u64) -> Result<NodeId, Failure> {
    NodeId::try_from(x).map_err(|_| usage(format!("node id {x} out of range")))
}

fn parse_event(s: &str) -> Result<(NodeId, NodeId, Timestamp), Failure> {
    let [u, v, t] = parse_list::<3>(s, "event")?;
    Ok((node_id(u)?, node_id(v)?, t))
}

fn load(path: &Path) -> Result<TemporalGraph, Failure> {
    load_events(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Defaults to just after the last event, so every event is visible.
fn time_or_end(g: &TemporalGraph, t: Option<Timestamp>) -> Timestamp {
    t.unwrap_or_else(|| g.max_time().map_or(0, |m| m + 1))
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
    } else {
        print!("{}", text());
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Wl { a, b, time } => cmd_wl(cli, a, b, *time),
        Command::Tct { graph, node, time, depth, monotone } => {
            cmd_tct(cli, graph, *node, *time, *depth, *monotone)
        }
        Command::Posfeat { graph, time, dim, normalize } => {
            cmd_posfeat(cli, graph, *time, *dim, *normalize)
        }
        Command::Embed { graph, edge, node, model } => {
            cmd_embed(cli, graph, edge.as_deref(), node.as_deref(), model)
        }
        Command::Caw { graph, event, len } => cmd_caw(cli, graph, event, *len),
        Command::Distinguish { graph, model, nodes, time, a, b, params, len } => {
            cmd_distinguish(cli, graph, *model, nodes.as_deref(), *time, a.as_deref(), b.as_deref(), params, *len)
        }
        Command::Props { graph, time } => cmd_props(cli, graph, *time),
        Command::Corpus { action } => cmd_corpus(cli, action),
        Command::InjectivityCheck { features, edge_features, tmax, n } => {
            cmd_injectivity(cli, *features, *edge_features, *tmax, *n)
        }
        Command::Convert { dtdg, ctdg, delta, out } => {
            cmd_convert(dtdg.as_deref(), ctdg.as_deref(), *delta, out.as_deref())
        }
    }
}

fn cmd_wl(cli: &Cli, a: &Path, b: &Path, time: Option<Timestamp>) -> CmdResult {
    let (ga, gb) = (load(a)?, load(b)?);
    let t = time.unwrap_or_else(|| time_or_end(&ga, None).max(time_or_end(&gb, None)));
    let report: TwlReport = twl_compare(&ga, &gb, t);
    let join = |c: &[usize]| c.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    emit(cli.json, &report, || {
        format!(
            "{:?} at round {}\ncolors a: {}\ncolors b: {}\n",
            report.verdict,
            report.round,
            join(&report.counts_a),
            join(&report.counts_b)
        )
    });
    Ok(())
}

#[derive(Serialize)]
struct TctReport {
    node: NodeId,
    time: Timestamp,
    depth: Option<usize>,
    canonical: String,
    size: usize,
    height: usize,
    dump: Vec<String>,
}

fn cmd_tct(
    cli: &Cli,
    path: &Path,
    node: NodeId,
    time: Option<Timestamp>,
    depth: usize,
    monotone: bool,
) -> CmdResult {
    let g = load(path)?;
    let t = time_or_end(&g, time);
    let states = feature_states(&g);
    let tree = if monotone {
        build_monotone_tct(&g, node, t, &states)?
    } else {
        build_tct(&g, node, t, depth, &states)?
    };
    let dump = tree.dump();
    let report = TctReport {
        node,
        time: t,
        depth: (!monotone).then_some(depth),
        canonical: tct_canonical(&tree).to_string(),
        size: tree.node_count(),
        height: tree.height(),
        dump: dump.lines().map(str::to_string).collect(),
    };
    emit(cli.json, &report, || dump.clone());
    Ok(())
}

#[derive(Serialize)]
struct PosEntry {
    i: NodeId,
    u: NodeId,
    r: Vec<String>,
}

fn cmd_posfeat(
    cli: &Cli,
    path: &Path,
    time: Option<Timestamp>,
    dim: usize,
    normalize: Option<Normalize>,
) -> CmdResult {
    let g = load(path)?;
    let store = PosStore::replay(&g, time_or_end(&g, time), dim)?;
    let entries: Vec<PosEntry> = store
        .nonzero()
        .into_iter()
        .map(|(i, u, r)| {
            let r = match normalize {
                Some(Normalize::L1) => normalize_l1(&r).iter().map(ToString::to_string).collect(),
                None => r.iter().map(u64::to_string).collect(),
            };
            PosEntry { i, u, r }
        })
        .collect();
    emit(cli.json, &entries, || {
        entries.iter().map(|e| format!("{} {} {}\n", e.i, e.u, e.r.join(","))).collect()
    });
    Ok(())
}

#[derive(Serialize)]
struct EmbedReport {
    query: String,
    config: PintConfig,
    embedding: tgx_core::pint::Embedding,
}

fn cmd_embed(cli: &Cli, path: &Path, edge: Option<&str>, node: Option<&str>, args: &ModelArgs) -> CmdResult {
    let g = load(path)?;
    let cfg = args.config(cli.seed);
    let (query, embedding) = match (edge, node) {
        (Some(e), _) => {
            let (u, v, t) = parse_event(e)?;
            let engine = PintEngine::new(&g, t, cfg.clone())?;
            (format!("edge {u},{v} at {t}"), engine.edge_embedding(u, v)?)
        }
        (None, Some(n)) => {
            let [v, t] = parse_list::<2>(n, "node query")?;
            let v = node_id(v)?;
            let engine = PintEngine::new(&g, t, cfg.clone())?;
            (format!("node {v} at {t}"), engine.node_task_embedding(v)?)
        }
        (None, None) => return Err(usage("one of --edge or --node is required")),
    };
    let report = EmbedReport { query, config: cfg, embedding };
    emit(cli.json, &report, || format!("{}\n", report.embedding));
    Ok(())
}

#[derive(Serialize)]
struct CawReport {
    event: (NodeId, NodeId, Timestamp),
    len: usize,
    code: String,
    walks: Vec<String>,
}

fn cmd_caw(cli: &Cli, path: &Path, event: &str, len: usize) -> CmdResult {
    let g = load(path)?;
    let (u, v, t) = parse_event(event)?;
    let text = render_walks(&g, u, v, t, len)?;
    let report = CawReport {
        event: (u, v, t),
        len,
        code: caw_encode_event(&g, u, v, t, len)?.to_string(),
        walks: text.lines().map(str::to_string).collect(),
    };
    emit(cli.json, &report, || text.clone());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_distinguish(
    cli: &Cli,
    path: &Path,
    kind: ModelKind,
    nodes: Option<&str>,
    time: Option<Timestamp>,
    a: Option<&str>,
    b: Option<&str>,
    params: &ModelArgs,
    len: usize,
) -> CmdResult {
    let g = load(path)?;
    let model = match kind {
        ModelKind::Twl => Model::Twl,
        ModelKind::Mptgn => Model::MpTgnInjective {
            layers: params.layers,
            memory: matches!(params.memory, MemoryArg::Injective),
        },
        ModelKind::Pint => Model::Pint(params.config(cli.seed)),
        ModelKind::Tgat => Model::Tgat { layers: params.layers },
        ModelKind::TgnAtt => Model::TgnAtt { layers: params.layers },
        ModelKind::Caw => Model::Caw { len },
    };
    let verdict: Verdict = match (nodes, a, b) {
        (Some(pair), _, _) => {
            let [u, v] = parse_list::<2>(pair, "node pair")?;
            distinguish_nodes(&g, node_id(u)?, node_id(v)?, time_or_end(&g, time), &model)?
        }
        (None, Some(a), Some(b)) => distinguish_events(&g, parse_event(a)?, parse_event(b)?, &model)?,
        _ => return Err(usage("give either --nodes or both --a and --b")),
    };
    emit(cli.json, &verdict, || {
        format!(
            "{:?} by {}\n{}\n",
            verdict.result,
            verdict.model,
            verdict.witness.as_deref().unwrap_or("")
        )
    });
    Ok(())
}

#[derive(Serialize)]
struct PropsReport {
    time: Timestamp,
    #[serde(flatten)]
    props: StaticProps,
    simple_cycles: Option<usize>,
}

fn cmd_props(cli: &Cli, path: &Path, time: Option<Timestamp>) -> CmdResult {
    let g = load(path)?;
    let t = time_or_end(&g, time);
    let report = PropsReport {
        time: t,
        props: static_properties(&g, t),
        // Enumeration is exponential; only offered on small graphs.
        simple_cycles: (g.node_count() <= 12).then(|| simple_cycle_count(&g, t)),
    };
    emit(cli.json, &report, || {
        let cycles = report.simple_cycles.map_or("-".to_string(), |c| c.to_string());
        format!("{} simple_cycles={cycles}\n", report.props)
    });
    Ok(())
}

fn selected_cases(names: &[String]) -> Result<Vec<&str>, Failure> {
    if names.is_empty() {
        return Ok(corpus_catalog().to_vec());
    }
    names
        .iter()
        .map(|n| {
            corpus_catalog()
                .iter()
                .copied()
                .find(|c| c == n)
                .ok_or_else(|| TgxError::UnknownCase(n.clone()).into())
        })
        .collect()
}

fn cmd_corpus(cli: &Cli, action: &CorpusAction) -> CmdResult {
    match action {
        CorpusAction::List => {
            let mut rows = Vec::new();
            for name in corpus_catalog() {
                let case = corpus_build(name)?;
                rows.push((case.name, case.description));
            }
            emit(cli.json, &rows, || rows.iter().map(|(n, d)| format!("{n}\t{d}\n")).collect());
            Ok(())
        }
        CorpusAction::Export { cases, out } => {
            fs::create_dir_all(out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
            for name in selected_cases(cases)? {
                let case = corpus_build(name)?;
                for (i, g) in case.graphs.iter().enumerate() {
                    let path = out.join(format!("{name}_{i}.events"));
                    save_events(g, &path)?;
                    println!("{}", path.display());
                }
            }
            Ok(())
        }
        CorpusAction::Verify { cases } => {
            let built = selected_cases(cases)?
                .into_iter()
                .map(corpus_build)
                .collect::<Result<Vec<_>, _>>()?;
            let report = corpus_verify(&built);
            emit(cli.json, &report, || {
                let mut out = String::new();
                for case in &report.cases {
                    let mark = if case.passed { "PASS" } else { "FAIL" };
                    out.push_str(&format!("[{mark}] {}\n", case.name));
                    for c in &case.checks {
                        let mark = if c.passed { "ok  " } else { "FAIL" };
                        out.push_str(&format!("  {mark} {} ({})\n", c.check, c.detail));
                    }
                }
                let failed = report.cases.iter().filter(|c| !c.passed).count();
                out.push_str(&format!("{} cases, {failed} failed\n", report.cases.len()));
                out
            });
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn cmd_injectivity(cli: &Cli, features: u64, edge_features: u64, tmax: Timestamp, n: u64) -> CmdResult {
    let report = exhaustive_injectivity(features, edge_features, tmax, n)?;
    emit(cli.json, &report, || {
        format!(
            "{} multisets, {} pairs compared, {} collisions\n",
            report.multisets, report.comparisons, report.collisions
        )
    });
    if report.collisions == 0 {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn write_out(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_convert(dtdg: Option<&Path>, ctdg: Option<&Path>, delta: Timestamp, out: Option<&Path>) -> CmdResult {
    match (dtdg, ctdg) {
        (Some(path), None) => {
            let seq = load_snapshots(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            write_out(out, &dtdg_to_ctdg(&seq, delta)?.to_events_string())
        }
        (None, Some(path)) => {
            let g = load(path)?;
            write_out(out, &ctdg_to_dtdg(&g, delta)?.to_snapshots_string())
        }
        _ => Err(usage("give exactly one of --dtdg or --ctdg")),
    }
}
