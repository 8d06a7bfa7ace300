//! `ash` — command-line analysis of attributed stream hypergraphs.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Every data error
//! prints a single `error: ...` line to stderr.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ash_core::inference::{build_ash, InferenceMethod, InferenceOptions};
use ash_core::io::{self, PlotRow};
use ash_core::measures::{self, MeasureKind, TieRule};
use ash_core::s_analysis::{self, Objective, WalkQuery};
use ash_core::transforms;
use ash_core::AshError;

#[derive(Parser)]
#[command(
    name = "ash",
    version,
    about = "Attributed stream hypergraph analysis",
    long_about = "Build, slice, measure and traverse attributed stream hypergraphs.\n\
                  Hypergraphs live in ash-1 JSON documents; analysis output is\n\
                  plot-ready CSV (or JSON when --out ends in .json)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a hypergraph document from a dyadic interaction stream.
    Ingest(IngestArgs),
    /// Counts, contributions and the hyperedge size distribution.
    Stats(StatsArgs),
    /// Restrict a document to an instant window.
    Slice(SliceArgs),
    /// Mixing-pattern measures as plot-ready series.
    Measure(MeasureArgs),
    /// Time-respecting s-walk queries and walk-metric tables.
    Paths(PathsArgs),
    /// Bipartite, dual, clique-expansion and s-line views.
    Transform(TransformArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Interaction CSV with header `u,v,ts`.
    #[arg(long)]
    interactions: PathBuf,
    /// Optional profile CSV with header `node,attribute,start,end,value`.
    #[arg(long)]
    profiles: Option<PathBuf>,
    /// Aggregation window width in seconds.
    #[arg(long)]
    window_seconds: i64,
    /// Window origin timestamp; defaults to the earliest interaction.
    #[arg(long)]
    origin: Option<i64>,
    /// Hyperedge inference method.
    #[arg(long, value_enum, default_value_t = MethodArg::Promote)]
    method: MethodArg,
    /// Smallest clique size eligible for promotion.
    #[arg(long, default_value_t = 2)]
    min_size: usize,
    /// Output document path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum MethodArg {
    Promote,
    Maximal,
}

#[derive(Args)]
struct StatsArgs {
    /// Input ash-1 JSON document.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SliceArgs {
    #[arg(long)]
    input: PathBuf,
    /// Instant window `LO:HI`.
    #[arg(long, value_parser = parse_window)]
    window: (i64, i64),
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum MeasureArg {
    Purity,
    Entropy,
    StarHomogeneity,
    Consistency,
    EgoHomogeneity,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    measure: MeasureArg,
    /// Attribute to measure against.
    #[arg(long)]
    attribute: String,
    /// Emit one series per attribute class instead of a single series.
    #[arg(long)]
    group_by: bool,
    /// Restrict to an instant window `LO:HI`.
    #[arg(long, value_parser = parse_window)]
    window: Option<(i64, i64)>,
    /// Count tied characteristic values as mismatches in star homogeneity.
    #[arg(long)]
    strict_ties: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum ObjectiveArg {
    Shortest,
    Fastest,
    FastestShortest,
    ShortestFastest,
    Foremost,
}

impl From<ObjectiveArg> for Objective {
    fn from(arg: ObjectiveArg) -> Self {
        match arg {
            ObjectiveArg::Shortest => Objective::Shortest,
            ObjectiveArg::Fastest => Objective::Fastest,
            ObjectiveArg::FastestShortest => Objective::FastestShortest,
            ObjectiveArg::ShortestFastest => Objective::ShortestFastest,
            ObjectiveArg::Foremost => Objective::Foremost,
        }
    }
}

#[derive(Args)]
struct PathsArgs {
    #[arg(long)]
    input: PathBuf,
    /// Minimum walk width.
    #[arg(long)]
    s: usize,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Shortest)]
    objective: ObjectiveArg,
    /// Source hyperedge id (e.g. `e0`). Without --to, a metrics table over
    /// all targets is produced.
    #[arg(long)]
    from: Option<String>,
    /// Target hyperedge id; requires --from.
    #[arg(long, requires = "from")]
    to: Option<String>,
    /// Maximum gap between consecutive step instants.
    #[arg(long)]
    delta: Option<i64>,
    #[arg(long, value_parser = parse_window)]
    window: Option<(i64, i64)>,
    /// Upper bound on walk length.
    #[arg(long)]
    max_length: Option<usize>,
    /// Forbid revisiting a hyperedge.
    #[arg(long)]
    simple: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum TransformKind {
    Bipartite,
    Dual,
    CliqueExpansion,
    SLine,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    kind: TransformKind,
    /// Width for the s-line graph.
    #[arg(long, default_value_t = 1)]
    s: usize,
    /// Restrict to hyperedges active at this instant; flattened otherwise.
    #[arg(long)]
    at: Option<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_window(text: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got \"{text}\""))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("invalid instant \"{lo}\""))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("invalid instant \"{hi}\""))?;
    Ok((lo, hi))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version render on stdout and exit cleanly; anything
            // else is a usage error.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> Result<(), AshError> {
    match cli.command {
        Command::Ingest(args) => ingest(args),
        Command::Stats(args) => stats(args),
        Command::Slice(args) => slice(args),
        Command::Measure(args) => measure(args),
        Command::Paths(args) => paths(args),
        Command::Transform(args) => transform(args),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), AshError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json_out(out: Option<&PathBuf>) -> bool {
    out.is_some_and(|p| p.extension().is_some_and(|e| e == "json"))
}

fn emit_rows(out: Option<&PathBuf>, rows: &[PlotRow]) -> Result<(), AshError> {
    if json_out(out) {
        let body: Vec<_> = rows
            .iter()
            .map(|r| json!({"t": r.t, "group": r.group, "value": r.value}))
            .collect();
        emit(out, &format!("{:#}\n", json!(body)))
    } else {
        emit(out, &io::plot_csv_string(rows))
    }
}

fn clique_cap_from_env() -> Result<Option<usize>, AshError> {
    match std::env::var("ASH_CLIQUE_CAP") {
        Ok(raw) => raw
            .parse::<usize>()
            .map(Some)
            .map_err(|_| AshError::InvalidArgument(format!("invalid ASH_CLIQUE_CAP \"{raw}\""))),
        Err(_) => Ok(None),
    }
}

fn ingest(args: IngestArgs) -> Result<(), AshError> {
    let stream = io::read_interactions_csv(&args.interactions)?;
    if stream.is_empty() {
        return Err(AshError::EmptyStream);
    }
    let profiles = match &args.profiles {
        Some(path) => io::read_profiles_csv(path)?,
        None => Vec::new(),
    };
    let origin = args
        .origin
        .unwrap_or_else(|| stream.iter().map(|i| i.ts).min().expect("non-empty stream"));
    let spec = ash_core::inference::WindowSpec::new(args.window_seconds, origin)?;
    let method = match args.method {
        MethodArg::Promote => InferenceMethod::PromoteCliques,
        MethodArg::Maximal => InferenceMethod::MaximalCliques,
    };
    let options = InferenceOptions {
        min_size: args.min_size,
        clique_cap: clique_cap_from_env()?,
    };
    let (ash, warnings) = build_ash(&stream, &spec, method, &profiles, &options)?;
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
    emit(args.out.as_ref(), &io::ash_to_json_string(&ash))
}

fn stats(args: StatsArgs) -> Result<(), AshError> {
    let ash = io::read_ash_json(&args.input)?;
    let axis = ash.axis();
    let mut size_distribution: BTreeMap<String, usize> = BTreeMap::new();
    for edge in ash.hyperedges() {
        *size_distribution
            .entry(edge.size().to_string())
            .or_insert(0) += 1;
    }
    let node_contribution: BTreeMap<String, f64> = ash
        .node_ids()
        .map(|u| Ok((u.to_string(), ash.node_contribution(u)?)))
        .collect::<Result<_, AshError>>()?;
    let hyperedge_contribution: BTreeMap<String, f64> = ash
        .hyperedges()
        .map(|e| Ok((e.id().to_string(), ash.hyperedge_contribution(e.id())?)))
        .collect::<Result<_, AshError>>()?;
    let body = json!({
        "time": {"start": axis.start(), "end": axis.end(), "instants": axis.instant_count()},
        "nodes": ash.node_count(),
        "hyperedges": ash.edge_count(),
        "temporal_nodes": ash.temporal_node_count(),
        "is_link_stream": ash.is_link_stream(),
        "attributes": ash.attribute_names().collect::<Vec<_>>(),
        "size_distribution": size_distribution,
        "node_contribution": node_contribution,
        "hyperedge_contribution": hyperedge_contribution,
    });
    emit(args.out.as_ref(), &format!("{body:#}\n"))
}

fn slice(args: SliceArgs) -> Result<(), AshError> {
    let ash = io::read_ash_json(&args.input)?;
    let sliced = ash.slice(args.window.0, args.window.1)?;
    emit(args.out.as_ref(), &io::ash_to_json_string(&sliced))
}

fn measure(args: MeasureArgs) -> Result<(), AshError> {
    let ash = io::read_ash_json(&args.input)?;
    let attribute = args.attribute.as_str();
    let rule = if args.strict_ties {
        TieRule::Strict
    } else {
        TieRule::Inclusive
    };
    let rows = match args.measure {
        MeasureArg::Purity | MeasureArg::Entropy | MeasureArg::StarHomogeneity => {
            let kind = match args.measure {
                MeasureArg::Purity => MeasureKind::AvgPurity,
                MeasureArg::Entropy => MeasureKind::AvgEntropy,
                _ => MeasureKind::AvgStarHomogeneity,
            };
            let groups: Vec<Option<String>> = if args.group_by {
                let domain = ash
                    .attribute_domain(attribute)
                    .ok_or_else(|| AshError::UnknownAttribute(attribute.to_string()))?;
                domain.iter().cloned().map(Some).collect()
            } else {
                vec![None]
            };
            let mut rows = Vec::new();
            for group in groups {
                let series = measures::measure_timeseries_with(
                    &ash,
                    kind,
                    attribute,
                    group.as_deref(),
                    args.window,
                    rule,
                )?;
                let label = group.unwrap_or_else(|| "all".to_string());
                rows.extend(
                    series
                        .into_iter()
                        .map(|(t, v)| PlotRow::new(t, label.clone(), v)),
                );
            }
            rows
        }
        MeasureArg::Consistency => {
            let view = match args.window {
                Some((lo, hi)) => ash.slice(lo, hi)?,
                None => ash,
            };
            let t0 = view.axis().start();
            let mut rows = Vec::new();
            for u in view.node_ids() {
                match view.node_consistency(u, attribute) {
                    Ok(value) => rows.push(PlotRow::new(t0, u.to_string(), value)),
                    Err(AshError::UndefinedMeasure(_)) => continue,
                    Err(other) => return Err(other),
                }
            }
            rows
        }
        MeasureArg::EgoHomogeneity => {
            let axis = ash.axis();
            let (lo, hi) = args.window.unwrap_or((axis.start(), axis.end()));
            axis.check_interval(lo, hi)?;
            let mut rows = Vec::new();
            for t in lo..=hi {
                let graph = transforms::clique_expansion(&ash, Some(t))?;
                for u in graph.nodes() {
                    match measures::pairwise_ego_homogeneity(&ash, &graph, t, u, attribute) {
                        Ok(value) => rows.push(PlotRow::new(t, u.to_string(), value)),
                        Err(AshError::UndefinedMeasure(_)) => continue,
                        Err(other) => return Err(other),
                    }
                }
            }
            rows
        }
    };
    emit_rows(args.out.as_ref(), &rows)
}

fn paths(args: PathsArgs) -> Result<(), AshError> {
    let ash = io::read_ash_json(&args.input)?;
    match (&args.from, &args.to) {
        (Some(from), Some(to)) => {
            let mut query = WalkQuery::new(
                ash.resolve_edge(from)?,
                ash.resolve_edge(to)?,
                args.s,
                args.objective.into(),
            );
            query.window = args.window;
            query.max_gap = args.delta;
            query.max_length = args.max_length;
            query.simple = args.simple;
            match s_analysis::time_respecting_s_walk(&ash, &query)? {
                Some(walk) => {
                    let steps: Vec<_> = walk
                        .steps()
                        .iter()
                        .map(|&(t, e)| json!({"t": t, "edge": e.to_string()}))
                        .collect();
                    let body = json!({
                        "found": true,
                        "length": walk.length(),
                        "width": walk.width(&ash)?,
                        "start": walk.start(),
                        "arrival": walk.arrival(),
                        "duration": walk.duration(),
                        "steps": steps,
                    });
                    emit(args.out.as_ref(), &format!("{body:#}\n"))
                }
                None => emit(args.out.as_ref(), "unreachable\n"),
            }
        }
        (from, None) => {
            let sources: Option<Vec<_>> = match from {
                Some(id) => Some(vec![ash.resolve_edge(id)?]),
                None => None,
            };
            let rows = s_analysis::walk_metrics(&ash, sources.as_deref(), args.s, args.window)?;
            if json_out(args.out.as_ref()) {
                let body: Vec<_> = rows
                    .iter()
                    .map(|r| {
                        json!({
                            "source": r.source.to_string(),
                            "target": r.target.to_string(),
                            "length": r.length,
                            "duration": r.duration,
                            "arrival": r.arrival,
                        })
                    })
                    .collect();
                emit(args.out.as_ref(), &format!("{:#}\n", json!(body)))
            } else {
                // Plot rows: one per reachable pair, carrying the duration
                // of a shortest walk at its earliest arrival instant.
                let rows: Vec<PlotRow> = rows
                    .iter()
                    .map(|r| {
                        PlotRow::new(
                            r.arrival,
                            format!("{}->{}", r.source, r.target),
                            r.duration as f64,
                        )
                    })
                    .collect();
                emit_rows(args.out.as_ref(), &rows)
            }
        }
        (None, Some(_)) => unreachable!("clap enforces --to requires --from"),
    }
}

fn transform(args: TransformArgs) -> Result<(), AshError> {
    let ash = io::read_ash_json(&args.input)?;
    let pairs: Vec<(String, String)>;
    let json_body;
    match args.kind {
        TransformKind::Bipartite => {
            let view = transforms::bipartite_projection(&ash, args.at)?;
            pairs = view
                .edges
                .iter()
                .map(|&(u, e)| (u.to_string(), e.to_string()))
                .collect();
            json_body = json!({
                "left": view.left.iter().map(|u| u.to_string()).collect::<Vec<_>>(),
                "right": view.right.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "edges": pairs,
            });
        }
        TransformKind::Dual => {
            let dual = transforms::dual(&ash, args.at)?;
            pairs = dual
                .iter()
                .flat_map(|(u, edges)| edges.iter().map(move |e| (u.to_string(), e.to_string())))
                .collect();
            json_body = json!(dual
                .iter()
                .map(|(u, edges)| {
                    (
                        u.to_string(),
                        edges.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    )
                })
                .collect::<BTreeMap<_, _>>());
        }
        TransformKind::CliqueExpansion => {
            let graph = transforms::clique_expansion(&ash, args.at)?;
            pairs = graph
                .edges()
                .map(|(u, v)| (u.to_string(), v.to_string()))
                .collect();
            json_body = json!({
                "nodes": graph.nodes().map(|u| u.to_string()).collect::<Vec<_>>(),
                "edges": pairs,
            });
        }
        TransformKind::SLine => {
            let graph = s_analysis::s_line_graph(&ash, args.s, args.at)?;
            pairs = graph
                .edges()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect();
            json_body = json!({
                "nodes": graph.nodes().map(|e| e.to_string()).collect::<Vec<_>>(),
                "edges": pairs,
            });
        }
    }
    if json_out(args.out.as_ref()) {
        emit(args.out.as_ref(), &format!("{json_body:#}\n"))
    } else {
        emit(args.out.as_ref(), &io::edges_csv_string(&pairs))
    }
}
