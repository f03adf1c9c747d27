//! Command-line driver. [`run`] takes its streams as arguments so tests can
//! drive it in-process.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::{generate, with_random_weights, GraphKind};
use crate::harness::{
    audit_first_level, decomposition_stretch_profile, expected_stretch_mc, stretch_report, trial_seed, AuditReport,
    StretchReport,
};
use crate::hierarchy::{build_low_stretch_forest, build_low_stretch_tree};
use crate::io::{format_edges, parse_graph, serialize_graph, Format, ParsedGraph};
use crate::report::{GraphSummary, Report, TraceSummary};
use crate::schedule::{Mode, Params, Schedule, PAPER_C};
use crate::tree::SpanningTree;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_AUDIT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "lstree", version, about = "Low-stretch spanning trees from hierarchical star partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a tree; prints its edges, writes a report with --out.
    Build(BuildArgs),
    /// Per-edge stretch of a built tree, or of a given one with --tree.
    Stretch(StretchArgs),
    /// Monte-Carlo expected stretch over derived seeds.
    Mc(McArgs),
    /// Audit the top-level star partition.
    Audit(AuditArgs),
    /// Per-depth separation profile of one edge.
    Profile(ProfileArgs),
    /// Generate a graph.
    Gen(GenArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Edges,
    Dimacs,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Edges => Format::Edges,
            FormatArg::Dimacs => Format::Dimacs,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Paper,
    Demo,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ScheduleArg {
    Basic,
    Iterated,
    Fixed,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Graph file; stdin when absent or `-`.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "edges")]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct AlgoArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to 2 in demo mode and to the schedule's constant in paper mode.
    #[arg(long)]
    c: Option<f64>,
    /// Defaults to fixed in demo mode and basic in paper mode.
    #[arg(long, value_enum)]
    schedule: Option<ScheduleArg>,
    /// Depth of the iterated schedule.
    #[arg(long)]
    t: Option<u32>,
    /// Constant eps of the fixed schedule.
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Demo-mode base-case radius.
    #[arg(long, default_value_t = 1.0)]
    base_radius: f64,
    #[arg(long, value_enum, default_value = "demo")]
    mode: ModeArg,
    /// Root vertex, as labelled in the input.
    #[arg(long)]
    root: Option<u64>,
    #[arg(long)]
    shuffle: bool,
    #[arg(long)]
    random_root: bool,
    #[arg(long)]
    per_component: bool,
    /// Short-edge contraction constant; 0 disables.
    #[arg(long, default_value_t = 0.0)]
    contract: f64,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    /// Report file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StretchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    /// Edge list of a spanning tree to measure instead of building one.
    #[arg(long)]
    tree: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct McArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    /// With more than one trial, trial i uses the same derived seed as `mc`.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    /// Edge endpoints, as labelled in the input.
    #[arg(long, num_args = 2, value_names = ["U", "V"], required = true)]
    edge: Vec<u64>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum KindArg {
    Path,
    Cycle,
    Grid,
    Torus,
    Complete,
    Gnp,
    RandomConnected,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum)]
    kind: KindArg,
    /// Vertex count, or side length for grid and torus.
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability for gnp.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Extra edges for random-connected.
    #[arg(long, default_value_t = 0)]
    extra: usize,
    /// Draw lengths uniformly from [1, max-weight].
    #[arg(long)]
    weighted: bool,
    #[arg(long, default_value_t = 10.0)]
    max_weight: f64,
    #[arg(long, value_enum, default_value = "edges")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildResult {
    pub trees: usize,
    pub tree_edges: usize,
    pub trace: TraceSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stretch: Option<StretchReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditTrial {
    pub seed: u64,
    /// The whole graph was a base case; nothing to audit.
    pub base_case: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<AuditReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditResult {
    pub passed: bool,
    pub trials: Vec<AuditTrial>,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_graph(&mut self, input: &InputArgs) -> Result<ParsedGraph> {
        let text = match &input.input {
            Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
            _ => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s)?;
                s
            }
        };
        parse_graph(&text, input.format.into())
    }

    fn emit(&mut self, text: &str, out: &Option<PathBuf>) -> Result<()> {
        match out {
            Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
            None => Ok(self.stdout.write_all(text.as_bytes())?),
        }
    }
}

fn params_for(a: &AlgoArgs, n: usize) -> Result<Params> {
    let mut p = match (a.mode, a.schedule.unwrap_or(match a.mode {
        ModeArg::Demo => ScheduleArg::Fixed,
        ModeArg::Paper => ScheduleArg::Basic,
    })) {
        (ModeArg::Paper, ScheduleArg::Iterated) => {
            let mut p = Params::paper_iterated(n)?;
            if let Some(t) = a.t {
                p.schedule = Schedule::Iterated { t };
            }
            p
        }
        (ModeArg::Paper, s) => {
            let mut p = Params::paper_basic();
            if let ScheduleArg::Fixed = s {
                p.schedule = Schedule::Fixed { eps: a.eps };
            }
            p
        }
        (ModeArg::Demo, s) => {
            let mut p = Params::demo(2.0, a.eps);
            p.schedule = match s {
                ScheduleArg::Basic => Schedule::Basic,
                ScheduleArg::Iterated => Schedule::Iterated { t: a.t.unwrap_or(1) },
                ScheduleArg::Fixed => Schedule::Fixed { eps: a.eps },
            };
            p
        }
    };
    if let Some(c) = a.c {
        p.c = c;
    }
    if p.mode == Mode::Paper && a.c.is_none() && matches!(p.schedule, Schedule::Basic) {
        p.c = PAPER_C;
    }
    p.seed = a.seed;
    p.base_radius = a.base_radius;
    p.contraction = a.contract;
    p.shuffle = a.shuffle;
    p.random_root = a.random_root;
    p.per_component = a.per_component;
    p.validate(n)?;
    Ok(p)
}

fn vertex(pg: &ParsedGraph, label: u64) -> Result<usize> {
    pg.vertex_of(label)
        .ok_or_else(|| Error::Precondition(format!("vertex {label} does not occur in the graph")))
}

fn root_of(pg: &ParsedGraph, a: &AlgoArgs) -> Result<Option<usize>> {
    a.root.map(|r| vertex(pg, r)).transpose()
}

fn tree_lines(trees: &[SpanningTree], pg: &ParsedGraph) -> String {
    let edges: Vec<_> = trees.iter().flat_map(|t| t.edges()).collect();
    format_edges(&edges, &pg.labels, pg.graph.is_unit())
}

fn cmd_build(io: &mut Io, a: &BuildArgs) -> Result<i32> {
    let pg = io.read_graph(&a.input)?;
    let params = params_for(&a.algo, pg.graph.vertex_count())?;
    let root = root_of(&pg, &a.algo)?;
    let (trees, trace, stretch) = if params.per_component {
        let (trees, trace) = build_low_stretch_forest(&pg.graph, root, &params)?;
        (trees, trace, None)
    } else {
        let (t, trace) = build_low_stretch_tree(&pg.graph, root, &params)?;
        let sr = stretch_report(&pg.graph, &t)?;
        (vec![t], trace, Some(sr))
    };
    io.stdout.write_all(tree_lines(&trees, &pg).as_bytes())?;
    if let Some(out) = &a.out {
        let result = BuildResult {
            trees: trees.len(),
            tree_edges: trees.iter().map(|t| t.edge_count()).sum(),
            trace: TraceSummary::from(&trace),
            stretch,
        };
        let r = Report::new("build", GraphSummary::new(&pg.graph, &pg.labels), Some(params), result);
        io.emit(&r.to_json()?, &Some(out.clone()))?;
    }
    Ok(EXIT_OK)
}

fn read_tree(path: &PathBuf, pg: &ParsedGraph, root: Option<usize>) -> Result<SpanningTree> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let tp = parse_graph(&text, Format::Edges)?;
    let mut edges = Vec::new();
    for (u, v, _) in tp.graph.edges() {
        let (a, b) = (vertex(pg, tp.label(u))?, vertex(pg, tp.label(v))?);
        let len = pg.graph.edge_length(a, b).ok_or_else(|| {
            Error::Precondition(format!("tree edge ({}, {}) is not a graph edge", tp.label(u), tp.label(v)))
        })?;
        edges.push((a, b, len));
    }
    let t = SpanningTree::from_edges(pg.graph.vertex_count(), root.unwrap_or(0), &edges)?;
    if t.vertex_count() != pg.graph.vertex_count() {
        return Err(Error::Precondition("tree does not span the graph".into()));
    }
    Ok(t)
}

fn cmd_stretch(io: &mut Io, a: &StretchArgs) -> Result<i32> {
    let pg = io.read_graph(&a.input)?;
    let params = params_for(&a.algo, pg.graph.vertex_count())?;
    let root = root_of(&pg, &a.algo)?;
    let t = match &a.tree {
        Some(p) => read_tree(p, &pg, root)?,
        None => build_low_stretch_tree(&pg.graph, root, &params)?.0,
    };
    let sr = stretch_report(&pg.graph, &t)?;
    let params = a.tree.is_none().then_some(params);
    let r = Report::new("stretch", GraphSummary::new(&pg.graph, &pg.labels), params, sr);
    io.emit(&r.to_json()?, &a.out)?;
    Ok(EXIT_OK)
}

fn cmd_mc(io: &mut Io, a: &McArgs) -> Result<i32> {
    let pg = io.read_graph(&a.input)?;
    let params = params_for(&a.algo, pg.graph.vertex_count())?;
    if a.algo.root.is_some() {
        return Err(Error::Params("mc draws its own roots; --root is not supported".into()));
    }
    let est = expected_stretch_mc(&pg.graph, &params, a.trials, params.seed)?;
    let r = Report::new("mc", GraphSummary::new(&pg.graph, &pg.labels), Some(params), est);
    io.emit(&r.to_json()?, &a.out)?;
    Ok(EXIT_OK)
}

fn cmd_audit(io: &mut Io, a: &AuditArgs) -> Result<i32> {
    let pg = io.read_graph(&a.input)?;
    let params = params_for(&a.algo, pg.graph.vertex_count())?;
    let root = root_of(&pg, &a.algo)?;
    if a.trials == 0 {
        return Err(Error::Params("audit needs at least one trial".into()));
    }
    let mut trials = Vec::new();
    for i in 0..a.trials {
        let seed = if a.trials == 1 { params.seed } else { trial_seed(params.seed, i) };
        let p = Params { seed, ..params.clone() };
        let report = audit_first_level(&pg.graph, root, &p)?;
        trials.push(AuditTrial {
            seed,
            base_case: report.is_none(),
            report,
        });
    }
    let passed = trials.iter().all(|t| t.report.as_ref().map_or(true, AuditReport::passed));
    let r = Report::new(
        "audit",
        GraphSummary::new(&pg.graph, &pg.labels),
        Some(params),
        AuditResult { passed, trials },
    );
    io.emit(&r.to_json()?, &a.out)?;
    Ok(if passed { EXIT_OK } else { EXIT_AUDIT })
}

fn cmd_profile(io: &mut Io, a: &ProfileArgs) -> Result<i32> {
    let pg = io.read_graph(&a.input)?;
    let params = params_for(&a.algo, pg.graph.vertex_count())?;
    let edge = (vertex(&pg, a.edge[0])?, vertex(&pg, a.edge[1])?);
    let prof = decomposition_stretch_profile(&pg.graph, edge, &params, a.trials, params.seed)?;
    let r = Report::new("profile", GraphSummary::new(&pg.graph, &pg.labels), Some(params), prof);
    io.emit(&r.to_json()?, &a.out)?;
    Ok(EXIT_OK)
}

fn cmd_gen(io: &mut Io, a: &GenArgs) -> Result<i32> {
    let kind = match a.kind {
        KindArg::Path => GraphKind::Path,
        KindArg::Cycle => GraphKind::Cycle,
        KindArg::Grid => GraphKind::Grid,
        KindArg::Torus => GraphKind::Torus,
        KindArg::Complete => GraphKind::Complete,
        KindArg::Gnp => GraphKind::Gnp { p: a.p },
        KindArg::RandomConnected => GraphKind::RandomConnected { extra: a.extra },
    };
    let mut g = generate(kind, a.size, a.seed)?;
    if a.weighted {
        g = with_random_weights(&g, 1.0, a.max_weight, a.seed)?;
    }
    io.emit(&serialize_graph(&g, a.format.into()), &a.out)?;
    Ok(EXIT_OK)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_INPUT
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let mut io = Io { stdin, stdout };
    let res = match &cli.command {
        Command::Build(a) => cmd_build(&mut io, a),
        Command::Stretch(a) => cmd_stretch(&mut io, a),
        Command::Mc(a) => cmd_mc(&mut io, a),
        Command::Audit(a) => cmd_audit(&mut io, a),
        Command::Profile(a) => cmd_profile(&mut io, a),
        Command::Gen(a) => cmd_gen(&mut io, a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}
