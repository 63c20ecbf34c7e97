use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use crossnum::io;
use crossnum::source::{GenSpec, GraphSource};
use crossnum::suite::{self, CheckKind, Format, SuiteConfig};
use crossnum_core::bisection::{self, Bisection, DEFAULT_EXACT_CAP};
use crossnum_core::bounds;
use crossnum_core::crossing::{self, SearchOptions};
use crossnum_core::decomposition::{self, BisectorPolicy, DecompositionTrace};
use crossnum_core::drawing::Drawing;
use crossnum_core::generators::Classic;
use crossnum_core::planarity;
use crossnum_core::Graph;
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "crossnum", version, about = "Crossing numbers, bisection width and graph decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph as an edge list.
    Gen(GenArgs),
    /// Exact crossing number.
    Cr {
        #[command(subcommand)]
        mode: CrMode,
    },
    /// Bisection width.
    Bisect {
        #[arg(value_enum)]
        mode: BisectMode,
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
        cap: usize,
    },
    /// Closed-form crossing-number lower bounds.
    Bounds {
        file: PathBuf,
        #[arg(long = "A")]
        a: f64,
        #[arg(long)]
        alpha: f64,
        /// Cycle parameter for the even-cycle bounds.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Split high-degree vertices and run the bisection decomposition.
    Decompose {
        file: PathBuf,
        #[arg(long = "A")]
        a: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Policy::Exact)]
        policy: Policy,
        #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the trace; printed when omitted.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check one inequality or a saved trace.
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
    /// Run a verification suite from a JSON config.
    Suite {
        config: PathBuf,
        /// Report path; printed when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Planarity test.
    Planar { file: PathBuf },
    /// Crossings of a straight-line drawing.
    Crossings {
        file: PathBuf,
        #[arg(long)]
        coords: PathBuf,
    },
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write coordinates (grid only).
    #[arg(long, global = true)]
    coords: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    Grid { n: usize },
    Kn { n: usize },
    Kst { s: usize, t: usize },
    Cycle { n: usize },
    Path { n: usize },
    Star { k: usize },
    Petersen,
    Random {
        n: usize,
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Blow up the first `edges` edges of a base graph with `K_{s,s}`.
    Blowup {
        base: String,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 3)]
        s: usize,
    },
}

#[derive(Subcommand)]
enum CrMode {
    Exact {
        file: PathBuf,
        #[arg(long = "max-k", default_value_t = 3)]
        max_k: usize,
        #[arg(long, default_value_t = crossing::DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BisectMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Policy {
    Exact,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum VerifyCheck {
    /// Re-run the trace checks on a saved trace.
    Trace {
        trace: PathBuf,
        /// Compute exact crossing numbers for the crossing-budget check.
        #[arg(long = "max-k")]
        max_k: Option<usize>,
    },
    /// Bisection width against crossings and degrees.
    Pss { file: PathBuf },
    Jensen {
        file: PathBuf,
        #[arg(long)]
        t: f64,
    },
    T3 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
    },
    Bs {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Invariants of the high-degree split.
    Split { file: PathBuf },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn load(file: &Path) -> anyhow::Result<Graph> {
    Ok(io::read_edge_list(file)?)
}

fn bisection_json(b: &Bisection) -> serde_json::Value {
    json!({
        "width": b.width,
        "part_one": b.part_one,
        "part_two": b.part_two,
        "exactness": b.exactness,
        "cut_edges": b.cut_edges,
    })
}

/// Returns whether everything checked held.
fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Gen(args) => generate(args).map(|_| true),
        Command::Cr { mode: CrMode::Exact { file, max_k, budget } } => {
            let g = load(&file)?;
            let r = crossing::exact_crossing_number_with(&g, SearchOptions { k_max: max_k, budget })?;
            print_json(&r)?;
            Ok(true)
        }
        Command::Bisect { mode, file, seed, cap } => {
            let g = load(&file)?;
            let b = match mode {
                BisectMode::Exact => bisection::exact_bisection(&g, cap)?,
                BisectMode::Heuristic => bisection::heuristic_bisection(&g, seed)?,
            };
            print_json(&bisection_json(&b))?;
            Ok(true)
        }
        Command::Bounds { file, a, alpha, k } => {
            let g = load(&file)?;
            print_json(&bound_values(&g, a, alpha, k)?)?;
            Ok(true)
        }
        Command::Decompose { file, a, alpha, policy, cap, seed, trace } => {
            let g = load(&file)?;
            let policy = match policy {
                Policy::Exact => BisectorPolicy::ExactOnly { cap },
                Policy::Auto => BisectorPolicy::Auto { cap, seed },
            };
            let t = decomposition::decompose(&g, a, alpha, policy)?;
            match trace {
                Some(path) => {
                    io::write_text(&path, &(serde_json::to_string_pretty(&t)? + "\n"))?;
                    print_json(&json!({
                        "N": t.split.big_n,
                        "k": t.k,
                        "sigma": t.sigma,
                        "final_edge_count": t.final_edge_count,
                        "hypothesis_violation": t.hypothesis_violation,
                    }))?;
                }
                None => print_json(&t)?,
            }
            Ok(true)
        }
        Command::Verify { check } => verify(check),
        Command::Suite { config, out, format, workers } => {
            let mut cfg = SuiteConfig::read(&config)?;
            if let Some(f) = format {
                cfg.format = match f {
                    FormatArg::Json => Format::Json,
                    FormatArg::Csv => Format::Csv,
                };
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let report = suite::run_suite(&cfg)?;
            match out {
                Some(path) => suite::emit_report(&report, cfg.format, &path)?,
                None => emit(&suite::render_report(&report, cfg.format)?)?,
            }
            let s = &report.summary;
            eprintln!("{} records: {} passed, {} failed, {} skipped", s.total, s.passed, s.failed, s.skipped);
            Ok(!report.has_failures())
        }
        Command::Planar { file } => {
            let g = load(&file)?;
            print_json(&json!({ "planar": planarity::is_planar(&g) }))?;
            Ok(true)
        }
        Command::Crossings { file, coords } => {
            let g = load(&file)?;
            let points = io::read_coordinates(&coords, g.vertex_count())?;
            let d = Drawing::new(g, points)?;
            let violations = d.validate()?;
            if !violations.is_empty() {
                print_json(&json!({ "violations": violations }))?;
                return Ok(false);
            }
            print_json(&json!({ "crossings": d.count_crossings()? }))?;
            Ok(true)
        }
    }
}

fn generate(args: GenArgs) -> anyhow::Result<()> {
    let spec = match args.kind {
        GenKind::Grid { n } => GenSpec::Grid(n),
        GenKind::Kn { n } => GenSpec::Classic(Classic::Complete(n)),
        GenKind::Kst { s, t } => GenSpec::Classic(Classic::CompleteBipartite(s, t)),
        GenKind::Cycle { n } => GenSpec::Classic(Classic::Cycle(n)),
        GenKind::Path { n } => GenSpec::Classic(Classic::Path(n)),
        GenKind::Star { k } => GenSpec::Classic(Classic::Star(k)),
        GenKind::Petersen => GenSpec::Classic(Classic::Petersen),
        GenKind::Random { n, p, seed } => GenSpec::Random { n, p, seed: Some(seed) },
        GenKind::Blowup { base, edges, s } => {
            GenSpec::Blowup { base: Box::new(base.parse().with_context(|| format!("base graph {base:?}"))?), edges, s }
        }
    };
    let loaded = spec.build(0)?;
    let text = io::format_edge_list(&loaded.graph);
    match &args.out {
        Some(path) => io::write_text(path, &text)?,
        None => emit(&text)?,
    }
    if let Some(path) = &args.coords {
        let Some(d) = &loaded.drawing else {
            bail!("this generator has no drawing");
        };
        io::write_text(path, &io::format_coordinates(d.coordinates()))?;
    }
    Ok(())
}

fn bound_values(g: &Graph, a: f64, alpha: f64, k: Option<usize>) -> anyhow::Result<serde_json::Value> {
    let (n, e) = (g.vertex_count(), g.edge_count());
    let params = bounds::theorem2_constants(a, alpha)?;
    let mut out = json!({
        "n": n,
        "e": e,
        "params": params,
        "crossing_lemma": bounds::crossing_lemma_lb(n, e)?,
        "theorem2": bounds::theorem2_lb(n, e, &params)?,
    });
    if n >= 3 {
        out["euler"] = serde_json::to_value(bounds::euler_lb(n, e)?)?;
    }
    if n >= 2 {
        out["pst"] = serde_json::to_value(bounds::pst_lb(n, e, alpha, params.c, params.c_prime)?)?;
    }
    if let Some(k) = k {
        out["c2k"] = serde_json::to_value(bounds::corollary_c2k_lb(n, e, k)?)?;
        out["bs_max_edges"] = json!(bounds::bs_max_edges(n.max(1), k)?);
    }
    Ok(out)
}

fn single(file: &Path, check: CheckKind, tweak: impl FnOnce(&mut SuiteConfig)) -> anyhow::Result<bool> {
    let mut cfg = SuiteConfig::new(vec![GraphSource::File { file: file.to_path_buf() }], vec![check]);
    tweak(&mut cfg);
    let report = suite::run_suite(&cfg)?;
    emit(&suite::render_report(&report, Format::Json)?)?;
    Ok(!report.has_failures())
}

fn verify(check: VerifyCheck) -> anyhow::Result<bool> {
    match check {
        VerifyCheck::Trace { trace, max_k } => {
            let text = io::read_text(&trace)?;
            let t: DecompositionTrace =
                serde_json::from_str(&text).with_context(|| format!("{} is not a trace", trace.display()))?;
            let crossings = match max_k {
                Some(k) => decomposition::trace_crossings(&t, k)?,
                None => None,
            };
            let verdict = decomposition::verify_trace(&t, crossings.as_ref());
            print_json(&verdict)?;
            Ok(!verdict.has_failures())
        }
        VerifyCheck::Pss { file } => single(&file, CheckKind::Pss, |_| {}),
        VerifyCheck::Jensen { file, t } => single(&file, CheckKind::Jensen, |c| c.params.jensen_t = vec![t]),
        VerifyCheck::Bs { file, k } => single(&file, CheckKind::Bs, |c| c.params.bs_k = vec![k]),
        VerifyCheck::T3 { n, t } => {
            let mut cfg = SuiteConfig::new(vec![GraphSource::Spec(format!("grid({n})"))], vec![CheckKind::T3]);
            cfg.params.t3_t = vec![t];
            let report = suite::run_suite(&cfg)?;
            emit(&suite::render_report(&report, Format::Json)?)?;
            Ok(!report.has_failures())
        }
        VerifyCheck::Split { file } => {
            let g = load(&file)?;
            let s = decomposition::split_high_degree(&g)?;
            let failures = s.invariant_failures();
            print_json(&json!({
                "n": g.vertex_count(),
                "N": s.split_graph.vertex_count(),
                "d_bar": format!("{}", s.d_bar),
                "failures": failures,
            }))?;
            Ok(failures.is_empty())
        }
    }
}
