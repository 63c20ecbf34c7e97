//! Verification suites over a graph corpus.
//!
//! Every check needs exact data (crossing numbers, bisection widths, cycle
//! detection). When an exact oracle is out of reach for a graph the record is
//! skipped with the reason; nothing is estimated.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use crossnum_core::bisection::{self, Bisection};
use crossnum_core::bounds::{self, BoundValue};
use crossnum_core::crossing::{exact_crossing_number_with, SearchOptions};
use crossnum_core::cycles;
use crossnum_core::decomposition::{self, BisectorPolicy, CheckStatus, DecompositionTrace, TraceCrossings};
use crossnum_core::planarity::is_planar;
use crossnum_core::{Error as CoreError, Graph};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::source::{GraphSource, Loaded};
use crate::{io, LabError, Result};

/// Slack for floating comparisons, relative to `max(1, |rhs|)`.
const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Pss,
    Jensen,
    T3,
    Bs,
    Trace,
    Bounds,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteParams {
    #[serde(rename = "A")]
    pub a: f64,
    pub alpha: f64,
    /// Exponents for the `l_2 <= l_t` check.
    pub jensen_t: Vec<f64>,
    /// Exponents `t > 2` for the grid chain.
    pub t3_t: Vec<f64>,
    /// Cycle parameters `k` (cycle length `2k`).
    pub bs_k: Vec<usize>,
    pub k_max: usize,
    /// Largest vertex count handed to the exhaustive bisector.
    pub exact_cap: usize,
    pub cycle_cap: usize,
    /// Non-planar graphs with more edges skip the exact crossing search.
    pub crossing_edge_limit: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            a: 0.5,
            alpha: 1.0,
            jensen_t: vec![0.5, 1.0, 1.5, 2.0],
            t3_t: vec![2.5, 3.0, 4.0],
            bs_k: vec![2, 3],
            k_max: 3,
            exact_cap: 25,
            cycle_cap: cycles::DEFAULT_CYCLE_CAP,
            crossing_edge_limit: 20,
        }
    }
}

fn default_workers() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub corpus: Vec<GraphSource>,
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub params: SuiteParams,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Record per-check wall time. Off by default: timings make reports
    /// differ between runs.
    #[serde(default)]
    pub timings: bool,
}

impl SuiteConfig {
    pub fn new(corpus: Vec<GraphSource>, checks: Vec<CheckKind>) -> Self {
        SuiteConfig {
            corpus,
            checks,
            params: SuiteParams::default(),
            format: Format::Json,
            seed: 0,
            workers: 1,
            timings: false,
        }
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let cfg: SuiteConfig =
            serde_json::from_str(text).map_err(|error| LabError::Json { origin: origin.to_string(), error })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&io::read_text(path)?, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(LabError::InvalidConfig(m.to_string()));
        let p = &self.params;
        if self.corpus.is_empty() {
            return bad("corpus is empty");
        }
        if self.checks.is_empty() {
            return bad("no checks requested");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if !(p.a > 0.0 && p.a.is_finite() && p.alpha > 0.0 && p.alpha.is_finite()) {
            return bad("A and alpha must be positive");
        }
        if p.jensen_t.iter().any(|&t| !(t > 0.0 && t <= 2.0)) {
            return bad("jensen_t values must lie in (0, 2]");
        }
        if p.t3_t.iter().any(|&t| !(t > 2.0 && t.is_finite())) {
            return bad("t3_t values must exceed 2");
        }
        if p.bs_k.iter().any(|&k| k < 2) {
            return bad("bs_k values must be at least 2");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub graph: String,
    pub n: usize,
    pub e: usize,
    pub check: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub holds: Option<bool>,
    pub micros: Option<u64>,
    pub status: Status,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Skip reasons with their counts.
    pub skip_reasons: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn from_records(records: Vec<Record>) -> Self {
        let mut summary = Summary { total: records.len(), ..Summary::default() };
        for r in &records {
            match r.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Skipped => {
                    summary.skipped += 1;
                    let reason = r.reason.clone().unwrap_or_default();
                    *summary.skip_reasons.entry(reason).or_default() += 1;
                }
            }
        }
        Report { records, summary }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.failed > 0
    }
}

/// Runs every check on every corpus graph. Graphs are processed in parallel
/// on `workers` threads; records come out in corpus order, then check order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| LabError::InvalidConfig(format!("thread pool: {e}")))?;
    let per_graph: Vec<Vec<Record>> = pool.install(|| cfg.corpus.par_iter().map(|src| graph_records(src, cfg)).collect());
    Ok(Report::from_records(per_graph.into_iter().flatten().collect()))
}

/// Outcome of an exact oracle.
#[derive(Clone, Debug)]
enum Oracle<T> {
    Value(T),
    Unavailable(String),
    Failed(String),
}

struct Ctx<'a> {
    name: String,
    loaded: Loaded,
    cfg: &'a SuiteConfig,
    cr: OnceCell<Oracle<usize>>,
    bisection: OnceCell<Oracle<Bisection>>,
}

impl Ctx<'_> {
    fn graph(&self) -> &Graph {
        &self.loaded.graph
    }

    fn record(&self, check: impl Into<String>) -> Record {
        Record {
            graph: self.name.clone(),
            n: self.graph().vertex_count(),
            e: self.graph().edge_count(),
            check: check.into(),
            lhs: None,
            rhs: None,
            holds: None,
            micros: None,
            status: Status::Skipped,
            reason: None,
        }
    }

    fn cr(&self) -> &Oracle<usize> {
        self.cr.get_or_init(|| exact_cr(self.graph(), &self.cfg.params))
    }

    fn bisection(&self) -> &Oracle<Bisection> {
        self.bisection.get_or_init(|| exact_width(self.graph(), self.cfg.params.exact_cap))
    }
}

fn exact_cr(g: &Graph, p: &SuiteParams) -> Oracle<usize> {
    if is_planar(g) {
        return Oracle::Value(0);
    }
    if g.edge_count() > p.crossing_edge_limit {
        return Oracle::Unavailable(format!(
            "exact crossing search skipped: {} edges > limit {}",
            g.edge_count(),
            p.crossing_edge_limit
        ));
    }
    match exact_crossing_number_with(g, SearchOptions::new(p.k_max)) {
        Ok(r) => match r.value.exact() {
            Some(v) => Oracle::Value(v),
            None => Oracle::Unavailable(format!("crossing number exceeds k_max = {}", p.k_max)),
        },
        Err(e @ CoreError::SearchBudgetExceeded { .. }) => Oracle::Unavailable(e.to_string()),
        Err(e) => Oracle::Failed(e.to_string()),
    }
}

fn exact_width(g: &Graph, cap: usize) -> Oracle<Bisection> {
    let n = g.vertex_count();
    if n < 2 {
        return Oracle::Unavailable(String::from("bisection undefined for fewer than 2 vertices"));
    }
    if n > cap {
        return Oracle::Unavailable(format!("exact bisection skipped: {n} vertices > cap {cap}"));
    }
    match bisection::exact_bisection(g, cap) {
        Ok(b) => Oracle::Value(b),
        Err(e) => Oracle::Failed(e.to_string()),
    }
}

fn graph_records(src: &GraphSource, cfg: &SuiteConfig) -> Vec<Record> {
    let name = src.to_string();
    let loaded = match src.load(cfg.seed) {
        Ok(l) => l,
        Err(e) => {
            return vec![Record {
                graph: name,
                n: 0,
                e: 0,
                check: String::from("load"),
                lhs: None,
                rhs: None,
                holds: None,
                micros: None,
                status: Status::Fail,
                reason: Some(e.to_string()),
            }]
        }
    };
    let ctx = Ctx { name, loaded, cfg, cr: OnceCell::new(), bisection: OnceCell::new() };
    let mut out = Vec::new();
    for &check in &cfg.checks {
        let start = Instant::now();
        let mut records = match check {
            CheckKind::Pss => vec![pss(&ctx)],
            CheckKind::Jensen => jensen(&ctx),
            CheckKind::T3 => t3(&ctx),
            CheckKind::Bs => bs(&ctx),
            CheckKind::Trace => trace(&ctx),
            CheckKind::Bounds => bound_records(&ctx),
        };
        if cfg.timings {
            let micros = start.elapsed().as_micros() as u64;
            for r in &mut records {
                r.micros = Some(micros);
            }
        }
        out.extend(records);
    }
    out
}

fn compared(mut r: Record, lhs: f64, rhs: f64, holds: bool) -> Record {
    r.lhs = Some(lhs);
    r.rhs = Some(rhs);
    r.holds = Some(holds);
    r.status = if holds { Status::Pass } else { Status::Fail };
    r
}

fn skipped(mut r: Record, reason: impl Into<String>) -> Record {
    r.status = Status::Skipped;
    r.reason = Some(reason.into());
    r
}

fn failed(mut r: Record, reason: impl Into<String>) -> Record {
    r.status = Status::Fail;
    r.reason = Some(reason.into());
    r
}

fn le(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + TOL * rhs.abs().max(1.0)
}

fn pss(ctx: &Ctx) -> Record {
    let r = ctx.record("pss");
    let cr = match ctx.cr() {
        Oracle::Value(v) => *v,
        Oracle::Unavailable(why) => return skipped(r, why.clone()),
        Oracle::Failed(why) => return failed(r, why.clone()),
    };
    let b = match ctx.bisection() {
        Oracle::Value(b) => b,
        Oracle::Unavailable(why) => return skipped(r, why.clone()),
        Oracle::Failed(why) => return failed(r, why.clone()),
    };
    match bisection::pss_check(ctx.graph(), cr, b) {
        Ok(rep) => compared(r, rep.b_value as f64, rep.rhs, rep.holds()),
        Err(e) => failed(r, e.to_string()),
    }
}

fn jensen(ctx: &Ctx) -> Vec<Record> {
    ctx.cfg
        .params
        .jensen_t
        .iter()
        .map(|&t| {
            let r = ctx.record(format!("jensen(t={t})"));
            let norms = bisection::lt_norm(ctx.graph(), 2.0).and_then(|l2| Ok((l2, bisection::lt_norm(ctx.graph(), t)?)));
            match (norms, bisection::jensen_check(ctx.graph(), t)) {
                (Ok((l2, lt)), Ok(holds)) => compared(r, l2, lt, holds),
                (Err(e), _) | (_, Err(e)) => failed(r, e.to_string()),
            }
        })
        .collect()
}

fn t3(ctx: &Ctx) -> Vec<Record> {
    ctx.cfg
        .params
        .t3_t
        .iter()
        .map(|&t| {
            let r = ctx.record(format!("t3(t={t})"));
            let Some(side) = ctx.loaded.grid_side else {
                return skipped(r, "applies to grid(n) only");
            };
            let b = match ctx.bisection() {
                Oracle::Value(b) => b,
                Oracle::Unavailable(why) => return skipped(r, why.clone()),
                Oracle::Failed(why) => return failed(r, why.clone()),
            };
            match bisection::t3_counterexample_check(side, t, b) {
                Ok(rep) => compared(r, rep.max_degree_norm, rep.scaled_width, rep.holds()),
                Err(e) => failed(r, e.to_string()),
            }
        })
        .collect()
}

fn bs(ctx: &Ctx) -> Vec<Record> {
    let cap = ctx.cfg.params.cycle_cap;
    ctx.cfg
        .params
        .bs_k
        .iter()
        .map(|&k| {
            let r = ctx.record(format!("bs(k={k})"));
            let n = ctx.graph().vertex_count();
            if n > cap {
                return skipped(r, format!("exact cycle search skipped: {n} vertices > cap {cap}"));
            }
            match cycles::bs_check(ctx.graph(), k, cap) {
                Ok(rep) if rep.c2k_free => compared(r, rep.e as f64, rep.edge_bound, rep.holds),
                Ok(_) => skipped(r, format!("graph contains a {}-cycle", 2 * k)),
                Err(e) => failed(r, e.to_string()),
            }
        })
        .collect()
}

fn trace(ctx: &Ctx) -> Vec<Record> {
    let p = &ctx.cfg.params;
    if ctx.graph().edge_count() == 0 {
        return vec![skipped(ctx.record("trace"), "decomposition needs at least one edge")];
    }
    let policy = BisectorPolicy::Auto { cap: p.exact_cap, seed: ctx.cfg.seed };
    let t = match decomposition::decompose(ctx.graph(), p.a, p.alpha, policy) {
        Ok(t) => t,
        Err(e) => return vec![failed(ctx.record("trace"), e.to_string())],
    };
    let (crossings, cr_reason) = trace_crossing_values(&t, p);
    let verdict = decomposition::verify_trace(&t, crossings.as_ref());
    let mut out = Vec::new();
    if let Some(h) = &t.hypothesis_violation {
        let r = ctx.record("trace:hypothesis");
        let mut r = skipped(r, "k = 0: e exceeds 2A n^(1+alpha)");
        r.lhs = Some(h.e as f64);
        r.rhs = Some(h.edge_bound);
        out.push(r);
    }
    let split_edges = t.split.split_edges.len();
    for c in verdict.checks {
        let mut r = ctx.record(format!("trace:{}", c.name));
        match c.name.as_str() {
            "e_accounting" => {
                r.lhs = Some(t.sigma as f64);
                r.rhs = Some(split_edges.saturating_sub(t.final_edge_count) as f64);
            }
            "g_edge_halving" => {
                r.lhs = Some(t.final_edge_count as f64);
                r.rhs = Some(t.split.e as f64 / 2.0);
            }
            _ => {}
        }
        r.status = match c.status {
            CheckStatus::Pass => Status::Pass,
            CheckStatus::Fail => Status::Fail,
            CheckStatus::Skipped => Status::Skipped,
        };
        if r.status != Status::Skipped {
            r.holds = Some(r.status == Status::Pass);
        }
        if !c.detail.is_empty() {
            r.reason = Some(c.detail);
        }
        if c.name == "h_crossing_budget" && r.status == Status::Skipped && t.all_exact() {
            if let Some(why) = &cr_reason {
                r.reason = Some(why.clone());
            }
        }
        out.push(r);
    }
    out
}

/// Exact crossing numbers for the trace when every graph involved is within
/// reach of the exact search.
fn trace_crossing_values(t: &DecompositionTrace, p: &SuiteParams) -> (Option<TraceCrossings>, Option<String>) {
    let pairs = t.split.split_edges.iter().map(|e| (e.0, e.1));
    let Ok(gp) = Graph::with_vertex_count(t.split.big_n, pairs) else {
        return (None, Some(String::from("split graph unreadable")));
    };
    match exact_cr(&gp, p) {
        Oracle::Value(_) => {}
        Oracle::Unavailable(why) | Oracle::Failed(why) => return (None, Some(why)),
    }
    match decomposition::trace_crossings(t, p.k_max) {
        Ok(Some(c)) => (Some(c), None),
        Ok(None) => (None, Some(format!("a component's crossing number exceeds k_max = {}", p.k_max))),
        Err(e) => (None, Some(e.to_string())),
    }
}

fn bound_records(ctx: &Ctx) -> Vec<Record> {
    let p = &ctx.cfg.params;
    let g = ctx.graph();
    let (n, e) = (g.vertex_count(), g.edge_count());
    let mut bounds: Vec<(String, std::result::Result<BoundValue, CoreError>)> = vec![
        (String::from("bounds:crossing_lemma"), bounds::crossing_lemma_lb(n, e)),
        (String::from("bounds:euler"), bounds::euler_lb(n, e)),
        (
            String::from("bounds:theorem2"),
            bounds::theorem2_constants(p.a, p.alpha).and_then(|c| bounds::theorem2_lb(n, e, &c)),
        ),
        (
            String::from("bounds:pst"),
            bounds::theorem2_constants(p.a, p.alpha).and_then(|c| bounds::pst_lb(n, e, p.alpha, c.c, c.c_prime)),
        ),
    ];
    for &k in &p.bs_k {
        bounds.push((format!("bounds:c2k(k={k})"), bounds::corollary_c2k_lb(n, e, k)));
    }
    bounds
        .into_iter()
        .map(|(name, value)| {
            let r = ctx.record(name);
            let v = match value {
                Ok(v) => v,
                Err(err) => return skipped(r, err.to_string()),
            };
            if !v.applicable {
                let mut r = skipped(r, format!("hypothesis {} not met", v.hypothesis));
                r.lhs = finite(v.value);
                return r;
            }
            match ctx.cr() {
                Oracle::Value(cr) => compared(r, v.value, *cr as f64, le(v.value, *cr as f64)),
                Oracle::Unavailable(why) => skipped(r, why.clone()),
                Oracle::Failed(why) => failed(r, why.clone()),
            }
        })
        .collect()
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// CSV header of [`render_report`].
pub const CSV_HEADER: [&str; 8] = ["graph", "n", "e", "check", "lhs", "rhs", "holds", "micros"];

pub fn render_report(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|error| LabError::Json { origin: String::from("report"), error })?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            for r in &report.records {
                w.write_record([
                    r.graph.clone(),
                    r.n.to_string(),
                    r.e.to_string(),
                    r.check.clone(),
                    opt(r.lhs),
                    opt(r.rhs),
                    r.holds.map(|h| h.to_string()).unwrap_or_default(),
                    r.micros.map(|m| m.to_string()).unwrap_or_default(),
                ])?;
            }
            let bytes = w.into_inner().map_err(|e| LabError::io("report", e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

pub fn emit_report(report: &Report, format: Format, path: &Path) -> Result<()> {
    io::write_text(path, &render_report(report, format)?)
}

pub fn parse_report(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|error| LabError::Json { origin: String::from("report"), error })
}
