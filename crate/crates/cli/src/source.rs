//! Graph sources: generator specs and edge-list files.
//!
//! Spec grammar: `grid(n)`, the classic names (`K5`, `K3,3`, `K_{3,4}`,
//! `petersen`, `path4`, `cycle6`, `star9`), `random(n,p)` or
//! `random(n,p,seed)`, and `blowup(base,m,s)` blowing up the first `m` edges
//! of `base` with `K_{s,s}`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crossnum_core::drawing::Drawing;
use crossnum_core::generators::{self, BlowupSpec, Classic};
use crossnum_core::Graph;
use serde::{Deserialize, Serialize};

use crate::{io, LabError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    Spec(String),
    File { file: PathBuf },
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::Spec(s) => f.write_str(s),
            GraphSource::File { file } => write!(f, "{}", file.display()),
        }
    }
}

/// A parsed generator spec.
#[derive(Clone, Debug, PartialEq)]
pub enum GenSpec {
    Grid(usize),
    Classic(Classic),
    Random { n: usize, p: f64, seed: Option<u64> },
    Blowup { base: Box<GenSpec>, edges: usize, s: usize },
}

/// A loaded graph, with the straight-line drawing when the generator has one.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub graph: Graph,
    pub drawing: Option<Drawing>,
    /// Side length when the graph is `grid(side)`.
    pub grid_side: Option<usize>,
}

fn args(s: &str, name: &str) -> Option<String> {
    s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')').map(str::to_string)
}

fn number<T: FromStr>(s: &str, whole: &str) -> Result<T> {
    s.trim().parse().map_err(|_| LabError::UnknownSource(whole.to_string()))
}

impl FromStr for GenSpec {
    type Err = LabError;

    fn from_str(raw: &str) -> Result<Self> {
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = s.to_ascii_lowercase();
        if let Some(inner) = args(&lower, "grid") {
            return Ok(GenSpec::Grid(number(&inner, raw)?));
        }
        if let Some(side) = lower.strip_prefix("grid").filter(|r| !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit())) {
            return Ok(GenSpec::Grid(number(side, raw)?));
        }
        if let Some(inner) = args(&lower, "random") {
            let parts: Vec<&str> = inner.split(',').collect();
            return match parts.as_slice() {
                [n, p] => Ok(GenSpec::Random { n: number(n, raw)?, p: number(p, raw)?, seed: None }),
                [n, p, seed] => Ok(GenSpec::Random { n: number(n, raw)?, p: number(p, raw)?, seed: Some(number(seed, raw)?) }),
                _ => Err(LabError::UnknownSource(raw.to_string())),
            };
        }
        if let Some(inner) = args(&s, "blowup") {
            let mut parts = inner.rsplitn(3, ',');
            let (Some(size), Some(edges), Some(base)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(LabError::UnknownSource(raw.to_string()));
            };
            return Ok(GenSpec::Blowup {
                base: Box::new(base.parse()?),
                edges: number(edges, raw)?,
                s: number(size, raw)?,
            });
        }
        s.parse::<Classic>().map(GenSpec::Classic).map_err(|_| LabError::UnknownSource(raw.to_string()))
    }
}

impl GenSpec {
    /// Builds the graph; `default_seed` serves random specs without a seed.
    pub fn build(&self, default_seed: u64) -> Result<Loaded> {
        Ok(match self {
            GenSpec::Grid(side) => {
                let (graph, drawing) = generators::grid(*side)?;
                Loaded { graph, drawing: Some(drawing), grid_side: Some(*side) }
            }
            GenSpec::Classic(c) => Loaded { graph: generators::classic(*c), drawing: None, grid_side: None },
            GenSpec::Random { n, p, seed } => Loaded {
                graph: generators::random_graph(*n, *p, seed.unwrap_or(default_seed))?,
                drawing: None,
                grid_side: None,
            },
            GenSpec::Blowup { base, edges, s } => {
                let base = base.build(default_seed)?.graph;
                let spec = BlowupSpec::first_edges(base, *edges, *s)?;
                Loaded { graph: generators::blowup(&spec), drawing: None, grid_side: None }
            }
        })
    }
}

impl GraphSource {
    pub fn load(&self, default_seed: u64) -> Result<Loaded> {
        match self {
            GraphSource::Spec(s) => s.parse::<GenSpec>()?.build(default_seed),
            GraphSource::File { file } => {
                Ok(Loaded { graph: io::read_edge_list(file)?, drawing: None, grid_side: None })
            }
        }
    }
}
