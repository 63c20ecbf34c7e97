//! Edge-list and coordinate files.
//!
//! Edge lists hold one edge per line as two vertex ids. Blank lines and lines
//! starting with `#` are ignored; an optional `n <count>` line fixes the
//! vertex count (isolated vertices). Coordinate files hold one `id x y` line
//! per vertex, with `x` and `y` integers or fractions `p/q`.

use std::fs;
use std::path::Path;

use crossnum_core::geometry::{Point, Rational};
use crossnum_core::Graph;

use crate::{LabError, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_edge_list(text: &str, origin: &str) -> Result<Graph> {
    let err = |line, message: String| LabError::Parse { origin: origin.to_string(), line, message };
    let mut declared = None;
    let mut pairs = Vec::new();
    for (line, content) in content_lines(text) {
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.as_slice() {
            ["n", count] => {
                if declared.is_some() || !pairs.is_empty() {
                    return Err(err(line, "the `n` header must come first".into()));
                }
                let count = count.parse::<usize>().map_err(|_| err(line, format!("bad vertex count {count:?}")))?;
                declared = Some(count);
            }
            [a, b] => {
                let id = |s: &str| s.parse::<usize>().map_err(|_| err(line, format!("bad vertex id {s:?}")));
                pairs.push((id(a)?, id(b)?));
            }
            _ => return Err(err(line, format!("expected two vertex ids, got {content:?}"))),
        }
    }
    let g = match declared {
        Some(n) => Graph::with_vertex_count(n, pairs),
        None => Graph::from_edge_list(pairs),
    };
    g.map_err(|e| err(0, e.to_string()))
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.vertex_count());
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.0, e.1));
    }
    out
}

pub fn parse_coordinates(text: &str, vertex_count: usize, origin: &str) -> Result<Vec<Point>> {
    let err = |line, message: String| LabError::Parse { origin: origin.to_string(), line, message };
    let mut points: Vec<Option<Point>> = vec![None; vertex_count];
    for (line, content) in content_lines(text) {
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [id, x, y] = fields.as_slice() else {
            return Err(err(line, format!("expected `id x y`, got {content:?}")));
        };
        let id = id.parse::<usize>().map_err(|_| err(line, format!("bad vertex id {id:?}")))?;
        let coord = |s: &str| s.parse::<Rational>().map_err(|_| err(line, format!("bad coordinate {s:?}")));
        let p = Point::new(coord(x)?, coord(y)?);
        match points.get_mut(id) {
            None => return Err(err(line, format!("vertex {id} out of range for {vertex_count} vertices"))),
            Some(Some(_)) => return Err(err(line, format!("vertex {id} placed twice"))),
            Some(slot) => *slot = Some(p),
        }
    }
    points
        .into_iter()
        .enumerate()
        .map(|(v, p)| p.ok_or_else(|| err(0, format!("vertex {v} has no coordinates"))))
        .collect()
}

pub fn format_coordinates(points: &[Point]) -> String {
    points.iter().enumerate().map(|(v, p)| format!("{v} {} {}\n", p.x, p.y)).collect()
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| LabError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| LabError::io(path, e))
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    parse_edge_list(&read_text(path)?, &path.display().to_string())
}

pub fn read_coordinates(path: &Path, vertex_count: usize) -> Result<Vec<Point>> {
    parse_coordinates(&read_text(path)?, vertex_count, &path.display().to_string())
}
