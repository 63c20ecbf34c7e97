//! Straight-line drawings with exact rational coordinates.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{self, LatticePoint, Point};
use crate::{Edge, Error, Graph, Result};

/// A graph together with one point per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Drawing {
    host: Graph,
    coordinates: Vec<Point>,
}

/// One reason a drawing is not in general position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    CoincidentVertices { first: usize, second: usize },
    VertexOnEdge { vertex: usize, edge: Edge },
    CollinearOverlap { first: Edge, second: Edge },
    TriplePoint { edges: Vec<Edge> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CoincidentVertices { first, second } => {
                write!(f, "vertices {first} and {second} share a point")
            }
            Violation::VertexOnEdge { vertex, edge } => {
                write!(f, "vertex {vertex} lies inside edge {}-{}", edge.0, edge.1)
            }
            Violation::CollinearOverlap { first, second } => write!(
                f,
                "edges {}-{} and {}-{} overlap",
                first.0, first.1, second.0, second.1
            ),
            Violation::TriplePoint { edges } => {
                write!(f, "{} edges cross at a single point", edges.len())
            }
        }
    }
}

impl Drawing {
    pub fn new(host: Graph, coordinates: Vec<Point>) -> Result<Self> {
        if coordinates.len() != host.vertex_count() {
            return Err(Error::InvalidParameter(format!(
                "drawing has {} points for {} vertices",
                coordinates.len(),
                host.vertex_count()
            )));
        }
        Ok(Drawing { host, coordinates })
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn coordinates(&self) -> &[Point] {
        &self.coordinates
    }

    pub fn into_parts(self) -> (Graph, Vec<Point>) {
        (self.host, self.coordinates)
    }

    /// Every general-position violation; empty when the drawing is valid.
    pub fn validate(&self) -> Result<Vec<Violation>> {
        let pts = geometry::to_lattice(&self.coordinates)?;
        let edges = self.host.edges();
        let mut out = Vec::new();

        let mut by_point: BTreeMap<LatticePoint, usize> = BTreeMap::new();
        for (v, p) in pts.iter().enumerate() {
            if let Some(&first) = by_point.get(p) {
                out.push(Violation::CoincidentVertices { first, second: v });
            } else {
                by_point.insert(*p, v);
            }
        }

        for e in edges {
            for (v, &p) in pts.iter().enumerate() {
                if !e.touches(v) && geometry::in_open_segment(p, pts[e.0], pts[e.1])? {
                    out.push(Violation::VertexOnEdge { vertex: v, edge: *e });
                }
            }
        }

        let mut crossings_at: BTreeMap<(i128, i128, i128), Vec<Edge>> = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            for f in &edges[i + 1..] {
                let (a, b, c, d) = (pts[e.0], pts[e.1], pts[f.0], pts[f.1]);
                if geometry::collinear_overlap(a, b, c, d)? {
                    out.push(Violation::CollinearOverlap { first: *e, second: *f });
                    continue;
                }
                if !e.is_adjacent_to(f) && geometry::properly_cross(a, b, c, d)? {
                    let at = geometry::crossing_point(a, b, c, d)?;
                    let list = crossings_at.entry(at).or_default();
                    for g in [*e, *f] {
                        if !list.contains(&g) {
                            list.push(g);
                        }
                    }
                }
            }
        }
        for (_, mut list) in crossings_at {
            if list.len() >= 3 {
                list.sort_unstable();
                out.push(Violation::TriplePoint { edges: list });
            }
        }
        Ok(out)
    }

    /// Number of unordered pairs of non-adjacent edges whose segments cross.
    ///
    /// Fails with [`Error::DegenerateDrawing`] on any [`Violation`].
    pub fn count_crossings(&self) -> Result<u64> {
        if let Some(v) = self.validate()?.first() {
            let mut msg = String::new();
            let _ = fmt::write(&mut msg, format_args!("{v}"));
            return Err(Error::DegenerateDrawing(msg));
        }
        let pts = geometry::to_lattice(&self.coordinates)?;
        let edges = self.host.edges();
        let mut count = 0;
        for (i, e) in edges.iter().enumerate() {
            for f in &edges[i + 1..] {
                if !e.is_adjacent_to(f)
                    && geometry::properly_cross(pts[e.0], pts[e.1], pts[f.0], pts[f.1])?
                {
                    count += 1;
                }
            }
        }
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{classic, grid, Classic};
    use crate::geometry::Rational;
    use alloc::vec;
    use proptest::prelude::*;

    fn pts(coords: &[(i64, i64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::from_integers(x, y)).collect()
    }

    #[test]
    fn grid_drawing_is_crossing_free() {
        for n in 2..=5 {
            let (_, d) = grid(n).unwrap();
            assert!(d.validate().unwrap().is_empty());
            assert_eq!(d.count_crossings().unwrap(), 0);
        }
    }

    #[test]
    fn k4_drawings() {
        let k4 = classic(Classic::Complete(4));
        let inside = Drawing::new(k4.clone(), pts(&[(0, 0), (2, 0), (1, 2), (1, 1)])).unwrap();
        assert_eq!(inside.count_crossings().unwrap(), 0);
        let square = Drawing::new(k4, pts(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap();
        assert_eq!(square.count_crossings().unwrap(), 1);
    }

    #[test]
    fn violations() {
        let g3 = grid(3).unwrap().1;
        assert_eq!(g3.validate().unwrap(), vec![]);

        let k2 = classic(Classic::Complete(2));
        let same = Drawing::new(k2, pts(&[(1, 1), (1, 1)])).unwrap();
        assert!(same
            .validate()
            .unwrap()
            .contains(&Violation::CoincidentVertices { first: 0, second: 1 }));

        let path = classic(Classic::Path(3));
        let on_edge = Drawing::new(path, pts(&[(0, 0), (4, 0), (2, 0)])).unwrap();
        let v = on_edge.validate().unwrap();
        assert!(v.contains(&Violation::VertexOnEdge { vertex: 2, edge: Edge(0, 1) }));
        assert!(matches!(on_edge.count_crossings(), Err(Error::DegenerateDrawing(_))));
    }

    #[test]
    fn triple_point_detected() {
        // Three segments through the origin.
        let g = Graph::from_edge_list([(0, 1), (2, 3), (4, 5)]).unwrap();
        let d = Drawing::new(g, pts(&[(-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (1, 1)]))
            .unwrap();
        let v = d.validate().unwrap();
        assert!(matches!(v.as_slice(), [Violation::TriplePoint { edges }] if edges.len() == 3));
    }

    #[test]
    fn rational_coordinates() {
        let k4 = classic(Classic::Complete(4));
        let half = |a: i64, b: i64| Point::new(Rational::new(a, 2), Rational::new(b, 2));
        let d = Drawing::new(k4, vec![half(0, 0), half(1, 0), half(1, 1), half(0, 1)]).unwrap();
        assert_eq!(d.count_crossings().unwrap(), 1);
    }

    fn affine(p: &Point, m: [i64; 4], t: (i64, i64)) -> Point {
        Point::new(
            p.x * m[0] + p.y * m[1] + Rational::from_integer(t.0),
            p.x * m[2] + p.y * m[3] + Rational::from_integer(t.1),
        )
    }

    proptest! {
        #[test]
        fn crossing_count_is_affine_invariant(
            coords in proptest::collection::vec((-20i64..20, -20i64..20), 6),
            mask in 0u32..(1 << 15),
            m in (-3i64..4, -3i64..4, -3i64..4, -3i64..4),
            t in (-5i64..5, -5i64..5),
        ) {
            let det = m.0 * m.3 - m.1 * m.2;
            prop_assume!(det > 0);
            let k6 = classic(Classic::Complete(6));
            let edges: Vec<(usize, usize)> = k6.edges().iter().enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| (e.0, e.1)).collect();
            let g = Graph::with_vertex_count(6, edges).unwrap();
            let d = Drawing::new(g.clone(), pts(&coords)).unwrap();
            prop_assume!(d.validate().unwrap().is_empty());
            let moved: Vec<Point> = d.coordinates().iter()
                .map(|p| affine(p, [m.0, m.1, m.2, m.3], t)).collect();
            let d2 = Drawing::new(g, moved).unwrap();
            prop_assert_eq!(d.count_crossings().unwrap(), d2.count_crossings().unwrap());
        }
    }
}
