//! Planarity testing.
//!
//! The graph is split into biconnected blocks (a graph is planar iff each
//! block is) and each block is tested with the path-embedding method of
//! Demoucron, Malgrange and Pertuiset: start from a cycle, repeatedly pick a
//! fragment with the fewest admissible faces and embed one of its paths. A
//! fragment without an admissible face proves non-planarity. Quadratic in the
//! block size, which is plenty for the graph sizes this crate targets.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Edge, Graph};

/// True iff `g` has a crossing-free drawing in the plane.
pub fn is_planar(g: &Graph) -> bool {
    let n = g.vertex_count();
    let e = g.edge_count();
    if n >= 3 && e > 3 * n - 6 {
        return false;
    }
    if n <= 4 {
        return true;
    }
    biconnected_blocks(g).into_iter().all(|block| block_is_planar(&block))
}

/// Edge sets of the biconnected blocks, relabeled as standalone graphs.
/// Bridges form single-edge blocks.
pub fn biconnected_blocks(g: &Graph) -> Vec<Graph> {
    const UNSET: usize = usize::MAX;
    let n = g.vertex_count();
    let mut disc = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<Edge> = Vec::new();
    let mut blocks = Vec::new();
    // (vertex, parent, next neighbor index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != UNSET {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        stack.push((root, UNSET, 0));
        while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
            if *idx < g.degree(v) {
                let w = g.neighbors(v)[*idx];
                *idx += 1;
                if disc[w] == UNSET {
                    edge_stack.push(Edge(v.min(w), v.max(w)));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push(Edge(v.min(w), v.max(w)));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != UNSET {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let tree_edge = Edge(v.min(parent), v.max(parent));
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == tree_edge {
                                break;
                            }
                        }
                        blocks.push(relabel(&block));
                    }
                }
            }
        }
    }
    blocks
}

fn relabel(edges: &[Edge]) -> Graph {
    let mut ids: Vec<usize> = edges.iter().flat_map(|e| [e.0, e.1]).collect();
    ids.sort_unstable();
    ids.dedup();
    let local = |v: usize| ids.binary_search(&v).unwrap_or(0);
    let mapped = edges
        .iter()
        .map(|e| {
            let (a, b) = (local(e.0), local(e.1));
            Edge(a.min(b), a.max(b))
        })
        .collect();
    Graph::from_edges_unchecked(ids.len(), mapped)
}

struct Fragment {
    attachments: Vec<usize>,
    /// Non-embedded vertices of the fragment; empty for a chord.
    interior: Vec<usize>,
}

fn block_is_planar(b: &Graph) -> bool {
    let n = b.vertex_count();
    let m = b.edge_count();
    if m <= 2 || n <= 4 {
        return true;
    }
    if m > 3 * n - 6 {
        return false;
    }

    let mut in_h = vec![false; n];
    let mut edge_in_h = vec![false; m];

    let cycle = initial_cycle(b);
    for (i, &v) in cycle.iter().enumerate() {
        in_h[v] = true;
        let w = cycle[(i + 1) % cycle.len()];
        if let Some(idx) = b.edge_index(Edge(v.min(w), v.max(w))) {
            edge_in_h[idx] = true;
        }
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle];
    let mut embedded_edges = faces[0].len();

    while embedded_edges < m {
        let fragments = fragments(b, &in_h, &edge_in_h);
        let mut chosen: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| frag.attachments.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    chosen = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if chosen.is_none() {
                        chosen = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let Some((fi, face_idx)) = chosen else {
            unreachable!("unembedded edges always form a fragment");
        };
        let path = fragment_path(b, &fragments[fi], &in_h);
        for w in path.windows(2) {
            let idx = b.edge_index(Edge(w[0].min(w[1]), w[0].max(w[1]))).expect("path edge");
            edge_in_h[idx] = true;
            embedded_edges += 1;
        }
        for &v in &path {
            in_h[v] = true;
        }
        let face = core::mem::take(&mut faces[face_idx]);
        let (f1, f2) = split_face(&face, &path);
        faces[face_idx] = f1;
        faces.push(f2);
    }
    true
}

/// Some cycle of a 2-connected graph with at least 3 vertices.
fn initial_cycle(b: &Graph) -> Vec<usize> {
    let Edge(u, v) = b.edges()[0];
    // BFS from v to u avoiding the edge uv.
    let n = b.vertex_count();
    let mut prev = vec![usize::MAX; n];
    prev[v] = v;
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back(v);
    while let Some(x) = queue.pop_front() {
        if x == u {
            break;
        }
        for &y in b.neighbors(x) {
            if prev[y] == usize::MAX && !(x == v && y == u) {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut cycle = vec![u];
    let mut x = prev[u];
    while x != v {
        cycle.push(x);
        x = prev[x];
    }
    cycle.push(v);
    cycle
}

fn fragments(b: &Graph, in_h: &[bool], edge_in_h: &[bool]) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (i, e) in b.edges().iter().enumerate() {
        if !edge_in_h[i] && in_h[e.0] && in_h[e.1] {
            out.push(Fragment { attachments: vec![e.0, e.1], interior: Vec::new() });
        }
    }
    let n = b.vertex_count();
    let mut seen = vec![false; n];
    for start in 0..n {
        if in_h[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut interior = Vec::new();
        let mut attachments = Vec::new();
        while let Some(x) = stack.pop() {
            interior.push(x);
            for &y in b.neighbors(x) {
                if in_h[y] {
                    attachments.push(y);
                } else if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        out.push(Fragment { attachments, interior });
    }
    out
}

/// A path through the fragment joining two distinct attachments.
fn fragment_path(b: &Graph, frag: &Fragment, in_h: &[bool]) -> Vec<usize> {
    let a = frag.attachments[0];
    let target = frag.attachments[1];
    if frag.interior.is_empty() {
        return vec![a, target];
    }
    let n = b.vertex_count();
    let mut in_frag = vec![false; n];
    for &x in &frag.interior {
        in_frag[x] = true;
    }
    let mut prev = vec![usize::MAX; n];
    let mut queue = alloc::collections::VecDeque::new();
    for &x in b.neighbors(a) {
        if in_frag[x] {
            prev[x] = a;
            queue.push_back(x);
        }
    }
    let mut end = usize::MAX;
    while let Some(x) = queue.pop_front() {
        if b.has_edge(x, target) {
            end = x;
            break;
        }
        for &y in b.neighbors(x) {
            if in_frag[y] && !in_h[y] && prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    debug_assert!(end != usize::MAX, "fragment must connect its attachments");
    let mut rev = vec![target];
    let mut x = end;
    while x != a {
        rev.push(x);
        x = prev[x];
    }
    rev.push(a);
    rev.reverse();
    rev
}

/// Splits a face cycle by a path whose endpoints lie on it.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let a = path[0];
    let b = *path.last().expect("nonempty path");
    let start = face.iter().position(|&v| v == a).expect("a on face");
    let rotated: Vec<usize> = face[start..].iter().chain(&face[..start]).copied().collect();
    let j = rotated.iter().position(|&v| v == b).expect("b on face");
    let interior = &path[1..path.len() - 1];

    let mut f1: Vec<usize> = rotated[..=j].to_vec();
    f1.extend(interior.iter().rev());
    let mut f2: Vec<usize> = rotated[j..].to_vec();
    f2.push(a);
    f2.extend(interior.iter());
    (f1, f2)
}
