//! Combinatorial invariants of the curve: genus, the curve graph and the
//! tree test behind "genus equals the number of points".

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arrangement::{build_arrangement, FaceArrangement};
use crate::error::{Result, TropicalError};
use crate::geometry::{on_segment, unit_square, RPoint};
use crate::series::TropicalSeries;

/// Number of faces whose closure avoids the boundary of the square.
pub fn genus(f: &TropicalSeries) -> Result<usize> {
    Ok(build_arrangement(f)?.bounded_face_count())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexKind {
    /// Curve vertex strictly inside the square.
    Interior,
    /// Endpoint of a leg on the boundary of the square.
    Boundary,
    /// Marked point splitting the interior of an edge.
    Marked,
    /// Marked point coinciding with a curve vertex (non-generic position).
    MarkedVertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphVertex {
    pub point: RPoint,
    pub kind: VertexKind,
}

impl GraphVertex {
    /// Vertices removed when testing the tree property.
    pub fn is_separator(&self) -> bool {
        self.kind != VertexKind::Interior
    }
}

/// The 1-skeleton of the curve with marked points inserted as vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CurveGraph {
    pub vertices: Vec<GraphVertex>,
    /// Index pairs `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub adjacency: Vec<Vec<usize>>,
}

impl CurveGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn segments(&self) -> impl Iterator<Item = (&RPoint, &RPoint)> {
        self.edges
            .iter()
            .map(|&(a, b)| (&self.vertices[a].point, &self.vertices[b].point))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }
}

pub fn curve_graph(f: &TropicalSeries, points: &[RPoint]) -> Result<CurveGraph> {
    curve_graph_of(&build_arrangement(f)?, f, points)
}

/// Builds the curve graph from an existing arrangement of `f`.
pub fn curve_graph_of(
    arr: &FaceArrangement,
    f: &TropicalSeries,
    points: &[RPoint],
) -> Result<CurveGraph> {
    let mut kinds: BTreeMap<RPoint, VertexKind> = BTreeMap::new();
    for e in &arr.curve_edges {
        for p in [&e.a, &e.b] {
            let kind = if p.is_interior() { VertexKind::Interior } else { VertexKind::Boundary };
            kinds.insert(p.clone(), kind);
        }
    }

    // Marked points lying inside each edge, in order along it.
    let mut splits: Vec<Vec<RPoint>> = vec![Vec::new(); arr.curve_edges.len()];
    for p in points {
        if !p.in_omega() || !f.is_on_curve(p)? {
            return Err(TropicalError::Input(format!("point {p} is not on the curve")));
        }
        if let Some(kind) = kinds.get_mut(p) {
            *kind = VertexKind::MarkedVertex;
            continue;
        }
        let k = arr
            .curve_edges
            .iter()
            .position(|e| on_segment(p, &e.a, &e.b))
            .ok_or_else(|| TropicalError::Internal(format!("curve point {p} on no edge")))?;
        splits[k].push(p.clone());
    }

    let mut graph = CurveGraph::default();
    let mut index: BTreeMap<RPoint, usize> = BTreeMap::new();
    let mut intern = |g: &mut CurveGraph, p: &RPoint, kind: VertexKind| -> usize {
        *index.entry(p.clone()).or_insert_with(|| {
            g.vertices.push(GraphVertex { point: p.clone(), kind });
            g.vertices.len() - 1
        })
    };
    let mut edges = BTreeSet::new();
    for (e, mut inner) in arr.curve_edges.iter().zip(splits) {
        // Endpoints satisfy a < b lexicographically, so sorting orders points along the edge.
        inner.sort();
        inner.dedup();
        let mut prev = intern(&mut graph, &e.a, kinds[&e.a]);
        for p in &inner {
            let k = intern(&mut graph, p, VertexKind::Marked);
            edges.insert((prev.min(k), prev.max(k)));
            prev = k;
        }
        let last = intern(&mut graph, &e.b, kinds[&e.b]);
        edges.insert((prev.min(last), prev.max(last)));
    }
    graph.edges = edges.into_iter().collect();
    graph.adjacency = vec![Vec::new(); graph.vertices.len()];
    for &(a, b) in &graph.edges {
        graph.adjacency[a].push(b);
        graph.adjacency[b].push(a);
    }
    Ok(graph)
}

/// Shape of the curve with marked points and boundary endpoints removed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeCheck {
    pub components: usize,
    pub has_cycle: bool,
    /// Some marked point sits on a curve vertex rather than inside an edge.
    pub marked_at_vertex: bool,
}

impl TreeCheck {
    pub fn is_tree(&self) -> bool {
        self.components <= 1 && !self.has_cycle && !self.marked_at_vertex
    }
}

pub fn tree_check(graph: &CurveGraph) -> TreeCheck {
    let n = graph.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }

    let sep = |v: usize| graph.vertices[v].is_separator();
    let mut has_cycle = false;
    // Open edges with both ends removed are components of their own.
    let mut free_edges = 0;
    for &(a, b) in &graph.edges {
        match (sep(a), sep(b)) {
            (true, true) => free_edges += 1,
            (false, false) => {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    has_cycle = true;
                } else {
                    parent[ra] = rb;
                }
            }
            _ => {}
        }
    }
    let roots: BTreeSet<usize> = (0..n)
        .filter(|&v| !sep(v))
        .map(|v| find(&mut parent, v))
        .collect();
    TreeCheck {
        components: roots.len() + free_edges,
        has_cycle,
        marked_at_vertex: graph
            .vertices
            .iter()
            .any(|v| v.kind == VertexKind::MarkedVertex),
    }
}

/// True iff the curve minus the marked points and the boundary is a single
/// tree, with every marked point inside an edge. An empty curve counts as a
/// tree only when nothing is marked.
pub fn is_generic_tree(f: &TropicalSeries, points: &[RPoint]) -> Result<bool> {
    Ok(is_generic_tree_graph(&curve_graph(f, points)?))
}

/// [`is_generic_tree`] on a prebuilt curve graph.
pub fn is_generic_tree_graph(graph: &CurveGraph) -> bool {
    let check = tree_check(graph);
    let marked = graph.vertices.iter().any(|v| {
        matches!(v.kind, VertexKind::Marked | VertexKind::MarkedVertex)
    });
    check.is_tree() && (check.components == 1 || !marked)
}

/// `V - E + F` for the planar graph formed by the curve and the subdivided
/// boundary of the square, counting the outer region as a face.
pub fn euler_characteristic(arr: &FaceArrangement) -> i64 {
    let mut boundary: BTreeSet<RPoint> = unit_square().into_iter().collect();
    for e in &arr.curve_edges {
        for p in [&e.a, &e.b] {
            if p.on_omega_boundary() {
                boundary.insert(p.clone());
            }
        }
    }
    let interior = arr.curve_vertices.len() as i64;
    let b = boundary.len() as i64;
    let v = interior + b;
    // The boundary cycle through `b` points has `b` segments.
    let e = arr.curve_edges.len() as i64 + b;
    let faces = arr.faces.len() as i64 + 1;
    v - e + faces
}
