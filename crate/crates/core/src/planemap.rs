//! Plane graphs as rotation systems.
//!
//! A plane embedding is stored combinatorially: every edge owns two darts
//! (half-edges), and each vertex carries the counter-clockwise cyclic order
//! of the darts leaving it. Faces, mirror images and orientation-preserving
//! isomorphism are all derived from that data alone. Multi-edges are
//! first-class; loops are rejected.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;
/// Dart (half-edge) id. Edge `e` owns darts `2e` and `2e + 1`; dart `2e`
/// originates at the first listed endpoint of `e`.
pub type DartId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneMapError {
    #[error("edge {edge} is a loop at vertex {vertex}")]
    LoopEdge { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} references vertex {vertex} out of range (vertices: {count})")]
    VertexOutOfRange {
        edge: EdgeId,
        vertex: VertexId,
        count: usize,
    },
    #[error("rotation table has {got} rows, expected one per vertex ({expected})")]
    RotationLengthMismatch { got: usize, expected: usize },
    #[error("rotation of vertex {vertex} mentions edge {edge}, which is not incident to it")]
    RotationEdgeNotIncident { vertex: VertexId, edge: EdgeId },
    #[error("rotation of vertex {vertex} lists edge {edge} more than once")]
    RotationEdgeRepeated { vertex: VertexId, edge: EdgeId },
    #[error("rotation of vertex {vertex} misses edge {edge} incident to it")]
    RotationEdgeMissing { vertex: VertexId, edge: EdgeId },
    #[error("edge id {edge} out of range (edges: {count})")]
    EdgeOutOfRange { edge: EdgeId, count: usize },
    #[error("faces are only defined for connected systems")]
    Disconnected,
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("unknown export format: {0}")]
    UnknownFormat(String),
}

/// Immutable plane graph: vertices, edges and per-vertex CCW dart order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
    /// Per-vertex CCW dart lists; together these form the rotation permutation.
    rotation: Vec<Vec<DartId>>,
    /// dart -> successor in the CCW order at its origin
    next_ccw: Vec<DartId>,
    /// dart -> predecessor in the CCW order at its origin
    prev_ccw: Vec<DartId>,
    /// dart -> origin vertex
    origin: Vec<VertexId>,
}

impl RotationSystem {
    /// Builds a rotation system from an edge list and per-vertex CCW lists of
    /// *edge ids*. Loops are rejected, so an edge id names a unique dart at
    /// each of its two endpoints.
    pub fn new(
        vertex_count: usize,
        edges: Vec<(VertexId, VertexId)>,
        rotation_edges: Vec<Vec<EdgeId>>,
    ) -> Result<Self, PlaneMapError> {
        let edge_count = edges.len();
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(PlaneMapError::LoopEdge { edge: e, vertex: u });
            }
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(PlaneMapError::VertexOutOfRange {
                        edge: e,
                        vertex: w,
                        count: vertex_count,
                    });
                }
            }
        }
        if rotation_edges.len() != vertex_count {
            return Err(PlaneMapError::RotationLengthMismatch {
                got: rotation_edges.len(),
                expected: vertex_count,
            });
        }

        let mut origin = vec![0usize; 2 * edge_count];
        for (e, &(u, v)) in edges.iter().enumerate() {
            origin[2 * e] = u;
            origin[2 * e + 1] = v;
        }

        let mut rotation: Vec<Vec<DartId>> = Vec::with_capacity(vertex_count);
        let mut seen = vec![false; 2 * edge_count];
        for (v, list) in rotation_edges.iter().enumerate() {
            let mut darts = Vec::with_capacity(list.len());
            for &e in list {
                if e >= edge_count {
                    return Err(PlaneMapError::EdgeOutOfRange {
                        edge: e,
                        count: edge_count,
                    });
                }
                let (a, b) = edges[e];
                let d = if a == v {
                    2 * e
                } else if b == v {
                    2 * e + 1
                } else {
                    return Err(PlaneMapError::RotationEdgeNotIncident { vertex: v, edge: e });
                };
                if seen[d] {
                    return Err(PlaneMapError::RotationEdgeRepeated { vertex: v, edge: e });
                }
                seen[d] = true;
                darts.push(d);
            }
            rotation.push(darts);
        }
        if let Some(d) = seen.iter().position(|&s| !s) {
            return Err(PlaneMapError::RotationEdgeMissing {
                vertex: origin[d],
                edge: d / 2,
            });
        }

        let mut next_ccw = vec![0usize; 2 * edge_count];
        let mut prev_ccw = vec![0usize; 2 * edge_count];
        for darts in &rotation {
            let n = darts.len();
            for i in 0..n {
                let d = darts[i];
                next_ccw[d] = darts[(i + 1) % n];
                prev_ccw[d] = darts[(i + n - 1) % n];
            }
        }

        Ok(RotationSystem {
            vertex_count,
            edges,
            rotation,
            next_ccw,
            prev_ccw,
            origin,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dart_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn twin(&self, d: DartId) -> DartId {
        d ^ 1
    }

    pub fn edge_of(&self, d: DartId) -> EdgeId {
        d / 2
    }

    pub fn origin(&self, d: DartId) -> VertexId {
        self.origin[d]
    }

    /// Vertex the dart points at.
    pub fn head(&self, d: DartId) -> VertexId {
        self.origin[d ^ 1]
    }

    pub fn next_ccw(&self, d: DartId) -> DartId {
        self.next_ccw[d]
    }

    pub fn prev_ccw(&self, d: DartId) -> DartId {
        self.prev_ccw[d]
    }

    /// CCW dart list at a vertex.
    pub fn darts_at(&self, v: VertexId) -> &[DartId] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    /// The dart of edge `e` that originates at `v`.
    pub fn dart_at(&self, e: EdgeId, v: VertexId) -> Option<DartId> {
        let (a, b) = self.edges[e];
        if a == v {
            Some(2 * e)
        } else if b == v {
            Some(2 * e + 1)
        } else {
            None
        }
    }

    /// Other endpoint of edge `e` as seen from `v`.
    pub fn other_endpoint(&self, e: EdgeId, v: VertexId) -> Option<VertexId> {
        let (a, b) = self.edges[e];
        if a == v {
            Some(b)
        } else if b == v {
            Some(a)
        } else {
            None
        }
    }

    /// Face successor: next dart of the face lying to the left of `d`.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.next_ccw[d ^ 1]
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut visited = 1usize;
        while let Some(v) = stack.pop() {
            for &d in &self.rotation[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    visited += 1;
                    stack.push(w);
                }
            }
        }
        visited == self.vertex_count
    }

    /// Face cycles (dart orbits of the face-successor permutation).
    pub fn faces(&self) -> Result<Vec<Vec<DartId>>, PlaneMapError> {
        if !self.is_connected() {
            return Err(PlaneMapError::Disconnected);
        }
        let mut seen = vec![false; self.dart_count()];
        let mut faces = Vec::new();
        for start in 0..self.dart_count() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut d = start;
            loop {
                seen[d] = true;
                cycle.push(d);
                d = self.face_next(d);
                if d == start {
                    break;
                }
            }
            faces.push(cycle);
        }
        Ok(faces)
    }

    /// Mirror image: every per-vertex rotation reversed. Applying it twice
    /// returns a structurally equal system.
    pub fn mirror(&self) -> RotationSystem {
        let rotation_edges = self
            .rotation
            .iter()
            .map(|darts| darts.iter().rev().map(|&d| d / 2).collect())
            .collect();
        RotationSystem::new(self.vertex_count, self.edges.clone(), rotation_edges)
            .expect("mirror of a valid system is valid")
    }

    /// True if no articulation vertex exists (standard lowpoint DFS, aware of
    /// parallel edges). Requires at least 3 vertices.
    fn is_two_connected(&self) -> bool {
        let n = self.vertex_count;
        if n < 3 || !self.is_connected() {
            return false;
        }
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![usize::MAX; n];
        let mut timer = 0usize;
        // Iterative DFS over darts; each frame remembers the dart used to
        // enter the vertex so a parallel edge still counts as a back edge.
        let mut stack: Vec<(VertexId, Option<DartId>, usize)> = vec![(0, None, 0)];
        let mut root_children = 0usize;
        disc[0] = 0;
        low[0] = 0;
        timer += 1;
        loop {
            let Some(top) = stack.last_mut() else { break };
            let (v, entry) = (top.0, top.1);
            if top.2 < self.rotation[v].len() {
                let d = self.rotation[v][top.2];
                top.2 += 1;
                if Some(d ^ 1) == entry {
                    continue;
                }
                let w = self.head(d);
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if v == 0 {
                        root_children += 1;
                    }
                    stack.push((w, Some(d), 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if p != 0 && low[v] >= disc[p] {
                        return false;
                    }
                }
            }
        }
        root_children <= 1
    }

    pub fn validate(&self) -> ValidationReport {
        let connected = self.is_connected();
        let two_connected = self.is_two_connected();
        let all_faces_triangles = connected
            && self
                .faces()
                .map(|fs| fs.iter().all(|f| f.len() == 3))
                .unwrap_or(false);
        let mut degree_histogram = BTreeMap::new();
        for v in 0..self.vertex_count {
            *degree_histogram.entry(self.degree(v)).or_insert(0usize) += 1;
        }
        let mut simple = true;
        {
            let mut seen = std::collections::BTreeSet::new();
            for &(u, v) in &self.edges {
                let key = (u.min(v), u.max(v));
                if !seen.insert(key) {
                    simple = false;
                    break;
                }
            }
        }
        let degrees_ok_p = degree_histogram.keys().all(|&d| d == 3 || d == 6);
        let degrees_ok_h = degree_histogram.keys().all(|&d| d <= 6);
        let triangulation = connected && two_connected && all_faces_triangles;
        ValidationReport {
            connected,
            two_connected,
            all_faces_triangles,
            in_p: triangulation && degrees_ok_p,
            in_h: triangulation && degrees_ok_h,
            simple,
            degree_histogram,
        }
    }

    /// Orientation-preserving isomorphism onto `other`, as a vertex map, if
    /// one exists. Rooted search: dart 0 of `self` is matched against every
    /// dart of `other`; from a fixed root the traversal over rotation
    /// successor and twin is canonical, so two rooted maps match iff their
    /// traversals agree everywhere.
    pub fn find_op_isomorphism(&self, other: &RotationSystem) -> Option<Vec<VertexId>> {
        if self.vertex_count != other.vertex_count || self.edges.len() != other.edges.len() {
            return None;
        }
        if self.dart_count() == 0 {
            // Edgeless graphs: only the one-vertex map is unambiguous.
            return (self.vertex_count <= 1).then(|| (0..self.vertex_count).collect());
        }
        let degree_bag = |r: &RotationSystem| {
            let mut bag: Vec<usize> = (0..r.vertex_count).map(|v| r.degree(v)).collect();
            bag.sort_unstable();
            bag
        };
        if degree_bag(self) != degree_bag(other) {
            return None;
        }
        'roots: for root in 0..other.dart_count() {
            let mut map = vec![usize::MAX; self.dart_count()];
            let mut rmap = vec![usize::MAX; other.dart_count()];
            map[0] = root;
            rmap[root] = 0;
            let mut queue = std::collections::VecDeque::from([0usize]);
            while let Some(da) = queue.pop_front() {
                let db = map[da];
                let pairs = [
                    (self.next_ccw[da], other.next_ccw[db]),
                    (da ^ 1, db ^ 1),
                ];
                for (na, nb) in pairs {
                    if map[na] != usize::MAX || rmap[nb] != usize::MAX {
                        if map[na] != nb {
                            continue 'roots;
                        }
                    } else {
                        map[na] = nb;
                        rmap[nb] = na;
                        queue.push_back(na);
                    }
                }
            }
            if map.iter().any(|&x| x == usize::MAX) {
                // Disconnected input; rooted traversal can never cover it.
                return None;
            }
            let mut vmap = vec![usize::MAX; self.vertex_count];
            for d in 0..self.dart_count() {
                let (a, b) = (self.origin[d], other.origin[map[d]]);
                if vmap[a] != usize::MAX && vmap[a] != b {
                    continue 'roots;
                }
                vmap[a] = b;
            }
            return Some(vmap);
        }
        None
    }

    /// Orientation-preserving equivalence of two plane graphs.
    pub fn op_equivalent(&self, other: &RotationSystem) -> bool {
        self.find_op_isomorphism(other).is_some()
    }
}

/// Membership and well-formedness flags computed by [`RotationSystem::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub connected: bool,
    pub two_connected: bool,
    pub all_faces_triangles: bool,
    pub degree_histogram: BTreeMap<usize, usize>,
    /// 2-connected plane triangulation with every degree 3 or 6.
    pub in_p: bool,
    /// 2-connected plane triangulation with every degree at most 6.
    pub in_h: bool,
    pub simple: bool,
}

#[derive(Serialize, Deserialize)]
struct GraphDocument {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    layers: Option<Vec<Vec<usize>>>,
}

/// Parses the canonical JSON document. Returns the system together with the
/// optional `layers` block (innermost first) when present.
pub fn parse_rotation_system(
    document: &str,
) -> Result<(RotationSystem, Option<Vec<Vec<usize>>>), PlaneMapError> {
    let doc: GraphDocument =
        serde_json::from_str(document).map_err(|e| PlaneMapError::Malformed(e.to_string()))?;
    let rs = RotationSystem::new(doc.vertices, doc.edges, doc.rotation)?;
    Ok((rs, doc.layers))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
    Svg,
}

impl std::str::FromStr for ExportFormat {
    type Err = PlaneMapError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            "svg" => Ok(ExportFormat::Svg),
            other => Err(PlaneMapError::UnknownFormat(other.to_string())),
        }
    }
}

const CLASS_COLORS: [&str; 3] = ["red", "green", "blue"];

/// Serializes a system. `classes`, when present, must assign one of 0/1/2 to
/// every edge (used by DOT/SVG coloring). `layers` is the optional layered
/// placement metadata kept by the builder.
pub fn export(
    rs: &RotationSystem,
    classes: Option<&[u8]>,
    layers: Option<&[Vec<usize>]>,
    format: ExportFormat,
) -> Result<String, PlaneMapError> {
    match format {
        ExportFormat::Json => Ok(export_json(rs, layers)),
        ExportFormat::Dot => Ok(export_dot(rs, classes)),
        ExportFormat::Svg => Ok(export_svg(rs, classes, layers)),
    }
}

fn export_json(rs: &RotationSystem, layers: Option<&[Vec<usize>]>) -> String {
    let doc = GraphDocument {
        vertices: rs.vertex_count,
        edges: rs.edges.clone(),
        rotation: rs
            .rotation
            .iter()
            .map(|darts| darts.iter().map(|&d| d / 2).collect())
            .collect(),
        layers: layers.map(|ls| ls.to_vec()),
    };
    serde_json::to_string(&doc).expect("document serialization cannot fail")
}

fn export_dot(rs: &RotationSystem, classes: Option<&[u8]>) -> String {
    let mut out = String::from("graph {\n");
    for v in 0..rs.vertex_count {
        out.push_str(&format!("  {v};\n"));
    }
    for (e, &(u, v)) in rs.edges.iter().enumerate() {
        match classes {
            Some(cs) => {
                let q = cs[e] as usize;
                out.push_str(&format!(
                    "  {u} -- {v} [class={q}, color={}];\n",
                    CLASS_COLORS[q]
                ));
            }
            None => out.push_str(&format!("  {u} -- {v};\n")),
        }
    }
    out.push_str("}\n");
    out
}

/// Vertex placement: concentric layers when layer metadata is available,
/// otherwise a single circle.
fn svg_positions(rs: &RotationSystem, layers: Option<&[Vec<usize>]>) -> Vec<(f64, f64)> {
    let mut pos = vec![(0.0f64, 0.0f64); rs.vertex_count];
    match layers {
        Some(ls) if !ls.is_empty() => {
            for (ring, vs) in ls.iter().enumerate() {
                let r = 30.0 + 60.0 * ring as f64;
                let n = vs.len().max(1) as f64;
                for (i, &v) in vs.iter().enumerate() {
                    // Half-step stagger per ring keeps crossing edges short.
                    let theta = std::f64::consts::TAU * (i as f64 + 0.5 * ring as f64) / n;
                    pos[v] = (r * theta.cos(), r * theta.sin());
                }
            }
        }
        _ => {
            let n = rs.vertex_count.max(1) as f64;
            for v in 0..rs.vertex_count {
                let theta = std::f64::consts::TAU * v as f64 / n;
                pos[v] = (200.0 * theta.cos(), 200.0 * theta.sin());
            }
        }
    }
    pos
}

fn export_svg(
    rs: &RotationSystem,
    classes: Option<&[u8]>,
    layers: Option<&[Vec<usize>]>,
) -> String {
    let pos = svg_positions(rs, layers);
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &(x, y) in &pos {
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    let pad = 20.0;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.1} {:.1} {:.1} {:.1}\">\n",
        min_x - pad,
        min_y - pad,
        max_x - min_x + 2.0 * pad,
        max_y - min_y + 2.0 * pad
    );
    let mut parallel_seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (e, &(u, v)) in rs.edges.iter().enumerate() {
        let color = classes.map_or("black", |cs| CLASS_COLORS[cs[e] as usize]);
        let (x1, y1) = pos[u];
        let (x2, y2) = pos[v];
        let key = (u.min(v), u.max(v));
        let copy = parallel_seen.entry(key).or_insert(0);
        if *copy == 0 {
            out.push_str(&format!(
                "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"{color}\"/>\n"
            ));
        } else {
            // Parallel copies bow out so they stay visually distinct.
            let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
            let (dx, dy) = (x2 - x1, y2 - y1);
            let len = (dx * dx + dy * dy).sqrt().max(1.0);
            let off = 8.0 * *copy as f64;
            let (cx, cy) = (mx - dy / len * off, my + dx / len * off);
            out.push_str(&format!(
                "  <path d=\"M {x1:.1} {y1:.1} Q {cx:.1} {cy:.1} {x2:.1} {y2:.1}\" stroke=\"{color}\" fill=\"none\"/>\n"
            ));
        }
        *copy += 1;
    }
    for &(x, y) in &pos {
        out.push_str(&format!(
            "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"black\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// The tetrahedron map: smallest member of the degree-3/6 family.
pub fn k4() -> RotationSystem {
    // Vertices 0..3; CCW rotations of the standard plane drawing.
    RotationSystem::new(
        4,
        vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        vec![
            vec![0, 1, 2],
            vec![0, 4, 3],
            vec![1, 3, 5],
            vec![2, 5, 4],
        ],
    )
    .expect("tetrahedron map is valid")
}

/// The octahedron map (all degrees 4): a triangulation outside the
/// degree-3/6 family but inside the max-degree-6 one.
pub fn octahedron() -> RotationSystem {
    RotationSystem::new(
        6,
        vec![
            (0, 1), // 0
            (0, 2), // 1
            (0, 3), // 2
            (0, 4), // 3
            (1, 2), // 4
            (2, 3), // 5
            (3, 4), // 6
            (1, 4), // 7
            (1, 5), // 8
            (2, 5), // 9
            (3, 5), // 10
            (4, 5), // 11
        ],
        vec![
            vec![0, 1, 2, 3],
            vec![4, 0, 7, 8],
            vec![1, 4, 9, 5],
            vec![5, 10, 6, 2],
            vec![7, 3, 6, 11],
            vec![8, 11, 10, 9],
        ],
    )
    .expect("octahedron map is valid")
}

/// The icosahedron map (all degrees 5), used for bound checks on the
/// max-degree-6 family.
pub fn icosahedron() -> RotationSystem {
    // 0 apex, 1..=5 upper ring, 6..=10 lower ring (6 == l1), 11 apex.
    let upper = |i: usize| 1 + (i % 5);
    let lower = |i: usize| 6 + (i % 5);
    let mut edges = Vec::new();
    let mut eid = BTreeMap::new();
    let add = |edges: &mut Vec<(usize, usize)>, eid: &mut BTreeMap<(usize, usize), usize>, u: usize, v: usize| {
        let key = (u.min(v), u.max(v));
        if !eid.contains_key(&key) {
            eid.insert(key, edges.len());
            edges.push(key);
        }
    };
    for i in 0..5 {
        add(&mut edges, &mut eid, 0, upper(i));
        add(&mut edges, &mut eid, upper(i), upper(i + 1));
        add(&mut edges, &mut eid, upper(i), lower(i));
        add(&mut edges, &mut eid, upper(i + 1), lower(i));
        add(&mut edges, &mut eid, lower(i), lower(i + 1));
        add(&mut edges, &mut eid, 11, lower(i));
    }
    let id = |eid: &BTreeMap<(usize, usize), usize>, u: usize, v: usize| eid[&(u.min(v), u.max(v))];
    let mut rotation = vec![Vec::new(); 12];
    rotation[0] = (0..5).map(|i| id(&eid, 0, upper(i))).collect();
    for i in 0..5 {
        // CCW seen from outside: [u_{i+1}, 0, u_{i-1}, l_{i-1}, l_i]
        rotation[upper(i)] = vec![
            id(&eid, upper(i), upper(i + 1)),
            id(&eid, upper(i), 0),
            id(&eid, upper(i), upper(i + 4)),
            id(&eid, upper(i), lower(i + 4)),
            id(&eid, upper(i), lower(i)),
        ];
        // CCW: [u_{i+1}, u_i, l_{i-1}, 11, l_{i+1}]
        rotation[lower(i)] = vec![
            id(&eid, lower(i), upper(i + 1)),
            id(&eid, lower(i), upper(i)),
            id(&eid, lower(i), lower(i + 4)),
            id(&eid, lower(i), 11),
            id(&eid, lower(i), lower(i + 1)),
        ];
    }
    rotation[11] = (0..5).rev().map(|i| id(&eid, 11, lower(i))).collect();
    RotationSystem::new(12, edges, rotation).expect("icosahedron map is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_a_valid_member() {
        let g = k4();
        let report = g.validate();
        assert!(report.connected);
        assert!(report.two_connected);
        assert!(report.all_faces_triangles);
        assert!(report.in_p);
        assert!(report.simple);
        assert_eq!(report.degree_histogram, BTreeMap::from([(3, 4)]));
        let faces = g.faces().unwrap();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn octahedron_is_in_h_but_not_p() {
        let g = octahedron();
        let report = g.validate();
        assert!(report.in_h);
        assert!(!report.in_p);
        assert_eq!(report.degree_histogram, BTreeMap::from([(4, 6)]));
        assert_eq!(g.faces().unwrap().len(), 8);
    }

    #[test]
    fn icosahedron_is_in_h() {
        let g = icosahedron();
        let report = g.validate();
        assert!(report.in_h);
        assert!(!report.in_p);
        assert_eq!(report.degree_histogram, BTreeMap::from([(5, 12)]));
        assert_eq!(g.faces().unwrap().len(), 20);
    }

    #[test]
    fn loop_edge_is_rejected() {
        let err = RotationSystem::new(1, vec![(0, 0)], vec![vec![0, 0]]).unwrap_err();
        assert!(matches!(err, PlaneMapError::LoopEdge { .. }));
    }

    #[test]
    fn parse_rejects_loop_document() {
        let doc = r#"{"vertices":2,"edges":[[0,0]],"rotation":[[0,0],[]]}"#;
        assert!(matches!(
            parse_rotation_system(doc),
            Err(PlaneMapError::LoopEdge { .. })
        ));
    }

    #[test]
    fn parse_rejects_non_incident_rotation_entry() {
        let doc = r#"{"vertices":3,"edges":[[0,1],[1,2]],"rotation":[[0],[0,1],[0]]}"#;
        assert!(matches!(
            parse_rotation_system(doc),
            Err(PlaneMapError::RotationEdgeNotIncident { vertex: 2, edge: 0 })
        ));
    }

    #[test]
    fn single_edge_has_one_bigon_face() {
        let g = RotationSystem::new(2, vec![(0, 1)], vec![vec![0], vec![0]]).unwrap();
        let faces = g.faces().unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 2);
        let report = g.validate();
        assert!(!report.all_faces_triangles);
        assert!(!report.two_connected);
    }

    #[test]
    fn mirror_is_an_involution() {
        let g = k4();
        assert_eq!(g.mirror().mirror(), g);
    }

    #[test]
    fn k4_mirror_is_op_equivalent_to_k4() {
        let g = k4();
        assert!(g.op_equivalent(&g.mirror()));
    }

    #[test]
    fn json_round_trips() {
        let g = k4();
        let text = export(&g, None, None, ExportFormat::Json).unwrap();
        let (back, layers) = parse_rotation_system(&text).unwrap();
        assert_eq!(back, g);
        assert!(layers.is_none());
    }

    #[test]
    fn dot_colors_by_class() {
        let g = k4();
        let classes = vec![0u8, 2, 1, 1, 2, 0];
        let dot = export(&g, Some(&classes), None, ExportFormat::Dot).unwrap();
        assert_eq!(dot.matches("color=red").count(), 2);
        assert_eq!(dot.matches("color=green").count(), 2);
        assert_eq!(dot.matches("color=blue").count(), 2);
    }

    #[test]
    fn unknown_format_is_an_error() {
        assert!("png".parse::<ExportFormat>().is_err());
    }

    #[test]
    fn op_equivalence_distinguishes_octahedron_from_k4() {
        assert!(!k4().op_equivalent(&octahedron()));
    }

    #[test]
    fn op_isomorphism_survives_relabeling() {
        // K4 with vertices renamed and rotations cyclically rotated.
        let g = k4();
        let perm = [2usize, 0, 3, 1];
        let edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        let mut rotation = vec![Vec::new(); 4];
        for v in 0..4 {
            let mut list: Vec<usize> = g.darts_at(v).iter().map(|&d| d / 2).collect();
            list.rotate_left(v % 3);
            rotation[perm[v]] = list;
        }
        let h = RotationSystem::new(4, edges, rotation).unwrap();
        let map = g.find_op_isomorphism(&h).expect("relabeled K4 is op-equivalent");
        // The returned map need not equal `perm` (K4 has automorphisms), but
        // it must carry edges to edges.
        let mut target: Vec<(usize, usize)> = h
            .edges()
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        target.sort_unstable();
        let mut image: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (map[u].min(map[v]), map[u].max(map[v])))
            .collect();
        image.sort_unstable();
        assert_eq!(image, target);
    }
}
