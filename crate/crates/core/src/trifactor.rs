//! The unique three-way edge factorization.
//!
//! Around every vertex the counter-clockwise sequence of edge classes must
//! step through the cyclic group {0, 1, 2}. Anchoring edge 0 at class 0 makes
//! the assignment unique; the other two valid assignments are cyclic shifts.
//! Each class then induces two paths of equal length and a stack of cycles of
//! twice that length, whose counts are the graph's (K, M) parameters.

use crate::planemap::{EdgeId, RotationSystem, VertexId};
use thiserror::Error;

/// Element of the cyclic class group {0, 1, 2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassLabel(pub u8);

impl ClassLabel {
    pub fn new(q: u8) -> ClassLabel {
        ClassLabel(q % 3)
    }

    pub fn succ(self) -> ClassLabel {
        ClassLabel((self.0 + 1) % 3)
    }

    pub fn pred(self) -> ClassLabel {
        ClassLabel((self.0 + 2) % 3)
    }

    pub fn shift(self, by: u8) -> ClassLabel {
        ClassLabel((self.0 + by) % 3)
    }
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("class propagation conflict at edge {edge}: {found} vs {expected}")]
    PropagationConflict {
        edge: EdgeId,
        found: ClassLabel,
        expected: ClassLabel,
    },
    #[error("graph has no edges to factor")]
    Empty,
    #[error("class {q} component rooted at vertex {vertex} is neither a path nor a cycle")]
    BadComponent { q: ClassLabel, vertex: VertexId },
    #[error("class {q} factor has {paths} paths and {cycles} cycles; expected 2 paths and equal-length cycles")]
    BadShape { q: ClassLabel, paths: usize, cycles: usize },
    #[error("class {q} path end {vertex} does not have degree 3")]
    PathEndDegree { q: ClassLabel, vertex: VertexId },
}

/// Total assignment of a class to every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    class_of: Vec<ClassLabel>,
}

impl Factorization {
    pub fn class_of(&self, e: EdgeId) -> ClassLabel {
        self.class_of[e]
    }

    pub fn classes(&self) -> &[ClassLabel] {
        &self.class_of
    }

    /// Per-edge labels as raw bytes, for export coloring.
    pub fn class_bytes(&self) -> Vec<u8> {
        self.class_of.iter().map(|c| c.0).collect()
    }

    /// Number of edges in each class.
    pub fn class_sizes(&self) -> [usize; 3] {
        let mut sizes = [0usize; 3];
        for c in &self.class_of {
            sizes[c.0 as usize] += 1;
        }
        sizes
    }
}

/// Computes the unique factorization with edge 0 anchored at class 0.
///
/// Propagation is a BFS over darts: the CCW successor of a dart carries the
/// next class, the twin carries the same class. A conflict means the input is
/// not in the degree-3/6 family.
pub fn factorize(rs: &RotationSystem) -> Result<Factorization, FactorError> {
    if rs.edge_count() == 0 {
        return Err(FactorError::Empty);
    }
    let mut class_of: Vec<Option<ClassLabel>> = vec![None; rs.edge_count()];
    class_of[0] = Some(ClassLabel(0));
    let mut queue = std::collections::VecDeque::from([0usize, 1usize]);
    let mut seen = vec![false; rs.dart_count()];
    seen[0] = true;
    seen[1] = true;
    while let Some(d) = queue.pop_front() {
        let c = class_of[rs.edge_of(d)].expect("queued darts have a classified edge");
        for (nd, nc) in [
            (rs.next_ccw(d), c.succ()),
            (rs.prev_ccw(d), c.pred()),
            (rs.twin(d), c),
        ] {
            let e = rs.edge_of(nd);
            match class_of[e] {
                Some(found) if found != nc => {
                    return Err(FactorError::PropagationConflict {
                        edge: e,
                        found,
                        expected: nc,
                    });
                }
                Some(_) => {}
                None => class_of[e] = Some(nc),
            }
            if !seen[nd] {
                seen[nd] = true;
                queue.push_back(nd);
            }
        }
    }
    // Disconnected inputs leave unclassified edges; that is a structural
    // failure of the same kind as a conflict.
    let class_of = class_of
        .into_iter()
        .enumerate()
        .map(|(e, c)| {
            c.ok_or(FactorError::PropagationConflict {
                edge: e,
                found: ClassLabel(0),
                expected: ClassLabel(0),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Factorization { class_of })
}

/// Connected pieces of one class: two open paths and `k - 1` cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassComponents {
    pub q: ClassLabel,
    /// Both maximal paths, each as an ordered vertex sequence of length m + 1.
    pub paths: [Vec<VertexId>; 2],
    /// Cycles in cyclic vertex order, each of length 2m.
    pub cycles: Vec<Vec<VertexId>>,
    pub k: u64,
    pub m: u64,
}

/// Splits the class-`q` factor into its components and reads off (K, M).
pub fn class_components(
    rs: &RotationSystem,
    f: &Factorization,
    q: ClassLabel,
) -> Result<ClassComponents, FactorError> {
    // Per-vertex incident class-q edges.
    let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); rs.vertex_count()];
    for e in 0..rs.edge_count() {
        if f.class_of(e) == q {
            let (u, v) = rs.endpoints(e);
            incident[u].push(e);
            incident[v].push(e);
        }
    }
    let mut paths: Vec<Vec<VertexId>> = Vec::new();
    let mut cycles: Vec<Vec<VertexId>> = Vec::new();
    let mut visited = vec![false; rs.vertex_count()];

    // Walks a component starting at `start`, consuming `first` as the
    // outgoing edge, until the walk closes or dies out.
    let walk = |start: VertexId, first: EdgeId, visited: &mut Vec<bool>| -> Vec<VertexId> {
        let mut seq = vec![start];
        visited[start] = true;
        let mut prev_edge = first;
        let mut at = rs.other_endpoint(first, start).expect("incident edge");
        loop {
            seq.push(at);
            if at == start {
                seq.pop();
                break; // closed into a cycle
            }
            visited[at] = true;
            let next = incident[at].iter().copied().find(|&e| e != prev_edge);
            match next {
                Some(e) => {
                    prev_edge = e;
                    at = rs.other_endpoint(e, at).expect("incident edge");
                }
                None => break, // open end
            }
        }
        seq
    };

    for v in 0..rs.vertex_count() {
        if visited[v] || incident[v].len() != 1 {
            continue;
        }
        // Path end: walk to the other end.
        let seq = walk(v, incident[v][0], &mut visited);
        let last = *seq.last().expect("walk yields at least the start");
        if incident[last].len() != 1 {
            return Err(FactorError::BadComponent { q, vertex: v });
        }
        paths.push(seq);
    }
    for v in 0..rs.vertex_count() {
        if visited[v] {
            continue;
        }
        match incident[v].len() {
            2 => {
                let seq = walk(v, incident[v][0], &mut visited);
                cycles.push(seq);
            }
            _ => return Err(FactorError::BadComponent { q, vertex: v }),
        }
    }

    if paths.len() != 2 {
        return Err(FactorError::BadShape {
            q,
            paths: paths.len(),
            cycles: cycles.len(),
        });
    }
    let m = (paths[0].len() - 1) as u64;
    if m == 0 || (paths[1].len() - 1) as u64 != m {
        return Err(FactorError::BadShape {
            q,
            paths: paths.len(),
            cycles: cycles.len(),
        });
    }
    for c in &cycles {
        if c.len() as u64 != 2 * m {
            return Err(FactorError::BadShape {
                q,
                paths: paths.len(),
                cycles: cycles.len(),
            });
        }
    }
    for p in &paths {
        for &end in [p.first(), p.last()].into_iter().flatten() {
            if rs.degree(end) != 3 {
                return Err(FactorError::PathEndDegree { q, vertex: end });
            }
        }
    }
    paths.sort_by_key(|p| p.iter().min().copied());
    cycles.sort_by_key(|c| c.iter().min().copied());
    let k = cycles.len() as u64 + 1;
    let [p0, p1]: [Vec<VertexId>; 2] = paths.try_into().expect("exactly two paths");
    Ok(ClassComponents {
        q,
        paths: [p0, p1],
        cycles,
        k,
        m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planemap::{k4, octahedron};

    #[test]
    fn k4_classes_are_forced_in_rotation_order() {
        let g = k4();
        let f = factorize(&g).unwrap();
        // Every vertex sees one edge of each class, in CCW order q, q+1, q+2.
        for v in 0..4 {
            let darts = g.darts_at(v);
            assert_eq!(darts.len(), 3);
            let c0 = f.class_of(g.edge_of(darts[0]));
            assert_eq!(f.class_of(g.edge_of(darts[1])), c0.succ());
            assert_eq!(f.class_of(g.edge_of(darts[2])), c0.succ().succ());
        }
        assert_eq!(f.class_sizes(), [2, 2, 2]);
    }

    #[test]
    fn octahedron_cannot_be_factored() {
        let g = octahedron();
        assert!(matches!(
            factorize(&g),
            Err(FactorError::PropagationConflict { .. })
        ));
    }

    #[test]
    fn k4_components_are_two_unit_paths_per_class() {
        let g = k4();
        let f = factorize(&g).unwrap();
        for q in 0..3 {
            let cc = class_components(&g, &f, ClassLabel(q)).unwrap();
            assert_eq!((cc.k, cc.m), (1, 1));
            assert!(cc.cycles.is_empty());
            assert_eq!(cc.paths[0].len(), 2);
            assert_eq!(cc.paths[1].len(), 2);
        }
    }

    #[test]
    fn exactly_three_assignments_satisfy_the_rotation_condition_on_k4() {
        // Exhaustive sweep of all 3^6 labelings.
        let g = k4();
        let mut valid = 0usize;
        let e = g.edge_count();
        for code in 0..3usize.pow(e as u32) {
            let mut classes = Vec::with_capacity(e);
            let mut c = code;
            for _ in 0..e {
                classes.push((c % 3) as u8);
                c /= 3;
            }
            let ok = (0..g.vertex_count()).all(|v| {
                let darts = g.darts_at(v);
                (0..darts.len()).all(|i| {
                    let a = classes[g.edge_of(darts[i])];
                    let b = classes[g.edge_of(darts[(i + 1) % darts.len()])];
                    (a + 1) % 3 == b
                })
            });
            if ok {
                valid += 1;
            }
        }
        assert_eq!(valid, 3);
    }
}
