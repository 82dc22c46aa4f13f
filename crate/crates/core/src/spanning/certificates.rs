//! Spanning-partition certificates and their independent verifier.
//!
//! Constructions hand back vertex material; everything the certificate
//! claims (tree-ness, spine shape, leg structure, induced-ness) is re-derived
//! from the rotation system here, never trusted.

use crate::planemap::{RotationSystem, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("certificate lists a vertex out of range")]
    VertexOutOfRange,
    #[error("certificate repeats a vertex")]
    DuplicateVertex,
    #[error("certificate is empty")]
    Empty,
    #[error("spine and legs do not partition the vertex set")]
    NotPartitioned,
    #[error("vertex set does not induce a tree")]
    NotInducedTree,
    #[error("spine does not induce the stated path")]
    SpineNotPath,
    #[error("components left by spine removal differ from the stated legs")]
    LegsMismatch,
    #[error("a leg does not induce the stated path")]
    LegNotPath,
    #[error("legs do not all have the stated order {0}")]
    LegOrderMismatch(usize),
    #[error("leg order {0} is odd")]
    LegOrderOdd(usize),
    #[error("vertex sequence is not a path")]
    NotPath,
    #[error("vertex set induces extra edges beyond the path")]
    NotInduced,
    #[error("no admissible spine found")]
    NoSpine,
}

/// An induced even caterpillar: a spine path plus equal even-order leg paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaterpillarCertificate {
    pub vertices: Vec<VertexId>,
    pub spine: Vec<VertexId>,
    pub legs: Vec<Vec<VertexId>>,
    pub leg_order: usize,
}

/// An induced path given by its vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCertificate {
    pub vertices: Vec<VertexId>,
}

/// Tagged union for serialization: `{"kind": "caterpillar"|"path", ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpanningCertificate {
    Caterpillar {
        vertices: Vec<VertexId>,
        spine: Vec<VertexId>,
        legs: Vec<Vec<VertexId>>,
    },
    Path {
        vertices: Vec<VertexId>,
        spine: Vec<VertexId>,
        legs: Vec<Vec<VertexId>>,
    },
}

impl From<&CaterpillarCertificate> for SpanningCertificate {
    fn from(c: &CaterpillarCertificate) -> Self {
        SpanningCertificate::Caterpillar {
            vertices: c.vertices.clone(),
            spine: c.spine.clone(),
            legs: c.legs.clone(),
        }
    }
}

impl From<&PathCertificate> for SpanningCertificate {
    fn from(c: &PathCertificate) -> Self {
        SpanningCertificate::Path {
            vertices: c.vertices.clone(),
            spine: Vec::new(),
            legs: Vec::new(),
        }
    }
}

fn check_vertices(rs: &RotationSystem, vs: &[VertexId]) -> Result<BTreeSet<VertexId>, CertError> {
    if vs.is_empty() {
        return Err(CertError::Empty);
    }
    let mut set = BTreeSet::new();
    for &v in vs {
        if v >= rs.vertex_count() {
            return Err(CertError::VertexOutOfRange);
        }
        if !set.insert(v) {
            return Err(CertError::DuplicateVertex);
        }
    }
    Ok(set)
}

/// Number of edges with both endpoints inside the set (parallels counted).
fn induced_edge_count(rs: &RotationSystem, set: &BTreeSet<VertexId>) -> usize {
    rs.edges()
        .iter()
        .filter(|&&(u, v)| set.contains(&u) && set.contains(&v))
        .count()
}

fn induced_connected(rs: &RotationSystem, set: &BTreeSet<VertexId>) -> bool {
    let Some(&start) = set.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &d in rs.darts_at(v) {
            let w = rs.head(d);
            if set.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == set.len()
}

fn induces_tree(rs: &RotationSystem, set: &BTreeSet<VertexId>) -> bool {
    induced_edge_count(rs, set) == set.len() - 1 && induced_connected(rs, set)
}

/// Checks that the ordered sequence is an induced path of the host graph:
/// consecutive vertices adjacent and no further induced edges.
fn is_induced_path_sequence(rs: &RotationSystem, seq: &[VertexId]) -> Result<(), CertError> {
    let set = check_vertices(rs, seq)?;
    for w in seq.windows(2) {
        let adjacent = rs
            .darts_at(w[0])
            .iter()
            .any(|&d| rs.head(d) == w[1]);
        if !adjacent {
            return Err(CertError::NotPath);
        }
    }
    if induced_edge_count(rs, &set) != seq.len() - 1 {
        return Err(CertError::NotInduced);
    }
    Ok(())
}

/// Verifies a path certificate against the host graph.
pub fn verify_path(rs: &RotationSystem, c: &PathCertificate) -> Result<(), CertError> {
    is_induced_path_sequence(rs, &c.vertices)
}

/// Verifies a caterpillar certificate against the host graph: the vertex set
/// induces a tree, the spine induces the stated path, removing the spine
/// leaves exactly the stated legs as components, and all legs share the even
/// order claimed.
pub fn verify_caterpillar(rs: &RotationSystem, c: &CaterpillarCertificate) -> Result<(), CertError> {
    let all = check_vertices(rs, &c.vertices)?;
    let spine = check_vertices(rs, &c.spine)?;
    let mut covered = spine.clone();
    for leg in &c.legs {
        for &v in leg {
            if !covered.insert(v) {
                return Err(CertError::NotPartitioned);
            }
        }
    }
    if covered != all {
        return Err(CertError::NotPartitioned);
    }
    if !induces_tree(rs, &all) {
        return Err(CertError::NotInducedTree);
    }
    if is_induced_path_sequence(rs, &c.spine).is_err() {
        return Err(CertError::SpineNotPath);
    }
    // Components of the induced subgraph after spine removal.
    let rest: BTreeSet<VertexId> = all.difference(&spine).copied().collect();
    let mut comp_of: std::collections::BTreeMap<VertexId, usize> = std::collections::BTreeMap::new();
    let mut comp_count = 0usize;
    for &v in &rest {
        if comp_of.contains_key(&v) {
            continue;
        }
        let id = comp_count;
        comp_count += 1;
        let mut stack = vec![v];
        comp_of.insert(v, id);
        while let Some(x) = stack.pop() {
            for &d in rs.darts_at(x) {
                let w = rs.head(d);
                if rest.contains(&w) && !comp_of.contains_key(&w) {
                    comp_of.insert(w, id);
                    stack.push(w);
                }
            }
        }
    }
    if comp_count != c.legs.len() {
        return Err(CertError::LegsMismatch);
    }
    let mut seen_comp = vec![false; comp_count];
    for leg in &c.legs {
        let ids: BTreeSet<usize> = leg.iter().filter_map(|v| comp_of.get(v).copied()).collect();
        let [id] = ids.into_iter().collect::<Vec<_>>()[..] else {
            return Err(CertError::LegsMismatch);
        };
        if seen_comp[id] {
            return Err(CertError::LegsMismatch);
        }
        seen_comp[id] = true;
        let comp_size = comp_of.values().filter(|&&x| x == id).count();
        if comp_size != leg.len() {
            return Err(CertError::LegsMismatch);
        }
        if is_induced_path_sequence(rs, leg).is_err() {
            return Err(CertError::LegNotPath);
        }
        if leg.len() != c.leg_order {
            return Err(CertError::LegOrderMismatch(c.leg_order));
        }
    }
    if c.legs.is_empty() {
        if c.leg_order != 0 {
            return Err(CertError::LegOrderMismatch(c.leg_order));
        }
    } else if c.leg_order == 0 || c.leg_order % 2 != 0 {
        return Err(CertError::LegOrderOdd(c.leg_order));
    }
    Ok(())
}

/// Flag form of certificate verification.
pub fn verify_certificate(rs: &RotationSystem, c: &SpanningCertificate) -> bool {
    match c {
        SpanningCertificate::Caterpillar {
            vertices,
            spine,
            legs,
        } => {
            let leg_order = legs.first().map_or(0, |l| l.len());
            verify_caterpillar(
                rs,
                &CaterpillarCertificate {
                    vertices: vertices.clone(),
                    spine: spine.clone(),
                    legs: legs.clone(),
                    leg_order,
                },
            )
            .is_ok()
        }
        SpanningCertificate::Path { vertices, .. } => verify_path(
            rs,
            &PathCertificate {
                vertices: vertices.clone(),
            },
        )
        .is_ok(),
    }
}

/// Orders a vertex set known to induce a path into its vertex sequence.
pub fn extract_path(rs: &RotationSystem, set: &BTreeSet<VertexId>) -> Result<PathCertificate, CertError> {
    if set.is_empty() {
        return Err(CertError::Empty);
    }
    if induced_edge_count(rs, set) != set.len() - 1 || !induced_connected(rs, set) {
        return Err(CertError::NotPath);
    }
    let neighbors = |v: VertexId| -> Vec<VertexId> {
        let mut ns: Vec<VertexId> = rs
            .darts_at(v)
            .iter()
            .map(|&d| rs.head(d))
            .filter(|w| set.contains(w))
            .collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    };
    if set.len() == 1 {
        return Ok(PathCertificate {
            vertices: vec![*set.iter().next().expect("nonempty")],
        });
    }
    let ends: Vec<VertexId> = set.iter().copied().filter(|&v| neighbors(v).len() == 1).collect();
    if ends.len() != 2 {
        return Err(CertError::NotPath);
    }
    let mut seq = vec![ends[0]];
    let mut prev = None;
    let mut at = ends[0];
    while seq.len() < set.len() {
        let next = neighbors(at).into_iter().find(|&w| Some(w) != prev);
        match next {
            Some(w) => {
                seq.push(w);
                prev = Some(at);
                at = w;
            }
            None => return Err(CertError::NotPath),
        }
    }
    let cert = PathCertificate { vertices: seq };
    verify_path(rs, &cert)?;
    Ok(cert)
}

/// Searches for a spine decomposition exhibiting the set as an even
/// caterpillar. Candidate spines are the induced tree-paths between every
/// vertex pair, scanned in id order; the first decomposition whose leftover
/// components are equal even-order paths wins.
pub fn extract_caterpillar(
    rs: &RotationSystem,
    set: &BTreeSet<VertexId>,
) -> Result<CaterpillarCertificate, CertError> {
    if set.is_empty() {
        return Err(CertError::Empty);
    }
    if !induces_tree(rs, set) {
        return Err(CertError::NotInducedTree);
    }
    // A plain path is the cleanest decomposition; prefer it.
    if let Ok(p) = extract_path(rs, set) {
        return Ok(CaterpillarCertificate {
            vertices: set.iter().copied().collect(),
            spine: p.vertices,
            legs: Vec::new(),
            leg_order: 0,
        });
    }
    let vs: Vec<VertexId> = set.iter().copied().collect();
    // Tree adjacency restricted to the set.
    let tree_neighbors = |v: VertexId| -> Vec<VertexId> {
        let mut ns: Vec<VertexId> = rs
            .darts_at(v)
            .iter()
            .map(|&d| rs.head(d))
            .filter(|w| set.contains(w))
            .collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    };
    let tree_path = |a: VertexId, b: VertexId| -> Vec<VertexId> {
        // BFS in a tree gives the unique path.
        let mut prev: std::collections::BTreeMap<VertexId, VertexId> =
            std::collections::BTreeMap::new();
        let mut queue = std::collections::VecDeque::from([a]);
        prev.insert(a, a);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for w in tree_neighbors(v) {
                if !prev.contains_key(&w) {
                    prev.insert(w, v);
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![b];
        let mut at = b;
        while at != a {
            at = prev[&at];
            path.push(at);
        }
        path.reverse();
        path
    };

    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i..] {
            let spine = tree_path(a, b);
            let spine_set: BTreeSet<VertexId> = spine.iter().copied().collect();
            if is_induced_path_sequence(rs, &spine).is_err() {
                continue;
            }
            let rest: BTreeSet<VertexId> = set.difference(&spine_set).copied().collect();
            if rest.is_empty() {
                return Ok(CaterpillarCertificate {
                    vertices: vs.clone(),
                    spine,
                    legs: Vec::new(),
                    leg_order: 0,
                });
            }
            // Components of the remainder must be equal even-order paths.
            let mut remaining = rest.clone();
            let mut legs = Vec::new();
            let mut ok = true;
            while let Some(&seed) = remaining.iter().next() {
                let mut comp = BTreeSet::from([seed]);
                let mut stack = vec![seed];
                while let Some(v) = stack.pop() {
                    for w in tree_neighbors(v) {
                        if remaining.contains(&w) && comp.insert(w) {
                            stack.push(w);
                        }
                    }
                }
                for &v in &comp {
                    remaining.remove(&v);
                }
                match extract_path(rs, &comp) {
                    Ok(p) => legs.push(p.vertices),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let order = legs[0].len();
            if order % 2 != 0 || legs.iter().any(|l| l.len() != order) {
                continue;
            }
            let cert = CaterpillarCertificate {
                vertices: vs.clone(),
                spine,
                legs,
                leg_order: order,
            };
            if verify_caterpillar(rs, &cert).is_ok() {
                return Ok(cert);
            }
        }
    }
    Err(CertError::NoSpine)
}

/// Class sizes of the proper 2-coloring of an induced tree (larger first)
/// and whether they differ by at most one.
pub fn equitable_two_coloring(
    rs: &RotationSystem,
    set: &BTreeSet<VertexId>,
) -> Result<(usize, usize, bool), super::SpanError> {
    if set.is_empty() || !induces_tree(rs, set) {
        return Err(super::SpanError::NotATree);
    }
    let start = *set.iter().next().expect("nonempty");
    let mut color: std::collections::BTreeMap<VertexId, bool> =
        std::collections::BTreeMap::from([(start, false)]);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &d in rs.darts_at(v) {
            let w = rs.head(d);
            if set.contains(&w) && !color.contains_key(&w) {
                color.insert(w, !color[&v]);
                queue.push_back(w);
            }
        }
    }
    let ones = color.values().filter(|&&c| c).count();
    let zeros = set.len() - ones;
    let (hi, lo) = (zeros.max(ones), zeros.min(ones));
    Ok((hi, lo, hi - lo <= 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planemap::k4;
    use crate::planemap::RotationSystem;

    /// The order-12 member drawn with two fans above and below a horizontal
    /// path; used as the host for the spider-tree examples.
    pub(crate) fn fan_member() -> RotationSystem {
        // Vertices: 0..=5 the horizontal path, 6 cg, 7 cg1, 8 cg2 above,
        // 9 cd, 10 cd1, 11 cd2 below.
        let edges = vec![
            (0, 1),  // 0
            (1, 2),  // 1
            (2, 3),  // 2
            (3, 4),  // 3
            (4, 5),  // 4
            (6, 7),  // 5  cg-cg1
            (7, 8),  // 6  cg1-cg2
            (6, 2),  // 7
            (6, 3),  // 8
            (7, 2),  // 9
            (7, 3),  // 10
            (7, 1),  // 11
            (7, 4),  // 12
            (8, 1),  // 13
            (8, 4),  // 14
            (8, 0),  // 15
            (8, 5),  // 16
            (9, 10), // 17 cd-cd1
            (10, 11),// 18 cd1-cd2
            (9, 2),  // 19
            (9, 3),  // 20
            (10, 2), // 21
            (10, 3), // 22
            (10, 1), // 23
            (10, 4), // 24
            (11, 1), // 25
            (11, 4), // 26
            (11, 0), // 27
            (11, 5), // 28
            (8, 11), // 29 outer curve
        ];
        let rotation = vec![
            vec![0, 15, 27],             // 0
            vec![1, 11, 13, 0, 25, 23],  // 1
            vec![2, 7, 9, 1, 21, 19],    // 2
            vec![3, 10, 8, 2, 20, 22],   // 3
            vec![4, 14, 12, 3, 24, 26],  // 4
            vec![16, 4, 28],             // 5
            vec![5, 7, 8],               // 6 cg
            vec![6, 11, 9, 5, 10, 12],   // 7 cg1
            vec![29, 15, 13, 6, 14, 16], // 8 cg2
            vec![20, 19, 17],            // 9 cd
            vec![24, 22, 17, 21, 23, 18],// 10 cd1
            vec![28, 26, 18, 25, 27, 29],// 11 cd2
        ];
        RotationSystem::new(12, edges, rotation).expect("fan member is valid")
    }

    #[test]
    fn fan_member_is_in_p() {
        let g = fan_member();
        let report = g.validate();
        assert!(report.in_p, "report: {report:?}");
        assert_eq!(report.degree_histogram.get(&3), Some(&4));
    }

    #[test]
    fn spider_tree_is_not_equitable() {
        let g = fan_member();
        // Bold tree: s1=1, cd2=11, s4=4, s3=3, cg=6, cd=9.
        let set = BTreeSet::from([1, 11, 4, 3, 6, 9]);
        let (hi, lo, equitable) = equitable_two_coloring(&g, &set).unwrap();
        assert_eq!((hi, lo, equitable), (4, 2, false));
    }

    #[test]
    fn spider_as_unit_leg_caterpillar_fails_even_check() {
        let g = fan_member();
        let cert = CaterpillarCertificate {
            vertices: vec![1, 11, 4, 3, 6, 9],
            spine: vec![1, 11, 4, 3],
            legs: vec![vec![6], vec![9]],
            leg_order: 1,
        };
        assert_eq!(
            verify_caterpillar(&g, &cert),
            Err(CertError::LegOrderOdd(1))
        );
    }

    #[test]
    fn path_with_chord_is_not_induced() {
        let g = k4();
        let cert = PathCertificate {
            vertices: vec![0, 1, 2, 3],
        };
        assert_eq!(verify_path(&g, &cert), Err(CertError::NotInduced));
    }

    #[test]
    fn equitable_examples() {
        let g = fan_member();
        // A 7-path along the bottom fan: 0-1-...? use horizontal path 0..5
        // plus cd2: 5-... simpler: single vertex and a short path.
        let single = BTreeSet::from([0]);
        assert_eq!(equitable_two_coloring(&g, &single).unwrap(), (1, 0, true));
        let path3 = BTreeSet::from([0, 1, 2]);
        assert_eq!(equitable_two_coloring(&g, &path3).unwrap(), (2, 1, true));
        let not_tree = BTreeSet::from([2, 3, 6]);
        assert!(equitable_two_coloring(&g, &not_tree).is_err());
    }

    #[test]
    fn extract_recovers_paths_and_caterpillars() {
        let g = fan_member();
        let p = extract_path(&g, &BTreeSet::from([0, 1, 2, 3])).unwrap();
        assert!(p.vertices == vec![0, 1, 2, 3] || p.vertices == vec![3, 2, 1, 0]);
        // 4-path with two 2-legs: spine 2-3 with legs {6,7}? cg(6)-cg1(7)
        // attach at 2/3 ... use the bold set plus cg1 to make legs even:
        // {1, 11, 4, 3, 6, 9} has odd legs; instead check a plain path is
        // accepted as a caterpillar with no legs.
        let c = extract_caterpillar(&g, &BTreeSet::from([0, 1, 2, 3])).unwrap();
        assert_eq!(c.leg_order, 0);
        assert!(c.legs.is_empty());
    }
}
