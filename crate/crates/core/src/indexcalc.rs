//! Index-vector and orbit arithmetic, and the graph walks that measure them.
//!
//! A class of a factored triangulation is summarized by the triple
//! (k, m, s): cycle count parameter, maximal path length, and the offset at
//! which the outer path attaches. The triple of the next class follows by
//! exact integer arithmetic (gcd, a Farey-neighbor coefficient, one modular
//! reduction); three steps return the starting triple. The same quantities
//! are measured directly on a rotation system by walking maximal class paths
//! and classifying left/right branches, which is what ties the arithmetic to
//! actual graphs.

use crate::planemap::{EdgeId, RotationSystem, VertexId};
use crate::trifactor::{class_components, ClassLabel, Factorization};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("index vector ({k},{m},{s}) outside the admissible set")]
    InvalidIndexVector { k: u64, m: u64, s: u64 },
    #[error("billiard parameter s={s} must satisfy 0 < s < m={m}")]
    BilliardRange { s: u64, m: u64 },
    #[error("farey parameter s={s} must satisfy 0 <= s < m={m}")]
    FareyRange { s: u64, m: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("factor structure violation: {0}")]
    Structure(String),
    #[error("edge {edge} is not adjacent to the walk")]
    NotAdjacent { edge: EdgeId },
    #[error("edge {edge} lies on the walk")]
    OnWalk { edge: EdgeId },
    #[error(transparent)]
    Factor(#[from] crate::trifactor::FactorError),
}

/// The admissible triple (k, m, s): 1 <= k, 1 <= m, 0 <= s < m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexVector {
    pub k: u64,
    pub m: u64,
    pub s: u64,
}

impl IndexVector {
    pub fn new(k: u64, m: u64, s: u64) -> Result<IndexVector, ArithError> {
        if k >= 1 && m >= 1 && s < m {
            Ok(IndexVector { k, m, s })
        } else {
            Err(ArithError::InvalidIndexVector { k, m, s })
        }
    }

    /// Order of the graph carrying this vector.
    pub fn order(&self) -> u64 {
        2 * self.k * self.m + 2
    }
}

impl std::fmt::Display for IndexVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.k, self.m, self.s)
    }
}

/// gcd with the convention gcd(0, m) = m.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mod_inverse(a: u64, n: u64) -> u64 {
    // Extended Euclid; requires gcd(a, n) = 1, n >= 1.
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inverse requires coprime arguments");
    t.rem_euclid(n as i128) as u64
}

/// Integers (a, b) with a*m - b*s = gcd(s, m) and 0 < b <= m / gcd(s, m).
///
/// `b` is the unique solution of b*s = -gcd (mod m) in that range; for s = 0
/// the range forces (a, b) = (1, 1). When s/m is in lowest terms, a/b is the
/// right Farey neighbor of s/m at order m.
pub fn farey_pair(s: u64, m: u64) -> Result<(u64, u64), ArithError> {
    if m < 1 || s >= m {
        return Err(ArithError::FareyRange { s, m });
    }
    if s == 0 {
        return Ok((1, 1));
    }
    let d = gcd(s, m);
    let (s1, m1) = (s / d, m / d);
    let mut b = (m1 - mod_inverse(s1 % m1, m1) % m1) % m1;
    if b == 0 {
        b = m1;
    }
    let a = (d + b * s) / m;
    debug_assert_eq!(a * m, b * s + d);
    Ok((a, b))
}

/// Scaled rebound positions of the s/m billiard: g[j] = 2m * F(j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilliardSequence {
    pub s: u64,
    pub m: u64,
    /// g[0] = 0; length m / gcd(s, m); all entries in [0, 2m).
    pub g: Vec<u64>,
}

/// First m/gcd(s,m) scaled rebound positions for 0 < s < m.
pub fn billiard(s: u64, m: u64) -> Result<BilliardSequence, ArithError> {
    if s == 0 || s >= m {
        return Err(ArithError::BilliardRange { s, m });
    }
    let n = (m / gcd(s, m)) as usize;
    let period = 2 * m;
    let mut g = Vec::with_capacity(n);
    g.push(0u64);
    for j in 1..n {
        let prev = g[j - 1];
        let next = if j % 2 == 1 {
            // previous index is odd (1-based): g[j] + g[j+1] = 2s (mod 2m)
            (2 * s + period - prev) % period
        } else {
            (period - prev) % period
        };
        g.push(next);
    }
    Ok(BilliardSequence { s, m, g })
}

/// The arithmetic successor of an index vector, together with the next
/// class's lower attachment offset b*k (the value in (0, m'] rather than the
/// reduced one).
pub fn step_with_s_minus(iv: IndexVector) -> (IndexVector, u64) {
    let d = gcd(iv.s, iv.m);
    let k_next = d;
    let m_next = iv.k * iv.m / d;
    let (_, b) = farey_pair(iv.s, iv.m).expect("valid vector has a farey pair");
    let s_minus_next = b * iv.k;
    debug_assert!(s_minus_next >= 1 && s_minus_next <= m_next);
    let s_next = (s_minus_next + m_next - k_next % m_next) % m_next;
    (
        IndexVector {
            k: k_next,
            m: m_next,
            s: s_next,
        },
        s_minus_next,
    )
}

/// Index vector of the next class.
pub fn step(iv: IndexVector) -> IndexVector {
    step_with_s_minus(iv).0
}

/// The unique representative of s + k (mod m) in (0, m].
pub fn s_minus_of(iv: IndexVector) -> u64 {
    let r = (iv.s + iv.k) % iv.m;
    if r == 0 {
        iv.m
    } else {
        r
    }
}

/// The three index vectors of a graph in step order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orbit {
    pub triple: [IndexVector; 3],
}

impl Orbit {
    /// Distinct vectors in the orbit (1, 2 or 3).
    pub fn as_set(&self) -> Vec<IndexVector> {
        let mut v = self.triple.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn size(&self) -> usize {
        self.as_set().len()
    }
}

impl std::fmt::Display for Orbit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {}", self.triple[0], self.triple[1], self.triple[2])
    }
}

/// Orbit of `iv`: the triple closed under `step`.
///
/// Panics if a third application of `step` fails to return to `iv`; that
/// would be an internal arithmetic defect, not a property of the input.
pub fn orbit(iv: IndexVector) -> Orbit {
    let second = step(iv);
    let third = step(second);
    let back = step(third);
    assert_eq!(
        back, iv,
        "step applied three times must return to the start"
    );
    Orbit {
        triple: [iv, second, third],
    }
}

/// Orbit-level classification flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClassification {
    /// Present iff the orbit has one element; holds (n, x) with m = k*n,
    /// s = k*x and n dividing x^2 + x + 1.
    pub one_point: Option<(u64, u64)>,
    /// One-point orbit of shape (k, k, 0) or (k, 3k, k).
    pub double_mirror: bool,
    /// False exactly when the orbit has the non-simple shape
    /// {(n,1,0), (1,n,n-1), (1,n,0)} with n > 1.
    pub simple_graph: bool,
    /// Orbit of the mirror-reflected graph.
    pub mirror_orbit: Orbit,
}

pub fn classify(o: &Orbit) -> OrbitClassification {
    let iv = o.triple[0];
    let one_point = if o.size() == 1 {
        assert_eq!(iv.m % iv.k, 0, "one-point orbit must have k | m");
        assert_eq!(iv.s % iv.k, 0, "one-point orbit must have k | s");
        let (n, x) = (iv.m / iv.k, iv.s / iv.k);
        assert_eq!(
            (x * x + x + 1) % n,
            0,
            "one-point witness must divide x^2 + x + 1"
        );
        Some((n, x))
    } else {
        None
    };
    let double_mirror = one_point.is_some()
        && ((iv.m == iv.k && iv.s == 0) || (iv.m == 3 * iv.k && iv.s == iv.k));
    let simple_graph = !o.triple.iter().any(|v| v.m == 1 && v.k > 1);
    let mirror_first = IndexVector {
        k: iv.k,
        m: iv.m,
        s: (iv.m - s_minus_of(iv)) % iv.m,
    };
    OrbitClassification {
        one_point,
        double_mirror,
        simple_graph,
        mirror_orbit: orbit(mirror_first),
    }
}

/// All one-point orbits (k, k*n, k*x) with k*n <= max_m, sorted by (m, k, s).
pub fn enumerate_one_point(max_m: u64) -> Vec<IndexVector> {
    let mut out = Vec::new();
    for k in 1..=max_m {
        for n in 1..=max_m / k {
            for x in 0..n {
                if (x * x + x + 1) % n == 0 {
                    let iv = IndexVector {
                        k,
                        m: k * n,
                        s: k * x,
                    };
                    assert_eq!(step(iv), iv, "enumerated vector must be a fixed point");
                    out.push(iv);
                }
            }
        }
    }
    out.sort_by_key(|v| (v.m, v.k, v.s));
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Graph walks
// ---------------------------------------------------------------------------

/// A maximal class-q path walked from a degree-3 anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWalk {
    pub q: ClassLabel,
    /// v_0 .. v_M; v_0 is the anchor.
    pub vertices: Vec<VertexId>,
    /// Edge of each consecutive vertex pair.
    pub edges: Vec<EdgeId>,
}

impl PathWalk {
    pub fn len(&self) -> u64 {
        self.edges.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Walks the maximal class-`q` path starting at `start`, which must carry
/// exactly one class-`q` edge (a degree-3 vertex does).
pub fn max_path_from(
    rs: &RotationSystem,
    f: &Factorization,
    start: VertexId,
    q: ClassLabel,
) -> Result<PathWalk, WalkError> {
    let class_edges_at = |v: VertexId| -> Vec<EdgeId> {
        rs.darts_at(v)
            .iter()
            .map(|&d| rs.edge_of(d))
            .filter(|&e| f.class_of(e) == q)
            .collect()
    };
    let first = match class_edges_at(start).as_slice() {
        [e] => *e,
        other => {
            return Err(WalkError::Structure(format!(
                "walk start {start} has {} class-{q} edges, expected 1",
                other.len()
            )))
        }
    };
    let mut vertices = vec![start];
    let mut edges = vec![first];
    let mut prev = first;
    let mut at = rs.other_endpoint(first, start).expect("incident edge");
    loop {
        vertices.push(at);
        let outgoing: Vec<EdgeId> = class_edges_at(at).into_iter().filter(|&e| e != prev).collect();
        match outgoing.as_slice() {
            [] => break,
            [e] => {
                edges.push(*e);
                prev = *e;
                at = rs.other_endpoint(*e, at).expect("incident edge");
            }
            _ => {
                return Err(WalkError::Structure(format!(
                    "vertex {at} continues the class-{q} walk ambiguously"
                )))
            }
        }
    }
    Ok(PathWalk {
        q,
        vertices,
        edges,
    })
}

/// Attachment point of an edge adjacent to the walk: the walk position j and
/// whether the edge branches off to the left.
///
/// Left means: `e` is the CCW successor of the outgoing walk dart, or the
/// incoming walk dart is the CCW successor of `e`, at the shared vertex.
pub fn branch_side(
    rs: &RotationSystem,
    w: &PathWalk,
    e: EdgeId,
) -> Result<(u64, bool), WalkError> {
    if w.edges.contains(&e) {
        return Err(WalkError::OnWalk { edge: e });
    }
    let (a, b) = rs.endpoints(e);
    let on_walk = |v: VertexId| w.vertices.iter().position(|&x| x == v);
    let hits: Vec<(usize, VertexId)> = [a, b]
        .into_iter()
        .filter_map(|v| on_walk(v).map(|j| (j, v)))
        .collect();
    let (j, v) = match hits.as_slice() {
        [(j, v)] => (*j, *v),
        _ => return Err(WalkError::NotAdjacent { edge: e }),
    };
    let m = w.len() as usize;
    let d_e = rs.dart_at(e, v).expect("edge incident to shared vertex");
    let mut left = false;
    if j < m {
        let d_out = rs
            .dart_at(w.edges[j], v)
            .expect("walk edge incident to its vertex");
        if rs.next_ccw(d_out) == d_e {
            left = true;
        }
    }
    if !left && j > 0 {
        let d_in = rs
            .dart_at(w.edges[j - 1], v)
            .expect("walk edge incident to its vertex");
        if rs.next_ccw(d_e) == d_in {
            left = true;
        }
    }
    Ok((j as u64, left))
}

/// Branch index of an edge `e` adjacent to the walk: the position j at which
/// it attaches if it branches left, otherwise 2M - j.
pub fn branch_index(rs: &RotationSystem, w: &PathWalk, e: EdgeId) -> Result<u64, WalkError> {
    let (j, left) = branch_side(rs, w, e)?;
    Ok(if left { j } else { 2 * w.len() - j })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkSign {
    Plus,
    Minus,
}

/// Measures the attachment offset of class `q` by the defining walk, from
/// explicitly chosen path ends. `a_path`/`c_path` select which maximal path
/// anchors the measurement and `a_end`/`c_end` which of its two ends; the
/// result is independent of all four choices.
pub fn s_walk_with(
    rs: &RotationSystem,
    f: &Factorization,
    q: ClassLabel,
    sign: WalkSign,
    a_path: usize,
    a_end: bool,
    c_end: bool,
) -> Result<u64, WalkError> {
    let cc = class_components(rs, f, q)?;
    let pick = |path: &Vec<VertexId>, end: bool| -> VertexId {
        if end {
            *path.last().expect("paths are nonempty")
        } else {
            path[0]
        }
    };
    let a = pick(&cc.paths[a_path], a_end);
    let c = pick(&cc.paths[1 - a_path], c_end);
    let walk_a = max_path_from(rs, f, a, q)?;
    let m = walk_a.len();
    let probe_class = match sign {
        WalkSign::Plus => q.succ(),
        WalkSign::Minus => q.pred(),
    };
    let walk_c = max_path_from(rs, f, c, probe_class)?;
    let on_a: std::collections::BTreeSet<VertexId> = walk_a.vertices.iter().copied().collect();
    let first = walk_c
        .edges
        .iter()
        .copied()
        .find(|&e| {
            let (u, v) = rs.endpoints(e);
            on_a.contains(&u) || on_a.contains(&v)
        })
        .ok_or_else(|| {
            WalkError::Structure(format!("class-{probe_class} walk never meets the class-{q} path"))
        })?;
    let (j, left) = branch_side(rs, &walk_a, first)?;
    // Left branches keep their index; right branches are measured from the
    // far end of the doubled path (index 2M - j, reduced by M).
    let value = if left { j } else { m - j };
    match sign {
        WalkSign::Plus => {
            if value >= m {
                return Err(WalkError::Structure(format!(
                    "forward offset {value} out of range [0, {m})"
                )));
            }
        }
        WalkSign::Minus => {
            if value == 0 || value > m {
                return Err(WalkError::Structure(format!(
                    "backward offset {value} out of range (0, {m}]"
                )));
            }
        }
    }
    Ok(value)
}

/// Deterministic measurement of the class-`q` attachment offset.
pub fn s_walk(
    rs: &RotationSystem,
    f: &Factorization,
    q: ClassLabel,
    sign: WalkSign,
) -> Result<u64, WalkError> {
    s_walk_with(rs, f, q, sign, 0, false, false)
}

/// Measured q-index-vector: (K, M) from the factor components, s from the
/// forward walk.
pub fn index_vector(
    rs: &RotationSystem,
    f: &Factorization,
    q: ClassLabel,
) -> Result<IndexVector, WalkError> {
    let cc = class_components(rs, f, q)?;
    let s = s_walk(rs, f, q, WalkSign::Plus)?;
    Ok(IndexVector {
        k: cc.k,
        m: cc.m,
        s,
    })
}

/// The three measured index vectors, indexed by class 0, 1, 2.
pub fn measured_vectors(
    rs: &RotationSystem,
    f: &Factorization,
) -> Result<[IndexVector; 3], WalkError> {
    Ok([
        index_vector(rs, f, ClassLabel(0))?,
        index_vector(rs, f, ClassLabel(1))?,
        index_vector(rs, f, ClassLabel(2))?,
    ])
}

/// Branch indices of the consecutive edges of the class-(q+1) walk from a
/// degree-3 anchor A that touch the class-q path from the same anchor, in
/// walk order. These follow the scaled billiard sequence of s/m.
pub fn adjacency_branch_indices(
    rs: &RotationSystem,
    f: &Factorization,
    q: ClassLabel,
) -> Result<Vec<u64>, WalkError> {
    let cc = class_components(rs, f, q)?;
    let a = cc.paths[0][0];
    let walk_a = max_path_from(rs, f, a, q)?;
    let walk_up = max_path_from(rs, f, a, q.succ())?;
    let on_a: std::collections::BTreeSet<VertexId> = walk_a.vertices.iter().copied().collect();
    walk_up
        .edges
        .iter()
        .copied()
        .filter(|&e| {
            let (u, v) = rs.endpoints(e);
            on_a.contains(&u) || on_a.contains(&v)
        })
        .map(|e| branch_index(rs, &walk_a, e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(k: u64, m: u64, s: u64) -> IndexVector {
        IndexVector::new(k, m, s).unwrap()
    }

    #[test]
    fn farey_pair_examples() {
        // Oracle for (3, 6): scan all b <= m/gcd = 2.
        let mut found = None;
        for b in 1..=2u64 {
            let num = 3 * b + 3;
            if num % 6 == 0 {
                found = Some((num / 6, b));
                break;
            }
        }
        assert_eq!(found, Some((1, 1)));
        assert_eq!(farey_pair(3, 6).unwrap(), (1, 1));
        // 1*7 - 3*2 = 1, matching Farey neighbors 2/7 < 1/3 of order 7.
        assert_eq!(farey_pair(2, 7).unwrap(), (1, 3));
        // s = 0 forces a = b = 1.
        assert_eq!(farey_pair(0, 2).unwrap(), (1, 1));
        assert!(farey_pair(7, 7).is_err());
    }

    #[test]
    fn billiard_small_cases() {
        let b = billiard(3, 6).unwrap();
        assert_eq!(b.g, vec![0, 6]);
        let b = billiard(2, 7).unwrap();
        assert_eq!(b.g, vec![0, 4, 10, 8, 6, 12, 2]);
        // Lemma-style checks: full even set, terminal value, Farey index.
        let mut set = b.g.clone();
        set.sort_unstable();
        assert_eq!(set, vec![0, 2, 4, 6, 8, 10, 12]);
        assert_eq!(*b.g.last().unwrap(), 2); // s/d even case
        let (_, fb) = farey_pair(2, 7).unwrap();
        assert_eq!(b.g[(fb - 1) as usize], 2 + 7 + 1); // a, b both odd, b != 1
        assert!(billiard(0, 5).is_err());
        assert!(billiard(5, 5).is_err());
    }

    #[test]
    fn step_walks_the_known_orbit() {
        assert_eq!(step(iv(1, 6, 3)), iv(3, 2, 0));
        assert_eq!(step(iv(3, 2, 0)), iv(2, 3, 1));
        assert_eq!(step(iv(2, 3, 1)), iv(1, 6, 3));
    }

    #[test]
    fn step_fixes_fibonacci_triples() {
        assert_eq!(step(iv(1, 40, 24)), iv(8, 5, 0));
        assert_eq!(step(iv(8, 5, 0)), iv(5, 8, 3));
        assert_eq!(step(iv(5, 8, 3)), iv(1, 40, 24));
    }

    #[test]
    fn step_cycles_the_non_simple_shape() {
        assert_eq!(step(iv(2, 1, 0)), iv(1, 2, 1));
        assert_eq!(step(iv(1, 2, 1)), iv(1, 2, 0));
        assert_eq!(step(iv(1, 2, 0)), iv(2, 1, 0));
    }

    #[test]
    fn s_minus_examples() {
        assert_eq!(s_minus_of(iv(1, 6, 3)), 4);
        assert_eq!(s_minus_of(iv(3, 2, 0)), 1);
        for k in 1..8 {
            assert_eq!(s_minus_of(iv(k, k, 0)), k);
        }
    }

    #[test]
    fn s_minus_of_step_matches_farey_coefficient() {
        for k in 1..12u64 {
            for m in 1..12u64 {
                for s in 0..m {
                    let v = iv(k, m, s);
                    let (next, s_minus) = step_with_s_minus(v);
                    assert_eq!(s_minus, s_minus_of(next));
                }
            }
        }
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit(iv(1, 1, 0)).as_set(), vec![iv(1, 1, 0)]);
        assert_eq!(orbit(iv(1, 7, 2)).as_set(), vec![iv(1, 7, 2)]);
        assert_eq!(
            orbit(iv(1, 6, 3)).as_set(),
            vec![iv(1, 6, 3), iv(2, 3, 1), iv(3, 2, 0)]
        );
    }

    #[test]
    fn classification_examples() {
        let c = classify(&orbit(iv(4, 4, 0)));
        assert_eq!(c.one_point, Some((1, 0)));
        assert!(c.double_mirror);

        let c = classify(&orbit(iv(2, 6, 2)));
        assert_eq!(c.one_point, Some((3, 1)));
        assert!(c.double_mirror);

        let c = classify(&orbit(iv(2, 1, 0)));
        assert!(!c.simple_graph);

        let c = classify(&orbit(iv(1, 7, 2)));
        assert!(!c.double_mirror);
        assert_eq!(c.mirror_orbit.as_set(), vec![iv(1, 7, 4)]);
        assert_eq!((4 * 4 + 4 + 1) % 7, 0);
    }

    #[test]
    fn one_point_enumeration_small() {
        assert_eq!(enumerate_one_point(1), vec![iv(1, 1, 0)]);
        let all = enumerate_one_point(520);
        assert!(all.contains(&iv(1, 507, 22)));
        assert_eq!((22u64 * 22 + 22 + 1) % 507, 0);
        assert!(!enumerate_one_point(506).contains(&iv(1, 507, 22)));
    }

    #[test]
    fn one_point_enumeration_with_small_offsets() {
        // Restricted to s <= 3 the fixed points are exactly the four
        // divisor families of x^2 + x + 1 for x <= 3.
        let max = 40;
        let got: Vec<IndexVector> = enumerate_one_point(max)
            .into_iter()
            .filter(|v| v.s <= 3)
            .collect();
        let mut expected: Vec<IndexVector> = (1..=max).map(|k| iv(k, k, 0)).collect();
        expected.extend([iv(1, 3, 1), iv(2, 6, 2), iv(3, 9, 3)]);
        expected.extend([iv(1, 7, 2), iv(1, 13, 3)]);
        expected.sort_by_key(|v| (v.m, v.k, v.s));
        assert_eq!(got, expected);
    }
}
