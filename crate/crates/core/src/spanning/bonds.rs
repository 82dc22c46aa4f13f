//! Hamilton bonds: a vertex bipartition whose two sides both induce trees.
//! The cut between them is then automatically a minimal edge cut.

use super::SpanError;
use crate::planemap::{RotationSystem, VertexId};
use std::collections::BTreeMap;

pub const DEFAULT_BOND_LIMIT: usize = 26;

/// A bipartition of the vertex set; `side_a` holds vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side_a: Vec<VertexId>,
    pub side_b: Vec<VertexId>,
}

impl Bipartition {
    pub fn new(mut side_a: Vec<VertexId>, mut side_b: Vec<VertexId>) -> Bipartition {
        side_a.sort_unstable();
        side_b.sort_unstable();
        if side_b.contains(&0) {
            std::mem::swap(&mut side_a, &mut side_b);
        }
        Bipartition { side_a, side_b }
    }
}

fn side_flags(rs: &RotationSystem, p: &Bipartition) -> Result<Vec<bool>, SpanError> {
    let n = rs.vertex_count();
    let mut seen = vec![false; n];
    let mut in_a = vec![false; n];
    for &v in &p.side_a {
        if v >= n || seen[v] {
            return Err(SpanError::NotAPartition);
        }
        seen[v] = true;
        in_a[v] = true;
    }
    for &v in &p.side_b {
        if v >= n || seen[v] {
            return Err(SpanError::NotAPartition);
        }
        seen[v] = true;
    }
    if seen.iter().any(|&s| !s) || p.side_a.is_empty() || p.side_b.is_empty() {
        return Err(SpanError::NotAPartition);
    }
    Ok(in_a)
}

/// True iff the subgraph induced by `side` is a tree. Parallel edges inside
/// one side count twice and therefore refute tree-ness.
pub fn induces_tree(rs: &RotationSystem, side: &[VertexId]) -> bool {
    if side.is_empty() {
        return false;
    }
    let member: std::collections::BTreeSet<VertexId> = side.iter().copied().collect();
    let mut edge_count = 0usize;
    for &(u, v) in rs.edges() {
        if member.contains(&u) && member.contains(&v) {
            edge_count += 1;
        }
    }
    if edge_count != side.len() - 1 {
        return false;
    }
    // Connectivity over the induced subgraph.
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![side[0]];
    seen.insert(side[0]);
    while let Some(v) = stack.pop() {
        for &d in rs.darts_at(v) {
            let w = rs.head(d);
            if member.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == side.len()
}

/// True iff both sides of the bipartition induce trees.
pub fn is_hamilton_bond(rs: &RotationSystem, p: &Bipartition) -> Result<bool, SpanError> {
    side_flags(rs, p)?;
    Ok(induces_tree(rs, &p.side_a) && induces_tree(rs, &p.side_b))
}

/// Per-side counts of full-graph degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCensus {
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeCensus {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn count(&self, degree: usize) -> usize {
        self.counts.get(&degree).copied().unwrap_or(0)
    }
}

/// Degree censuses of the two end-trees of a Hamilton bond.
pub fn end_tree_census(
    rs: &RotationSystem,
    p: &Bipartition,
) -> Result<(DegreeCensus, DegreeCensus), SpanError> {
    if !is_hamilton_bond(rs, p)? {
        return Err(SpanError::NotAHamiltonBond);
    }
    let census = |side: &[VertexId]| {
        let mut counts = BTreeMap::new();
        for &v in side {
            *counts.entry(rs.degree(v)).or_insert(0usize) += 1;
        }
        DegreeCensus { counts }
    };
    Ok((census(&p.side_a), census(&p.side_b)))
}

/// Both sides show the same count for every degree.
pub fn balanced_per_degree(a: &DegreeCensus, b: &DegreeCensus) -> bool {
    a.counts == b.counts
}

/// Side orders differ by at most `slack`.
pub fn orders_within(a: &DegreeCensus, b: &DegreeCensus, slack: usize) -> bool {
    a.total().abs_diff(b.total()) <= slack
}

/// The cut identity sum Σ (deg - 2) over one side.
fn weighted_degree_sum(rs: &RotationSystem, side: &[VertexId]) -> i64 {
    side.iter().map(|&v| rs.degree(v) as i64 - 2).sum()
}

/// Σ (deg - 2) agrees on the two end-trees of any Hamilton bond of a plane
/// triangulation.
pub fn degree_sum_identity_holds(rs: &RotationSystem, p: &Bipartition) -> bool {
    weighted_degree_sum(rs, &p.side_a) == weighted_degree_sum(rs, &p.side_b)
}

/// Σ (6 - deg) over all vertices; equals 12 for every plane triangulation.
pub fn degree_deficiency_sum(rs: &RotationSystem) -> i64 {
    (0..rs.vertex_count()).map(|v| 6 - rs.degree(v) as i64).sum()
}

/// Enumerates every Hamilton bond (up to side swap) by growing the side
/// containing vertex 0 as an induced tree and testing the complement.
pub fn enumerate_hamilton_bonds(
    rs: &RotationSystem,
    limit: usize,
) -> Result<Vec<Bipartition>, SpanError> {
    let n = rs.vertex_count();
    if n > limit {
        return Err(SpanError::BoundExceeded { order: n, limit });
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    // Edge multiplicity between vertex pairs; parallel edges must count.
    let mut multi: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
    {
        let mut pair_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &(u, v) in rs.edges() {
            *pair_count.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        }
        for (&(u, v), &c) in &pair_count {
            multi[u].push((v, c));
            multi[v].push((u, c));
        }
    }
    let total_edges = rs.edge_count();

    let mut out = Vec::new();
    let mut in_a = vec![false; n];
    in_a[0] = true;
    let mut banned = vec![false; n];
    // Count of edges from each vertex into side A.
    let mut edges_into_a = vec![0usize; n];
    for &(w, c) in &multi[0] {
        edges_into_a[w] += c;
    }

    struct Ctx<'a> {
        multi: &'a [Vec<(VertexId, usize)>],
        total_edges: usize,
        n: usize,
    }

    fn complement_is_tree(ctx: &Ctx, in_a: &[bool], a_size: usize, a_edges: usize) -> bool {
        let c_size = ctx.n - a_size;
        if c_size == 0 {
            return false;
        }
        // Edge count inside the complement = total - inside A - cut.
        let cut: usize = (0..ctx.n)
            .filter(|&v| in_a[v])
            .map(|v| {
                ctx.multi[v]
                    .iter()
                    .filter(|&&(w, _)| !in_a[w])
                    .map(|&(_, c)| c)
                    .sum::<usize>()
            })
            .sum();
        let c_edges = ctx.total_edges - a_edges - cut;
        if c_edges != c_size - 1 {
            return false;
        }
        let start = (0..ctx.n).find(|&v| !in_a[v]).expect("complement nonempty");
        let mut seen = vec![false; ctx.n];
        seen[start] = true;
        let mut stack = vec![start];
        let mut visited = 1usize;
        while let Some(v) = stack.pop() {
            for &(w, _) in &ctx.multi[v] {
                if !in_a[w] && !seen[w] {
                    seen[w] = true;
                    visited += 1;
                    stack.push(w);
                }
            }
        }
        visited == c_size
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        ctx: &Ctx,
        in_a: &mut Vec<bool>,
        banned: &mut Vec<bool>,
        edges_into_a: &mut Vec<usize>,
        a_size: usize,
        a_edges: usize,
        out: &mut Vec<Bipartition>,
    ) {
        if complement_is_tree(ctx, in_a, a_size, a_edges) {
            let side_a: Vec<usize> = (0..ctx.n).filter(|&v| in_a[v]).collect();
            let side_b: Vec<usize> = (0..ctx.n).filter(|&v| !in_a[v]).collect();
            out.push(Bipartition::new(side_a, side_b));
        }
        // Candidates: undecided, unbanned, touching A by exactly one edge.
        let frontier: Vec<usize> = (0..ctx.n)
            .filter(|&v| !in_a[v] && !banned[v] && edges_into_a[v] >= 1)
            .collect();
        let mut newly_banned = Vec::new();
        for &v in &frontier {
            if edges_into_a[v] == 1 {
                in_a[v] = true;
                for &(w, c) in &ctx.multi[v] {
                    edges_into_a[w] += c;
                }
                grow(ctx, in_a, banned, edges_into_a, a_size + 1, a_edges + 1, out);
                in_a[v] = false;
                for &(w, c) in &ctx.multi[v] {
                    edges_into_a[w] -= c;
                }
            }
            // Banned for the remaining branches at this level, whether or
            // not it was extendable: vertices with 2+ edges into A can never
            // join any superset either.
            banned[v] = true;
            newly_banned.push(v);
        }
        for v in newly_banned {
            banned[v] = false;
        }
    }

    let ctx = Ctx {
        multi: &multi,
        total_edges,
        n,
    };
    grow(&ctx, &mut in_a, &mut banned, &mut edges_into_a, 1, 0, &mut out);
    out.sort_by(|x, y| x.side_a.cmp(&y.side_a));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planemap::{icosahedron, k4};

    #[test]
    fn k4_bond_examples() {
        let g = k4();
        let yes = Bipartition::new(vec![0, 1], vec![2, 3]);
        assert!(is_hamilton_bond(&g, &yes).unwrap());
        let no = Bipartition::new(vec![0], vec![1, 2, 3]);
        assert!(!is_hamilton_bond(&g, &no).unwrap());
        let bad = Bipartition::new(vec![0, 1], vec![1, 2, 3]);
        assert!(is_hamilton_bond(&g, &bad).is_err());
    }

    #[test]
    fn k4_has_exactly_three_bonds() {
        let g = k4();
        // Brute-force oracle over all bipartitions with vertex 0 on side A.
        let mut oracle = 0usize;
        for mask in 0..(1u32 << 3) {
            let side_a: Vec<usize> = std::iter::once(0)
                .chain((0..3).filter(|i| mask & (1 << i) != 0).map(|i| i + 1))
                .collect();
            let side_b: Vec<usize> = (1..4).filter(|v| !side_a.contains(v)).collect();
            if side_b.is_empty() {
                continue;
            }
            if induces_tree(&g, &side_a) && induces_tree(&g, &side_b) {
                oracle += 1;
            }
        }
        assert_eq!(oracle, 3);
        let bonds = enumerate_hamilton_bonds(&g, DEFAULT_BOND_LIMIT).unwrap();
        assert_eq!(bonds.len(), 3);
        for b in &bonds {
            let (ca, cb) = end_tree_census(&g, b).unwrap();
            assert_eq!(ca.count(3), 2);
            assert_eq!(cb.count(3), 2);
            assert!(degree_sum_identity_holds(&g, b));
        }
    }

    #[test]
    fn icosahedron_bonds_are_nearly_balanced() {
        let g = icosahedron();
        let bonds = enumerate_hamilton_bonds(&g, DEFAULT_BOND_LIMIT).unwrap();
        assert!(!bonds.is_empty());
        for b in &bonds {
            let (ca, cb) = end_tree_census(&g, b).unwrap();
            assert!(orders_within(&ca, &cb, 3));
            assert!(degree_sum_identity_holds(&g, b));
        }
    }

    #[test]
    fn bound_is_enforced() {
        let g = icosahedron();
        assert!(matches!(
            enumerate_hamilton_bonds(&g, 5),
            Err(SpanError::BoundExceeded { .. })
        ));
    }

    #[test]
    fn triangulation_deficiency_is_twelve() {
        assert_eq!(degree_deficiency_sum(&k4()), 12);
        assert_eq!(degree_deficiency_sum(&icosahedron()), 12);
    }
}
