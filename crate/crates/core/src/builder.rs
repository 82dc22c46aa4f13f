//! Constructs the layered drawing realizing any admissible index vector.
//!
//! The drawing stacks an inner path, k - 1 concentric cycles and an outer
//! path, all of one edge class, joined by triangulated annuli whose crossing
//! edges alternate the other two classes. Both paths are folds of a
//! conceptual cycle with 2m positions (position p names vertex
//! min(p, 2m - p)); the outer fold may sit at any rotational offset, and the
//! offset realizing the requested attachment value is found by measuring
//! every candidate.

use crate::indexcalc::{index_vector, IndexVector};
use crate::planemap::{EdgeId, RotationSystem, VertexId};
use crate::trifactor::{factorize, ClassLabel};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("k must be ≥ 1")]
    KRange,
    #[error("m must be ≥ 1")]
    MRange,
    #[error("s must satisfy 0 ≤ s < m")]
    SRange,
    #[error("internal defect: no gluing offset of ({0}) measures the requested offset")]
    NoOffsetMatches(IndexVector),
    #[error("internal defect: offsets {0} and {1} measure the same value but give inequivalent maps")]
    AmbiguousOffsets(usize, usize),
}

/// A built rotation system together with its layer metadata.
#[derive(Debug, Clone)]
pub struct LayeredDrawing {
    pub system: RotationSystem,
    /// The vector measured at the anchor class (equals the request).
    pub iv: IndexVector,
    /// Vertex lists innermost first: inner path, the cycles, outer path.
    pub layers: Vec<Vec<VertexId>>,
    /// Rotational offset at which the outer fold was glued.
    pub gluing_offset: usize,
    /// A dart of the anchor class and the class itself (always class 0:
    /// edge 0 is the first inner path edge).
    pub anchor: (usize, ClassLabel),
}

/// Folding map of the conceptual 2m-cycle onto path vertices 0..=m.
fn fold(p: usize, two_m: usize) -> usize {
    let p = p % two_m;
    p.min(two_m - p)
}

/// Assembles the layered system for (k, m) with the outer fold glued at
/// rotational offset `rho`. Returns the system plus layer lists.
fn assemble(k: usize, m: usize, rho: usize) -> (RotationSystem, Vec<Vec<VertexId>>) {
    let two_m = 2 * m;
    let inner = |j: usize| j; // 0..=m
    let cycle = |r: usize, p: usize| (m + 1) + (r - 1) * two_m + (p % two_m); // r in 1..k
    let outer_base = (m + 1) + (k - 1) * two_m;
    let outer = |i: usize| outer_base + i; // 0..=m
    let vertex_count = outer_base + m + 1;

    // Vertex of conceptual layer r at position p.
    let at = |r: usize, p: usize| -> usize {
        if r == 0 {
            inner(fold(p, two_m))
        } else if r == k {
            outer(fold((p + two_m - rho % two_m) % two_m, two_m))
        } else {
            cycle(r, p)
        }
    };

    let mut edges: Vec<(usize, usize)> = Vec::new();
    // Inner path edges: edge j joins vertices j and j+1; edge 0 comes first
    // so the factorization anchor lands on the layer class.
    let ipe: Vec<EdgeId> = (0..m)
        .map(|j| {
            edges.push((inner(j), inner(j + 1)));
            edges.len() - 1
        })
        .collect();
    // Cycle edges per layer.
    let mut ce: Vec<Vec<EdgeId>> = vec![Vec::new(); k];
    for r in 1..k {
        ce[r] = (0..two_m)
            .map(|p| {
                edges.push((cycle(r, p), cycle(r, p + 1)));
                edges.len() - 1
            })
            .collect();
    }
    // Crossing edges of annulus r (between layers r-1 and r), keyed by the
    // upper conceptual position p: `av` drops straight down to position p,
    // `ad` to position p+1.
    let mut av: Vec<Vec<EdgeId>> = vec![Vec::new(); k + 1];
    let mut ad: Vec<Vec<EdgeId>> = vec![Vec::new(); k + 1];
    for r in 1..=k {
        av[r] = (0..two_m)
            .map(|p| {
                edges.push((at(r, p), at(r - 1, p)));
                edges.len() - 1
            })
            .collect();
        ad[r] = (0..two_m)
            .map(|p| {
                edges.push((at(r, p), at(r - 1, p + 1)));
                edges.len() - 1
            })
            .collect();
    }
    // Outer path edges.
    let ope: Vec<EdgeId> = (0..m)
        .map(|i| {
            edges.push((outer(i), outer(i + 1)));
            edges.len() - 1
        })
        .collect();

    let mut rotation: Vec<Vec<EdgeId>> = vec![Vec::new(); vertex_count];
    let wrap = |p: isize| -> usize { p.rem_euclid(two_m as isize) as usize };

    // Inner path vertices.
    rotation[inner(0)] = vec![ipe[0], ad[1][wrap(-1)], av[1][0]];
    rotation[inner(m)] = vec![ipe[m - 1], ad[1][m - 1], av[1][m % two_m]];
    for j in 1..m {
        rotation[inner(j)] = vec![
            ipe[j],
            ad[1][wrap(two_m as isize - j as isize - 1)],
            av[1][wrap(two_m as isize - j as isize)],
            ipe[j - 1],
            ad[1][j - 1],
            av[1][j],
        ];
    }
    // Cycle vertices.
    for r in 1..k {
        for p in 0..two_m {
            rotation[cycle(r, p)] = vec![
                av[r + 1][p],
                ce[r][p],
                ad[r][p],
                av[r][p],
                ce[r][wrap(p as isize - 1)],
                ad[r + 1][wrap(p as isize - 1)],
            ];
        }
    }
    // Outer path vertices. Persona positions of outer vertex i are rho + i
    // and rho - i.
    let pp = |i: isize| wrap(rho as isize + i);
    rotation[outer(0)] = vec![ope[0], ad[k][pp(0)], av[k][pp(0)]];
    rotation[outer(m)] = vec![ope[m - 1], ad[k][pp(m as isize)], av[k][pp(m as isize)]];
    for i in 1..m {
        let (p_fwd, p_bwd) = (pp(i as isize), pp(-(i as isize)));
        rotation[outer(i)] = vec![
            ope[i],
            ad[k][p_fwd],
            av[k][p_fwd],
            ope[i - 1],
            ad[k][p_bwd],
            av[k][p_bwd],
        ];
    }

    // Special case m = 1: on a 2-position fold the interior loops above are
    // empty and both fold rotations already listed every incidence.
    let rs = RotationSystem::new(vertex_count, edges, rotation)
        .expect("layered assembly forms a valid rotation system");

    let mut layers: Vec<Vec<VertexId>> = Vec::with_capacity(k + 1);
    layers.push((0..=m).collect());
    for r in 1..k {
        layers.push((0..two_m).map(|p| cycle(r, p)).collect());
    }
    layers.push((0..=m).map(outer).collect());
    (rs, layers)
}

/// Builds the layered drawing whose anchor-class index vector is `iv`.
///
/// Every gluing offset is assembled, validated and measured; the smallest
/// offset measuring the requested value is kept. Offsets that tie are
/// required to give op-equivalent maps.
pub fn build(iv: IndexVector) -> Result<LayeredDrawing, BuildError> {
    if iv.k < 1 {
        return Err(BuildError::KRange);
    }
    if iv.m < 1 {
        return Err(BuildError::MRange);
    }
    if iv.s >= iv.m {
        return Err(BuildError::SRange);
    }
    let (k, m) = (iv.k as usize, iv.m as usize);
    let mut matches: Vec<(usize, RotationSystem, Vec<Vec<VertexId>>)> = Vec::new();
    for rho in 0..2 * m {
        let (rs, layers) = assemble(k, m, rho);
        if !rs.validate().in_p {
            continue;
        }
        let f = factorize(&rs).expect("members factor");
        let measured = index_vector(&rs, &f, ClassLabel(0)).expect("members measure");
        debug_assert_eq!((measured.k, measured.m), (iv.k, iv.m));
        if measured.s == iv.s {
            matches.push((rho, rs, layers));
        }
    }
    let Some((rho, system, layers)) = matches.first().cloned() else {
        return Err(BuildError::NoOffsetMatches(iv));
    };
    for (other_rho, other, _) in matches.iter().skip(1) {
        if !system.op_equivalent(other) {
            return Err(BuildError::AmbiguousOffsets(rho, *other_rho));
        }
    }
    Ok(LayeredDrawing {
        system,
        iv,
        layers,
        gluing_offset: rho,
        anchor: (0, ClassLabel(0)),
    })
}

/// Convenience wrapper taking the raw triple.
pub fn build_kms(k: u64, m: u64, s: u64) -> Result<LayeredDrawing, BuildError> {
    if k < 1 {
        return Err(BuildError::KRange);
    }
    if m < 1 {
        return Err(BuildError::MRange);
    }
    if s >= m {
        return Err(BuildError::SRange);
    }
    build(IndexVector { k, m, s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexcalc::{orbit, step};
    use crate::planemap::k4;
    use crate::trifactor::class_components;

    fn iv(k: u64, m: u64, s: u64) -> IndexVector {
        IndexVector::new(k, m, s).unwrap()
    }

    #[test]
    fn unit_vector_builds_the_tetrahedron() {
        let d = build(iv(1, 1, 0)).unwrap();
        assert_eq!(d.system.vertex_count(), 4);
        assert!(d.system.op_equivalent(&k4()));
    }

    #[test]
    fn order_fourteen_member() {
        let d = build(iv(1, 6, 3)).unwrap();
        assert_eq!(d.system.vertex_count(), 14);
        let report = d.system.validate();
        assert!(report.in_p);
        assert_eq!(
            report.degree_histogram,
            std::collections::BTreeMap::from([(3, 4), (6, 10)])
        );
        assert_eq!(d.system.faces().unwrap().len(), 24);
    }

    #[test]
    fn doubled_edges_appear_for_unit_path_length() {
        let d = build(iv(2, 1, 0)).unwrap();
        assert_eq!(d.system.vertex_count(), 6);
        let report = d.system.validate();
        assert!(report.in_p);
        assert!(!report.simple);
    }

    #[test]
    fn orbit_mates_are_op_equivalent() {
        let a = build(iv(1, 6, 3)).unwrap();
        let b = build(iv(3, 2, 0)).unwrap();
        assert!(a.system.op_equivalent(&b.system));
    }

    #[test]
    fn measured_vector_round_trips_small() {
        let f = factorize(&build(iv(2, 3, 1)).unwrap().system).unwrap();
        // Edge 0 anchors class 0 on the inner path.
        assert_eq!(f.class_of(0), ClassLabel(0));
        for k in 1..=4u64 {
            for m in 1..=4u64 {
                for s in 0..m {
                    let d = build(iv(k, m, s)).unwrap();
                    let f = factorize(&d.system).unwrap();
                    let got = index_vector(&d.system, &f, ClassLabel(0)).unwrap();
                    assert_eq!(got, iv(k, m, s));
                    let cc = class_components(&d.system, &f, ClassLabel(0)).unwrap();
                    assert_eq!((cc.k, cc.m), (k, m));
                }
            }
        }
    }

    #[test]
    fn mirror_of_one_point_member() {
        let d = build(iv(1, 7, 2)).unwrap();
        let mirrored = d.system.mirror();
        let f = factorize(&mirrored).unwrap();
        let got = index_vector(&mirrored, &f, ClassLabel(0)).unwrap();
        assert_eq!(orbit(got).as_set(), vec![iv(1, 7, 4)]);
        assert!(!d.system.op_equivalent(&mirrored));
    }

    #[test]
    fn double_mirror_member_equals_its_mirror() {
        let d = build(iv(4, 4, 0)).unwrap();
        assert!(d.system.op_equivalent(&d.system.mirror()));
    }

    #[test]
    fn build_then_step_agrees_with_arithmetic() {
        for (k, m) in [(1u64, 6u64), (2, 3), (2, 5), (3, 2)] {
            for s in 0..m {
                let v = iv(k, m, s);
                let d = build(v).unwrap();
                let f = factorize(&d.system).unwrap();
                let v1 = index_vector(&d.system, &f, ClassLabel(1)).unwrap();
                assert_eq!(v1, step(v), "stepping {v}");
            }
        }
    }

    #[test]
    fn rejects_out_of_range_requests() {
        assert_eq!(build_kms(1, 0, 0).unwrap_err(), BuildError::MRange);
        assert_eq!(build_kms(0, 1, 0).unwrap_err(), BuildError::KRange);
        assert_eq!(build_kms(1, 3, 3).unwrap_err(), BuildError::SRange);
    }
}
