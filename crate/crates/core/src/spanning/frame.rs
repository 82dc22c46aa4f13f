//! Layer coordinates of a layered drawing, and the two surgeries the
//! spanning constructions need: folding away the innermost layers, and
//! squashing the outermost cycle pair.
//!
//! A frame records, for each layer and annulus, which edge sits at which
//! conceptual position. Positions live on a cycle of 2m slots; path layers
//! fold slot p onto vertex min(p, 2m - p).

use super::SpanError;
use crate::builder::LayeredDrawing;
use crate::indexcalc::index_vector;
use crate::planemap::{EdgeId, RotationSystem, VertexId};
use crate::trifactor::{factorize, ClassLabel, Factorization};

/// Edge-level layer coordinates. Layers are indexed 0 (inner path) through
/// k (outer path); annulus r sits between layers r-1 and r.
#[derive(Debug, Clone)]
pub struct Frame {
    pub k: usize,
    pub m: usize,
    /// Class of the layer edges.
    pub q: ClassLabel,
    /// layers[0]: inner path vertices 0..=m; layers[r] (1 <= r < k): cycle
    /// vertices by position; layers[k]: outer path vertices 0..=m.
    pub layers: Vec<Vec<VertexId>>,
    /// Inner path edge j joins layer-0 vertices j and j+1.
    pub ipe: Vec<EdgeId>,
    /// ce[r][p] joins cycle-r positions p and p+1 (r in 1..k; ce[0] unused).
    pub ce: Vec<Vec<EdgeId>>,
    /// av[r][p]: crossing edge of annulus r dropping from position p to
    /// position p (class q+2). Index r in 1..=k; av[0] unused.
    pub av: Vec<Vec<EdgeId>>,
    /// ad[r][p]: crossing edge of annulus r dropping from position p to
    /// position p+1 (class q+1).
    pub ad: Vec<Vec<EdgeId>>,
}

fn fold(p: usize, two_m: usize) -> usize {
    let p = p % two_m;
    p.min(two_m - p)
}

/// The class-`q` edges joining `u` and `v`, in id order.
fn class_edges_between(
    rs: &RotationSystem,
    f: &Factorization,
    q: ClassLabel,
    u: VertexId,
    v: VertexId,
) -> Vec<EdgeId> {
    rs.darts_at(u)
        .iter()
        .map(|&d| rs.edge_of(d))
        .filter(|&e| f.class_of(e) == q && rs.other_endpoint(e, u) == Some(v))
        .collect()
}

impl Frame {
    /// Rebuilds edge coordinates from a system plus its layer vertex lists.
    /// Requires at least one cycle layer (k >= 2); every adjacency of the
    /// layered pattern is checked, so foreign metadata cannot slip through.
    pub fn reconstruct(
        rs: &RotationSystem,
        f: &Factorization,
        layers: &[Vec<VertexId>],
    ) -> Result<Frame, SpanError> {
        if layers.len() < 3 {
            return Err(SpanError::BadLayers(
                "need inner path, at least one cycle, and outer path".into(),
            ));
        }
        let k = layers.len() - 1;
        let m = layers[0]
            .len()
            .checked_sub(1)
            .ok_or_else(|| SpanError::BadLayers("empty inner layer".into()))?;
        if m == 0 || layers[k].len() != m + 1 {
            return Err(SpanError::BadLayers("path layers must hold m+1 vertices".into()));
        }
        let two_m = 2 * m;
        for r in 1..k {
            if layers[r].len() != two_m {
                return Err(SpanError::BadLayers(format!(
                    "cycle layer {r} holds {} vertices, expected {two_m}",
                    layers[r].len()
                )));
            }
        }
        let q = {
            let es = rs
                .darts_at(layers[0][0])
                .iter()
                .map(|&d| rs.edge_of(d))
                .filter(|&e| rs.other_endpoint(e, layers[0][0]) == Some(layers[0][1]))
                .collect::<Vec<_>>();
            match es.as_slice() {
                [e, ..] => f.class_of(*e),
                [] => return Err(SpanError::BadLayers("inner path edge missing".into())),
            }
        };

        let mut ipe = Vec::with_capacity(m);
        for j in 0..m {
            match class_edges_between(rs, f, q, layers[0][j], layers[0][j + 1]).as_slice() {
                [e] => ipe.push(*e),
                _ => return Err(SpanError::BadLayers(format!("inner path edge {j} not unique"))),
            }
        }
        let mut ce: Vec<Vec<EdgeId>> = vec![Vec::new(); k];
        for r in 1..k {
            if m == 1 {
                // Both positions are joined by a parallel pair; assign the
                // two copies in id order. The fold identifies them anyway.
                let pair = class_edges_between(rs, f, q, layers[r][0], layers[r][1]);
                if pair.len() != 2 {
                    return Err(SpanError::BadLayers(format!(
                        "cycle layer {r} must be a doubled edge"
                    )));
                }
                ce[r] = pair;
            } else {
                for p in 0..two_m {
                    match class_edges_between(
                        rs,
                        f,
                        q,
                        layers[r][p],
                        layers[r][(p + 1) % two_m],
                    )
                    .as_slice()
                    {
                        [e] => ce[r].push(*e),
                        _ => {
                            return Err(SpanError::BadLayers(format!(
                                "cycle layer {r} edge at position {p} not unique"
                            )))
                        }
                    }
                }
            }
        }

        let vertex_layer_pos = |r: usize, p: usize| -> VertexId {
            if r == 0 {
                layers[0][fold(p, two_m)]
            } else {
                layers[r][p % two_m]
            }
        };
        let mut av: Vec<Vec<EdgeId>> = vec![Vec::new(); k + 1];
        let mut ad: Vec<Vec<EdgeId>> = vec![Vec::new(); k + 1];
        // Annuli below the outer path: keyed by the upper cycle vertex.
        for r in 1..k {
            for p in 0..two_m {
                let upper = layers[r][p];
                let down_v = class_edges_between(rs, f, q.pred(), upper, vertex_layer_pos(r - 1, p));
                let down_d =
                    class_edges_between(rs, f, q.succ(), upper, vertex_layer_pos(r - 1, p + 1));
                match (down_v.as_slice(), down_d.as_slice()) {
                    ([ev], [ed]) => {
                        av[r].push(*ev);
                        ad[r].push(*ed);
                    }
                    _ => {
                        return Err(SpanError::BadLayers(format!(
                            "annulus {r} crossing edges at position {p} not unique"
                        )))
                    }
                }
            }
        }
        // Outer annulus: keyed by the lower cycle vertex. The class-(q+2)
        // up-edge at lower position p is av[k][p]; the class-(q+1) up-edge
        // at lower position p+1 is ad[k][p].
        let outer_set: std::collections::BTreeSet<VertexId> = layers[k].iter().copied().collect();
        let up_edges = |v: VertexId, class: ClassLabel| -> Vec<EdgeId> {
            rs.darts_at(v)
                .iter()
                .map(|&d| rs.edge_of(d))
                .filter(|&e| {
                    f.class_of(e) == class
                        && rs
                            .other_endpoint(e, v)
                            .map(|w| outer_set.contains(&w))
                            .unwrap_or(false)
                })
                .collect()
        };
        for p in 0..two_m {
            let lower_v = layers[k - 1][p];
            let lower_d = layers[k - 1][(p + 1) % two_m];
            match (
                up_edges(lower_v, q.pred()).as_slice(),
                up_edges(lower_d, q.succ()).as_slice(),
            ) {
                ([ev], [ed]) => {
                    av[k].push(*ev);
                    ad[k].push(*ed);
                }
                _ => {
                    return Err(SpanError::BadLayers(format!(
                        "outer annulus crossing edges at position {p} not unique"
                    )))
                }
            }
        }
        Ok(Frame {
            k,
            m,
            q,
            layers: layers.to_vec(),
            ipe,
            ce,
            av,
            ad,
        })
    }
}

/// Output of a surgery: the rebuilt system with dense ids, its layer lists,
/// and the map from new vertex ids back to the ids of the input system.
pub struct Surgered {
    pub system: RotationSystem,
    pub layers: Vec<Vec<VertexId>>,
    pub to_old: Vec<VertexId>,
}

/// Shared tail of both surgeries: renumber kept vertices, renumber kept
/// edges in the given order, map rotations, and build the system.
fn rebuild(
    old: &RotationSystem,
    new_layers_old_ids: Vec<Vec<VertexId>>,
    kept_edges_in_order: Vec<EdgeId>,
    old_edge_remap: &std::collections::BTreeMap<EdgeId, EdgeId>,
    old_vertex_fold: &std::collections::BTreeMap<VertexId, VertexId>,
    template_rotations: std::collections::BTreeMap<VertexId, Vec<EdgeId>>,
) -> Surgered {
    let mut to_old: Vec<VertexId> = Vec::new();
    let mut old_to_new: std::collections::BTreeMap<VertexId, VertexId> =
        std::collections::BTreeMap::new();
    for layer in &new_layers_old_ids {
        for &v in layer {
            old_to_new.entry(v).or_insert_with(|| {
                to_old.push(v);
                to_old.len() - 1
            });
        }
    }
    let new_edge_id: std::collections::BTreeMap<EdgeId, usize> = kept_edges_in_order
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    let map_edge = |e: EdgeId| -> usize {
        let canonical = old_edge_remap.get(&e).copied().unwrap_or(e);
        new_edge_id[&canonical]
    };
    let map_vertex = |v: VertexId| -> usize {
        let folded = old_vertex_fold.get(&v).copied().unwrap_or(v);
        old_to_new[&folded]
    };
    let new_edges: Vec<(usize, usize)> = kept_edges_in_order
        .iter()
        .map(|&e| {
            let (u, v) = old.endpoints(e);
            (map_vertex(u), map_vertex(v))
        })
        .collect();
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); to_old.len()];
    for (new_v, &old_v) in to_old.iter().enumerate() {
        rotation[new_v] = match template_rotations.get(&old_v) {
            Some(list) => list.iter().map(|&e| map_edge(e)).collect(),
            None => old
                .darts_at(old_v)
                .iter()
                .map(|&d| map_edge(old.edge_of(d)))
                .collect(),
        };
    }
    let layers: Vec<Vec<usize>> = new_layers_old_ids
        .iter()
        .map(|l| l.iter().map(|&v| map_vertex(v)).collect())
        .collect();
    let system = RotationSystem::new(to_old.len(), new_edges, rotation)
        .expect("surgery output is structurally valid");
    Surgered {
        system,
        layers,
        to_old,
    }
}

/// Removes the inner path and the first l-1 cycles, then folds cycle l into
/// a new inner path hinged at positions 0 and m. Valid for 1 <= l <= k-1.
pub fn contract_inner(rs: &RotationSystem, frame: &Frame, l: usize) -> Result<Surgered, SpanError> {
    let (k, m) = (frame.k, frame.m);
    if l < 1 || l > k - 1 {
        return Err(SpanError::StructuralAssertion(format!(
            "contract_inner needs 1 <= l <= {}, got {l}",
            k - 1
        )));
    }
    let two_m = 2 * m;
    // New inner path: folded positions 0..=m of cycle l.
    let folded: Vec<VertexId> = (0..=m).map(|j| frame.layers[l][j]).collect();
    let mut new_layers = vec![folded];
    for r in l + 1..=k {
        new_layers.push(frame.layers[r].clone());
    }

    // Cycle-l edges pair up under the fold: position j with 2m-1-j.
    let mut edge_remap = std::collections::BTreeMap::new();
    let mut vertex_fold = std::collections::BTreeMap::new();
    for j in 0..m {
        edge_remap.insert(frame.ce[l][two_m - 1 - j], frame.ce[l][j]);
    }
    for p in m + 1..two_m {
        vertex_fold.insert(frame.layers[l][p], frame.layers[l][two_m - p]);
    }

    // Kept edges, new ids in this order: inner path, cycle edges of kept
    // layers, crossing edges of kept annuli, then the outer path edges and
    // anything else untouched (there is none besides those).
    let mut kept: Vec<EdgeId> = Vec::new();
    for j in 0..m {
        kept.push(frame.ce[l][j]);
    }
    for r in l + 1..k {
        kept.extend(&frame.ce[r]);
    }
    for r in l + 1..=k {
        kept.extend(&frame.av[r]);
        kept.extend(&frame.ad[r]);
    }
    // Outer path edges: every class-q edge among outer vertices.
    let outer_path_edges: Vec<EdgeId> = (0..rs.edge_count())
        .filter(|&e| {
            let (u, v) = rs.endpoints(e);
            frame.layers[k].contains(&u) && frame.layers[k].contains(&v)
        })
        .collect();
    kept.extend(&outer_path_edges);

    // Template rotations for the folded vertices, mirroring the builder's
    // inner-path pattern; av/ad of annulus l+1 become the new annulus 1.
    let wrap = |p: isize| -> usize { p.rem_euclid(two_m as isize) as usize };
    let mut templates = std::collections::BTreeMap::new();
    let ipe_new = |j: usize| frame.ce[l][j];
    templates.insert(
        frame.layers[l][0],
        vec![ipe_new(0), frame.ad[l + 1][two_m - 1], frame.av[l + 1][0]],
    );
    templates.insert(
        frame.layers[l][m],
        vec![ipe_new(m - 1), frame.ad[l + 1][m - 1], frame.av[l + 1][m % two_m]],
    );
    for j in 1..m {
        templates.insert(
            frame.layers[l][j],
            vec![
                ipe_new(j),
                frame.ad[l + 1][wrap(two_m as isize - j as isize - 1)],
                frame.av[l + 1][wrap(two_m as isize - j as isize)],
                ipe_new(j - 1),
                frame.ad[l + 1][j - 1],
                frame.av[l + 1][j],
            ],
        );
    }

    let out = rebuild(rs, new_layers, kept, &edge_remap, &vertex_fold, templates);
    if !out.system.validate().in_p {
        return Err(SpanError::StructuralAssertion(
            "inner contraction left the family".into(),
        ));
    }
    Ok(out)
}

/// Removes the outermost two cycles, identifying the outermost cycle onto
/// the one two levels below it (position-wise). Valid for k >= 4.
pub fn contract_top(rs: &RotationSystem, frame: &Frame) -> Result<Surgered, SpanError> {
    let (k, m) = (frame.k, frame.m);
    if k < 4 {
        return Err(SpanError::StructuralAssertion(format!(
            "contract_top needs k >= 4, got {k}"
        )));
    }
    let two_m = 2 * m;
    let x = k - 3;
    let mut new_layers: Vec<Vec<VertexId>> = Vec::new();
    for r in 0..=x {
        new_layers.push(frame.layers[r].clone());
    }
    new_layers.push(frame.layers[k].clone());

    // Outer-annulus crossings re-target from the removed top cycle onto the
    // x layer at the same position; no folding, no edge identification.
    let mut vertex_fold = std::collections::BTreeMap::new();
    for p in 0..two_m {
        vertex_fold.insert(frame.layers[k - 1][p], frame.layers[x][p]);
    }
    let edge_remap = std::collections::BTreeMap::new();

    let mut kept: Vec<EdgeId> = frame.ipe.clone();
    for r in 1..=x {
        kept.extend(&frame.ce[r]);
    }
    for r in 1..=x {
        kept.extend(&frame.av[r]);
        kept.extend(&frame.ad[r]);
    }
    kept.extend(&frame.av[k]);
    kept.extend(&frame.ad[k]);
    let outer_path_edges: Vec<EdgeId> = (0..rs.edge_count())
        .filter(|&e| {
            let (u, v) = rs.endpoints(e);
            frame.layers[k].contains(&u) && frame.layers[k].contains(&v)
        })
        .collect();
    kept.extend(&outer_path_edges);

    // The x layer now carries the old outer-annulus crossings above it.
    let wrap = |p: isize| -> usize { p.rem_euclid(two_m as isize) as usize };
    let mut templates = std::collections::BTreeMap::new();
    for p in 0..two_m {
        templates.insert(
            frame.layers[x][p],
            vec![
                frame.av[k][p],
                frame.ce[x][p],
                frame.ad[x][p],
                frame.av[x][p],
                frame.ce[x][wrap(p as isize - 1)],
                frame.ad[k][wrap(p as isize - 1)],
            ],
        );
    }

    let out = rebuild(rs, new_layers, kept, &edge_remap, &vertex_fold, templates);
    if !out.system.validate().in_p {
        return Err(SpanError::StructuralAssertion(
            "top contraction left the family".into(),
        ));
    }
    Ok(out)
}

/// Builds a layered drawing from parsed layer metadata, validating the
/// pattern and measuring the anchor vector.
pub fn layered_from_imported(
    system: RotationSystem,
    layers: Vec<Vec<VertexId>>,
) -> Result<LayeredDrawing, SpanError> {
    if layers.len() < 2 || layers[0].len() < 2 {
        return Err(SpanError::BadLayers("too few layers".into()));
    }
    let f = factorize(&system)?;
    let k = layers.len() - 1;
    let m = layers[0].len() - 1;
    let two_m = 2 * m;
    let q = {
        let v0 = layers[0][0];
        let v1 = layers[0][1];
        let e = rs_edge_between(&system, v0, v1)
            .ok_or_else(|| SpanError::BadLayers("inner path edge missing".into()))?;
        f.class_of(e)
    };
    let iv = index_vector(&system, &f, q)?;
    if iv.k as usize != k || iv.m as usize != m {
        return Err(SpanError::BadLayers(format!(
            "layers describe (k,m)=({k},{m}) but the class measures ({},{})",
            iv.k, iv.m
        )));
    }
    let gluing_offset = if k >= 2 {
        let frame = Frame::reconstruct(&system, &f, &layers)?;
        let outer0 = layers[k][0];
        (0..two_m)
            .find(|&p| {
                let (u, v) = system.endpoints(frame.av[k][p]);
                u == outer0 || v == outer0
            })
            .unwrap_or(0)
    } else {
        // Single annulus: the fold at outer vertex 0 touches the inner
        // vertices at folded positions rho and rho + 1.
        let outer0 = layers[k][0];
        let mut down_pos: Vec<usize> = system
            .darts_at(outer0)
            .iter()
            .map(|&d| system.head(d))
            .filter_map(|w| layers[0].iter().position(|&x| x == w))
            .collect();
        down_pos.sort_unstable();
        (0..two_m)
            .find(|&c| {
                let mut want = vec![fold(c, two_m), fold(c + 1, two_m)];
                want.sort_unstable();
                want == down_pos
            })
            .unwrap_or(0)
    };
    let anchor_dart = {
        let e = rs_edge_between(&system, layers[0][0], layers[0][1])
            .expect("checked above");
        system.dart_at(e, layers[0][0]).expect("incident")
    };
    Ok(LayeredDrawing {
        system,
        iv,
        layers,
        gluing_offset,
        anchor: (anchor_dart, q),
    })
}

fn rs_edge_between(rs: &RotationSystem, u: VertexId, v: VertexId) -> Option<EdgeId> {
    rs.darts_at(u)
        .iter()
        .map(|&d| rs.edge_of(d))
        .find(|&e| rs.other_endpoint(e, u) == Some(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::build_kms;

    #[test]
    fn reconstruct_matches_builder_output() {
        for (k, m, s) in [(2u64, 3u64, 1u64), (3, 2, 0), (2, 1, 0), (4, 2, 1)] {
            let d = build_kms(k, m, s).unwrap();
            let f = factorize(&d.system).unwrap();
            let frame = Frame::reconstruct(&d.system, &f, &d.layers).unwrap();
            assert_eq!(frame.k as u64, k);
            assert_eq!(frame.m as u64, m);
            assert_eq!(frame.ipe.len(), m as usize);
            for r in 1..frame.k {
                assert_eq!(frame.ce[r].len(), 2 * m as usize);
            }
        }
    }

    #[test]
    fn contract_inner_keeps_membership_and_size() {
        let d = build_kms(3, 3, 1).unwrap();
        let f = factorize(&d.system).unwrap();
        let frame = Frame::reconstruct(&d.system, &f, &d.layers).unwrap();
        let h = contract_inner(&d.system, &frame, 1).unwrap();
        let report = h.system.validate();
        assert!(report.in_p, "{report:?}");
        // One layer of 2m vertices and the inner m+1 are gone, m+1 remain
        // from the folded cycle.
        assert_eq!(h.system.vertex_count(), d.system.vertex_count() - (m_of(&d) + 1) - 2 * m_of(&d) + (m_of(&d) + 1));
        let f_h = factorize(&h.system).unwrap();
        let q_h = f_h.class_of(0);
        let iv = index_vector(&h.system, &f_h, q_h).unwrap();
        assert_eq!((iv.k, iv.m), (2, 3));
    }

    fn m_of(d: &LayeredDrawing) -> usize {
        d.iv.m as usize
    }

    #[test]
    fn contract_top_reduces_k_by_two() {
        let d = build_kms(4, 2, 1).unwrap();
        let f = factorize(&d.system).unwrap();
        let frame = Frame::reconstruct(&d.system, &f, &d.layers).unwrap();
        let h = contract_top(&d.system, &frame).unwrap();
        assert!(h.system.validate().in_p);
        let f_h = factorize(&h.system).unwrap();
        let q_h = f_h.class_of(0);
        let iv = index_vector(&h.system, &f_h, q_h).unwrap();
        assert_eq!((iv.k, iv.m), (2, 2));
    }

    #[test]
    fn imported_drawing_round_trips() {
        let d = build_kms(2, 3, 1).unwrap();
        let text = crate::planemap::export(
            &d.system,
            None,
            Some(&d.layers),
            crate::planemap::ExportFormat::Json,
        )
        .unwrap();
        let (rs, layers) = crate::planemap::parse_rotation_system(&text).unwrap();
        let imported = layered_from_imported(rs, layers.unwrap()).unwrap();
        assert_eq!(imported.iv, d.iv);
        assert_eq!(imported.gluing_offset, d.gluing_offset);
    }
}
