use hexorb_core::builder::build_kms;
use hexorb_core::indexcalc::{max_path_from, s_walk, WalkSign, gcd};
use hexorb_core::spanning::{contract_inner, Frame, induces_tree};
use hexorb_core::trifactor::factorize;
use std::collections::BTreeSet;

fn main() {
    let d = build_kms(2, 6, 1).unwrap();
    let f = factorize(&d.system).unwrap();
    let frame = Frame::reconstruct(&d.system, &f, &d.layers).unwrap();
    println!("layers: {:?}", d.layers);
    let h = contract_inner(&d.system, &frame, 1).unwrap();
    let fh = factorize(&h.system).unwrap();
    let qh = fh.class_of(0);
    let sm = s_walk(&h.system, &fh, qh, WalkSign::Minus).unwrap();
    println!("S-_gamma = {sm}, d = {}", gcd(sm, 6));
    let w0 = h.layers[0][0];
    let walk = max_path_from(&h.system, &fh, w0, qh.pred()).unwrap();
    println!("walk vertices (h-ids): {:?}", walk.vertices);
    let delta = &h.layers[0];
    println!("delta (h-ids): {:?}", delta);
    let touched: Vec<usize> = (0..=6).filter(|&i| walk.vertices.contains(&delta[i])).collect();
    println!("touched delta indices: {:?}", touched);
    let v0_outer: Vec<usize> = walk.vertices.iter().copied().filter(|v| !delta.contains(v)).map(|v| h.to_old[v]).collect();
    println!("outer walk vertices (old ids): {:?}", v0_outer);
    let inner = &d.layers[0]; let cyc = &d.layers[1];
    let mut spine: BTreeSet<usize> = v0_outer.iter().copied().collect();
    let mut spine_pos = vec![];
    for &i in &touched {
        spine.insert(inner[i]); spine.insert(cyc[i]); spine_pos.push(i);
        if i != 0 && i != 6 { spine.insert(cyc[12 - i]); spine_pos.push(12 - i); }
    }
    println!("spine: {:?}", spine);
    println!("spine positions: {:?}", spine_pos);
    let dd = gcd(sm, 6) as usize;
    for dir in [1isize, -1] {
        let mut t: BTreeSet<usize> = spine.clone();
        for &p in &spine_pos {
            for st in 1..=(2*dd-2) {
                let pos = (p as isize + dir * st as isize).rem_euclid(12) as usize;
                t.insert(cyc[pos]);
            }
        }
        let all: BTreeSet<usize> = (0..d.system.vertex_count()).collect();
        let s: BTreeSet<usize> = all.difference(&t).copied().collect();
        let tv: Vec<usize> = t.iter().copied().collect();
        let sv: Vec<usize> = s.iter().copied().collect();
        println!("dir {dir}: T = {:?} tree={}", tv, induces_tree(&d.system, &tv));
        println!("        S = {:?} tree={}", sv, induces_tree(&d.system, &sv));
    }
}
