use crate::analysis::articulation_vertices;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use crate::rotation::RotationSystem;
use std::collections::{BTreeSet, HashMap};

/// Boundary cycle of a 2-connected outerplanar graph on the vertices `comp`,
/// or `None` if the component is not outerplanar. Degree-2 vertices are
/// removed one at a time (joining their neighbours) and reinserted between
/// their neighbours on the unique Hamiltonian cycle of the smaller graph.
pub fn outer_cycle(g: &BipartiteGraph, comp: &[usize]) -> Option<Vec<usize>> {
    let mut adj: HashMap<usize, BTreeSet<usize>> = comp
        .iter()
        .map(|&v| (v, g.neighbors(v).into_iter().collect()))
        .collect();
    let mut removed: Vec<(usize, usize, usize)> = Vec::new();
    while adj.len() > 3 {
        let v = *adj
            .iter()
            .filter(|(_, nb)| nb.len() == 2)
            .map(|(v, _)| v)
            .min()?;
        let nb: Vec<usize> = adj.remove(&v).unwrap().into_iter().collect();
        let (a, b) = (nb[0], nb[1]);
        adj.get_mut(&a).unwrap().remove(&v);
        adj.get_mut(&b).unwrap().remove(&v);
        adj.get_mut(&a).unwrap().insert(b);
        adj.get_mut(&b).unwrap().insert(a);
        removed.push((v, a, b));
    }
    if adj.len() < 3 || adj.values().any(|nb| nb.len() != 2) {
        return None;
    }
    let mut cyc: Vec<usize> = adj.keys().copied().collect();
    cyc.sort_unstable();
    for &(v, a, b) in removed.iter().rev() {
        let k = cyc.len();
        let i = (0..k).find(|&i| {
            let (x, y) = (cyc[i], cyc[(i + 1) % k]);
            (x, y) == (a, b) || (x, y) == (b, a)
        })?;
        cyc.insert(i + 1, v);
    }
    // every other edge must be a non-crossing chord
    let pos: HashMap<usize, usize> = cyc.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = cyc.len();
    let mut chords = Vec::new();
    for &v in comp {
        for w in g.neighbors(v) {
            let (p, q) = (pos[&v].min(pos[&w]), pos[&v].max(pos[&w]));
            if v < w && q - p != 1 && !(p == 0 && q == k - 1) {
                chords.push((p, q));
            }
        }
    }
    for &(a, b) in &chords {
        for &(c, d) in &chords {
            if a < c && c < b && b < d {
                return None;
            }
        }
    }
    Some(cyc)
}

/// Bounded faces of a component from its boundary cycle, as vertex cycles.
fn inner_faces(g: &BipartiteGraph, cyc: &[usize]) -> Vec<Vec<usize>> {
    let k = cyc.len();
    let pos: HashMap<usize, usize> = cyc.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // rotation at each vertex: neighbours by increasing cyclic offset
    let rot: HashMap<usize, Vec<usize>> = cyc
        .iter()
        .map(|&v| {
            let mut nb = g.neighbors(v);
            nb.sort_by_key(|w| (pos[w] + k - pos[&v]) % k);
            (v, nb)
        })
        .collect();
    let mut used = BTreeSet::new();
    let mut faces = Vec::new();
    for &u in cyc {
        for &v in &rot[&u] {
            if used.contains(&(u, v)) {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut b) = (u, v);
            while used.insert((a, b)) {
                face.push(a);
                let r = &rot[&b];
                let i = r.iter().position(|&x| x == a).unwrap();
                let c = r[(i + r.len() - 1) % r.len()];
                a = b;
                b = c;
            }
            faces.push(face);
        }
    }
    // the traversal that follows the boundary backwards is the outer face
    let outer_rev: Vec<usize> = {
        let mut r: Vec<usize> = cyc.iter().rev().copied().collect();
        r.rotate_right(1);
        r
    };
    let is_outer = |f: &Vec<usize>| {
        f.len() == k && {
            let s = f.iter().position(|&x| x == outer_rev[0]);
            s.is_some_and(|s| (0..k).all(|i| f[(s + i) % k] == outer_rev[i]))
        }
    };
    let mut dropped = false;
    faces
        .into_iter()
        .filter(|f| {
            if !dropped && is_outer(f) {
                dropped = true;
                false
            } else {
                true
            }
        })
        .collect()
}

/// Rotation system of an articulation-free outerplanar graph: boundary edges
/// alternate between top and bottom, starting at the smallest vertex towards
/// its smaller boundary neighbour; every bounded face is a rotation oriented
/// to agree with the boundary and ordered across shared chords. Single-edge
/// components get that edge as top and bottom; isolated vertices are ignored.
pub fn realize_outerplanar(g: &BipartiteGraph) -> Result<RotationSystem> {
    let arts = articulation_vertices(g);
    if let Some(&v) = arts.first() {
        return Err(Error::Rejected {
            reason: "articulation vertex".into(),
            certificate: g.name(v).to_string(),
        });
    }
    let nl = g.nl();
    let pair = |a: usize, b: usize| if a < nl { (a, b - nl) } else { (b, a - nl) };
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    let mut cycles = Vec::new();
    for comp in g.components() {
        match comp.len() {
            1 => continue,
            2 => {
                top.push(pair(comp[0], comp[1]));
                bottom.push(pair(comp[0], comp[1]));
                continue;
            }
            _ => {}
        }
        let cyc = outer_cycle(g, &comp)
            .ok_or_else(|| Error::Unsupported("graph is not outerplanar".into()))?;
        let k = cyc.len();
        // start at the smallest vertex, heading to its smaller neighbour
        let s = (0..k).min_by_key(|&i| cyc[i]).unwrap();
        let fwd = cyc[(s + 1) % k] < cyc[(s + k - 1) % k];
        for i in 0..k {
            let (a, b) = if fwd {
                (cyc[(s + i) % k], cyc[(s + i + 1) % k])
            } else {
                (cyc[(s + k - i) % k], cyc[(s + 2 * k - i - 1) % k])
            };
            if i % 2 == 0 {
                top.push(pair(a, b));
            } else {
                bottom.push(pair(a, b));
            }
        }
        for f in inner_faces(g, &cyc) {
            let n = f.len();
            cycles.push((0..n).map(|i| pair(f[i], f[(i + 1) % n])).collect::<Vec<_>>());
        }
    }
    RotationSystem::from_cycles(g.clone(), Matching::new(top)?, Matching::new(bottom)?, &cycles)
}
