#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use stablepairs::analysis::has_perfect_matching;
use stablepairs::rotation::{instance_from_rotation_system, matchings_of, validate_rotation_system};
use stablepairs::{BipartiteGraph, Instance, Result, RotationSystem};

/// Random instance; each pair is acceptable with probability `density`.
pub fn random_instance<R: Rng>(rng: &mut R, ns: usize, nr: usize, density: f64) -> Instance {
    let acc: Vec<Vec<bool>> = (0..ns).map(|_| (0..nr).map(|_| rng.gen_bool(density)).collect()).collect();
    let spref = (0..ns)
        .map(|s| {
            let mut l: Vec<usize> = (0..nr).filter(|&r| acc[s][r]).collect();
            l.shuffle(rng);
            l
        })
        .collect();
    let rpref = (0..nr)
        .map(|r| {
            let mut l: Vec<usize> = (0..ns).filter(|&s| acc[s][r]).collect();
            l.shuffle(rng);
            l
        })
        .collect();
    Instance::from_lists(spref, rpref).unwrap()
}

/// Random bipartite graph with maximum degree at most `max_deg`.
pub fn random_bounded_graph<R: Rng>(rng: &mut R, nl: usize, nr: usize, tries: usize, max_deg: usize) -> BipartiteGraph {
    let mut deg = vec![0; nl + nr];
    let mut edges = Vec::new();
    for _ in 0..tries {
        let (l, r) = (rng.gen_range(0..nl), rng.gen_range(0..nr));
        if deg[l] < max_deg && deg[nl + r] < max_deg && !edges.contains(&(l, r)) {
            deg[l] += 1;
            deg[nl + r] += 1;
            edges.push((l, r));
        }
    }
    BipartiteGraph::from_edges(nl, nr, edges).unwrap()
}

/// Random graph that is a union of perfect matchings, so it has one.
pub fn random_matchable<R: Rng>(rng: &mut R, n: usize, layers: usize) -> BipartiteGraph {
    let mut edges = Vec::new();
    for _ in 0..layers {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        for (l, &r) in p.iter().enumerate() {
            if !edges.contains(&(l, r)) {
                edges.push((l, r));
            }
        }
    }
    let g = BipartiteGraph::from_edges(n, n, edges).unwrap();
    debug_assert!(has_perfect_matching(&g));
    g
}

/// The stable matchings of the instance built from `w` are exactly the
/// matchings given by the lower sets of `w`; checked against brute-force
/// enumeration when that stays small.
pub fn witness_round_trip(w: &RotationSystem, cap: usize) -> Result<bool> {
    if !validate_rotation_system(w).is_valid() {
        return Ok(false);
    }
    let inst = instance_from_rotation_system(w, false)?;
    let mut a = inst.enumerate_stable_matchings(cap)?;
    let mut b = matchings_of(w, cap)?;
    a.sort();
    b.sort();
    if let Ok(brute) = inst.enumerate_stable_matchings_brute(200_000) {
        if brute != b {
            return Ok(false);
        }
    }
    Ok(a == b && inst.stable_pairs_graph().edges() == w.graph().edges())
}
