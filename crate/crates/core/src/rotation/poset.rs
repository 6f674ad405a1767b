//! Rotation elimination on preference instances and rotation interaction
//! graphs.

use super::{Member, Rotation, RotationSystem};
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::instance::{Instance, Side};
use crate::order::StrictOrder;
use std::collections::{BTreeSet, HashMap};

/// Rotation system of an instance, by eliminating exposed rotations from the
/// student-optimal matching until the residency-optimal one is reached.
///
/// Precedence: the rotation that introduces a pair lies below the one that
/// removes it; and when a rotation moves student `m` past residency `w` on
/// its list, the rotation that lifts `w` from a partner it ranks below `m` to
/// one it ranks above `m` lies below it.
pub fn rotation_poset(inst: &Instance) -> RotationSystem {
    let ns = inst.n_students();
    let nr = inst.n_residencies();
    let bottom = inst.gale_shapley(Side::Students);
    let top = inst.gale_shapley(Side::Residencies);
    let top_s = top.left_partners(ns);
    let mut sp = bottom.left_partners(ns);
    let mut rp = bottom.right_partners(nr);
    let mut rotations: Vec<Rotation> = Vec::new();
    // history of partners of each residency with the rotation that set it
    let mut rhist: Vec<Vec<(Option<usize>, Option<usize>)>> =
        (0..nr).map(|r| vec![(rp[r], None)]).collect();
    loop {
        let mut next: Vec<Option<usize>> = vec![None; ns];
        for m in 0..ns {
            let Some(cur) = sp[m] else { continue };
            if top_s[m] == Some(cur) {
                continue;
            }
            let list = inst.student_pref(m);
            let start = inst.student_rank(m, cur).unwrap() + 1;
            for &w in &list[start..] {
                if inst.residency_prefers(w, Some(m), rp[w]) {
                    next[m] = rp[w];
                    break;
                }
            }
        }
        let Some(first) = (0..ns).find(|&m| next[m].is_some()) else {
            break;
        };
        // walk until a student repeats; the repeated tail is an exposed rotation
        let mut idx: HashMap<usize, usize> = HashMap::new();
        let mut path = Vec::new();
        let mut m = first;
        while !idx.contains_key(&m) {
            idx.insert(m, path.len());
            path.push(m);
            m = next[m].expect("students on the walk are not at their top partner");
        }
        let cyc: Vec<usize> = path[idx[&m]..].to_vec();
        let k = cyc.len();
        let old: Vec<usize> = cyc.iter().map(|&m| sp[m].unwrap()).collect();
        // student cyc[i] moves to the old partner of cyc[i+1]
        let students = cyc.clone();
        let residencies: Vec<usize> = (0..k).map(|i| old[(i + 1) % k]).collect();
        let ri = rotations.len();
        for i in 0..k {
            sp[students[i]] = Some(residencies[i]);
            rp[residencies[i]] = Some(students[i]);
            rhist[residencies[i]].push((Some(students[i]), Some(ri)));
        }
        rotations.push(Rotation::new(students, residencies).expect("exposed rotation is simple"));
    }
    // precedence relations
    let mut adds: HashMap<(usize, usize), usize> = HashMap::new();
    let mut removes: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, rot) in rotations.iter().enumerate() {
        for e in rot.upper_edges() {
            adds.insert(e, i);
        }
        for e in rot.lower_edges() {
            removes.insert(e, i);
        }
    }
    let mut rel = Vec::new();
    for (e, &j) in &removes {
        if let Some(&i) = adds.get(e) {
            rel.push((i, j));
        }
    }
    for (j, rot) in rotations.iter().enumerate() {
        let k = rot.half_len();
        for i in 0..k {
            let m = rot.students()[(i + 1) % k];
            let from = rot.residencies()[i];
            let to = rot.residencies()[(i + 1) % k];
            let list = inst.student_pref(m);
            let a = inst.student_rank(m, from).unwrap();
            let b = inst.student_rank(m, to).unwrap();
            for &w in &list[a + 1..b] {
                let hist = &rhist[w];
                for t in 1..hist.len() {
                    let before = hist[t - 1].0;
                    let after = hist[t].0;
                    if inst.residency_prefers(w, Some(m), before)
                        && inst.residency_prefers(w, after, Some(m))
                    {
                        if let Some(pi) = hist[t].1 {
                            rel.push((pi, j));
                        }
                    }
                }
            }
        }
    }
    rel.sort_unstable();
    rel.dedup();
    let mut edges: BTreeSet<(usize, usize)> = top.pairs().iter().copied().collect();
    for rot in &rotations {
        edges.extend(rot.edges());
    }
    let graph = BipartiteGraph::new(
        inst.student_ids().to_vec(),
        inst.residency_ids().to_vec(),
        edges.into_iter().collect(),
    )
    .expect("stable pairs graph is well formed");
    let order = StrictOrder::from_relations(rotations.len(), &rel)
        .expect("rotation precedence of an instance is acyclic");
    RotationSystem::from_parts(graph, top, bottom, rotations, order)
}

/// Classification of a rotation by where its middle edges sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationClass {
    /// Uses only edges of the top or bottom matching.
    NoMiddle,
    /// Middle edges alternate with top edges (middle edges are lower).
    MiddleBetweenTop,
    /// Middle edges alternate with bottom edges (middle edges are upper).
    MiddleBetweenBottom,
    /// Middle edges occur both as upper and as lower edges.
    Mixed,
}

/// Graphs on the rotations of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraphs {
    /// Pairs of rotations sharing at least one graph edge.
    pub shared_edge: Vec<(usize, usize)>,
    /// Pairs `(i, j)` with `i < j` in the order.
    pub comparability: Vec<(usize, usize)>,
    /// Present when classes were requested.
    pub classes: Option<Vec<RotationClass>>,
}

impl InteractionGraphs {
    /// Shared-edge pairs oriented from the upper rotation to the lower one.
    pub fn oriented_shared(&self, rs: &RotationSystem) -> Vec<(usize, usize)> {
        self.shared_edge
            .iter()
            .map(|&(a, b)| if rs.order().lt(a, b) { (b, a) } else { (a, b) })
            .collect()
    }
}

/// Shared-edge graph, comparability graph and, optionally, the three-way class
/// labelling, which needs a subcubic graph whose degree classes all have
/// perfect matchings.
pub fn rotation_interaction_graphs(rs: &RotationSystem, classes: bool) -> Result<InteractionGraphs> {
    let mut shared = BTreeSet::new();
    for list in rs.memberships().values() {
        if let [(Member::Rot(a), _), (Member::Rot(b), _)] = list[..] {
            shared.insert((a.min(b), a.max(b)));
        }
    }
    let n = rs.rotations().len();
    let comparability = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| rs.order().lt(i, j))
        .collect();
    let classes = if classes {
        let g = rs.graph();
        if g.max_degree() > 3 || !crate::analysis::is_degree_matchable(g) {
            return Err(Error::Unsupported(
                "class labelling needs a subcubic degree-matchable graph".into(),
            ));
        }
        Some(classify(rs))
    } else {
        None
    };
    Ok(InteractionGraphs {
        shared_edge: shared.into_iter().collect(),
        comparability,
        classes,
    })
}

fn classify(rs: &RotationSystem) -> Vec<RotationClass> {
    let middle = |e: &(usize, usize)| !rs.top().contains(e.0, e.1) && !rs.bottom().contains(e.0, e.1);
    rs.rotations()
        .iter()
        .map(|rot| {
            let up = rot.upper_edges().iter().any(middle);
            let low = rot.lower_edges().iter().any(middle);
            match (up, low) {
                (false, false) => RotationClass::NoMiddle,
                (false, true) => RotationClass::MiddleBetweenTop,
                (true, false) => RotationClass::MiddleBetweenBottom,
                (true, true) => RotationClass::Mixed,
            }
        })
        .collect()
}
