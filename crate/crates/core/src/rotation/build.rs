//! Constructors that derive orientation and order from local data.

use super::{validate_rotation_system, Member, Rotation, RotationSystem};
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use std::collections::{HashMap, VecDeque};

/// Per unified vertex, its incident edge ids ordered from the bottom edge to
/// the top edge, each next edge being the upper edge of the rotation in which
/// the previous one is lower.
pub fn chains_of(rs: &RotationSystem) -> Vec<Vec<usize>> {
    let g = rs.graph();
    let nl = g.nl();
    let mut next_at: HashMap<(usize, usize), usize> = HashMap::new();
    for rot in rs.rotations() {
        let k = rot.half_len();
        let (st, re) = (rot.students(), rot.residencies());
        for i in 0..k {
            let low = g.edge_id(st[(i + 1) % k], re[i]);
            let up_s = g.edge_id(st[(i + 1) % k], re[(i + 1) % k]);
            let up_r = g.edge_id(st[i], re[i]);
            if let (Some(low), Some(up_s), Some(up_r)) = (low, up_s, up_r) {
                next_at.insert((st[(i + 1) % k], low), up_s);
                next_at.insert((nl + re[i], low), up_r);
            }
        }
    }
    let bl = rs.bottom().left_partners(nl);
    let br = rs.bottom().right_partners(g.nr());
    (0..g.n())
        .map(|v| {
            let start = if v < nl {
                bl[v].and_then(|r| g.edge_id(v, r))
            } else {
                br[v - nl].and_then(|s| g.edge_id(s, v - nl))
            };
            let mut chain = Vec::new();
            let mut cur = start;
            while let Some(e) = cur {
                if chain.len() > g.degree(v) {
                    break;
                }
                chain.push(e);
                let (l, r) = g.edge(e);
                if rs.top().contains(l, r) {
                    break;
                }
                cur = next_at.get(&(v, e)).copied();
            }
            chain
        })
        .collect()
}

impl RotationSystem {
    /// Builds a system from rotations whose orientation is already fixed. The
    /// order is the closure of "upper in X and lower in Y implies X < Y" over
    /// shared edges. Fails if the result does not validate.
    pub fn from_oriented(
        graph: BipartiteGraph,
        top: Matching,
        bottom: Matching,
        rotations: Vec<Rotation>,
    ) -> Result<Self> {
        let mut rel = Vec::new();
        let skeleton = RotationSystem::new(graph, top, bottom, rotations, &[])?;
        for list in skeleton.memberships().values() {
            if let [(Member::Rot(a), ua), (Member::Rot(b), ub)] = list[..] {
                match (ua, ub) {
                    (true, false) => rel.push((a, b)),
                    (false, true) => rel.push((b, a)),
                    _ => {
                        return Err(Error::Contract(format!(
                            "rotations {a} and {b} use a shared edge with the same orientation"
                        )))
                    }
                }
            }
        }
        rel.sort_unstable();
        rel.dedup();
        let RotationSystem {
            graph,
            top,
            bottom,
            rotations,
            ..
        } = skeleton;
        let rs = RotationSystem::new(graph, top, bottom, rotations, &rel)?;
        let report = validate_rotation_system(&rs);
        if let Some(v) = report.violations.first() {
            return Err(Error::Contract(format!("constructed system is invalid: {v}")));
        }
        Ok(rs)
    }

    /// Builds a system from unoriented cycles (each a closed walk of edges).
    /// Orientation is forced by top edges being upper and bottom edges lower,
    /// and propagated across shared edges, which must be upper in one cycle
    /// and lower in the other. Free components take the given starting edge
    /// as upper.
    pub fn from_cycles(
        graph: BipartiteGraph,
        top: Matching,
        bottom: Matching,
        cycles: &[Vec<(usize, usize)>],
    ) -> Result<Self> {
        let n = cycles.len();
        let mut uses: HashMap<(usize, usize), Vec<(usize, bool)>> = HashMap::new();
        for (i, c) in cycles.iter().enumerate() {
            for (p, &e) in c.iter().enumerate() {
                uses.entry(e).or_default().push((i, p % 2 == 0));
            }
        }
        let mut flip: Vec<Option<bool>> = vec![None; n];
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
        let mut anchors: Vec<(usize, bool)> = Vec::new();
        for (&e, list) in &uses {
            let want_upper = if top.contains(e.0, e.1) {
                Some(true)
            } else if bottom.contains(e.0, e.1) {
                Some(false)
            } else {
                None
            };
            if let Some(w) = want_upper {
                for &(i, even) in list {
                    anchors.push((i, even != w));
                }
            }
            if let [(a, ea), (b, eb)] = list[..] {
                if want_upper.is_none() {
                    // exactly one use is upper, so the flips differ iff the parities agree
                    let same_parity = ea == eb;
                    adj[a].push((b, same_parity));
                    adj[b].push((a, same_parity));
                }
            }
        }
        anchors.sort_unstable();
        let mut queue = VecDeque::new();
        for &(i, f) in &anchors {
            match flip[i] {
                None => {
                    flip[i] = Some(f);
                    queue.push_back(i);
                }
                Some(x) if x != f => {
                    return Err(Error::Contract(format!(
                        "cycle {i} cannot alternate between its top and bottom edges"
                    )))
                }
                _ => {}
            }
        }
        let propagate = |queue: &mut VecDeque<usize>, flip: &mut Vec<Option<bool>>| -> Result<()> {
            while let Some(i) = queue.pop_front() {
                let fi = flip[i].unwrap();
                for &(j, same_parity) in &adj[i] {
                    let fj = fi ^ same_parity;
                    match flip[j] {
                        None => {
                            flip[j] = Some(fj);
                            queue.push_back(j);
                        }
                        Some(x) if x != fj => {
                            return Err(Error::Contract(format!(
                                "cycles {i} and {j} cannot be oriented consistently"
                            )))
                        }
                        _ => {}
                    }
                }
            }
            Ok(())
        };
        propagate(&mut queue, &mut flip)?;
        for i in 0..n {
            if flip[i].is_none() {
                flip[i] = Some(false);
                queue.push_back(i);
                propagate(&mut queue, &mut flip)?;
            }
        }
        let mut rotations = Vec::with_capacity(n);
        for (i, c) in cycles.iter().enumerate() {
            let r = Rotation::from_cycle(c)?;
            rotations.push(if flip[i].unwrap() { r.flipped() } else { r });
        }
        Self::from_oriented(graph, top, bottom, rotations)
    }

    /// Builds a system from a chain of incident edges at every vertex,
    /// running from its bottom edge to its top edge. Rotations are the closed
    /// walks obtained by linking consecutive chain entries.
    pub fn from_chains(
        graph: BipartiteGraph,
        top: Matching,
        bottom: Matching,
        chains: &[Vec<usize>],
    ) -> Result<Self> {
        let g = &graph;
        if chains.len() != g.n() {
            return Err(Error::Input("one chain per vertex is required".into()));
        }
        let mut pos: Vec<HashMap<usize, usize>> = Vec::with_capacity(g.n());
        for (v, c) in chains.iter().enumerate() {
            let mut a = c.clone();
            a.sort_unstable();
            if a != g.incident(v) {
                return Err(Error::Input(format!(
                    "chain at {} is not a permutation of its edges",
                    g.name(v)
                )));
            }
            pos.push(c.iter().enumerate().map(|(i, &e)| (e, i)).collect());
        }
        let mut seen: Vec<Vec<bool>> = chains
            .iter()
            .map(|c| vec![false; c.len().saturating_sub(1)])
            .collect();
        let mut rotations = Vec::new();
        for v0 in 0..g.n() {
            for i0 in 0..seen[v0].len() {
                if seen[v0][i0] {
                    continue;
                }
                let mut walk = Vec::new();
                let mut visited = std::collections::HashSet::new();
                let (mut v, mut i) = (v0, i0);
                loop {
                    if seen[v][i] {
                        break;
                    }
                    seen[v][i] = true;
                    if !visited.insert(v) {
                        return Err(Error::Contract(format!(
                            "linked chains revisit vertex {}",
                            g.name(v)
                        )));
                    }
                    // transition (v, i): lower chains[v][i], upper chains[v][i+1]
                    let up = chains[v][i + 1];
                    let w = g.other(up, v);
                    let j = pos[w][&up];
                    if j == 0 {
                        return Err(Error::Contract("an edge is first at only one endpoint".into()));
                    }
                    walk.push(g.edge(up));
                    let low = chains[w][j - 1];
                    walk.push(g.edge(low));
                    if !visited.insert(w) {
                        return Err(Error::Contract(format!(
                            "linked chains revisit vertex {}",
                            g.name(w)
                        )));
                    }
                    seen[w][j - 1] = true;
                    let x = g.other(low, w);
                    let p = pos[x][&low];
                    if p + 1 >= chains[x].len() {
                        return Err(Error::Contract("an edge is last at only one endpoint".into()));
                    }
                    v = x;
                    i = p;
                }
                rotations.push(Rotation::from_cycle(&walk)?);
            }
        }
        Self::from_oriented(graph, top, bottom, rotations)
    }
}
