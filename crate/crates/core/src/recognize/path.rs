use super::{assemble, pieces, single_edge_system, Limits};
use crate::analysis::{for_each_perfect_matching, has_perfect_matching};
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use crate::rotation::{validate_rotation_system, Rotation, RotationSystem};
use std::collections::{HashMap, HashSet};

/// Counters from a path search run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Distinct `(matching, used set)` states visited.
    pub states: u64,
    /// Transitions examined.
    pub expanded: u64,
    /// Perfect matchings enumerated.
    pub matchings: u64,
}

/// Searches, per component, for a sequence of perfect matchings in which
/// consecutive matchings differ by one alternating cycle, no edge returns
/// after leaving, and every edge is used. Such a sequence is a rotation
/// system with totally ordered rotations.
pub fn recognize_path_search(g: &BipartiteGraph, limits: &Limits) -> Result<Option<RotationSystem>> {
    recognize_path_search_with_stats(g, limits).map(|(w, _)| w)
}

pub fn recognize_path_search_with_stats(
    g: &BipartiteGraph,
    limits: &Limits,
) -> Result<(Option<RotationSystem>, SearchStats)> {
    let mut stats = SearchStats::default();
    let mut parts = Vec::new();
    for piece in pieces(g) {
        let h = &piece.graph;
        let rs = if h.n() == 2 {
            single_edge_system(h)
        } else {
            match search_component(h, limits, &mut stats)? {
                Some(rs) => rs,
                None => return Ok((None, stats)),
            }
        };
        parts.push((piece, rs));
    }
    let rs = assemble(g, &parts)?;
    let rep = validate_rotation_system(&rs);
    if let Some(v) = rep.violations.first() {
        return Err(Error::Contract(format!("path search produced an invalid system: {v}")));
    }
    Ok((Some(rs), stats))
}

struct Gamma<'a> {
    h: &'a BipartiteGraph,
    pms: Vec<u128>,
    vert_edges: Vec<u128>,
    neighbors: Vec<Option<Vec<usize>>>,
    full: u128,
    visited: HashSet<(u32, u128)>,
    limits: Limits,
    stats: &'a mut SearchStats,
}

fn search_component(
    h: &BipartiteGraph,
    limits: &Limits,
    stats: &mut SearchStats,
) -> Result<Option<RotationSystem>> {
    if h.nl() != h.nr() || !has_perfect_matching(h) {
        return Ok(None);
    }
    if h.m() > 128 {
        return Err(Error::Unsupported("path search handles components of at most 128 edges".into()));
    }
    let mut pms = Vec::new();
    for_each_perfect_matching(h, |ids| {
        if pms.len() >= limits.max_matchings {
            return Err(Error::resource("perfect matchings", limits.max_matchings, pms.len()));
        }
        pms.push(ids.iter().fold(0u128, |acc, &k| acc | 1u128 << k));
        Ok(())
    })?;
    pms.sort_unstable();
    stats.matchings += pms.len() as u64;
    let vert_edges = (0..h.n())
        .map(|v| h.incident(v).iter().fold(0u128, |acc, &k| acc | 1u128 << k))
        .collect();
    let full = if h.m() == 128 { u128::MAX } else { (1u128 << h.m()) - 1 };
    let n = pms.len();
    let mut gm = Gamma {
        h,
        pms,
        vert_edges,
        neighbors: vec![None; n],
        full,
        visited: HashSet::new(),
        limits: *limits,
        stats,
    };
    for start in 0..n {
        let mut path = vec![start];
        if gm.dfs(&mut path, 0)? {
            return Ok(Some(gm.witness(&path)?));
        }
    }
    Ok(None)
}

impl Gamma<'_> {
    /// Whether the edge set `d` is connected (a single cycle when `d` is the
    /// symmetric difference of two perfect matchings).
    fn connected(&self, d: u128) -> bool {
        let mut reached = d & d.wrapping_neg();
        loop {
            let mut verts_edges = 0u128;
            let mut bits = reached;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let (a, b) = self.h.endpoints(k);
                verts_edges |= self.vert_edges[a] | self.vert_edges[b];
            }
            let next = (reached | verts_edges) & d;
            if next == reached {
                return reached == d;
            }
            reached = next;
        }
    }

    fn neighbors_of(&mut self, i: usize) -> Vec<usize> {
        if let Some(v) = &self.neighbors[i] {
            return v.clone();
        }
        let m = self.pms[i];
        let list: Vec<usize> = (0..self.pms.len())
            .filter(|&j| j != i && self.connected(m ^ self.pms[j]))
            .collect();
        self.neighbors[i] = Some(list.clone());
        list
    }

    fn dfs(&mut self, path: &mut Vec<usize>, used: u128) -> Result<bool> {
        let i = *path.last().unwrap();
        let m = self.pms[i];
        if m | used == self.full {
            return Ok(true);
        }
        if !self.visited.insert((i as u32, used)) {
            return Ok(false);
        }
        self.stats.states += 1;
        if self.visited.len() > self.limits.max_states {
            return Err(Error::resource("search states", self.limits.max_states, self.visited.len()));
        }
        // every edge still to come must lie in a matching avoiding used edges
        let pending = self.full & !(m | used);
        let mut cover = 0u128;
        for &p in &self.pms {
            if p & used == 0 {
                cover |= p;
                if cover & pending == pending {
                    break;
                }
            }
        }
        if cover & pending != pending {
            return Ok(false);
        }
        for j in self.neighbors_of(i) {
            let next = self.pms[j];
            self.stats.expanded += 1;
            if next & used != 0 {
                continue;
            }
            path.push(j);
            if self.dfs(path, used | (m & !next))? {
                return Ok(true);
            }
            path.pop();
        }
        Ok(false)
    }

    fn matching(&self, bits: u128) -> Matching {
        let mut pairs = Vec::new();
        let mut b = bits;
        while b != 0 {
            let k = b.trailing_zeros() as usize;
            b &= b - 1;
            pairs.push(self.h.edge(k));
        }
        Matching::from_sorted_unchecked(pairs)
    }

    fn witness(&self, path: &[usize]) -> Result<RotationSystem> {
        let h = self.h;
        let mut rotations = Vec::new();
        for w in path.windows(2) {
            let (a, b) = (self.pms[w[0]], self.pms[w[1]]);
            let added = self.matching(b & !a);
            let removed = self.matching(a & !b);
            let up_of_s: HashMap<usize, usize> = added.pairs().iter().copied().collect();
            let low_of_r: HashMap<usize, usize> = removed.pairs().iter().map(|&(s, r)| (r, s)).collect();
            let s0 = added.pairs()[0].0;
            let (mut students, mut residencies) = (Vec::new(), Vec::new());
            let mut s = s0;
            loop {
                let r = up_of_s[&s];
                students.push(s);
                residencies.push(r);
                s = low_of_r[&r];
                if s == s0 {
                    break;
                }
            }
            rotations.push(Rotation::new(students, residencies)?);
        }
        let rel: Vec<(usize, usize)> = (1..rotations.len()).map(|i| (i - 1, i)).collect();
        let bottom = self.matching(self.pms[path[0]]);
        let top = self.matching(self.pms[*path.last().unwrap()]);
        RotationSystem::new(h.clone(), top, bottom, rotations, &rel)
    }
}
