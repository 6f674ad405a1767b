use super::{assemble, pieces, single_edge_system, Limits};
use crate::analysis::enumerate_perfect_matchings;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::order::StrictOrder;
use crate::rotation::{Rotation, RotationSystem};

/// Exhaustive search over the definition of a rotation system.
///
/// For every pair of disjoint perfect matchings as top and bottom, each edge
/// needs an upper slot (unless it is in bottom) and a lower slot (unless it
/// is in top). The lowest unfilled slot is filled by every simple cycle
/// through it whose edges alternate between free upper and free lower slots;
/// the order implied by shared edges (upper member below lower member) must
/// stay acyclic.
pub fn recognize_oracle(g: &BipartiteGraph, limits: &Limits) -> Result<Option<RotationSystem>> {
    let mut parts = Vec::new();
    for piece in pieces(g) {
        let h = &piece.graph;
        if h.m() > limits.oracle_max_edges {
            return Err(Error::resource("oracle component edges", limits.oracle_max_edges, h.m()));
        }
        let rs = if h.n() == 2 {
            single_edge_system(h)
        } else {
            match oracle_component(h, limits)? {
                Some(rs) => rs,
                None => return Ok(None),
            }
        };
        parts.push((piece, rs));
    }
    assemble(g, &parts).map(Some)
}

struct Search<'a> {
    g: &'a BipartiteGraph,
    /// rotation holding the edge as upper / lower
    up: Vec<Option<usize>>,
    low: Vec<Option<usize>>,
    need_up: Vec<bool>,
    need_low: Vec<bool>,
    cycles: Vec<Vec<(usize, bool)>>,
}

fn oracle_component(h: &BipartiteGraph, limits: &Limits) -> Result<Option<RotationSystem>> {
    if h.nl() != h.nr() {
        return Ok(None);
    }
    let pms = enumerate_perfect_matchings(h, limits.max_matchings)?;
    let ids: Vec<Vec<usize>> = pms
        .iter()
        .map(|m| m.pairs().iter().map(|&(l, r)| h.edge_id(l, r).unwrap()).collect())
        .collect();
    for (ti, top) in ids.iter().enumerate() {
        for (bi, bot) in ids.iter().enumerate() {
            if top.iter().any(|e| bot.contains(e)) {
                continue;
            }
            let mut s = Search {
                g: h,
                up: vec![None; h.m()],
                low: vec![None; h.m()],
                need_up: (0..h.m()).map(|e| !bot.contains(&e)).collect(),
                need_low: (0..h.m()).map(|e| !top.contains(&e)).collect(),
                cycles: Vec::new(),
            };
            let order = StrictOrder::antichain(0);
            if let Some(order) = s.fill(order) {
                let rotations = s
                    .cycles
                    .iter()
                    .map(|c| {
                        let s = c.iter().position(|&(_, up)| up).unwrap();
                        let walk: Vec<(usize, usize)> =
                            (0..c.len()).map(|i| h.edge(c[(s + i) % c.len()].0)).collect();
                        Rotation::from_cycle(&walk)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let rel = order.hasse();
                let rs = RotationSystem::new(
                    h.clone(),
                    pms[ti].clone(),
                    pms[bi].clone(),
                    rotations,
                    &rel,
                )?;
                return Ok(Some(rs));
            }
        }
    }
    Ok(None)
}

impl Search<'_> {
    fn fill(&mut self, order: StrictOrder) -> Option<StrictOrder> {
        let m = self.g.m();
        let slot = (0..m).find_map(|e| {
            if self.need_up[e] && self.up[e].is_none() {
                Some((e, true))
            } else if self.need_low[e] && self.low[e].is_none() {
                Some((e, false))
            } else {
                None
            }
        });
        let Some((e0, kind0)) = slot else {
            return Some(order);
        };
        let (l, r) = self.g.endpoints(e0);
        let mut found = Vec::new();
        let mut visited = vec![false; self.g.n()];
        visited[l] = true;
        visited[r] = true;
        let mut path = vec![(e0, kind0)];
        self.cycles_from(l, r, !kind0, &mut visited, &mut path, &mut found);
        for cyc in found {
            let id = self.cycles.len();
            let mut next = order.with_new_element();
            let mut ok = true;
            for &(e, is_up) in &cyc {
                let other = if is_up { self.low[e] } else { self.up[e] };
                if let Some(x) = other {
                    let (a, b) = if is_up { (id, x) } else { (x, id) };
                    if !next.add(a, b) {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            for &(e, is_up) in &cyc {
                if is_up {
                    self.up[e] = Some(id);
                } else {
                    self.low[e] = Some(id);
                }
            }
            self.cycles.push(cyc.clone());
            if let Some(done) = self.fill(next) {
                return Some(done);
            }
            self.cycles.pop();
            for &(e, is_up) in &cyc {
                if is_up {
                    self.up[e] = None;
                } else {
                    self.low[e] = None;
                }
            }
        }
        None
    }

    fn free(&self, e: usize, is_up: bool) -> bool {
        if is_up {
            self.need_up[e] && self.up[e].is_none()
        } else {
            self.need_low[e] && self.low[e].is_none()
        }
    }

    /// Alternating simple paths from `v` back to `start`; the next edge has
    /// kind `kind`.
    fn cycles_from(
        &self,
        start: usize,
        v: usize,
        kind: bool,
        visited: &mut [bool],
        path: &mut Vec<(usize, bool)>,
        found: &mut Vec<Vec<(usize, bool)>>,
    ) {
        for &e in self.g.incident(v) {
            if !self.free(e, kind) || path.iter().any(|&(x, _)| x == e) {
                continue;
            }
            let w = self.g.other(e, v);
            if w == start {
                // closing edge must restore alternation at the start
                if kind != path[0].1 && path.len() + 1 >= 4 {
                    let mut c = path.clone();
                    c.push((e, kind));
                    found.push(c);
                }
                continue;
            }
            if visited[w] {
                continue;
            }
            visited[w] = true;
            path.push((e, kind));
            self.cycles_from(start, w, !kind, visited, path, found);
            path.pop();
            visited[w] = false;
        }
    }
}
