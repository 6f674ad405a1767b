//! Structural tests on candidate graphs: matchings, necessary conditions,
//! degree classes and perfect-matching enumeration.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use crate::rotation::RotationSystem;
use std::collections::BTreeSet;

/// Perfect-matching count base: a graph with `m` edges has at most `C0^m`.
pub fn c0() -> f64 {
    6f64.powf(1.0 / 9.0)
}

/// Base for (perfect matching, disjoint edge set) structures.
pub fn c1() -> f64 {
    1280f64.powf(1.0 / 9.0)
}

/// Base for (two perfect matchings, disjoint edge set) structures.
pub fn c2() -> f64 {
    let c = c0();
    (4.0 * c * (1.0 + c).powi(6)).powf(1.0 / 7.0)
}

/// Per-edge factor `(i * cT^(2i-2))^(1/(2i-1))` of the min-degree branching
/// bound when the branching vertex has degree `i`.
pub fn branching_factor(i: u32, ct: f64) -> f64 {
    let i = i as f64;
    (i * ct.powf(2.0 * i - 2.0)).powf(1.0 / (2.0 * i - 1.0))
}

/// Maximum matching on an explicit bipartite adjacency (left to right).
/// Returns the partner of every left vertex. Augmenting paths are searched
/// from left vertices in index order with an explicit stack.
pub fn max_matching_adj(nl: usize, nr: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let mut ml: Vec<Option<usize>> = vec![None; nl];
    let mut mr: Vec<Option<usize>> = vec![None; nr];
    let mut stamp = vec![usize::MAX; nr];
    for root in 0..nl {
        // greedy first
        if let Some(&r) = adj[root].iter().find(|&&r| mr[r].is_none()) {
            ml[root] = Some(r);
            mr[r] = Some(root);
            continue;
        }
        // stack of (left vertex, next adjacency index); parent right vertex per level
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        let mut via: Vec<usize> = Vec::new();
        let mut found = None;
        while let Some(&mut (l, ref mut i)) = stack.last_mut() {
            if *i >= adj[l].len() {
                stack.pop();
                via.pop();
                continue;
            }
            let r = adj[l][*i];
            *i += 1;
            if stamp[r] == root {
                continue;
            }
            stamp[r] = root;
            match mr[r] {
                None => {
                    found = Some(r);
                    break;
                }
                Some(l2) => {
                    via.push(r);
                    stack.push((l2, 0));
                }
            }
        }
        if let Some(mut r) = found {
            // stack holds the alternating path's left vertices
            for depth in (0..stack.len()).rev() {
                let l = stack[depth].0;
                let prev = ml[l];
                ml[l] = Some(r);
                mr[r] = Some(l);
                match prev {
                    Some(p) if depth > 0 => r = p,
                    _ => break,
                }
            }
        }
    }
    ml
}

/// A maximum-cardinality matching, deterministic for a fixed edge order.
pub fn maximum_matching(g: &BipartiteGraph) -> Matching {
    let nl = g.nl();
    let adj: Vec<Vec<usize>> = (0..nl)
        .map(|l| g.incident(l).iter().map(|&k| g.edge(k).1).collect())
        .collect();
    let ml = max_matching_adj(nl, g.nr(), &adj);
    Matching::from_sorted_unchecked(
        ml.iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| (l, r)))
            .collect(),
    )
}

/// Whether `g` has a matching covering every vertex.
pub fn has_perfect_matching(g: &BipartiteGraph) -> bool {
    g.nl() == g.nr() && maximum_matching(g).len() == g.nl()
}

/// The subgraph induced by the vertices of degree exactly `i`.
pub fn degree_induced(g: &BipartiteGraph, i: usize) -> BipartiteGraph {
    let verts: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) == i).collect();
    g.induced(&verts).0
}

/// Subcubic with perfect matchings in each of `G[1]`, `G[2]`, `G[3]`.
pub fn is_degree_matchable(g: &BipartiteGraph) -> bool {
    g.max_degree() <= 3 && (1..=3).all(|i| has_perfect_matching(&degree_induced(g, i)))
}

/// Per-component outcome of the necessary conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    /// Unified vertices of the component.
    pub vertices: Vec<usize>,
    pub matching_covered: bool,
    pub has_two_factor: bool,
}

/// Which necessary conditions for realizability hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecessaryReport {
    /// Equal side sizes once isolated vertices are dropped.
    pub balanced_after_isolates: bool,
    /// Components with more than two vertices.
    pub components: Vec<ComponentReport>,
    pub articulation_vertices: Vec<usize>,
}

impl NecessaryReport {
    pub fn matching_covered(&self) -> bool {
        self.components.iter().all(|c| c.matching_covered)
    }

    pub fn has_two_factor(&self) -> bool {
        self.components.iter().all(|c| c.has_two_factor)
    }

    pub fn articulation_free(&self) -> bool {
        self.articulation_vertices.is_empty()
    }

    pub fn all_pass(&self) -> bool {
        self.balanced_after_isolates
            && self.matching_covered()
            && self.has_two_factor()
            && self.articulation_free()
    }

    /// Names of the failing conditions.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.balanced_after_isolates {
            out.push("balanced");
        }
        if !self.matching_covered() {
            out.push("matching-covered");
        }
        if !self.has_two_factor() {
            out.push("two-factor");
        }
        if !self.articulation_free() {
            out.push("articulation-free");
        }
        out
    }
}

/// Every edge of the component lies in a perfect matching of it: a perfect
/// matching exists and each non-matching edge closes an alternating cycle,
/// found as strongly connected components of the alternating digraph.
fn component_matching_covered(g: &BipartiteGraph, comp: &[usize]) -> bool {
    let (h, _) = g.induced(comp);
    if !has_perfect_matching(&h) {
        return false;
    }
    let m = maximum_matching(&h);
    let rp = m.right_partners(h.nr());
    let succ: Vec<Vec<usize>> = (0..h.nl())
        .map(|l| {
            h.incident(l)
                .iter()
                .map(|&k| rp[h.edge(k).1].unwrap())
                .filter(|&l2| l2 != l)
                .collect()
        })
        .collect();
    let scc = strongly_connected(&succ);
    h.edges()
        .iter()
        .all(|&(l, r)| m.contains(l, r) || scc[l] == scc[rp[r].unwrap()])
}

/// Component label per vertex (Kosaraju, iterative).
pub fn strongly_connected(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (u, list) in succ.iter().enumerate() {
        for &v in list {
            pred[v].push(u);
        }
    }
    let mut seen = vec![false; n];
    let mut finish = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some((u, i)) = stack.pop() {
            if i < succ[u].len() {
                stack.push((u, i + 1));
                let v = succ[u][i];
                if !seen[v] {
                    seen[v] = true;
                    stack.push((v, 0));
                }
            } else {
                finish.push(u);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut c = 0;
    for &s in finish.iter().rev() {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = c;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &pred[u] {
                if label[v] == usize::MAX {
                    label[v] = c;
                    stack.push(v);
                }
            }
        }
        c += 1;
    }
    label
}

/// Spanning 2-regular subgraph via the degree gadget: a degree-`d` vertex
/// becomes `d` outer copies (one per edge) and `d - 2` inner copies joined to
/// all of its outer copies; a 2-factor exists iff the gadget graph has a
/// perfect matching.
fn component_has_two_factor(g: &BipartiteGraph, comp: &[usize]) -> bool {
    let (h, _) = g.induced(comp);
    if (0..h.n()).any(|v| h.degree(v) < 2) {
        return false;
    }
    // side A: outer copies of left vertices, inner copies of right vertices
    // side B: outer copies of right vertices, inner copies of left vertices
    let nl = h.nl();
    let mut a_count = 0;
    let mut b_count = 0;
    let mut outer = vec![Vec::new(); h.n()];
    let mut inner = vec![Vec::new(); h.n()];
    for v in 0..h.n() {
        let d = h.degree(v);
        for _ in 0..d {
            if v < nl {
                outer[v].push(a_count);
                a_count += 1;
            } else {
                outer[v].push(b_count);
                b_count += 1;
            }
        }
        for _ in 0..d - 2 {
            if v < nl {
                inner[v].push(b_count);
                b_count += 1;
            } else {
                inner[v].push(a_count);
                a_count += 1;
            }
        }
    }
    if a_count != b_count {
        return false;
    }
    let mut adj = vec![Vec::new(); a_count];
    for v in 0..h.n() {
        for (i, &k) in h.incident(v).iter().enumerate() {
            if v < nl {
                let w = h.other(k, v);
                let j = h.incident(w).iter().position(|&x| x == k).unwrap();
                adj[outer[v][i]].push(outer[w][j]);
                for &b in &inner[v] {
                    adj[outer[v][i]].push(b);
                }
            } else {
                for &a in &inner[v] {
                    adj[a].push(outer[v][i]);
                }
            }
        }
    }
    let ml = max_matching_adj(a_count, b_count, &adj);
    ml.iter().all(Option::is_some)
}

/// Articulation vertices by iterative depth-first search with lowpoints.
pub fn articulation_vertices(g: &BipartiteGraph) -> Vec<usize> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_art = vec![false; n];
    let mut time = 0;
    for s in 0..n {
        if disc[s] != usize::MAX {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent edge, next incident index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(s, usize::MAX, 0)];
        while let Some(&mut (v, pe, ref mut i)) = stack.last_mut() {
            if *i < g.degree(v) {
                let k = g.incident(v)[*i];
                *i += 1;
                if k == pe {
                    continue;
                }
                let w = g.other(k, v);
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == s {
                        root_children += 1;
                    }
                    stack.push((w, k, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if p != s && low[v] >= disc[p] {
                        is_art[p] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_art[s] = true;
        }
    }
    (0..n).filter(|&v| is_art[v]).collect()
}

/// Evaluates the necessary conditions. Passing all of them does not imply
/// realizability.
pub fn necessary_conditions(g: &BipartiteGraph) -> NecessaryReport {
    let nonisolated_left = (0..g.nl()).filter(|&v| g.degree(v) > 0).count();
    let nonisolated_right = (g.nl()..g.n()).filter(|&v| g.degree(v) > 0).count();
    let components = g
        .components()
        .into_iter()
        .filter(|c| c.len() > 2)
        .map(|c| ComponentReport {
            matching_covered: component_matching_covered(g, &c),
            has_two_factor: component_has_two_factor(g, &c),
            vertices: c,
        })
        .collect();
    NecessaryReport {
        balanced_after_isolates: nonisolated_left == nonisolated_right,
        components,
        articulation_vertices: articulation_vertices(g),
    }
}

/// Outcome of the equal-degree matching test on a subcubic graph.
#[derive(Debug, Clone)]
pub struct EqDegReport {
    /// `G[1]` and `G[3]` have perfect matchings.
    pub necessary_holds: bool,
    /// Additionally `G[2]` has a perfect matching.
    pub sufficient_holds: bool,
    pub witness: Option<RotationSystem>,
}

fn class_matching(g: &BipartiteGraph, i: usize) -> Option<Vec<usize>> {
    let verts: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) == i).collect();
    let (h, map) = g.induced(&verts);
    if !has_perfect_matching(&h) {
        return None;
    }
    let m = maximum_matching(&h);
    Some(
        m.pairs()
            .iter()
            .map(|&(l, r)| g.edge_between(map[l], map[h.nl() + r]).unwrap())
            .collect(),
    )
}

/// Degree-class test with the constructive witness for the sufficient case.
///
/// The witness removes a perfect matching of `G[3]` (the middle edges),
/// alternates top and bottom edges around each remaining cycle starting at
/// its smallest vertex with the edge towards the smaller neighbour on top,
/// and takes as rotations the cycles of the graph in which each degree-3
/// vertex and each middle edge is split into an upper and a lower copy.
pub fn eq_deg_match(g: &BipartiteGraph) -> Result<EqDegReport> {
    if g.max_degree() > 3 {
        return Err(Error::Unsupported("eq_deg_match needs a subcubic graph".into()));
    }
    let m1 = class_matching(g, 1);
    let m3 = class_matching(g, 3);
    let necessary = m1.is_some() && m3.is_some();
    let m2 = class_matching(g, 2);
    let sufficient = necessary && m2.is_some();
    if !sufficient {
        return Ok(EqDegReport {
            necessary_holds: necessary,
            sufficient_holds: false,
            witness: None,
        });
    }
    let (m1, m3) = (m1.unwrap(), m3.unwrap());
    let middle: BTreeSet<usize> = m3.into_iter().collect();
    let n = g.n();
    // remaining graph: cycles plus the G[1] matching
    let rest_inc: Vec<Vec<usize>> = (0..n)
        .map(|v| g.incident(v).iter().copied().filter(|k| !middle.contains(k)).collect())
        .collect();
    let mut is_top = vec![false; g.m()];
    let mut colored = vec![false; g.m()];
    for &k in &m1 {
        colored[k] = true;
    }
    for s in 0..n {
        if rest_inc[s].len() != 2 || rest_inc[s].iter().any(|&k| colored[k]) {
            continue;
        }
        let first = *rest_inc[s]
            .iter()
            .min_by_key(|&&k| g.other(k, s))
            .unwrap();
        let (mut v, mut k, mut top) = (s, first, true);
        while !colored[k] {
            colored[k] = true;
            is_top[k] = top;
            let w = g.other(k, v);
            k = *rest_inc[w].iter().find(|&&x| x != k).unwrap();
            v = w;
            top = !top;
        }
    }
    let mut top_pairs: Vec<(usize, usize)> = m1.iter().map(|&k| g.edge(k)).collect();
    let mut bot_pairs = top_pairs.clone();
    for k in 0..g.m() {
        if colored[k] && !m1.contains(&k) {
            if is_top[k] {
                top_pairs.push(g.edge(k));
            } else {
                bot_pairs.push(g.edge(k));
            }
        }
    }
    let top = Matching::new(top_pairs)?;
    let bottom = Matching::new(bot_pairs)?;
    // split graph: node (v, upper?) for degree-3 vertices, (v, false) otherwise
    let node = |v: usize, upper: bool| if g.degree(v) == 3 { 2 * v + upper as usize } else { 2 * v };
    let mut split_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 2 * n];
    let add = |a: usize, b: usize, k: usize, adj: &mut Vec<Vec<(usize, usize)>>| {
        adj[a].push((b, k));
        adj[b].push((a, k));
    };
    let m1set: BTreeSet<usize> = m1.iter().copied().collect();
    for k in 0..g.m() {
        if m1set.contains(&k) {
            continue;
        }
        let (a, b) = g.endpoints(k);
        if middle.contains(&k) {
            add(node(a, true), node(b, true), k, &mut split_adj);
            add(node(a, false), node(b, false), k, &mut split_adj);
        } else {
            let up = is_top[k];
            add(node(a, up), node(b, up), k, &mut split_adj);
        }
    }
    let mut used = vec![[false; 2]; g.m()];
    let mut cycles = Vec::new();
    for start in 0..2 * n {
        if split_adj[start].len() != 2 {
            continue;
        }
        let (nb, k0) = split_adj[start][0];
        let copy = |a: usize, k: usize| -> usize { (middle.contains(&k) && a % 2 == 1) as usize };
        if used[k0][copy(start, k0)] {
            continue;
        }
        let mut cyc = Vec::new();
        let (mut prev, mut cur, mut k) = (start, nb, k0);
        loop {
            used[k][copy(prev, k)] = true;
            cyc.push(g.edge(k));
            if cur == start {
                break;
            }
            let &(nx, nk) = split_adj[cur]
                .iter()
                .find(|&&(x, kk)| !(kk == k && x == prev))
                .unwrap();
            prev = cur;
            cur = nx;
            k = nk;
        }
        cycles.push(cyc);
    }
    let rs = RotationSystem::from_cycles(g.clone(), top, bottom, &cycles)?;
    Ok(EqDegReport {
        necessary_holds: true,
        sufficient_holds: true,
        witness: Some(rs),
    })
}

/// All perfect matchings (covering every vertex) by minimum-degree branching:
/// a vertex of least remaining degree is matched in every possible way, and a
/// branch dies as soon as some vertex has no remaining edge.
pub fn enumerate_perfect_matchings(g: &BipartiteGraph, cap: usize) -> Result<Vec<Matching>> {
    let mut out = Vec::new();
    for_each_perfect_matching(g, |edges| {
        if out.len() >= cap {
            return Err(Error::resource("perfect matchings", cap, out.len()));
        }
        out.push(Matching::from_sorted_unchecked(
            edges.iter().map(|&k| g.edge(k)).collect(),
        ));
        Ok(())
    })?;
    out.sort();
    Ok(out)
}

/// Calls `f` with the edge ids of every perfect matching.
pub fn for_each_perfect_matching<F>(g: &BipartiteGraph, mut f: F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    if g.nl() != g.nr() {
        return Ok(());
    }
    let mut alive = vec![true; g.n()];
    let mut chosen = Vec::new();
    pm_rec(g, &mut alive, &mut chosen, &mut f)
}

fn pm_rec<F>(g: &BipartiteGraph, alive: &mut [bool], chosen: &mut Vec<usize>, f: &mut F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    let mut best: Option<(usize, usize)> = None;
    for v in 0..g.n() {
        if !alive[v] {
            continue;
        }
        let d = g.incident(v).iter().filter(|&&k| alive[g.other(k, v)]).count();
        if d == 0 {
            return Ok(());
        }
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, v));
        }
    }
    let Some((_, v)) = best else {
        let mut sorted = chosen.clone();
        sorted.sort_unstable();
        return f(&sorted);
    };
    alive[v] = false;
    for &k in g.incident(v) {
        let w = g.other(k, v);
        if !alive[w] {
            continue;
        }
        alive[w] = false;
        chosen.push(k);
        pm_rec(g, alive, chosen, f)?;
        chosen.pop();
        alive[w] = true;
    }
    alive[v] = true;
    Ok(())
}

/// Number of (perfect matching, edge subset disjoint from it) structures.
pub fn count_matching_subset_pairs(g: &BipartiteGraph, cap: usize) -> Result<u128> {
    let pms = enumerate_perfect_matchings(g, cap)?;
    Ok(pms
        .iter()
        .map(|m| 1u128 << (g.m() - m.len()).min(127))
        .sum())
}

/// Explicit (perfect matching, disjoint edge subset) structures, subsets given
/// as sorted edge ids. Fails once more than `cap` structures are produced.
pub fn matching_subset_pairs(g: &BipartiteGraph, cap: usize) -> Result<Vec<(Matching, Vec<usize>)>> {
    let pms = enumerate_perfect_matchings(g, cap)?;
    let mut out = Vec::new();
    for m in pms {
        let rest: Vec<usize> = (0..g.m())
            .filter(|&k| {
                let (l, r) = g.edge(k);
                !m.contains(l, r)
            })
            .collect();
        if rest.len() >= 64 {
            return Err(Error::resource("structures", cap, out.len()));
        }
        for mask in 0u64..(1u64 << rest.len()) {
            if out.len() >= cap {
                return Err(Error::resource("structures", cap, out.len()));
            }
            let s = rest
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &k)| k)
                .collect();
            out.push((m.clone(), s));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use crate::rotation::validate_rotation_system;

    #[test]
    fn matching_sizes() {
        assert_eq!(maximum_matching(&even_cycle(4)).len(), 2);
        assert_eq!(maximum_matching(&complete_bipartite(3, 3)).len(), 3);
        assert_eq!(maximum_matching(&complete_bipartite(1, 3)).len(), 1);
        assert_eq!(maximum_matching(&grid(5, 5)).len(), 12);
    }

    #[test]
    fn necessary_named() {
        assert!(necessary_conditions(&even_cycle(4)).all_pass());
        let r = necessary_conditions(&fig2_left());
        assert!(r.matching_covered() && !r.has_two_factor());
        let r = necessary_conditions(&fig2_right());
        assert!(!r.matching_covered() && r.has_two_factor());
        assert!(necessary_conditions(&k33_minus_e()).all_pass());
        let two = crate::graph::BipartiteGraph::from_edges(2, 2, vec![(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert!(articulation_vertices(&two).is_empty());
        assert_eq!(articulation_vertices(&path(3)), vec![path(3).find("r1").unwrap()]);
    }

    #[test]
    fn degree_classes() {
        let g = k33_minus_e();
        let g3 = degree_induced(&g, 3);
        assert_eq!((g3.n(), g3.m()), (4, 4));
        let g2 = degree_induced(&g, 2);
        assert_eq!((g2.n(), g2.m()), (2, 0));
        assert_eq!(degree_induced(&even_cycle(4), 2).m(), 4);
    }

    #[test]
    fn eq_deg_examples() {
        let r = eq_deg_match(&cube()).unwrap();
        assert!(r.necessary_holds && r.sufficient_holds);
        assert!(validate_rotation_system(r.witness.as_ref().unwrap()).is_valid());
        let r = eq_deg_match(&k33_minus_e()).unwrap();
        assert!(r.necessary_holds && !r.sufficient_holds && r.witness.is_none());
        let r = eq_deg_match(&single_edge()).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.top(), w.bottom());
        assert!(w.rotations().is_empty());
        assert!(eq_deg_match(&complete_bipartite(4, 4)).is_err());
    }

    #[test]
    fn perfect_matching_counts() {
        assert_eq!(enumerate_perfect_matchings(&complete_bipartite(3, 3), 100).unwrap().len(), 6);
        assert_eq!(enumerate_perfect_matchings(&k33_minus_e(), 100).unwrap().len(), 4);
        assert_eq!(enumerate_perfect_matchings(&even_cycle(4), 100).unwrap().len(), 2);
        match enumerate_perfect_matchings(&complete_bipartite(4, 4), 5) {
            Err(Error::Resource { partial, .. }) => assert_eq!(partial, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constants() {
        assert!((c0() - 1.22028).abs() < 1e-5);
        assert!((c1() - 2.21435).abs() < 1e-5);
        assert!((c2() - 2.48475).abs() < 1e-5);
        assert!((c0().powi(9) - 6.0).abs() < 1e-9);
    }
}
