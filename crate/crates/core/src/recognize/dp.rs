//! Bottom-up dynamic program over a good tree decomposition.
//!
//! A state describes a partial rotation system on the edges introduced below
//! a node, restricted to the bag: which bag vertices are already matched in
//! top and bottom, and for every rotation still open at the bag its role at
//! each bag vertex (none, upper edge only, lower edge only, both), together
//! with the precedence order among the open rotations. Rotations with no
//! half-finished bag vertex never gain edges again and are projected out of
//! the order after taking its transitive closure.

use super::treedec::{NodeKind, TreeDecomposition};
use super::Limits;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use std::collections::HashSet;

/// Counters from a DP run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DpStats {
    /// Sum over nodes of the valid-state set sizes.
    pub total_states: u64,
    /// Largest valid-state set at a single node.
    pub max_node_states: usize,
    /// Width of the decomposition used.
    pub width: usize,
    /// Number of decomposition nodes.
    pub nodes: usize,
}

const UP: u64 = 1;
const LOW: u64 = 2;
const ODD: u64 = 0x5555_5555_5555_5555;
const MAX_BAG: usize = 31;

/// Two bits per bag position in `sigs`, one bit per position in `top`/`bot`.
/// `below[i]` has bit `j` set when rotation `i` precedes rotation `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    top: u64,
    bot: u64,
    sigs: Vec<u64>,
    below: Vec<u64>,
}

fn half_open(sig: u64) -> bool {
    (sig ^ (sig >> 1)) & ODD != 0
}

fn insert_bits(x: u64, p: usize, w: usize) -> u64 {
    let low = x & ((1u64 << (w * p)) - 1);
    low | ((x >> (w * p)) << (w * p + w))
}

fn remove_bits(x: u64, p: usize, w: usize) -> u64 {
    let low = x & ((1u64 << (w * p)) - 1);
    low | ((x >> (w * p + w)) << (w * p))
}

fn closure(below: &mut [u64]) -> bool {
    let k = below.len();
    for m in 0..k {
        for i in 0..k {
            if below[i] >> m & 1 == 1 {
                below[i] |= below[m];
            }
        }
    }
    (0..k).all(|i| below[i] >> i & 1 == 0)
}

fn relabel(s: &State, perm: &[usize]) -> Vec<u64> {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    perm.iter()
        .map(|&old| {
            let mut row = 0u64;
            let mut b = s.below[old];
            while b != 0 {
                let j = b.trailing_zeros() as usize;
                b &= b - 1;
                row |= 1 << inv[j];
            }
            row
        })
        .collect()
}

/// Drops closed rotations and renames the rest by signature, breaking ties
/// by the smallest order matrix over a bounded number of permutations.
fn normalize(mut s: State) -> State {
    let keep: Vec<usize> = (0..s.sigs.len()).filter(|&i| half_open(s.sigs[i])).collect();
    if keep.len() < s.sigs.len() {
        let sub = State {
            top: s.top,
            bot: s.bot,
            sigs: keep.iter().map(|&i| s.sigs[i]).collect(),
            below: Vec::new(),
        };
        let below = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &j)| s.below[i] >> j & 1 == 1)
                    .fold(0u64, |acc, (nj, _)| acc | 1 << nj)
            })
            .collect();
        s = State { below, ..sub };
    }
    let mut perm: Vec<usize> = (0..s.sigs.len()).collect();
    perm.sort_by_key(|&i| s.sigs[i]);
    let mut groups = Vec::new();
    let mut a = 0;
    while a < perm.len() {
        let mut b = a + 1;
        while b < perm.len() && s.sigs[perm[b]] == s.sigs[perm[a]] {
            b += 1;
        }
        if b - a > 1 {
            groups.push((a, b));
        }
        a = b;
    }
    let mut best = relabel(&s, &perm);
    let combos: usize = groups.iter().map(|&(a, b)| (1..=b - a).product::<usize>()).product();
    if !groups.is_empty() && combos <= 720 {
        let mut cur = perm.clone();
        permute_groups(&s, &groups, 0, &mut cur, &mut best, &mut perm);
    }
    State {
        top: s.top,
        bot: s.bot,
        sigs: perm.iter().map(|&i| s.sigs[i]).collect(),
        below: best,
    }
}

fn permute_groups(
    s: &State,
    groups: &[(usize, usize)],
    gi: usize,
    cur: &mut Vec<usize>,
    best: &mut Vec<u64>,
    best_perm: &mut Vec<usize>,
) {
    if gi == groups.len() {
        let cand = relabel(s, cur);
        if cand < *best {
            *best = cand;
            best_perm.clone_from(cur);
        }
        return;
    }
    let (a, b) = groups[gi];
    heap_permute(cur, a, b - a, &mut |c| permute_groups(s, groups, gi + 1, c, best, best_perm));
}

fn heap_permute(v: &mut Vec<usize>, off: usize, k: usize, f: &mut dyn FnMut(&mut Vec<usize>)) {
    if k <= 1 {
        f(v);
        return;
    }
    for i in 0..k {
        heap_permute(v, off, k - 1, f);
        let j = if k % 2 == 0 { off + i } else { off };
        v.swap(j, off + k - 1);
    }
}

/// Every way of identifying open rotations of `a` with open rotations of `b`
/// whose roles are disjoint at each bag vertex.
fn join_pair(a: &State, b: &State, out: &mut Vec<State>) {
    if a.top & b.top != 0 || a.bot & b.bot != 0 {
        return;
    }
    let mut partner = vec![None; a.sigs.len()];
    let mut used = vec![false; b.sigs.len()];
    join_rec(a, b, 0, &mut partner, &mut used, out);
}

fn join_rec(
    a: &State,
    b: &State,
    i: usize,
    partner: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    out: &mut Vec<State>,
) {
    if i == a.sigs.len() {
        if let Some(s) = merge(a, b, partner, used) {
            out.push(s);
        }
        return;
    }
    partner[i] = None;
    join_rec(a, b, i + 1, partner, used, out);
    for j in 0..b.sigs.len() {
        if !used[j] && a.sigs[i] & b.sigs[j] == 0 {
            used[j] = true;
            partner[i] = Some(j);
            join_rec(a, b, i + 1, partner, used, out);
            used[j] = false;
        }
    }
    partner[i] = None;
}

fn merge(a: &State, b: &State, partner: &[Option<usize>], used: &[bool]) -> Option<State> {
    let mut sigs: Vec<u64> = a.sigs.clone();
    let mut map_b = vec![0; b.sigs.len()];
    for (i, p) in partner.iter().enumerate() {
        if let Some(j) = *p {
            sigs[i] |= b.sigs[j];
            map_b[j] = i;
        }
    }
    for j in 0..b.sigs.len() {
        if !used[j] {
            map_b[j] = sigs.len();
            sigs.push(b.sigs[j]);
        }
    }
    if sigs.len() > 64 {
        return None;
    }
    let mut below = vec![0u64; sigs.len()];
    below[..a.below.len()].copy_from_slice(&a.below);
    for (j, &row) in b.below.iter().enumerate() {
        let mut bits = row;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            below[map_b[j]] |= 1 << map_b[k];
        }
    }
    if !closure(&mut below) {
        return None;
    }
    Some(normalize(State {
        top: a.top | b.top,
        bot: a.bot | b.bot,
        sigs,
        below,
    }))
}

/// States holding only edge `(pa, pb)`: upper in bottom or a new rotation,
/// lower in top or another new rotation.
fn edge_states(pa: usize, pb: usize) -> Vec<State> {
    let bits = 1u64 << pa | 1u64 << pb;
    let up = UP << (2 * pa) | UP << (2 * pb);
    let low = LOW << (2 * pa) | LOW << (2 * pb);
    vec![
        State { top: bits, bot: bits, sigs: vec![], below: vec![] },
        State { top: 0, bot: bits, sigs: vec![low], below: vec![0] },
        State { top: bits, bot: 0, sigs: vec![up], below: vec![0] },
        State { top: 0, bot: 0, sigs: vec![up, low], below: vec![0b10, 0] },
    ]
}

/// Decides realizability by the valid-state sets of `td`. Decision only.
pub fn recognize_treewidth_dp(
    g: &BipartiteGraph,
    td: &TreeDecomposition,
    limits: &Limits,
) -> Result<(bool, DpStats)> {
    let mut stats = DpStats {
        width: td.width(),
        nodes: td.nodes.len(),
        ..DpStats::default()
    };
    if td.width() + 1 > MAX_BAG {
        return Err(Error::Unsupported(format!("bags larger than {MAX_BAG} vertices")));
    }
    let mut sets: Vec<Option<HashSet<State>>> = vec![None; td.nodes.len()];
    for t in td.postorder() {
        let node = &td.nodes[t];
        let bag = &node.bag;
        let pos = |v: usize| bag.binary_search(&v).expect("vertex in bag");
        let mut take = |c: usize| sets[c].take().expect("child evaluated");
        let mut out: HashSet<State> = HashSet::new();
        match node.kind {
            NodeKind::Leaf => {
                out.insert(State { top: 0, bot: 0, sigs: vec![], below: vec![] });
            }
            NodeKind::Introduce(v) => {
                let p = pos(v);
                for s in take(node.children[0]) {
                    out.insert(State {
                        top: insert_bits(s.top, p, 1),
                        bot: insert_bits(s.bot, p, 1),
                        sigs: s.sigs.iter().map(|&x| insert_bits(x, p, 2)).collect(),
                        below: s.below,
                    });
                }
            }
            NodeKind::Forget(v) => {
                let child = &td.nodes[node.children[0]].bag;
                let p = child.binary_search(&v).expect("vertex in child bag");
                let isolated = g.degree(v) == 0;
                for s in take(node.children[0]) {
                    let matched = s.top >> p & 1 == 1 && s.bot >> p & 1 == 1;
                    if !isolated && !matched {
                        continue;
                    }
                    if s.sigs.iter().any(|&x| half_open(x >> (2 * p) & 3)) {
                        continue;
                    }
                    out.insert(normalize(State {
                        top: remove_bits(s.top, p, 1),
                        bot: remove_bits(s.bot, p, 1),
                        sigs: s.sigs.iter().map(|&x| remove_bits(x, p, 2)).collect(),
                        below: s.below,
                    }));
                }
            }
            NodeKind::Join => {
                let a = take(node.children[0]);
                let b = take(node.children[1]);
                let mut buf = Vec::new();
                for x in &a {
                    for y in &b {
                        join_pair(x, y, &mut buf);
                        out.extend(buf.drain(..));
                    }
                    if out.len() > limits.max_states {
                        return Err(Error::resource("DP states per node", limits.max_states, out.len()));
                    }
                }
            }
            NodeKind::Edge(e) => {
                let (u, w) = g.endpoints(e);
                let leaf = edge_states(pos(u), pos(w));
                let mut buf = Vec::new();
                for s in take(node.children[0]) {
                    for l in &leaf {
                        join_pair(&s, l, &mut buf);
                        out.extend(buf.drain(..));
                    }
                }
            }
        }
        if out.len() > limits.max_states {
            return Err(Error::resource("DP states per node", limits.max_states, out.len()));
        }
        let cap = 2 * bag.iter().map(|&v| g.degree(v)).sum::<usize>();
        if let Some(s) = out.iter().find(|s| s.sigs.len() > cap) {
            return Err(Error::resource("open rotations per state", cap, s.sigs.len()));
        }
        stats.total_states += out.len() as u64;
        stats.max_node_states = stats.max_node_states.max(out.len());
        sets[t] = Some(out);
    }
    let root = sets[td.root].take().unwrap_or_default();
    Ok((!root.is_empty(), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete_bipartite, even_cycle, k33_minus_e, path, single_edge};
    use crate::recognize::tree_decompose;

    fn decide(g: &BipartiteGraph) -> bool {
        recognize_treewidth_dp(g, &tree_decompose(g), &Limits::default()).unwrap().0
    }

    #[test]
    fn bit_fields() {
        assert_eq!(insert_bits(0b1011, 1, 1), 0b10101);
        assert_eq!(remove_bits(0b10101, 1, 1), 0b1011);
        assert_eq!(insert_bits(0b1101, 1, 2), 0b110001);
        assert!(half_open(0b0100) && !half_open(0b1100));
    }

    #[test]
    fn small_decisions() {
        assert!(decide(&single_edge()));
        assert!(decide(&even_cycle(4)));
        assert!(decide(&even_cycle(6)));
        assert!(decide(&complete_bipartite(3, 3)));
        assert!(!decide(&k33_minus_e()));
        assert!(!decide(&path(3)));
        assert!(!decide(&path(4)));
    }
}
