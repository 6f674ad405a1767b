//! Named graphs, grids, products and exhaustive small-graph generation.

use crate::graph::BipartiteGraph;
use crate::order::StrictOrder;
use std::collections::{BTreeMap, HashMap};

/// Graph on an abstract vertex set `0..n` with a 2-colouring `left[v]`.
/// Vertex `v` becomes `s{v}` or `r{v}` and keeps its relative order.
pub fn from_colored(left: &[bool], edges: &[(usize, usize)]) -> (BipartiteGraph, Vec<usize>) {
    let mut li = Vec::new();
    let mut ri = Vec::new();
    let mut local = vec![0; left.len()];
    for (v, &is_left) in left.iter().enumerate() {
        if is_left {
            local[v] = li.len();
            li.push(format!("s{v}"));
        } else {
            local[v] = ri.len();
            ri.push(format!("r{v}"));
        }
    }
    let nl = li.len();
    let pairs = edges
        .iter()
        .map(|&(a, b)| if left[a] { (local[a], local[b]) } else { (local[b], local[a]) })
        .collect();
    let g = BipartiteGraph::new(li, ri, pairs).expect("coloured edge list is bipartite");
    let map = (0..left.len())
        .map(|v| if left[v] { local[v] } else { nl + local[v] })
        .collect();
    (g, map)
}

/// Unified vertex of grid point `(i, j)` in [`grid`].
pub fn grid_vertex(a: usize, b: usize, i: usize, j: usize) -> usize {
    let _ = a;
    let idx = i * b + j;
    if (i + j) % 2 == 0 {
        idx / 2
    } else {
        (a * b).div_ceil(2) + idx / 2
    }
}

/// The `a × b` grid on points `(i, j)`, `0 ≤ i < a`, `0 ≤ j < b`; points
/// with `i + j` even are students. Vertex names are `p{i}_{j}`.
pub fn grid(a: usize, b: usize) -> BipartiteGraph {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for i in 0..a {
        for j in 0..b {
            let name = format!("p{i}_{j}");
            if (i + j) % 2 == 0 {
                left.push(name);
            } else {
                right.push(name);
            }
        }
    }
    let nl = left.len();
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            let u = grid_vertex(a, b, i, j);
            let mut nb = Vec::new();
            if i + 1 < a {
                nb.push(grid_vertex(a, b, i + 1, j));
            }
            if j + 1 < b {
                nb.push(grid_vertex(a, b, i, j + 1));
            }
            for v in nb {
                let (l, r) = if u < nl { (u, v - nl) } else { (v, u - nl) };
                edges.push((l, r));
            }
        }
    }
    BipartiteGraph::new(left, right, edges).expect("grid is bipartite")
}

pub fn complete_bipartite(a: usize, b: usize) -> BipartiteGraph {
    let edges = (0..a).flat_map(|l| (0..b).map(move |r| (l, r))).collect();
    BipartiteGraph::from_edges(a, b, edges).unwrap()
}

/// `K_{3,3}` minus the edge `s2 r2`.
pub fn k33_minus_e() -> BipartiteGraph {
    let edges = (0..3)
        .flat_map(|l| (0..3).map(move |r| (l, r)))
        .filter(|&e| e != (2, 2))
        .collect();
    BipartiteGraph::from_edges(3, 3, edges).unwrap()
}

/// Cycle with `len` vertices (even, at least 4): `s_i r_i s_{i+1}`.
pub fn even_cycle(len: usize) -> BipartiteGraph {
    assert!(len >= 4 && len % 2 == 0);
    let k = len / 2;
    let edges = (0..k).flat_map(|i| [(i, i), ((i + 1) % k, i)]).collect();
    BipartiteGraph::from_edges(k, k, edges).unwrap()
}

/// Path with `n` vertices.
pub fn path(n: usize) -> BipartiteGraph {
    let left: Vec<bool> = (0..n).map(|v| v % 2 == 0).collect();
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    from_colored(&left, &edges).0
}

pub fn single_edge() -> BipartiteGraph {
    BipartiteGraph::from_edges(1, 1, vec![(0, 0)]).unwrap()
}

/// The 3-cube.
pub fn cube() -> BipartiteGraph {
    let left: Vec<bool> = (0..8u32).map(|v| v.count_ones() % 2 == 0).collect();
    let mut edges = Vec::new();
    for v in 0..8usize {
        for bit in 0..3 {
            let w = v ^ (1 << bit);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    from_colored(&left, &edges).0
}

/// `K2 □ K_{1,3}`: matching-covered without a 2-factor.
pub fn fig2_left() -> BipartiteGraph {
    product(&single_edge(), &complete_bipartite(1, 3)).0
}

/// Two 4-cycles joined by a bridge: has a 2-factor, not matching-covered.
pub fn fig2_right() -> BipartiteGraph {
    let edges = vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3), (1, 2)];
    BipartiteGraph::from_edges(4, 4, edges).unwrap()
}

/// Vertex-disjoint union; `b` is placed after `a` on each side.
pub fn disjoint_union(a: &BipartiteGraph, b: &BipartiteGraph) -> BipartiteGraph {
    let mut left: Vec<String> = a.left_ids().iter().map(|s| format!("a.{s}")).collect();
    left.extend(b.left_ids().iter().map(|s| format!("b.{s}")));
    let mut right: Vec<String> = a.right_ids().iter().map(|s| format!("a.{s}")).collect();
    right.extend(b.right_ids().iter().map(|s| format!("b.{s}")));
    let mut edges = a.edges().to_vec();
    edges.extend(b.edges().iter().map(|&(l, r)| (l + a.nl(), r + a.nr())));
    BipartiteGraph::new(left, right, edges).unwrap()
}

/// Cartesian product. Pairs of same-side vertices are students. Returns the
/// graph and the map `(g, h) -> unified vertex`, indexed `g * |V(H)| + h`.
pub fn product(g: &BipartiteGraph, h: &BipartiteGraph) -> (BipartiteGraph, Vec<usize>) {
    let nh = h.n();
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut map = vec![0; g.n() * nh];
    let mut is_left = vec![false; g.n() * nh];
    for x in 0..g.n() {
        for y in 0..nh {
            let name = format!("{}*{}", g.name(x), h.name(y));
            let i = x * nh + y;
            if g.is_left(x) == h.is_left(y) {
                is_left[i] = true;
                map[i] = left.len();
                left.push(name);
            } else {
                map[i] = right.len();
                right.push(name);
            }
        }
    }
    let nl = left.len();
    for i in 0..map.len() {
        if !is_left[i] {
            map[i] += nl;
        }
    }
    let mut edges = Vec::new();
    let mut push = |u: usize, v: usize| {
        let (a, b) = (map[u], map[v]);
        edges.push(if a < nl { (a, b - nl) } else { (b, a - nl) });
    };
    for x in 0..g.n() {
        for k in 0..h.m() {
            let (p, q) = h.endpoints(k);
            push(x * nh + p, x * nh + q);
        }
    }
    for k in 0..g.m() {
        let (p, q) = g.endpoints(k);
        for y in 0..nh {
            push(p * nh + y, q * nh + y);
        }
    }
    (BipartiteGraph::new(left, right, edges).unwrap(), map)
}

/// Colour refinement on an undirected graph given by adjacency lists,
/// starting from `init`. Returns stable colours (dense, canonical given the
/// initial colours) with the number of classes.
fn refine(adj: &[Vec<usize>], init: &[u64]) -> Vec<u64> {
    let n = adj.len();
    let mut col = init.to_vec();
    let mut classes = {
        let mut c = col.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let sigs: Vec<(u64, Vec<u64>)> = (0..n)
            .map(|v| {
                let mut s: Vec<u64> = adj[v].iter().map(|&w| col[w]).collect();
                s.sort_unstable();
                (col[v], s)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        let idx: BTreeMap<&(u64, Vec<u64>), u64> =
            uniq.iter().enumerate().map(|(i, s)| (s, i as u64)).collect();
        col = sigs.iter().map(|s| idx[s]).collect();
        if uniq.len() == classes {
            return col;
        }
        classes = uniq.len();
    }
}

fn adjacency(g: &BipartiteGraph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v)).collect()
}

/// Isomorphism invariant of a graph, ignoring which side is which.
pub fn invariant(g: &BipartiteGraph) -> Vec<u64> {
    let adj = adjacency(g);
    let init: Vec<u64> = (0..g.n()).map(|v| g.degree(v) as u64).collect();
    let col = refine(&adj, &init);
    // colours are ranks of signatures, so their multiset plus class-pair edge
    // counts is invariant
    let mut out: Vec<u64> = vec![g.n() as u64, g.m() as u64];
    let mut hist: Vec<u64> = col.clone();
    hist.sort_unstable();
    out.extend(hist);
    let mut pairs: Vec<u64> = (0..g.m())
        .map(|k| {
            let (a, b) = g.endpoints(k);
            let (x, y) = (col[a].min(col[b]), col[a].max(col[b]));
            x * 1_000_003 + y
        })
        .collect();
    pairs.sort_unstable();
    out.extend(pairs);
    out
}

/// Whether two graphs are isomorphic as uncoloured graphs.
pub fn isomorphic(a: &BipartiteGraph, b: &BipartiteGraph) -> bool {
    if a.n() != b.n() || a.m() != b.m() {
        return false;
    }
    let (adj_a, adj_b) = (adjacency(a), adjacency(b));
    let n = a.n();
    let init_a: Vec<u64> = (0..n).map(|v| a.degree(v) as u64).collect();
    let init_b: Vec<u64> = (0..n).map(|v| b.degree(v) as u64).collect();
    // joint refinement keeps colour names comparable across the two graphs
    let mut joint: Vec<Vec<usize>> = adj_a.clone();
    joint.extend(adj_b.iter().map(|l| l.iter().map(|&w| w + n).collect()));
    let mut init = init_a;
    init.extend(init_b);
    let col = refine(&joint, &init);
    let mut ca: Vec<u64> = col[..n].to_vec();
    let mut cb: Vec<u64> = col[n..].to_vec();
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return false;
    }
    iso_search(&joint, col, n)
}

fn iso_search(joint: &[Vec<usize>], col: Vec<u64>, n: usize) -> bool {
    // pick the smallest non-singleton class on the first graph
    let mut count: HashMap<u64, usize> = HashMap::new();
    for &c in &col[..n] {
        *count.entry(c).or_default() += 1;
    }
    let target = (0..n)
        .filter(|&v| count[&col[v]] > 1)
        .min_by_key(|&v| (count[&col[v]], col[v]));
    let Some(v) = target else {
        // discrete: check the induced bijection
        let mut pos = HashMap::new();
        for w in n..2 * n {
            pos.insert(col[w], w - n);
        }
        return (0..n).all(|u| {
            let mut mapped: Vec<usize> = joint[u].iter().map(|&x| pos[&col[x]]).collect();
            mapped.sort_unstable();
            let img = pos[&col[u]];
            let mut real: Vec<usize> = joint[img + n].iter().map(|&x| x - n).collect();
            real.sort_unstable();
            mapped == real
        });
    };
    let fresh = col.iter().max().unwrap() + 1;
    for w in n..2 * n {
        if col[w] != col[v] {
            continue;
        }
        let mut c = col.clone();
        c[v] = fresh;
        c[w] = fresh;
        let c = refine(joint, &c);
        let mut ca: Vec<u64> = c[..n].to_vec();
        let mut cb: Vec<u64> = c[n..].to_vec();
        ca.sort_unstable();
        cb.sort_unstable();
        if ca == cb && iso_search(joint, c, n) {
            return true;
        }
    }
    false
}

/// All connected bipartite graphs with `1..=max_edges` edges, one per
/// isomorphism class, grouped by edge count in generation order.
pub fn all_small(max_edges: usize) -> Vec<BipartiteGraph> {
    let mut out = Vec::new();
    let mut layer: Vec<(Vec<bool>, Vec<(usize, usize)>)> = vec![(vec![true, false], vec![(0, 1)])];
    for m in 1..=max_edges {
        if m > 1 {
            let mut buckets: HashMap<Vec<u64>, Vec<BipartiteGraph>> = HashMap::new();
            let mut next = Vec::new();
            for (col, edges) in &layer {
                let n = col.len();
                let mut cands: Vec<(Vec<bool>, Vec<(usize, usize)>)> = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if col[u] != col[v] && !edges.contains(&(u, v)) {
                            let mut e = edges.clone();
                            e.push((u, v));
                            cands.push((col.clone(), e));
                        }
                    }
                    let mut c = col.clone();
                    c.push(!col[u]);
                    let mut e = edges.clone();
                    e.push((u, n));
                    cands.push((c, e));
                }
                for (c, e) in cands {
                    let g = from_colored(&c, &e).0;
                    let key = invariant(&g);
                    let bucket = buckets.entry(key).or_default();
                    if bucket.iter().any(|h| isomorphic(h, &g)) {
                        continue;
                    }
                    bucket.push(g);
                    next.push((c, e));
                }
            }
            layer = next;
        }
        out.extend(layer.iter().map(|(c, e)| from_colored(c, e).0));
    }
    out
}

/// All strict partial orders on at most `max_n` elements up to isomorphism,
/// each given with a natural labelling (`i < j` in the order implies
/// `i < j` as integers).
pub fn all_small_posets(max_n: usize) -> Vec<StrictOrder> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut reps: HashMap<Vec<u64>, Vec<Vec<Vec<bool>>>> = HashMap::new();
        for mask in 0u64..(1u64 << pairs.len()) {
            let mut rel = vec![vec![false; n]; n];
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    rel[i][j] = true;
                }
            }
            let transitive = (0..n).all(|i| {
                (0..n).all(|j| !rel[i][j] || (0..n).all(|k| !rel[j][k] || rel[i][k]))
            });
            if !transitive {
                continue;
            }
            let mut key: Vec<u64> = (0..n)
                .map(|i| {
                    let up = (0..n).filter(|&j| rel[i][j]).count() as u64;
                    let down = (0..n).filter(|&j| rel[j][i]).count() as u64;
                    up * 64 + down
                })
                .collect();
            key.sort_unstable();
            let bucket = reps.entry(key).or_default();
            if bucket.iter().any(|r| poset_iso(r, &rel)) {
                continue;
            }
            bucket.push(rel.clone());
            let list: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(i, j)| rel[i][j]).collect();
            out.push(StrictOrder::from_relations(n, &list).unwrap());
        }
    }
    out
}

/// Isomorphism of two relations given as matrices, by permutation search.
pub fn poset_iso(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(i: usize, a: &[Vec<bool>], b: &[Vec<bool>], perm: &mut [usize], used: &mut [bool]) -> bool {
        let n = a.len();
        if i == n {
            return true;
        }
        for j in 0..n {
            if used[j] {
                continue;
            }
            let ok = (0..i).all(|k| a[i][k] == b[j][perm[k]] && a[k][i] == b[perm[k]][j]);
            if !ok {
                continue;
            }
            perm[i] = j;
            used[j] = true;
            if go(i + 1, a, b, perm, used) {
                return true;
            }
            used[j] = false;
        }
        false
    }
    go(0, a, b, &mut perm, &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        let g = grid(4, 5);
        assert_eq!((g.nl(), g.nr(), g.m()), (10, 10, 31));
        assert_eq!(g.max_degree(), 4);
        let g = grid(3, 3);
        assert_eq!((g.nl(), g.nr(), g.m()), (5, 4, 12));
    }

    #[test]
    fn product_matches_grid() {
        let (g, _) = product(&path(3), &path(4));
        assert!(isomorphic(&g, &grid(3, 4)));
        let (q, _) = product(&even_cycle(4), &single_edge());
        assert!(isomorphic(&q, &cube()));
    }

    #[test]
    fn fig2_degrees() {
        let g = fig2_left();
        assert_eq!((g.n(), g.m(), g.max_degree()), (8, 10, 4));
        let h = fig2_right();
        assert_eq!((h.n(), h.m()), (8, 9));
    }

    #[test]
    fn isomorphism_basics() {
        assert!(isomorphic(&even_cycle(6), &even_cycle(6)));
        assert!(!isomorphic(&path(4), &complete_bipartite(1, 3)));
        assert!(!isomorphic(&even_cycle(8), &disjoint_union(&even_cycle(4), &even_cycle(4))));
    }

    #[test]
    fn small_graph_counts() {
        // connected bipartite graphs by edge count (trees plus cyclic ones):
        // 1 edge: K2; 2: P3; 3: P4, K13; 4: P5, spider, K14, C4
        let all = all_small(4);
        let by_m: Vec<usize> = (1..=4).map(|m| all.iter().filter(|g| g.m() == m).count()).collect();
        assert_eq!(by_m, vec![1, 1, 2, 4]);
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=5)
            .map(|n| all_small_posets(5).iter().filter(|p| p.len() == n).count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }
}
