use crate::analysis::max_matching_adj;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use crate::instance::Instance;

/// Splits a `d`-regular bipartite graph into `d` disjoint perfect matchings
/// by repeated extraction.
pub fn regular_decomposition(g: &BipartiteGraph) -> Result<Vec<Matching>> {
    let d = (0..g.n()).map(|v| g.degree(v)).max().unwrap_or(0);
    if (0..g.n()).any(|v| g.degree(v) != d) {
        return Err(Error::Unsupported("graph is not regular".into()));
    }
    let mut alive = vec![true; g.m()];
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        let adj: Vec<Vec<usize>> = (0..g.nl())
            .map(|l| {
                g.incident(l)
                    .iter()
                    .filter(|&&k| alive[k])
                    .map(|&k| g.edge(k).1)
                    .collect()
            })
            .collect();
        let ml = max_matching_adj(g.nl(), g.nr(), &adj);
        let pairs: Vec<(usize, usize)> = ml
            .iter()
            .enumerate()
            .map(|(l, r)| (l, r.expect("regular bipartite graphs have perfect matchings")))
            .collect();
        for &(l, r) in &pairs {
            alive[g.edge_id(l, r).unwrap()] = false;
        }
        out.push(Matching::from_sorted_unchecked(pairs));
    }
    Ok(out)
}

/// Preferences for a regular bipartite graph: students rank partners in the
/// order of the matchings of [`regular_decomposition`], residencies in the
/// reverse order, so every matching of the decomposition is stable.
pub fn realize_regular(g: &BipartiteGraph) -> Result<Instance> {
    let ms = regular_decomposition(g)?;
    let mut spref = vec![Vec::new(); g.nl()];
    let mut rpref = vec![Vec::new(); g.nr()];
    for m in &ms {
        for &(l, r) in m.pairs() {
            spref[l].push(r);
        }
    }
    for m in ms.iter().rev() {
        for &(l, r) in m.pairs() {
            rpref[r].push(l);
        }
    }
    Instance::new(g.left_ids().to_vec(), g.right_ids().to_vec(), spref, rpref)
}

/// A regular bipartite supergraph containing `g` as an induced subgraph.
///
/// Both sides are padded to `n` vertices and every vertex gets a copy on the
/// same side; edges of `g` are repeated between the copies and every
/// non-adjacent pair `(l, r)` is joined crosswise as `l r'` and `l' r`. The
/// result is `n`-regular. The map sends each unified vertex of `g` to its
/// unified vertex in the supergraph.
pub fn regularize(g: &BipartiteGraph) -> (BipartiteGraph, Vec<usize>) {
    let n = g.nl().max(g.nr());
    let pad = |ids: &[String], tag: &str| -> Vec<String> {
        let mut v = ids.to_vec();
        for i in ids.len()..n {
            v.push(format!("{tag}{i}"));
        }
        v
    };
    let lo = pad(g.left_ids(), "pad_s");
    let ro = pad(g.right_ids(), "pad_r");
    let mut left = lo.clone();
    left.extend(lo.iter().map(|s| format!("{s}'")));
    let mut right = ro.clone();
    right.extend(ro.iter().map(|s| format!("{s}'")));
    let mut edges = Vec::new();
    for l in 0..n {
        for r in 0..n {
            let real = l < g.nl() && r < g.nr() && g.has_edge(l, r);
            if real {
                edges.push((l, r));
                edges.push((n + l, n + r));
            } else {
                edges.push((l, n + r));
                edges.push((n + l, r));
            }
        }
    }
    let big = BipartiteGraph::new(left, right, edges).expect("regularized graph is well formed");
    let map = (0..g.n())
        .map(|v| if v < g.nl() { v } else { 2 * n + (v - g.nl()) })
        .collect();
    (big, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete_bipartite, even_cycle, isomorphic, path, single_edge};

    #[test]
    fn regular_examples() {
        for g in [complete_bipartite(3, 3), even_cycle(4), even_cycle(8), single_edge()] {
            let inst = realize_regular(&g).unwrap();
            assert_eq!(inst.stable_pairs_graph().edges(), g.edges());
        }
        let c4 = realize_regular(&even_cycle(4)).unwrap();
        assert_eq!(c4.enumerate_stable_matchings(10).unwrap().len(), 2);
        assert!(realize_regular(&path(3)).is_err());
    }

    #[test]
    fn regularize_examples() {
        let p3 = path(3);
        let (big, map) = regularize(&p3);
        assert_eq!(big.n(), 8);
        assert!((0..big.n()).all(|v| big.degree(v) == 2));
        assert!(isomorphic(&big.induced(&map).0, &p3));
        // one copy edge per side: two disjoint edges, 1-regular
        let (two, map) = regularize(&single_edge());
        assert_eq!((two.n(), two.m()), (4, 2));
        assert!((0..4).all(|v| two.degree(v) == 1));
        assert_eq!(two.induced(&map).0.m(), 1);
        let empty = BipartiteGraph::from_edges(1, 1, vec![]).unwrap();
        let (big, map) = regularize(&empty);
        assert_eq!(big.m(), 2);
        assert_eq!(big.induced(&map).0.m(), 0);
    }
}
