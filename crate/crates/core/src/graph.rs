//! Bipartite graphs with a declared bipartition and matchings over them.
//!
//! Vertices are addressed in two ways: by side-local index (`left i`,
//! `right j`) and by a unified index where left vertex `i` is `i` and right
//! vertex `j` is `nl + j`. Edges are stored as sorted `(left, right)` pairs and
//! identified by their position in that sorted list.

use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashSet};

/// A set of `(left, right)` pairs with each vertex used at most once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Builds a matching, sorting the pairs. Fails if a vertex repeats.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        pairs.dedup();
        let mut ls = HashSet::new();
        let mut rs = HashSet::new();
        for &(l, r) in &pairs {
            if !ls.insert(l) || !rs.insert(r) {
                return Err(Error::Input(format!(
                    "pair ({l}, {r}) reuses a matched vertex"
                )));
            }
        }
        Ok(Matching { pairs })
    }

    /// Builds a matching from pairs already known to be disjoint.
    pub fn from_sorted_unchecked(pairs: Vec<(usize, usize)>) -> Self {
        let mut pairs = pairs;
        pairs.sort_unstable();
        Matching { pairs }
    }

    pub fn empty() -> Self {
        Matching { pairs: Vec::new() }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, l: usize, r: usize) -> bool {
        self.pairs.binary_search(&(l, r)).is_ok()
    }

    /// Partner of each left vertex, for a left side of size `nl`.
    pub fn left_partners(&self, nl: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; nl];
        for &(l, r) in &self.pairs {
            out[l] = Some(r);
        }
        out
    }

    /// Partner of each right vertex, for a right side of size `nr`.
    pub fn right_partners(&self, nr: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; nr];
        for &(l, r) in &self.pairs {
            out[r] = Some(l);
        }
        out
    }

    /// Covered vertices as unified indices.
    pub fn covered(&self, nl: usize) -> BTreeSet<usize> {
        self.pairs
            .iter()
            .flat_map(|&(l, r)| [l, nl + r])
            .collect()
    }
}

/// An undirected bipartite graph with an optional combinatorial embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: Vec<String>,
    right: Vec<String>,
    edges: Vec<(usize, usize)>,
    inc: Vec<Vec<usize>>,
    embedding: Option<Vec<Vec<usize>>>,
}

impl BipartiteGraph {
    /// Builds a graph with explicit vertex ids. Edges are deduplicated check-wise:
    /// a repeated edge or an out-of-range endpoint is an input error.
    pub fn new(left: Vec<String>, right: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for &(l, r) in &edges {
            if l >= left.len() || r >= right.len() {
                return Err(Error::Input(format!("edge ({l}, {r}) has an undeclared endpoint")));
            }
            if !seen.insert((l, r)) {
                return Err(Error::Input(format!(
                    "duplicate edge {} {}",
                    left[l], right[r]
                )));
            }
        }
        let ids: HashSet<&String> = left.iter().chain(right.iter()).collect();
        if ids.len() != left.len() + right.len() {
            return Err(Error::Input("vertex ids must be distinct".into()));
        }
        let mut edges = edges;
        edges.sort_unstable();
        let nl = left.len();
        let mut inc = vec![Vec::new(); nl + right.len()];
        for (k, &(l, r)) in edges.iter().enumerate() {
            inc[l].push(k);
            inc[nl + r].push(k);
        }
        Ok(BipartiteGraph {
            left,
            right,
            edges,
            inc,
            embedding: None,
        })
    }

    /// Builds a graph on `nl + nr` vertices named `s0..` and `r0..`.
    pub fn from_edges(nl: usize, nr: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let left = (0..nl).map(|i| format!("s{i}")).collect();
        let right = (0..nr).map(|j| format!("r{j}")).collect();
        Self::new(left, right, edges)
    }

    pub fn nl(&self) -> usize {
        self.left.len()
    }

    pub fn nr(&self) -> usize {
        self.right.len()
    }

    /// Total vertex count.
    pub fn n(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn left_ids(&self) -> &[String] {
        &self.left
    }

    pub fn right_ids(&self) -> &[String] {
        &self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> (usize, usize) {
        self.edges[k]
    }

    /// Position of edge `(l, r)` in the sorted edge list.
    pub fn edge_id(&self, l: usize, r: usize) -> Option<usize> {
        self.edges.binary_search(&(l, r)).ok()
    }

    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        self.edge_id(l, r).is_some()
    }

    /// Unified endpoints of edge `k`.
    pub fn endpoints(&self, k: usize) -> (usize, usize) {
        let (l, r) = self.edges[k];
        (l, self.nl() + r)
    }

    /// Unified index of the other endpoint of edge `k` seen from `v`.
    pub fn other(&self, k: usize, v: usize) -> usize {
        let (a, b) = self.endpoints(k);
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_left(&self, v: usize) -> bool {
        v < self.nl()
    }

    /// Incident edge ids of unified vertex `v`, in increasing order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.inc[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.inc.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Unified neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.inc[v].iter().map(|&k| self.other(k, v)).collect()
    }

    /// Name of unified vertex `v`.
    pub fn name(&self, v: usize) -> &str {
        if v < self.nl() {
            &self.left[v]
        } else {
            &self.right[v - self.nl()]
        }
    }

    /// Unified index of a vertex by id.
    pub fn find(&self, id: &str) -> Option<usize> {
        self.left
            .iter()
            .position(|x| x == id)
            .or_else(|| self.right.iter().position(|x| x == id).map(|j| j + self.nl()))
    }

    /// Edge id of the edge between two unified vertices, in either order.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let nl = self.nl();
        match (u < nl, v < nl) {
            (true, false) => self.edge_id(u, v - nl),
            (false, true) => self.edge_id(v, u - nl),
            _ => None,
        }
    }

    /// Connected components as sorted lists of unified vertices, ordered by
    /// smallest member. Isolated vertices form singleton components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &k in &self.inc[v] {
                    let w = self.other(k, v);
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The subgraph induced by a set of unified vertices, with its vertex map
    /// (new unified index to old unified index).
    pub fn induced(&self, verts: &[usize]) -> (BipartiteGraph, Vec<usize>) {
        let mut ls: Vec<usize> = verts.iter().copied().filter(|&v| v < self.nl()).collect();
        let mut rs: Vec<usize> = verts.iter().copied().filter(|&v| v >= self.nl()).collect();
        ls.sort_unstable();
        ls.dedup();
        rs.sort_unstable();
        rs.dedup();
        let mut lmap = vec![usize::MAX; self.nl()];
        let mut rmap = vec![usize::MAX; self.nr()];
        for (i, &l) in ls.iter().enumerate() {
            lmap[l] = i;
        }
        for (j, &r) in rs.iter().enumerate() {
            rmap[r - self.nl()] = j;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(l, r)| lmap[l] != usize::MAX && rmap[r] != usize::MAX)
            .map(|&(l, r)| (lmap[l], rmap[r]))
            .collect();
        let left = ls.iter().map(|&l| self.left[l].clone()).collect();
        let right = rs.iter().map(|&r| self.right[r - self.nl()].clone()).collect();
        let g = BipartiteGraph::new(left, right, edges).expect("induced subgraph is well formed");
        let mut map = ls.clone();
        map.extend(rs.iter().copied());
        (g, map)
    }

    /// Same vertex set, only the listed edges.
    pub fn edge_subgraph(&self, keep: &[usize]) -> BipartiteGraph {
        let edges = keep.iter().map(|&k| self.edges[k]).collect();
        BipartiteGraph::new(self.left.clone(), self.right.clone(), edges)
            .expect("edge subgraph is well formed")
    }

    /// Whether every edge of `m` is an edge of this graph.
    pub fn contains_matching(&self, m: &Matching) -> bool {
        m.pairs().iter().all(|&(l, r)| self.has_edge(l, r))
    }

    /// Whether `m` covers every vertex of positive degree and nothing else.
    pub fn is_perfect_on_nonisolated(&self, m: &Matching) -> bool {
        if !self.contains_matching(m) {
            return false;
        }
        let cov = m.covered(self.nl());
        (0..self.n()).all(|v| cov.contains(&v) == (self.degree(v) > 0))
    }

    pub fn embedding(&self) -> Option<&Vec<Vec<usize>>> {
        self.embedding.as_ref()
    }

    /// Attaches a rotation of neighbours (unified ids, clockwise) per vertex.
    /// The rotation must list each neighbour exactly once and the resulting
    /// face count must satisfy Euler's formula on every component.
    pub fn with_embedding(mut self, rot: Vec<Vec<usize>>) -> Result<Self> {
        if rot.len() != self.n() {
            return Err(Error::Input("embedding must list every vertex".into()));
        }
        for (v, order) in rot.iter().enumerate() {
            let mut a = order.clone();
            a.sort_unstable();
            let mut b = self.neighbors(v);
            b.sort_unstable();
            if a != b {
                return Err(Error::Input(format!(
                    "embedding at {} is not a permutation of its neighbours",
                    self.name(v)
                )));
            }
        }
        self.embedding = Some(rot);
        let faces = self.faces().expect("embedding just set").len();
        let comps = self.components();
        let nontrivial = comps.iter().filter(|c| c.len() > 1).count();
        let isolated = comps.len() - nontrivial;
        let v = (self.n() - isolated) as i64;
        let e = self.m() as i64;
        if v - e + faces as i64 != 2 * nontrivial as i64 {
            return Err(Error::Input("embedding is not planar".into()));
        }
        Ok(self)
    }

    /// Faces of the attached embedding as cyclic lists of unified vertices.
    pub fn faces(&self) -> Option<Vec<Vec<usize>>> {
        let rot = self.embedding.as_ref()?;
        let pos: Vec<std::collections::HashMap<usize, usize>> = rot
            .iter()
            .map(|o| o.iter().enumerate().map(|(i, &w)| (w, i)).collect())
            .collect();
        let mut used = HashSet::new();
        let mut faces = Vec::new();
        for u in 0..self.n() {
            for &v in &rot[u] {
                if used.contains(&(u, v)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (u, v);
                while used.insert((a, b)) {
                    face.push(a);
                    let i = pos[b][&a];
                    let c = rot[b][(i + 1) % rot[b].len()];
                    a = b;
                    b = c;
                }
                faces.push(face);
            }
        }
        Some(faces)
    }
}
