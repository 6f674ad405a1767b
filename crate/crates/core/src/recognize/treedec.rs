use crate::graph::BipartiteGraph;
use std::collections::BTreeSet;

/// Node type of a nice tree decomposition with edge nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// No children, empty bag.
    Leaf,
    /// Adds the vertex to the child's bag.
    Introduce(usize),
    /// Removes the vertex from the child's bag.
    Forget(usize),
    /// Two children with the same bag.
    Join,
    /// Adds the edge (by id), whose endpoints are in the bag.
    Edge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdNode {
    /// Sorted unified vertices.
    pub bag: Vec<usize>,
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// Rooted nice tree decomposition whose root bag is empty and in which every
/// edge is introduced by exactly one edge node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub nodes: Vec<TdNode>,
    pub root: usize,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// Node indices with every child before its parent.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                out.push(v);
                continue;
            }
            stack.push((v, true));
            for &c in self.nodes[v].children.iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    /// Violated invariants, empty when the decomposition is good for `g`.
    pub fn audit(&self, g: &BipartiteGraph) -> Vec<String> {
        let mut out = Vec::new();
        if !self.nodes[self.root].bag.is_empty() {
            out.push("root bag is not empty".into());
        }
        let mut parent = vec![usize::MAX; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = i;
            }
            let child_bag = |k: usize| -> &Vec<usize> { &self.nodes[node.children[k]].bag };
            let ok = match node.kind {
                NodeKind::Leaf => node.children.is_empty() && node.bag.is_empty(),
                NodeKind::Introduce(v) => {
                    node.children.len() == 1 && {
                        let mut b = child_bag(0).clone();
                        b.push(v);
                        b.sort_unstable();
                        !child_bag(0).contains(&v) && b == node.bag
                    }
                }
                NodeKind::Forget(v) => {
                    node.children.len() == 1 && {
                        let b: Vec<usize> = child_bag(0).iter().copied().filter(|&x| x != v).collect();
                        child_bag(0).contains(&v) && b == node.bag
                    }
                }
                NodeKind::Join => {
                    node.children.len() == 2 && *child_bag(0) == node.bag && *child_bag(1) == node.bag
                }
                NodeKind::Edge(e) => {
                    let (a, b) = g.endpoints(e);
                    node.children.len() == 1
                        && *child_bag(0) == node.bag
                        && node.bag.contains(&a)
                        && node.bag.contains(&b)
                }
            };
            if !ok {
                out.push(format!("node {i} breaks the rules of its kind"));
            }
        }
        let mut edge_count = vec![0; g.m()];
        for node in &self.nodes {
            if let NodeKind::Edge(e) = node.kind {
                edge_count[e] += 1;
            }
        }
        for (e, &c) in edge_count.iter().enumerate() {
            if c != 1 {
                out.push(format!("edge {e} has {c} edge nodes"));
            }
        }
        for v in 0..g.n() {
            let tops = (0..self.nodes.len())
                .filter(|&i| {
                    self.nodes[i].bag.contains(&v)
                        && (parent[i] == usize::MAX || !self.nodes[parent[i]].bag.contains(&v))
                })
                .count();
            if tops > 1 {
                out.push(format!("bags containing vertex {v} are not connected"));
            }
        }
        out
    }
}

/// Min-fill elimination order (ties by degree, then index), then conversion
/// to a nice decomposition with edge nodes and an empty root.
pub fn tree_decompose(g: &BipartiteGraph) -> TreeDecomposition {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).into_iter().collect()).collect();
    let mut alive = vec![true; n];
    let mut pos = vec![0; n];
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); n];
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| {
                let nb: Vec<usize> = adj[v].iter().copied().collect();
                let mut fill = 0;
                for i in 0..nb.len() {
                    for j in i + 1..nb.len() {
                        if !adj[nb[i]].contains(&nb[j]) {
                            fill += 1;
                        }
                    }
                }
                (fill, nb.len(), v)
            })
            .unwrap();
        alive[v] = false;
        pos[v] = step;
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag = nb.clone();
        bag.push(v);
        bag.sort_unstable();
        bags[v] = bag;
        for &a in &nb {
            adj[a].remove(&v);
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    // parent of v: its neighbour at elimination that is eliminated first
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut roots = Vec::new();
    for v in 0..n {
        match bags[v].iter().copied().filter(|&w| w != v).min_by_key(|&w| pos[w]) {
            Some(p) => kids[p].push(v),
            None => roots.push(v),
        }
    }
    let mut b = Builder {
        g,
        nodes: Vec::new(),
        edge_done: vec![false; g.m()],
    };
    let mut tops = Vec::new();
    for r in roots {
        let top = b.build(r, &bags, &kids);
        let top = b.morph(top, &[]);
        tops.push(top);
    }
    let root = match tops.len() {
        0 => b.push(Vec::new(), NodeKind::Leaf, vec![]),
        _ => {
            let mut acc = tops[0];
            for &t in &tops[1..] {
                acc = b.push(Vec::new(), NodeKind::Join, vec![acc, t]);
            }
            acc
        }
    };
    TreeDecomposition { nodes: b.nodes, root }
}

struct Builder<'a> {
    g: &'a BipartiteGraph,
    nodes: Vec<TdNode>,
    edge_done: Vec<bool>,
}

impl Builder<'_> {
    fn push(&mut self, bag: Vec<usize>, kind: NodeKind, children: Vec<usize>) -> usize {
        self.nodes.push(TdNode { bag, kind, children });
        self.nodes.len() - 1
    }

    /// Nice subtree for elimination node `v`, topped by a node with bag `bags[v]`.
    fn build(&mut self, v: usize, bags: &[Vec<usize>], kids: &[Vec<usize>]) -> usize {
        let target = &bags[v];
        let mut subs = Vec::new();
        for &c in &kids[v] {
            let t = self.build(c, bags, kids);
            subs.push(self.morph(t, target));
        }
        if subs.is_empty() {
            let leaf = self.push(Vec::new(), NodeKind::Leaf, vec![]);
            subs.push(self.morph(leaf, target));
        }
        let mut acc = subs[0];
        for &s in &subs[1..] {
            acc = self.push(target.clone(), NodeKind::Join, vec![acc, s]);
        }
        acc
    }

    /// Forgets and introduces vertices on top of `node` until its bag is `target`.
    fn morph(&mut self, mut node: usize, target: &[usize]) -> usize {
        let cur = self.nodes[node].bag.clone();
        for &x in cur.iter().filter(|x| !target.contains(x)) {
            // edges to x not yet placed go right below its forget node
            let bag = self.nodes[node].bag.clone();
            for &e in self.g.incident(x) {
                let y = self.g.other(e, x);
                if !self.edge_done[e] && bag.contains(&y) {
                    self.edge_done[e] = true;
                    node = self.push(bag.clone(), NodeKind::Edge(e), vec![node]);
                }
            }
            let nb: Vec<usize> = bag.iter().copied().filter(|&w| w != x).collect();
            node = self.push(nb, NodeKind::Forget(x), vec![node]);
        }
        for &x in target.iter().filter(|x| !cur.contains(x)) {
            let mut nb = self.nodes[node].bag.clone();
            nb.push(x);
            nb.sort_unstable();
            node = self.push(nb, NodeKind::Introduce(x), vec![node]);
        }
        node
    }
}
