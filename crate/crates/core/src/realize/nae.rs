//! Reduction from not-all-equal 3-SAT to subcubic bipartite graphs.
//!
//! Term gadgets are even cycles alternating truth and terminal edges, clause
//! gadgets are cubes with three edges of a maximal three-edge matching
//! subdivided into five-edge paths, and connector gadgets join the endpoints
//! of two terminal edges by two paths of length two.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use crate::rotation::RotationSystem;
use rand::Rng;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NaeLiteral {
    pub var: usize,
    pub positive: bool,
}

impl NaeLiteral {
    pub fn negated(self) -> Self {
        NaeLiteral {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Value under `assignment`.
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

/// Clauses of three literals over variables `0..num_vars`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NaeFormula {
    pub num_vars: usize,
    pub clauses: Vec<[NaeLiteral; 3]>,
}

impl NaeFormula {
    /// Index of the first clause whose three literals agree.
    pub fn violated_clause(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|c| {
            let v = c[0].eval(assignment);
            c[1].eval(assignment) == v && c[2].eval(assignment) == v
        })
    }

    /// A random formula with a planted satisfying assignment, which is
    /// returned alongside.
    pub fn random_planted<R: Rng>(num_vars: usize, num_clauses: usize, rng: &mut R) -> (Self, Vec<bool>) {
        assert!(num_vars > 0, "at least one variable");
        let assignment: Vec<bool> = (0..num_vars).map(|_| rng.gen()).collect();
        let mut clauses = Vec::with_capacity(num_clauses);
        while clauses.len() < num_clauses {
            let c: [NaeLiteral; 3] = std::array::from_fn(|_| NaeLiteral {
                var: rng.gen_range(0..num_vars),
                positive: rng.gen(),
            });
            let v = c[0].eval(&assignment);
            if c[1].eval(&assignment) != v || c[2].eval(&assignment) != v {
                clauses.push(c);
            }
        }
        (NaeFormula { num_vars, clauses }, assignment)
    }
}

/// A term gadget: its literal, truth edges and terminal edges (edge ids).
/// Terminal edge 0 is the unconnected spare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermGadget {
    pub literal: NaeLiteral,
    pub vertices: Vec<usize>,
    pub truth_edges: Vec<usize>,
    pub terminal_edges: Vec<usize>,
}

/// A clause gadget: its vertices and the terminal edge of each subdivided path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseGadget {
    pub vertices: Vec<usize>,
    pub terminal_edges: [usize; 3],
}

/// A connector gadget joining two terminal edges through two new vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectorGadget {
    pub ends: (usize, usize),
    pub vertices: Vec<usize>,
}

/// Where each gadget sits in the reduced graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NaeMetadata {
    pub formula: NaeFormula,
    pub terms: Vec<TermGadget>,
    pub clauses: Vec<ClauseGadget>,
    pub connectors: Vec<ConnectorGadget>,
}

/// Outcome of [`witness_from_assignment`].
#[derive(Debug, Clone)]
pub enum NaeWitness {
    System(RotationSystem),
    /// The assignment makes all three literals of this clause equal.
    Violated { clause: usize },
}

struct Builder {
    left: Vec<String>,
    right: Vec<String>,
    /// (side is left, side-local index) per global vertex
    verts: Vec<(bool, usize)>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self, student: bool, name: String) -> usize {
        let side = if student { &mut self.left } else { &mut self.right };
        side.push(name);
        self.verts.push((student, side.len() - 1));
        self.verts.len() - 1
    }

    fn edge(&mut self, u: usize, v: usize) -> (usize, usize) {
        let (a, b) = if self.verts[u].0 { (u, v) } else { (v, u) };
        debug_assert!(self.verts[a].0 && !self.verts[b].0);
        self.edges.push((a, b));
        (a, b)
    }
}

/// Builds the reduction graph of `f`.
pub fn nae3sat_graph(f: &NaeFormula) -> Result<(BipartiteGraph, NaeMetadata)> {
    for c in &f.clauses {
        if let Some(l) = c.iter().find(|l| l.var >= f.num_vars) {
            return Err(Error::Input(format!("variable {} out of range", l.var)));
        }
    }
    let mut b = Builder {
        left: Vec::new(),
        right: Vec::new(),
        verts: Vec::new(),
        edges: Vec::new(),
    };
    let lit_name = |l: NaeLiteral| format!("{}x{}", if l.positive { "" } else { "n" }, l.var + 1);
    let mut occurrences: BTreeMap<NaeLiteral, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, c) in f.clauses.iter().enumerate() {
        for (p, &l) in c.iter().enumerate() {
            occurrences.entry(l).or_default().push((ci, p));
        }
    }
    // term gadgets, terminals: spare, clause occurrences, then negation
    struct RawTerm {
        literal: NaeLiteral,
        vertices: Vec<usize>,
        truth: Vec<(usize, usize)>,
        terminals: Vec<(usize, usize)>,
    }
    let mut terms = Vec::new();
    let mut term_of = BTreeMap::new();
    for (&lit, occ) in &occurrences {
        let k = 1 + occ.len() + usize::from(occurrences.contains_key(&lit.negated()));
        let name = lit_name(lit);
        let vs: Vec<usize> = (0..2 * k)
            .map(|i| b.vertex(i % 2 == 0, format!("t{name}_{i}")))
            .collect();
        let mut truth = Vec::new();
        let mut terminals = Vec::new();
        for i in 0..2 * k {
            let e = b.edge(vs[i], vs[(i + 1) % (2 * k)]);
            if i % 2 == 0 {
                truth.push(e);
            } else {
                terminals.push(e);
            }
        }
        term_of.insert(lit, terms.len());
        terms.push(RawTerm {
            literal: lit,
            vertices: vs,
            truth,
            terminals,
        });
    }
    // clause gadgets: cube on 3-bit labels without the matching edges
    // 001-011, 010-110, 100-101, which become five-edge paths
    let mut clauses = Vec::new();
    let subdivided = [(0b001, 0b011), (0b010, 0b110), (0b100, 0b101)];
    for ci in 0..f.clauses.len() {
        let corner: Vec<usize> = (0..8usize)
            .map(|x| b.vertex(x.count_ones() % 2 == 0, format!("c{}_{x:03b}", ci + 1)))
            .collect();
        let mut vertices = corner.clone();
        for x in 0..8usize {
            for bit in [1, 2, 4] {
                let y = x ^ bit;
                if x < y && !subdivided.contains(&(x, y)) {
                    b.edge(corner[x], corner[y]);
                }
            }
        }
        let mut terminals = [(0, 0); 3];
        for (p, &(x, y)) in subdivided.iter().enumerate() {
            let start_student = x.count_ones() % 2 == 0;
            let mut prev = corner[x];
            let mut path = Vec::new();
            for s in 1..5 {
                let v = b.vertex((s % 2 == 0) == start_student, format!("c{}_p{p}_{s}", ci + 1));
                vertices.push(v);
                path.push(b.edge(prev, v));
                prev = v;
            }
            path.push(b.edge(prev, corner[y]));
            terminals[p] = path[2];
        }
        clauses.push((vertices, terminals));
    }
    // connectors
    let mut connectors = Vec::new();
    let mut connect = |b: &mut Builder, e1: (usize, usize), e2: (usize, usize), tag: String| {
        let mid_r = b.vertex(false, format!("k{tag}_r"));
        let mid_s = b.vertex(true, format!("k{tag}_s"));
        b.edge(e1.0, mid_r);
        b.edge(e2.0, mid_r);
        b.edge(mid_s, e1.1);
        b.edge(mid_s, e2.1);
        connectors.push((e1, e2, vec![mid_r, mid_s]));
    };
    for (&lit, occ) in &occurrences {
        let t = term_of[&lit];
        for (j, &(ci, p)) in occ.iter().enumerate() {
            let e1 = terms[t].terminals[1 + j];
            let e2 = clauses[ci].1[p];
            connect(&mut b, e1, e2, format!("{}_{}_{}", lit_name(lit), ci + 1, p + 1));
        }
    }
    for (&lit, occ) in &occurrences {
        if lit.positive {
            if let Some(&u) = term_of.get(&lit.negated()) {
                let t = term_of[&lit];
                let e1 = terms[t].terminals[1 + occ.len()];
                let e2 = *terms[u].terminals.last().unwrap();
                connect(&mut b, e1, e2, format!("x{}", lit.var + 1));
            }
        }
    }
    let nl = b.left.len();
    let local = |v: usize| b.verts[v].1;
    let edges: Vec<(usize, usize)> = b.edges.iter().map(|&(s, r)| (local(s), local(r))).collect();
    let g = BipartiteGraph::new(b.left.clone(), b.right.clone(), edges)?;
    let unified = |v: usize| if b.verts[v].0 { local(v) } else { nl + local(v) };
    let id = |(s, r): (usize, usize)| g.edge_id(local(s), local(r)).expect("edge was added");
    let meta = NaeMetadata {
        formula: f.clone(),
        terms: terms
            .iter()
            .map(|t| TermGadget {
                literal: t.literal,
                vertices: t.vertices.iter().map(|&v| unified(v)).collect(),
                truth_edges: t.truth.iter().map(|&e| id(e)).collect(),
                terminal_edges: t.terminals.iter().map(|&e| id(e)).collect(),
            })
            .collect(),
        clauses: clauses
            .iter()
            .map(|(vs, ts)| ClauseGadget {
                vertices: vs.iter().map(|&v| unified(v)).collect(),
                terminal_edges: ts.map(id),
            })
            .collect(),
        connectors: connectors
            .iter()
            .map(|(e1, e2, vs)| ConnectorGadget {
                ends: (id(*e1), id(*e2)),
                vertices: vs.iter().map(|&v| unified(v)).collect(),
            })
            .collect(),
    };
    Ok((g, meta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    Bottom,
    Middle,
    Top,
}

const LABELS: [Label; 3] = [Label::Bottom, Label::Middle, Label::Top];

/// Builds a rotation system for the reduction graph from a satisfying
/// assignment: truth edges are top for true terms and bottom for false ones,
/// connected terminal edges are middle, and the remaining labels are found
/// by search so that degree-two vertices see top and bottom and degree-three
/// vertices see all three labels. Each vertex then meets its edges in the
/// order bottom, middle, top, which fixes the rotations; the order is the
/// one generated by shared edges.
pub fn witness_from_assignment(g: &BipartiteGraph, meta: &NaeMetadata, assignment: &[bool]) -> Result<NaeWitness> {
    let f = &meta.formula;
    if assignment.len() < f.num_vars {
        return Err(Error::Input(format!(
            "assignment covers {} of {} variables",
            assignment.len(),
            f.num_vars
        )));
    }
    if let Some(clause) = f.violated_clause(assignment) {
        return Ok(NaeWitness::Violated { clause });
    }
    let mut labels: Vec<Option<Label>> = vec![None; g.m()];
    for t in &meta.terms {
        let truth = if t.literal.eval(assignment) { Label::Top } else { Label::Bottom };
        let spare = if truth == Label::Top { Label::Bottom } else { Label::Top };
        for &e in &t.truth_edges {
            labels[e] = Some(truth);
        }
        labels[t.terminal_edges[0]] = Some(spare);
        for &e in &t.terminal_edges[1..] {
            labels[e] = Some(Label::Middle);
        }
    }
    for c in &meta.clauses {
        for &e in &c.terminal_edges {
            labels[e] = Some(Label::Middle);
        }
    }
    let mut search = LabelSearch { g, labels, attempts: 0 };
    match search.run()? {
        Some(rs) => Ok(NaeWitness::System(rs)),
        None => Err(Error::Contract("no consistent labeling for a satisfying assignment".into())),
    }
}

struct LabelSearch<'a> {
    g: &'a BipartiteGraph,
    labels: Vec<Option<Label>>,
    attempts: usize,
}

const MAX_ATTEMPTS: usize = 10_000;

impl LabelSearch<'_> {
    /// Labels allowed at `v` that no incident edge uses yet, or `None` when
    /// the labels at `v` already conflict.
    fn missing(&self, v: usize) -> Option<Vec<Label>> {
        let allowed: &[Label] = match self.g.degree(v) {
            0 => &[],
            2 => &[Label::Bottom, Label::Top],
            3 => &LABELS,
            _ => return None,
        };
        let mut free: Vec<Label> = allowed.to_vec();
        for &e in self.g.incident(v) {
            if let Some(l) = self.labels[e] {
                let i = free.iter().position(|&x| x == l)?;
                free.remove(i);
            }
        }
        Some(free)
    }

    /// Forces the last open edge at every vertex; false on a conflict.
    fn propagate(&mut self, trail: &mut Vec<usize>) -> bool {
        let mut queue: Vec<usize> = (0..self.g.n()).collect();
        while let Some(v) = queue.pop() {
            let Some(free) = self.missing(v) else {
                return false;
            };
            let open: Vec<usize> = self.g.incident(v).iter().copied().filter(|&e| self.labels[e].is_none()).collect();
            if open.len() == 1 {
                if free.len() != 1 {
                    return false;
                }
                let e = open[0];
                self.labels[e] = Some(free[0]);
                trail.push(e);
                let (a, b) = self.g.endpoints(e);
                queue.push(a);
                queue.push(b);
            }
        }
        true
    }

    fn run(&mut self) -> Result<Option<RotationSystem>> {
        let mut trail = Vec::new();
        if !self.propagate(&mut trail) {
            return Ok(None);
        }
        self.assign()
    }

    fn assign(&mut self) -> Result<Option<RotationSystem>> {
        // branch at the open edge whose endpoints carry the most labels
        let score = |e: usize| {
            let (a, b) = self.g.endpoints(e);
            [a, b]
                .iter()
                .map(|&v| self.g.incident(v).iter().filter(|&&f| self.labels[f].is_some()).count())
                .sum::<usize>()
        };
        let Some(e) = (0..self.g.m()).filter(|&e| self.labels[e].is_none()).max_by_key(|&e| (score(e), usize::MAX - e)) else {
            return self.build();
        };
        for l in LABELS {
            let mut trail = vec![e];
            self.labels[e] = Some(l);
            if self.propagate(&mut trail) {
                if let Some(rs) = self.assign()? {
                    return Ok(Some(rs));
                }
            }
            for &x in &trail {
                self.labels[x] = None;
            }
        }
        Ok(None)
    }

    fn build(&mut self) -> Result<Option<RotationSystem>> {
        self.attempts += 1;
        if self.attempts > MAX_ATTEMPTS {
            return Err(Error::resource("NAE labelings", MAX_ATTEMPTS, self.attempts));
        }
        let g = self.g;
        let label = |e: usize| self.labels[e].expect("complete labeling");
        let chains: Vec<Vec<usize>> = (0..g.n())
            .map(|v| {
                let mut c = g.incident(v).to_vec();
                c.sort_by_key(|&e| label(e) as usize);
                c
            })
            .collect();
        let pick = |want: Label| {
            Matching::new((0..g.m()).filter(|&e| label(e) == want).map(|e| g.edge(e)).collect())
        };
        let (top, bottom) = match (pick(Label::Top), pick(Label::Bottom)) {
            (Ok(t), Ok(b)) => (t, b),
            _ => return Ok(None),
        };
        Ok(RotationSystem::from_chains(g.clone(), top, bottom, &chains).ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::validate_rotation_system;

    fn lit(var: usize, positive: bool) -> NaeLiteral {
        NaeLiteral { var, positive }
    }

    fn xyz() -> NaeFormula {
        NaeFormula {
            num_vars: 3,
            clauses: vec![[lit(0, true), lit(1, true), lit(2, true)]],
        }
    }

    #[test]
    fn single_clause_structure() {
        let (g, meta) = nae3sat_graph(&xyz()).unwrap();
        assert_eq!((meta.terms.len(), meta.clauses.len(), meta.connectors.len()), (3, 1, 3));
        assert!(g.max_degree() <= 3);
        // three 4-cycles, a 20-vertex clause gadget, two vertices per connector
        assert_eq!(g.n(), 3 * 4 + 20 + 6);
        assert_eq!(g.nl(), g.nr());
    }

    #[test]
    fn repeated_variable() {
        let f = NaeFormula {
            num_vars: 1,
            clauses: vec![[lit(0, true); 3]],
        };
        let (g, meta) = nae3sat_graph(&f).unwrap();
        assert_eq!(meta.terms.len(), 1);
        assert_eq!(meta.terms[0].terminal_edges.len(), 4);
        assert!(g.max_degree() <= 3);
    }

    #[test]
    fn witnesses() {
        let f = xyz();
        let (g, meta) = nae3sat_graph(&f).unwrap();
        match witness_from_assignment(&g, &meta, &[true, false, false]).unwrap() {
            NaeWitness::System(rs) => assert!(validate_rotation_system(&rs).violations.is_empty()),
            NaeWitness::Violated { .. } => panic!("assignment satisfies the clause"),
        }
        match witness_from_assignment(&g, &meta, &[true, true, true]).unwrap() {
            NaeWitness::Violated { clause } => assert_eq!(clause, 0),
            NaeWitness::System(_) => panic!("all-equal assignment"),
        }
        assert!(witness_from_assignment(&g, &meta, &[true]).is_err());
    }

    #[test]
    fn negations_and_empty() {
        let f = NaeFormula {
            num_vars: 3,
            clauses: vec![[lit(0, true), lit(1, false), lit(2, true)], [lit(0, false), lit(1, true), lit(2, true)]],
        };
        let (g, meta) = nae3sat_graph(&f).unwrap();
        assert!(g.max_degree() <= 3);
        assert_eq!(meta.connectors.len(), 6 + 2);
        for a in 0..8u32 {
            let asg: Vec<bool> = (0..3).map(|i| a >> i & 1 == 1).collect();
            let w = witness_from_assignment(&g, &meta, &asg).unwrap();
            match (f.violated_clause(&asg), w) {
                (None, NaeWitness::System(rs)) => assert!(validate_rotation_system(&rs).violations.is_empty()),
                (Some(c), NaeWitness::Violated { clause }) => assert_eq!(c, clause),
                _ => panic!("mismatch for {asg:?}"),
            }
        }
        let empty = NaeFormula::default();
        let (g, _) = nae3sat_graph(&empty).unwrap();
        assert_eq!(g.n(), 0);
    }
}
