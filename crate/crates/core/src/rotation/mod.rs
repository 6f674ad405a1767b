//! Rotation systems: top and bottom matchings plus a partially ordered set
//! of alternating cycles whose lower sets describe all stable matchings.

mod build;
mod poset;

pub use build::chains_of;
pub use poset::{
    rotation_interaction_graphs, rotation_poset, InteractionGraphs, RotationClass,
};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use crate::instance::Instance;
use crate::order::StrictOrder;
use std::collections::HashMap;
use std::fmt;

/// An alternating cycle `s0 r0 s1 r1 ...` with upper edges `(s_i, r_i)` and
/// lower edges `(s_{i+1}, r_i)`, indices taken cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation {
    students: Vec<usize>,
    residencies: Vec<usize>,
}

impl Rotation {
    /// Builds a rotation from its student and residency sequences, rotated so
    /// that the smallest student comes first.
    pub fn new(students: Vec<usize>, residencies: Vec<usize>) -> Result<Self> {
        let k = students.len();
        if k < 2 || residencies.len() != k {
            return Err(Error::Input("a rotation needs at least two students and as many residencies".into()));
        }
        let mut a = students.clone();
        a.sort_unstable();
        a.dedup();
        let mut b = residencies.clone();
        b.sort_unstable();
        b.dedup();
        if a.len() != k || b.len() != k {
            return Err(Error::Input("a rotation must be a simple cycle".into()));
        }
        let start = (0..k).min_by_key(|&i| students[i]).unwrap();
        let students = (0..k).map(|i| students[(start + i) % k]).collect();
        let residencies = (0..k).map(|i| residencies[(start + i) % k]).collect();
        Ok(Rotation {
            students,
            residencies,
        })
    }

    /// Builds a rotation from a closed walk of `(left, right)` edges in cyclic
    /// order whose first edge is upper.
    pub fn from_cycle(edges: &[(usize, usize)]) -> Result<Self> {
        let k = edges.len();
        if k < 4 || k % 2 == 1 {
            return Err(Error::Input("a rotation cycle needs an even number of at least four edges".into()));
        }
        let seq: Vec<(usize, usize)> = if edges[0].1 == edges[1].1 {
            edges.to_vec()
        } else {
            std::iter::once(edges[0])
                .chain(edges[1..].iter().rev().copied())
                .collect()
        };
        let mut students = Vec::with_capacity(k / 2);
        let mut residencies = Vec::with_capacity(k / 2);
        for i in 0..k / 2 {
            let up = seq[2 * i];
            let down = seq[2 * i + 1];
            let next = seq[(2 * i + 2) % k];
            if up.1 != down.1 || down.0 != next.0 {
                return Err(Error::Input("rotation edges do not form a closed walk".into()));
            }
            students.push(up.0);
            residencies.push(up.1);
        }
        Self::new(students, residencies)
    }

    /// Builds a rotation from a cyclic vertex list `s0 r0 s1 r1 ...` whose first
    /// edge `(s0, r0)` is upper. Vertices are side-local indices.
    pub fn from_vertex_cycle(verts: &[usize]) -> Result<Self> {
        if verts.len() % 2 == 1 {
            return Err(Error::Input("rotation vertex list must have even length".into()));
        }
        let students = verts.iter().step_by(2).copied().collect();
        let residencies = verts.iter().skip(1).step_by(2).copied().collect();
        Self::new(students, residencies)
    }

    pub fn students(&self) -> &[usize] {
        &self.students
    }

    pub fn residencies(&self) -> &[usize] {
        &self.residencies
    }

    /// Number of upper (equivalently lower) edges.
    pub fn half_len(&self) -> usize {
        self.students.len()
    }

    pub fn upper_edges(&self) -> Vec<(usize, usize)> {
        (0..self.half_len())
            .map(|i| (self.students[i], self.residencies[i]))
            .collect()
    }

    pub fn lower_edges(&self) -> Vec<(usize, usize)> {
        let k = self.half_len();
        (0..k)
            .map(|i| (self.students[(i + 1) % k], self.residencies[i]))
            .collect()
    }

    /// All edges in cyclic order, starting with an upper edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.half_len();
        (0..k)
            .flat_map(|i| {
                [
                    (self.students[i], self.residencies[i]),
                    (self.students[(i + 1) % k], self.residencies[i]),
                ]
            })
            .collect()
    }

    /// The same cycle with upper and lower edges exchanged.
    pub fn flipped(&self) -> Rotation {
        let k = self.half_len();
        let students = (0..k).map(|i| self.students[(k - i) % k]).collect();
        let residencies = (0..k)
            .map(|i| self.residencies[(2 * k - i - 1) % k])
            .collect();
        Rotation::new(students, residencies).expect("flip preserves simplicity")
    }

    /// Vertex list `s0 r0 s1 r1 ...` as side-local indices.
    pub fn vertex_cycle(&self) -> Vec<usize> {
        self.students
            .iter()
            .zip(&self.residencies)
            .flat_map(|(&s, &r)| [s, r])
            .collect()
    }
}

/// A member of the extended rotation set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Member {
    Top,
    Bottom,
    Rot(usize),
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::Top => write!(f, "TOP"),
            Member::Bottom => write!(f, "BOTTOM"),
            Member::Rot(i) => write!(f, "rotation {i}"),
        }
    }
}

/// Top and bottom matchings plus a partially ordered set of rotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    graph: BipartiteGraph,
    top: Matching,
    bottom: Matching,
    rotations: Vec<Rotation>,
    order: StrictOrder,
}

impl RotationSystem {
    /// Assembles a system; the order is the transitive closure of `rel`.
    pub fn new(
        graph: BipartiteGraph,
        top: Matching,
        bottom: Matching,
        rotations: Vec<Rotation>,
        rel: &[(usize, usize)],
    ) -> Result<Self> {
        let order = StrictOrder::from_relations(rotations.len(), rel)?;
        Ok(Self::from_parts(graph, top, bottom, rotations, order))
    }

    /// Assembles a system from an already built order, without checks.
    pub fn from_parts(
        graph: BipartiteGraph,
        top: Matching,
        bottom: Matching,
        rotations: Vec<Rotation>,
        order: StrictOrder,
    ) -> Self {
        RotationSystem {
            graph,
            top,
            bottom,
            rotations,
            order,
        }
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn top(&self) -> &Matching {
        &self.top
    }

    pub fn bottom(&self) -> &Matching {
        &self.bottom
    }

    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn order(&self) -> &StrictOrder {
        &self.order
    }

    /// For every pair used by a member, the members that contain it, each with
    /// a flag that is true when the pair is upper in that member.
    pub fn memberships(&self) -> HashMap<(usize, usize), Vec<(Member, bool)>> {
        let mut map: HashMap<(usize, usize), Vec<(Member, bool)>> = HashMap::new();
        for &e in self.top.pairs() {
            map.entry(e).or_default().push((Member::Top, false));
        }
        for &e in self.bottom.pairs() {
            map.entry(e).or_default().push((Member::Bottom, true));
        }
        for (i, rot) in self.rotations.iter().enumerate() {
            for e in rot.upper_edges() {
                map.entry(e).or_default().push((Member::Rot(i), true));
            }
            for e in rot.lower_edges() {
                map.entry(e).or_default().push((Member::Rot(i), false));
            }
        }
        map
    }

    /// Whether `a` lies strictly below `b` in the extended order, where the
    /// bottom matching is below and the top matching above every rotation.
    pub fn member_lt(&self, a: Member, b: Member) -> bool {
        match (a, b) {
            (Member::Bottom, Member::Bottom) | (Member::Top, _) => false,
            (Member::Bottom, _) | (_, Member::Top) => true,
            (Member::Rot(_), Member::Bottom) => false,
            (Member::Rot(i), Member::Rot(j)) => self.order.lt(i, j),
        }
    }
}

/// One failed clause of the rotation-system definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TopNotMatching(String),
    BottomNotMatching(String),
    RotationShape { rotation: usize, reason: String },
    EdgeOutsideGraph { edge: (usize, usize), member: Member },
    Coverage { edge: (usize, usize), count: usize },
    Alternation { rotation: usize, edge: (usize, usize), other: Member, declared_upper: bool },
    Order(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TopNotMatching(s) => write!(f, "top matching: {s}"),
            Violation::BottomNotMatching(s) => write!(f, "bottom matching: {s}"),
            Violation::RotationShape { rotation, reason } => {
                write!(f, "rotation {rotation}: {reason}")
            }
            Violation::EdgeOutsideGraph { edge, member } => {
                write!(f, "{member} uses pair {edge:?} that is not a graph edge")
            }
            Violation::Coverage { edge, count } => {
                write!(f, "edge {edge:?} lies in {count} members instead of 0 or 2 (every graph edge must be used)")
            }
            Violation::Alternation {
                rotation,
                edge,
                other,
                declared_upper,
            } => {
                let kind = if *declared_upper { "upper" } else { "lower" };
                write!(f, "rotation {rotation}: {kind} edge {edge:?} shared with {other} violates alternation")
            }
            Violation::Order(s) => write!(f, "order: {s}"),
        }
    }
}

/// Result of validating a rotation system.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn matching_problem(g: &BipartiteGraph, m: &Matching) -> Option<String> {
    if !g.contains_matching(m) {
        return Some("uses a pair that is not a graph edge".into());
    }
    if !g.is_perfect_on_nonisolated(m) {
        return Some("does not cover exactly the non-isolated vertices".into());
    }
    None
}

/// Checks every clause of the definition and lists each violation.
pub fn validate_rotation_system(rs: &RotationSystem) -> ValidationReport {
    let g = &rs.graph;
    let mut v = Vec::new();
    if let Some(p) = matching_problem(g, &rs.top) {
        v.push(Violation::TopNotMatching(p));
    }
    if let Some(p) = matching_problem(g, &rs.bottom) {
        v.push(Violation::BottomNotMatching(p));
    }
    for (i, rot) in rs.rotations.iter().enumerate() {
        if rot.half_len() < 2 {
            v.push(Violation::RotationShape {
                rotation: i,
                reason: "shorter than four edges".into(),
            });
        }
    }
    if rs.order.len() != rs.rotations.len() {
        v.push(Violation::Order("order size differs from rotation count".into()));
        return ValidationReport { violations: v };
    }
    for s in rs.order.audit() {
        v.push(Violation::Order(s));
    }
    let members = rs.memberships();
    for (&e, list) in &members {
        if !g.has_edge(e.0, e.1) {
            for &(m, _) in list {
                v.push(Violation::EdgeOutsideGraph { edge: e, member: m });
            }
        }
    }
    for &e in g.edges() {
        let count = members.get(&e).map_or(0, Vec::len);
        if count != 2 {
            v.push(Violation::Coverage { edge: e, count });
        }
    }
    for (&e, list) in &members {
        if list.len() != 2 {
            continue;
        }
        for (idx, &(m, up)) in list.iter().enumerate() {
            let Member::Rot(i) = m else { continue };
            let other = list[1 - idx].0;
            let ok = if up {
                rs.member_lt(m, other)
            } else {
                rs.member_lt(other, m)
            };
            if !ok {
                v.push(Violation::Alternation {
                    rotation: i,
                    edge: e,
                    other,
                    declared_upper: up,
                });
            }
        }
    }
    v.sort_by_key(|x| x.to_string());
    ValidationReport { violations: v }
}

/// One matching per lower set of the rotation order: the pairs that are upper
/// in some member of the lower set or the bottom matching, and lower in none.
pub fn matchings_of(rs: &RotationSystem, cap: usize) -> Result<Vec<Matching>> {
    let sets = rs.order.lower_sets(cap)?;
    let uppers: Vec<Vec<(usize, usize)>> = rs.rotations.iter().map(Rotation::upper_edges).collect();
    let lowers: Vec<Vec<(usize, usize)>> = rs.rotations.iter().map(Rotation::lower_edges).collect();
    let mut out = Vec::with_capacity(sets.len());
    for set in sets {
        let mut pairs: std::collections::BTreeSet<(usize, usize)> =
            rs.bottom.pairs().iter().copied().collect();
        for i in set.iter() {
            pairs.extend(uppers[i].iter().copied());
        }
        for i in set.iter() {
            for e in &lowers[i] {
                pairs.remove(e);
            }
        }
        let m = Matching::new(pairs.into_iter().collect())
            .map_err(|e| Error::Contract(format!("lower set does not give a matching: {e}")))?;
        out.push(m);
    }
    Ok(out)
}

/// A preference instance whose stable matchings are exactly `matchings_of(rs)`.
///
/// At each vertex the incident edges are chained from its bottom edge to its
/// top edge; residencies rank later edges higher, students earlier ones.
/// A cover `a < b` not forced by shared edges gets an extra acceptable pair
/// `(s, r)` with `s` on `b` and `r` on `a`, ranked by `s` between its two
/// partners in `b` and by `r` between its two partners in `a`. That pair
/// blocks exactly the matchings that apply `b` without `a`, and fails with
/// `Unsupported` when every such pair is already an edge. With `complete`
/// set, every missing pair is appended below the listed partners, which
/// requires one side to have no isolated vertices.
pub fn instance_from_rotation_system(rs: &RotationSystem, complete: bool) -> Result<Instance> {
    let report = validate_rotation_system(rs);
    if !report.is_valid() {
        return Err(Error::Contract(format!(
            "rotation system is invalid: {}",
            report.violations[0]
        )));
    }
    let g = &rs.graph;
    let chains = chains_of(rs);
    let nl = g.nl();
    let mut spref: Vec<Vec<usize>> = (0..nl)
        .map(|s| chains[s].iter().map(|&k| g.edge(k).1).collect())
        .collect();
    let mut rpref: Vec<Vec<usize>> = (0..g.nr())
        .map(|r| chains[nl + r].iter().rev().map(|&k| g.edge(k).0).collect())
        .collect();
    let mut forced = StrictOrder::antichain(rs.rotations.len());
    let mut upper_in: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, rot) in rs.rotations.iter().enumerate() {
        for e in rot.upper_edges() {
            upper_in.insert(e, i);
        }
    }
    for (j, rot) in rs.rotations.iter().enumerate() {
        for e in rot.lower_edges() {
            if let Some(&i) = upper_in.get(&e) {
                forced.add(i, j);
            }
        }
    }
    let mut added = std::collections::HashSet::new();
    for (a, b) in rs.order.hasse() {
        if forced.lt(a, b) {
            continue;
        }
        let (ra, rb) = (&rs.rotations[a], &rs.rotations[b]);
        let (ka, kb) = (ra.half_len(), rb.half_len());
        let pick = (0..kb)
            .flat_map(|i| (0..ka).map(move |j| (i, j)))
            .find(|&(i, j)| {
                let (s, r) = (rb.students()[i], ra.residencies()[j]);
                !g.has_edge(s, r) && !added.contains(&(s, r))
            });
        let Some((i, j)) = pick else {
            return Err(Error::Unsupported(format!(
                "no free pair can force rotation {a} below rotation {b}"
            )));
        };
        let (s, r) = (rb.students()[i], ra.residencies()[j]);
        added.insert((s, r));
        let s_low = rb.residencies()[(i + kb - 1) % kb];
        let at = spref[s].iter().position(|&x| x == s_low).unwrap();
        spref[s].insert(at + 1, r);
        let r_up = ra.students()[j];
        let at = rpref[r].iter().position(|&x| x == r_up).unwrap();
        rpref[r].insert(at + 1, s);
        forced.add(a, b);
    }
    if complete {
        let left_iso = (0..nl).any(|v| g.degree(v) == 0);
        let right_iso = (nl..g.n()).any(|v| g.degree(v) == 0);
        if left_iso && right_iso {
            return Err(Error::Unsupported(
                "completion needs one side without isolated vertices".into(),
            ));
        }
        for (s, list) in spref.iter_mut().enumerate() {
            list.extend((0..g.nr()).filter(|&r| !g.has_edge(s, r) && !added.contains(&(s, r))));
        }
        for (r, list) in rpref.iter_mut().enumerate() {
            list.extend((0..nl).filter(|&s| !g.has_edge(s, r) && !added.contains(&(s, r))));
        }
    }
    Instance::new(g.left_ids().to_vec(), g.right_ids().to_vec(), spref, rpref)
}
