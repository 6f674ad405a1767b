//! Preference instances, stability, Gale–Shapley and the lattice of stable
//! matchings.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use std::collections::{BTreeSet, HashSet};

/// Which side of the market proposes in Gale–Shapley.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Students,
    Residencies,
}

const UNLISTED: u32 = u32::MAX;

/// A two-sided matching market with strict partial preference lists.
///
/// Acceptability is made mutual on construction: a pair listed by only one
/// side is dropped from both lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    students: Vec<String>,
    residencies: Vec<String>,
    spref: Vec<Vec<usize>>,
    rpref: Vec<Vec<usize>>,
    srank: Vec<Vec<u32>>,
    rrank: Vec<Vec<u32>>,
}

/// Outcome of a stability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Pairs `(s, r)` that both strictly prefer each other to their outcome.
    pub blocking: Vec<(usize, usize)>,
    /// Matched pairs that are not mutually acceptable.
    pub irrational: Vec<(usize, usize)>,
}

fn rank_table(prefs: &[Vec<usize>], other: usize) -> Vec<Vec<u32>> {
    prefs
        .iter()
        .map(|list| {
            let mut row = vec![UNLISTED; other];
            for (i, &x) in list.iter().enumerate() {
                row[x] = i as u32;
            }
            row
        })
        .collect()
}

impl Instance {
    /// Builds and normalizes an instance from index-based preference lists.
    pub fn new(
        students: Vec<String>,
        residencies: Vec<String>,
        spref: Vec<Vec<usize>>,
        rpref: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let (ns, nr) = (students.len(), residencies.len());
        if spref.len() != ns || rpref.len() != nr {
            return Err(Error::Input("one preference list per element is required".into()));
        }
        let ids: HashSet<&String> = students.iter().chain(residencies.iter()).collect();
        if ids.len() != ns + nr {
            return Err(Error::Input("element ids must be distinct".into()));
        }
        for (lists, other, who) in [(&spref, nr, &students), (&rpref, ns, &residencies)] {
            for (i, list) in lists.iter().enumerate() {
                let mut seen = HashSet::new();
                for &x in list {
                    if x >= other {
                        return Err(Error::Input(format!("{} lists an unknown partner", who[i])));
                    }
                    if !seen.insert(x) {
                        return Err(Error::Input(format!("{} lists a partner twice", who[i])));
                    }
                }
            }
        }
        let sr = rank_table(&spref, nr);
        let rr = rank_table(&rpref, ns);
        let spref: Vec<Vec<usize>> = spref
            .iter()
            .enumerate()
            .map(|(s, l)| l.iter().copied().filter(|&r| rr[r][s] != UNLISTED).collect())
            .collect();
        let rpref: Vec<Vec<usize>> = rpref
            .iter()
            .enumerate()
            .map(|(r, l)| l.iter().copied().filter(|&s| sr[s][r] != UNLISTED).collect())
            .collect();
        let srank = rank_table(&spref, nr);
        let rrank = rank_table(&rpref, ns);
        Ok(Instance {
            students,
            residencies,
            spref,
            rpref,
            srank,
            rrank,
        })
    }

    /// Instance with elements named `s0..` and `r0..`.
    pub fn from_lists(spref: Vec<Vec<usize>>, rpref: Vec<Vec<usize>>) -> Result<Self> {
        let students = (0..spref.len()).map(|i| format!("s{i}")).collect();
        let residencies = (0..rpref.len()).map(|j| format!("r{j}")).collect();
        Self::new(students, residencies, spref, rpref)
    }

    pub fn n_students(&self) -> usize {
        self.students.len()
    }

    pub fn n_residencies(&self) -> usize {
        self.residencies.len()
    }

    pub fn student_ids(&self) -> &[String] {
        &self.students
    }

    pub fn residency_ids(&self) -> &[String] {
        &self.residencies
    }

    /// Preference list of student `s`, most preferred first.
    pub fn student_pref(&self, s: usize) -> &[usize] {
        &self.spref[s]
    }

    /// Preference list of residency `r`, most preferred first.
    pub fn residency_pref(&self, r: usize) -> &[usize] {
        &self.rpref[r]
    }

    /// Position of `r` on `s`'s list.
    pub fn student_rank(&self, s: usize, r: usize) -> Option<usize> {
        let k = self.srank[s][r];
        (k != UNLISTED).then_some(k as usize)
    }

    /// Position of `s` on `r`'s list.
    pub fn residency_rank(&self, r: usize, s: usize) -> Option<usize> {
        let k = self.rrank[r][s];
        (k != UNLISTED).then_some(k as usize)
    }

    fn srank_opt(&self, s: usize, r: Option<usize>) -> u32 {
        match r {
            Some(r) => self.srank[s][r],
            None => self.spref[s].len() as u32,
        }
    }

    fn rrank_opt(&self, r: usize, s: Option<usize>) -> u32 {
        match s {
            Some(s) => self.rrank[r][s],
            None => self.rpref[r].len() as u32,
        }
    }

    /// Whether `s` strictly prefers `a` to `b` (`None` is unmatched).
    pub fn student_prefers(&self, s: usize, a: Option<usize>, b: Option<usize>) -> bool {
        self.srank_opt(s, a) < self.srank_opt(s, b)
    }

    /// Whether `r` strictly prefers `a` to `b` (`None` is unmatched).
    pub fn residency_prefers(&self, r: usize, a: Option<usize>, b: Option<usize>) -> bool {
        self.rrank_opt(r, a) < self.rrank_opt(r, b)
    }

    /// The graph of mutually acceptable pairs.
    pub fn acceptability_graph(&self) -> BipartiteGraph {
        let edges = (0..self.n_students())
            .flat_map(|s| self.spref[s].iter().map(move |&r| (s, r)))
            .collect();
        BipartiteGraph::new(self.students.clone(), self.residencies.clone(), edges)
            .expect("acceptability graph is well formed")
    }

    /// Gale–Shapley with the lowest-index free proposer moving first.
    pub fn gale_shapley(&self, proposers: Side) -> Matching {
        let n = match proposers {
            Side::Students => self.n_students(),
            Side::Residencies => self.n_residencies(),
        };
        let priority: Vec<usize> = (0..n).collect();
        self.gale_shapley_with_priority(proposers, &priority)
    }

    /// Gale–Shapley where, among free proposers, the one with the smallest
    /// `priority` value proposes next.
    pub fn gale_shapley_with_priority(&self, proposers: Side, priority: &[usize]) -> Matching {
        let (pprefs, rranks, nrecv) = match proposers {
            Side::Students => (&self.spref, &self.rrank, self.n_residencies()),
            Side::Residencies => (&self.rpref, &self.srank, self.n_students()),
        };
        let mut next = vec![0usize; pprefs.len()];
        let mut held: Vec<Option<usize>> = vec![None; nrecv];
        let mut free: BTreeSet<(usize, usize)> =
            (0..pprefs.len()).map(|p| (priority[p], p)).collect();
        while let Some((pr, p)) = free.pop_first() {
            let Some(&q) = pprefs[p].get(next[p]) else {
                continue;
            };
            next[p] += 1;
            match held[q] {
                None => held[q] = Some(p),
                Some(old) if rranks[q][p] < rranks[q][old] => {
                    held[q] = Some(p);
                    free.insert((priority[old], old));
                }
                Some(_) => {
                    free.insert((pr, p));
                }
            }
        }
        let pairs = held
            .iter()
            .enumerate()
            .filter_map(|(q, p)| p.map(|p| (q, p)))
            .map(|(q, p)| match proposers {
                Side::Students => (p, q),
                Side::Residencies => (q, p),
            })
            .collect();
        Matching::from_sorted_unchecked(pairs)
    }

    fn check_ids(&self, m: &Matching) -> Result<()> {
        for &(s, r) in m.pairs() {
            if s >= self.n_students() || r >= self.n_residencies() {
                return Err(Error::Input(format!("pair ({s}, {r}) references an unknown element")));
            }
        }
        Ok(())
    }

    /// Stability report listing every blocking pair and irrational assignment.
    pub fn is_stable(&self, m: &Matching) -> Result<StabilityReport> {
        self.check_ids(m)?;
        let sp = m.left_partners(self.n_students());
        let rp = m.right_partners(self.n_residencies());
        let irrational: Vec<(usize, usize)> = m
            .pairs()
            .iter()
            .copied()
            .filter(|&(s, r)| self.srank[s][r] == UNLISTED)
            .collect();
        let mut blocking = Vec::new();
        for s in 0..self.n_students() {
            for &r in &self.spref[s] {
                if sp[s] == Some(r) {
                    continue;
                }
                if self.student_prefers(s, Some(r), sp[s]) && self.residency_prefers(r, Some(s), rp[r])
                {
                    blocking.push((s, r));
                }
            }
        }
        Ok(StabilityReport {
            stable: blocking.is_empty() && irrational.is_empty(),
            blocking,
            irrational,
        })
    }

    fn require_stable(&self, m: &Matching) -> Result<()> {
        if !self.is_stable(m)?.stable {
            return Err(Error::Contract("lattice operation on an unstable matching".into()));
        }
        Ok(())
    }

    fn combine(&self, a: &Matching, b: &Matching, residency_better: bool) -> Result<Matching> {
        self.require_stable(a)?;
        self.require_stable(b)?;
        let pa = a.right_partners(self.n_residencies());
        let pb = b.right_partners(self.n_residencies());
        let mut pairs = Vec::new();
        for r in 0..self.n_residencies() {
            let pick = if self.residency_prefers(r, pb[r], pa[r]) == residency_better {
                pb[r]
            } else {
                pa[r]
            };
            if let Some(s) = pick {
                pairs.push((s, r));
            }
        }
        Matching::new(pairs)
    }

    /// Each residency gets its more-preferred partner of the two.
    pub fn lattice_join(&self, a: &Matching, b: &Matching) -> Result<Matching> {
        self.combine(a, b, true)
    }

    /// Each residency gets its less-preferred partner of the two.
    pub fn lattice_meet(&self, a: &Matching, b: &Matching) -> Result<Matching> {
        self.combine(a, b, false)
    }

    /// `a <= b` in the lattice: every student weakly prefers `a`.
    pub fn lattice_leq(&self, a: &Matching, b: &Matching) -> bool {
        let pa = a.left_partners(self.n_students());
        let pb = b.left_partners(self.n_students());
        (0..self.n_students()).all(|s| !self.student_prefers(s, pb[s], pa[s]))
    }

    /// All stable matchings, via the lower sets of the rotation poset.
    pub fn enumerate_stable_matchings(&self, cap: usize) -> Result<Vec<Matching>> {
        let rs = crate::rotation::rotation_poset(self);
        let mut all = crate::rotation::matchings_of(&rs, cap)?;
        all.sort();
        Ok(all)
    }

    /// All stable matchings by filtering every matching of the acceptability
    /// graph. Exponential; fails once `limit` matchings have been examined.
    pub fn enumerate_stable_matchings_brute(&self, limit: usize) -> Result<Vec<Matching>> {
        let mut used = vec![false; self.n_residencies()];
        let mut cur = Vec::new();
        let mut out = Vec::new();
        let mut seen = 0usize;
        self.brute_rec(0, &mut used, &mut cur, &mut out, &mut seen, limit)?;
        out.sort();
        Ok(out)
    }

    fn brute_rec(
        &self,
        s: usize,
        used: &mut [bool],
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Matching>,
        seen: &mut usize,
        limit: usize,
    ) -> Result<()> {
        if s == self.n_students() {
            *seen += 1;
            if *seen > limit {
                return Err(Error::resource("matchings examined", limit, *seen));
            }
            let m = Matching::from_sorted_unchecked(cur.clone());
            if self.is_stable(&m)?.stable {
                out.push(m);
            }
            return Ok(());
        }
        self.brute_rec(s + 1, used, cur, out, seen, limit)?;
        for &r in &self.spref[s] {
            if !used[r] {
                used[r] = true;
                cur.push((s, r));
                self.brute_rec(s + 1, used, cur, out, seen, limit)?;
                cur.pop();
                used[r] = false;
            }
        }
        Ok(())
    }

    /// The graph of pairs matched in at least one stable matching: the top
    /// matching plus every rotation edge. All elements are kept as vertices.
    pub fn stable_pairs_graph(&self) -> BipartiteGraph {
        let rs = crate::rotation::rotation_poset(self);
        let mut edges: BTreeSet<(usize, usize)> = rs.top().pairs().iter().copied().collect();
        for rot in rs.rotations() {
            edges.extend(rot.edges());
        }
        BipartiteGraph::new(
            self.students.clone(),
            self.residencies.clone(),
            edges.into_iter().collect(),
        )
        .expect("stable pairs graph is well formed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn i2() -> Instance {
        Instance::from_lists(vec![vec![0, 1], vec![1, 0]], vec![vec![1, 0], vec![0, 1]]).unwrap()
    }

    fn m(p: &[(usize, usize)]) -> Matching {
        Matching::new(p.to_vec()).unwrap()
    }

    #[test]
    fn gale_shapley_both_sides() {
        let i = i2();
        assert_eq!(i.gale_shapley(Side::Students), m(&[(0, 0), (1, 1)]));
        assert_eq!(i.gale_shapley(Side::Residencies), m(&[(0, 1), (1, 0)]));
    }

    #[test]
    fn trivial_instances() {
        let one = Instance::from_lists(vec![vec![0]], vec![vec![0]]).unwrap();
        assert_eq!(one.gale_shapley(Side::Students), m(&[(0, 0)]));
        let lonely = Instance::from_lists(vec![vec![]], vec![vec![]]).unwrap();
        assert!(lonely.gale_shapley(Side::Students).is_empty());
        let empty = Instance::from_lists(vec![], vec![]).unwrap();
        assert!(empty.is_stable(&Matching::empty()).unwrap().stable);
    }

    #[test]
    fn normalization_drops_one_sided_pairs() {
        let i = Instance::from_lists(vec![vec![0, 1]], vec![vec![0], vec![]]).unwrap();
        assert_eq!(i.student_pref(0), &[0]);
        assert_eq!(i.residency_pref(1), &[] as &[usize]);
    }

    #[test]
    fn stability_reports_blocking_pairs() {
        let i = i2();
        let rep = i.is_stable(&m(&[(0, 1)])).unwrap();
        assert!(!rep.stable);
        assert_eq!(rep.blocking, vec![(0, 0), (1, 0)]);
        assert!(i.is_stable(&m(&[(0, 0), (1, 1)])).unwrap().stable);
        assert!(i.is_stable(&m(&[(5, 0)])).is_err());
    }

    #[test]
    fn join_meet_on_i2() {
        let i = i2();
        let bot = i.gale_shapley(Side::Students);
        let top = i.gale_shapley(Side::Residencies);
        assert_eq!(i.lattice_join(&bot, &top).unwrap(), top);
        assert_eq!(i.lattice_meet(&bot, &top).unwrap(), bot);
        assert_eq!(i.lattice_join(&bot, &bot).unwrap(), bot);
        assert!(i.lattice_leq(&bot, &top));
        assert!(!i.lattice_leq(&top, &bot));
        assert!(i.lattice_join(&m(&[(0, 1)]), &top).is_err());
    }

    #[test]
    fn enumeration_on_i2() {
        let i = i2();
        let a = i.enumerate_stable_matchings(100).unwrap();
        let b = i.enumerate_stable_matchings_brute(1000).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a, b);
        let g = i.stable_pairs_graph();
        assert_eq!(g.m(), 4);
    }

    #[test]
    fn isolated_element_stays_in_graph() {
        let i = Instance::from_lists(vec![vec![0], vec![]], vec![vec![0]]).unwrap();
        let g = i.stable_pairs_graph();
        assert_eq!(g.n(), 3);
        assert_eq!(g.degree(1), 0);
    }
}
