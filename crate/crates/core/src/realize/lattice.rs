use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use crate::instance::Instance;
use crate::order::StrictOrder;
use crate::rotation::{validate_rotation_system, Rotation, RotationSystem};

/// A finite poset with named elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    ids: Vec<String>,
    order: StrictOrder,
}

impl Poset {
    /// From element names and cover pairs `(lower, upper)`; fails on cycles.
    pub fn new(ids: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        if covers.iter().any(|&(a, b)| a >= ids.len() || b >= ids.len()) {
            return Err(Error::Input("cover relation references an unknown element".into()));
        }
        let order = StrictOrder::from_relations(ids.len(), covers)?;
        Ok(Poset { ids, order })
    }

    /// Elements named `p0, p1, ...`.
    pub fn from_order(order: StrictOrder) -> Self {
        let ids = (0..order.len()).map(|i| format!("p{i}")).collect();
        Poset { ids, order }
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn order(&self) -> &StrictOrder {
        &self.order
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.order.hasse()
    }
}

/// Subcubic graph and rotation system whose lattice of matchings is the
/// lattice of lower sets of `p`.
///
/// Element `v` with `a` upper covers and `b` lower covers becomes an
/// alternating cycle with `max(2, a)`, `max(2, b)` or `a + b + 1` upper
/// edges (when only `a`, only `b`, or both are positive). Its first `a`
/// upper edges take the covers above it in order and the lower edges from
/// index `a` on take the covers below it, which keeps associated edges
/// pairwise non-adjacent. The two edges associated with a cover are merged.
/// The empty poset gives a single edge that is both top and bottom.
pub fn realize_lattice_subcubic(p: &Poset) -> Result<(BipartiteGraph, RotationSystem)> {
    let n = p.len();
    if n == 0 {
        let g = BipartiteGraph::from_edges(1, 1, vec![(0, 0)])?;
        let e = Matching::new(vec![(0, 0)])?;
        let rs = RotationSystem::new(g.clone(), e.clone(), e, vec![], &[])?;
        return Ok((g, rs));
    }
    let covers = p.covers();
    let ups: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..covers.len()).filter(|&c| covers[c].0 == v).collect())
        .collect();
    let downs: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..covers.len()).filter(|&c| covers[c].1 == v).collect())
        .collect();
    let half: Vec<usize> = (0..n)
        .map(|v| {
            let (a, b) = (ups[v].len(), downs[v].len());
            match (a, b) {
                (0, _) => b.max(2),
                (_, 0) => a.max(2),
                _ => a + b + 1,
            }
        })
        .collect();
    // raw vertices: cycle v student i -> sbase[v] + i, residency likewise
    let mut sbase = vec![0; n + 1];
    for v in 0..n {
        sbase[v + 1] = sbase[v] + half[v];
    }
    let total = sbase[n];
    let mut suf: Vec<usize> = (0..total).collect();
    let mut ruf: Vec<usize> = (0..total).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut y = x;
        while uf[y] != r {
            let next = uf[y];
            uf[y] = r;
            y = next;
        }
        r
    }
    fn union(uf: &mut [usize], a: usize, b: usize) {
        let (ra, rb) = (find(uf, a), find(uf, b));
        if ra != rb {
            uf[ra.max(rb)] = ra.min(rb);
        }
    }
    // upper edge i of cycle v: (s_i, r_i); lower edge i: (s_{i+1}, r_i)
    let upper = |v: usize, i: usize| (sbase[v] + i, sbase[v] + i);
    let lower = |v: usize, i: usize| (sbase[v] + (i + 1) % half[v], sbase[v] + i);
    let mut assoc_up = vec![vec![false; 0]; n];
    let mut assoc_low = vec![vec![false; 0]; n];
    for v in 0..n {
        assoc_up[v] = vec![false; half[v]];
        assoc_low[v] = vec![false; half[v]];
    }
    let mut slot_up = vec![0; covers.len()];
    let mut slot_low = vec![0; covers.len()];
    for v in 0..n {
        let a = ups[v].len();
        for (i, &c) in ups[v].iter().enumerate() {
            slot_up[c] = i;
            assoc_up[v][i] = true;
        }
        for (j, &c) in downs[v].iter().enumerate() {
            slot_low[c] = a + j;
            assoc_low[v][a + j] = true;
        }
    }
    for (c, &(lo, hi)) in covers.iter().enumerate() {
        let (s1, r1) = upper(lo, slot_up[c]);
        let (s2, r2) = lower(hi, slot_low[c]);
        union(&mut suf, s1, s2);
        union(&mut ruf, r1, r2);
    }
    let mut sid = vec![usize::MAX; total];
    let mut rid = vec![usize::MAX; total];
    let mut left = Vec::new();
    let mut right = Vec::new();
    for v in 0..n {
        for i in 0..half[v] {
            let x = sbase[v] + i;
            let rs = find(&mut suf, x);
            if sid[rs] == usize::MAX {
                sid[rs] = left.len();
                left.push(format!("s{}_{}", p.ids()[v], i));
            }
            let rr = find(&mut ruf, x);
            if rid[rr] == usize::MAX {
                rid[rr] = right.len();
                right.push(format!("r{}_{}", p.ids()[v], i));
            }
        }
    }
    let mut map = |(s, r): (usize, usize)| {
        let a = find(&mut suf, s);
        let b = find(&mut ruf, r);
        (sid[a], rid[b])
    };
    let mut edges = std::collections::BTreeSet::new();
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    let mut rotations = Vec::new();
    for v in 0..n {
        let mut walk = Vec::new();
        for i in 0..half[v] {
            let u = map(upper(v, i));
            let l = map(lower(v, i));
            walk.push(u);
            walk.push(l);
            edges.insert(u);
            edges.insert(l);
            if !assoc_up[v][i] {
                top.push(u);
            }
            if !assoc_low[v][i] {
                bottom.push(l);
            }
        }
        rotations.push(Rotation::from_cycle(&walk)?);
    }
    let g = BipartiteGraph::new(left, right, edges.into_iter().collect())?;
    let rs = RotationSystem::new(g.clone(), Matching::new(top)?, Matching::new(bottom)?, rotations, &covers)?;
    let rep = validate_rotation_system(&rs);
    if let Some(v) = rep.violations.first() {
        return Err(Error::Contract(format!("lattice construction is invalid: {v}")));
    }
    Ok((g, rs))
}

/// Join-irreducible elements of the lattice of stable matchings `ms` of
/// `inst` (those with exactly one lower cover), as a relation matrix ordered
/// by the lattice order.
pub fn join_irreducible_order(inst: &Instance, ms: &[Matching]) -> Vec<Vec<bool>> {
    let k = ms.len();
    let leq: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| inst.lattice_leq(&ms[i], &ms[j])).collect())
        .collect();
    let lt = |i: usize, j: usize| i != j && leq[i][j];
    let ji: Vec<usize> = (0..k)
        .filter(|&x| {
            let covers = (0..k)
                .filter(|&y| lt(y, x) && !(0..k).any(|z| lt(y, z) && lt(z, x)))
                .count();
            covers == 1
        })
        .collect();
    ji.iter()
        .map(|&a| ji.iter().map(|&b| lt(a, b)).collect())
        .collect()
}

/// Number of lower sets, by subset enumeration.
pub fn lower_set_count(order: &StrictOrder) -> u64 {
    order.count_lower_sets_brute()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::poset_iso;
    use crate::rotation::{instance_from_rotation_system, matchings_of};

    fn check(p: &Poset, expected: usize) {
        let (g, rs) = realize_lattice_subcubic(p).unwrap();
        assert!(g.max_degree() <= 3);
        assert_eq!(matchings_of(&rs, 1000).unwrap().len(), expected);
        let inst = instance_from_rotation_system(&rs, false).unwrap();
        let ms = inst.enumerate_stable_matchings(1000).unwrap();
        assert_eq!(ms.len(), expected);
        let rel = join_irreducible_order(&inst, &ms);
        let want: Vec<Vec<bool>> = (0..p.len())
            .map(|a| (0..p.len()).map(|b| p.order().lt(a, b)).collect())
            .collect();
        assert!(poset_iso(&rel, &want));
    }

    #[test]
    fn small_posets() {
        check(&Poset::new(vec![], &[]).unwrap(), 1);
        let anti = Poset::new(vec!["a".into(), "b".into()], &[]).unwrap();
        check(&anti, 4);
        let (g, _) = realize_lattice_subcubic(&anti).unwrap();
        assert_eq!(g.components().len(), 2);
        let chain = Poset::new(vec!["a".into(), "b".into()], &[(0, 1)]).unwrap();
        check(&chain, 3);
        let (g, _) = realize_lattice_subcubic(&chain).unwrap();
        assert_eq!((g.n(), g.m()), (6, 7));
        let chain3 = Poset::new(vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (1, 2)]).unwrap();
        check(&chain3, 4);
    }
}
