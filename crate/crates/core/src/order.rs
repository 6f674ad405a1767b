//! Strict partial orders stored as a transitively closed bit matrix.

use crate::error::{Error, Result};

/// A growable bit set over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn new(n: usize) -> Self {
        Bits {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn get(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn set(&mut self, i: usize) {
        if i / 64 >= self.words.len() {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn clear(&mut self, i: usize) {
        if let Some(w) = self.words.get_mut(i / 64) {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn union_with(&mut self, other: &Bits) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Whether every bit of `self` is also set in `other`.
    pub fn is_subset(&self, other: &Bits) -> bool {
        self.words.iter().enumerate().all(|(i, &w)| {
            let o = other.words.get(i).copied().unwrap_or(0);
            w & !o == 0
        })
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }
}

/// A strict partial order on `0..n`. `lt(i, j)` means `i` lies below `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictOrder {
    n: usize,
    above: Vec<Bits>,
}

impl StrictOrder {
    /// The empty order (antichain) on `n` elements.
    pub fn antichain(n: usize) -> Self {
        StrictOrder {
            n,
            above: vec![Bits::new(n); n],
        }
    }

    /// Transitive closure of the given relations; fails on a cycle.
    pub fn from_relations(n: usize, rel: &[(usize, usize)]) -> Result<Self> {
        let mut o = Self::antichain(n);
        for &(a, b) in rel {
            if a >= n || b >= n {
                return Err(Error::Input(format!("order relation {a} < {b} out of range")));
            }
            if !o.add(a, b) {
                return Err(Error::Contract(format!("order relation {a} < {b} closes a cycle")));
            }
        }
        Ok(o)
    }

    /// Builds an order from a raw relation matrix without closing it; used to
    /// audit orders read from files.
    pub fn from_matrix_unchecked(n: usize, rel: &[(usize, usize)]) -> Self {
        let mut o = Self::antichain(n);
        for &(a, b) in rel {
            o.above[a].set(b);
        }
        o
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.above[a].get(b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) || self.lt(b, a)
    }

    /// Elements strictly above `a`.
    pub fn above(&self, a: usize) -> &Bits {
        &self.above[a]
    }

    /// Adds `a < b` and closes transitively. Returns false, leaving the
    /// order unchanged, if that would create a cycle.
    pub fn add(&mut self, a: usize, b: usize) -> bool {
        if a == b || self.lt(b, a) {
            return false;
        }
        if self.lt(a, b) {
            return true;
        }
        let mut up = self.above[b].clone();
        up.set(b);
        for x in 0..self.n {
            if x == a || self.lt(x, a) {
                self.above[x].union_with(&up);
            }
        }
        true
    }

    /// Cover relations `(a, b)` with nothing strictly between.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.above[a].iter() {
                let between = self.above[a].iter().any(|c| c != b && self.lt(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The same order with one more element, incomparable to all others.
    pub fn with_new_element(&self) -> StrictOrder {
        let mut above: Vec<Bits> = self
            .above
            .iter()
            .map(|row| {
                let mut b = Bits::new(self.n + 1);
                for x in row.iter() {
                    b.set(x);
                }
                b
            })
            .collect();
        above.push(Bits::new(self.n + 1));
        StrictOrder { n: self.n + 1, above }
    }

    /// Checks irreflexivity and transitivity of the stored matrix.
    pub fn audit(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in 0..self.n {
            if self.lt(a, a) {
                out.push(format!("order is reflexive at {a}"));
            }
            for b in self.above[a].iter() {
                for c in self.above[b].iter() {
                    if !self.lt(a, c) {
                        out.push(format!("order is not transitive: {a} < {b} < {c}"));
                    }
                }
            }
        }
        out
    }

    /// Elements strictly below `a`.
    pub fn below(&self, a: usize) -> Vec<usize> {
        (0..self.n).filter(|&x| self.lt(x, a)).collect()
    }

    /// A linear extension: elements sorted by number of predecessors, which
    /// respects the order because predecessors have strictly fewer.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n).collect();
        idx.sort_by_key(|&x| (self.below(x).len(), x));
        idx
    }

    /// All lower sets, each extending an earlier one by a single element
    /// (depth-first). Fails once more than `cap` sets are produced.
    pub fn lower_sets(&self, cap: usize) -> Result<Vec<Bits>> {
        let lin = self.linear_extension();
        let preds: Vec<Vec<usize>> = (0..self.n).map(|x| self.below(x)).collect();
        let mut out = Vec::new();
        let mut cur = Bits::new(self.n);
        self.lower_rec(&lin, &preds, 0, &mut cur, &mut out, cap)?;
        Ok(out)
    }

    fn lower_rec(
        &self,
        lin: &[usize],
        preds: &[Vec<usize>],
        from: usize,
        cur: &mut Bits,
        out: &mut Vec<Bits>,
        cap: usize,
    ) -> Result<()> {
        if out.len() >= cap {
            return Err(Error::resource("lower sets", cap, out.len()));
        }
        out.push(cur.clone());
        for (k, &x) in lin.iter().enumerate().skip(from) {
            if preds[x].iter().all(|&p| cur.get(p)) {
                cur.set(x);
                self.lower_rec(lin, preds, k + 1, cur, out, cap)?;
                cur.clear(x);
            }
        }
        Ok(())
    }

    /// Number of lower sets by subset enumeration; only for small orders.
    pub fn count_lower_sets_brute(&self) -> u64 {
        assert!(self.n <= 24, "brute-force lower-set count limited to 24 elements");
        let mut count = 0;
        'outer: for mask in 0u64..(1 << self.n) {
            for x in 0..self.n {
                if mask >> x & 1 == 1 {
                    for p in self.below(x) {
                        if mask >> p & 1 == 0 {
                            continue 'outer;
                        }
                    }
                }
            }
            count += 1;
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_cycle_rejection() {
        let mut o = StrictOrder::antichain(3);
        assert!(o.add(0, 1));
        assert!(o.add(1, 2));
        assert!(o.lt(0, 2));
        assert!(!o.add(2, 0));
        assert_eq!(o.hasse(), vec![(0, 1), (1, 2)]);
        assert!(o.audit().is_empty());
    }

    #[test]
    fn lower_sets_of_antichain_and_chain() {
        let a = StrictOrder::antichain(3);
        assert_eq!(a.lower_sets(100).unwrap().len(), 8);
        let c = StrictOrder::from_relations(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(c.lower_sets(100).unwrap().len(), 4);
        assert!(c.lower_sets(2).is_err());
    }

    #[test]
    fn audit_finds_intransitive_matrix() {
        let o = StrictOrder::from_matrix_unchecked(3, &[(0, 1), (1, 2)]);
        assert_eq!(o.audit().len(), 1);
    }

    #[test]
    fn bits_operations() {
        let mut b = Bits::new(70);
        b.set(3);
        b.set(69);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![3, 69]);
        let mut c = Bits::new(10);
        c.set(3);
        assert!(c.is_subset(&b));
        c.union_with(&b);
        assert_eq!(c.count(), 2);
    }
}
