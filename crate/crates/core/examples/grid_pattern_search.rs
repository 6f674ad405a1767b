// Searches 5 x e grid systems (rows i, columns j) whose bottom matching holds
// the row-4 pairs (j, j+1), j even, and whose vertex chains repeat with column
// period 2 somewhere.
use stablepairs::analysis::for_each_perfect_matching;
use stablepairs::families::{grid, grid_vertex};
use stablepairs::BipartiteGraph;

struct S<'a> {
    g: &'a BipartiteGraph,
    pms: Vec<u128>,
    full: u128,
    ve: Vec<u128>,
    nb: Vec<Option<Vec<usize>>>,
    found: usize,
    tries: u64,
    rows: usize,
    cols: usize,
}

fn connected(g: &BipartiteGraph, ve: &[u128], d: u128) -> bool {
    let mut reached = d & d.wrapping_neg();
    loop {
        let mut ve2 = 0u128;
        let mut bits = reached;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (a, b) = g.endpoints(k);
            ve2 |= ve[a] | ve[b];
        }
        let next = (reached | ve2) & d;
        if next == reached {
            return reached == d;
        }
        reached = next;
    }
}

fn dir(g: &BipartiteGraph, rows: usize, cols: usize, v: usize, e: usize) -> char {
    let w = g.other(e, v);
    let pos = |x: usize| {
        for i in 0..rows {
            for j in 0..cols {
                if grid_vertex(rows, cols, i, j) == x {
                    return (i, j);
                }
            }
        }
        unreachable!()
    };
    let (a, b) = (pos(v), pos(w));
    if b.0 > a.0 {
        'D'
    } else if b.0 < a.0 {
        'U'
    } else if b.1 > a.1 {
        'R'
    } else {
        'L'
    }
}

impl S<'_> {
    fn nbrs(&mut self, i: usize) -> Vec<usize> {
        if let Some(v) = &self.nb[i] {
            return v.clone();
        }
        let m = self.pms[i];
        let l: Vec<usize> = (0..self.pms.len())
            .filter(|&j| j != i && connected(self.g, &self.ve, m ^ self.pms[j]))
            .collect();
        self.nb[i] = Some(l.clone());
        l
    }
    fn dfs(&mut self, path: &mut Vec<usize>, used: u128) -> bool {
        self.tries += 1;
        if self.tries > 200_000_000 {
            return true;
        }
        let i = *path.last().unwrap();
        let m = self.pms[i];
        if m | used == self.full {
            return self.check(path);
        }
        let pending = self.full & !(m | used);
        let mut cover = 0u128;
        for &p in &self.pms {
            if p & used == 0 {
                cover |= p;
            }
        }
        if cover & pending != pending {
            return false;
        }
        for j in self.nbrs(i) {
            let nx = self.pms[j];
            if nx & used != 0 {
                continue;
            }
            path.push(j);
            if self.dfs(path, used | (m & !nx)) {
                return true;
            }
            path.pop();
        }
        false
    }
    fn check(&mut self, path: &[usize]) -> bool {
        self.found += 1;
        let g = self.g;
        let n = g.n();
        let mut chains: Vec<Vec<usize>> = vec![vec![]; n];
        for &p in path {
            let mut b = self.pms[p];
            while b != 0 {
                let k = b.trailing_zeros() as usize;
                b &= b - 1;
                let (l, r) = g.endpoints(k);
                for v in [l, r] {
                    if chains[v].last() != Some(&k) {
                        chains[v].push(k);
                    }
                }
            }
        }
        let d: Vec<Vec<String>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let v = grid_vertex(self.rows, self.cols, i, j);
                        chains[v]
                            .iter()
                            .map(|&e| dir(g, self.rows, self.cols, v, e))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        for c in 0..self.cols - 2 {
            if (0..self.rows).all(|i| d[i][c] == d[i][c + 2]) {
                println!("periodic at column {c} after {} solutions:", self.found);
                for row in &d {
                    println!(
                        "  {}",
                        row.iter()
                            .map(|s| format!("{s:5}"))
                            .collect::<Vec<_>>()
                            .join(" ")
                    );
                }
                return true;
            }
        }
        if self.found % 1000 == 0 {
            eprintln!("{} solutions", self.found);
        }
        false
    }
}

fn main() {
    let cols: usize = std::env::args().nth(1).unwrap().parse().unwrap();
    let rows = 5;
    let g = grid(rows, cols);
    let nl = g.nl();
    let eid = |p: (usize, usize), q: (usize, usize)| {
        let (u, v) = (
            grid_vertex(rows, cols, p.0, p.1),
            grid_vertex(rows, cols, q.0, q.1),
        );
        let (l, r) = if u < nl { (u, v - nl) } else { (v, u - nl) };
        g.edge_id(l, r).unwrap()
    };
    let mut must = 0u128;
    for j in (0..cols).step_by(2) {
        must |= 1u128 << eid((rows - 1, j), (rows - 1, j + 1));
    }
    let mut pms = Vec::new();
    for_each_perfect_matching(&g, |ids| {
        pms.push(ids.iter().fold(0u128, |a, &k| a | 1u128 << k));
        Ok(())
    })
    .unwrap();
    pms.sort_unstable();
    println!("{} matchings, {} edges", pms.len(), g.m());
    let ve = (0..g.n())
        .map(|v| g.incident(v).iter().fold(0u128, |a, &k| a | 1u128 << k))
        .collect();
    let n = pms.len();
    let full = (1u128 << g.m()) - 1;
    let mut s = S {
        g: &g,
        pms,
        full,
        ve,
        nb: vec![None; n],
        found: 0,
        tries: 0,
        rows,
        cols,
    };
    for st in 0..n {
        if s.pms[st] & must != must {
            continue;
        }
        let mut path = vec![st];
        if s.dfs(&mut path, 0) {
            break;
        }
    }
    println!("found {} tries {}", s.found, s.tries);
}
