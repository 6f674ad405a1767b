//! Odd-by-even grids.
//!
//! A five-row block is described by the order in which each vertex meets its
//! neighbours, from its bottom partner to its top partner (`U`, `D`, `L`, `R`
//! step the row or column). Interior columns alternate between two patterns,
//! so the block extends to any even number of columns. Its bottom matching
//! pairs the last row as `(0,1), (2,3), ...`. Further pairs of rows come from
//! the even-grid squares: a system on the lower rows whose top matching is
//! that same pairing, placed below the block so the shared pairs pass from
//! one to the other.

use super::grid::even_grid;
use crate::error::{Error, Result};
use crate::families::{grid, grid_vertex};
use crate::graph::{BipartiteGraph, Matching};
use crate::rotation::{Rotation, RotationSystem};
use std::collections::BTreeSet;

/// Rows of the first column, odd interior columns, even interior columns and
/// the last column.
const FIRST: [&str; 5] = ["DR", "UDR", "DUR", "URD", "RU"];
const ODD: [&str; 5] = ["DRL", "URDL", "DRUL", "ULDR", "LUR"];
const EVEN: [&str; 5] = ["DLR", "ULDR", "DLUR", "URDL", "RUL"];
const LAST: [&str; 5] = ["DL", "UDL", "DUL", "ULD", "LU"];

fn column_pattern(j: usize, cols: usize) -> &'static [&'static str; 5] {
    if j == 0 {
        &FIRST
    } else if j + 1 == cols {
        &LAST
    } else if j % 2 == 1 {
        &ODD
    } else {
        &EVEN
    }
}

/// Edge id between grid points `p` and `q` of `grid(rows, cols)`.
fn grid_edge(g: &BipartiteGraph, rows: usize, cols: usize, p: (usize, usize), q: (usize, usize)) -> usize {
    let (u, v) = (grid_vertex(rows, cols, p.0, p.1), grid_vertex(rows, cols, q.0, q.1));
    g.edge_between(u, v).expect("grid neighbours are adjacent")
}

/// The five-row block on `cols` columns (even, at least 4).
pub(super) fn five_row_block(cols: usize) -> Result<RotationSystem> {
    let g = grid(5, cols);
    let mut chains = vec![Vec::new(); g.n()];
    for i in 0..5 {
        for j in 0..cols {
            let chain = column_pattern(j, cols)[i]
                .chars()
                .map(|c| {
                    let q = match c {
                        'U' => (i - 1, j),
                        'D' => (i + 1, j),
                        'L' => (i, j - 1),
                        _ => (i, j + 1),
                    };
                    grid_edge(&g, 5, cols, (i, j), q)
                })
                .collect();
            chains[grid_vertex(5, cols, i, j)] = chain;
        }
    }
    let end = |first: bool| -> Result<Matching> {
        let mut pairs = BTreeSet::new();
        for c in &chains {
            let e = if first { c[0] } else { *c.last().unwrap() };
            pairs.insert(g.edge(e));
        }
        Matching::new(pairs.into_iter().collect())
    };
    let (top, bottom) = (end(false)?, end(true)?);
    RotationSystem::from_chains(g, top, bottom, &chains)
}

/// Moves `rot` from `src` into `dst` through the unified vertex map `f`.
fn lift(rot: &Rotation, src: &BipartiteGraph, dst: &BipartiteGraph, f: &dyn Fn(usize) -> usize) -> Result<Rotation> {
    let walk: Vec<(usize, usize)> = rot
        .edges()
        .into_iter()
        .map(|(l, r)| lift_edge(src, dst, f, (l, r)))
        .collect();
    Rotation::from_cycle(&walk)
}

fn lift_edge(src: &BipartiteGraph, dst: &BipartiteGraph, f: &dyn Fn(usize) -> usize, (l, r): (usize, usize)) -> (usize, usize) {
    let (u, v) = (f(l), f(src.nl() + r));
    dst.edge(dst.edge_between(u, v).expect("lifted edge exists"))
}

/// Rotation system for the `a × b` grid with `ab` even, one side odd and at
/// least 5, the other even and at least 4.
pub(super) fn odd_grid(a: usize, b: usize) -> Result<RotationSystem> {
    let (rows, cols) = if a % 2 == 1 { (a, b) } else { (b, a) };
    if rows < 5 || cols < 4 || cols % 2 == 1 {
        return Err(Error::Unsupported(format!("no odd-grid pattern for {a}x{b}")));
    }
    let g = grid(a, b);
    let at = |i: usize, j: usize| if a % 2 == 1 { grid_vertex(a, b, i, j) } else { grid_vertex(a, b, j, i) };
    let block = five_row_block(cols)?;
    let bg = block.graph().clone();
    let pos_block: Vec<(usize, usize)> = points(5, cols);
    let from_block = |v: usize| {
        let (i, j) = pos_block[v];
        at(i, j)
    };
    let mut top: Vec<(usize, usize)> = block.top().pairs().iter().map(|&e| lift_edge(&bg, &g, &from_block, e)).collect();
    let mut bottom: Vec<(usize, usize)> =
        block.bottom().pairs().iter().map(|&e| lift_edge(&bg, &g, &from_block, e)).collect();
    let mut rotations = block
        .rotations()
        .iter()
        .map(|r| lift(r, &bg, &g, &from_block))
        .collect::<Result<Vec<_>>>()?;
    if rows > 5 {
        // even-grid squares on `cols × (rows - 3)` with second coordinate k
        // standing for row k + 3; only rows from 4 on are kept
        let depth = rows - 3;
        let ev = even_grid(cols, depth)?;
        let eg = ev.graph().clone();
        let pos_ev = points(cols, depth);
        let keep = |v: usize| pos_ev[v].1 >= 1;
        let from_ev = |v: usize| {
            let (x, k) = pos_ev[v];
            at(k + 3, x)
        };
        let shared: BTreeSet<(usize, usize)> = (0..cols)
            .step_by(2)
            .map(|j| g.edge(g.edge_between(at(4, j), at(4, j + 1)).unwrap()))
            .collect();
        bottom.retain(|e| !shared.contains(e));
        let inside = |(l, r): (usize, usize)| keep(l) && keep(eg.nl() + r);
        let on_row4_horizontal = |(l, r): (usize, usize)| pos_ev[l].1 == 1 && pos_ev[eg.nl() + r].1 == 1;
        for &e in ev.bottom().pairs() {
            if inside(e) {
                bottom.push(lift_edge(&eg, &g, &from_ev, e));
            }
        }
        for &e in ev.top().pairs() {
            if inside(e) && !on_row4_horizontal(e) {
                top.push(lift_edge(&eg, &g, &from_ev, e));
            }
        }
        for rot in ev.rotations() {
            if rot.edges().into_iter().all(inside) {
                rotations.push(lift(rot, &eg, &g, &from_ev)?);
            }
        }
    }
    RotationSystem::from_oriented(g, Matching::new(top)?, Matching::new(bottom)?, rotations)
}

/// Grid point of every unified vertex of `grid(a, b)`.
fn points(a: usize, b: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(0, 0); a * b];
    for i in 0..a {
        for j in 0..b {
            out[grid_vertex(a, b, i, j)] = (i, j);
        }
    }
    out
}
