use super::grid_patterns;
use super::outerplanar::realize_outerplanar;
use crate::error::{Error, Result};
use crate::families::{grid, grid_vertex};
use crate::graph::Matching;
use crate::rotation::RotationSystem;

/// Whether the `a × b` grid is realizable: `ab` even and `min(a, b) != 3`.
pub fn grid_decision(a: usize, b: usize) -> bool {
    (a * b) % 2 == 0 && a.min(b) != 3
}

/// Rotation system for the `a × b` grid of [`crate::families::grid`], or
/// `None` when the grid is not realizable.
///
/// Width 2 uses the outerplanar construction; even-by-even grids use square
/// rotations; the odd-by-even case uses a five-row pattern extended by pairs
/// of rows built from the even pattern.
pub fn realize_grid(a: usize, b: usize) -> Result<Option<RotationSystem>> {
    if a <= 1 || b <= 1 {
        return Err(Error::Unsupported("grid sides must exceed 1".into()));
    }
    if !grid_decision(a, b) {
        return Ok(None);
    }
    if a.min(b) == 2 {
        return realize_outerplanar(&grid(a, b)).map(Some);
    }
    if a % 2 == 0 && b % 2 == 0 {
        return even_grid(a, b).map(Some);
    }
    grid_patterns::odd_grid(a, b).map(Some)
}

/// Square-rotation system for even `a` and `b`.
///
/// Squares are named by their corner with smallest coordinates. Squares with
/// `(even, odd)` corners are lowest, `(even, even)` in the middle and
/// `(odd, even)` highest; `(odd, odd)` squares are unused. Top holds the
/// first-coordinate edges of top squares and the second-coordinate edges of
/// middle squares not shared with a top square; bottom holds the
/// second-coordinate edges of bottom squares and the first-coordinate edges
/// of middle squares not shared with a bottom square.
pub(super) fn even_grid(a: usize, b: usize) -> Result<RotationSystem> {
    let g = grid(a, b);
    let nl = g.nl();
    let pair = |p: (usize, usize), q: (usize, usize)| {
        let (u, v) = (grid_vertex(a, b, p.0, p.1), grid_vertex(a, b, q.0, q.1));
        if u < nl {
            (u, v - nl)
        } else {
            (v, u - nl)
        }
    };
    #[derive(PartialEq, Clone, Copy)]
    enum Kind {
        Bottom,
        Middle,
        Top,
        Unused,
    }
    let kind = |x: usize, y: usize| match (x % 2, y % 2) {
        (0, 1) => Kind::Bottom,
        (0, 0) => Kind::Middle,
        (1, 0) => Kind::Top,
        _ => Kind::Unused,
    };
    // squares containing an edge: first-coordinate edge (x,y)-(x+1,y) lies in
    // squares (x,y) and (x,y-1); second-coordinate edge (x,y)-(x,y+1) in
    // squares (x,y) and (x-1,y)
    let squares_of_h = |x: usize, y: usize| {
        let mut v = Vec::new();
        if y + 1 < b {
            v.push(kind(x, y));
        }
        if y > 0 {
            v.push(kind(x, y - 1));
        }
        v
    };
    let squares_of_v = |x: usize, y: usize| {
        let mut v = Vec::new();
        if x + 1 < a {
            v.push(kind(x, y));
        }
        if x > 0 {
            v.push(kind(x - 1, y));
        }
        v
    };
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    for x in 0..a {
        for y in 0..b {
            if x + 1 < a {
                let ks = squares_of_h(x, y);
                let e = pair((x, y), (x + 1, y));
                if ks.contains(&Kind::Top) {
                    top.push(e);
                }
                if ks.contains(&Kind::Middle) && !ks.contains(&Kind::Bottom) {
                    bottom.push(e);
                }
            }
            if y + 1 < b {
                let ks = squares_of_v(x, y);
                let e = pair((x, y), (x, y + 1));
                if ks.contains(&Kind::Bottom) {
                    bottom.push(e);
                }
                if ks.contains(&Kind::Middle) && !ks.contains(&Kind::Top) {
                    top.push(e);
                }
            }
        }
    }
    let mut cycles = Vec::new();
    for x in 0..a - 1 {
        for y in 0..b - 1 {
            if kind(x, y) == Kind::Unused {
                continue;
            }
            cycles.push(vec![
                pair((x, y), (x + 1, y)),
                pair((x + 1, y), (x + 1, y + 1)),
                pair((x + 1, y + 1), (x, y + 1)),
                pair((x, y + 1), (x, y)),
            ]);
        }
    }
    RotationSystem::from_cycles(g, Matching::new(top)?, Matching::new(bottom)?, &cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::validate_rotation_system;

    #[test]
    fn decisions() {
        assert!(realize_grid(3, 4).unwrap().is_none());
        assert!(realize_grid(3, 3).unwrap().is_none());
        assert!(realize_grid(5, 5).unwrap().is_none());
        assert!(realize_grid(1, 4).is_err());
    }

    #[test]
    fn even_grids_validate() {
        for a in (4..=10).step_by(2) {
            for b in (4..=10).step_by(2) {
                let rs = realize_grid(a, b).unwrap().unwrap();
                assert!(validate_rotation_system(&rs).is_valid(), "{a}x{b}");
            }
        }
    }

    #[test]
    fn two_wide_grids() {
        let rs = realize_grid(7, 2).unwrap().unwrap();
        assert!(validate_rotation_system(&rs).is_valid());
        assert_eq!(rs.rotations().len(), 6);
    }
}
