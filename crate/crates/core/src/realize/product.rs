use crate::error::{Error, Result};
use crate::families::product;
use crate::graph::Matching;
use crate::rotation::{validate_rotation_system, Rotation, RotationSystem};

/// Rotation system of `G □ H` from rotation systems of both factors.
///
/// Top is `V(G) × top_H` and bottom is `bottom_G × V(H)`. Every rotation of
/// `G` is copied once per vertex of `H` and vice versa, keeping the factor
/// orders. The squares formed by `top_G × V(H)` and `V(G) × bottom_H` become
/// extra rotations with their `H`-edges upper, each above the `G` copies and
/// below the `H` copies it shares edges with.
pub fn realize_product(rs_g: &RotationSystem, rs_h: &RotationSystem) -> Result<RotationSystem> {
    for (name, rs) in [("first", rs_g), ("second", rs_h)] {
        let rep = validate_rotation_system(rs);
        if let Some(v) = rep.violations.first() {
            return Err(Error::Contract(format!("{name} factor is invalid: {v}")));
        }
        if (0..rs.graph().n()).any(|v| rs.graph().degree(v) == 0) {
            return Err(Error::Contract(format!("{name} factor has isolated vertices")));
        }
    }
    let (g, h) = (rs_g.graph(), rs_h.graph());
    let (pg, map) = product(g, h);
    let nh = h.n();
    let nl = pg.nl();
    let pair = |u: usize, v: usize| {
        let (a, b) = (map[u], map[v]);
        if a < nl {
            (a, b - nl)
        } else {
            (b, a - nl)
        }
    };
    let gu = |(l, r): (usize, usize)| (l, g.nl() + r);
    let hu = |(l, r): (usize, usize)| (l, h.nl() + r);
    let mut top = Vec::new();
    for x in 0..g.n() {
        for &e in rs_h.top().pairs() {
            let (p, q) = hu(e);
            top.push(pair(x * nh + p, x * nh + q));
        }
    }
    let mut bottom = Vec::new();
    for &e in rs_g.bottom().pairs() {
        let (p, q) = gu(e);
        for y in 0..nh {
            bottom.push(pair(p * nh + y, q * nh + y));
        }
    }
    let mut rotations = Vec::new();
    let mut rel = Vec::new();
    let ng = rs_g.rotations().len();
    let nhr = rs_h.rotations().len();
    // G copies: index y * ng + i
    for y in 0..nh {
        for rot in rs_g.rotations() {
            let walk: Vec<(usize, usize)> = rot
                .edges()
                .into_iter()
                .map(|e| {
                    let (p, q) = gu(e);
                    pair(p * nh + y, q * nh + y)
                })
                .collect();
            rotations.push(Rotation::from_cycle(&walk)?);
        }
        for (a, b) in rs_g.order().hasse() {
            rel.push((y * ng + a, y * ng + b));
        }
    }
    let hbase = nh * ng;
    for x in 0..g.n() {
        for rot in rs_h.rotations() {
            let walk: Vec<(usize, usize)> = rot
                .edges()
                .into_iter()
                .map(|e| {
                    let (p, q) = hu(e);
                    pair(x * nh + p, x * nh + q)
                })
                .collect();
            rotations.push(Rotation::from_cycle(&walk)?);
        }
        for (a, b) in rs_h.order().hasse() {
            rel.push((hbase + x * nhr + a, hbase + x * nhr + b));
        }
    }
    // which rotation has a given factor edge as upper / lower
    let upper_in = |rs: &RotationSystem, e: (usize, usize)| {
        rs.rotations().iter().position(|r| r.upper_edges().contains(&e))
    };
    let lower_in = |rs: &RotationSystem, e: (usize, usize)| {
        rs.rotations().iter().position(|r| r.lower_edges().contains(&e))
    };
    for &eg in rs_g.top().pairs() {
        let (g1, g2) = gu(eg);
        for &eh in rs_h.bottom().pairs() {
            let (h1, h2) = hu(eh);
            let q = rotations.len();
            let walk = [
                pair(g1 * nh + h1, g1 * nh + h2),
                pair(g1 * nh + h2, g2 * nh + h2),
                pair(g2 * nh + h2, g2 * nh + h1),
                pair(g2 * nh + h1, g1 * nh + h1),
            ];
            rotations.push(Rotation::from_cycle(&walk)?);
            if let Some(i) = upper_in(rs_g, eg) {
                for y in [h1, h2] {
                    rel.push((y * ng + i, q));
                }
            }
            if let Some(j) = lower_in(rs_h, eh) {
                for x in [g1, g2] {
                    rel.push((q, hbase + x * nhr + j));
                }
            }
        }
    }
    let rs = RotationSystem::new(pg, Matching::new(top)?, Matching::new(bottom)?, rotations, &rel)?;
    let rep = validate_rotation_system(&rs);
    if let Some(v) = rep.violations.first() {
        return Err(Error::Contract(format!("product system is invalid: {v}")));
    }
    Ok(rs)
}
