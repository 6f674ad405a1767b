//! Line-oriented text formats.
//!
//! Every format accepts `#` comments and blank lines. Serializers list
//! elements in index order and pairs sorted, so `parse(write(x)) == x`.
//!
//! * `.smi` instance: `students <n>`, `residencies <m>`, then `n` student lines
//!   and `m` residency lines `<id>: <partner> ...`, most preferred first.
//! * matching: one `<student> <residency>` pair per line.
//! * `.bg` graph: `left <n> [ids]`, `right <m> [ids]`, `e <left> <right>` lines
//!   and optional `embed <vertex>: <neighbours clockwise>` lines. Without ids
//!   the vertices are `s0..` and `r0..`.
//! * `.rsys` rotation system over a given graph: `TOP` and `BOTTOM` sections
//!   of pairs, `ROTATION <k>: <s> <r> <s> <r> ...` with `(s, r)` upper, and
//!   `ORDER: <i> < <j>` cover lines.
//! * `.poset`: `elem <id>` lines, then `cover <lo> <hi>` lines.
//! * NAE formula: optional `p nae <vars> <clauses>`, `c` comments, one clause
//!   of three signed 1-based variables per line, optionally ended by `0`.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use crate::instance::Instance;
use crate::realize::{NaeFormula, NaeLiteral, Poset};
use crate::rotation::{Rotation, RotationSystem};
use std::collections::HashMap;
use std::fmt::Write as _;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Content lines as `(1-based number, trimmed text)` with comments removed.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn last_line(text: &str) -> usize {
    text.lines().count().max(1)
}

/// Rewrites a construction error as a parse error at `line`.
fn at_line<T>(r: Result<T>, line: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => perr(line, other.to_string()),
    })
}

fn count_header(line: usize, text: &str, key: &str) -> Result<(usize, Vec<String>)> {
    let mut it = text.split_whitespace();
    if it.next() != Some(key) {
        return Err(perr(line, format!("expected `{key} <count>`")));
    }
    let n = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| perr(line, format!("`{key}` needs a count")))?;
    Ok((n, it.map(str::to_string).collect()))
}

fn index_of(ids: &[String]) -> HashMap<&str, usize> {
    ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
}

fn lookup(map: &HashMap<&str, usize>, id: &str, line: usize, what: &str) -> Result<usize> {
    map.get(id)
        .copied()
        .ok_or_else(|| perr(line, format!("unknown {what} `{id}`")))
}

fn check_id(line: usize, id: &str) -> Result<()> {
    if id.is_empty() || id.contains(':') {
        return Err(perr(line, format!("bad id `{id}`")));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut it = lines(text);
    let (l1, t1) = it.next().ok_or_else(|| perr(1, "missing `students` header"))?;
    let (ns, _) = count_header(l1, t1, "students")?;
    let (l2, t2) = it.next().ok_or_else(|| perr(l1, "missing `residencies` header"))?;
    let (nr, _) = count_header(l2, t2, "residencies")?;
    let mut rows: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (ln, t) in it {
        let (id, rest) = t
            .split_once(':')
            .ok_or_else(|| perr(ln, "expected `<id>: <preferences>`"))?;
        let id = id.trim();
        check_id(ln, id)?;
        rows.push((ln, id.to_string(), rest.split_whitespace().map(str::to_string).collect()));
    }
    if rows.len() != ns + nr {
        return Err(perr(last_line(text), format!("expected {} element lines, found {}", ns + nr, rows.len())));
    }
    let students: Vec<String> = rows[..ns].iter().map(|r| r.1.clone()).collect();
    let residencies: Vec<String> = rows[ns..].iter().map(|r| r.1.clone()).collect();
    let (si, ri) = (index_of(&students), index_of(&residencies));
    let resolve = |rows: &[(usize, String, Vec<String>)], map: &HashMap<&str, usize>, what: &str| {
        rows.iter()
            .map(|(ln, _, prefs)| prefs.iter().map(|p| lookup(map, p, *ln, what)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
    };
    let spref = resolve(&rows[..ns], &ri, "residency")?;
    let rpref = resolve(&rows[ns..], &si, "student")?;
    at_line(Instance::new(students, residencies, spref, rpref), last_line(text))
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let (sids, rids) = (inst.student_ids(), inst.residency_ids());
    writeln!(out, "students {}", sids.len()).unwrap();
    writeln!(out, "residencies {}", rids.len()).unwrap();
    for (s, id) in sids.iter().enumerate() {
        let prefs: Vec<&str> = inst.student_pref(s).iter().map(|&r| rids[r].as_str()).collect();
        writeln!(out, "{id}: {}", prefs.join(" ")).unwrap();
    }
    for (r, id) in rids.iter().enumerate() {
        let prefs: Vec<&str> = inst.residency_pref(r).iter().map(|&s| sids[s].as_str()).collect();
        writeln!(out, "{id}: {}", prefs.join(" ")).unwrap();
    }
    out
}

/// Reads `<left> <right>` pair lines against the given id lists.
pub fn parse_matching(text: &str, left: &[String], right: &[String]) -> Result<Matching> {
    let (li, ri) = (index_of(left), index_of(right));
    let mut pairs = Vec::new();
    for (ln, t) in lines(text) {
        pairs.push(pair(ln, t, &li, &ri)?);
    }
    at_line(Matching::new(pairs), last_line(text))
}

fn pair(ln: usize, t: &str, li: &HashMap<&str, usize>, ri: &HashMap<&str, usize>) -> Result<(usize, usize)> {
    let f: Vec<&str> = t.split_whitespace().collect();
    if f.len() != 2 {
        return Err(perr(ln, "expected `<left> <right>`"));
    }
    Ok((lookup(li, f[0], ln, "left vertex")?, lookup(ri, f[1], ln, "right vertex")?))
}

pub fn write_matching(m: &Matching, left: &[String], right: &[String]) -> String {
    m.pairs()
        .iter()
        .map(|&(l, r)| format!("{} {}\n", left[l], right[r]))
        .collect()
}

pub fn parse_graph(text: &str) -> Result<BipartiteGraph> {
    let mut it = lines(text);
    let side = |it: &mut dyn Iterator<Item = (usize, &str)>, key: &str, prefix: &str, prev: usize| {
        let (ln, t) = it.next().ok_or_else(|| perr(prev, format!("missing `{key}` header")))?;
        let (n, ids) = count_header(ln, t, key)?;
        let ids = if ids.is_empty() {
            (0..n).map(|i| format!("{prefix}{i}")).collect()
        } else if ids.len() == n {
            ids
        } else {
            return Err(perr(ln, format!("`{key}` declares {n} vertices but names {}", ids.len())));
        };
        Ok::<_, Error>((ln, ids))
    };
    let (l1, left) = side(&mut it, "left", "s", 1)?;
    let (_, right) = side(&mut it, "right", "r", l1)?;
    let (li, ri) = (index_of(&left), index_of(&right));
    let nl = left.len();
    let unified: HashMap<&str, usize> = left
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .chain(right.iter().enumerate().map(|(j, s)| (s.as_str(), nl + j)))
        .collect();
    let mut edges = Vec::new();
    let mut embed: Vec<Option<Vec<usize>>> = vec![None; nl + right.len()];
    let mut embed_line = None;
    for (ln, t) in it {
        if let Some(rest) = t.strip_prefix("embed ") {
            let (v, nb) = rest
                .split_once(':')
                .ok_or_else(|| perr(ln, "expected `embed <vertex>: <neighbours>`"))?;
            let v = lookup(&unified, v.trim(), ln, "vertex")?;
            let nb = nb
                .split_whitespace()
                .map(|w| lookup(&unified, w, ln, "vertex"))
                .collect::<Result<Vec<_>>>()?;
            if embed[v].replace(nb).is_some() {
                return Err(perr(ln, "vertex embedded twice"));
            }
            embed_line.get_or_insert(ln);
        } else if let Some(rest) = t.strip_prefix("e ") {
            edges.push(pair(ln, rest, &li, &ri)?);
        } else {
            return Err(perr(ln, format!("unexpected line `{t}`")));
        }
    }
    let g = at_line(BipartiteGraph::new(left, right, edges), last_line(text))?;
    match embed_line {
        None => Ok(g),
        Some(ln) => {
            let rot = embed.into_iter().map(Option::unwrap_or_default).collect();
            at_line(g.with_embedding(rot), ln)
        }
    }
}

pub fn write_graph(g: &BipartiteGraph) -> String {
    let mut out = String::new();
    let named = |ids: &[String], prefix: &str| ids.iter().enumerate().all(|(i, s)| *s == format!("{prefix}{i}"));
    for (key, ids, prefix) in [("left", g.left_ids(), "s"), ("right", g.right_ids(), "r")] {
        if named(ids, prefix) {
            writeln!(out, "{key} {}", ids.len()).unwrap();
        } else {
            writeln!(out, "{key} {} {}", ids.len(), ids.join(" ")).unwrap();
        }
    }
    for &(l, r) in g.edges() {
        writeln!(out, "e {} {}", g.left_ids()[l], g.right_ids()[r]).unwrap();
    }
    if let Some(rot) = g.embedding() {
        for (v, nb) in rot.iter().enumerate() {
            let names: Vec<&str> = nb.iter().map(|&w| g.name(w)).collect();
            writeln!(out, "embed {}: {}", g.name(v), names.join(" ")).unwrap();
        }
    }
    out
}

/// Reads a rotation system over `g`. Validity is not checked.
pub fn parse_rotation_system(text: &str, g: &BipartiteGraph) -> Result<RotationSystem> {
    #[derive(PartialEq)]
    enum Sec {
        None,
        Top,
        Bottom,
        Order,
    }
    let (li, ri) = (index_of(g.left_ids()), index_of(g.right_ids()));
    let mut sec = Sec::None;
    let (mut top, mut bottom, mut rotations, mut rel) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let order_pair = |ln: usize, t: &str| -> Result<(usize, usize)> {
        let f: Vec<&str> = t.split_whitespace().collect();
        match f.as_slice() {
            [a, "<", b] => match (a.parse(), b.parse()) {
                (Ok(a), Ok(b)) => Ok((a, b)),
                _ => Err(perr(ln, "order entries must be rotation indices")),
            },
            _ => Err(perr(ln, "expected `<i> < <j>`")),
        }
    };
    for (ln, t) in lines(text) {
        if t == "TOP" {
            sec = Sec::Top;
        } else if t == "BOTTOM" {
            sec = Sec::Bottom;
        } else if let Some(rest) = t.strip_prefix("ORDER:") {
            sec = Sec::Order;
            if !rest.trim().is_empty() {
                rel.push(order_pair(ln, rest)?);
            }
        } else if let Some(rest) = t.strip_prefix("ROTATION ") {
            sec = Sec::None;
            let (k, cyc) = rest
                .split_once(':')
                .ok_or_else(|| perr(ln, "expected `ROTATION <k>: <vertices>`"))?;
            if k.trim().parse::<usize>().ok() != Some(rotations.len()) {
                return Err(perr(ln, format!("rotations must be numbered 0, 1, ... (expected {})", rotations.len())));
            }
            let ids: Vec<&str> = cyc.split_whitespace().collect();
            let mut verts = Vec::with_capacity(ids.len());
            for (i, id) in ids.iter().enumerate() {
                let (map, what) = if i % 2 == 0 { (&li, "student") } else { (&ri, "residency") };
                verts.push(lookup(map, id, ln, what)?);
            }
            rotations.push(at_line(Rotation::from_vertex_cycle(&verts), ln)?);
        } else {
            match sec {
                Sec::Top => top.push(pair(ln, t, &li, &ri)?),
                Sec::Bottom => bottom.push(pair(ln, t, &li, &ri)?),
                Sec::Order => rel.push(order_pair(ln, t)?),
                Sec::None => return Err(perr(ln, format!("unexpected line `{t}`"))),
            }
        }
    }
    let end = last_line(text);
    let top = at_line(Matching::new(top), end)?;
    let bottom = at_line(Matching::new(bottom), end)?;
    at_line(RotationSystem::new(g.clone(), top, bottom, rotations, &rel), end)
}

pub fn write_rotation_system(rs: &RotationSystem) -> String {
    let g = rs.graph();
    let mut out = String::from("TOP\n");
    out += &write_matching(rs.top(), g.left_ids(), g.right_ids());
    out += "BOTTOM\n";
    out += &write_matching(rs.bottom(), g.left_ids(), g.right_ids());
    for (k, rot) in rs.rotations().iter().enumerate() {
        let names: Vec<&str> = rot
            .vertex_cycle()
            .iter()
            .enumerate()
            .map(|(i, &v)| if i % 2 == 0 { g.left_ids()[v].as_str() } else { g.right_ids()[v].as_str() })
            .collect();
        writeln!(out, "ROTATION {k}: {}", names.join(" ")).unwrap();
    }
    for (a, b) in rs.order().hasse() {
        writeln!(out, "ORDER: {a} < {b}").unwrap();
    }
    out
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut covers = Vec::new();
    for (ln, t) in lines(text) {
        let f: Vec<&str> = t.split_whitespace().collect();
        match f.as_slice() {
            ["elem", id] => {
                if !covers.is_empty() {
                    return Err(perr(ln, "`elem` lines must precede `cover` lines"));
                }
                if index.insert(id.to_string(), ids.len()).is_some() {
                    return Err(perr(ln, format!("element `{id}` declared twice")));
                }
                ids.push(id.to_string());
            }
            ["cover", a, b] => {
                let find = |x: &str| index.get(x).copied().ok_or_else(|| perr(ln, format!("unknown element `{x}`")));
                covers.push((find(a)?, find(b)?));
            }
            _ => return Err(perr(ln, format!("unexpected line `{t}`"))),
        }
    }
    at_line(Poset::new(ids, &covers), last_line(text))
}

pub fn write_poset(p: &Poset) -> String {
    let mut out = String::new();
    for id in p.ids() {
        writeln!(out, "elem {id}").unwrap();
    }
    for (a, b) in p.covers() {
        writeln!(out, "cover {} {}", p.ids()[a], p.ids()[b]).unwrap();
    }
    out
}

pub fn parse_nae(text: &str) -> Result<NaeFormula> {
    let mut declared = None;
    let mut f = NaeFormula::default();
    for (ln, t) in lines(text) {
        if t == "c" || t.starts_with("c ") {
            continue;
        }
        if let Some(rest) = t.strip_prefix("p ") {
            let h: Vec<&str> = rest.split_whitespace().collect();
            match h.as_slice() {
                ["nae", v, c] => match (v.parse::<usize>(), c.parse::<usize>()) {
                    (Ok(v), Ok(c)) if declared.is_none() && f.clauses.is_empty() => declared = Some((v, c, ln)),
                    _ => return Err(perr(ln, "bad problem line")),
                },
                _ => return Err(perr(ln, "expected `p nae <vars> <clauses>`")),
            }
            continue;
        }
        let mut lits = Vec::new();
        let mut ended = false;
        for w in t.split_whitespace() {
            let x: i64 = w.parse().map_err(|_| perr(ln, format!("bad literal `{w}`")))?;
            if ended {
                return Err(perr(ln, "text after the terminating 0"));
            }
            if x == 0 {
                ended = true;
                continue;
            }
            lits.push(NaeLiteral {
                var: (x.unsigned_abs() - 1) as usize,
                positive: x > 0,
            });
        }
        let clause: [NaeLiteral; 3] = lits
            .try_into()
            .map_err(|_| perr(ln, "a clause has exactly three literals"))?;
        for l in clause {
            f.num_vars = f.num_vars.max(l.var + 1);
        }
        f.clauses.push(clause);
    }
    if let Some((v, c, ln)) = declared {
        if f.num_vars > v {
            return Err(perr(ln, format!("clauses use variable {} beyond the declared {v}", f.num_vars)));
        }
        if f.clauses.len() != c {
            return Err(perr(ln, format!("declared {c} clauses, found {}", f.clauses.len())));
        }
        f.num_vars = v;
    }
    Ok(f)
}

pub fn write_nae(f: &NaeFormula) -> String {
    let mut out = format!("p nae {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        let lits: Vec<String> = c
            .iter()
            .map(|l| {
                let v = l.var as i64 + 1;
                (if l.positive { v } else { -v }).to_string()
            })
            .collect();
        writeln!(out, "{} 0", lits.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::even_cycle;
    use crate::realize::realize_grid;

    #[test]
    fn instance_round_trip() {
        let text = "# two by two\nstudents 2\nresidencies 2\na: x y\nb: y x\nx: b a\ny: a b\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.student_ids(), ["a", "b"]);
        assert_eq!(inst.residency_pref(0), [1, 0]);
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn instance_errors_carry_lines() {
        let e = parse_instance("students 1\nresidencies 1\na: z\nx: a\n").unwrap_err();
        assert_eq!(e, perr(3, "unknown residency `z`"));
        assert!(matches!(parse_instance("students x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_instance("students 1\nresidencies 0\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn graph_round_trip() {
        let g = even_cycle(6);
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        let named = parse_graph("left 2 a b\nright 1 x\ne b x\ne a x\n").unwrap();
        assert_eq!(named.edges(), [(0, 0), (1, 0)]);
        assert_eq!(parse_graph(&write_graph(&named)).unwrap(), named);
        let c4 = even_cycle(4);
        let emb = c4.clone().with_embedding((0..4).map(|v| c4.neighbors(v)).collect()).unwrap();
        let text = write_graph(&emb);
        assert!(text.contains("embed "));
        assert_eq!(parse_graph(&text).unwrap(), emb);
    }

    #[test]
    fn graph_errors() {
        assert!(matches!(parse_graph("left 1\nright 1\ne s0 r9\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("left 1\nright 1\nq\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("left 2 a\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_graph("left 1\nright 1\ne s0 r0\ne s0 r0\n"),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn matching_round_trip() {
        let g = even_cycle(4);
        let m = Matching::new(vec![(0, 1), (1, 0)]).unwrap();
        let text = write_matching(&m, g.left_ids(), g.right_ids());
        assert_eq!(parse_matching(&text, g.left_ids(), g.right_ids()).unwrap(), m);
    }

    #[test]
    fn rotation_system_round_trip() {
        for (a, b) in [(2, 2), (2, 5), (4, 4), (5, 4)] {
            let rs = realize_grid(a, b).unwrap().expect("realizable grid");
            let text = write_rotation_system(&rs);
            assert_eq!(parse_rotation_system(&text, rs.graph()).unwrap(), rs, "{a}x{b}");
        }
        let g = even_cycle(4);
        let bad = "TOP\ns0 r0\nROTATION 1: s0 r0 s1 r1\n";
        assert!(matches!(parse_rotation_system(bad, &g), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn poset_round_trip() {
        let p = parse_poset("elem a\nelem b\nelem c\ncover a b\ncover a c\n").unwrap();
        assert_eq!(p.covers(), [(0, 1), (0, 2)]);
        assert_eq!(parse_poset(&write_poset(&p)).unwrap(), p);
        assert!(matches!(parse_poset("elem a\ncover a a\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn nae_round_trip() {
        let f = parse_nae("c sample\np nae 4 2\n1 -2 3 0\n-4 2 1\n").unwrap();
        assert_eq!(f.num_vars, 4);
        assert_eq!(f.clauses[0][1], NaeLiteral { var: 1, positive: false });
        assert_eq!(parse_nae(&write_nae(&f)).unwrap(), f);
        assert!(matches!(parse_nae("1 2 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_nae("p nae 1 1\n1 2 3\n"), Err(Error::Parse { line: 1, .. })));
    }
}
