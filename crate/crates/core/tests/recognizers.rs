mod common;

use common::witness_round_trip;
use stablepairs::analysis::{enumerate_perfect_matchings, necessary_conditions};
use stablepairs::families::*;
use stablepairs::realize::{grid_decision, realize_grid, realize_outerplanar, realize_regular};
use stablepairs::recognize::{recognize, tree_decompose, Algorithm, Limits};
use stablepairs::BipartiteGraph;

const ALL: [Algorithm; 3] = [Algorithm::Oracle, Algorithm::Path, Algorithm::Dp];

fn decide(g: &BipartiteGraph) -> bool {
    let limits = Limits::default();
    let out: Vec<bool> = ALL
        .iter()
        .map(|&a| {
            let r = recognize(g, a, &limits).unwrap();
            if let Some(w) = &r.witness {
                assert!(witness_round_trip(w, 100_000).unwrap());
                assert_eq!(w.graph().edges(), g.edges());
            }
            r.realizable
        })
        .collect();
    assert!(out.iter().all(|&x| x == out[0]), "algorithms disagree: {out:?}");
    out[0]
}

#[test]
fn named_graphs() {
    assert!(decide(&even_cycle(4)));
    assert!(decide(&complete_bipartite(3, 3)));
    assert!(!decide(&k33_minus_e()));
    assert!(decide(&single_edge()));
    assert!(!decide(&path(3)));
    assert!(decide(&disjoint_union(&even_cycle(4), &even_cycle(4))));
    assert!(decide(&disjoint_union(&even_cycle(6), &single_edge())));
}

#[test]
fn figure_two_graphs() {
    let left = fig2_left();
    assert!(!decide(&left));
    let nc = necessary_conditions(&left);
    assert!(nc.matching_covered() && !nc.has_two_factor());
    let right = fig2_right();
    assert!(!decide(&right));
    let nc = necessary_conditions(&right);
    assert!(!nc.matching_covered() && nc.has_two_factor());
}

#[test]
fn k33_minus_e_passes_the_necessary_conditions() {
    let g = k33_minus_e();
    assert!(necessary_conditions(&g).all_pass());
    assert_eq!(enumerate_perfect_matchings(&g, 100).unwrap().len(), 4);
}

#[test]
fn small_grids_follow_the_table() {
    let limits = Limits::default();
    for a in 2..=4 {
        for b in a..=4 {
            let g = grid(a, b);
            let want = a * b % 2 == 0 && a.min(b) != 3;
            assert_eq!(grid_decision(a, b), want);
            let r = recognize(&g, Algorithm::Path, &limits).unwrap();
            assert_eq!(r.realizable, want, "{a}x{b}");
            match realize_grid(a, b).unwrap() {
                Some(w) => assert!(want && witness_round_trip(&w, 1_000_000).unwrap()),
                None => assert!(!want),
            }
        }
    }
}

#[test]
fn constructive_realizers_agree_with_recognizers() {
    let g = even_cycle(8);
    let rs = realize_outerplanar(&g).unwrap();
    assert!(witness_round_trip(&rs, 1000).unwrap());
    assert!(decide(&g));
    let k = complete_bipartite(3, 3);
    let inst = realize_regular(&k).unwrap();
    assert_eq!(inst.stable_pairs_graph().edges(), k.edges());
}

#[test]
fn tree_decompositions_are_good() {
    for g in all_small(7) {
        let td = tree_decompose(&g);
        assert!(td.audit(&g).is_empty());
    }
}

#[test]
fn guards_surface_as_resource_errors() {
    let limits = Limits {
        max_states: 1,
        ..Limits::default()
    };
    let g = complete_bipartite(3, 3);
    assert!(matches!(
        recognize(&g, Algorithm::Path, &limits),
        Err(stablepairs::Error::Resource { .. })
    ));
    let big = grid(4, 4);
    let small = Limits {
        oracle_max_edges: 10,
        ..Limits::default()
    };
    assert!(recognize(&big, Algorithm::Oracle, &small).is_err());
}
