mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stablepairs::analysis::{eq_deg_match, necessary_conditions};
use stablepairs::formats::*;
use stablepairs::realize::{nae3sat_graph, witness_from_assignment, NaeFormula, NaeWitness};
use stablepairs::recognize::{recognize, Algorithm, Limits};
use stablepairs::rotation::{matchings_of, rotation_poset, validate_rotation_system};
use stablepairs::{Instance, Side};

fn instance(seed: u64, ns: usize, nr: usize, density: f64) -> Instance {
    random_instance(&mut ChaCha8Rng::seed_from_u64(seed), ns, nr, density)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_brute_force(seed: u64, ns in 1usize..=5, nr in 1usize..=5, d in 0.3f64..1.0) {
        let inst = instance(seed, ns, nr, d);
        let fast = inst.enumerate_stable_matchings(100_000).unwrap();
        let slow = inst.enumerate_stable_matchings_brute(1_000_000).unwrap();
        prop_assert_eq!(&fast, &slow);
        for m in &fast {
            prop_assert!(inst.is_stable(m).unwrap().stable);
        }
    }

    #[test]
    fn rural_hospitals(seed: u64, ns in 1usize..=6, nr in 1usize..=6, d in 0.3f64..1.0) {
        let inst = instance(seed, ns, nr, d);
        let ms = inst.enumerate_stable_matchings(100_000).unwrap();
        let covered = ms[0].covered(ns);
        for m in &ms {
            prop_assert_eq!(&m.covered(ns), &covered);
        }
    }

    #[test]
    fn extremes_bound_the_lattice(seed: u64, n in 1usize..=6, d in 0.3f64..1.0) {
        let inst = instance(seed, n, n, d);
        let lo = inst.gale_shapley(Side::Students);
        let hi = inst.gale_shapley(Side::Residencies);
        for m in inst.enumerate_stable_matchings(100_000).unwrap() {
            prop_assert!(inst.lattice_leq(&lo, &m) && inst.lattice_leq(&m, &hi));
            prop_assert_eq!(inst.lattice_join(&lo, &m).unwrap(), m.clone());
            prop_assert_eq!(inst.lattice_meet(&hi, &m).unwrap(), m);
        }
    }

    #[test]
    fn rotation_poset_is_a_witness(seed: u64, n in 1usize..=6, d in 0.3f64..1.0) {
        let inst = instance(seed, n, n, d);
        let rs = rotation_poset(&inst);
        prop_assert!(validate_rotation_system(&rs).is_valid());
        let sp = inst.stable_pairs_graph();
        prop_assert_eq!(rs.graph().edges(), sp.edges());
        let mut a = matchings_of(&rs, 100_000).unwrap();
        a.sort();
        prop_assert_eq!(a, inst.enumerate_stable_matchings_brute(1_000_000).unwrap());
        prop_assert!(witness_round_trip(&rs, 100_000).unwrap());
    }

    #[test]
    fn stable_pairs_graphs_are_recognized(seed: u64, n in 2usize..=5, d in 0.4f64..1.0) {
        let g = instance(seed, n, n, d).stable_pairs_graph();
        let limits = Limits::default();
        let w = recognize(&g, Algorithm::Path, &limits).unwrap();
        prop_assert!(w.realizable);
        prop_assert!(witness_round_trip(w.witness.as_ref().unwrap(), 100_000).unwrap());
        prop_assert!(necessary_conditions(&g).all_pass());
        if g.m() <= 12 {
            prop_assert!(recognize(&g, Algorithm::Oracle, &limits).unwrap().realizable);
        }
        if g.m() <= 16 {
            prop_assert!(recognize(&g, Algorithm::Dp, &limits).unwrap().realizable);
        }
    }

    #[test]
    fn recognizers_agree(seed: u64, n in 2usize..=4, layers in 1usize..=3, extra in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = random_matchable(&mut rng, n, layers);
        let mut edges = g.edges().to_vec();
        for _ in 0..extra {
            let e = (rng.gen_range(0..n), rng.gen_range(0..n));
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
        g = stablepairs::BipartiteGraph::from_edges(n, n, edges).unwrap();
        let limits = Limits::default();
        let o = recognize(&g, Algorithm::Oracle, &limits).unwrap();
        let p = recognize(&g, Algorithm::Path, &limits).unwrap();
        let d = recognize(&g, Algorithm::Dp, &limits).unwrap();
        prop_assert_eq!(o.realizable, p.realizable);
        prop_assert_eq!(o.realizable, d.realizable);
        for w in [o.witness, p.witness].into_iter().flatten() {
            prop_assert!(witness_round_trip(&w, 100_000).unwrap());
        }
    }

    #[test]
    fn eq_deg_witnesses(seed: u64, n in 2usize..=8, tries in 4usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_bounded_graph(&mut rng, n, n, tries, 3);
        let r = eq_deg_match(&g).unwrap();
        prop_assert_eq!(r.witness.is_some(), r.sufficient_holds);
        if let Some(w) = &r.witness {
            prop_assert!(witness_round_trip(w, 100_000).unwrap());
        }
        if !r.necessary_holds {
            prop_assert!(!recognize(&g, Algorithm::Path, &Limits::default()).unwrap().realizable);
        }
    }

    #[test]
    fn nae_planted_witnesses(seed: u64, vars in 1usize..=6, clauses in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, a) = NaeFormula::random_planted(vars, clauses, &mut rng);
        let (g, meta) = nae3sat_graph(&f).unwrap();
        prop_assert!(g.max_degree() <= 3);
        match witness_from_assignment(&g, &meta, &a).unwrap() {
            NaeWitness::System(rs) => prop_assert!(validate_rotation_system(&rs).is_valid()),
            NaeWitness::Violated { clause } => prop_assert!(false, "planted assignment violates {}", clause),
        }
        let equal = vec![true; f.num_vars];
        let violated = matches!(witness_from_assignment(&g, &meta, &equal).unwrap(), NaeWitness::Violated { .. });
        prop_assert_eq!(violated, f.violated_clause(&equal).is_some());
    }

    #[test]
    fn formats_round_trip(seed: u64, ns in 0usize..=6, nr in 0usize..=6, d in 0.0f64..1.0) {
        let inst = instance(seed, ns, nr, d);
        prop_assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst.clone());
        let g = inst.stable_pairs_graph();
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g.clone());
        let rs = rotation_poset(&inst);
        prop_assert_eq!(parse_rotation_system(&write_rotation_system(&rs), rs.graph()).unwrap(), rs);
        let m = inst.gale_shapley(Side::Students);
        let text = write_matching(&m, inst.student_ids(), inst.residency_ids());
        prop_assert_eq!(parse_matching(&text, inst.student_ids(), inst.residency_ids()).unwrap(), m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, _) = NaeFormula::random_planted(ns + 1, nr, &mut rng);
        prop_assert_eq!(parse_nae(&write_nae(&f)).unwrap(), f);
    }
}
