mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use ueoc::bench::{generate_gn, generate_overlapping, GnParams, LfrParams};
use ueoc::detect::{
    cutoff_average, detect_cover_traced, extract_community, full_ranking, structural_similarity, sweep_profile,
    unfold_community, RankedNodeList,
};
use ueoc::metrics::cut_stats;
use ueoc::spectral::convergence_trace;
use ueoc::walk::{run_walk, ProbabilityVector, WalkMode};
use ueoc::{conductance, detect_cover, Graph, WalkConfig};

#[test]
fn incremental_sweep_matches_recount() {
    let mut rng = common::rng(5);
    for _ in 0..200 {
        let g = common::small_random_graph(&mut rng, 50);
        let mut order: Vec<usize> = (0..g.node_count()).collect();
        order.shuffle(&mut rng);
        let k = rng.gen_range(1..=order.len());
        let profile = sweep_profile(&g, &order[..k]);
        for (i, stats) in profile.iter().enumerate() {
            assert_eq!(*stats, cut_stats(&g, &order[..=i]).unwrap());
        }
    }
}

#[test]
fn extraction_is_the_global_minimum() {
    let mut rng = common::rng(9);
    for _ in 0..100 {
        let g = common::small_random_graph(&mut rng, 40);
        let n = g.node_count();
        let dense = common::random_distribution(&mut rng, n);
        let ranked = RankedNodeList::from_vector(&ProbabilityVector::from_dense(&dense).unwrap());
        let ex = extract_community(&g, &ranked).unwrap();
        let order = ranked.nodes();
        let limit = order.len().min(n - 1).max(1);
        let mut best = f64::INFINITY;
        let mut best_k = 0;
        for k in 1..=limit {
            if let Ok(phi) = conductance(&g, &order[..k]) {
                if phi < best {
                    best = phi;
                    best_k = k;
                }
            }
        }
        if best_k > 0 {
            assert_eq!(ex.cut, best_k);
            assert_eq!(ex.community.conductance, Some(best));
        }
    }
}

#[test]
fn bridged_cliques_extract_each_clique() {
    let g = common::bridged_cliques();
    let u = unfold_community(&g, 3, &WalkConfig::default()).unwrap();
    let ex = extract_community(&g, &u.ranked).unwrap();
    assert_eq!(ex.community.members(), &[0, 1, 2, 3]);
    assert_eq!(ex.community.conductance, Some(1.0 / 13.0));
    let cover = detect_cover(&g, &WalkConfig::default()).unwrap();
    let sets: Vec<&[usize]> = cover.communities().iter().map(|c| c.members()).collect();
    assert_eq!(sets, vec![&[0, 1, 2, 3][..], &[4, 5, 6, 7][..]]);
}

/// On two 4-cliques sharing node 3 the constrained walk from 3 alternates
/// between δ(3) and a spread over the other six nodes, so the l = 20 vector
/// is δ(3). The remaining nodes split into the two triangles.
#[test]
fn cliques_sharing_a_node_split_around_it() {
    let g = common::cliques_sharing_node();
    let cover = detect_cover(&g, &WalkConfig::default()).unwrap();
    let sets: Vec<&[usize]> = cover.communities().iter().map(|c| c.members()).collect();
    assert_eq!(sets, vec![&[3][..], &[0, 1, 2][..], &[4, 5, 6][..]]);
    // {0,1,2} and {0,1,2,3} tie on conductance; the shorter prefix wins
    assert_eq!(
        conductance(&g, &[0, 1, 2]).unwrap(),
        conductance(&g, &[0, 1, 2, 3]).unwrap()
    );
}

#[test]
fn complete_graph_walk_has_period_two() {
    for n in [3, 5, 8] {
        let g = common::complete(n);
        let trace = convergence_trace(&g, 0, &WalkConfig::with_steps(6)).unwrap();
        for p in &trace {
            assert_eq!(p.support, if p.step % 2 == 1 { n - 1 } else { 1 });
            assert_eq!(p.rank_delta, n);
        }
        let out = run_walk(&g, 0, &WalkConfig::default()).unwrap();
        assert_eq!(out.vector, ProbabilityVector::delta(n, 0));
        let cover = detect_cover(&g, &WalkConfig::default()).unwrap();
        assert_eq!(cover.len(), n);
        let odd = run_walk(&g, 0, &WalkConfig::with_steps(21)).unwrap();
        assert_eq!(
            RankedNodeList::from_vector(&odd.vector).nodes(),
            (1..n).collect::<Vec<_>>()
        );
    }
}

#[test]
fn planted_group_fills_top_ranks() {
    let mut hits = 0;
    for seed in 0..10u64 {
        let (g, _) = generate_gn(&GnParams {
            z_out: 2.0,
            seed,
            ..GnParams::default()
        })
        .unwrap();
        let s = (seed as usize * 37) % 128;
        let u = unfold_community(&g, s, &WalkConfig::default()).unwrap();
        let top: Vec<usize> = u.ranked.nodes().into_iter().take(32).collect();
        if top.len() == 32 && top.iter().all(|&v| v / 32 == s / 32) {
            hits += 1;
        }
    }
    assert!(hits >= 9, "{hits}/10");
}

#[test]
fn constrained_support_stays_in_planted_group() {
    for z_out in [1.0, 2.0, 3.0, 4.0] {
        let mut stray = 0usize;
        let mut seeds = 0usize;
        for seed in 0..10u64 {
            let (g, _) = generate_gn(&GnParams {
                z_out,
                seed,
                ..GnParams::default()
            })
            .unwrap();
            for s in [0, 45, 90, 127] {
                let cfg = WalkConfig {
                    mode: WalkMode::Constrained,
                    ..WalkConfig::default()
                };
                let v = run_walk(&g, s, &cfg).unwrap().vector;
                stray += v.entries().iter().filter(|&&(i, _)| i / 32 != s / 32).count();
                seeds += 1;
            }
        }
        let per_seed = stray as f64 / seeds as f64;
        assert!(
            per_seed <= 0.05 * 32.0,
            "z_out {z_out}: {per_seed} stray nodes per seed"
        );
    }
}

#[test]
fn minimum_conductance_beats_average_cutoff() {
    let (mut sweep, mut average) = (0.0, 0.0);
    for seed in 0..20 {
        let (g, truth) = generate_overlapping(&LfrParams::with(20, 0.1, 0, seed)).unwrap();
        let s = g.max_degree_node().unwrap();
        let planted = truth.communities()[truth.assignment()[s][0]].members();
        let u = unfold_community(&g, s, &WalkConfig::default()).unwrap();
        sweep += structural_similarity(extract_community(&g, &u.ranked).unwrap().community.members(), planted).unwrap();
        average += structural_similarity(&cutoff_average(&g, &u.ranked).unwrap(), planted).unwrap();
    }
    assert!(sweep >= average, "{sweep} < {average}");
}

#[test]
fn similarity_hand_value() {
    let a = [0, 1, 2, 3];
    let b = [1, 2, 3, 10, 11, 12, 13, 14, 15];
    assert_eq!(structural_similarity(&a, &b).unwrap(), 0.5);
}

#[test]
fn karate_cover_is_full_and_deterministic() {
    let k = common::fixture("karate");
    let a = detect_cover_traced(&k.graph, &WalkConfig::default()).unwrap();
    let b = detect_cover_traced(&k.graph, &WalkConfig::default()).unwrap();
    assert!(a.cover.is_full());
    assert_eq!(a.cover, b.cover);
    assert_eq!(a.traces[0].seed, k.graph.max_degree_node().unwrap());
    for (c, t) in a.cover.communities().iter().zip(&a.traces) {
        assert!(c.contains(t.seed));
    }
}

fn graph_from(n: usize, pairs: &[(usize, usize)]) -> Graph {
    let edges: Vec<(usize, usize)> = pairs.iter().copied().filter(|(u, v)| u != v).collect();
    Graph::from_edges(n, edges).unwrap()
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..40)
        .prop_flat_map(|n| prop::collection::vec((0..n, 0..n), 1..(3 * n)).prop_map(move |pairs| graph_from(n, &pairs)))
}

proptest! {
    #[test]
    fn cover_is_full_and_seeded(g in arb_graph()) {
        let d = detect_cover_traced(&g, &WalkConfig::default()).unwrap();
        prop_assert!(d.cover.is_full());
        prop_assert!(d.traces.len() <= g.node_count());
        let degrees: Vec<usize> = g.degrees().collect();
        let mut covered = vec![false; g.node_count()];
        for (c, t) in d.cover.communities().iter().zip(&d.traces) {
            prop_assert!(!covered[t.seed]);
            prop_assert!(c.contains(t.seed));
            // the seed has maximum degree among nodes not yet covered
            for v in 0..g.node_count() {
                if !covered[v] && degrees[v] > 0 {
                    prop_assert!(degrees[v] < degrees[t.seed] || (degrees[v] == degrees[t.seed] && v >= t.seed));
                }
            }
            for &v in c.members() {
                covered[v] = true;
            }
        }
    }

    #[test]
    fn ranking_order_is_total(dense in prop::collection::vec(0.0f64..1.0, 1..40)) {
        prop_assume!(dense.iter().any(|&x| x > 0.0));
        let v = ProbabilityVector::from_dense(&dense).unwrap();
        let r = RankedNodeList::from_vector(&v);
        for w in r.entries().windows(2) {
            prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
        }
        prop_assert!(r.entries().iter().all(|&(_, p)| p > 0.0));
        let full = full_ranking(&v);
        prop_assert_eq!(full.len(), dense.len());
        prop_assert_eq!(&full[..r.len()], &r.nodes()[..]);
    }

    #[test]
    fn similarity_is_bounded_and_symmetric(
        a in prop::collection::vec(0usize..30, 1..20),
        b in prop::collection::vec(0usize..30, 1..20),
    ) {
        let x = structural_similarity(&a, &b).unwrap();
        prop_assert!((0.0..=1.0 + 1e-15).contains(&x));
        prop_assert_eq!(x, structural_similarity(&b, &a).unwrap());
    }
}
