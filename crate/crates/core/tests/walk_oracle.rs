#![allow(clippy::needless_range_loop)]

mod common;

use proptest::prelude::*;
use ueoc::bench::{generate_gn, GnParams};
use ueoc::walk::{
    annealed_term, constrained_step, dense_transition_matrix, run_walk, transition_step, ProbabilityVector, WalkConfig,
    WalkMode, Walker,
};
use ueoc::Graph;

/// Literal matrices: `P = D⁻¹A`, `B_ij = d_i d_j / Σd`, `Q_ij = B_ij / Σ_k B_ik`.
struct Literal {
    p: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
    d: Vec<f64>,
}

impl Literal {
    fn new(g: &Graph) -> Self {
        let n = g.node_count();
        let d: Vec<f64> = g.degrees().map(|x| x as f64).collect();
        let total: f64 = d.iter().sum();
        let mut p = vec![vec![0.0; n]; n];
        for r in 0..n {
            for i in 0..n {
                if g.has_edge(r, i) {
                    p[r][i] = 1.0 / d[r];
                }
            }
        }
        let b: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| d[i] * d[j] / total).collect()).collect();
        let q = b
            .iter()
            .map(|row| {
                let s: f64 = row.iter().sum();
                row.iter().map(|x| x / s).collect()
            })
            .collect();
        Self { p, q, d }
    }

    fn annealed(&self, v: &[f64], i: usize) -> f64 {
        (0..v.len()).map(|r| v[r] * self.q[r][i]).sum()
    }

    /// Vectors after each of `steps` steps from `δ(s)` (index 0 is `δ(s)`).
    fn walk(&self, s: usize, mode: WalkMode, steps: usize) -> Vec<Vec<f64>> {
        let n = self.d.len();
        let mut v = vec![0.0; n];
        v[s] = 1.0;
        let mut out = vec![v.clone()];
        for _ in 0..steps {
            let mut w: Vec<f64> = (0..n).map(|i| (0..n).map(|r| v[r] * self.p[r][i]).sum()).collect();
            if mode != WalkMode::Unconstrained {
                for i in 0..n {
                    w[i] = (w[i] - self.annealed(&v, i)).max(0.0);
                }
                let s: f64 = w.iter().sum();
                if s == 0.0 {
                    w = v.clone();
                } else {
                    w.iter_mut().for_each(|x| *x /= s);
                }
            }
            v = w;
            out.push(v.clone());
        }
        if mode == WalkMode::DegreeCorrected {
            for v in &mut out {
                let mut s = 0.0;
                for i in 0..n {
                    v[i] /= self.d[i];
                    s += v[i];
                }
                v.iter_mut().for_each(|x| *x /= s);
            }
        }
        out
    }
}

fn exhaustive(cfg_steps: usize, mode: WalkMode) -> WalkConfig {
    WalkConfig {
        max_steps: cfg_steps,
        convergence_tol: f64::MIN_POSITIVE,
        mode,
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn karate_three_steps_match_matrix_power() {
    let k = common::fixture("karate");
    let lit = Literal::new(&k.graph);
    let want = &lit.walk(0, WalkMode::Unconstrained, 3)[3];
    let got = run_walk(&k.graph, 0, &exhaustive(3, WalkMode::Unconstrained)).unwrap();
    assert!(max_diff(&got.vector.to_dense(), want) < 1e-12);
}

#[test]
fn karate_all_modes_match_literal_oracle() {
    let k = common::fixture("karate");
    let lit = Literal::new(&k.graph);
    for mode in [
        WalkMode::Unconstrained,
        WalkMode::Constrained,
        WalkMode::DegreeCorrected,
    ] {
        for s in 0..k.graph.node_count() {
            let want = lit.walk(s, mode, 20);
            for l in [1, 2, 5, 13, 20] {
                let got = run_walk(&k.graph, s, &exhaustive(l, mode)).unwrap();
                assert!(
                    max_diff(&got.vector.to_dense(), &want[l]) < 1e-12,
                    "mode {mode:?} seed {s} l {l}"
                );
            }
        }
    }
}

#[test]
fn dense_matrix_matches_literal_oracle() {
    let mut rng = common::rng(17);
    for _ in 0..10 {
        let g = common::small_random_graph(&mut rng, 24);
        let lit = Literal::new(&g);
        for mode in [
            WalkMode::Unconstrained,
            WalkMode::Constrained,
            WalkMode::DegreeCorrected,
        ] {
            let m = dense_transition_matrix(&g, mode, 7).unwrap();
            for s in 0..g.node_count() {
                let row: Vec<f64> = m.row(s).iter().copied().collect();
                assert!(max_diff(&row, &lit.walk(s, mode, 7)[7]) < 1e-12);
            }
        }
    }
}

#[test]
fn annealed_term_matches_literal_double_sum() {
    let mut rng = common::rng(3);
    for _ in 0..20 {
        let g = common::small_random_graph(&mut rng, 60);
        let lit = Literal::new(&g);
        let dense = common::random_distribution(&mut rng, g.node_count());
        let v = ProbabilityVector::from_dense(&dense).unwrap();
        for i in 0..g.node_count() {
            assert!((annealed_term(&g, &v, i) - lit.annealed(&dense, i)).abs() < 1e-12);
            let closed = g.degree(i).unwrap() as f64 / g.total_degree() as f64;
            assert!((annealed_term(&g, &v, i) - closed).abs() < 1e-12);
        }
    }
}

#[test]
fn bridged_cliques_first_step_stays_near_clique() {
    let g = common::bridged_cliques();
    let w = constrained_step(&g, &ProbabilityVector::delta(8, 3)).unwrap();
    for &(i, _) in w.entries() {
        assert!(i <= 4, "node {i} outside the closed neighbourhood of 3");
    }
    // the bridge partner keeps positive mass: 1/4 - 4/26 > 0
    // surviving mass before renormalising: 3(1/4 - 3/26) + (1/4 - 4/26) = 1/2
    assert!((w.get(4) - (0.25 - 4.0 / 26.0) / 0.5).abs() < 1e-12);
}

fn stationarity_deviation(g: &Graph, l: usize) -> f64 {
    let m = dense_transition_matrix(g, WalkMode::Unconstrained, l).unwrap();
    let two_m = g.total_degree() as f64;
    let n = g.node_count();
    let mut dev: f64 = 0.0;
    for r in 0..n {
        for j in 0..n {
            dev = dev.max((m[(r, j)] - g.degree(j).unwrap() as f64 / two_m).abs());
        }
    }
    dev
}

#[test]
fn unconstrained_rows_reach_stationarity() {
    for name in ["karate", "football"] {
        let g = common::fixture(name).graph;
        let spec = ueoc::laplacian_spectrum(&g).unwrap();
        assert!(!spec.has_bipartite_component());
        let ev = spec.eigenvalues();
        let rho = (1.0 - ev[1]).abs().max((1.0 - ev[ev.len() - 1]).abs());
        let (dmin, dmax) = (g.degrees().min().unwrap() as f64, g.degrees().max().unwrap() as f64);
        let l = (10.0 * spec.inverse_spectral_gap().unwrap()).ceil() as usize + 1;
        let dev = stationarity_deviation(&g, l);
        assert!(dev <= (dmax / dmin).sqrt() * rho.powi(l as i32), "{name}: {dev}");
        if name == "football" {
            assert!(dev < 1e-6);
        }
        let l = (20.0 * spec.inverse_spectral_gap().unwrap()).ceil() as usize + 1;
        assert!(stationarity_deviation(&g, l) < 1e-6, "{name}");
    }
}

#[test]
fn constrained_matrix_is_block_structured_on_planted_partition() {
    for seed in 0..3 {
        let (g, _) = generate_gn(&GnParams {
            z_out: 2.0,
            seed,
            ..GnParams::default()
        })
        .unwrap();
        let m = dense_transition_matrix(&g, WalkMode::Constrained, 20).unwrap();
        let (mut outside, mut zero) = (0, 0);
        for r in 0..128 {
            for j in 0..128 {
                if r / 32 != j / 32 {
                    outside += 1;
                    zero += usize::from(m[(r, j)] == 0.0);
                }
            }
        }
        assert!(zero as f64 >= 0.95 * outside as f64, "{zero}/{outside}");
    }
}

#[test]
fn early_exit_agrees_with_full_run() {
    // a regular-ish graph converges quickly under the unconstrained chain
    let g = common::complete(6);
    let mut cfg = WalkConfig {
        mode: WalkMode::Unconstrained,
        ..WalkConfig::with_steps(200)
    };
    let early = run_walk(&g, 0, &cfg).unwrap();
    assert!(early.steps_taken < 200);
    cfg.convergence_tol = f64::MIN_POSITIVE;
    let full = run_walk(&g, 0, &cfg).unwrap();
    assert!(early.vector.distance(&full.vector) < 1e-9);
}

fn graph_from(n: usize, pairs: &[(usize, usize)]) -> Graph {
    let mut edges: Vec<(usize, usize)> = pairs.iter().copied().filter(|(u, v)| u != v).collect();
    let mut deg = vec![0; n];
    for &(u, v) in &edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    for u in 0..n {
        if deg[u] == 0 {
            edges.push((u, (u + 1) % n));
            deg[(u + 1) % n] += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..30)
        .prop_flat_map(|n| prop::collection::vec((0..n, 0..n), 1..(3 * n)).prop_map(move |pairs| graph_from(n, &pairs)))
}

proptest! {
    #[test]
    fn walk_conserves_mass_and_stays_nonnegative(g in arb_graph(), seed in any::<prop::sample::Index>()) {
        let s = seed.index(g.node_count());
        for mode in [WalkMode::Unconstrained, WalkMode::Constrained] {
            let mut w = Walker::new(&g, s, mode).unwrap();
            for _ in 0..20 {
                if w.advance().is_none() {
                    break;
                }
                let v = w.current();
                prop_assert!((v.sum() - 1.0).abs() < 1e-9);
                prop_assert!(v.entries().iter().all(|&(_, p)| p > 0.0));
            }
        }
    }

    #[test]
    fn early_exit_within_tolerance_of_full_run(g in arb_graph(), seed in any::<prop::sample::Index>()) {
        let s = seed.index(g.node_count());
        for mode in [WalkMode::Unconstrained, WalkMode::Constrained, WalkMode::DegreeCorrected] {
            let early = run_walk(&g, s, &WalkConfig { mode, ..WalkConfig::default() }).unwrap();
            let full = run_walk(&g, s, &exhaustive(20, mode)).unwrap();
            prop_assert!(early.vector.distance(&full.vector) < 1e-9);
        }
    }

    #[test]
    fn unconstrained_step_preserves_sum(g in arb_graph(), seed in any::<prop::sample::Index>()) {
        let s = seed.index(g.node_count());
        let w = transition_step(&g, &ProbabilityVector::delta(g.node_count(), s));
        prop_assert!((w.sum() - 1.0).abs() < 1e-12);
        prop_assert_eq!(w.support_len(), g.neighbors(s).len());
    }
}
