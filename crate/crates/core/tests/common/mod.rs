#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ueoc::{read_edge_list_file, Graph, LoadedGraph};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn fixture(name: &str) -> LoadedGraph {
    read_edge_list_file(data_path(&format!("{name}.txt"))).expect("bundled fixture")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) with every isolated node attached to a random partner.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    let mut degree = vec![0; n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
                degree[u] += 1;
                degree[v] += 1;
            }
        }
    }
    for u in 0..n {
        if degree[u] == 0 {
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            edges.push((u, v));
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
}

fn clique_edges(nodes: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            out.push((u, v));
        }
    }
    out
}

/// Two 4-cliques {0,1,2,3} and {3,4,5,6} sharing node 3.
pub fn cliques_sharing_node() -> Graph {
    let mut e = clique_edges(&[0, 1, 2, 3]);
    e.extend(clique_edges(&[3, 4, 5, 6]));
    Graph::from_edges(7, e).unwrap()
}

/// Two 4-cliques {0,1,2,3} and {4,5,6,7} joined by the edge 3-4.
pub fn bridged_cliques() -> Graph {
    let mut e = clique_edges(&[0, 1, 2, 3]);
    e.extend(clique_edges(&[4, 5, 6, 7]));
    e.push((3, 4));
    Graph::from_edges(8, e).unwrap()
}

/// Random (possibly disconnected) graph of 2..=max_n nodes without isolates.
pub fn small_random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(2..=max_n);
    let p = rng.gen_range(0.05..0.6);
    random_graph(rng, n, p)
}

/// Random probability vector over `n` nodes with roughly half the entries zero.
pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| if rng.gen::<bool>() { rng.gen::<f64>() } else { 0.0 })
        .collect();
    if v.iter().all(|&x| x == 0.0) {
        v[rng.gen_range(0..n)] = 1.0;
    }
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}
