//! Seeded benchmark generators with planted communities.
//!
//! * [`generate_gn`]: the four-group planted partition graph (Girvan-Newman),
//!   or any number of equal groups.
//! * [`generate_overlapping`]: an LFR-style graph with power-law degrees and
//!   community sizes, a mixing parameter and a controlled number of
//!   overlapping nodes.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{write_cover, Cover};
use crate::error::{Error, Result};
use crate::graph::{write_edge_list, Graph};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GnParams {
    pub groups: usize,
    pub group_size: usize,
    /// Expected total degree `z_in + z_out`.
    pub expected_degree: f64,
    /// Expected number of links to other groups.
    pub z_out: f64,
    pub seed: u64,
}

impl Default for GnParams {
    fn default() -> Self {
        Self {
            groups: 4,
            group_size: 32,
            expected_degree: 16.0,
            z_out: 0.0,
            seed: 0,
        }
    }
}

impl GnParams {
    pub fn z_in(&self) -> f64 {
        self.expected_degree - self.z_out
    }

    pub fn node_count(&self) -> usize {
        self.groups * self.group_size
    }

    /// `(p_in, p_out)` after validation.
    pub fn probabilities(&self) -> Result<(f64, f64)> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.groups == 0 || self.group_size < 2 {
            return bad(format!(
                "need at least one group of two nodes, got {} groups of {}",
                self.groups, self.group_size
            ));
        }
        if !(0.0..=self.expected_degree).contains(&self.z_out) {
            return bad(format!(
                "z_out must lie in [0, {}], got {}",
                self.expected_degree, self.z_out
            ));
        }
        let p_in = self.z_in() / (self.group_size - 1) as f64;
        let p_out = if self.groups > 1 {
            self.z_out / ((self.groups - 1) * self.group_size) as f64
        } else if self.z_out > 0.0 {
            return bad("z_out > 0 needs at least two groups".into());
        } else {
            0.0
        };
        if p_in > 1.0 || p_out > 1.0 {
            return bad(format!("edge probabilities exceed 1 (p_in = {p_in}, p_out = {p_out})"));
        }
        Ok((p_in, p_out))
    }
}

/// Planted partition graph: each intra-group pair is linked with probability
/// `p_in = z_in/(s-1)`, each inter-group pair with `p_out = z_out/((g-1)s)`.
pub fn generate_gn(p: &GnParams) -> Result<(Graph, Cover)> {
    let (p_in, p_out) = p.probabilities()?;
    let n = p.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let prob = if u / p.group_size == v / p.group_size {
                p_in
            } else {
                p_out
            };
            if rng.gen::<f64>() < prob {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::from_edges(n, edges)?;
    let truth = Cover::from_sets(
        n,
        (0..p.groups).map(|g| (g * p.group_size..(g + 1) * p.group_size).collect()),
    )?;
    Ok((graph, truth))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LfrParams {
    pub n: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
    pub c_min: usize,
    pub c_max: usize,
    /// Fraction of each node's edges leaving its communities.
    pub mu: f64,
    /// Number of nodes with more than one membership.
    pub overlap_nodes: usize,
    /// Memberships of each overlapping node.
    pub overlap_memberships: usize,
    /// Degree exponent: `P(k) ∝ k^tau1`.
    pub tau1: f64,
    /// Community-size exponent: `P(s) ∝ s^tau2`.
    pub tau2: f64,
    pub seed: u64,
}

impl Default for LfrParams {
    fn default() -> Self {
        Self {
            n: 1000,
            avg_degree: 20.0,
            max_degree: 50,
            c_min: 20,
            c_max: 100,
            mu: 0.1,
            overlap_nodes: 0,
            overlap_memberships: 2,
            tau1: -2.0,
            tau2: -1.0,
            seed: 0,
        }
    }
}

impl LfrParams {
    /// Defaults with `c_max = 5·c_min` and `max_degree = 2.5·avg_degree`.
    pub fn with(c_min: usize, mu: f64, overlap_nodes: usize, seed: u64) -> Self {
        Self {
            c_min,
            c_max: 5 * c_min,
            mu,
            overlap_nodes,
            seed,
            ..Self::default()
        }
    }

    pub fn min_degree(&self) -> usize {
        (self.avg_degree / 4.0).ceil() as usize
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_owned()));
        if self.n < 2 {
            return bad("n must be at least 2");
        }
        if !(self.c_min >= 2 && self.c_min <= self.c_max && self.c_max <= self.n) {
            return bad("need 2 <= c_min <= c_max <= n");
        }
        if !(0.0..1.0).contains(&self.mu) {
            return bad("mu must lie in [0, 1)");
        }
        if self.overlap_nodes > self.n {
            return bad("overlap_nodes exceeds n");
        }
        if self.overlap_memberships < 2 {
            return bad("overlap_memberships must be at least 2");
        }
        if self.avg_degree.is_nan() || self.avg_degree <= 0.0 || self.min_degree() > self.max_degree {
            return bad("average degree must be positive and max_degree >= ceil(avg_degree/4)");
        }
        if self.avg_degree > self.max_degree as f64 {
            return bad("average degree exceeds max_degree");
        }
        if self.max_degree >= self.n {
            return bad("max_degree must be below n");
        }
        Ok(())
    }
}

const MATCH_SWEEPS: usize = 100;

fn power_law(lo: usize, hi: usize, exponent: f64) -> WeightedIndex<f64> {
    WeightedIndex::new((lo..=hi).map(|k| (k as f64).powf(exponent))).expect("nonempty range")
}

/// Power-law degrees on `[k_min, d_max]`, stretched about `k_min` so the mean
/// comes out at `d`.
fn sample_degrees(p: &LfrParams, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let lo = p.min_degree();
    let law = power_law(lo, p.max_degree, p.tau1);
    let raw: Vec<f64> = (0..p.n).map(|_| (law.sample(rng) + lo) as f64).collect();
    let stretch = |f: f64| -> Vec<usize> {
        raw.iter()
            .map(|&k| {
                let x = (lo as f64 + f * (k - lo as f64)).round() as usize;
                x.clamp(lo, p.max_degree)
            })
            .collect()
    };
    let mean = |ks: &[usize]| ks.iter().sum::<usize>() as f64 / ks.len() as f64;
    let (mut a, mut b) = (0.0, 64.0);
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        if mean(&stretch(mid)) < p.avg_degree {
            a = mid;
        } else {
            b = mid;
        }
    }
    let lower = stretch(a);
    let upper = stretch(b);
    if (mean(&lower) - p.avg_degree).abs() <= (mean(&upper) - p.avg_degree).abs() {
        lower
    } else {
        upper
    }
}

fn sample_sizes(p: &LfrParams, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let needed = p.n + p.overlap_nodes * (p.overlap_memberships - 1);
    let law = power_law(p.c_min, p.c_max, p.tau2);
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < needed {
        let s = law.sample(rng) + p.c_min;
        sizes.push(s);
        total += s;
    }
    let last = sizes.pop().expect("at least one community");
    let mut remainder = needed - (total - last);
    if remainder >= p.c_min {
        sizes.push(remainder);
    } else {
        // too small to stand alone: spread over the others
        let mut i = 0;
        let mut stalled = 0;
        while remainder > 0 {
            if sizes.is_empty() || stalled > sizes.len() {
                return Err(Error::InvalidParameter(
                    "community sizes cannot absorb all memberships within c_max".into(),
                ));
            }
            let k = i % sizes.len();
            if sizes[k] < p.c_max {
                sizes[k] += 1;
                remainder -= 1;
                stalled = 0;
            } else {
                stalled += 1;
            }
            i += 1;
        }
    }
    if p.overlap_nodes > 0 && sizes.len() < p.overlap_memberships {
        return Err(Error::InvalidParameter(format!(
            "{} communities cannot host nodes with {} memberships",
            sizes.len(),
            p.overlap_memberships
        )));
    }
    Ok(sizes)
}

/// Fills communities to their sizes, larger internal demands first.
fn assign_memberships(
    p: &LfrParams,
    sizes: &[usize],
    slots: &[usize],
    need: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<usize>>> {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    let mut of: Vec<Vec<usize>> = vec![Vec::new(); p.n];
    let mut order: Vec<usize> = (0..p.n).collect();
    order.shuffle(rng);
    order.sort_by(|&a, &b| need[b].cmp(&need[a]));

    for v in order {
        for _ in 0..slots[v] {
            let open = |c: usize, strict: bool| {
                members[c].len() < sizes[c] && !of[v].contains(&c) && (!strict || sizes[c] > need[v])
            };
            let mut pick = None;
            for strict in [true, false] {
                let cands: Vec<usize> = (0..sizes.len()).filter(|&c| open(c, strict)).collect();
                if let Ok(&c) = cands.choose_weighted(rng, |&c| (sizes[c] - members[c].len()) as f64) {
                    pick = Some(c);
                    break;
                }
            }
            let c = match pick {
                Some(c) => c,
                None => swap_in(v, sizes, &mut members, &mut of, rng)?,
            };
            members[c].push(v);
            of[v].push(c);
        }
    }
    Ok(members)
}

/// Every community with room already holds `v`. Moves some `u` out of a
/// community `c2` that lacks `v` into the open community, freeing a slot in
/// `c2` for `v`. Returns `c2`.
fn swap_in(
    v: usize,
    sizes: &[usize],
    members: &mut [Vec<usize>],
    of: &mut [Vec<usize>],
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    let open = (0..sizes.len())
        .find(|&c| members[c].len() < sizes[c])
        .ok_or_else(|| Error::Generation("no community has room left".into()))?;
    let mut others: Vec<usize> = (0..sizes.len()).filter(|c| !of[v].contains(c)).collect();
    others.shuffle(rng);
    for c2 in others {
        if let Some(pos) = members[c2].iter().position(|u| !of[*u].contains(&open)) {
            let u = members[c2].swap_remove(pos);
            of[u].retain(|&c| c != c2);
            of[u].push(open);
            members[open].push(u);
            return Ok(c2);
        }
    }
    Err(Error::Generation(format!(
        "could not place node {v} in a further community"
    )))
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Pairs up `stubs` into new edges.
///
/// A first random pairing keeps the valid pairs. Each following sweep pairs
/// leftover stubs directly where possible, and otherwise lets a leftover stub
/// `u` take over one end of an existing edge `(a, b)`, leaving `b` with the
/// free stub.
fn match_stubs<F>(
    mut pending: Vec<usize>,
    valid: F,
    edges: &mut HashSet<(usize, usize)>,
    rng: &mut ChaCha8Rng,
    what: &str,
) -> Result<Vec<(usize, usize)>>
where
    F: Fn(usize, usize) -> bool,
{
    let mut made: Vec<(usize, usize)> = Vec::new();
    pending.shuffle(rng);
    let mut rest = Vec::new();
    for pair in pending.chunks(2) {
        let (u, v) = (pair[0], pair[1]);
        if valid(u, v) && edges.insert(key(u, v)) {
            made.push(key(u, v));
        } else {
            rest.extend([u, v]);
        }
    }
    pending = rest;

    for _ in 0..MATCH_SWEEPS {
        pending.shuffle(rng);
        let mut rest = Vec::new();
        while let Some(u) = pending.pop() {
            match pending
                .iter()
                .rposition(|&v| valid(u, v) && !edges.contains(&key(u, v)))
            {
                Some(j) => {
                    let v = pending.swap_remove(j);
                    edges.insert(key(u, v));
                    made.push(key(u, v));
                }
                None => rest.push(u),
            }
        }
        if rest.is_empty() {
            return Ok(made);
        }
        if made.is_empty() {
            break;
        }
        for u in rest.iter_mut() {
            let start = rng.gen_range(0..made.len());
            for t in 0..made.len() {
                let i = (start + t) % made.len();
                let (mut a, mut b) = made[i];
                if rng.gen::<bool>() {
                    std::mem::swap(&mut a, &mut b);
                }
                if valid(*u, a) && !edges.contains(&key(*u, a)) {
                    edges.remove(&made[i]);
                    made[i] = key(*u, a);
                    edges.insert(made[i]);
                    *u = b;
                    break;
                }
            }
        }
        pending = rest;
    }
    Err(Error::Generation(format!(
        "{what}: {} stubs left unmatched after {MATCH_SWEEPS} sweeps",
        pending.len()
    )))
}

/// Erdős–Gallai test.
fn graphical(degrees: &[usize]) -> bool {
    let mut d = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    if d.iter().sum::<usize>() % 2 == 1 {
        return false;
    }
    let mut prefix = 0;
    for k in 1..=d.len() {
        prefix += d[k - 1];
        let tail: usize = d[k..].iter().map(|&x| x.min(k)).sum();
        if prefix > k * (k - 1) + tail {
            return false;
        }
    }
    true
}

/// Builds a simple graph with the given (graphical) degrees on `nodes`, then
/// randomises it with degree-preserving swaps. Pairs already present in
/// `edges` are skipped.
fn havel_hakimi(
    nodes: &[usize],
    degrees: &[usize],
    edges: &mut HashSet<(usize, usize)>,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, usize)> {
    let mut left: Vec<(usize, usize)> = nodes.iter().copied().zip(degrees.iter().copied()).collect();
    left.shuffle(rng);
    let mut made = Vec::new();
    loop {
        left.sort_by_key(|x| std::cmp::Reverse(x.1));
        let Some(&(u, k)) = left.first() else { break };
        if k == 0 {
            break;
        }
        left[0].1 = 0;
        for entry in left.iter_mut().skip(1).take(k) {
            entry.1 = entry.1.saturating_sub(1);
            if edges.insert(key(u, entry.0)) {
                made.push(key(u, entry.0));
            }
        }
    }
    for _ in 0..10 * made.len() {
        let i = rng.gen_range(0..made.len());
        let j = rng.gen_range(0..made.len());
        let ((a, b), (c, d)) = (made[i], made[j]);
        let (e1, e2) = (key(a, d), key(c, b));
        if a == d || c == b || e1 == e2 || edges.contains(&e1) || edges.contains(&e2) {
            continue;
        }
        edges.remove(&made[i]);
        edges.remove(&made[j]);
        edges.insert(e1);
        edges.insert(e2);
        made[i] = e1;
        made[j] = e2;
    }
    made
}

/// LFR-style overlapping benchmark.
pub fn generate_overlapping(p: &LfrParams) -> Result<(Graph, Cover)> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let degree = sample_degrees(p, &mut rng);
    let sizes = sample_sizes(p, &mut rng)?;

    let mut slots = vec![1usize; p.n];
    for v in index::sample(&mut rng, p.n, p.overlap_nodes) {
        slots[v] = p.overlap_memberships;
    }
    let external: Vec<usize> = degree.iter().map(|&k| (p.mu * k as f64).round() as usize).collect();
    let need: Vec<usize> = (0..p.n).map(|v| (degree[v] - external[v]).div_ceil(slots[v])).collect();
    let members = assign_memberships(p, &sizes, &slots, &need, &mut rng)?;
    let mut of: Vec<Vec<usize>> = vec![Vec::new(); p.n];
    for (c, ms) in members.iter().enumerate() {
        for &v in ms {
            of[v].push(c);
        }
    }

    // internal stubs per (node, membership); excess over the community size is dropped
    let mut internal: Vec<Vec<usize>> = vec![Vec::new(); p.n];
    for v in 0..p.n {
        let k_in = degree[v] - external[v];
        let m = of[v].len();
        for (j, &c) in of[v].iter().enumerate() {
            let share = k_in / m + usize::from(j < k_in % m);
            internal[v].push(share.min(sizes[c] - 1));
        }
    }

    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    let mut all = Vec::new();
    for (c, ms) in members.iter().enumerate() {
        let mut want: Vec<usize> = ms
            .iter()
            .map(|&v| {
                let j = of[v].iter().position(|&x| x == c).expect("membership recorded");
                internal[v][j]
            })
            .collect();
        // trim the largest demands until a simple graph can realise them
        while !graphical(&want) {
            let i = (0..want.len())
                .max_by_key(|&i| (want[i], std::cmp::Reverse(i)))
                .expect("nonempty community");
            want[i] -= 1;
        }
        let stubs: Vec<usize> = ms
            .iter()
            .zip(&want)
            .flat_map(|(&v, &k)| std::iter::repeat_n(v, k))
            .collect();
        let mut trial = edges.clone();
        match match_stubs(stubs, |u, v| u != v, &mut trial, &mut rng, &format!("community {c}")) {
            Ok(found) => {
                edges = trial;
                all.extend(found);
            }
            Err(_) => all.extend(havel_hakimi(ms, &want, &mut edges, &mut rng)),
        }
    }

    let shares = |u: usize, v: usize| of[u].iter().any(|c| of[v].contains(c));
    let mut stubs: Vec<usize> = (0..p.n).flat_map(|v| std::iter::repeat_n(v, external[v])).collect();
    if stubs.len() % 2 == 1 {
        stubs.pop();
    }
    let found = match_stubs(
        stubs,
        |u, v| u != v && !shares(u, v),
        &mut edges,
        &mut rng,
        "external links",
    )?;
    all.extend(found);
    all.sort_unstable();

    let graph = Graph::from_edges(p.n, all)?;
    let truth = Cover::from_sets(p.n, members)?;
    Ok((graph, truth))
}

/// Writes `<prefix>.edges` and `<prefix>.cover` and returns both paths.
pub fn write_benchmark(graph: &Graph, truth: &Cover, prefix: &Path) -> Result<(PathBuf, PathBuf)> {
    let with_ext = |ext: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(ext);
        PathBuf::from(s)
    };
    let edge_path = with_ext(".edges");
    let cover_path = with_ext(".cover");
    let mut out = BufWriter::new(File::create(&edge_path)?);
    write_edge_list(graph, &mut out)?;
    out.flush()?;
    let mut out = BufWriter::new(File::create(&cover_path)?);
    write_cover(truth, graph, &[], &mut out)?;
    out.flush()?;
    Ok((edge_path, cover_path))
}
