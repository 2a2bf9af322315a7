//! Markov-chain iteration kernels.
//!
//! Three chains are supported:
//!
//! * the plain random walk, `w(i) = Σ_r v(r)·a_ri/d_r`;
//! * the constrained walk, which subtracts the walk on the degree-preserving
//!   null graph (`d_i/2m` per unit of mass), clips at zero and renormalises
//!   after every step;
//! * the constrained walk followed by a single division by degree
//!   ("degree-corrected"), applied once after the last step.
//!
//! The per-seed kernels are sparse: a step only touches the current support
//! and its neighbours. Every node outside that set would receive
//! `max(0 - d_i/2m, 0) = 0`, so skipping it is exact. The dense
//! [`dense_transition_matrix`] computes the same quantities with full
//! matrices and serves as a brute-force cross-check.

use std::io::Write;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default number of steps `l`.
pub const DEFAULT_STEPS: usize = 20;
/// Default early-exit threshold on the Euclidean distance between steps.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
/// Largest graph [`dense_transition_matrix`] accepts by default.
pub const DENSE_CAP: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WalkMode {
    Unconstrained,
    Constrained,
    DegreeCorrected,
}

impl WalkMode {
    fn constrained(self) -> bool {
        !matches!(self, WalkMode::Unconstrained)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkConfig {
    /// Hard cap on the number of steps.
    pub max_steps: usize,
    /// Stop once consecutive vectors are closer than this.
    pub convergence_tol: f64,
    pub mode: WalkMode,
}

impl Default for WalkConfig {
    fn default() -> Self {
        Self {
            max_steps: DEFAULT_STEPS,
            convergence_tol: DEFAULT_TOLERANCE,
            mode: WalkMode::DegreeCorrected,
        }
    }
}

impl WalkConfig {
    pub fn with_steps(max_steps: usize) -> Self {
        Self {
            max_steps,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.convergence_tol > 0.0 && self.convergence_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "convergence tolerance must be positive, got {}",
                self.convergence_tol
            )));
        }
        Ok(())
    }
}

/// Sparse nonnegative vector over the nodes of a graph.
///
/// Only strictly positive entries are stored, sorted by node.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    len: usize,
    entries: Vec<(usize, f64)>,
}

impl ProbabilityVector {
    /// All mass on `node`.
    pub fn delta(len: usize, node: usize) -> Self {
        assert!(node < len, "node {node} out of range for length {len}");
        Self {
            len,
            entries: vec![(node, 1.0)],
        }
    }

    /// Keeps the strictly positive entries of `values`.
    pub fn from_dense(values: &[f64]) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, &p) in values.iter().enumerate() {
            if p.is_nan() || p < 0.0 || !p.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "entry {i} is not a nonnegative finite number: {p}"
                )));
            }
            if p > 0.0 {
                entries.push((i, p));
            }
        }
        Ok(Self {
            len: values.len(),
            entries,
        })
    }

    /// Length of the underlying (dense) vector, i.e. the node count.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Positive entries, ascending by node.
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, node: usize) -> f64 {
        self.entries
            .binary_search_by_key(&node, |&(i, _)| i)
            .map(|k| self.entries[k].1)
            .unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|&(_, p)| p).sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.len];
        for &(i, p) in &self.entries {
            out[i] = p;
        }
        out
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = 0.0;
        while i < a.len() || j < b.len() {
            let diff = match (a.get(i), b.get(j)) {
                (Some(&(x, p)), Some(&(y, q))) if x == y => {
                    i += 1;
                    j += 1;
                    p - q
                }
                (Some(&(x, p)), Some(&(y, _))) if x < y => {
                    i += 1;
                    p
                }
                (Some(&(x, p)), None) => {
                    let _ = x;
                    i += 1;
                    p
                }
                (_, Some(&(_, q))) => {
                    j += 1;
                    q
                }
                (None, None) => unreachable!(),
            };
            acc += diff * diff;
        }
        acc.sqrt()
    }

    fn normalized(mut entries: Vec<(usize, f64)>, len: usize) -> Option<Self> {
        let total: f64 = entries.iter().map(|&(_, p)| p).sum();
        if total <= 0.0 {
            return None;
        }
        for e in &mut entries {
            e.1 /= total;
        }
        Some(Self { len, entries })
    }
}

/// Reusable buffers for the sparse gather.
struct Scratch {
    acc: Vec<f64>,
    mark: Vec<bool>,
    touched: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            acc: vec![0.0; n],
            mark: vec![false; n],
            touched: Vec::new(),
        }
    }

    /// One step of the chosen chain, without renormalisation.
    fn step(&mut self, graph: &Graph, v: &ProbabilityVector, constrained: bool) -> Vec<(usize, f64)> {
        for &(r, p) in v.entries() {
            let nbrs = graph.neighbors(r);
            let share = p / nbrs.len() as f64;
            for &i in nbrs {
                if !self.mark[i] {
                    self.mark[i] = true;
                    self.touched.push(i);
                }
                self.acc[i] += share;
            }
        }
        self.touched.sort_unstable();

        let null_scale = if constrained {
            v.sum() / graph.total_degree() as f64
        } else {
            0.0
        };
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let mut value = self.acc[i];
            if constrained {
                value -= graph.neighbors(i).len() as f64 * null_scale;
            }
            if value > 0.0 {
                out.push((i, value));
            }
            self.acc[i] = 0.0;
            self.mark[i] = false;
        }
        self.touched.clear();
        out
    }
}

/// One step of the plain random walk.
pub fn transition_step(graph: &Graph, v: &ProbabilityVector) -> ProbabilityVector {
    let entries = Scratch::new(graph.node_count()).step(graph, v, false);
    ProbabilityVector { len: v.len, entries }
}

/// `Σ_r v(r)·q_ri` on the null graph, where `q_ri = d_i/2m` for every `r`.
pub fn annealed_term(graph: &Graph, v: &ProbabilityVector, node: usize) -> f64 {
    graph.neighbors(node).len() as f64 / graph.total_degree() as f64 * v.sum()
}

/// One constrained step: subtract the null-graph walk, clip at zero and
/// renormalise. Fails with [`Error::AllZero`] if nothing survives the clip.
pub fn constrained_step(graph: &Graph, v: &ProbabilityVector) -> Result<ProbabilityVector> {
    let entries = Scratch::new(graph.node_count()).step(graph, v, true);
    ProbabilityVector::normalized(entries, v.len).ok_or(Error::AllZero)
}

/// Divides each entry by the node degree and renormalises.
pub fn degree_correct(graph: &Graph, v: &ProbabilityVector) -> ProbabilityVector {
    let entries = v
        .entries()
        .iter()
        .map(|&(i, p)| (i, p / graph.neighbors(i).len() as f64))
        .collect();
    ProbabilityVector::normalized(entries, v.len).unwrap_or_else(|| v.clone())
}

/// Steps a single walk forward, reusing its buffers.
pub struct Walker<'g> {
    graph: &'g Graph,
    constrained: bool,
    current: ProbabilityVector,
    scratch: Scratch,
    steps: usize,
}

impl<'g> Walker<'g> {
    /// Starts at `δ(seed)`. Constrained and degree-corrected modes iterate the
    /// same chain; the degree correction is left to the caller.
    pub fn new(graph: &'g Graph, seed: usize, mode: WalkMode) -> Result<Self> {
        graph.check(seed)?;
        if graph.neighbors(seed).is_empty() {
            return Err(Error::IsolatedSeed(seed));
        }
        Ok(Self {
            graph,
            constrained: mode.constrained(),
            current: ProbabilityVector::delta(graph.node_count(), seed),
            scratch: Scratch::new(graph.node_count()),
            steps: 0,
        })
    }

    /// Advances one step and returns the distance moved, or `None` if the
    /// constrained step clipped everything (the state is then left as is).
    pub fn advance(&mut self) -> Option<f64> {
        let raw = self.scratch.step(self.graph, &self.current, self.constrained);
        let next = if self.constrained {
            ProbabilityVector::normalized(raw, self.current.len)?
        } else {
            ProbabilityVector {
                len: self.current.len,
                entries: raw,
            }
        };
        let delta = next.distance(&self.current);
        self.current = next;
        self.steps += 1;
        Some(delta)
    }

    pub fn current(&self) -> &ProbabilityVector {
        &self.current
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn into_vector(self) -> ProbabilityVector {
        self.current
    }
}

/// Result of [`run_walk`].
#[derive(Clone, Debug)]
pub struct WalkOutcome {
    pub vector: ProbabilityVector,
    pub steps_taken: usize,
    /// Distance between consecutive iterates, one per step taken.
    pub deltas: Vec<f64>,
    /// The constrained step clipped everything; `vector` is the last
    /// nonzero state.
    pub stalled: bool,
}

/// Runs the configured chain from `δ(seed)`.
///
/// Stops after `max_steps` steps, when consecutive iterates are closer than
/// `convergence_tol`, or when a constrained step clips to all zeros.
pub fn run_walk(graph: &Graph, seed: usize, cfg: &WalkConfig) -> Result<WalkOutcome> {
    cfg.validate()?;
    let mut walker = Walker::new(graph, seed, cfg.mode)?;
    let mut deltas = Vec::new();
    let mut stalled = false;
    for _ in 0..cfg.max_steps {
        match walker.advance() {
            Some(delta) => {
                deltas.push(delta);
                if delta < cfg.convergence_tol {
                    break;
                }
            }
            None => {
                stalled = true;
                break;
            }
        }
    }
    let steps_taken = walker.steps();
    let mut vector = walker.into_vector();
    if cfg.mode == WalkMode::DegreeCorrected {
        vector = degree_correct(graph, &vector);
    }
    Ok(WalkOutcome {
        vector,
        steps_taken,
        deltas,
        stalled,
    })
}

/// Row `s` holds the `steps`-step vector of the chosen chain started at `s`.
///
/// Computed with full matrix products, independently of the sparse kernel.
/// Rows whose constrained step clips to zero keep their previous value and
/// stop evolving, mirroring [`run_walk`].
pub fn dense_transition_matrix(graph: &Graph, mode: WalkMode, steps: usize) -> Result<DMatrix<f64>> {
    dense_transition_matrix_capped(graph, mode, steps, DENSE_CAP)
}

pub fn dense_transition_matrix_capped(graph: &Graph, mode: WalkMode, steps: usize, cap: usize) -> Result<DMatrix<f64>> {
    let n = graph.node_count();
    if n > cap {
        return Err(Error::DenseCapExceeded { node_count: n, cap });
    }
    let degree: Vec<f64> = graph.degrees().map(|d| d as f64).collect();
    if let Some(i) = degree.iter().position(|&d| d == 0.0) {
        return Err(Error::IsolatedSeed(i));
    }
    let total: f64 = degree.iter().sum();

    let mut transition = DMatrix::<f64>::zeros(n, n);
    for (u, v) in graph.edges() {
        transition[(u, v)] = 1.0 / degree[u];
        transition[(v, u)] = 1.0 / degree[v];
    }
    // null-graph transition: every row equals d_j / 2m
    let null = DMatrix::<f64>::from_fn(n, n, |_, j| degree[j] / total);

    let mut state = DMatrix::<f64>::identity(n, n);
    let mut frozen = vec![false; n];
    for _ in 0..steps {
        let walked = &state * &transition;
        if mode == WalkMode::Unconstrained {
            state = walked;
            continue;
        }
        let drift = &state * &null;
        for row in 0..n {
            if frozen[row] {
                continue;
            }
            let mut next: Vec<f64> = (0..n).map(|j| (walked[(row, j)] - drift[(row, j)]).max(0.0)).collect();
            let sum: f64 = next.iter().sum();
            if sum <= 0.0 {
                frozen[row] = true;
                continue;
            }
            for (j, x) in next.iter_mut().enumerate() {
                *x /= sum;
                state[(row, j)] = *x;
            }
        }
    }

    if mode == WalkMode::DegreeCorrected {
        for row in 0..n {
            let mut sum = 0.0;
            for j in 0..n {
                state[(row, j)] /= degree[j];
                sum += state[(row, j)];
            }
            for j in 0..n {
                state[(row, j)] /= sum;
            }
        }
    }
    Ok(state)
}

/// CSV dump `node_label,probability`, sorted by descending probability with
/// ties broken by node id. Zero entries are omitted.
pub fn write_vector_csv<W: Write>(graph: &Graph, v: &ProbabilityVector, mut out: W) -> Result<()> {
    let mut entries = v.entries().to_vec();
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    writeln!(out, "node_label,probability")?;
    for (i, p) in entries {
        writeln!(out, "{},{:.17e}", graph.label(i), p)?;
    }
    Ok(())
}
