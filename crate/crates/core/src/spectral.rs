//! Spectrum of the random-walk Laplacian `I - D⁻¹A` and derived time scales.
//!
//! `I - D⁻¹A` is similar to the symmetric `I - D^{-1/2} A D^{-1/2}`, so the
//! eigenvalues are real and computed from the symmetric form. Small graphs use
//! a dense solver; larger ones fall back to Lanczos for the low end of the
//! spectrum.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::detect::full_ranking;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::walk::{degree_correct, ProbabilityVector, WalkConfig, WalkMode, Walker};

/// Eigenvalues within this distance of zero are reported as exactly zero.
pub const ZERO_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumOptions {
    /// Largest node count handled by the dense solver.
    pub dense_cap: usize,
    /// Eigenvalues computed by Lanczos above the dense cap.
    pub partial_count: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            dense_cap: 4096,
            partial_count: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    eigenvalues: Vec<f64>,
    complete: bool,
}

impl SpectrumReport {
    /// Eigenvalues in ascending order, `λ_1 = 0 ≤ λ_2 ≤ ...`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Whether this is the full spectrum. Partial (Lanczos) spectra hold the
    /// smallest eigenvalues only, and repeated eigenvalues may appear once.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// `1/λ_i` for `i ≥ 2`.
    pub fn exit_times(&self) -> Vec<f64> {
        self.eigenvalues.iter().skip(1).map(|&l| 1.0 / l).collect()
    }

    /// `T_i^ext = 1/λ_i` (1-based), for `i ≥ 2`.
    pub fn exit_time(&self, i: usize) -> Option<f64> {
        (i >= 2)
            .then(|| self.eigenvalues.get(i - 1).map(|&l| 1.0 / l))
            .flatten()
    }

    /// `T_i^ent = T_{i+1}^ext = 1/λ_{i+1}` (1-based).
    pub fn enter_time(&self, i: usize) -> Option<f64> {
        self.exit_time(i + 1)
    }

    /// `1/λ_2`.
    pub fn inverse_spectral_gap(&self) -> Option<f64> {
        self.eigenvalues.get(1).map(|&l| 1.0 / l)
    }

    /// Number of zero eigenvalues, i.e. connected components.
    pub fn zero_count(&self) -> usize {
        self.eigenvalues.iter().filter(|&&l| l == 0.0).count()
    }

    /// The largest eigenvalue equals 2 exactly when some component is bipartite.
    pub fn has_bipartite_component(&self) -> bool {
        self.complete && self.eigenvalues.last().is_some_and(|&l| l > 2.0 - 1e-9)
    }
}

/// `D^{-1/2}` with isolated nodes mapped to zero.
fn inv_sqrt_degrees(graph: &Graph) -> Vec<f64> {
    graph
        .degrees()
        .map(|d| if d == 0 { 0.0 } else { 1.0 / (d as f64).sqrt() })
        .collect()
}

fn finish(mut values: Vec<f64>, complete: bool) -> SpectrumReport {
    values.sort_by(f64::total_cmp);
    for l in &mut values {
        if l.abs() < ZERO_TOL {
            *l = 0.0;
        }
    }
    SpectrumReport {
        eigenvalues: values,
        complete,
    }
}

/// Spectrum with the default options.
pub fn laplacian_spectrum(graph: &Graph) -> Result<SpectrumReport> {
    laplacian_spectrum_with(graph, &SpectrumOptions::default())
}

/// Isolated nodes contribute an eigenvalue of 1.
pub fn laplacian_spectrum_with(graph: &Graph, opts: &SpectrumOptions) -> Result<SpectrumReport> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n <= opts.dense_cap {
        return Ok(finish(dense_symmetric(graph), true));
    }
    if opts.partial_count == 0 {
        return Err(Error::InvalidParameter("partial_count must be positive".into()));
    }
    Ok(finish(lanczos_smallest(graph, opts.partial_count), false))
}

fn dense_symmetric(graph: &Graph) -> Vec<f64> {
    let n = graph.node_count();
    let s = inv_sqrt_degrees(graph);
    let mut l = DMatrix::<f64>::identity(n, n);
    for (u, v) in graph.edges() {
        let x = s[u] * s[v];
        l[(u, v)] = -x;
        l[(v, u)] = -x;
    }
    SymmetricEigen::new(l).eigenvalues.iter().copied().collect()
}

/// Spectrum of each connected component, paired with its sorted node list.
pub fn component_spectra(graph: &Graph) -> Result<Vec<(Vec<usize>, SpectrumReport)>> {
    graph
        .connected_components()
        .into_iter()
        .map(|nodes| {
            let sub = graph.induced_subgraph(&nodes)?;
            Ok((nodes, laplacian_spectrum(&sub)?))
        })
        .collect()
}

/// Eigenvalues of the nonsymmetric `I - D⁻¹A` via a general Schur
/// decomposition. Returns real parts, ascending, and the largest imaginary
/// magnitude seen. Meant for cross-checking on small graphs.
pub fn laplacian_spectrum_nonsymmetric(graph: &Graph) -> Result<(Vec<f64>, f64)> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut m = DMatrix::<f64>::identity(n, n);
    for u in 0..n {
        let nbrs = graph.neighbors(u);
        for &v in nbrs {
            m[(u, v)] = -1.0 / nbrs.len() as f64;
        }
    }
    let values = m.complex_eigenvalues();
    let imag = values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let mut re: Vec<f64> = values.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    Ok((re, imag))
}

/// Lanczos with full reorthogonalisation on `I + D^{-1/2} A D^{-1/2}`,
/// whose largest eigenvalues `μ` give the smallest Laplacian ones as `2 - μ`.
fn lanczos_smallest(graph: &Graph, count: usize) -> Vec<f64> {
    let n = graph.node_count();
    let iters = n.min((10 * count).max(300));
    let s = inv_sqrt_degrees(graph);
    let apply = |x: &[f64], y: &mut [f64]| {
        for u in 0..n {
            let mut acc = x[u];
            for &v in graph.neighbors(u) {
                acc += s[u] * s[v] * x[v];
            }
            y[u] = acc;
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2c_2055);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    normalize(&mut q);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(iters);
    let mut alpha = Vec::with_capacity(iters);
    let mut beta: Vec<f64> = Vec::with_capacity(iters);
    let mut w = vec![0.0; n];
    for _ in 0..iters {
        apply(&q, &mut w);
        let a = dot(&w, &q);
        alpha.push(a);
        basis.push(q.clone());
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let norm = dot(&w, &w).sqrt();
        if norm < 1e-10 || basis.len() == iters {
            break;
        }
        beta.push(norm);
        for (qi, wi) in q.iter_mut().zip(&w) {
            *qi = wi / norm;
        }
    }

    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let mut values: Vec<f64> = SymmetricEigen::new(t).eigenvalues.iter().map(|mu| 2.0 - mu).collect();
    values.sort_by(f64::total_cmp);
    values.truncate(count);
    values
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let norm = dot(x, x).sqrt();
    for v in x {
        *v /= norm;
    }
}

/// Window `(1/λ_{k+1}, 1/λ_k)` of walk lengths over which `k` communities
/// are expected to be resolved, for `2 ≤ k < n`.
pub fn mixing_times(report: &SpectrumReport, k: usize) -> Result<(f64, f64)> {
    let ev = report.eigenvalues();
    if k < 2 || k >= ev.len() {
        return Err(Error::InvalidParameter(format!(
            "k must lie in 2..{}, got {k}",
            ev.len()
        )));
    }
    Ok((1.0 / ev[k], 1.0 / ev[k - 1]))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub step: usize,
    /// `‖ψ_l - ψ_{l-1}‖₂` of the degree-corrected vectors.
    pub vector_delta: f64,
    /// Positions at which the full ranking differs from the previous step.
    pub rank_delta: usize,
    pub support: usize,
}

/// Follows the walk from `seed` for `cfg.max_steps` steps, recording how the
/// ranked vector changes. The convergence tolerance is ignored; the trace
/// stops early only if a constrained step clips to zero.
pub fn convergence_trace(graph: &Graph, seed: usize, cfg: &WalkConfig) -> Result<Vec<TracePoint>> {
    let mut walker = Walker::new(graph, seed, cfg.mode)?;
    let view = |v: &ProbabilityVector| match cfg.mode {
        WalkMode::DegreeCorrected => degree_correct(graph, v),
        _ => v.clone(),
    };
    let mut prev = view(walker.current());
    let mut prev_rank = full_ranking(&prev);
    let mut out = Vec::with_capacity(cfg.max_steps);
    for step in 1..=cfg.max_steps {
        if walker.advance().is_none() {
            break;
        }
        let cur = view(walker.current());
        let rank = full_ranking(&cur);
        out.push(TracePoint {
            step,
            vector_delta: cur.distance(&prev),
            rank_delta: rank.iter().zip(&prev_rank).filter(|(a, b)| a != b).count(),
            support: cur.support_len(),
        });
        prev = cur;
        prev_rank = rank;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    #[test]
    fn complete_graph_spectrum() {
        let r = laplacian_spectrum(&complete(5)).unwrap();
        assert_eq!(r.eigenvalues()[0], 0.0);
        for &l in &r.eigenvalues()[1..] {
            assert!((l - 1.25).abs() < 1e-12);
        }
        assert!((mixing_times(&r, 2).unwrap().0 - 0.8).abs() < 1e-12);
        assert_eq!(r.exit_time(1), None);
        assert_eq!(r.enter_time(1), r.exit_time(2));
    }

    #[test]
    fn path_is_bipartite() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = laplacian_spectrum(&g).unwrap();
        assert!(r.has_bipartite_component());
        assert!(!laplacian_spectrum(&complete(4)).unwrap().has_bipartite_component());
    }

    #[test]
    fn zeros_count_components() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let r = laplacian_spectrum(&g).unwrap();
        assert_eq!(r.zero_count(), 2);
        assert_eq!(r.inverse_spectral_gap(), Some(f64::INFINITY));
        for (nodes, part) in component_spectra(&g).unwrap() {
            assert_eq!(nodes.len(), 3);
            assert!((part.eigenvalues()[1] - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_times_bounds() {
        let r = laplacian_spectrum(&complete(4)).unwrap();
        assert!(mixing_times(&r, 1).is_err());
        assert!(mixing_times(&r, 4).is_err());
        assert!(mixing_times(&r, 3).is_ok());
    }

    #[test]
    fn trace_on_triangle_settles() {
        let g = complete(3);
        let cfg = WalkConfig {
            mode: WalkMode::Unconstrained,
            ..WalkConfig::with_steps(60)
        };
        let t = convergence_trace(&g, 0, &cfg).unwrap();
        assert_eq!(t.len(), 60);
        assert!(t.last().unwrap().vector_delta < 1e-12);
    }
}
