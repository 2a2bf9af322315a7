//! Cover quality scores: conductance, average conductance, extended
//! modularity and overlapping normalised mutual information.

use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Boundary size and volume of a node set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CutStats {
    /// Edges with exactly one endpoint in the set.
    pub boundary: usize,
    /// Sum of member degrees.
    pub volume: usize,
}

impl CutStats {
    /// `boundary / min(Vol(S), 2m - Vol(S))`, or `None` when the denominator
    /// is zero.
    pub fn conductance(&self, total_degree: usize) -> Option<f64> {
        let denom = self.volume.min(total_degree - self.volume);
        (denom > 0).then(|| self.boundary as f64 / denom as f64)
    }
}

/// Counts boundary edges and volume of `set` from scratch. Repeated members
/// count once.
pub fn cut_stats(graph: &Graph, set: &[usize]) -> Result<CutStats> {
    let mut inside = vec![false; graph.node_count()];
    let mut members = Vec::with_capacity(set.len());
    for &v in set {
        graph.check(v)?;
        if !inside[v] {
            inside[v] = true;
            members.push(v);
        }
    }
    let mut stats = CutStats::default();
    for &v in &members {
        let nbrs = graph.neighbors(v);
        stats.volume += nbrs.len();
        stats.boundary += nbrs.iter().filter(|&&w| !inside[w]).count();
    }
    Ok(stats)
}

/// Conductance of `set`.
///
/// Errors on an empty set and when either side of the cut has zero volume.
pub fn conductance(graph: &Graph, set: &[usize]) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    cut_stats(graph, set)?
        .conductance(graph.total_degree())
        .ok_or(Error::UndefinedConductance)
}

/// Per-community conductance as used by [`average_conductance`]: sets with a
/// zero-volume side (the whole graph, isolated singletons) score 0.
pub fn community_conductances(graph: &Graph, cover: &Cover) -> Result<Vec<f64>> {
    check_cover(graph, cover)?;
    cover
        .communities()
        .iter()
        .map(|c| {
            Ok(cut_stats(graph, c.members())?
                .conductance(graph.total_degree())
                .unwrap_or(0.0))
        })
        .collect()
}

/// Mean conductance over the communities of `cover`.
pub fn average_conductance(graph: &Graph, cover: &Cover) -> Result<f64> {
    let phis = community_conductances(graph, cover)?;
    Ok(phis.iter().sum::<f64>() / phis.len() as f64)
}

/// AC, EQ and the per-community conductances behind AC.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverScore {
    pub ac: f64,
    pub eq: f64,
    pub per_community_phi: Vec<f64>,
}

pub fn score_cover(graph: &Graph, cover: &Cover) -> Result<CoverScore> {
    let per_community_phi = community_conductances(graph, cover)?;
    let ac = per_community_phi.iter().sum::<f64>() / per_community_phi.len() as f64;
    Ok(CoverScore {
        ac,
        eq: extended_modularity(graph, cover)?,
        per_community_phi,
    })
}

/// Modularity generalised to overlapping covers.
///
/// Each ordered node pair `(v, w)` inside a community, including `v = w`,
/// contributes `(A_vw - d_v d_w / 2m) / (O_v O_w)`, where `O_v` counts the
/// communities containing `v`. On a partition this is ordinary modularity.
pub fn extended_modularity(graph: &Graph, cover: &Cover) -> Result<f64> {
    check_cover(graph, cover)?;
    let two_m = graph.total_degree() as f64;
    if two_m == 0.0 {
        return Err(Error::EmptyGraph);
    }
    let o = cover.memberships();
    if let Some(node) = o.iter().position(|&k| k == 0) {
        return Err(Error::IncompleteCover { node });
    }
    let mut inside = vec![false; graph.node_count()];
    let mut total = 0.0;
    for c in cover.communities() {
        for &v in c.members() {
            inside[v] = true;
        }
        let mut links = 0.0;
        let mut weighted_degree = 0.0;
        for &v in c.members() {
            let nbrs = graph.neighbors(v);
            weighted_degree += nbrs.len() as f64 / o[v] as f64;
            for &w in nbrs {
                if inside[w] {
                    links += 1.0 / (o[v] * o[w]) as f64;
                }
            }
        }
        total += links - weighted_degree * weighted_degree / two_m;
        for &v in c.members() {
            inside[v] = false;
        }
    }
    Ok(total / two_m)
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Normalised conditional entropy `<H(X|Y)>` for the LFK overlapping NMI.
fn conditional_entropy(x: &Cover, y: &Cover) -> f64 {
    let n = x.node_count() as f64;
    let y_sets: Vec<Vec<bool>> = y
        .communities()
        .iter()
        .map(|c| {
            let mut mask = vec![false; x.node_count()];
            for &v in c.members() {
                mask[v] = true;
            }
            mask
        })
        .collect();

    let mut sum = 0.0;
    for xk in x.communities() {
        let size_x = xk.len() as f64;
        let h_x = plogp(size_x / n) + plogp(1.0 - size_x / n);
        if h_x == 0.0 {
            // a community spanning every node carries no information
            continue;
        }
        let mut best = h_x;
        for (yj, mask) in y.communities().iter().zip(&y_sets) {
            let both = xk.members().iter().filter(|&&v| mask[v]).count() as f64;
            let only_x = size_x - both;
            let only_y = yj.len() as f64 - both;
            let neither = n - both - only_x - only_y;
            let (h11, h10, h01, h00) = (
                plogp(both / n),
                plogp(only_x / n),
                plogp(only_y / n),
                plogp(neither / n),
            );
            if h11 + h00 < h01 + h10 {
                continue;
            }
            let size_y = yj.len() as f64;
            let h_y = plogp(size_y / n) + plogp(1.0 - size_y / n);
            best = best.min(h11 + h10 + h01 + h00 - h_y);
        }
        sum += best / h_x;
    }
    sum / x.len() as f64
}

/// Overlapping normalised mutual information (LFK), base-2 logarithms.
///
/// Returns 1 for identical covers; both covers must span the same node set.
pub fn overlapping_nmi(x: &Cover, y: &Cover) -> Result<f64> {
    if x.node_count() != y.node_count() {
        return Err(Error::CoverSizeMismatch {
            left: x.node_count(),
            right: y.node_count(),
        });
    }
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyCover);
    }
    let nmi = 1.0 - 0.5 * (conditional_entropy(x, y) + conditional_entropy(y, x));
    Ok(nmi.clamp(0.0, 1.0))
}

fn check_cover(graph: &Graph, cover: &Cover) -> Result<()> {
    if cover.node_count() != graph.node_count() {
        return Err(Error::CoverSizeMismatch {
            left: cover.node_count(),
            right: graph.node_count(),
        });
    }
    if cover.is_empty() {
        return Err(Error::EmptyCover);
    }
    Ok(())
}
