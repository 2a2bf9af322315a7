//! Community extraction by conductance sweep, and the cover driver.

use crate::cover::{Community, Cover};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::CutStats;
use crate::walk::{run_walk, ProbabilityVector, WalkConfig};

/// Nodes with positive probability, by descending probability and then
/// ascending id.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedNodeList {
    entries: Vec<(usize, f64)>,
}

impl RankedNodeList {
    pub fn from_vector(v: &ProbabilityVector) -> Self {
        let mut entries = v.entries().to_vec();
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        Self { entries }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nodes(&self) -> Vec<usize> {
        self.entries.iter().map(|&(v, _)| v).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Ranking of every node, zero entries included (those follow in id order).
pub fn full_ranking(v: &ProbabilityVector) -> Vec<usize> {
    let ranked = RankedNodeList::from_vector(v);
    let mut seen = vec![false; v.len()];
    let mut order = ranked.nodes();
    for &u in &order {
        seen[u] = true;
    }
    order.extend((0..v.len()).filter(|&u| !seen[u]));
    order
}

/// Walk output for one seed.
#[derive(Clone, Debug)]
pub struct Unfolding {
    pub ranked: RankedNodeList,
    pub steps_taken: usize,
    pub stalled: bool,
}

/// Runs the walk from `seed` and ranks the result.
pub fn unfold_community(graph: &Graph, seed: usize, cfg: &WalkConfig) -> Result<Unfolding> {
    let out = run_walk(graph, seed, cfg)?;
    Ok(Unfolding {
        ranked: RankedNodeList::from_vector(&out.vector),
        steps_taken: out.steps_taken,
        stalled: out.stalled,
    })
}

/// Cut statistics of every prefix of `order`, updated incrementally:
/// adding `u` changes the boundary by `d_u - 2|S ∩ N(u)|`.
///
/// `order` must not repeat nodes.
pub fn sweep_profile(graph: &Graph, order: &[usize]) -> Vec<CutStats> {
    let mut inside = vec![false; graph.node_count()];
    let mut stats = CutStats::default();
    let mut out = Vec::with_capacity(order.len());
    for &u in order {
        let nbrs = graph.neighbors(u);
        let linked = nbrs.iter().filter(|&&w| inside[w]).count();
        inside[u] = true;
        stats.boundary = stats.boundary + nbrs.len() - 2 * linked;
        stats.volume += nbrs.len();
        out.push(stats);
    }
    out
}

/// Result of a conductance sweep.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub community: Community,
    /// `φ(S_k)` for `k = 1..=K`, `None` where undefined.
    pub profile: Vec<Option<f64>>,
    /// Chosen prefix length.
    pub cut: usize,
}

/// Picks the ranked prefix of minimum conductance.
///
/// Prefixes are capped at `n - 1` nodes; among equal conductances the
/// shorter prefix wins.
pub fn extract_community(graph: &Graph, ranked: &RankedNodeList) -> Result<Extraction> {
    if ranked.is_empty() {
        return Err(Error::EmptyRanking);
    }
    let order = ranked.nodes();
    let limit = order.len().min(graph.node_count().saturating_sub(1)).max(1);
    let total = graph.total_degree();
    let profile: Vec<Option<f64>> = sweep_profile(graph, &order[..limit])
        .iter()
        .map(|s| s.conductance(total))
        .collect();

    let mut cut = 1;
    let mut best: Option<f64> = None;
    for (k, phi) in profile.iter().enumerate() {
        if let Some(phi) = *phi {
            if best.is_none_or(|b| phi < b) {
                best = Some(phi);
                cut = k + 1;
            }
        }
    }
    let mut community = Community::new(order[..cut].to_vec())?;
    community.conductance = best;
    Ok(Extraction {
        community,
        profile,
        cut,
    })
}

/// Alternative cutoff: nodes whose probability exceeds the mean over all
/// `n` nodes. If that keeps nothing (a flat vector), the whole support is
/// returned.
pub fn cutoff_average(graph: &Graph, ranked: &RankedNodeList) -> Result<Vec<usize>> {
    if ranked.is_empty() {
        return Err(Error::EmptyRanking);
    }
    let total: f64 = ranked.entries().iter().map(|&(_, p)| p).sum();
    let mean = total / graph.node_count() as f64;
    let mut kept: Vec<usize> = ranked
        .entries()
        .iter()
        .filter(|&&(_, p)| p > mean)
        .map(|&(v, _)| v)
        .collect();
    if kept.is_empty() {
        kept = ranked.nodes();
    }
    kept.sort_unstable();
    Ok(kept)
}

/// Per-community record kept by [`detect_cover_traced`].
#[derive(Clone, Debug)]
pub struct CommunityTrace {
    pub seed: usize,
    pub steps_taken: usize,
    pub stalled: bool,
    pub ranked: RankedNodeList,
    pub profile: Vec<Option<f64>>,
    pub cut: usize,
    /// The seed was missing from the minimum-conductance prefix and was added.
    pub seed_added: bool,
}

#[derive(Clone, Debug)]
pub struct Detection {
    pub cover: Cover,
    pub traces: Vec<CommunityTrace>,
}

/// Detects an overlapping cover of `graph`.
///
/// Seeds are taken in order of decreasing degree (lowest id first on ties),
/// skipping nodes already covered. Each seed's community always contains the
/// seed. Isolated nodes become singleton communities at the end.
pub fn detect_cover(graph: &Graph, cfg: &WalkConfig) -> Result<Cover> {
    detect_cover_traced(graph, cfg).map(|d| d.cover)
}

pub fn detect_cover_traced(graph: &Graph, cfg: &WalkConfig) -> Result<Detection> {
    cfg.validate()?;
    let n = graph.node_count();
    let degrees: Vec<usize> = graph.degrees().collect();
    let mut seeds: Vec<usize> = (0..n).filter(|&v| degrees[v] > 0).collect();
    seeds.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));

    let mut covered = vec![false; n];
    let mut cover = Cover::new(n, Vec::new())?;
    let mut traces = Vec::new();
    for seed in seeds {
        if covered[seed] {
            continue;
        }
        let unfolding = unfold_community(graph, seed, cfg)?;
        let extraction = extract_community(graph, &unfolding.ranked)?;
        let seed_added = !extraction.community.contains(seed);
        let mut members = extraction.community.members().to_vec();
        if seed_added {
            members.push(seed);
        }
        let mut community = Community::new(members)?;
        community.seed = Some(seed);
        community.conductance = extraction.community.conductance;
        for &v in community.members() {
            covered[v] = true;
        }
        cover.push(community);
        traces.push(CommunityTrace {
            seed,
            steps_taken: unfolding.steps_taken,
            stalled: unfolding.stalled,
            ranked: unfolding.ranked,
            profile: extraction.profile,
            cut: extraction.cut,
            seed_added,
        });
    }
    for v in (0..n).filter(|&v| degrees[v] == 0) {
        let mut c = Community::new(vec![v])?;
        c.seed = Some(v);
        cover.push(c);
    }
    if let Some(node) = cover.first_uncovered() {
        return Err(Error::IncompleteCover { node });
    }
    Ok(Detection { cover, traces })
}

/// `|A ∩ B| / sqrt(|A|·|B|)`.
pub fn structural_similarity(a: &[usize], b: &[usize]) -> Result<f64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    for s in [&mut a, &mut b] {
        s.sort_unstable();
        s.dedup();
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let (mut i, mut j, mut shared) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                shared += 1;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(shared as f64 / ((a.len() * b.len()) as f64).sqrt())
}
