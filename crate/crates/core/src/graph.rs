//! Immutable undirected simple graph stored in compressed sparse row form.
//!
//! Every algorithm in the crate works on dense node indices `0..n`. The
//! original string labels are kept alongside so covers and vectors can be
//! written back out in the caller's vocabulary.

use std::collections::{HashMap, VecDeque};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Undirected graph without self-loops or parallel edges.
///
/// Neighbour lists are sorted ascending, which keeps every downstream
/// iteration order deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    labels: Vec<String>,
    num_edges: usize,
}

impl Graph {
    /// Builds a graph over `node_count` nodes labelled `"0"`, `"1"`, ...
    ///
    /// Self-loops are dropped and repeated edges collapse to one.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    /// Builds a graph whose node `i` carries `labels[i]`.
    pub fn with_labels<I>(labels: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let (graph, _) = build(labels, edges)?;
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of undirected edges `m`.
    pub fn edge_count(&self) -> usize {
        self.num_edges
    }

    /// `Σ d_r = 2m`.
    pub fn total_degree(&self) -> usize {
        self.targets.len()
    }

    pub fn degree(&self, node: usize) -> Result<usize> {
        self.check(node)?;
        Ok(self.offsets[node + 1] - self.offsets[node])
    }

    /// Sorted neighbours of `node`. Panics if `node` is out of range.
    #[inline]
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    /// Degree sequence in node order.
    pub fn degrees(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Label → index lookup table.
    pub fn label_index(&self) -> HashMap<String, usize> {
        self.labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect()
    }

    pub fn max_degree_node(&self) -> Option<usize> {
        // ties go to the lowest id
        self.degrees()
            .enumerate()
            .fold(None, |best: Option<(usize, usize)>, (i, d)| match best {
                Some((_, bd)) if bd >= d => best,
                _ => Some((i, d)),
            })
            .map(|(i, _)| i)
    }

    /// Maximal connected node sets, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            let mut component = Vec::new();
            while let Some(u) = queue.pop_front() {
                component.push(u);
                for &v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// Subgraph induced by `nodes` (relabelled `0..k` in the given order,
    /// original labels kept). Duplicates are ignored after their first
    /// occurrence.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.node_count()];
        let mut kept = Vec::with_capacity(nodes.len());
        for &v in nodes {
            self.check(v)?;
            if index[v] == usize::MAX {
                index[v] = kept.len();
                kept.push(v);
            }
        }
        let labels = kept.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = kept.iter().flat_map(|&u| {
            let index = &index;
            self.neighbors(u)
                .iter()
                .filter(move |&&w| index[w] != usize::MAX)
                .map(move |&w| (index[u], index[w]))
        });
        Graph::with_labels(labels, edges.collect::<Vec<_>>())
    }

    pub(crate) fn check(&self, node: usize) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node,
                node_count: self.node_count(),
            })
        }
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
struct BuildStats {
    self_loops: usize,
    duplicates: usize,
}

fn build<I>(labels: Vec<String>, edges: I) -> Result<(Graph, BuildStats)>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let n = labels.len();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stats = BuildStats::default();
    let mut listed = 0usize;
    for (u, v) in edges {
        for node in [u, v] {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, node_count: n });
            }
        }
        if u == v {
            stats.self_loops += 1;
            continue;
        }
        adjacency[u].push(v);
        adjacency[v].push(u);
        listed += 1;
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(2 * listed);
    offsets.push(0);
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
        targets.extend_from_slice(list);
        offsets.push(targets.len());
    }
    let num_edges = targets.len() / 2;
    stats.duplicates = listed - num_edges;
    Ok((
        Graph {
            offsets,
            targets,
            labels,
            num_edges,
        },
        stats,
    ))
}

/// A graph read from an edge list together with what canonicalisation removed.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Labels that only ever appeared in self-loops. They are not part of
    /// `graph`; covers append each of them as a singleton community.
    pub isolated: Vec<String>,
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

/// Parses a whitespace-separated edge list.
///
/// Blank lines and lines starting with `#` are skipped. Labels get dense ids
/// in first-seen order.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut raw_edges = Vec::new();
    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&id) = index.get(label) {
            return id;
        }
        let id = labels.len();
        labels.push(label.to_owned());
        index.insert(label.to_owned(), id);
        id
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected two node labels, found {trimmed:?}"),
                })
            }
        };
        let u = intern(a, &mut labels);
        let v = intern(b, &mut labels);
        raw_edges.push((u, v));
    }

    let (full, stats) = build(labels, raw_edges.iter().copied())?;
    if full.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }

    let isolated: Vec<usize> = (0..full.node_count())
        .filter(|&i| full.neighbors(i).is_empty())
        .collect();
    let graph = if isolated.is_empty() {
        full.clone()
    } else {
        let mut remap = vec![usize::MAX; full.node_count()];
        let mut kept = Vec::new();
        for (i, slot) in remap.iter_mut().enumerate() {
            if !full.neighbors(i).is_empty() {
                *slot = kept.len();
                kept.push(full.label(i).to_owned());
            }
        }
        let edges = full.edges().map(|(u, v)| (remap[u], remap[v]));
        build(kept, edges)?.0
    };

    Ok(LoadedGraph {
        isolated: isolated.iter().map(|&i| full.label(i).to_owned()).collect(),
        graph,
        self_loops: stats.self_loops,
        duplicate_edges: stats.duplicates,
    })
}

pub fn read_edge_list_file<P: AsRef<Path>>(path: P) -> Result<LoadedGraph> {
    let file = File::open(path)?;
    load_edge_list(BufReader::new(file))
}

/// Writes one `label label` line per undirected edge.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    for (u, v) in graph.edges() {
        writeln!(out, "{} {}", graph.label(u), graph.label(v))?;
    }
    Ok(())
}
