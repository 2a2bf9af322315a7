//! Communities, covers and the plain-text cover format.
//!
//! A cover file holds one community per line with member labels separated by
//! single spaces, in extraction order.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A node set found by the detector (or planted by a generator).
#[derive(Clone, Debug, PartialEq)]
pub struct Community {
    members: Vec<usize>,
    /// Seed node whose walk produced this community, if any.
    pub seed: Option<usize>,
    /// Conductance recorded at extraction time, if any.
    pub conductance: Option<f64>,
}

impl Community {
    /// Sorts and deduplicates `members`. Empty sets are rejected.
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptySet);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self {
            members,
            seed: None,
            conductance: None,
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.members.binary_search(&node).is_ok()
    }
}

/// An ordered list of possibly overlapping communities over `node_count` nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Cover {
    node_count: usize,
    communities: Vec<Community>,
}

impl Cover {
    pub fn new(node_count: usize, communities: Vec<Community>) -> Result<Self> {
        for c in &communities {
            if let Some(&last) = c.members.last() {
                if last >= node_count {
                    return Err(Error::NodeOutOfRange { node: last, node_count });
                }
            }
        }
        Ok(Self {
            node_count,
            communities,
        })
    }

    pub fn from_sets<I>(node_count: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let communities = sets.into_iter().map(Community::new).collect::<Result<Vec<_>>>()?;
        Self::new(node_count, communities)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn communities(&self) -> &[Community] {
        &self.communities
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub(crate) fn push(&mut self, community: Community) {
        self.communities.push(community);
    }

    /// `O_v`: the number of communities containing each node.
    pub fn memberships(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.node_count];
        for c in &self.communities {
            for &v in c.members() {
                counts[v] += 1;
            }
        }
        counts
    }

    /// Node → indices of the communities that contain it.
    pub fn assignment(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.node_count];
        for (ci, c) in self.communities.iter().enumerate() {
            for &v in c.members() {
                out[v].push(ci);
            }
        }
        out
    }

    /// First node that belongs to no community, if any.
    pub fn first_uncovered(&self) -> Option<usize> {
        self.memberships().iter().position(|&o| o == 0)
    }

    pub fn is_full(&self) -> bool {
        self.first_uncovered().is_none()
    }

    /// Number of nodes that belong to two or more communities.
    pub fn overlapping_nodes(&self) -> usize {
        self.memberships().iter().filter(|&&o| o >= 2).count()
    }
}

/// Writes `cover` using the labels of `graph`, followed by one singleton line
/// for each label in `isolated`.
pub fn write_cover<W: Write>(cover: &Cover, graph: &Graph, isolated: &[String], mut out: W) -> Result<()> {
    for c in cover.communities() {
        let line: Vec<&str> = c.members().iter().map(|&v| graph.label(v)).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    for label in isolated {
        writeln!(out, "{label}")?;
    }
    Ok(())
}

/// Reads a cover file against a label index.
///
/// Labels in `skip` (isolated nodes stripped at load time) are dropped, and a
/// line left empty afterwards is ignored. Any other unknown label is an error.
pub fn read_cover<R: BufRead>(reader: R, index: &HashMap<String, usize>, skip: &HashSet<String>) -> Result<Cover> {
    let mut sets = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut set = Vec::new();
        for label in trimmed.split_whitespace() {
            match index.get(label) {
                Some(&v) => set.push(v),
                None if skip.contains(label) => {}
                None => {
                    return Err(Error::UnknownLabel {
                        line: lineno + 1,
                        label: label.to_owned(),
                    })
                }
            }
        }
        if !set.is_empty() {
            sets.push(set);
        }
    }
    Cover::from_sets(index.len(), sets)
}
