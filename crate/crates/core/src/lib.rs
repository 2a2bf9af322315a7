//! Overlapping community detection with constrained random walks.
//!
//! A walk started at a seed node is biased against the walk on a
//! degree-preserving null graph, the resulting probability vector is ranked,
//! and the community is the ranked prefix of minimum conductance. Repeating
//! from the highest-degree uncovered node yields a cover in which nodes may
//! belong to several communities.
//!
//! ```
//! use ueoc::{detect_cover, Graph, WalkConfig};
//!
//! // two triangles joined by a single edge
//! let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap();
//! let cover = detect_cover(&g, &WalkConfig::default()).unwrap();
//! assert!(cover.is_full());
//! ```

mod error;

pub mod bench;
pub mod cover;
pub mod detect;
pub mod graph;
pub mod metrics;
pub mod spectral;
pub mod walk;

pub use cover::{read_cover, write_cover, Community, Cover};
pub use detect::{detect_cover, detect_cover_traced, extract_community, unfold_community, RankedNodeList};
pub use error::{Error, Result};
pub use graph::{load_edge_list, read_edge_list_file, write_edge_list, Graph, LoadedGraph};
pub use metrics::{average_conductance, conductance, extended_modularity, overlapping_nmi, score_cover, CoverScore};
pub use spectral::{laplacian_spectrum, mixing_times, SpectrumReport};
pub use walk::{run_walk, ProbabilityVector, WalkConfig, WalkMode};
