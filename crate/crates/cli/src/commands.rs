use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use log::info;
use ueoc::bench::{generate_gn, generate_overlapping, write_benchmark, GnParams, LfrParams};
use ueoc::detect::detect_cover_traced;
use ueoc::spectral::convergence_trace;
use ueoc::walk::{dense_transition_matrix, run_walk, write_vector_csv};
use ueoc::{laplacian_spectrum, read_cover, read_edge_list_file, score_cover, write_cover, Cover, LoadedGraph};

use crate::{at_path, output_writer, Failure, ModeArg, WalkArgs};

pub fn load_graph(path: &Path) -> Result<LoadedGraph, Failure> {
    let loaded = at_path(read_edge_list_file(path), path)?;
    if loaded.self_loops + loaded.duplicate_edges > 0 {
        info!(
            "{}: dropped {} self-loops and {} duplicate edges",
            path.display(),
            loaded.self_loops,
            loaded.duplicate_edges
        );
    }
    Ok(loaded)
}

fn load_cover(path: &Path, loaded: &LoadedGraph) -> Result<Cover, Failure> {
    let file = at_path(File::open(path), path)?;
    let skip: HashSet<String> = loaded.isolated.iter().cloned().collect();
    at_path(
        read_cover(BufReader::new(file), &loaded.graph.label_index(), &skip),
        path,
    )
}

fn node_by_label(loaded: &LoadedGraph, label: &str) -> Result<usize, Failure> {
    loaded
        .graph
        .label_index()
        .get(label)
        .copied()
        .ok_or_else(|| Failure::Data(anyhow::anyhow!("no node labelled {label:?} with at least one edge")))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

#[derive(Args, Debug)]
pub struct DetectArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    /// Cover file to write (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Walk used to rank nodes.
    #[arg(long, value_enum, default_value_t = ModeArg::DegreeCorrected)]
    pub mode: ModeArg,
    /// Directory for per-community sweep traces.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

pub fn detect(a: &DetectArgs) -> Result<(), Failure> {
    let cfg = a.walk.config(a.mode.into())?;
    let loaded = load_graph(&a.graph)?;
    let g = &loaded.graph;
    let start = Instant::now();
    let d = detect_cover_traced(g, &cfg)?;
    let elapsed = start.elapsed();

    let mut out = output_writer(a.output.as_ref())?;
    write_cover(&d.cover, g, &loaded.isolated, &mut out)?;
    out.flush()?;

    if let Some(dir) = &a.trace {
        at_path(fs::create_dir_all(dir), dir)?;
        let mut summary = csv::Writer::from_path(dir.join("communities.csv"))?;
        summary.write_record([
            "community",
            "seed_label",
            "size",
            "steps_taken",
            "stalled",
            "seed_added",
            "cut",
            "conductance",
        ])?;
        for (i, (c, t)) in d.cover.communities().iter().zip(&d.traces).enumerate() {
            summary.write_record([
                (i + 1).to_string(),
                g.label(t.seed).to_owned(),
                c.len().to_string(),
                t.steps_taken.to_string(),
                t.stalled.to_string(),
                t.seed_added.to_string(),
                t.cut.to_string(),
                fmt_opt(c.conductance),
            ])?;
            let mut sweep = csv::Writer::from_path(dir.join(format!("sweep_{:03}.csv", i + 1)))?;
            sweep.write_record(["k", "node_label", "phi"])?;
            for (k, (phi, v)) in t.profile.iter().zip(t.ranked.nodes()).enumerate() {
                sweep.write_record([(k + 1).to_string(), g.label(v).to_owned(), fmt_opt(*phi)])?;
            }
            sweep.flush()?;
        }
        summary.flush()?;
    }

    eprintln!(
        "{} communities, {} overlapping nodes, {} nodes, {:.3?}",
        d.cover.len() + loaded.isolated.len(),
        d.cover.overlapping_nodes(),
        g.node_count() + loaded.isolated.len(),
        elapsed
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    /// Cover to score.
    pub cover: PathBuf,
    /// Reference cover; adds an NMI column.
    pub reference: Option<PathBuf>,
    /// CSV file to write (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn eval(a: &EvalArgs) -> Result<(), Failure> {
    let loaded = load_graph(&a.graph)?;
    let cover = load_cover(&a.cover, &loaded)?;
    let score = score_cover(&loaded.graph, &cover)?;
    let nmi = match &a.reference {
        Some(p) => Some(ueoc::overlapping_nmi(&cover, &load_cover(p, &loaded)?)?),
        None => None,
    };
    let mut w = csv::Writer::from_writer(output_writer(a.output.as_ref())?);
    let mut header = vec!["ac", "eq"];
    let mut row = vec![score.ac.to_string(), score.eq.to_string()];
    if let Some(x) = nmi {
        header.push("nmi");
        row.push(x.to_string());
    }
    w.write_record(header)?;
    w.write_record(row)?;
    w.flush()?;
    Ok(())
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Planted partition: equal groups, fixed expected degree.
    Gn,
    /// Power-law degrees and community sizes with overlapping nodes.
    Overlap,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    /// Random seed; identical seeds give identical files.
    #[arg(long)]
    pub seed: u64,
    /// Output prefix; writes PREFIX.edges and PREFIX.cover.
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub gn: GnArgs,
    #[command(flatten)]
    pub overlap: OverlapArgs,
}

#[derive(Args, Clone, Debug)]
pub struct GnArgs {
    #[arg(long, default_value_t = 4, help_heading = "gn model")]
    pub groups: usize,
    #[arg(long, default_value_t = 32, help_heading = "gn model")]
    pub group_size: usize,
    /// Expected degree z_in + z_out.
    #[arg(long, default_value_t = 16.0, help_heading = "gn model")]
    pub degree: f64,
    #[arg(long, default_value_t = 0.0, help_heading = "gn model")]
    pub z_out: f64,
}

impl GnArgs {
    pub fn params(&self, seed: u64) -> GnParams {
        GnParams {
            groups: self.groups,
            group_size: self.group_size,
            expected_degree: self.degree,
            z_out: self.z_out,
            seed,
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct OverlapArgs {
    #[arg(long, default_value_t = 1000, help_heading = "overlap model")]
    pub nodes: usize,
    #[arg(long, default_value_t = 20.0, help_heading = "overlap model")]
    pub avg_degree: f64,
    #[arg(long, default_value_t = 50, help_heading = "overlap model")]
    pub max_degree: usize,
    #[arg(long, default_value_t = 20, help_heading = "overlap model")]
    pub c_min: usize,
    /// Largest community; defaults to 5 * c_min.
    #[arg(long, help_heading = "overlap model")]
    pub c_max: Option<usize>,
    /// Fraction of each node's links leaving its communities.
    #[arg(long, default_value_t = 0.1, help_heading = "overlap model")]
    pub mu: f64,
    /// Number of nodes in more than one community.
    #[arg(long, default_value_t = 0, help_heading = "overlap model")]
    pub overlap_nodes: usize,
    /// Communities per overlapping node.
    #[arg(long, default_value_t = 2, help_heading = "overlap model")]
    pub overlap_memberships: usize,
}

impl OverlapArgs {
    pub fn params(&self, seed: u64) -> LfrParams {
        LfrParams {
            n: self.nodes,
            avg_degree: self.avg_degree,
            max_degree: self.max_degree,
            c_min: self.c_min,
            c_max: self.c_max.unwrap_or(5 * self.c_min),
            mu: self.mu,
            overlap_nodes: self.overlap_nodes,
            overlap_memberships: self.overlap_memberships,
            seed,
            ..LfrParams::default()
        }
    }
}

pub fn generate(a: &GenerateArgs) -> Result<(), Failure> {
    let (g, truth) = match a.model {
        Model::Gn => generate_gn(&a.gn.params(a.seed))?,
        Model::Overlap => generate_overlapping(&a.overlap.params(a.seed))?,
    };
    if let Some(parent) = a.output.parent().filter(|p| !p.as_os_str().is_empty()) {
        at_path(fs::create_dir_all(parent), parent)?;
    }
    let (edges, cover) = write_benchmark(&g, &truth, &a.output)?;
    eprintln!(
        "{} nodes, {} edges, {} communities, {} overlapping nodes -> {}, {}",
        g.node_count(),
        g.edge_count(),
        truth.len(),
        truth.overlapping_nodes(),
        edges.display(),
        cover.display()
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    /// CSV file to write (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Emit the dense l-step transition matrix instead of the spectrum.
    #[arg(long, value_name = "L")]
    pub matrix: Option<usize>,
    /// Chain used for --matrix.
    #[arg(long, value_enum, default_value_t = ModeArg::Unconstrained, requires = "matrix")]
    pub mode: ModeArg,
}

pub fn spectrum(a: &SpectrumArgs) -> Result<(), Failure> {
    let loaded = load_graph(&a.graph)?;
    let g = &loaded.graph;
    let mut w = csv::Writer::from_writer(output_writer(a.output.as_ref())?);
    if let Some(l) = a.matrix {
        let m = dense_transition_matrix(g, a.mode.into(), l)?;
        let mut header = vec!["node_label".to_owned()];
        header.extend(g.labels().iter().cloned());
        w.write_record(&header)?;
        for r in 0..g.node_count() {
            let mut row = vec![g.label(r).to_owned()];
            row.extend(m.row(r).iter().map(|x| x.to_string()));
            w.write_record(&row)?;
        }
    } else {
        let report = laplacian_spectrum(g)?;
        if !report.is_complete() {
            eprintln!("partial spectrum: {} smallest eigenvalues", report.eigenvalues().len());
        }
        w.write_record(["i", "lambda", "inv_lambda"])?;
        for (i, &l) in report.eigenvalues().iter().enumerate() {
            let inv = if l > 0.0 { (1.0 / l).to_string() } else { String::new() };
            w.write_record([(i + 1).to_string(), l.to_string(), inv])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    /// Seed node label; defaults to the highest-degree node.
    #[arg(long)]
    pub seed: Option<String>,
    /// Number of steps to trace.
    #[arg(long = "l", default_value_t = 40)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::DegreeCorrected)]
    pub mode: ModeArg,
    /// CSV file to write (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also dump the final probability vector as CSV.
    #[arg(long)]
    pub vector: Option<PathBuf>,
}

pub fn trace(a: &TraceArgs) -> Result<(), Failure> {
    if a.steps == 0 {
        return Err(Failure::Usage("--l must be at least 1".into()));
    }
    let loaded = load_graph(&a.graph)?;
    let g = &loaded.graph;
    let seed = match &a.seed {
        Some(label) => node_by_label(&loaded, label)?,
        None => g.max_degree_node().ok_or(ueoc::Error::EmptyGraph)?,
    };
    let cfg = ueoc::WalkConfig {
        max_steps: a.steps,
        convergence_tol: f64::MIN_POSITIVE,
        mode: a.mode.into(),
    };
    let points = convergence_trace(g, seed, &cfg)?;
    let mut w = csv::Writer::from_writer(output_writer(a.output.as_ref())?);
    w.write_record(["l", "vector_delta", "rank_delta", "support"])?;
    for p in &points {
        w.write_record([
            p.step.to_string(),
            p.vector_delta.to_string(),
            p.rank_delta.to_string(),
            p.support.to_string(),
        ])?;
    }
    w.flush()?;
    if let Some(path) = &a.vector {
        let v = run_walk(g, seed, &cfg)?.vector;
        let mut out = std::io::BufWriter::new(at_path(File::create(path), path)?);
        write_vector_csv(g, &v, &mut out)?;
        out.flush()?;
    }
    Ok(())
}
