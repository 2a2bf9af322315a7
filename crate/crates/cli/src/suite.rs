use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use log::warn;
use rayon::prelude::*;
use ueoc::bench::{generate_gn, generate_overlapping};
use ueoc::{detect_cover, overlapping_nmi, WalkConfig, WalkMode};

use crate::commands::{GnArgs, OverlapArgs};
use crate::{output_writer, Failure, WalkArgs};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteModel {
    /// Planted partition, sweeping z_out.
    Gn,
    /// Overlapping benchmark, sweeping the fraction of overlapping nodes.
    Overlap,
    /// Forty planted groups of a nodes, sweeping a.
    Scaling,
}

impl SuiteModel {
    fn default_values(self) -> Vec<f64> {
        match self {
            SuiteModel::Gn => (0..=8).map(f64::from).collect(),
            SuiteModel::Overlap => (0..=5).map(|i| f64::from(i) / 10.0).collect(),
            SuiteModel::Scaling => vec![25.0, 50.0, 75.0, 100.0],
        }
    }
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    #[arg(long, value_enum)]
    pub model: SuiteModel,
    /// Comma-separated sweep values (z_out, overlap fraction or group size).
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// Graphs per sweep value.
    #[arg(long, default_value_t = 10)]
    pub reps: u64,
    /// Base seed; cell (i, r) uses seed + 1000 i + r.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cells run concurrently. Use 1 for clean timings.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// CSV file to write (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub walk: WalkArgs,
    #[command(flatten)]
    pub gn: GnArgs,
    #[command(flatten)]
    pub overlap: OverlapArgs,
}

struct Cell {
    nodes: usize,
    nmi: f64,
    seconds: f64,
}

fn run_cell(a: &SuiteArgs, cfg: &WalkConfig, value: f64, seed: u64) -> ueoc::Result<Cell> {
    let (g, truth) = match a.model {
        SuiteModel::Gn => generate_gn(
            &GnArgs {
                z_out: value,
                ..a.gn.clone()
            }
            .params(seed),
        )?,
        SuiteModel::Scaling => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(ueoc::Error::InvalidParameter(format!(
                    "group size must be a positive integer, got {value}"
                )));
            }
            generate_gn(
                &GnArgs {
                    groups: 40,
                    group_size: value as usize,
                    degree: 16.0,
                    z_out: 6.0,
                }
                .params(seed),
            )?
        }
        SuiteModel::Overlap => {
            let mut p = a.overlap.params(seed);
            p.overlap_nodes = (value * p.n as f64).round() as usize;
            generate_overlapping(&p)?
        }
    };
    let start = Instant::now();
    let cover = detect_cover(&g, cfg)?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(Cell {
        nodes: g.node_count(),
        nmi: overlapping_nmi(&cover, &truth)?,
        seconds,
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

pub fn run(a: &SuiteArgs) -> Result<(), Failure> {
    let cfg = a.walk.config(WalkMode::DegreeCorrected)?;
    if a.reps == 0 || a.jobs == 0 {
        return Err(Failure::Usage("--reps and --jobs must be at least 1".into()));
    }
    let values = a.values.clone().unwrap_or_else(|| a.model.default_values());
    let cells: Vec<(usize, u64)> = (0..values.len())
        .flat_map(|i| (0..a.reps).map(move |r| (i, r)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| Failure::Internal(e.into()))?;
    let results: Vec<ueoc::Result<Cell>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(i, r)| run_cell(a, &cfg, values[i], a.seed + 1000 * i as u64 + r))
            .collect()
    });

    let mut w = csv::Writer::from_writer(output_writer(a.output.as_ref())?);
    w.write_record([
        "model",
        "value",
        "nodes",
        "reps",
        "failures",
        "mean_nmi",
        "std_nmi",
        "mean_seconds",
        "median_seconds",
        "sqrt_median_seconds",
    ])?;
    let model = a
        .model
        .to_possible_value()
        .expect("named variant")
        .get_name()
        .to_owned();
    for (i, &value) in values.iter().enumerate() {
        let mut ok = Vec::new();
        let mut failures = 0;
        for ((ci, r), res) in cells.iter().zip(&results) {
            if *ci != i {
                continue;
            }
            match res {
                Ok(c) => ok.push(c),
                Err(e) => {
                    failures += 1;
                    warn!("{model} value {value} rep {r}: {e}");
                }
            }
        }
        let nmi: Vec<f64> = ok.iter().map(|c| c.nmi).collect();
        let mut secs: Vec<f64> = ok.iter().map(|c| c.seconds).collect();
        let mut row = vec![
            model.clone(),
            value.to_string(),
            ok.first().map(|c| c.nodes.to_string()).unwrap_or_default(),
            a.reps.to_string(),
            failures.to_string(),
        ];
        if ok.is_empty() {
            row.extend(std::iter::repeat_n(String::new(), 5));
        } else {
            let med = median(&mut secs);
            row.extend([
                mean(&nmi).to_string(),
                sample_std(&nmi).to_string(),
                mean(&secs).to_string(),
                med.to_string(),
                med.sqrt().to_string(),
            ]);
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
