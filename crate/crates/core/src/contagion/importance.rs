use std::io::Write;

use serde::{Deserialize, Serialize};

use super::infection_tree;
use crate::error::{Error, Result};
use crate::graph::{connected_components, Edge, WeightedGraph};
use crate::par::Execution;
use crate::rng;
use crate::spectral::ResistanceSketch;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EeiConfig {
    pub gamma: f64,
    pub runs_per_source: usize,
    pub seed: u64,
    #[serde(skip)]
    pub execution: Execution,
}

impl EeiConfig {
    pub fn new(gamma: f64, runs_per_source: usize, seed: u64) -> Self {
        Self {
            gamma,
            runs_per_source,
            seed,
            execution: Execution::default(),
        }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

/// Fraction of infection trees containing each edge.
///
/// Every vertex serves as patient zero `runs_per_source` times; run `r` from
/// source `s` uses the stream `(seed, s, r)`. An edge is counted against the
/// trees grown from sources in its own component, so bridges score exactly 1
/// whether or not the graph is connected.
pub fn importance_counts(g: &WeightedGraph, cfg: &EeiConfig) -> Result<Vec<f64>> {
    if cfg.runs_per_source < 1 {
        return Err(Error::InvalidParameter(
            "runs_per_source must be at least 1".into(),
        ));
    }
    let n = g.n();
    let runs = cfg.runs_per_source;
    let per_source = cfg.execution.map_range(n, |s| -> Result<Vec<u32>> {
        let mut counts = vec![0u32; g.m()];
        for r in 0..runs {
            let seed = rng::stream_seed(cfg.seed, s as u64, r as u64);
            let tree = infection_tree(g, cfg.gamma, s, seed)?;
            for e in tree.edges {
                counts[e] += 1;
            }
        }
        Ok(counts)
    });
    let mut totals = vec![0u64; g.m()];
    for counts in per_source {
        for (t, c) in totals.iter_mut().zip(counts?) {
            *t += u64::from(c);
        }
    }
    let comps = connected_components(g);
    let sizes = comps.sizes();
    Ok(g.edges()
        .iter()
        .zip(&totals)
        .map(|(e, &c)| {
            let trees = (sizes[comps.label(e.u)] * runs) as f64;
            c as f64 / trees
        })
        .collect())
}

/// Per-edge epidemic importance next to the leverage `w_e R_e`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceTable {
    pub edges: Vec<Edge>,
    pub eei: Vec<f64>,
    pub leverage: Vec<f64>,
    pub eei_normalized: Vec<f64>,
    pub leverage_normalized: Vec<f64>,
}

fn scale_by_max(xs: &[f64]) -> Vec<f64> {
    let max = xs.iter().cloned().fold(0.0f64, f64::max);
    if max > 0.0 {
        xs.iter().map(|x| x / max).collect()
    } else {
        xs.to_vec()
    }
}

impl ImportanceTable {
    pub fn new(g: &WeightedGraph, eei: Vec<f64>, leverage: Vec<f64>) -> Result<Self> {
        if eei.len() != g.m() {
            return Err(Error::LengthMismatch(eei.len(), g.m()));
        }
        if leverage.len() != g.m() {
            return Err(Error::LengthMismatch(leverage.len(), g.m()));
        }
        Ok(Self {
            edges: g.edges().to_vec(),
            eei_normalized: scale_by_max(&eei),
            leverage_normalized: scale_by_max(&leverage),
            eei,
            leverage,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `u\tv\tw\tleverage\teei` rows.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# u\tv\tw\tleverage\teei")?;
        for (i, e) in self.edges.iter().enumerate() {
            writeln!(
                out,
                "{}\t{}\t{:?}\t{:?}\t{:?}",
                e.u, e.v, e.w, self.leverage[i], self.eei[i]
            )?;
        }
        out.flush()
    }
}

/// Estimates epidemic edge importance and pairs it with the sketch's
/// leverage scores.
pub fn epidemic_edge_importance(
    g: &WeightedGraph,
    sketch: &ResistanceSketch,
    cfg: &EeiConfig,
) -> Result<ImportanceTable> {
    sketch.matches(g)?;
    let eei = importance_counts(g, cfg)?;
    ImportanceTable::new(g, eei, sketch.leverages().to_vec())
}
