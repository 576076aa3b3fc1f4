//! Edge sampling sparsifiers.
//!
//! Draw `q` edges with replacement from a distribution `p` over the edges and
//! give every selected edge the weight `count_e · w_e / (p_e q)`, where
//! `count_e` is how often it was drawn. Each reweighted edge has expectation
//! `w_e`, so the sparsifier's Laplacian is an unbiased estimate of the
//! original one. Effective-resistance sampling uses `p_e ∝ w_e R_e`; the
//! uniform null model uses `p_e = 1/m`.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_components, WeightedGraph};
use crate::rng;
use crate::spectral::ResistanceSketch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Probability proportional to leverage `w_e R_e`.
    Ss,
    Uniform,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Ss => "ss",
            Strategy::Uniform => "uniform",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sparsifier {
    pub graph: WeightedGraph,
    pub strategy: Strategy,
    pub q: u64,
    pub target_fraction: Option<f64>,
    pub seed: u64,
    pub epsilon: Option<f64>,
    /// Original edge index of each sparsifier edge.
    pub source_edges: Vec<usize>,
    /// Times each sparsifier edge was drawn.
    pub counts: Vec<u64>,
}

/// Sidecar describing how a sparsifier was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsifierMeta {
    pub strategy: Strategy,
    pub q: u64,
    pub fraction: Option<f64>,
    pub seed: u64,
    pub epsilon: Option<f64>,
    pub distinct_edges: usize,
    pub original_edges: usize,
    pub components: usize,
}

impl Sparsifier {
    /// Fraction of the original edges present in the sparsifier.
    pub fn edge_fraction(&self, original_m: usize) -> f64 {
        self.graph.m() as f64 / original_m as f64
    }

    pub fn meta(&self, original_m: usize) -> SparsifierMeta {
        SparsifierMeta {
            strategy: self.strategy,
            q: self.q,
            fraction: self.target_fraction,
            seed: self.seed,
            epsilon: self.epsilon,
            distinct_edges: self.graph.m(),
            original_edges: original_m,
            components: connected_components(&self.graph).count(),
        }
    }

    pub fn with_target_fraction(mut self, fraction: f64) -> Self {
        self.target_fraction = Some(fraction);
        self
    }
}

fn validate_distribution(p: &[f64], m: usize) -> Result<()> {
    if p.len() != m {
        return Err(Error::LengthMismatch(p.len(), m));
    }
    if p.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
        return Err(Error::InvalidParameter(
            "sampling probabilities must be finite and non-negative".into(),
        ));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "sampling probabilities sum to {total}, expected 1"
        )));
    }
    Ok(())
}

/// Draws `q` edges i.i.d. from `p` by inverting the cumulative distribution
/// and reweights the selected edges to `count_e · w_e / (p_e q)`.
pub fn sample_with_probabilities(
    g: &WeightedGraph,
    p: &[f64],
    q: u64,
    seed: u64,
    strategy: Strategy,
) -> Result<Sparsifier> {
    if q < 1 {
        return Err(Error::InvalidParameter(
            "sample count q must be at least 1".into(),
        ));
    }
    if g.m() == 0 {
        return Err(Error::InvalidGraph(
            "cannot sample from a graph without edges".into(),
        ));
    }
    validate_distribution(p, g.m())?;

    let mut cumulative = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for &x in p {
        acc += x;
        cumulative.push(acc);
    }
    let total = acc;
    let last_positive = p.iter().rposition(|&x| x > 0.0).unwrap_or(0);

    let mut counts = vec![0u64; g.m()];
    let mut rng = rng::rng(seed);
    for _ in 0..q {
        let u = rng.random::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c <= u).min(last_positive);
        counts[idx] += 1;
    }

    let qf = q as f64;
    let mut selection = Vec::new();
    let mut kept_counts = Vec::new();
    for (idx, &c) in counts.iter().enumerate() {
        if c > 0 {
            let w = c as f64 * g.edge(idx).w / (p[idx] * qf);
            selection.push((idx, w));
            kept_counts.push(c);
        }
    }
    let graph = g.reweighted_subgraph(&selection)?;
    Ok(Sparsifier {
        graph,
        strategy,
        q,
        target_fraction: None,
        seed,
        epsilon: None,
        source_edges: selection.iter().map(|&(i, _)| i).collect(),
        counts: kept_counts,
    })
}

/// Effective-resistance sampling: `p_e = w_e R_e / Σ w R`.
pub fn ss_sample(
    g: &WeightedGraph,
    sketch: &ResistanceSketch,
    q: u64,
    seed: u64,
) -> Result<Sparsifier> {
    sketch.matches(g)?;
    let p = sketch.sampling_probabilities();
    let mut s = sample_with_probabilities(g, &p, q, seed, Strategy::Ss)?;
    s.epsilon = sketch.epsilon();
    Ok(s)
}

pub fn uniform_probabilities(m: usize) -> Vec<f64> {
    vec![1.0 / m as f64; m]
}

/// Uniform null model: `p_e = 1/m`.
pub fn uniform_sample(g: &WeightedGraph, q: u64, seed: u64) -> Result<Sparsifier> {
    let p = uniform_probabilities(g.m());
    sample_with_probabilities(g, &p, q, seed, Strategy::Uniform)
}

/// `Σ_e 1 - (1 - p_e)^q`, the expected number of distinct edges after `q`
/// draws.
pub fn expected_distinct(p: &[f64], q: u64) -> f64 {
    let qf = q as f64;
    p.iter()
        .map(|&x| {
            if x >= 1.0 {
                1.0
            } else {
                -(qf * (-x).ln_1p()).exp_m1()
            }
        })
        .sum()
}

const Q_CAP: u64 = 1 << 50;

/// Smallest `q` whose expected distinct-edge count reaches `fraction · m`.
///
/// The target is capped at `m - 1/2` because the expectation only reaches
/// `m` in the limit. Doubling brackets the answer, bisection finds it.
pub fn q_for_fraction(g: &WeightedGraph, p: &[f64], fraction: f64) -> Result<u64> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "fraction must lie in (0, 1], got {fraction}"
        )));
    }
    let m = g.m();
    if m == 0 {
        return Err(Error::InvalidGraph("graph has no edges".into()));
    }
    validate_distribution(p, m)?;
    let positive = p.iter().filter(|&&x| x > 0.0).count() as f64;
    let target = (fraction * m as f64).min(m as f64 - 0.5);
    if target > positive {
        return Err(Error::InvalidParameter(format!(
            "only {positive} edges have positive probability; cannot reach {target}"
        )));
    }

    let reaches = |q: u64| expected_distinct(p, q) >= target;
    let mut hi = 1u64;
    while !reaches(hi) {
        if hi >= Q_CAP {
            return Err(Error::InvalidParameter(
                "target fraction needs too many samples".into(),
            ));
        }
        hi *= 2;
    }
    let mut lo = hi / 2; // reaches(lo) is false unless lo == 0
    if lo == 0 {
        return Ok(1);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `1 - w_e R_e`: near 1 when many strong alternate paths bypass the edge,
/// 0 for bridges.
pub fn embeddedness(sketch: &ResistanceSketch, edge: usize) -> Result<f64> {
    sketch
        .leverages()
        .get(edge)
        .map(|l| 1.0 - l)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown edge index {edge}")))
}
