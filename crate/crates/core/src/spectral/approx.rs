use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{solver, Method, PairData, ResistanceSketch};
use crate::error::{Error, Result};
use crate::graph::{connected_components, laplacian, WeightedGraph};
use crate::par::Execution;
use crate::rng;

/// Projection rows handled together; fixes the summation order so the result
/// does not depend on the execution mode.
const ROW_BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SketchConfig {
    pub epsilon: f64,
    pub seed: u64,
    /// `k = ⌈constant · ln n / ε²⌉`.
    pub jl_constant: f64,
    /// Keep the `k × n` projection for vertex-pair queries.
    pub keep_embedding: bool,
    #[serde(skip)]
    pub execution: Execution,
}

impl SketchConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self {
            epsilon,
            seed,
            jl_constant: 24.0,
            keep_embedding: false,
            execution: Execution::default(),
        }
    }

    pub fn with_embedding(mut self) -> Self {
        self.keep_embedding = true;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

/// Projection dimension for `n` vertices at distortion `epsilon`.
pub fn jl_dimension(n: usize, epsilon: f64, constant: f64) -> usize {
    let k = (constant * (n.max(2) as f64).ln() / (epsilon * epsilon)).ceil();
    (k as usize).max(1)
}

struct Block {
    sums: Vec<f64>,
    rows: Vec<f64>,
}

/// `(1 ± ε)`-approximate effective resistances.
///
/// Builds `Z = Q W^{1/2} B L⁺` row by row: each row of the random `±1/√k`
/// matrix `Q` gives a right-hand side `y = Bᵀ W^{1/2} qᵀ`, and `L z = y` is
/// solved with preconditioned CG to relative residual `ε / 100` within
/// `10 n` iterations. Then `R_e = ‖Z(χ_u - χ_v)‖²`.
pub fn approx_resistance(g: &WeightedGraph, config: &SketchConfig) -> Result<ResistanceSketch> {
    let eps = config.epsilon;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {eps}"
        )));
    }
    if !(config.jl_constant > 0.0 && config.jl_constant.is_finite()) {
        return Err(Error::InvalidParameter(
            "JL constant must be positive".into(),
        ));
    }
    let n = g.n();
    let m = g.m();
    let k = jl_dimension(n, eps, config.jl_constant);
    let lap = laplacian(g);
    let scale = 1.0 / (k as f64).sqrt();
    let sqrt_w: Vec<f64> = g.edges().iter().map(|e| e.w.sqrt()).collect();
    let rel_tol = eps * 1e-2;
    let max_iter = 10 * n;
    let blocks = k.div_ceil(ROW_BLOCK);
    log::debug!("jl sketch: n={n} m={m} k={k} eps={eps}");

    let solve_block = |b: usize| -> Result<Block> {
        let rows = (b * ROW_BLOCK)..((b + 1) * ROW_BLOCK).min(k);
        let mut sums = vec![0.0; m];
        let mut kept = Vec::new();
        let mut y = vec![0.0; n];
        for r in rows {
            let mut rng = rng::stream(config.seed, r as u64, 0);
            y.iter_mut().for_each(|v| *v = 0.0);
            for (e, edge) in g.edges().iter().enumerate() {
                let s = if rng.random::<bool>() { scale } else { -scale };
                let c = s * sqrt_w[e];
                y[edge.u] += c;
                y[edge.v] -= c;
            }
            let (z, _) = solver::solve(&lap, &y, rel_tol, max_iter)?;
            for (e, edge) in g.edges().iter().enumerate() {
                let d = z[edge.u] - z[edge.v];
                sums[e] += d * d;
            }
            if config.keep_embedding {
                kept.extend_from_slice(&z);
            }
        }
        Ok(Block { sums, rows: kept })
    };

    let results = config.execution.map_range(blocks, solve_block);
    let mut resistance = vec![0.0; m];
    let mut z = Vec::new();
    for block in results {
        let block = block?;
        for (acc, s) in resistance.iter_mut().zip(&block.sums) {
            *acc += s;
        }
        z.extend(block.rows);
    }
    let pair = if config.keep_embedding {
        PairData::Embedding { k, z }
    } else {
        PairData::None
    };
    Ok(ResistanceSketch::new(
        Method::JlApprox,
        Some(eps),
        g,
        resistance,
        connected_components(g),
        pair,
    ))
}
