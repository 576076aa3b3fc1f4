//! Random network families: configuration model with exponential-logarithmic
//! degrees, a planted-partition block model, and complete graphs with normal
//! or power-law weights.
//!
//! Each family is a pure function of its [`GeneratorSpec`], seed included.

use std::collections::HashSet;

use rand::Rng as _;
use rand_distr::{Distribution, Normal, Pareto};
use serde::{Deserialize, Serialize};

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// Configuration model, unit weights, degrees drawn from the
    /// exponential-logarithmic distribution with shape `p` and rate `beta`.
    ConfigurationExplog { p: f64, beta: f64 },
    /// Stochastic block model with equal-size blocks and unit weights.
    #[serde(rename = "sbm4")]
    Sbm {
        blocks: usize,
        p_in: f64,
        p_out: f64,
    },
    /// Complete graph, weights ~ Normal(mean, sd) truncated below at 1e-6.
    CompleteNormal { mean: f64, sd: f64 },
    /// Complete graph, weights with density ∝ w^-alpha on [w_min, ∞).
    CompletePowerlaw { alpha: f64, w_min: f64 },
}

impl Family {
    pub fn configuration_explog() -> Self {
        Family::ConfigurationExplog { p: 0.5, beta: 0.05 }
    }

    pub fn sbm4() -> Self {
        Family::Sbm {
            blocks: 4,
            p_in: 0.05,
            p_out: 0.005,
        }
    }

    pub fn complete_normal() -> Self {
        Family::CompleteNormal {
            mean: 1.0,
            sd: 0.25,
        }
    }

    pub fn complete_powerlaw() -> Self {
        Family::CompletePowerlaw {
            alpha: 2.5,
            w_min: 100.0,
        }
    }

    /// Family with default parameters, by CLI name.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "configuration-explog" => Some(Self::configuration_explog()),
            "sbm4" => Some(Self::sbm4()),
            "complete-normal" => Some(Self::complete_normal()),
            "complete-powerlaw" => Some(Self::complete_powerlaw()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::ConfigurationExplog { .. } => "configuration-explog",
            Family::Sbm { .. } => "sbm4",
            Family::CompleteNormal { .. } => "complete-normal",
            Family::CompletePowerlaw { .. } => "complete-powerlaw",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self { family, n, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let n = self.n;
        if n == 0 {
            return bad("n must be at least 1".into());
        }
        match self.family {
            Family::ConfigurationExplog { p, beta } => {
                if n < 2 {
                    return bad("configuration model needs n >= 2".into());
                }
                if !(p > 0.0 && p < 1.0) {
                    return bad(format!("explog shape p must lie in (0, 1), got {p}"));
                }
                if !(beta > 0.0 && beta.is_finite()) {
                    return bad(format!("explog rate beta must be positive, got {beta}"));
                }
            }
            Family::Sbm {
                blocks,
                p_in,
                p_out,
            } => {
                if blocks == 0 || blocks > n {
                    return bad(format!("block count {blocks} invalid for n = {n}"));
                }
                for (name, p) in [("p_in", p_in), ("p_out", p_out)] {
                    if !(0.0..=1.0).contains(&p) {
                        return bad(format!("{name} must lie in [0, 1], got {p}"));
                    }
                }
            }
            Family::CompleteNormal { mean, sd } => {
                if !(mean.is_finite() && sd.is_finite() && sd >= 0.0) {
                    return bad(format!("bad normal parameters mean={mean} sd={sd}"));
                }
                if sd == 0.0 && mean <= 0.0 {
                    return bad("degenerate normal with non-positive mean".into());
                }
            }
            Family::CompletePowerlaw { alpha, w_min } => {
                if !(alpha > 1.0 && alpha.is_finite()) {
                    return bad(format!("power-law exponent must exceed 1, got {alpha}"));
                }
                if !(w_min > 0.0 && w_min.is_finite()) {
                    return bad(format!("power-law minimum must be positive, got {w_min}"));
                }
            }
        }
        Ok(())
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<WeightedGraph> {
    spec.validate()?;
    let mut rng = rng::rng(spec.seed);
    let n = spec.n;
    match spec.family {
        Family::ConfigurationExplog { p, beta } => configuration_explog(n, p, beta, &mut rng),
        Family::Sbm {
            blocks,
            p_in,
            p_out,
        } => sbm(n, blocks, p_in, p_out, &mut rng),
        Family::CompleteNormal { mean, sd } => {
            let normal = Normal::new(mean, sd)
                .map_err(|e| Error::InvalidParameter(format!("normal: {e}")))?;
            complete(n, || loop {
                let w = normal.sample(&mut rng);
                if w >= 1e-6 {
                    break w;
                }
            })
        }
        Family::CompletePowerlaw { alpha, w_min } => {
            // Density ∝ w^-alpha is a Pareto law with shape alpha - 1.
            let pareto = Pareto::new(w_min, alpha - 1.0)
                .map_err(|e| Error::InvalidParameter(format!("pareto: {e}")))?;
            complete(n, || pareto.sample(&mut rng))
        }
    }
}

fn complete(n: usize, mut weight: impl FnMut() -> f64) -> Result<WeightedGraph> {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, weight()));
        }
    }
    WeightedGraph::new(n, edges)
}

fn block_of(n: usize, blocks: usize) -> Vec<usize> {
    // The first n % blocks blocks get one extra vertex.
    let base = n / blocks;
    let extra = n % blocks;
    let mut out = Vec::with_capacity(n);
    for b in 0..blocks {
        let size = base + usize::from(b < extra);
        out.extend(std::iter::repeat_n(b, size));
    }
    out
}

fn sbm(
    n: usize,
    blocks: usize,
    p_in: f64,
    p_out: f64,
    rng: &mut rng::Rng,
) -> Result<WeightedGraph> {
    let block = block_of(n, blocks);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if block[u] == block[v] { p_in } else { p_out };
            if rng.random::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    WeightedGraph::new(n, edges)
}

/// Inverse-CDF sample of the exponential-logarithmic distribution.
///
/// Survival function `S(x) = ln(1 - (1 - p) e^{-βx}) / ln p`, so for `s` in
/// (0, 1], `x = ln((1 - p) / (1 - p^s)) / β`.
pub fn explog_quantile(s: f64, p: f64, beta: f64) -> f64 {
    ((1.0 - p) / (1.0 - p.powf(s))).ln() / beta
}

const DEGREE_ATTEMPTS: usize = 200;
const PAIRING_RESTARTS: usize = 5;

fn configuration_explog(n: usize, p: f64, beta: f64, rng: &mut rng::Rng) -> Result<WeightedGraph> {
    for _ in 0..DEGREE_ATTEMPTS {
        let degrees = loop {
            let d: Vec<usize> = (0..n)
                .map(|_| {
                    let s = 1.0 - rng.random::<f64>();
                    let x = explog_quantile(s, p, beta).round();
                    // f64 -> usize saturates, so an infinite draw clamps too.
                    (x as usize).clamp(1, n - 1)
                })
                .collect();
            if d.iter().sum::<usize>() % 2 == 0 {
                break d;
            }
        };
        if !is_graphical(&degrees) {
            continue;
        }
        let paired = (0..PAIRING_RESTARTS).find_map(|_| pair_stubs(&degrees, rng));
        let edges = match paired {
            Some(edges) => edges,
            None => {
                // Dense or skewed sequences rarely pair up simply; build one
                // realization deterministically and randomize it instead.
                let Some(mut edges) = havel_hakimi(&degrees) else {
                    continue;
                };
                let swaps = 10 * edges.len();
                shuffle_edges(&mut edges, swaps, rng);
                edges
            }
        };
        return WeightedGraph::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)));
    }
    Err(Error::InvalidParameter(format!(
        "no simple configuration-model realization found for n = {n}"
    )))
}

/// Erdős–Gallai test: an even-sum sequence is the degree sequence of a
/// simple graph iff for every k the k largest degrees sum to at most
/// `k(k-1) + Σ_{i>k} min(d_i, k)`.
pub fn is_graphical(degrees: &[usize]) -> bool {
    let mut d = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    if d.iter().sum::<usize>() % 2 == 1 {
        return false;
    }
    let mut head = 0usize;
    for k in 1..=d.len() {
        head += d[k - 1];
        let tail: usize = d[k..].iter().map(|&x| x.min(k)).sum();
        if head > k * (k - 1) + tail {
            return false;
        }
    }
    true
}

/// Havel–Hakimi construction of a simple graph with the given degrees.
fn havel_hakimi(degrees: &[usize]) -> Option<Vec<(usize, usize)>> {
    let mut residual: Vec<(usize, usize)> = degrees
        .iter()
        .copied()
        .enumerate()
        .map(|(x, d)| (d, x))
        .collect();
    let mut edges = Vec::new();
    loop {
        residual.sort_unstable_by(|a, b| b.cmp(a));
        let (d, x) = residual[0];
        if d == 0 {
            return Some(edges);
        }
        if d >= residual.len() {
            return None;
        }
        residual[0].0 = 0;
        for slot in residual.iter_mut().skip(1).take(d) {
            if slot.0 == 0 {
                return None;
            }
            slot.0 -= 1;
            edges.push((x.min(slot.1), x.max(slot.1)));
        }
    }
}

/// Degree-preserving double-edge swaps: `(a, b), (c, d) → (a, d), (c, b)`
/// whenever the result stays simple.
fn shuffle_edges(edges: &mut [(usize, usize)], swaps: usize, rng: &mut rng::Rng) {
    if edges.len() < 2 {
        return;
    }
    let key = |x: usize, y: usize| (x.min(y), x.max(y));
    let mut seen: HashSet<(usize, usize)> = edges.iter().copied().collect();
    for _ in 0..swaps {
        let i = rng.random_range(0..edges.len());
        let j = rng.random_range(0..edges.len());
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (c, d) = if rng.random::<bool>() {
            edges[j]
        } else {
            (edges[j].1, edges[j].0)
        };
        if a == d || c == b || a == c || b == d {
            continue;
        }
        let (ad, cb) = (key(a, d), key(c, b));
        if seen.contains(&ad) || seen.contains(&cb) {
            continue;
        }
        seen.remove(&edges[i]);
        seen.remove(&edges[j]);
        seen.insert(ad);
        seen.insert(cb);
        edges[i] = ad;
        edges[j] = cb;
    }
}

/// Pairs stubs uniformly at random, redrawing any pair that would form a
/// self-loop or a repeated edge. When redraws keep failing (typically near
/// the end, with few stubs left), the stuck pair `(a, b)` is placed by
/// rewiring an existing edge `(c, d)` into `(a, c)` and `(b, d)`, which keeps
/// every degree. Returns `None` if neither move succeeds.
fn pair_stubs(degrees: &[usize], rng: &mut rng::Rng) -> Option<Vec<(usize, usize)>> {
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(x, &d)| std::iter::repeat_n(x, d))
        .collect();
    let mut seen = HashSet::with_capacity(stubs.len() / 2);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(stubs.len() / 2);
    let mut streak = 0usize;
    while stubs.len() >= 2 {
        let len = stubs.len();
        let i = rng.random_range(0..len);
        let mut j = rng.random_range(0..len - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = (stubs[i], stubs[j]);
        let placed = if a != b && !seen.contains(&key(a, b)) {
            seen.insert(key(a, b));
            edges.push(key(a, b));
            true
        } else {
            streak += 1;
            streak >= 10 && rewire(a, b, &mut edges, &mut seen, rng)
        };
        if placed {
            streak = 0;
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
        } else if streak > 200 {
            return None;
        }
    }
    Some(edges)
}

fn rewire(
    a: usize,
    b: usize,
    edges: &mut Vec<(usize, usize)>,
    seen: &mut HashSet<(usize, usize)>,
    rng: &mut rng::Rng,
) -> bool {
    let key = |x: usize, y: usize| (x.min(y), x.max(y));
    if edges.is_empty() {
        return false;
    }
    for _ in 0..100 {
        let idx = rng.random_range(0..edges.len());
        let (c, d) = if rng.random::<bool>() {
            edges[idx]
        } else {
            (edges[idx].1, edges[idx].0)
        };
        let (ac, bd) = (key(a, c), key(b, d));
        if a == c || b == d || ac == bd || seen.contains(&ac) || seen.contains(&bd) {
            continue;
        }
        seen.remove(&key(c, d));
        edges.swap_remove(idx);
        seen.insert(ac);
        seen.insert(bd);
        edges.push(ac);
        edges.push(bd);
        return true;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sbm4_blocks_and_unit_weights() {
        assert_eq!(block_of(500, 4).iter().filter(|&&b| b == 3).count(), 125);
        let sizes: Vec<usize> = (0..4)
            .map(|b| block_of(10, 4).iter().filter(|&&x| x == b).count())
            .collect();
        assert_eq!(sizes, vec![3, 3, 2, 2]);

        let g = generate(&GeneratorSpec::new(Family::sbm4(), 500, 1)).unwrap();
        assert_eq!(g.n(), 500);
        assert!(g.edges().iter().all(|e| e.w == 1.0));
        let block = block_of(500, 4);
        let intra = g
            .edges()
            .iter()
            .filter(|e| block[e.u] == block[e.v])
            .count();
        // Expected 4 * C(125,2) * 0.05 = 1550 intra, 6 * 125^2 * 0.005 ≈ 469 inter.
        assert!((1350..1750).contains(&intra), "{intra}");
        assert!((350..600).contains(&(g.m() - intra)), "{}", g.m() - intra);
    }

    #[test]
    fn complete_families() {
        for family in [Family::complete_normal(), Family::complete_powerlaw()] {
            let g = generate(&GeneratorSpec::new(family.clone(), 100, 3)).unwrap();
            assert_eq!(g.m(), 4950);
            assert!(g.edges().iter().all(|e| e.w > 0.0));
            if let Family::CompletePowerlaw { w_min, .. } = family {
                assert!(g.edges().iter().all(|e| e.w >= w_min));
            }
        }
        assert_eq!(
            generate(&GeneratorSpec::new(Family::complete_normal(), 1, 0))
                .unwrap()
                .m(),
            0
        );
    }

    #[test]
    fn configuration_model_is_simple_unit_weighted() {
        let g = generate(&GeneratorSpec::new(Family::configuration_explog(), 500, 9)).unwrap();
        assert_eq!(g.n(), 500);
        assert!(g.edges().iter().all(|e| e.w == 1.0));
        assert!((0..500).all(|x| g.degree(x) >= 1));
        // Mean of the explog law at p = 0.5, beta = 0.05 is Li2(1/2)/(0.05 ln 2) ≈ 16.8.
        let mean_degree = 2.0 * g.m() as f64 / 500.0;
        assert!((12.0..22.0).contains(&mean_degree), "{mean_degree}");
    }

    #[test]
    fn havel_hakimi_and_swaps_keep_degrees() {
        let degrees = [5, 5, 4, 3, 3, 2, 2, 1, 1];
        let mut edges = havel_hakimi(&degrees).unwrap();
        let mut rng = rng::rng(3);
        shuffle_edges(&mut edges, 500, &mut rng);
        let g = WeightedGraph::new(9, edges.iter().map(|&(u, v)| (u, v, 1.0))).unwrap();
        let got: Vec<usize> = (0..9).map(|x| g.degree(x)).collect();
        assert_eq!(got, degrees);
        assert!(havel_hakimi(&[3, 3, 1, 1]).is_none());
    }

    #[test]
    fn graphical_sequences() {
        assert!(is_graphical(&[1, 1]));
        assert!(is_graphical(&[2, 2, 2]));
        assert!(is_graphical(&[3, 3, 3, 3]));
        assert!(!is_graphical(&[3, 3, 1, 1]));
        assert!(!is_graphical(&[2, 1]));
        assert!(is_graphical(&[3, 1, 1, 1, 1, 1]));
        assert!(!is_graphical(&[4, 4, 1, 1]));
    }

    #[test]
    fn explog_quantile_matches_survival_function() {
        let (p, beta) = (0.5, 0.05);
        for s in [0.1, 0.5, 0.9] {
            let x = explog_quantile(s, p, beta);
            let surv = (1.0 - (1.0 - p) * (-beta * x).exp()).ln() / p.ln();
            assert!((surv - s).abs() < 1e-12);
        }
        assert_eq!(explog_quantile(1.0, p, beta), 0.0);
    }

    #[test]
    fn deterministic_per_seed() {
        for family in [
            Family::configuration_explog(),
            Family::sbm4(),
            Family::complete_normal(),
            Family::complete_powerlaw(),
        ] {
            let a = generate(&GeneratorSpec::new(family.clone(), 60, 42)).unwrap();
            let b = generate(&GeneratorSpec::new(family.clone(), 60, 42)).unwrap();
            let c = generate(&GeneratorSpec::new(family, 60, 43)).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn invalid_parameters() {
        let bad = [
            GeneratorSpec::new(Family::ConfigurationExplog { p: 1.5, beta: 0.05 }, 10, 0),
            GeneratorSpec::new(Family::ConfigurationExplog { p: 0.5, beta: 0.0 }, 10, 0),
            GeneratorSpec::new(Family::configuration_explog(), 1, 0),
            GeneratorSpec::new(
                Family::Sbm {
                    blocks: 20,
                    p_in: 0.1,
                    p_out: 0.1,
                },
                10,
                0,
            ),
            GeneratorSpec::new(
                Family::Sbm {
                    blocks: 2,
                    p_in: 1.1,
                    p_out: 0.1,
                },
                10,
                0,
            ),
            GeneratorSpec::new(
                Family::CompletePowerlaw {
                    alpha: 1.0,
                    w_min: 1.0,
                },
                10,
                0,
            ),
            GeneratorSpec::new(
                Family::CompleteNormal {
                    mean: 1.0,
                    sd: -1.0,
                },
                10,
                0,
            ),
            GeneratorSpec::new(Family::sbm4(), 0, 0),
        ];
        for spec in bad {
            assert!(generate(&spec).is_err(), "{spec:?}");
        }
    }

    #[test]
    fn family_names_round_trip() {
        for name in [
            "configuration-explog",
            "sbm4",
            "complete-normal",
            "complete-powerlaw",
        ] {
            assert_eq!(Family::by_name(name).unwrap().name(), name);
        }
        assert!(Family::by_name("erdos-renyi").is_none());
    }
}
