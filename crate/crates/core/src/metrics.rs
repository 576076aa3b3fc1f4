//! Fidelity metrics between SI trajectories and edge-importance correlation.
//!
//! Per timestep, the baseline averages a metric over independent runs on the
//! original network (all unordered run pairs for Hamming distance and mutual
//! information, single runs for the fraction infected). A sparsifier is
//! judged by the same average over all (original run, sparsifier run) pairs.
//! Intervals are normal approximations, `mean ± 1.96 · s / √count`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::contagion::{ImportanceTable, StateVec, Trajectory};
use crate::error::{Error, Result};
use crate::par::Execution;

pub const Z_95: f64 = 1.96;

pub fn hamming(a: &StateVec, b: &StateVec) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.count_diff(b))
}

/// `(c/n) log2(c n / (ra rb))` from integer counts, so an independent cell
/// gives a ratio of exactly one.
fn cell(c: usize, ra: usize, rb: usize, n: usize) -> f64 {
    if c == 0 {
        return 0.0;
    }
    let ratio = (c as f64 * n as f64) / (ra as f64 * rb as f64);
    c as f64 / n as f64 * ratio.log2()
}

/// Mutual information, in bits, of the paired bits `(a_v, b_v)` over
/// vertices, from their 2×2 contingency table. `0 · log 0 = 0`.
pub fn mutual_information(a: &StateVec, b: &StateVec) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter("state vectors are empty".into()));
    }
    let n = a.len();
    let (a1, b1) = (a.count_ones(), b.count_ones());
    let n11 = a.count_both(b);
    let (n10, n01) = (a1 - n11, b1 - n11);
    let n00 = n - n11 - n10 - n01;
    let (a0, b0) = (n - a1, n - b1);
    let mi =
        cell(n11, a1, b1, n) + cell(n10, a1, b0, n) + cell(n01, a0, b1, n) + cell(n00, a0, b0, n);
    // Rounding can leave a tiny negative value for independent tables.
    Ok(mi.max(0.0))
}

/// Shannon entropy, in bits, of the bit distribution of `a`.
pub fn entropy(a: &StateVec) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let p = a.count_ones() as f64 / a.len() as f64;
    [p, 1.0 - p]
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

pub fn fraction_infected(a: &StateVec) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.count_ones() as f64 / a.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Hamming,
    Mi,
    Fraction,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Hamming, Metric::Mi, Metric::Fraction];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Hamming => "hamming",
            Metric::Mi => "mi",
            Metric::Fraction => "fraction",
        }
    }

    fn pairwise(self, a: &StateVec, b: &StateVec) -> f64 {
        match self {
            Metric::Hamming => a.count_diff(b) as f64,
            Metric::Mi => mutual_information(a, b).unwrap_or(0.0),
            Metric::Fraction => unreachable!("fraction is not a pairwise metric"),
        }
    }
}

/// Per-timestep mean of a metric with its 95% half-width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSeries {
    pub metric: Metric,
    pub label: String,
    pub mean: Vec<f64>,
    pub half_width: Vec<f64>,
    /// Number of values averaged at each timestep.
    pub count: usize,
}

impl MetricSeries {
    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    pub fn ci_lo(&self, t: usize) -> f64 {
        self.mean[t] - self.half_width[t]
    }

    pub fn ci_hi(&self, t: usize) -> f64 {
        self.mean[t] + self.half_width[t]
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Share of timesteps where `other`'s mean lies inside this series' band.
    pub fn coverage_of(&self, other: &MetricSeries) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        if self.is_empty() {
            return Ok(1.0);
        }
        let inside = (0..self.len())
            .filter(|&t| {
                let x = other.mean[t];
                x >= self.ci_lo(t) && x <= self.ci_hi(t)
            })
            .count();
        Ok(inside as f64 / self.len() as f64)
    }

    pub fn write_csv_header<W: Write>(mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,mean,ci_lo,ci_hi,metric,label")
    }

    /// `t,mean,ci_lo,ci_hi,metric,label` rows, without a header.
    pub fn write_csv_rows<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for t in 0..self.len() {
            writeln!(
                out,
                "{t},{:?},{:?},{:?},{},{}",
                self.mean[t],
                self.ci_lo(t),
                self.ci_hi(t),
                self.metric.name(),
                self.label
            )?;
        }
        Ok(())
    }
}

/// Mean and 95% half-width of a sample.
pub fn mean_ci(values: &[f64]) -> (f64, f64) {
    let k = values.len();
    if k == 0 {
        return (f64::NAN, 0.0);
    }
    // Shifted by the first value so constant samples come out exact.
    let x0 = values[0];
    let mean = x0 + values.iter().map(|x| x - x0).sum::<f64>() / k as f64;
    if k < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    (mean, Z_95 * (var / k as f64).sqrt())
}

fn check_runs(runs: &[Trajectory], what: &str) -> Result<(usize, usize, usize)> {
    let first = runs
        .first()
        .ok_or_else(|| Error::Incomparable(format!("no {what} runs")))?;
    let (t, n, p0) = (first.timesteps(), first.n(), first.patient_zero);
    for r in runs {
        if r.timesteps() != t {
            return Err(Error::Incomparable(format!(
                "{what} runs have {} and {t} timesteps",
                r.timesteps()
            )));
        }
        if r.n() != n {
            return Err(Error::Incomparable(format!(
                "{what} runs have {} and {n} vertices",
                r.n()
            )));
        }
        if r.patient_zero != p0 {
            return Err(Error::Incomparable(format!(
                "{what} runs start from {} and {p0}",
                r.patient_zero
            )));
        }
    }
    Ok((t, n, p0))
}

fn series(metric: Metric, label: &str, per_step: Vec<Vec<f64>>) -> MetricSeries {
    let count = per_step.first().map_or(0, |v| v.len());
    let (mean, half_width) = per_step.iter().map(|v| mean_ci(v)).unzip();
    MetricSeries {
        metric,
        label: label.to_string(),
        mean,
        half_width,
        count,
    }
}

/// Baseline of `metric` among independent runs on one network.
pub fn baseline(runs: &[Trajectory], metric: Metric, exec: Execution) -> Result<MetricSeries> {
    if runs.len() < 2 {
        return Err(Error::Incomparable(
            "baseline needs at least two runs".into(),
        ));
    }
    let (steps, _, _) = check_runs(runs, "baseline")?;
    let per_step = exec.map_range(steps, |t| match metric {
        Metric::Fraction => runs
            .iter()
            .map(|r| fraction_infected(&r.states[t]))
            .collect(),
        _ => {
            let mut vals = Vec::with_capacity(runs.len() * (runs.len() - 1) / 2);
            for i in 0..runs.len() {
                for j in i + 1..runs.len() {
                    vals.push(metric.pairwise(&runs[i].states[t], &runs[j].states[t]));
                }
            }
            vals
        }
    });
    Ok(series(metric, "baseline", per_step))
}

/// `metric` between runs on the original network and runs on a sparsifier.
///
/// Hamming distance and mutual information average over every cross pair;
/// the fraction infected is the sparsifier runs' own mean.
pub fn compare_series(
    original: &[Trajectory],
    cpns: &[Trajectory],
    metric: Metric,
    exec: Execution,
) -> Result<MetricSeries> {
    let (t0, n0, p0) = check_runs(original, "original")?;
    let (t1, n1, p1) = check_runs(cpns, "sparsifier")?;
    if (t0, n0, p0) != (t1, n1, p1) {
        return Err(Error::Incomparable(format!(
            "original (T={t0}, N={n0}, patient zero {p0}) vs sparsifier (T={t1}, N={n1}, patient zero {p1})"
        )));
    }
    let per_step = exec.map_range(t0, |t| match metric {
        Metric::Fraction => cpns
            .iter()
            .map(|r| fraction_infected(&r.states[t]))
            .collect(),
        _ => {
            let mut vals = Vec::with_capacity(original.len() * cpns.len());
            for a in original {
                for b in cpns {
                    vals.push(metric.pairwise(&a.states[t], &b.states[t]));
                }
            }
            vals
        }
    });
    Ok(series(metric, "cpns", per_step))
}

/// Pearson correlation coefficient.
///
/// A column whose spread is below `1e-12` of its magnitude counts as
/// constant, and the coefficient is then undefined.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "correlation needs at least two points".into(),
        ));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    let flat = |s: f64, v: &[f64]| {
        let scale = v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        s <= nf * (1e-12 * scale).powi(2)
    };
    if flat(sxx, x) || flat(syy, y) {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// Each edge's (EEI, leverage) point.
    #[default]
    Paired,
    /// Sorted EEI values against sorted leverage values.
    Quantile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImportancePairs {
    /// `(normalized EEI, normalized leverage)` points.
    pub pairs: Vec<(f64, f64)>,
    /// `None` when one column is constant.
    pub r: Option<f64>,
}

impl ImportancePairs {
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# eei_normalized\tleverage_normalized")?;
        for (a, b) in &self.pairs {
            writeln!(out, "{a:?}\t{b:?}")?;
        }
        out.flush()
    }
}

/// Normalized importance points and their Pearson correlation.
pub fn importance_pairs(table: &ImportanceTable, pairing: Pairing) -> Result<ImportancePairs> {
    if table.is_empty() {
        return Err(Error::InvalidParameter("importance table is empty".into()));
    }
    for (name, col) in [("eei", &table.eei), ("leverage", &table.leverage)] {
        if col.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} column is all zero"
            )));
        }
    }
    let mut x = table.eei_normalized.clone();
    let mut y = table.leverage_normalized.clone();
    if pairing == Pairing::Quantile {
        x.sort_by(f64::total_cmp);
        y.sort_by(f64::total_cmp);
    }
    let r = match pearson_r(&x, &y) {
        Ok(r) => Some(r),
        Err(Error::ZeroVariance) => None,
        Err(Error::InvalidParameter(_)) if x.len() < 2 => None,
        Err(e) => return Err(e),
    };
    Ok(ImportancePairs {
        pairs: x.into_iter().zip(y).collect(),
        r,
    })
}
