use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use cpns_core::contagion::{epidemic_edge_importance, si_runs, EeiConfig, SIConfig, Trajectory};
use cpns_core::graph::{load_edge_list, write_edge_list, Family, GeneratorSpec};
use cpns_core::metrics::{baseline, compare_series, importance_pairs, Metric, MetricSeries};
use cpns_core::rng::{stream, stream_seed};
use cpns_core::sparsify::{
    q_for_fraction, ss_sample, uniform_probabilities, uniform_sample, Strategy,
};
use cpns_core::spectral::{approx_resistance, exact_resistance, ResistanceSketch, SketchConfig};
use cpns_core::{Error, Execution, WeightedGraph};
use log::info;
use rand::Rng as _;
use serde::Serialize;

use crate::args::{CompareArgs, FamilyArg, GenerateArgs, ImportanceArgs, ResistArgs, SparsifyArgs};
use crate::error::{CliError, Result};
use crate::manifest::{
    CompareParams, GenerateParams, ImportanceParams, Invocation, Mode, ResistParams,
    SparsifierInput, SparsifyParams,
};

/// Stream tags under the master seed.
const STREAM_PATIENT_ZERO: u64 = 0;
const STREAM_ORIGINAL: u64 = 1;
const STREAM_SPARSIFIER: u64 = 2;

pub fn resolve_generate(a: GenerateArgs, seed: u64) -> Result<Invocation> {
    let family = match a.family {
        FamilyArg::ConfigurationExplog => {
            let Family::ConfigurationExplog { p, beta } = Family::configuration_explog() else {
                unreachable!()
            };
            Family::ConfigurationExplog {
                p: a.p.unwrap_or(p),
                beta: a.beta.unwrap_or(beta),
            }
        }
        FamilyArg::Sbm4 => {
            let Family::Sbm {
                blocks,
                p_in,
                p_out,
            } = Family::sbm4()
            else {
                unreachable!()
            };
            Family::Sbm {
                blocks: a.blocks.unwrap_or(blocks),
                p_in: a.p_in.unwrap_or(p_in),
                p_out: a.p_out.unwrap_or(p_out),
            }
        }
        FamilyArg::CompleteNormal => {
            let Family::CompleteNormal { mean, sd } = Family::complete_normal() else {
                unreachable!()
            };
            Family::CompleteNormal {
                mean: a.mean.unwrap_or(mean),
                sd: a.sd.unwrap_or(sd),
            }
        }
        FamilyArg::CompletePowerlaw => {
            let Family::CompletePowerlaw { alpha, w_min } = Family::complete_powerlaw() else {
                unreachable!()
            };
            Family::CompletePowerlaw {
                alpha: a.alpha.unwrap_or(alpha),
                w_min: a.w_min.unwrap_or(w_min),
            }
        }
    };
    let n = a.n.unwrap_or(match a.family {
        FamilyArg::CompleteNormal | FamilyArg::CompletePowerlaw => 100,
        _ => 500,
    });
    let output = a
        .output
        .unwrap_or_else(|| format!("{}-n{n}-s{seed}.tsv", family.name()));
    check_file_name(&output)?;
    let spec = GeneratorSpec::new(family, n, seed);
    spec.validate()?;
    Ok(Invocation::Generate(GenerateParams { spec, output }))
}

pub fn resolve_resist(a: ResistArgs, seed: u64) -> Result<Invocation> {
    check_file_name(&a.output)?;
    Ok(Invocation::Resist(ResistParams {
        input: a.input,
        mode: a.sketch.mode,
        epsilon: a.sketch.epsilon,
        seed,
        output: a.output,
    }))
}

pub fn resolve_sparsify(a: SparsifyArgs, seed: u64) -> Result<Invocation> {
    if a.fraction.is_empty() {
        return Err(CliError::Usage(
            "at least one --fraction is required".into(),
        ));
    }
    if a.draws == 0 {
        return Err(CliError::Usage("--draws must be at least 1".into()));
    }
    Ok(Invocation::Sparsify(SparsifyParams {
        input: a.input,
        strategy: a.strategy.into(),
        fractions: a.fraction,
        draws: a.draws,
        mode: a.sketch.mode,
        epsilon: a.sketch.epsilon,
        seed,
    }))
}

pub fn resolve_compare(a: CompareArgs, seed: u64) -> Result<Invocation> {
    let patient_zero = match a.patient_zero {
        Some(p) => p,
        None => {
            let g = load_edge_list(&a.original)?;
            if g.n() == 0 {
                return Err(Error::InvalidGraph("original network has no vertices".into()).into());
            }
            stream(seed, STREAM_PATIENT_ZERO, 0).random_range(0..g.n())
        }
    };
    Ok(Invocation::Compare(CompareParams {
        original: a.original,
        sparsifiers: a
            .sparsifiers
            .into_iter()
            .map(|(label, path)| SparsifierInput { label, path })
            .collect(),
        gamma: a.gamma,
        timesteps: a.timesteps,
        runs: a.runs,
        cpns_runs: a.cpns_runs,
        patient_zero,
        seed,
    }))
}

pub fn resolve_importance(a: ImportanceArgs, seed: u64) -> Result<Invocation> {
    Ok(Invocation::Importance(ImportanceParams {
        input: a.input,
        gamma: a.gamma,
        runs_per_source: a.runs_per_source,
        mode: a.sketch.mode,
        epsilon: a.sketch.epsilon,
        pairing: a.pairing.into(),
        seed,
    }))
}

/// Executes a resolved invocation and returns the output file names.
pub fn execute(inv: &Invocation, dir: &Path, exec: Execution) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    match inv {
        Invocation::Generate(p) => generate(p, dir),
        Invocation::Resist(p) => resist(p, dir, exec),
        Invocation::Sparsify(p) => sparsify(p, dir, exec),
        Invocation::Compare(p) => compare(p, dir, exec),
        Invocation::Importance(p) => importance(p, dir, exec),
    }
}

fn check_file_name(name: &str) -> Result<()> {
    let p = Path::new(name);
    if name.is_empty() || p.components().count() != 1 || p.file_name().is_none() {
        return Err(CliError::Usage(format!(
            "{name:?} must be a plain file name inside --out-dir"
        )));
    }
    Ok(())
}

fn write_file(
    dir: &Path,
    name: &str,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<String> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
    let mut out = BufWriter::new(file);
    body(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(&path, e))?;
    Ok(name.to_string())
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<String> {
    write_file(dir, name, |out| {
        serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::other)?;
        writeln!(out)
    })
}

fn sketch(
    g: &WeightedGraph,
    mode: Mode,
    epsilon: f64,
    seed: u64,
    exec: Execution,
) -> Result<ResistanceSketch> {
    Ok(match mode {
        Mode::Exact => exact_resistance(g)?,
        Mode::Approx => {
            approx_resistance(g, &SketchConfig::new(epsilon, seed).with_execution(exec))?
        }
    })
}

fn generate(p: &GenerateParams, dir: &Path) -> Result<Vec<String>> {
    let g = cpns_core::graph::generate(&p.spec)?;
    info!(
        "generated {} with n={} m={}",
        p.spec.family.name(),
        g.n(),
        g.m()
    );
    let name = write_file(dir, &p.output, |out| write_edge_list(&g, out))?;
    Ok(vec![name])
}

fn resist(p: &ResistParams, dir: &Path, exec: Execution) -> Result<Vec<String>> {
    let g = load_edge_list(&p.input)?;
    info!(
        "computing {:?} resistances for n={} m={}",
        p.mode,
        g.n(),
        g.m()
    );
    let s = sketch(&g, p.mode, p.epsilon, p.seed, exec)?;
    let name = write_file(dir, &p.output, |out| s.write_tsv(out))?;
    println!(
        "n={} m={} components={} leverage_sum={}",
        g.n(),
        g.m(),
        s.components().count(),
        s.leverage_sum()
    );
    Ok(vec![name])
}

fn percent(fraction: f64) -> String {
    format!("{}", fraction * 100.0)
}

fn sparsify(p: &SparsifyParams, dir: &Path, exec: Execution) -> Result<Vec<String>> {
    let g = load_edge_list(&p.input)?;
    let s = match p.strategy {
        Strategy::Ss => Some(sketch(&g, p.mode, p.epsilon, p.seed, exec)?),
        Strategy::Uniform => None,
    };
    let probs = match &s {
        Some(s) => s.sampling_probabilities(),
        None => uniform_probabilities(g.m()),
    };
    let mut outputs = Vec::new();
    for (i, &fraction) in p.fractions.iter().enumerate() {
        let q = q_for_fraction(&g, &probs, fraction)?;
        for d in 0..p.draws {
            let seed = stream_seed(p.seed, i as u64, d as u64);
            let mut sp = match &s {
                Some(s) => ss_sample(&g, s, q, seed)?,
                None => uniform_sample(&g, q, seed)?,
            }
            .with_target_fraction(fraction);
            if p.strategy == Strategy::Ss && p.mode == Mode::Approx {
                sp.epsilon = Some(p.epsilon);
            }
            let stem = format!("{}-{}-d{d}", p.strategy.name(), percent(fraction));
            info!("{stem}: q={q}, {} of {} edges", sp.graph.m(), g.m());
            outputs.push(write_file(dir, &format!("{stem}.tsv"), |out| {
                write_edge_list(&sp.graph, out)
            })?);
            outputs.push(write_json(dir, &format!("{stem}.json"), &sp.meta(g.m()))?);
        }
    }
    Ok(outputs)
}

fn write_series(dir: &Path, name: &str, series: &[MetricSeries]) -> Result<String> {
    write_file(dir, name, |out| {
        MetricSeries::write_csv_header(&mut *out)?;
        for s in series {
            s.write_csv_rows(&mut *out)?;
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct CompareSummary {
    patient_zero: usize,
    original_runs: usize,
    sparsifiers: Vec<LabelSummary>,
}

/// Share of timesteps whose sparsifier mean lies inside the baseline CI.
#[derive(Serialize)]
struct LabelSummary {
    label: String,
    files: usize,
    runs: usize,
    coverage: BTreeMap<&'static str, f64>,
}

fn compare(p: &CompareParams, dir: &Path, exec: Execution) -> Result<Vec<String>> {
    if p.runs < 2 {
        return Err(CliError::Usage(
            "--runs must be at least 2 for a baseline".into(),
        ));
    }
    if p.cpns_runs == 0 {
        return Err(CliError::Usage("--cpns-runs must be at least 1".into()));
    }
    let g = load_edge_list(&p.original)?;
    let cfg = SIConfig {
        gamma: p.gamma,
        timesteps: p.timesteps,
        patient_zero: p.patient_zero,
        seed: stream_seed(p.seed, STREAM_ORIGINAL, 0),
    };
    cfg.validate(g.n())?;
    info!(
        "{} runs on the original network from vertex {}",
        p.runs, p.patient_zero
    );
    let original = si_runs(&g, &cfg, p.runs, exec)?;

    let mut groups: Vec<(String, Vec<Trajectory>, usize)> = Vec::new();
    for (i, input) in p.sparsifiers.iter().enumerate() {
        let h = load_edge_list(&input.path)?;
        if h.n() != g.n() {
            return Err(Error::Incomparable(format!(
                "{} has {} vertices, original has {}",
                input.path.display(),
                h.n(),
                g.n()
            ))
            .into());
        }
        let cfg = SIConfig {
            seed: stream_seed(p.seed, STREAM_SPARSIFIER, i as u64),
            ..cfg
        };
        info!(
            "{} runs on {} ({})",
            p.cpns_runs,
            input.path.display(),
            input.label
        );
        let runs = si_runs(&h, &cfg, p.cpns_runs, exec)?;
        match groups.iter_mut().find(|(l, _, _)| *l == input.label) {
            Some((_, all, files)) => {
                all.extend(runs);
                *files += 1;
            }
            None => groups.push((input.label.clone(), runs, 1)),
        }
    }

    let base: Vec<MetricSeries> = Metric::ALL
        .iter()
        .map(|&m| baseline(&original, m, exec).map(|s| s.with_label("baseline")))
        .collect::<cpns_core::Result<_>>()?;
    let mut outputs = vec![write_series(dir, "baseline.csv", &base)?];
    let mut summary = CompareSummary {
        patient_zero: p.patient_zero,
        original_runs: p.runs,
        sparsifiers: Vec::new(),
    };
    for (label, runs, files) in &groups {
        let series: Vec<MetricSeries> = Metric::ALL
            .iter()
            .map(|&m| {
                compare_series(&original, runs, m, exec).map(|s| s.with_label(label.as_str()))
            })
            .collect::<cpns_core::Result<_>>()?;
        let mut coverage = BTreeMap::new();
        for (b, s) in base.iter().zip(&series) {
            coverage.insert(s.metric.name(), b.coverage_of(s)?);
        }
        println!(
            "{label}: fraction coverage {:.3}, hamming coverage {:.3}, mi coverage {:.3}",
            coverage["fraction"], coverage["hamming"], coverage["mi"]
        );
        outputs.push(write_series(dir, &format!("{label}.csv"), &series)?);
        summary.sparsifiers.push(LabelSummary {
            label: label.clone(),
            files: *files,
            runs: runs.len(),
            coverage,
        });
    }
    outputs.push(write_json(dir, "compare-summary.json", &summary)?);
    Ok(outputs)
}

#[derive(Serialize)]
struct ImportanceSummary {
    edges: usize,
    gamma: f64,
    runs_per_source: usize,
    pairing: cpns_core::metrics::Pairing,
    r: Option<f64>,
}

fn importance(p: &ImportanceParams, dir: &Path, exec: Execution) -> Result<Vec<String>> {
    let g = load_edge_list(&p.input)?;
    let s = sketch(&g, p.mode, p.epsilon, p.seed, exec)?;
    info!(
        "{} infection trees per source over {} vertices",
        p.runs_per_source,
        g.n()
    );
    let cfg = EeiConfig::new(p.gamma, p.runs_per_source, p.seed).with_execution(exec);
    let table = epidemic_edge_importance(&g, &s, &cfg)?;
    let pairs = importance_pairs(&table, p.pairing)?;
    let outputs = vec![
        write_file(dir, "importance.tsv", |out| table.write_tsv(out))?,
        write_file(dir, "importance-pairs.tsv", |out| pairs.write_tsv(out))?,
        write_json(
            dir,
            "importance-summary.json",
            &ImportanceSummary {
                edges: g.m(),
                gamma: p.gamma,
                runs_per_source: p.runs_per_source,
                pairing: p.pairing,
                r: pairs.r,
            },
        )?,
    ];
    match pairs.r {
        Some(r) => println!("r = {r}"),
        None => println!("r undefined (constant column)"),
    }
    Ok(outputs)
}
