//! Benchmark runner: generates instances, times every solver on each, and
//! enforces that they agree.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gmcp_core::format::serialize_instance;
use gmcp_core::netgen::{preset, GenConfig};
use gmcp_core::{generate, Algorithm, Instance, Solution, SolveError, Status};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CSV_HEADER: [&str; 8] = [
    "instance",
    "n",
    "m",
    "seed",
    "alg",
    "value",
    "iterations",
    "time_ms",
];

/// Relative tolerance for cross-algorithm value agreement.
pub const AGREEMENT_TOL: f64 = 1e-9;

/// Default cap on the expected Erdős-Rényi out-degree per node, applied to
/// grid rows unless full density is requested.
pub const DESK_ER_DEGREE: f64 = 50.0;

pub fn desk_er_prob(nodes: usize, er_prob: f64) -> f64 {
    er_prob.min(DESK_ER_DEGREE / nodes as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchCase {
    pub label: String,
    pub config: GenConfig,
}

/// One CSV row: a single timed solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub alg: String,
    pub value: f64,
    pub iterations: usize,
    pub time_ms: f64,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub reps: usize,
    pub algorithms: Vec<Algorithm>,
    /// Where a disagreeing instance is written. `None` skips the dump.
    pub dump_dir: Option<PathBuf>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            reps: 3,
            algorithms: Algorithm::ALL.to_vec(),
            dump_dir: None,
        }
    }
}

/// Parses `1..5`, `3`, or `1,4,7` (and mixtures like `1..3,7`).
pub fn parse_preset_list(list: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("invalid preset list `{list}`"));
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b
                    .trim()
                    .trim_start_matches('=')
                    .parse()
                    .map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

pub fn preset_cases(
    numbers: &[usize],
    instances: usize,
    seed: Option<u64>,
    full_density: bool,
) -> Result<Vec<BenchCase>, CliError> {
    let mut cases = Vec::new();
    for &k in numbers {
        let row = preset(k)
            .ok_or_else(|| CliError::Usage(format!("no preset {k} (expected 1 to 15)")))?;
        let base = seed.unwrap_or(row.config.seed);
        let mut cfg = row.config.clone();
        if !full_density {
            cfg.er_prob = desk_er_prob(cfg.nodes, cfg.er_prob);
        }
        for j in 0..instances.min(row.instances) {
            cases.push(BenchCase {
                label: format!("{}-{}", row.label(), j + 1),
                config: cfg.clone().with_seed(base.wrapping_add(j as u64)),
            });
        }
    }
    Ok(cases)
}

#[derive(Debug, Deserialize)]
struct ConfigRow {
    label: String,
    nodes: usize,
    paths: usize,
    cycles: usize,
    er_prob: f64,
    seed: u64,
    instances: Option<usize>,
}

/// Reads a configuration CSV. Rows with `instances = k` expand to `k`
/// cases with consecutive seeds.
pub fn read_configs(path: &Path) -> Result<Vec<BenchCase>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_configs(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn parse_configs(text: &str) -> Result<Vec<BenchCase>, csv::Error> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut cases = Vec::new();
    for row in reader.deserialize() {
        let row: ConfigRow = row?;
        let count = row.instances.unwrap_or(1);
        for j in 0..count {
            let label = if count == 1 {
                row.label.clone()
            } else {
                format!("{}-{}", row.label, j + 1)
            };
            cases.push(BenchCase {
                label,
                config: GenConfig::new(
                    row.nodes,
                    row.paths,
                    row.cycles,
                    row.er_prob,
                    row.seed.wrapping_add(j as u64),
                ),
            });
        }
    }
    Ok(cases)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

fn agree(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= AGREEMENT_TOL * a.abs().max(b.abs())
}

/// Times each algorithm on one instance. Fails on any value disagreement,
/// across algorithms or across repetitions.
pub fn run_instance<F>(
    label: &str,
    seed: u64,
    instance: &Instance,
    opts: &BenchOptions,
    mut solve: F,
) -> Result<Vec<BenchRecord>, CliError>
where
    F: FnMut(Algorithm, &Instance) -> Result<Solution, SolveError>,
{
    let mut records = Vec::new();
    let mut reference: Option<(Algorithm, Solution)> = None;
    for &alg in &opts.algorithms {
        for _ in 0..opts.reps {
            let start = Instant::now();
            let sol = solve(alg, instance)?;
            let time_ms = start.elapsed().as_secs_f64() * 1e3;
            match &reference {
                None => reference = Some((alg, sol.clone())),
                Some((ref_alg, r)) => {
                    if r.status != sol.status || !agree(r.value, sol.value) {
                        let dumped = dump(label, instance, opts);
                        return Err(CliError::Disagreement(format!(
                            "instance {label}: {ref_alg} gives {}, {alg} gives {}{dumped}",
                            shown(r),
                            shown(&sol)
                        )));
                    }
                }
            }
            records.push(BenchRecord {
                instance: label.to_string(),
                n: instance.node_count(),
                m: instance.arc_count(),
                seed,
                alg: alg.name().to_string(),
                value: sol.value,
                iterations: sol.iterations,
                time_ms,
            });
        }
    }
    Ok(records)
}

fn shown(sol: &Solution) -> String {
    match sol.status {
        Status::Optimal => sol.value.to_string(),
        Status::NoPath => "no path".to_string(),
    }
}

fn dump(label: &str, instance: &Instance, opts: &BenchOptions) -> String {
    let Some(dir) = &opts.dump_dir else {
        return String::new();
    };
    let path = dir.join(format!("{label}.disagreement.gmcp"));
    match fs::write(&path, serialize_instance(instance)) {
        Ok(()) => format!("; instance written to {}", path.display()),
        Err(e) => format!("; could not write {}: {e}", path.display()),
    }
}

/// Runs every case, streaming one CSV row per timed solve to `out`.
pub fn run<W: Write>(
    cases: &[BenchCase],
    opts: &BenchOptions,
    out: W,
) -> Result<Vec<BenchRecord>, CliError> {
    run_with(cases, opts, out, |alg, inst| alg.solve(inst))
}

/// [`run`] with a caller-supplied solve step.
pub fn run_with<W, F>(
    cases: &[BenchCase],
    opts: &BenchOptions,
    out: W,
    mut solve: F,
) -> Result<Vec<BenchRecord>, CliError>
where
    W: Write,
    F: FnMut(Algorithm, &Instance) -> Result<Solution, SolveError>,
{
    if cases.is_empty() {
        return Err(CliError::Usage("no benchmark configurations given".into()));
    }
    if opts.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    let csv_err = |e: csv::Error| CliError::Usage(format!("writing CSV: {e}"));
    writer.write_record(CSV_HEADER).map_err(csv_err)?;
    let mut all = Vec::new();
    for case in cases {
        let instance =
            generate(&case.config).map_err(|e| CliError::Usage(format!("{}: {e}", case.label)))?;
        let (instance, _) = instance.normalized();
        let records = run_instance(&case.label, case.config.seed, &instance, opts, &mut solve)?;
        for r in &records {
            writer.serialize(r).map_err(csv_err)?;
        }
        writer
            .flush()
            .map_err(|e| CliError::Usage(format!("writing CSV: {e}")))?;
        all.extend(records);
    }
    Ok(all)
}

/// Mean over instances of the per-instance median time, by size class
/// (node count) and algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub algorithms: Vec<String>,
    pub classes: BTreeMap<usize, BTreeMap<String, f64>>,
}

impl Summary {
    pub fn from_records(records: &[BenchRecord]) -> Self {
        let mut algorithms: Vec<String> = Vec::new();
        let mut times: BTreeMap<(usize, String, String), Vec<f64>> = BTreeMap::new();
        for r in records {
            if !algorithms.contains(&r.alg) {
                algorithms.push(r.alg.clone());
            }
            times
                .entry((r.n, r.alg.clone(), r.instance.clone()))
                .or_default()
                .push(r.time_ms);
        }
        let mut medians: BTreeMap<(usize, String), Vec<f64>> = BTreeMap::new();
        for ((n, alg, _), ts) in times {
            medians.entry((n, alg)).or_default().push(median(ts));
        }
        let mut classes: BTreeMap<usize, BTreeMap<String, f64>> = BTreeMap::new();
        for ((n, alg), ms) in medians {
            let mean = ms.iter().sum::<f64>() / ms.len() as f64;
            classes.entry(n).or_default().insert(alg, mean);
        }
        Summary {
            algorithms,
            classes,
        }
    }

    pub fn mean(&self, n: usize, alg: Algorithm) -> Option<f64> {
        self.classes.get(&n)?.get(alg.name()).copied()
    }

    /// alg1 time over the given alg2 variant's time.
    pub fn ratio(&self, n: usize, alg2: Algorithm) -> Option<f64> {
        Some(self.mean(n, Algorithm::Alg1)? / self.mean(n, alg2)?)
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mean of per-instance median time (ms) by node count")?;
        write!(f, "{:>8}", "n")?;
        for alg in &self.algorithms {
            write!(f, " {alg:>12}")?;
        }
        let ratios: Vec<Algorithm> = [Algorithm::Alg2Array, Algorithm::Alg2Heap]
            .into_iter()
            .filter(|a| self.algorithms.iter().any(|s| s == a.name()))
            .filter(|_| self.algorithms.iter().any(|s| s == Algorithm::Alg1.name()))
            .collect();
        for a in &ratios {
            write!(f, " {:>16}", format!("alg1/{a}"))?;
        }
        writeln!(f)?;
        for (&n, row) in &self.classes {
            write!(f, "{n:>8}")?;
            for alg in &self.algorithms {
                match row.get(alg) {
                    Some(t) => write!(f, " {t:>12.3}")?,
                    None => write!(f, " {:>12}", "-")?,
                }
            }
            for &a in &ratios {
                match self.ratio(n, a) {
                    Some(r) => write!(f, " {r:>16.2}")?,
                    None => write!(f, " {:>16}", "-")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
