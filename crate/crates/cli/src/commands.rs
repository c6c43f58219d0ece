use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use gmcp_core::format::{describe, Severity};
use gmcp_core::labeling::DEFAULT_OPTIMALITY_TOL;
use gmcp_core::netgen::{preset, write_generated, GenConfig};
use gmcp_core::oracle::{brute_force_capped, export_milp, DEFAULT_NODE_CAP};
use gmcp_core::{
    check_optimality, deliverable_flow, label_array, label_heap, parse_instance, validate,
    Algorithm, Instance, LabelOptions, OracleError, Solution, Status,
};

use crate::args::{BenchArgs, Cli, Command, ExportArgs, GenArgs, OracleArgs, SolveArgs};
use crate::bench::{self, BenchOptions, Summary};
use crate::error::{exit, CliError};

/// Runs a parsed command line. Normal output goes to `out`, notices to
/// standard error. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Gen(a) => gen(a, out),
        Command::Solve(a) => solve(a, out),
        Command::Bench(a) => run_bench(a, out),
        Command::Oracle(a) => oracle(a, out),
        Command::ExportLp(a) => export_lp(a),
    }
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::io(Path::new("<stdout>"), e)
}

/// Reads, validates and normalizes an instance file.
pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let instance =
        parse_instance(&text).map_err(|e| CliError::Usage(format!("{}:{e}", path.display())))?;
    let errors: Vec<String> = validate(&instance)
        .into_iter()
        .filter(|v| v.severity == Severity::Error)
        .map(|v| v.to_string())
        .collect();
    if !errors.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: {}",
            path.display(),
            errors.join("; ")
        )));
    }
    let (instance, changed) = instance.normalized();
    if changed > 0 {
        eprintln!("note: normalized capacities of {changed} arc(s) with loss factor above 1");
    }
    Ok(instance)
}

fn gen(a: GenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = match a.preset {
        Some(k) => {
            let row = preset(k)
                .ok_or_else(|| CliError::Usage(format!("no preset {k} (expected 1 to 15)")))?;
            let seed = a.seed.unwrap_or(row.config.seed);
            row.config.with_seed(seed)
        }
        None => GenConfig::new(
            a.nodes.expect("clap requires --nodes"),
            a.paths.expect("clap requires --paths"),
            a.cycles,
            a.er_prob,
            a.seed.unwrap_or(0),
        ),
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let file = File::create(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let mut w = BufWriter::new(file);
    let (n, m) = write_generated(&cfg, &mut w)
        .and_then(|nm| w.flush().map(|()| nm))
        .map_err(|e| CliError::io(&a.out, e))?;
    writeln!(out, "n {n} m {m} seed {}", cfg.seed).map_err(stdout_err)?;
    Ok(exit::OK)
}

fn node_sequence(instance: &Instance, sol: &Solution) -> String {
    sol.path
        .nodes(&instance.graph)
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn shown(sol: &Solution) -> String {
    match sol.status {
        Status::Optimal => sol.value.to_string(),
        Status::NoPath => "no path".to_string(),
    }
}

fn same_value(a: &Solution, b: &Solution) -> bool {
    a.status == b.status
        && (a.value == b.value
            || (a.value - b.value).abs() <= bench::AGREEMENT_TOL * a.value.abs().max(b.value.abs()))
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let instance = load_instance(&a.input)?;
    instance.check_solvable()?;
    let start = Instant::now();
    let sol = a.alg.solve(&instance)?;
    let time_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut report = String::new();
    match sol.status {
        Status::Optimal => {
            report += &format!(
                "value {}\npath {}\n",
                sol.value,
                node_sequence(&instance, &sol)
            );
        }
        Status::NoPath => report += "no path\n",
    }
    report += &format!("iterations {}\ntime_ms {time_ms:.3}\n", sol.iterations);
    out.write_all(report.as_bytes()).map_err(stdout_err)?;

    if a.check {
        check(&instance, a.alg, &sol, out)?;
    }
    Ok(match sol.status {
        Status::Optimal => exit::OK,
        Status::NoPath => exit::NO_PATH,
    })
}

fn check(
    instance: &Instance,
    alg: Algorithm,
    sol: &Solution,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut say = |line: String| writeln!(out, "{line}").map_err(stdout_err);
    if sol.is_optimal() {
        let flow = deliverable_flow(instance, &sol.path)
            .map_err(|e| CliError::Disagreement(format!("returned path is invalid: {e}")))?;
        if flow.delivered.get() != sol.value {
            return Err(CliError::Disagreement(format!(
                "path delivers {} but value is {}",
                flow.delivered, sol.value
            )));
        }
        say("check path: delivers the reported value".into())?;
    }
    let labels = match alg {
        Algorithm::Alg1 => None,
        Algorithm::Alg2Array => Some(label_array(instance, LabelOptions::default())?),
        Algorithm::Alg2Heap => Some(label_heap(instance, LabelOptions::default())?),
    };
    if let Some(labels) = labels {
        let bad = check_optimality(instance, &labels, DEFAULT_OPTIMALITY_TOL);
        if !bad.is_empty() {
            let ids: Vec<String> = bad.iter().map(|a| a.to_string()).collect();
            return Err(CliError::Disagreement(format!(
                "optimality conditions fail on arcs {}",
                ids.join(" ")
            )));
        }
        say("check optimality: 0 violations".into())?;
    }
    match brute_force_capped(instance, DEFAULT_NODE_CAP) {
        Ok(oracle) => {
            if !same_value(&oracle, sol) {
                return Err(CliError::Disagreement(format!(
                    "oracle gives {}, {alg} gives {}",
                    shown(&oracle),
                    shown(sol)
                )));
            }
            say(format!("check oracle: agree ({})", shown(&oracle)))?;
        }
        Err(OracleError::TooLarge { cap, .. }) => {
            say(format!("check oracle: skipped (more than {cap} nodes)"))?;
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn oracle(a: OracleArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let instance = load_instance(&a.input)?;
    instance.check_solvable()?;
    let brute = brute_force_capped(&instance, a.cap)?;
    let alg1 = Algorithm::Alg1.solve(&instance)?;
    let alg2 = Algorithm::Alg2Array.solve(&instance)?;
    let heap = Algorithm::Alg2Heap.solve(&instance)?;
    let agree = [&alg1, &alg2, &heap].iter().all(|s| same_value(&brute, s));
    let verdict = if agree { "AGREE" } else { "DISAGREE" };
    writeln!(
        out,
        "oracle {}, alg1 {}, alg2 {}: {verdict}",
        shown(&brute),
        shown(&alg1),
        shown(&alg2)
    )
    .map_err(stdout_err)?;
    if !agree {
        return Ok(exit::DISAGREEMENT);
    }
    Ok(exit::OK)
}

fn export_lp(a: ExportArgs) -> Result<i32, CliError> {
    let instance = load_instance(&a.input)?;
    fs::write(&a.out, export_milp(&instance)).map_err(|e| CliError::io(&a.out, e))?;
    eprintln!("wrote {} ({})", a.out.display(), describe(&instance));
    Ok(exit::OK)
}

fn run_bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cases = match (&a.presets, &a.configs) {
        (Some(list), _) => {
            let numbers = bench::parse_preset_list(list)?;
            bench::preset_cases(&numbers, a.instances, a.seed, a.full_density)?
        }
        (None, Some(path)) => bench::read_configs(path)?,
        (None, None) => {
            return Err(CliError::Usage(
                "one of --presets or --configs is required".into(),
            ))
        }
    };
    let opts = BenchOptions {
        reps: a.reps,
        algorithms: if a.algs.is_empty() {
            Algorithm::ALL.to_vec()
        } else {
            a.algs.clone()
        },
        dump_dir: Some(
            a.out
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .unwrap_or(Path::new("."))
                .to_path_buf(),
        ),
    };
    if cases.is_empty() {
        return Err(CliError::Usage("no benchmark configurations given".into()));
    }
    let file = File::create(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let records = bench::run(&cases, &opts, BufWriter::new(file))?;
    write!(out, "{}", Summary::from_records(&records)).map_err(stdout_err)?;
    Ok(exit::OK)
}
