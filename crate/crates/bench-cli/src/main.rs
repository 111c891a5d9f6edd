use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bench_cli::report::{merge, read_csv, read_summary, write_csv, write_summary};
use bench_cli::{gen, run, Algo, BenchError, GenParams, Model, RunConfig, RunReport, Workload, WorkloadMode};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "dygraph", version, about = "Dynamic digraph workloads, runs and reports")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a workload and write `<out>.graph` and `<out>.updates`.
    Gen {
        #[command(flatten)]
        g: GenArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run structures on generated or loaded workloads.
    Run(RunArgs),
    /// Merge run CSVs (each next to its `.summary`) and print the ratios.
    Report {
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct GenArgs {
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    /// Defaults to erdos, or layered-dag for dag-sssp.
    #[arg(long, value_enum)]
    model: Option<Model>,
    /// Defaults to whatever the algorithm accepts.
    #[arg(long, value_enum)]
    mode: Option<WorkloadMode>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seed: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    max_weight: u64,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    g: GenArgs,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    algo: Vec<Algo>,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long)]
    delta: Option<u64>,
    #[arg(long, default_value_t = 1)]
    verify_every: u64,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    oracle: bool,
    /// Prefix of the output files; the CSV goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Load `<path>.graph` and `<path>.updates` instead of generating.
    #[arg(long)]
    workload: Option<PathBuf>,
    /// Corrupt one answer at this stage to exercise the failure path.
    #[arg(long)]
    inject_fault: Option<u64>,
}

fn params(g: &GenArgs, seed: u64, algo: Option<Algo>) -> GenParams {
    let mode = g.mode.unwrap_or(match algo {
        Some(a) if !a.accepts(WorkloadMode::Decremental) => WorkloadMode::Incremental,
        _ => WorkloadMode::Decremental,
    });
    let model = g.model.unwrap_or(if algo == Some(Algo::DagSssp) { Model::LayeredDag } else { Model::Erdos });
    let mut p = GenParams::new(g.n, model, mode, seed);
    p.m = g.m;
    p.max_weight = g.max_weight;
    p
}

fn suffixed(base: &Path, tag: &str, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(tag);
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn cmd_gen(g: &GenArgs, out: &Path) -> Result<(), BenchError> {
    for &seed in &g.seed {
        let w = gen(&params(g, seed, None))?;
        let tag = if g.seed.len() > 1 { format!("-s{seed}") } else { String::new() };
        let (graph, updates) = w.to_text();
        std::fs::write(suffixed(out, &tag, "graph"), graph)?;
        std::fs::write(suffixed(out, &tag, "updates"), updates)?;
    }
    Ok(())
}

fn cmd_run(a: &RunArgs) -> Result<(), BenchError> {
    let loaded = a.workload.as_deref().map(Workload::load).transpose()?;
    let seeds = match &loaded {
        Some(w) => vec![w.seed],
        None => a.g.seed.clone(),
    };
    let jobs: Vec<(Algo, u64)> =
        seeds.iter().flat_map(|&s| a.algo.iter().map(move |&al| (al, s))).collect();
    let single = jobs.len() == 1;
    let work = |&(algo, seed): &(Algo, u64)| -> Result<(Algo, u64, RunReport), BenchError> {
        let w = match &loaded {
            Some(w) => w.clone(),
            None => gen(&params(&a.g, seed, Some(algo)))?,
        };
        let cfg = RunConfig {
            algo,
            eps: a.eps,
            delta: a.delta,
            verify_every: a.verify_every,
            oracle: a.oracle,
            seed,
            inject_fault: a.inject_fault,
        };
        Ok((algo, seed, run(&w, &cfg)?))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(|e| BenchError::BadParams(e.to_string()))?;
    let results: Vec<_> = pool.install(|| jobs.par_iter().map(work).collect());

    let mut first_err: Option<BenchError> = None;
    let mut done = Vec::new();
    for r in results {
        match r {
            Ok((algo, seed, rep)) => {
                let csv = write_csv(&rep.rows)?;
                match &a.out {
                    Some(base) => {
                        let tag = if single { String::new() } else { format!("-{algo}-s{seed}") };
                        std::fs::write(suffixed(base, &tag, "csv"), csv)?;
                        std::fs::write(suffixed(base, &tag, "summary"), write_summary(&rep.summary))?;
                    }
                    None => print!("{csv}"),
                }
                done.push((rep.summary, Vec::new()));
            }
            Err(e) => {
                // Verification failures outrank input errors in the exit code.
                let keep = first_err.as_ref().is_none_or(|f| e.exit_code() < f.exit_code());
                if keep {
                    if let Some(old) = first_err.replace(e) {
                        eprintln!("dygraph: {old}");
                    }
                } else {
                    eprintln!("dygraph: {e}");
                }
            }
        }
    }
    if !done.is_empty() {
        eprint!("{}", merge(&done)?.summary);
    }
    first_err.map_or(Ok(()), Err)
}

fn cmd_report(files: &[PathBuf], out: Option<&Path>) -> Result<(), BenchError> {
    let mut runs = Vec::new();
    for f in files {
        let rows = read_csv(&std::fs::read_to_string(f)?)?;
        let summary = read_summary(&std::fs::read_to_string(f.with_extension("summary"))?)?;
        runs.push((summary, rows));
    }
    let m = merge(&runs)?;
    match out {
        Some(base) => {
            std::fs::write(suffixed(base, "", "csv"), &m.csv)?;
            std::fs::write(suffixed(base, "-summary", "csv"), &m.summary)?;
        }
        None => print!("{}", m.csv),
    }
    print!("{}", m.summary);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(3);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let res = match &cli.cmd {
        Cmd::Gen { g, out } => cmd_gen(g, out),
        Cmd::Run(a) => cmd_run(a),
        Cmd::Report { files, out } => cmd_report(files, out.as_deref()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dygraph: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
