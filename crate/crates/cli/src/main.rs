//! Experiment driver: generate model spaces, deform them, verify the
//! deformation claims, and emit reproducible JSON/CSV reports.
//!
//! Exit codes: 0 all checks passed (or skipped by a hypothesis gate),
//! 1 at least one check failed, 2 usage or configuration error.

mod config;
mod report;
mod runner;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{CheckSet, RunConfig};
use report::write_run_meta;
use runner::{acquire_graph, deformed_space_file, init_threads, verify_all};
use uniformize_core::{
    deform, estimate_delta_with, DeformationParams, DeltaMode, DeltaOptions,
};

#[derive(Parser)]
#[command(name = "uniformize", version, about = "Conformal deformation diagnostics on metric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Run configuration file (flat `key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Read the graph from an edge-list file instead of generating it.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Comma-separated epsilon sweep, overriding the config.
    #[arg(long)]
    eps: Option<String>,
    /// h-short slack, overriding the config.
    #[arg(long)]
    h: Option<f64>,
    /// Sampling seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = automatic).
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory (or file, for `gen`).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a model space and write its edge-list file.
    Gen(Common),
    /// Estimate the four-point hyperbolicity constant.
    Delta {
        #[command(flatten)]
        common: Common,
        /// "global" (all base points, blockwise) or "base".
        #[arg(long, default_value = "global")]
        mode: String,
        /// Block-size gate for the global scan.
        #[arg(long)]
        max_block: Option<usize>,
        /// Run the global scan past the gate.
        #[arg(long)]
        force: bool,
    },
    /// Deform the space and run the deformation-level checks.
    Deform(Common),
    /// Quasiconvexity and double-cone ratios along h-short arcs.
    VerifyUniform(Common),
    /// Empirical Gehring-Hayman constants.
    VerifyGh(Common),
    /// Visual comparison, boundary proxy metrics and quasi-isometry.
    BoundaryCompare(Common),
    /// Run every enabled check.
    VerifyAll(Common),
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn load_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(eps) = &common.eps {
        cfg.eps = eps
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .context("parsing --eps")?;
    }
    if let Some(h) = common.h {
        cfg.h = h;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(threads) = common.threads {
        cfg.threads = threads;
    }
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen(common) => {
            let cfg = load_config(&common)?;
            init_threads(cfg.threads);
            let g = acquire_graph(&cfg, common.graph.as_deref())?;
            let out = match &common.out {
                Some(path) => PathBuf::from(path),
                None => PathBuf::from(&cfg.out).join("graph.txt"),
            };
            if let Some(parent) = out.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            g.write_file(&out)?;
            println!(
                "wrote {} ({} nodes, {} edges, frontier {})",
                out.display(),
                g.node_count(),
                g.edge_count(),
                g.frontier().len()
            );
            Ok(0)
        }
        Command::Delta {
            common,
            mode,
            max_block,
            force,
        } => {
            let cfg = load_config(&common)?;
            init_threads(cfg.threads);
            let g = acquire_graph(&cfg, common.graph.as_deref())?;
            let mode = match mode.as_str() {
                "global" => DeltaMode::Global,
                "base" => DeltaMode::BasePoint,
                other => anyhow::bail!("unknown delta mode `{other}` (global|base)"),
            };
            let opts = DeltaOptions {
                max_block_nodes: max_block.unwrap_or(cfg.delta_max_block),
                force: force || cfg.delta_force,
            };
            let rep = estimate_delta_with(&g, mode, &opts)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            println!("{}", serde_json::to_string_pretty(&rep)?);
            Ok(0)
        }
        Command::Deform(common) => {
            let mut cfg = load_config(&common)?;
            cfg.checks =
                CheckSet::parse("harnack,diameter,bilipschitz,boundary-bound")?;
            run_bundle(cfg, common, true)
        }
        Command::VerifyUniform(common) => {
            let mut cfg = load_config(&common)?;
            cfg.checks = CheckSet::parse("delta,uniform")?;
            run_bundle(cfg, common, false)
        }
        Command::VerifyGh(common) => {
            let mut cfg = load_config(&common)?;
            cfg.checks = CheckSet::parse("gh")?;
            run_bundle(cfg, common, false)
        }
        Command::BoundaryCompare(common) => {
            let mut cfg = load_config(&common)?;
            cfg.checks = CheckSet::parse("delta,visual,proxies,qi,cauchy")?;
            run_bundle(cfg, common, false)
        }
        Command::VerifyAll(common) => {
            let cfg = load_config(&common)?;
            run_bundle(cfg, common, false)
        }
    }
}

fn run_bundle(cfg: RunConfig, common: Common, write_deformed: bool) -> Result<i32> {
    init_threads(cfg.threads);
    let out = verify_all(&cfg, common.graph.as_deref())?;
    let dir = PathBuf::from(&cfg.out);
    out.bundle.write(&dir)?;
    std::fs::write(dir.join("config.txt"), cfg.to_text())?;
    for (rel, table) in &out.csv {
        table.write(&dir.join(rel))?;
    }
    if write_deformed {
        let g = acquire_graph(&cfg, common.graph.as_deref())?;
        for &eps in &cfg.eps {
            let params = DeformationParams::new(eps)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .with_h(cfg.h)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .with_quadrature(cfg.quadrature);
            let ds = deform(&g, params).map_err(|e| anyhow::anyhow!("{e}"))?;
            let path = dir.join(format!("deformed_eps_{}.txt", report::eps_tag(eps)));
            std::fs::write(&path, deformed_space_file(&ds))?;
        }
    }
    write_run_meta(&dir)?;

    for check in &out.bundle.checks {
        let eps = check
            .epsilon
            .map(|e| format!(" [eps {e}]"))
            .unwrap_or_default();
        println!(
            "{:7} {}{}: {}",
            format!("{:?}", check.status).to_uppercase(),
            check.name,
            eps,
            check.summary
        );
    }
    let s = &out.bundle.summary;
    println!(
        "{} passed, {} failed, {} skipped, {} info -> {}",
        s.passed,
        s.failed,
        s.skipped,
        s.info,
        dir.join("report.json").display()
    );
    Ok(if out.bundle.all_passed() { 0 } else { 1 })
}
