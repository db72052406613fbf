use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mstlab::{catalogue, parse_config, run, write_outputs, ExperimentSpec, LabError, Result};
use mstlab_core::continuum::{sample_g_lambda, sample_m_lambda, ContinuumParams};
use mstlab_core::rgraph::write_edge_length_graph;
use serde_json::json;

#[derive(Parser)]
#[command(name = "lab", about = "Runs the mstlab experiment catalogue")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List experiments with their claims and parameters.
    List,
    /// Run one experiment; exits 0 iff all its checks pass.
    Run {
        experiment: String,
        /// `key = value` file; see the README for the format.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replicas: Option<usize>,
        /// Output directory for manifest.json and results.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Parameter override, repeatable: `--set n=500`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Sample the largest components of the continuum limit.
    Sample {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        components: usize,
        #[arg(long)]
        mesh: Option<f64>,
        #[arg(long)]
        horizon: Option<f64>,
        /// Cut the cycles, giving the scaling limit of the MST pieces.
        #[arg(long)]
        cut: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::List => {
            for e in catalogue() {
                println!("{:<26} {}", e.name, e.claim);
                for p in e.params {
                    println!("{:>28}{} = {:<10} {}", "", p.key, p.default, p.help);
                }
            }
            Ok(true)
        }
        Cmd::Run { experiment, config, seed, replicas, out, set } => {
            let kv = match &config {
                Some(path) => parse_config(&fs::read_to_string(path)?)?,
                None => BTreeMap::new(),
            };
            let mut spec = ExperimentSpec::from_config(&experiment, kv)?;
            for s in &set {
                let (k, v) = s.split_once('=').ok_or_else(|| LabError::Config(format!("--set needs KEY=VALUE, got {s:?}")))?;
                spec = spec.with(k.trim(), v.trim());
            }
            if let Some(s) = seed {
                spec.seed = s;
            }
            if replicas.is_some() {
                spec.replicas = replicas;
            }
            let dir = out.or(spec.out.clone()).unwrap_or_else(|| PathBuf::from("runs").join(&spec.name));
            let (manifest, rows) = run(&spec)?;
            write_outputs(&dir, &manifest, &rows)?;
            for c in &manifest.checks {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                println!("{verdict} {}: {} = {} in {}", manifest.experiment, c.name, c.observed, c.range());
            }
            println!("wrote {}", dir.display());
            Ok(manifest.passed)
        }
        Cmd::Sample { lambda, seed, components, mesh, horizon, cut, out } => {
            let mut params = ContinuumParams::new(lambda);
            if let Some(h) = mesh {
                params = params.with_mesh(h);
            }
            if let Some(t) = horizon {
                params = params.with_horizon(t);
            }
            let comps = if cut {
                sample_m_lambda(&params, seed, components)?
            } else {
                sample_g_lambda(&params, seed, components)?
            };
            fs::create_dir_all(&out)?;
            for (i, c) in comps.iter().enumerate() {
                fs::write(out.join(format!("component_{i}.rgraph")), write_edge_length_graph(&c.graph)?)?;
            }
            let sidecar = json!({
                "lambda": lambda,
                "h": params.mesh,
                "T": params.horizon,
                "seed": seed,
                "cut": cut,
                "sigma": comps.iter().map(|c| c.sigma).collect::<Vec<_>>(),
                "surplus": comps.iter().map(|c| c.surplus).collect::<Vec<_>>(),
            });
            fs::write(out.join("components.json"), serde_json::to_string_pretty(&sidecar)? + "\n")?;
            println!("wrote {} components to {}", comps.len(), out.display());
            Ok(true)
        }
    }
}
