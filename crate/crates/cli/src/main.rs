use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mplus::adversary::{self, CountOptions};
use mplus::engine::{self, DaemonStrategy, Trace};
use mplus::gn::GnInstance;
use mplus::io::{self, ConfigFile, GraphFile, TraceFile};
use mplus::{dot, figure2, oracle, pins, random, rng, rules, Graph};

#[derive(Parser)]
#[command(
    name = "mplus",
    version,
    about = "Simulator for the self-stabilizing matching algorithm M+"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the counter gadget G_N and print it as graph JSON.
    Gn {
        #[arg(long)]
        n: usize,
        /// Write the 0-configuration as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Count from 0 to 2^N - 1 on G_N with the adversarial central daemon.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Continue with a round-robin daemon from the final configuration.
        #[arg(long)]
        fair_finish: bool,
        /// Regression constants to compare against instead of the built-in ones.
        #[arg(long)]
        pin: Option<PathBuf>,
    },
    /// Replay the seven-node example execution and check every step.
    ReplayFigure2 {
        #[arg(long)]
        dot_dir: Option<PathBuf>,
    },
    /// Run a daemon on a graph until no node is enabled.
    Stabilize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, conflicts_with = "random_seed")]
        config: Option<PathBuf>,
        /// Draw the initial configuration and the daemon from this seed.
        #[arg(long)]
        random_seed: Option<u64>,
        /// Daemon seed when the configuration comes from a file.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        daemon: DaemonArg,
        /// Activation probability of the random distributed daemon.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = engine::DEFAULT_MAX_MOVES)]
        max_moves: u64,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check a stable configuration against the matching oracles.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    /// Replay a recorded trace and print its final configuration.
    Replay {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DaemonArg {
    RandomCentral,
    RoundRobin,
    Synchronous,
    RandomDistributed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, ok)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("json output")
            );
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn to_json(value: Value) -> String {
    serde_json::to_string_pretty(&value).expect("json output") + "\n"
}

fn load_graph(path: &Path) -> Result<Graph> {
    Ok(io::parse_graph(&read(path)?)?)
}

fn run(command: Command) -> Result<(Value, bool)> {
    match command {
        Command::Gn { n, dot, json } => {
            let gn = GnInstance::build(n)?;
            let file = GraphFile::from_graph(gn.graph());
            if let Some(path) = json {
                write(&path, &to_json(serde_json::to_value(&file)?))?;
            }
            if let Some(path) = dot {
                write(
                    &path,
                    &dot::export_dot(gn.graph(), &gn.zero_configuration()),
                )?;
            }
            Ok((serde_json::to_value(file)?, true))
        }
        Command::Count {
            n,
            trace,
            fair_finish,
            pin,
        } => count(n, trace, fair_finish, pin),
        Command::ReplayFigure2 { dot_dir } => {
            let report = figure2::replay(&figure2::Fixture::default())?;
            if let Some(dir) = dot_dir {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                let g = figure2::graph();
                for (label, c) in &report.snapshots {
                    write(&dir.join(format!("{label}.dot")), &dot::export_dot(&g, c))?;
                }
            }
            let ok = report.passed && report.moves == 10;
            Ok((serde_json::to_value(report)?, ok))
        }
        Command::Stabilize {
            graph,
            config,
            random_seed,
            seed,
            daemon,
            p,
            max_moves,
            trace,
        } => {
            let g = load_graph(&graph)?;
            let (c0, daemon_seed) = match (config, random_seed) {
                (Some(path), _) => (io::parse_configuration(&g, &read(&path)?)?, seed),
                (None, Some(s)) => (
                    random::random_configuration(&mut rng::from_seed_stream(s, 0), &g),
                    rng::derive_seed(s, 1),
                ),
                (None, None) => bail!("either --config or --random-seed is required"),
            };
            let strategy = match daemon {
                DaemonArg::RandomCentral => DaemonStrategy::RandomCentral { seed: daemon_seed },
                DaemonArg::RoundRobin => DaemonStrategy::RoundRobinFair,
                DaemonArg::Synchronous => DaemonStrategy::Synchronous,
                DaemonArg::RandomDistributed => DaemonStrategy::RandomDistributed {
                    seed: daemon_seed,
                    activation_probability: p,
                },
            };
            let t = engine::run_with(&g, &c0, strategy, max_moves, trace.is_some())?;
            if let Some(path) = trace {
                write(
                    &path,
                    &to_json(serde_json::to_value(TraceFile::from_trace(&g, &t))?),
                )?;
            }
            Ok((stabilize_report(&g, &t), t.stabilized))
        }
        Command::Verify { graph, config } => {
            let g = load_graph(&graph)?;
            let c = io::parse_configuration(&g, &read(&config)?)?;
            let report = oracle::verify_stable(&g, &c)?;
            let mut out = serde_json::to_value(report)?;
            out["passed"] = json!(report.passed());
            Ok((out, report.passed()))
        }
        Command::Replay { graph, trace } => {
            let g = load_graph(&graph)?;
            let file: TraceFile = serde_json::from_str(&read(&trace)?)
                .map_err(|e| mplus::Error::Parse(e.to_string()))?;
            let t = file.to_trace(&g)?;
            let consistent = t.move_count == t.steps.iter().map(|s| s.len() as u64).sum::<u64>()
                && t.stabilized == engine::is_stable(&g, &t.final_config);
            let mut out = stabilize_report(&g, &t);
            out["consistent"] = json!(consistent);
            Ok((out, consistent))
        }
    }
}

fn stabilize_report(g: &Graph, t: &Trace) -> Value {
    let mut matching: Vec<(u64, u64)> = rules::extract_matching(g, &t.final_config)
        .into_iter()
        .map(|e| {
            let (a, b) = g.edge_identifiers(e);
            (a.0, b.0)
        })
        .collect();
    matching.sort_unstable();
    json!({
        "move_count": t.move_count,
        "stabilized": t.stabilized,
        "final": ConfigFile::from_configuration(g, &t.final_config),
        "matching": matching,
    })
}

fn count(
    n: usize,
    trace: Option<PathBuf>,
    fair_finish: bool,
    pin: Option<PathBuf>,
) -> Result<(Value, bool)> {
    let report = adversary::count_all(
        n,
        CountOptions {
            record_trace: trace.is_some(),
            fair_finish,
        },
    )?;
    let pinned = match pin {
        Some(path) => pins::parse(&read(&path)?)?.get(&n).copied(),
        None => pins::pinned_total_moves(n),
    };
    let verified = report.all_verified();
    let mut out = json!({
        "n": n,
        "total_moves": report.total_moves,
        "verified": verified,
        "nodes": report.node_count(),
    });
    let mut ok = verified;
    if let Some(expected) = pinned {
        out["pinned_total_moves"] = json!(expected);
        ok &= expected == report.total_moves;
    }
    if let Some(stable) = report.terminal_stable_after_fair_run {
        out["terminal_stable_after_fair_run"] = json!(stable);
        out["fair_moves"] = json!(report.fair_moves);
    }
    if let (Some(path), Some(moves)) = (trace, &report.trace) {
        let gn = GnInstance::build(n)?;
        let t = Trace {
            initial: gn.zero_configuration(),
            steps: moves.iter().map(|&m| vec![m]).collect(),
            move_count: report.total_moves,
            stabilized: engine::is_stable(gn.graph(), &report.final_config),
            final_config: report.final_config.clone(),
        };
        write(
            &path,
            &to_json(serde_json::to_value(TraceFile::from_trace(gn.graph(), &t))?),
        )?;
    }
    Ok((out, ok))
}
