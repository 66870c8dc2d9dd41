use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;

use favornet::agents::AgentSpec;
use favornet::catalog::{full_catalog, load_network, NetworkRef};
use favornet::equilibrium::{
    cc_number, check_graphs, check_properties, classify, is_social_quilt, sample_graphs, Property,
    PropertyReport,
};
use favornet::session::{SessionStore, SystemClock};
use favornet::sim::{run_batch, BatchSpec, Roster};
use favornet::{Error, Result};

/// Equilibrium analysis and link-deletion game simulation on favor-exchange networks.
///
/// NETWORK arguments take a catalog name (1R3 .. 3R3, N1R3 .. N1R5) or a path
/// to a graph file {"n": .., "edges": [[i, j], ..]}.
#[derive(Parser)]
#[command(name = "favornet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the experiment networks with their classification.
    Catalog,
    /// Classify a network (RPE, cc, LCC, social quilt, simple cycle).
    Classify {
        network: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Also print, for every node and link, the subnetwork that deters a refusal.
        #[arg(long)]
        witnesses: bool,
    },
    /// Cognitive complexity number of an RPE network.
    Cc {
        network: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Whether a network is a social quilt.
    Quilt { network: String },
    /// Run replicated seeded games and report delete/optimality ratios.
    Simulate {
        /// Repeat for several networks.
        #[arg(long = "network", required = true)]
        networks: Vec<String>,
        /// Policy for every node: eq, rand:P, cc:L=N,fallback=SPEC, script:[..].
        #[arg(long, default_value = "eq")]
        agents: String,
        /// Per-node override, NODE=SPEC. Repeatable.
        #[arg(long = "agent-for")]
        agent_for: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Write per-decision rows (.csv) or the full result (.json).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include traces in JSON output.
        #[arg(long)]
        traces: bool,
    },
    /// Check structural properties over all labeled graphs; exits 1 on a violation.
    Enumerate {
        #[arg(long, default_value_t = 6)]
        max_nodes: usize,
        /// A property name or alias (lemma1..lemma4, prop3, cor1), lemmas, or all.
        #[arg(long, default_value = "all")]
        check: String,
        /// Favor-cost multiples to test. Defaults to 2 and 3.
        #[arg(long)]
        m: Vec<usize>,
        /// Instead of the exhaustive sweep, test this many random graphs on
        /// MAX_NODES nodes.
        #[arg(long)]
        sample: Option<usize>,
        /// Edge cap for sampled graphs.
        #[arg(long, default_value_t = 12)]
        max_edges: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Host interactive sessions over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Append finished sessions to this JSON-lines file.
        #[arg(long)]
        persist: Option<PathBuf>,
        /// Seconds before an unanswered turn becomes a keep.
        #[arg(long, default_value_t = 60)]
        timeout: u64,
        /// Serve browser client assets from this directory.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Catalog => {
            println!(
                "{:<6} {:<13} {:>5} {:>5}  {:<5} {:>4} {:<5} {:<5}",
                "name", "provenance", "nodes", "links", "rpe", "cc", "lcc", "sq"
            );
            for entry in full_catalog() {
                let c = classify(&entry.graph, 2)?;
                println!(
                    "{:<6} {:<13} {:>5} {:>5}  {:<5} {:>4} {:<5} {:<5}",
                    entry.name,
                    format!("{:?}", entry.provenance).to_lowercase(),
                    entry.graph.n(),
                    entry.graph.edge_count(),
                    c.is_tc,
                    c.cc.map_or("-".to_string(), |v| v.to_string()),
                    c.is_lcc,
                    c.is_sq
                );
            }
        }
        Command::Classify {
            network,
            m,
            witnesses,
        } => {
            let (net, g) = load_network(&network)?;
            let c = classify(&g, m)?;
            if witnesses {
                print_json(&json!({
                    "report": c.report(net),
                    "cc_tie_broken": c.cc_tie_broken,
                    "witnesses": c.witnesses,
                }))?;
            } else {
                println!("{}", serde_json::to_string(&c.report(net))?);
            }
        }
        Command::Cc { network, m } => {
            let (_, g) = load_network(&network)?;
            println!("{}", cc_number(&g, m)?);
        }
        Command::Quilt { network } => {
            let (_, g) = load_network(&network)?;
            println!("{}", is_social_quilt(&g)?);
        }
        Command::Simulate {
            networks,
            agents,
            agent_for,
            runs,
            seed,
            m,
            out,
            traces,
        } => {
            let mut roster = Roster::uniform(agents.parse()?);
            for item in &agent_for {
                let (node, spec) = item.split_once('=').ok_or_else(|| Error::AgentSpec {
                    spec: item.clone(),
                    reason: "expected NODE=SPEC".into(),
                })?;
                let node: usize = node.parse().map_err(|_| Error::AgentSpec {
                    spec: item.clone(),
                    reason: "node must be an integer".into(),
                })?;
                roster.overrides.insert(node, spec.parse::<AgentSpec>()?);
            }
            let networks = networks
                .iter()
                .map(|s| load_network(s).map(|(r, _)| r))
                .collect::<Result<Vec<NetworkRef>>>()?;
            let result = run_batch(&BatchSpec {
                networks,
                roster,
                runs,
                seed,
                m,
                keep_traces: traces,
            })?;
            println!(
                "{:<24} {:>6} {:>9} {:>8} {:>8} {:>8}",
                "network", "games", "decisions", "delete", "optimal", "intact"
            );
            for n in &result.networks {
                println!(
                    "{:<24} {:>6} {:>9} {:>8.4} {:>8.4} {:>8}",
                    n.network,
                    n.metrics.games,
                    n.metrics.decisions,
                    n.metrics.delete_ratio,
                    n.metrics.optimality_ratio,
                    n.intact
                );
            }
            println!(
                "{:<24} {:>6} {:>9} {:>8.4} {:>8.4}",
                "pooled",
                result.pooled.games,
                result.pooled.decisions,
                result.pooled.delete_ratio,
                result.pooled.optimality_ratio
            );
            if let Some(path) = out {
                let file = File::create(&path).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                })?;
                let mut writer = BufWriter::new(file);
                if path.extension().is_some_and(|e| e == "json") {
                    writer
                        .write_all(result.to_json()?.as_bytes())
                        .and_then(|_| writer.write_all(b"\n"))
                        .map_err(|e| Error::Io {
                            path: path.clone(),
                            source: e,
                        })?;
                } else {
                    result.write_csv(writer)?;
                }
            }
        }
        Command::Enumerate {
            max_nodes,
            check,
            m,
            sample,
            max_edges,
            seed,
        } => {
            let props = Property::parse_group(&check)?;
            let ms = if m.is_empty() { vec![2, 3] } else { m };
            let report: PropertyReport = match sample {
                Some(count) => {
                    let graphs = sample_graphs(max_nodes, max_edges, count, seed)?;
                    check_graphs(&graphs, &ms, &props)?
                }
                None => check_properties(max_nodes, &ms, &props)?,
            };
            println!(
                "checked {} (graph, m) pairs, {} property evaluations, {} TC networks",
                report.graphs_checked, report.checks, report.tc_found
            );
            for v in report.violations.iter().take(20) {
                println!("VIOLATION {} (m={}): {}", v.property, v.m, v.graph);
            }
            if !report.passed() {
                println!("{} violations", report.violations.len());
                return Ok(ExitCode::FAILURE);
            }
            println!("no violations");
        }
        Command::Serve {
            port,
            host,
            persist,
            timeout,
            static_dir,
        } => {
            let mut store = SessionStore::new(Arc::new(SystemClock)).with_timeout_secs(timeout);
            if let Some(path) = persist {
                store = store.with_persistence(path)?;
            }
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|e| Error::Config(format!("bad listen address: {e}")))?;
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Error::io("<runtime>", e))?;
            runtime
                .block_on(favornet::server::serve(addr, store, static_dir))
                .map_err(|e| Error::io(addr.to_string(), e))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e}");
            ExitCode::from(2)
        }
    }
}
