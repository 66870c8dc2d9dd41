//! Replicated seeded games and the decision-level metrics.
//!
//! A decision is *optimal* when its keep/delete verdict matches what the
//! equilibrium player would have done on the same network; which link was
//! deleted does not matter.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::agents::{Agent, AgentSpec, AnalysisCache};
use crate::catalog::NetworkRef;
use crate::error::{Error, Result};
use crate::game::{run_game, GameConfig, Trace};
use crate::graph::Graph;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `run` under `master`: `splitmix64(master ^ run)`.
pub fn run_seed(master: u64, run: usize) -> u64 {
    splitmix64(master ^ run as u64)
}

/// One policy for every node, with optional per-node overrides.
#[derive(Clone, Debug, PartialEq)]
pub struct Roster {
    pub default: AgentSpec,
    pub overrides: BTreeMap<usize, AgentSpec>,
}

impl Roster {
    pub fn uniform(spec: AgentSpec) -> Self {
        Roster {
            default: spec,
            overrides: BTreeMap::new(),
        }
    }

    pub fn spec_for(&self, node: usize) -> &AgentSpec {
        self.overrides.get(&node).unwrap_or(&self.default)
    }

    /// Node `k` draws from stream `k + 1`; stream 0 is the scheduler's.
    pub fn agents(&self, n: usize, m: usize, seed: u64, cache: &Arc<AnalysisCache>) -> Vec<Agent> {
        (0..n)
            .map(|k| {
                Agent::with_cache(
                    self.spec_for(k).clone(),
                    m,
                    seed,
                    k as u64 + 1,
                    Arc::clone(cache),
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct BatchSpec {
    pub networks: Vec<NetworkRef>,
    pub roster: Roster,
    pub runs: usize,
    pub seed: u64,
    pub m: usize,
    /// Include full traces in JSON output.
    pub keep_traces: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Metrics {
    pub games: usize,
    pub decisions: usize,
    pub deletes: usize,
    pub optimal: usize,
    pub delete_ratio: f64,
    pub optimality_ratio: f64,
}

impl Metrics {
    fn add(&mut self, record: &GameRecord) {
        self.games += 1;
        self.decisions += record.optimal.len();
        self.deletes += record.trace.deletions();
        self.optimal += record.optimal.iter().filter(|&&o| o).count();
        self.refresh();
    }

    fn merge(&mut self, other: &Metrics) {
        self.games += other.games;
        self.decisions += other.decisions;
        self.deletes += other.deletes;
        self.optimal += other.optimal;
        self.refresh();
    }

    fn refresh(&mut self) {
        if self.decisions > 0 {
            self.delete_ratio = self.deletes as f64 / self.decisions as f64;
            self.optimality_ratio = self.optimal as f64 / self.decisions as f64;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NetworkMetrics {
    pub network: String,
    pub start: Graph,
    #[serde(flatten)]
    pub metrics: Metrics,
    /// Games that ended with the start network intact.
    pub intact: usize,
    /// Final networks keyed by their edge list.
    pub final_census: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GameRecord {
    pub network: String,
    pub run: usize,
    pub seed: u64,
    pub payoffs: Vec<i64>,
    pub final_graph: Graph,
    pub trace: Trace,
    pub optimal: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimResult {
    pub m: usize,
    pub runs: usize,
    pub seed: u64,
    pub networks: Vec<NetworkMetrics>,
    pub pooled: Metrics,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub games: Vec<GameRecord>,
    #[serde(skip)]
    all_games: Vec<GameRecord>,
}

impl SimResult {
    /// Every game, whether or not traces were requested for JSON output.
    pub fn records(&self) -> &[GameRecord] {
        &self.all_games
    }

    /// One row per decision: network, run, turn, player, action, optimal,
    /// edges_remaining.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record([
            "network",
            "run",
            "turn",
            "player",
            "action",
            "optimal",
            "edges_remaining",
        ])?;
        for game in &self.all_games {
            for (event, optimal) in game.trace.events.iter().zip(&game.optimal) {
                writer.write_record([
                    game.network.clone(),
                    game.run.to_string(),
                    event.turn.to_string(),
                    event.player.to_string(),
                    if event.edge.is_some() {
                        "delete"
                    } else {
                        "keep"
                    }
                    .to_string(),
                    u8::from(*optimal).to_string(),
                    event.edges_remaining.to_string(),
                ])?;
            }
        }
        writer.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn optimal_flags(trace: &Trace, m: usize, cache: &AnalysisCache) -> Result<Vec<bool>> {
    trace
        .states()?
        .into_iter()
        .map(|(before, event)| {
            let verdict = cache.get(&before, m)?.decisions[event.player];
            Ok(verdict.is_delete() == event.decision().is_delete())
        })
        .collect()
}

pub fn delete_ratio(traces: &[Trace]) -> Result<f64> {
    let decisions: usize = traces.iter().map(|t| t.events.len()).sum();
    if decisions == 0 {
        return Err(Error::EmptyRatio);
    }
    let deletes: usize = traces.iter().map(Trace::deletions).sum();
    Ok(deletes as f64 / decisions as f64)
}

pub fn optimality_ratio(traces: &[Trace], m: usize) -> Result<f64> {
    let cache = AnalysisCache::default();
    let mut decisions = 0;
    let mut optimal = 0;
    for trace in traces {
        let flags = optimal_flags(trace, m, &cache)?;
        decisions += flags.len();
        optimal += flags.iter().filter(|&&f| f).count();
    }
    if decisions == 0 {
        return Err(Error::EmptyRatio);
    }
    Ok(optimal as f64 / decisions as f64)
}

pub fn run_batch(spec: &BatchSpec) -> Result<SimResult> {
    if spec.runs == 0 {
        return Err(Error::Batch("runs must be at least 1".into()));
    }
    if spec.networks.is_empty() {
        return Err(Error::Batch("no networks given".into()));
    }
    spec.roster.default.validate()?;
    for s in spec.roster.overrides.values() {
        s.validate()?;
    }
    let graphs: Vec<(String, Graph)> = spec
        .networks
        .iter()
        .map(|r| Ok((r.label(), r.resolve()?)))
        .collect::<Result<_>>()?;

    let cache = AnalysisCache::new();
    let jobs: Vec<(usize, usize)> = (0..graphs.len())
        .flat_map(|net| (0..spec.runs).map(move |run| (net, run)))
        .collect();
    let records: Vec<(usize, GameRecord)> = jobs
        .par_iter()
        .map(|&(net, run)| {
            let (label, graph) = &graphs[net];
            let seed = run_seed(spec.seed, run);
            let mut agents = spec.roster.agents(graph.n(), spec.m, seed, &cache);
            let outcome = run_game(graph, GameConfig::with_seed(seed), &mut agents)?;
            let optimal = optimal_flags(&outcome.trace, spec.m, &cache)?;
            Ok((
                net,
                GameRecord {
                    network: label.clone(),
                    run,
                    seed,
                    payoffs: outcome.payoffs,
                    final_graph: outcome.final_graph,
                    trace: outcome.trace,
                    optimal,
                },
            ))
        })
        .collect::<Result<_>>()?;

    let mut networks: Vec<NetworkMetrics> = graphs
        .iter()
        .map(|(label, g)| NetworkMetrics {
            network: label.clone(),
            start: g.clone(),
            metrics: Metrics::default(),
            intact: 0,
            final_census: BTreeMap::new(),
        })
        .collect();
    for (net, record) in &records {
        let entry = &mut networks[*net];
        entry.metrics.add(record);
        entry.intact += usize::from(record.final_graph == entry.start);
        *entry
            .final_census
            .entry(record.final_graph.to_string())
            .or_default() += 1;
    }
    let mut pooled = Metrics::default();
    for entry in &networks {
        pooled.merge(&entry.metrics);
    }
    let all_games: Vec<GameRecord> = records.into_iter().map(|(_, r)| r).collect();
    Ok(SimResult {
        m: spec.m,
        runs: spec.runs,
        seed: spec.seed,
        networks,
        pooled,
        games: if spec.keep_traces {
            all_games.clone()
        } else {
            Vec::new()
        },
        all_games,
    })
}
