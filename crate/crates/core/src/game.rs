//! The sequential link-deletion game.
//!
//! Turns are scheduled in passes: each pass is a uniformly shuffled
//! permutation of all nodes, so nobody moves twice before everyone has moved
//! once. On its turn a node keeps all links or deletes one incident link. The
//! game ends when no links remain or when `n` consecutive turns were keeps.
//! Nodes without links still take turns and their keeps count toward the
//! terminal run.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{canonical_edge, Edge, Graph};

/// Identifier of the generator behind schedules and agent draws, recorded in
/// every trace.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng/rand_chacha-0.9/seed_from_u64";

/// How link-less players interact with the terminal keep counter.
pub const KEEP_RULE: &str = "all-players";

pub const DEFAULT_BENEFIT: i64 = 100;
pub const DEFAULT_COST: i64 = 110;
pub const DEFAULT_TIMEOUT_SECS: u64 = 60;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    /// Points per surviving incident link at the end.
    pub b: i64,
    /// Points per own deletion.
    pub c: i64,
    pub seed: u64,
    /// Interactive sessions only.
    pub decision_timeout_secs: u64,
    /// Skip the `2b > c > b` check.
    #[serde(default)]
    pub allow_out_of_range: bool,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            b: DEFAULT_BENEFIT,
            c: DEFAULT_COST,
            seed: 0,
            decision_timeout_secs: DEFAULT_TIMEOUT_SECS,
            allow_out_of_range: false,
        }
    }
}

impl GameConfig {
    pub fn with_seed(seed: u64) -> Self {
        GameConfig {
            seed,
            ..GameConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.b <= 0 || self.c <= 0 {
            return Err(Error::Config(format!(
                "b and c must be positive, got b={} c={}",
                self.b, self.c
            )));
        }
        if !self.allow_out_of_range && !(2 * self.b > self.c && self.c > self.b) {
            return Err(Error::Config(format!(
                "2b > c > b violated for b={} c={}",
                self.b, self.c
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Keep,
    Delete(Edge),
}

impl Decision {
    pub fn is_delete(&self) -> bool {
        matches!(self, Decision::Delete(_))
    }

    pub fn action(&self) -> Action {
        match self {
            Decision::Keep => Action::Keep,
            Decision::Delete(_) => Action::Delete,
        }
    }

    pub fn edge(&self) -> Option<Edge> {
        match *self {
            Decision::Keep => None,
            Decision::Delete(e) => Some(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Keep,
    Delete,
}

/// Wire shape: `{"action":"keep"}` or `{"action":"delete","edge":[i,j]}`.
#[derive(Serialize, Deserialize)]
struct DecisionJson {
    action: Action,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge: Option<[usize; 2]>,
}

impl Serialize for Decision {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecisionJson {
            action: self.action(),
            edge: self.edge().map(|(i, j)| [i, j]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Decision {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DecisionJson::deserialize(d)?;
        match (raw.action, raw.edge) {
            (Action::Keep, None) => Ok(Decision::Keep),
            (Action::Keep, Some(_)) => Err(serde::de::Error::custom("keep takes no edge")),
            (Action::Delete, Some([i, j])) => Ok(Decision::Delete(canonical_edge(i, j))),
            (Action::Delete, None) => Err(serde::de::Error::custom("delete requires an edge")),
        }
    }
}

/// Draws turn order one pass at a time.
#[derive(Clone, Debug)]
pub struct Scheduler {
    rng: ChaCha8Rng,
    scripted: VecDeque<Vec<usize>>,
    pass: Vec<usize>,
    position: usize,
    passes: usize,
}

impl Scheduler {
    pub fn new(n: usize, seed: u64) -> Self {
        let mut scheduler = Scheduler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            scripted: VecDeque::new(),
            pass: (0..n).collect(),
            position: 0,
            passes: 0,
        };
        scheduler.start_pass();
        scheduler
    }

    /// Uses the given passes first (each must be a permutation of the
    /// nodes), then continues with seeded shuffles.
    pub fn scripted(n: usize, seed: u64, passes: Vec<Vec<usize>>) -> Result<Self> {
        for pass in &passes {
            let mut sorted = pass.clone();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(Error::Config(format!(
                    "scripted pass {pass:?} is not a permutation of 0..{n}"
                )));
            }
        }
        let mut scheduler = Scheduler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            scripted: passes.into(),
            pass: (0..n).collect(),
            position: 0,
            passes: 0,
        };
        scheduler.start_pass();
        Ok(scheduler)
    }

    fn start_pass(&mut self) {
        match self.scripted.pop_front() {
            Some(pass) => self.pass = pass,
            None => {
                self.pass.sort_unstable();
                self.pass.shuffle(&mut self.rng);
            }
        }
        self.position = 0;
        self.passes += 1;
    }

    pub fn peek(&self) -> usize {
        self.pass[self.position]
    }

    pub fn advance(&mut self) {
        self.position += 1;
        if self.position == self.pass.len() {
            self.start_pass();
        }
    }

    /// Passes begun so far, including the current one.
    pub fn passes_started(&self) -> usize {
        self.passes
    }
}

impl Iterator for Scheduler {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let node = self.peek();
        self.advance();
        Some(node)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub turn: usize,
    pub player: usize,
    pub action: Action,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<Edge>,
    pub edges_remaining: usize,
    pub consecutive_keeps: usize,
}

impl TraceEvent {
    pub fn decision(&self) -> Decision {
        match self.edge {
            Some(e) if self.action == Action::Delete => Decision::Delete(e),
            _ => Decision::Keep,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub rng: String,
    pub seed: u64,
    pub keep_rule: String,
    pub b: i64,
    pub c: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub meta: TraceMeta,
    pub initial: Graph,
    pub events: Vec<TraceEvent>,
}

impl Trace {
    /// One JSON object per event, newline-terminated.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for event in &self.events {
            out.push_str(&serde_json::to_string(event).expect("trace events serialize"));
            out.push('\n');
        }
        out
    }

    /// SHA-256 over the metadata, start graph and event lines.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(&self.meta).expect("meta serializes"));
        hasher.update(serde_json::to_vec(&self.initial).expect("graph serializes"));
        hasher.update(self.to_jsonl().as_bytes());
        hex::encode(hasher.finalize())
    }

    pub fn deletions(&self) -> usize {
        self.events
            .iter()
            .filter(|e| e.action == Action::Delete)
            .count()
    }

    /// The network each decision was taken on, paired with its event.
    pub fn states(&self) -> Result<Vec<(Graph, &TraceEvent)>> {
        let mut graph = self.initial.clone();
        let mut out = Vec::with_capacity(self.events.len());
        for event in &self.events {
            let next = match event.decision() {
                Decision::Keep => graph.clone(),
                Decision::Delete(e) => graph.delete_link(e)?,
            };
            out.push((graph, event));
            graph = next;
        }
        Ok(out)
    }
}

/// Anything that can choose a move for a node.
pub trait Policy {
    fn decide(&mut self, graph: &Graph, me: usize) -> Result<Decision>;
}

#[derive(Clone, Debug)]
pub struct GameState {
    cfg: GameConfig,
    initial: Graph,
    graph: Graph,
    scheduler: Scheduler,
    consecutive_keeps: usize,
    deletions: Vec<Vec<Edge>>,
    events: Vec<TraceEvent>,
}

impl GameState {
    pub fn new(g: &Graph, cfg: GameConfig) -> Result<Self> {
        let scheduler = Scheduler::new(g.n(), cfg.seed);
        Self::with_scheduler(g, cfg, scheduler)
    }

    pub fn with_scheduler(g: &Graph, cfg: GameConfig, scheduler: Scheduler) -> Result<Self> {
        cfg.validate()?;
        Ok(GameState {
            cfg,
            initial: g.clone(),
            graph: g.clone(),
            scheduler,
            consecutive_keeps: 0,
            deletions: vec![Vec::new(); g.n()],
            events: Vec::new(),
        })
    }

    pub fn config(&self) -> &GameConfig {
        &self.cfg
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn initial(&self) -> &Graph {
        &self.initial
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn consecutive_keeps(&self) -> usize {
        self.consecutive_keeps
    }

    pub fn deletions(&self) -> &[Vec<Edge>] {
        &self.deletions
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn turns_taken(&self) -> usize {
        self.events.len()
    }

    pub fn is_terminal(&self) -> bool {
        self.graph.is_empty() || self.consecutive_keeps >= self.n()
    }

    /// The node whose turn it is.
    pub fn next_player(&self) -> Result<usize> {
        if self.is_terminal() {
            return Err(Error::GameOver);
        }
        Ok(self.scheduler.peek())
    }

    pub fn validate_decision(&self, player: usize, decision: &Decision) -> Result<()> {
        let expected = self.next_player()?;
        if player != expected {
            return Err(Error::OutOfTurn {
                expected,
                got: player,
            });
        }
        if let Decision::Delete((a, b)) = *decision {
            if (a != player && b != player) || !self.graph.has_edge(a, b) {
                return Err(Error::InvalidDecision {
                    player,
                    edge: (a, b),
                });
            }
        }
        Ok(())
    }

    pub fn apply_decision(&mut self, player: usize, decision: Decision) -> Result<()> {
        self.validate_decision(player, &decision)?;
        let edge = match decision {
            Decision::Keep => {
                self.consecutive_keeps += 1;
                None
            }
            Decision::Delete((a, b)) => {
                let edge = canonical_edge(a, b);
                self.graph = self.graph.delete_link(edge)?;
                self.deletions[player].push(edge);
                self.consecutive_keeps = 0;
                Some(edge)
            }
        };
        self.events.push(TraceEvent {
            turn: self.events.len(),
            player,
            action: decision.action(),
            edge,
            edges_remaining: self.graph.edge_count(),
            consecutive_keeps: self.consecutive_keeps,
        });
        self.scheduler.advance();
        Ok(())
    }

    /// `b` per surviving incident link plus `c` per own deletion.
    pub fn payoffs(&self) -> Result<Vec<i64>> {
        if !self.is_terminal() {
            return Err(Error::GameNotOver);
        }
        let degrees = self.graph.degrees();
        Ok((0..self.n())
            .map(|i| self.cfg.b * degrees.0[i] as i64 + self.cfg.c * self.deletions[i].len() as i64)
            .collect())
    }

    pub fn trace(&self) -> Trace {
        Trace {
            meta: TraceMeta {
                rng: RNG_ALGORITHM.to_string(),
                seed: self.cfg.seed,
                keep_rule: KEEP_RULE.to_string(),
                b: self.cfg.b,
                c: self.cfg.c,
            },
            initial: self.initial.clone(),
            events: self.events.clone(),
        }
    }

    /// Upper bound on game length: between two deletions there are at most
    /// `n - 1` keeps, and `n` keeps after the last one end the game.
    pub fn turn_bound(&self) -> usize {
        self.n() * (self.initial.edge_count() + 1)
    }
}

pub fn new_game(g: &Graph, cfg: GameConfig) -> Result<GameState> {
    GameState::new(g, cfg)
}

#[derive(Clone, Debug)]
pub struct GameOutcome {
    pub trace: Trace,
    pub payoffs: Vec<i64>,
    pub final_graph: Graph,
}

/// Plays until terminal, asking `agents[node]` for each move.
pub fn run_game<P: Policy>(g: &Graph, cfg: GameConfig, agents: &mut [P]) -> Result<GameOutcome> {
    let state = GameState::new(g, cfg)?;
    play_out(state, agents)
}

pub fn play_out<P: Policy>(mut state: GameState, agents: &mut [P]) -> Result<GameOutcome> {
    if agents.len() != state.n() {
        return Err(Error::Config(format!(
            "{} agents for {} nodes",
            agents.len(),
            state.n()
        )));
    }
    let bound = state.turn_bound();
    while !state.is_terminal() {
        if state.turns_taken() >= bound {
            return Err(Error::NoTermination(bound));
        }
        let player = state.next_player()?;
        let decision = agents[player].decide(state.graph(), player)?;
        state.apply_decision(player, decision)?;
    }
    Ok(GameOutcome {
        payoffs: state.payoffs()?,
        final_graph: state.graph().clone(),
        trace: state.trace(),
    })
}

/// Re-applies a trace's decisions under the same seed.
pub fn replay(trace: &Trace, cfg: GameConfig) -> Result<GameState> {
    let mut state = GameState::new(&trace.initial, cfg)?;
    for event in &trace.events {
        state.apply_decision(event.player, event.decision())?;
    }
    Ok(state)
}
