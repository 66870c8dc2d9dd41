//! Interactive games: one human node against equilibrium computer players.
//!
//! Each session sits behind its own mutex. Every entry point first settles an
//! expired deadline (one automatic keep) and then lets the computer players
//! move until the human is up again or the game ends. Views expose the
//! current network only, never the turn order or anybody's past moves.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agents::{Agent, AgentSpec, AnalysisCache};
use crate::catalog::NetworkRef;
use crate::error::{Error, Result};
use crate::game::{Decision, GameConfig, GameState, Policy, Trace};
use crate::graph::Graph;

pub trait Clock: Send + Sync {
    /// Milliseconds since the Unix epoch.
    fn now_ms(&self) -> u64;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now_ms(&self) -> u64 {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0)
    }
}

/// Hand-driven clock for tests and replays.
#[derive(Debug, Default)]
pub struct ManualClock(AtomicU64);

impl ManualClock {
    pub fn new(start_ms: u64) -> Arc<Self> {
        Arc::new(ManualClock(AtomicU64::new(start_ms)))
    }

    pub fn advance_ms(&self, delta: u64) {
        self.0.fetch_add(delta, Ordering::SeqCst);
    }
}

impl Clock for ManualClock {
    fn now_ms(&self) -> u64 {
        self.0.load(Ordering::SeqCst)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionStatus {
    AwaitingHuman,
    Advancing,
    Finished,
}

/// Body of `POST /sessions`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CreateSession {
    pub network: NetworkRef,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub human_node: Option<usize>,
    /// Draw the human node among all highest-degree nodes instead of taking
    /// the lowest index.
    #[serde(default)]
    pub randomize_tie: bool,
}

/// Everything a participant may see.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionView {
    pub session: String,
    pub status: SessionStatus,
    pub graph: Graph,
    pub your_node: usize,
    pub your_turn: bool,
    pub deadline_ms: Option<u64>,
    pub timeout_secs: u64,
    /// Own turns that timed out into a keep.
    pub your_auto_keeps: usize,
    pub payoffs: Option<Vec<i64>>,
    pub history_visibility: String,
}

/// One line of the persistence log.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinishedRecord {
    pub session: String,
    pub network: String,
    pub human_node: usize,
    pub auto_keeps: usize,
    pub payoffs: Vec<i64>,
    pub trace: Trace,
}

struct Session {
    id: String,
    network: String,
    game: GameState,
    agents: Vec<Agent>,
    human_node: usize,
    deadline_ms: Option<u64>,
    status: SessionStatus,
    auto_keeps: usize,
}

impl Session {
    fn view(&self) -> SessionView {
        let finished = self.status == SessionStatus::Finished;
        SessionView {
            session: self.id.clone(),
            status: self.status,
            graph: self.game.graph().clone(),
            your_node: self.human_node,
            your_turn: self.status == SessionStatus::AwaitingHuman,
            deadline_ms: self.deadline_ms,
            timeout_secs: self.game.config().decision_timeout_secs,
            your_auto_keeps: self.auto_keeps,
            payoffs: if finished {
                self.game.payoffs().ok()
            } else {
                None
            },
            history_visibility: "none".to_string(),
        }
    }

    fn expired(&self, now: u64) -> bool {
        self.status == SessionStatus::AwaitingHuman && self.deadline_ms.is_some_and(|d| now >= d)
    }
}

/// Lowest-indexed highest-degree node, or a seeded draw among them.
pub fn default_human_node(g: &Graph, randomize_tie: bool, seed: u64) -> usize {
    let degrees = g.degrees().0;
    let top = degrees.iter().copied().max().unwrap_or(0);
    let candidates: Vec<usize> = (0..g.n()).filter(|&i| degrees[i] == top).collect();
    if randomize_tie {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX);
        *candidates.choose(&mut rng).expect("at least one node")
    } else {
        candidates[0]
    }
}

pub struct SessionStore {
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    clock: Arc<dyn Clock>,
    persist: Option<Mutex<File>>,
    cache: Arc<AnalysisCache>,
    m: usize,
    timeout_secs: u64,
}

impl SessionStore {
    pub fn new(clock: Arc<dyn Clock>) -> Self {
        SessionStore {
            sessions: Mutex::new(HashMap::new()),
            clock,
            persist: None,
            cache: AnalysisCache::new(),
            m: 2,
            timeout_secs: crate::game::DEFAULT_TIMEOUT_SECS,
        }
    }

    /// Appends a JSON line per finished session to `path`.
    pub fn with_persistence(mut self, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::io(path, e))?;
        self.persist = Some(Mutex::new(file));
        Ok(self)
    }

    pub fn with_timeout_secs(mut self, secs: u64) -> Self {
        self.timeout_secs = secs;
        self
    }

    pub fn with_multiple(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn create(&self, req: CreateSession) -> Result<SessionView> {
        let graph = req.network.resolve()?;
        let seed = req.seed.unwrap_or_else(rand::random);
        let human_node = match req.human_node {
            Some(node) if node >= graph.n() => {
                return Err(Error::InvalidHumanNode { node, n: graph.n() });
            }
            Some(node) => node,
            None => default_human_node(&graph, req.randomize_tie, seed),
        };
        let cfg = GameConfig {
            seed,
            decision_timeout_secs: self.timeout_secs,
            ..GameConfig::default()
        };
        let game = GameState::new(&graph, cfg)?;
        let agents = (0..graph.n())
            .map(|k| {
                Agent::with_cache(
                    AgentSpec::Equilibrium,
                    self.m,
                    seed,
                    k as u64 + 1,
                    Arc::clone(&self.cache),
                )
            })
            .collect();
        let id = uuid::Uuid::new_v4().simple().to_string();
        let mut session = Session {
            id: id.clone(),
            network: req.network.label(),
            game,
            agents,
            human_node,
            deadline_ms: None,
            status: SessionStatus::Advancing,
            auto_keeps: 0,
        };
        self.advance(&mut session)?;
        let view = session.view();
        self.sessions
            .lock()
            .expect("session table lock")
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    fn lookup(&self, id: &str) -> Result<Arc<Mutex<Session>>> {
        self.sessions
            .lock()
            .expect("session table lock")
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownSession(id.to_string()))
    }

    pub fn get(&self, id: &str) -> Result<SessionView> {
        let handle = self.lookup(id)?;
        let mut session = handle.lock().expect("session lock");
        self.settle_expiry(&mut session)?;
        Ok(session.view())
    }

    pub fn submit(&self, id: &str, decision: Decision) -> Result<SessionView> {
        let handle = self.lookup(id)?;
        let mut session = handle.lock().expect("session lock");
        if self.settle_expiry(&mut session)? {
            return Err(Error::DeadlineExpired);
        }
        match session.status {
            SessionStatus::Finished => return Err(Error::GameOver),
            SessionStatus::Advancing => return Err(Error::NotYourTurn),
            SessionStatus::AwaitingHuman => {}
        }
        let human = session.human_node;
        session.game.apply_decision(human, decision)?;
        session.deadline_ms = None;
        self.advance(&mut session)?;
        Ok(session.view())
    }

    /// Applies pending automatic keeps everywhere; returns the sessions that
    /// changed.
    pub fn expire_due(&self) -> Vec<SessionView> {
        let handles: Vec<Arc<Mutex<Session>>> = self
            .sessions
            .lock()
            .expect("session table lock")
            .values()
            .cloned()
            .collect();
        handles
            .into_iter()
            .filter_map(|handle| {
                let mut session = handle.lock().expect("session lock");
                match self.settle_expiry(&mut session) {
                    Ok(true) => Some(session.view()),
                    Ok(false) => None,
                    Err(e) => {
                        log::error!("expiring session {}: {e}", session.id);
                        None
                    }
                }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("session table lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Replaces an expired human turn by a keep. Returns whether it did.
    fn settle_expiry(&self, session: &mut Session) -> Result<bool> {
        if !session.expired(self.clock.now_ms()) {
            return Ok(false);
        }
        let human = session.human_node;
        session.game.apply_decision(human, Decision::Keep)?;
        session.auto_keeps += 1;
        session.deadline_ms = None;
        log::info!(
            "session {}: deadline passed, keep applied for node {human}",
            session.id
        );
        self.advance(session)?;
        Ok(true)
    }

    fn advance(&self, session: &mut Session) -> Result<()> {
        session.status = SessionStatus::Advancing;
        while !session.game.is_terminal() {
            let player = session.game.next_player()?;
            if player == session.human_node {
                session.status = SessionStatus::AwaitingHuman;
                session.deadline_ms =
                    Some(self.clock.now_ms() + 1000 * session.game.config().decision_timeout_secs);
                return Ok(());
            }
            let decision = session.agents[player].decide(session.game.graph(), player)?;
            session.game.apply_decision(player, decision)?;
        }
        session.status = SessionStatus::Finished;
        session.deadline_ms = None;
        self.persist(session)
    }

    fn persist(&self, session: &Session) -> Result<()> {
        let Some(file) = &self.persist else {
            return Ok(());
        };
        let record = FinishedRecord {
            session: session.id.clone(),
            network: session.network.clone(),
            human_node: session.human_node,
            auto_keeps: session.auto_keeps,
            payoffs: session.game.payoffs()?,
            trace: session.game.trace(),
        };
        let mut line = serde_json::to_string(&record)?;
        line.push('\n');
        file.lock()
            .expect("persistence lock")
            .write_all(line.as_bytes())
            .map_err(|e| Error::io("<session log>", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store(clock: &Arc<ManualClock>) -> SessionStore {
        SessionStore::new(clock.clone())
    }

    fn create(store: &SessionStore, name: &str, seed: u64) -> SessionView {
        store
            .create(CreateSession {
                network: NetworkRef::Name(name.into()),
                seed: Some(seed),
                human_node: None,
                randomize_tie: false,
            })
            .unwrap()
    }

    #[test]
    fn default_human_nodes() {
        let clock = ManualClock::new(0);
        let s = store(&clock);
        assert_eq!(create(&s, "3R3", 1).your_node, 0);
        assert_eq!(create(&s, "1R4", 1).your_node, 0);
        let err = s
            .create(CreateSession {
                network: NetworkRef::Name("1R3".into()),
                seed: Some(1),
                human_node: Some(99),
                randomize_tie: false,
            })
            .unwrap_err();
        assert!(matches!(err, Error::InvalidHumanNode { node: 99, n: 3 }));
    }

    #[test]
    fn randomized_tie_stays_among_top_degree() {
        let g = crate::catalog::catalog("1R5").unwrap().graph;
        let picks: std::collections::HashSet<usize> = (0..200)
            .map(|seed| default_human_node(&g, true, seed))
            .collect();
        assert!(picks.len() > 1);
        let star = crate::catalog::catalog("2R3").unwrap().graph;
        assert!((0..50).all(|seed| default_human_node(&star, true, seed) == 0));
    }

    #[test]
    fn fresh_triangle_view() {
        let clock = ManualClock::new(1_000);
        let s = store(&clock);
        let v = create(&s, "1R3", 3);
        assert_eq!(v.graph.edge_count(), 3);
        assert!(v.your_turn);
        assert_eq!(v.deadline_ms, Some(61_000));
        assert_eq!(v.history_visibility, "none");
        assert!(matches!(s.get("nope"), Err(Error::UnknownSession(_))));
    }

    #[test]
    fn keep_on_triangle_finishes_with_equal_payoffs() {
        let clock = ManualClock::new(0);
        let s = store(&clock);
        let v = create(&s, "1R3", 5);
        let done = s.submit(&v.session, Decision::Keep).unwrap();
        assert_eq!(done.status, SessionStatus::Finished);
        assert_eq!(done.payoffs, Some(vec![200, 200, 200]));
        assert!(!done.your_turn);
        assert!(matches!(
            s.submit(&v.session, Decision::Keep),
            Err(Error::GameOver)
        ));
    }

    #[test]
    fn invalid_delete_is_rejected() {
        let clock = ManualClock::new(0);
        let s = store(&clock);
        let v = create(&s, "1R3", 5);
        let far = (1, 2);
        assert!(matches!(
            s.submit(&v.session, Decision::Delete(far)),
            Err(Error::InvalidDecision { .. })
        ));
        assert!(s.get(&v.session).unwrap().your_turn);
    }

    #[test]
    fn expiry_inserts_exactly_one_keep() {
        let clock = ManualClock::new(0);
        let s = store(&clock);
        let v = create(&s, "2R3", 8);
        clock.advance_ms(60_000);
        let after_poll = s.get(&v.session).unwrap();
        assert_eq!(after_poll.your_auto_keeps, 1);
        for _ in 0..5 {
            assert_eq!(s.get(&v.session).unwrap().your_auto_keeps, 1);
        }
        assert!(s.expire_due().is_empty());
    }

    #[test]
    fn late_submission_is_refused() {
        let clock = ManualClock::new(0);
        let s = store(&clock);
        let v = create(&s, "3R3", 2);
        clock.advance_ms(61_000);
        assert!(matches!(
            s.submit(&v.session, Decision::Delete((0, 1))),
            Err(Error::DeadlineExpired)
        ));
        let view = s.get(&v.session).unwrap();
        assert_eq!(view.your_auto_keeps, 1);
        assert_eq!(view.graph.edge_count(), 9);
    }

    #[test]
    fn persistence_log() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sessions.jsonl");
        let clock = ManualClock::new(0);
        let s = store(&clock).with_persistence(&path).unwrap();
        let v = create(&s, "1R3", 4);
        s.submit(&v.session, Decision::Keep).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let record: FinishedRecord = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(record.session, v.session);
        assert_eq!(record.payoffs, vec![200, 200, 200]);
        assert_eq!(record.network, "1R3");
    }
}
