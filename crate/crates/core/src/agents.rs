//! Decision policies for the link-deletion game.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equilibrium::TcTable;
use crate::error::{Error, Result};
use crate::game::{Decision, Policy};
use crate::graph::{canonical_edge, Graph};

/// What an equilibrium player makes of a network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub is_tc: bool,
    pub cc: Option<usize>,
    /// Equilibrium move of every node.
    pub decisions: Vec<Decision>,
}

/// Keep on TC networks. Otherwise aim for the undominated TC subnetwork
/// that leaves the most own links (smallest canonical mask on ties) and
/// delete the lowest own link outside it.
pub fn equilibrium_decision(g: &Graph, me: usize, m: usize) -> Result<Decision> {
    let table = TcTable::build(g, m)?;
    Ok(decide_from_table(&table, me))
}

fn decide_from_table(table: &TcTable, me: usize) -> Decision {
    let full = table.full_mask();
    if table.is_tc_mask(full) {
        return Decision::Keep;
    }
    let g = table.base();
    let target = table
        .frontier_mask(full)
        .iter()
        .map(|&local| table.graph_of(local))
        .min_by_key(|t| (std::cmp::Reverse(t.degree(me)), t.mask()))
        .expect("the frontier always holds at least the empty network");
    g.incident_edges(me)
        .into_iter()
        .find(|&(i, j)| !target.has_edge(i, j))
        .map_or(Decision::Keep, Decision::Delete)
}

pub fn analyze(g: &Graph, m: usize) -> Result<Analysis> {
    let table = TcTable::build(g, m)?;
    let full = table.full_mask();
    Ok(Analysis {
        is_tc: table.is_tc_mask(full),
        cc: table.cc_mask(full),
        decisions: (0..g.n()).map(|me| decide_from_table(&table, me)).collect(),
    })
}

/// Memoized [`analyze`], shareable across threads and games.
#[derive(Debug, Default)]
pub struct AnalysisCache {
    entries: Mutex<HashMap<(Graph, usize), Arc<Analysis>>>,
}

impl AnalysisCache {
    pub fn new() -> Arc<Self> {
        Arc::new(Self::default())
    }

    pub fn get(&self, g: &Graph, m: usize) -> Result<Arc<Analysis>> {
        let key = (g.clone(), m);
        if let Some(hit) = self.entries.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let fresh = Arc::new(analyze(g, m)?);
        self.entries
            .lock()
            .expect("cache lock")
            .insert(key, Arc::clone(&fresh));
        Ok(fresh)
    }
}

/// Deletes a uniformly chosen own link with probability `p_delete`.
pub fn random_decision<R: Rng + ?Sized>(
    g: &Graph,
    me: usize,
    p_delete: f64,
    rng: &mut R,
) -> Decision {
    let incident = g.incident_edges(me);
    if incident.is_empty() || !rng.random_bool(p_delete) {
        return Decision::Keep;
    }
    Decision::Delete(incident[rng.random_range(0..incident.len())])
}

#[derive(Clone, Debug, PartialEq)]
pub enum AgentSpec {
    Equilibrium,
    /// Sees through TC networks of cognitive complexity at most `limit`;
    /// defers to `fallback` on harder ones.
    CcBudget {
        limit: usize,
        fallback: Box<AgentSpec>,
    },
    Random {
        p_delete: f64,
    },
    Scripted(Vec<Decision>),
}

impl AgentSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            AgentSpec::Random { p_delete } if !(0.0..=1.0).contains(p_delete) => {
                Err(Error::AgentSpec {
                    spec: self.to_string(),
                    reason: "delete probability must lie in [0, 1]".into(),
                })
            }
            AgentSpec::CcBudget { fallback, .. } => fallback.validate(),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for AgentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentSpec::Equilibrium => f.write_str("eq"),
            AgentSpec::CcBudget { limit, fallback } => {
                write!(f, "cc:L={limit},fallback={fallback}")
            }
            AgentSpec::Random { p_delete } => write!(f, "rand:{p_delete}"),
            AgentSpec::Scripted(items) => {
                let items: Vec<String> = items
                    .iter()
                    .map(|d| match d {
                        Decision::Keep => "K".to_string(),
                        Decision::Delete((i, j)) => format!("D({i}-{j})"),
                    })
                    .collect();
                write!(f, "script:[{}]", items.join(","))
            }
        }
    }
}

impl FromStr for AgentSpec {
    type Err = Error;

    /// `eq`, `rand:P`, `cc:L=N,fallback=SPEC`, `script:[K,D(i-j),..]`.
    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::AgentSpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let s = s.trim();
        let spec = if s == "eq" {
            AgentSpec::Equilibrium
        } else if let Some(p) = s.strip_prefix("rand:") {
            let p_delete: f64 = p.parse().map_err(|_| fail("expected rand:<probability>"))?;
            AgentSpec::Random { p_delete }
        } else if let Some(rest) = s.strip_prefix("cc:") {
            let rest = rest
                .strip_prefix("L=")
                .ok_or_else(|| fail("expected cc:L=<n>,fallback=<spec>"))?;
            let (limit, fallback) = rest
                .split_once(",fallback=")
                .ok_or_else(|| fail("expected cc:L=<n>,fallback=<spec>"))?;
            AgentSpec::CcBudget {
                limit: limit
                    .parse()
                    .map_err(|_| fail("cc limit must be a non-negative integer"))?,
                fallback: Box::new(fallback.parse()?),
            }
        } else if let Some(rest) = s.strip_prefix("script:") {
            let body = rest
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| fail("script must be bracketed"))?;
            let items = body
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|item| {
                    parse_script_item(item).ok_or_else(|| fail("script items are K or D(i-j)"))
                })
                .collect::<Result<Vec<_>>>()?;
            AgentSpec::Scripted(items)
        } else {
            return Err(fail("unknown policy; expected eq, rand:, cc: or script:"));
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_script_item(item: &str) -> Option<Decision> {
    if item == "K" {
        return Some(Decision::Keep);
    }
    let inner = item.strip_prefix("D(")?.strip_suffix(')')?;
    let (i, j) = inner.split_once('-')?;
    Some(Decision::Delete(canonical_edge(
        i.trim().parse().ok()?,
        j.trim().parse().ok()?,
    )))
}

/// A policy bound to a favor-cost multiple and a private random stream.
#[derive(Debug, Clone)]
pub struct Agent {
    spec: AgentSpec,
    m: usize,
    rng: ChaCha8Rng,
    script_position: usize,
    cache: Arc<AnalysisCache>,
}

impl Agent {
    /// `stream` selects an independent ChaCha stream under `seed`.
    pub fn new(spec: AgentSpec, m: usize, seed: u64, stream: u64) -> Self {
        Self::with_cache(spec, m, seed, stream, AnalysisCache::new())
    }

    pub fn with_cache(
        spec: AgentSpec,
        m: usize,
        seed: u64,
        stream: u64,
        cache: Arc<AnalysisCache>,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Agent {
            spec,
            m,
            rng,
            script_position: 0,
            cache,
        }
    }

    pub fn spec(&self) -> &AgentSpec {
        &self.spec
    }

    fn decide_as(&mut self, spec: &AgentSpec, g: &Graph, me: usize) -> Result<Decision> {
        match spec {
            AgentSpec::Equilibrium => Ok(self.cache.get(g, self.m)?.decisions[me]),
            AgentSpec::CcBudget { limit, fallback } => {
                let analysis = self.cache.get(g, self.m)?;
                match analysis.cc {
                    Some(cc) if cc <= *limit => Ok(Decision::Keep),
                    Some(_) => self.decide_as(fallback, g, me),
                    None => Ok(analysis.decisions[me]),
                }
            }
            AgentSpec::Random { p_delete } => Ok(random_decision(g, me, *p_delete, &mut self.rng)),
            AgentSpec::Scripted(items) => {
                let d = *items
                    .get(self.script_position)
                    .ok_or(Error::ScriptExhausted)?;
                self.script_position += 1;
                Ok(d)
            }
        }
    }
}

impl Policy for Agent {
    fn decide(&mut self, graph: &Graph, me: usize) -> Result<Decision> {
        let spec = self.spec.clone();
        self.decide_as(&spec, graph, me)
    }
}

/// `cc <= limit` on a TC network means keep; harder TC networks go to
/// `fallback`; non-TC networks get the equilibrium move.
pub fn cc_budget_decision(
    g: &Graph,
    me: usize,
    m: usize,
    limit: usize,
    fallback: &mut Agent,
) -> Result<Decision> {
    let table = TcTable::build(g, m)?;
    match table.cc_mask(table.full_mask()) {
        Some(cc) if cc <= limit => Ok(Decision::Keep),
        Some(_) => fallback.decide(g, me),
        None => Ok(decide_from_table(&table, me)),
    }
}
