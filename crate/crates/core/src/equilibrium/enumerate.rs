//! Exhaustive labeled-graph enumeration and the structural properties of TC
//! networks checked over it.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::is_social_quilt;
use super::table::TcTable;
use crate::error::{Error, Result};
use crate::graph::{pair_count, Graph};

pub const MAX_ENUMERATION_NODES: usize = 7;

/// Every labeled simple graph on `1..=max_nodes` nodes, exactly once.
pub fn enumerate_graphs(max_nodes: usize) -> Result<impl Iterator<Item = Graph>> {
    if max_nodes > MAX_ENUMERATION_NODES {
        return Err(Error::ResourceLimit {
            what: "node count for enumeration",
            actual: max_nodes,
            limit: MAX_ENUMERATION_NODES,
        });
    }
    Ok((1..=max_nodes).flat_map(|n| {
        (0..1u64 << pair_count(n))
            .map(move |mask| Graph::from_mask(n, mask as u128).expect("mask within pair count"))
    }))
}

/// `count` random labeled graphs on `n` nodes: an edge count uniform in
/// `0..=max_edges`, then a uniform edge subset of that size.
pub fn sample_graphs(n: usize, max_edges: usize, count: usize, seed: u64) -> Result<Vec<Graph>> {
    let pairs = pair_count(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = max_edges.min(pairs);
    (0..count)
        .map(|_| {
            let k = rng.random_range(0..=top);
            let mask = index::sample(&mut rng, pairs, k)
                .into_iter()
                .fold(0u128, |acc, bit| acc | 1u128 << bit);
            Graph::from_mask(n, mask)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Property {
    /// Non-isolated nodes of TC networks have degree at least m.
    MinDegree,
    /// TC networks have at least as many links as non-isolated nodes.
    LinksCoverNodes,
    /// Non-empty TC networks contain a cycle.
    HasCycle,
    /// Simple cycles are TC (m = 2).
    CyclesAreTc,
    /// LCC iff simple cycle (m = 2).
    LccIffCycle,
    /// LCC and SQ iff the non-isolated part is one triangle (m = 2).
    TriangleOnly,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::MinDegree,
        Property::LinksCoverNodes,
        Property::HasCycle,
        Property::CyclesAreTc,
        Property::LccIffCycle,
        Property::TriangleOnly,
    ];

    pub fn applies_to(self, m: usize) -> bool {
        match self {
            Property::MinDegree | Property::LinksCoverNodes | Property::HasCycle => true,
            Property::CyclesAreTc | Property::LccIffCycle | Property::TriangleOnly => m == 2,
        }
    }

    /// Parses a check selector: a single property, `lemmas`, or `all`.
    pub fn parse_group(s: &str) -> Result<Vec<Property>> {
        match s.to_ascii_lowercase().as_str() {
            "lemmas" => Ok(vec![
                Property::MinDegree,
                Property::LinksCoverNodes,
                Property::HasCycle,
                Property::CyclesAreTc,
            ]),
            "all" => Ok(Property::ALL.to_vec()),
            other => Ok(vec![other.parse()?]),
        }
    }

    fn holds(self, g: &Graph, m: usize, is_tc: bool, cc: Option<usize>) -> Result<bool> {
        Ok(match self {
            Property::MinDegree => !is_tc || g.degrees().0.iter().all(|&d| d == 0 || d >= m),
            Property::LinksCoverNodes => !is_tc || g.edge_count() >= g.non_isolated_nodes().len(),
            Property::HasCycle => !is_tc || g.is_empty() || g.has_cycle(),
            Property::CyclesAreTc => !g.is_simple_cycle() || is_tc,
            Property::LccIffCycle => (cc == Some(1)) == g.is_simple_cycle(),
            Property::TriangleOnly => {
                let lcc_and_sq = cc == Some(1) && is_social_quilt(g)?;
                let one_triangle = g.edge_count() == 3 && g.is_simple_cycle();
                lcc_and_sq == one_triangle
            }
        })
    }
}

impl Property {
    /// Short selector accepted on the command line next to the display name.
    pub fn alias(self) -> &'static str {
        match self {
            Property::MinDegree => "lemma1",
            Property::LinksCoverNodes => "lemma2",
            Property::HasCycle => "lemma3",
            Property::CyclesAreTc => "lemma4",
            Property::LccIffCycle => "prop3",
            Property::TriangleOnly => "cor1",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Property::MinDegree => "min-degree",
            Property::LinksCoverNodes => "links-cover-nodes",
            Property::HasCycle => "has-cycle",
            Property::CyclesAreTc => "cycles-are-tc",
            Property::LccIffCycle => "lcc-iff-cycle",
            Property::TriangleOnly => "lcc-sq-triangle",
        };
        f.write_str(name)
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        Property::ALL
            .into_iter()
            .find(|p| p.to_string() == s || p.alias() == s)
            .ok_or_else(|| {
                let names: Vec<String> = Property::ALL
                    .iter()
                    .map(|p| format!("{p} ({})", p.alias()))
                    .collect();
                Error::Schema(format!(
                    "unknown property {s:?}; expected one of {}, lemmas or all",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub property: Property,
    pub m: usize,
    pub graph: Graph,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PropertyReport {
    /// (graph, m) pairs examined.
    pub graphs_checked: usize,
    /// Individual property evaluations.
    pub checks: usize,
    pub tc_found: usize,
    pub violations: Vec<Violation>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(
        &mut self,
        g: &Graph,
        m: usize,
        is_tc: bool,
        cc: Option<usize>,
        props: &[Property],
    ) -> Result<()> {
        self.graphs_checked += 1;
        self.tc_found += usize::from(is_tc);
        for &p in props.iter().filter(|p| p.applies_to(m)) {
            self.checks += 1;
            if !p.holds(g, m, is_tc, cc)? {
                self.violations.push(Violation {
                    property: p,
                    m,
                    graph: g.clone(),
                });
            }
        }
        Ok(())
    }

    fn merge(&mut self, other: PropertyReport) {
        self.graphs_checked += other.graphs_checked;
        self.checks += other.checks;
        self.tc_found += other.tc_found;
        self.violations.extend(other.violations);
    }
}

/// Checks `props` on every labeled graph with `1..=max_nodes` nodes for each
/// multiple in `ms`. One table over the complete graph `K_n` covers every
/// graph on `n` nodes, since TC status depends only on the edge set.
pub fn check_properties(
    max_nodes: usize,
    ms: &[usize],
    props: &[Property],
) -> Result<PropertyReport> {
    if max_nodes > MAX_ENUMERATION_NODES {
        return Err(Error::ResourceLimit {
            what: "node count for enumeration",
            actual: max_nodes,
            limit: MAX_ENUMERATION_NODES,
        });
    }
    let mut report = PropertyReport::default();
    for &m in ms {
        for n in 1..=max_nodes {
            let universe = TcTable::build_unchecked(&Graph::complete(n)?, m)?;
            let mut part = PropertyReport::default();
            for mask in 0..universe.len() as u32 {
                // Local and canonical bit orders coincide on K_n.
                let g = Graph::from_mask(n, mask as u128)?;
                part.record(
                    &g,
                    m,
                    universe.is_tc_mask(mask),
                    universe.cc_mask(mask),
                    props,
                )?;
            }
            report.merge(part);
        }
    }
    Ok(report)
}

/// Same checks on an explicit batch, building one table per graph.
pub fn check_graphs<'a>(
    graphs: impl IntoIterator<Item = &'a Graph>,
    ms: &[usize],
    props: &[Property],
) -> Result<PropertyReport> {
    let mut report = PropertyReport::default();
    for g in graphs {
        for &m in ms {
            let table = TcTable::build(g, m)?;
            let full = table.full_mask();
            report.record(g, m, table.is_tc_mask(full), table.cc_mask(full), props)?;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts() {
        assert_eq!(enumerate_graphs(2).unwrap().count(), 3);
        assert_eq!(enumerate_graphs(3).unwrap().count(), 11);
        assert!(enumerate_graphs(8).is_err());
    }

    #[test]
    fn four_cycles_on_four_nodes() {
        let c4s = enumerate_graphs(4)
            .unwrap()
            .filter(|g| g.n() == 4 && g.edge_count() == 4 && g.is_simple_cycle())
            .count();
        assert_eq!(c4s, 3);
    }

    #[test]
    fn enumeration_is_distinct() {
        let all: Vec<Graph> = enumerate_graphs(4).unwrap().collect();
        let unique: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(all.len(), unique.len());
        assert_eq!(all.len(), 1 + 2 + 8 + 64);
    }

    #[test]
    fn property_parsing() {
        assert_eq!(Property::parse_group("lemmas").unwrap().len(), 4);
        assert_eq!(
            Property::parse_group("prop3").unwrap(),
            vec![Property::LccIffCycle]
        );
        assert!(Property::parse_group("lemma9").is_err());
    }

    #[test]
    fn small_sweep_is_clean() {
        let report = check_properties(5, &[2, 3], &Property::ALL).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.graphs_checked, 2 * (1 + 2 + 8 + 64 + 1024));
    }

    #[test]
    fn samples_respect_edge_cap() {
        let batch = sample_graphs(7, 12, 200, 1).unwrap();
        assert_eq!(batch.len(), 200);
        assert!(batch.iter().all(|g| g.n() == 7 && g.edge_count() <= 12));
        assert_eq!(batch, sample_graphs(7, 12, 200, 1).unwrap());
    }
}
