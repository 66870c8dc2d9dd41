//! Equilibrium taxonomy of favor-exchange networks: renegotiation-proof
//! (transitively critical) networks, cognitive complexity, low cognitive
//! complexity and social quilts.
//!
//! RPE status is computed through its TC characterization; `is_rpe` is an
//! alias of [`is_tc`].

mod enumerate;
mod model;
mod table;

use serde::{Deserialize, Serialize};

pub use enumerate::{
    check_graphs, check_properties, enumerate_graphs, sample_graphs, Property, PropertyReport,
    Violation, MAX_ENUMERATION_NODES,
};
pub use model::{
    corner_case_bound, corner_case_holds, in_range, in_range_m2, theoretical_b, ModelParams,
};
pub use table::TcTable;

use crate::catalog::NetworkRef;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

pub fn build_tc_table(g: &Graph, m: usize) -> Result<TcTable> {
    TcTable::build(g, m)
}

pub fn is_tc(g: &Graph, m: usize) -> Result<bool> {
    Ok(TcTable::build(g, m)?.is_tc())
}

pub fn is_rpe(g: &Graph, m: usize) -> Result<bool> {
    is_tc(g, m)
}

/// TC subnetworks of `g` that no other TC subnetwork of `g` degree-dominates.
/// Contains `g` alone when `g` is TC; never empty.
pub fn maximal_tc_subnetworks(g: &Graph, m: usize) -> Result<Vec<Graph>> {
    let table = TcTable::build(g, m)?;
    Ok(maximal_from_table(&table))
}

pub(crate) fn maximal_from_table(table: &TcTable) -> Vec<Graph> {
    table
        .frontier_mask(table.full_mask())
        .iter()
        .map(|&local| table.graph_of(local))
        .collect()
}

/// `cc(empty) = 0`; otherwise one more than the cc of the largest strict TC
/// subnetwork, largest meaning most edges, ties resolved by the larger cc.
pub fn cc_number(g: &Graph, m: usize) -> Result<usize> {
    TcTable::build(g, m)?
        .cc_mask(((1u64 << g.edge_count()) - 1) as u32)
        .ok_or(Error::NotTc)
}

pub fn is_lcc(g: &Graph, m: usize) -> Result<bool> {
    let table = TcTable::build(g, m)?;
    Ok(table.cc_mask(table.full_mask()) == Some(1))
}

/// Union of triangles with no simple cycle longer than three. Vacuously true
/// for the empty network.
pub fn is_social_quilt(g: &Graph) -> Result<bool> {
    let facts = g.structural_facts()?;
    Ok(facts.every_edge_in_triangle && facts.max_simple_cycle_len <= 3)
}

/// The subnetwork node `node` expects to survive if it refuses over `edge`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub node: usize,
    pub edge: Edge,
    pub subnetwork: Graph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub graph: Graph,
    pub m: usize,
    pub is_tc: bool,
    /// `None` for non-TC networks, where cognitive complexity is undefined.
    pub cc: Option<usize>,
    pub is_lcc: bool,
    pub is_sq: bool,
    pub is_simple_cycle: bool,
    /// Set when several largest strict TC subnetworks had different cc and
    /// the maximum was taken.
    pub cc_tie_broken: bool,
    pub witnesses: Vec<Witness>,
}

impl Classification {
    pub fn is_rpe(&self) -> bool {
        self.is_tc
    }

    pub fn report(&self, network: NetworkRef) -> ClassificationReport {
        ClassificationReport {
            network,
            m: self.m,
            rpe: self.is_tc,
            cc: self.cc,
            lcc: self.is_lcc,
            sq: self.is_sq,
            simple_cycle: self.is_simple_cycle,
        }
    }
}

/// Wire form of a classification. `cc` is `null` for non-RPE networks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub network: NetworkRef,
    pub m: usize,
    pub rpe: bool,
    pub cc: Option<usize>,
    pub lcc: bool,
    pub sq: bool,
    pub simple_cycle: bool,
}

pub fn classify(g: &Graph, m: usize) -> Result<Classification> {
    let table = TcTable::build(g, m)?;
    classify_with_table(&table)
}

pub(crate) fn classify_with_table(table: &TcTable) -> Result<Classification> {
    let g = table.base().clone();
    let full = table.full_mask();
    let is_tc = table.is_tc_mask(full);
    let cc = table.cc_mask(full);
    let witnesses = if is_tc {
        g.edges()
            .into_iter()
            .flat_map(|edge| [(edge.0, edge), (edge.1, edge)])
            .map(|(node, edge)| {
                let local = table
                    .witness(full, edge, node)
                    .expect("every link of a TC network has a witness");
                Witness {
                    node,
                    edge,
                    subnetwork: table.graph_of(local),
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let cc_tie_broken = is_tc && table.cc_tie_mask(full);
    if cc_tie_broken {
        log::debug!("cc of {g} resolved a tie among largest TC subnetworks by taking the maximum");
    }
    Ok(Classification {
        is_sq: is_social_quilt(&g)?,
        is_simple_cycle: g.is_simple_cycle(),
        is_lcc: cc == Some(1),
        m: table.m(),
        graph: g,
        is_tc,
        cc,
        cc_tie_broken,
        witnesses,
    })
}
