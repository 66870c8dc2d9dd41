//! Small undirected simple graphs over indexed nodes.
//!
//! Edges live in a `u128` bitmask over the canonical pair ordering
//! `(0,1), (0,2), .., (0,n-1), (1,2), ..`, so equal edge sets always compare
//! equal regardless of construction order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_NODES: usize = 16;
/// Edge budget for anything that walks all `2^|E|` subnetworks.
pub const MAX_ENUM_EDGES: usize = 20;

/// An unordered node pair, always stored with the smaller endpoint first.
pub type Edge = (usize, usize);

pub fn canonical_edge(a: usize, b: usize) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Bit position of the canonical pair `(i, j)`, `i < j < n`.
#[inline]
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`edge_index`].
pub fn edge_at(n: usize, mut index: usize) -> Edge {
    for i in 0..n {
        let row = n - i - 1;
        if index < row {
            return (i, i + 1 + index);
        }
        index -= row;
    }
    panic!("edge index out of range for {n} nodes");
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    mask: u128,
}

impl Graph {
    pub fn new(n: usize, edges: &[Edge]) -> Result<Self> {
        if n == 0 || n > MAX_NODES {
            return Err(Error::NodeCount(n));
        }
        let mut mask = 0u128;
        for &(a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if a >= n || b >= n {
                return Err(Error::EndpointOutOfRange { edge: (a, b), n });
            }
            let (i, j) = canonical_edge(a, b);
            let bit = 1u128 << edge_index(n, i, j);
            if mask & bit != 0 {
                return Err(Error::DuplicateEdge((a, b)));
            }
            mask |= bit;
        }
        Ok(Graph { n, mask })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, &[])
    }

    /// Builds a graph straight from a canonical bitmask.
    pub fn from_mask(n: usize, mask: u128) -> Result<Self> {
        if n == 0 || n > MAX_NODES {
            return Err(Error::NodeCount(n));
        }
        let width = pair_count(n);
        if width < 128 && mask >> width != 0 {
            return Err(Error::Schema(format!(
                "mask {mask:#x} has bits beyond the {width} pairs of a {n}-node graph"
            )));
        }
        Ok(Graph { n, mask })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let width = pair_count(n);
        Self::from_mask(
            n,
            if width == 128 {
                u128::MAX
            } else {
                (1u128 << width) - 1
            },
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn edge_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == b || a >= self.n || b >= self.n {
            return false;
        }
        let (i, j) = canonical_edge(a, b);
        self.mask & (1u128 << edge_index(self.n, i, j)) != 0
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        let mut rest = self.mask;
        while rest != 0 {
            let bit = rest.trailing_zeros() as usize;
            out.push(edge_at(self.n, bit));
            rest &= rest - 1;
        }
        out
    }

    pub fn delete_link(&self, edge: Edge) -> Result<Graph> {
        let (a, b) = edge;
        if !self.has_edge(a, b) {
            return Err(Error::AbsentEdge(edge));
        }
        let (i, j) = canonical_edge(a, b);
        Ok(Graph {
            n: self.n,
            mask: self.mask & !(1u128 << edge_index(self.n, i, j)),
        })
    }

    /// Union of the edge sets of two graphs on the same node set.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        Ok(Graph {
            n: self.n,
            mask: self.mask | other.mask,
        })
    }

    pub fn is_subnetwork_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.mask & !other.mask == 0
    }

    /// Neighbor sets as node bitmasks.
    pub fn adjacency(&self) -> Vec<u16> {
        let mut adj = vec![0u16; self.n];
        for (i, j) in self.edges() {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        adj
    }

    pub fn degree(&self, node: usize) -> usize {
        (0..self.n).filter(|&k| self.has_edge(node, k)).count()
    }

    pub fn degrees(&self) -> DegreeProfile {
        let mut degrees = vec![0; self.n];
        for (i, j) in self.edges() {
            degrees[i] += 1;
            degrees[j] += 1;
        }
        DegreeProfile(degrees)
    }

    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        (0..self.n).filter(|&k| self.has_edge(node, k)).collect()
    }

    /// Links of `node`, canonical and ordered by the other endpoint.
    pub fn incident_edges(&self, node: usize) -> Vec<Edge> {
        self.neighbors(node)
            .into_iter()
            .map(|k| canonical_edge(node, k))
            .collect()
    }

    pub fn non_isolated_nodes(&self) -> Vec<usize> {
        let adj = self.adjacency();
        (0..self.n).filter(|&i| adj[i] != 0).collect()
    }

    fn component_count_of_non_isolated(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = 0u16;
        let mut components = 0;
        for start in 0..self.n {
            if adj[start] == 0 || seen & (1 << start) != 0 {
                continue;
            }
            components += 1;
            let mut frontier = 1u16 << start;
            seen |= frontier;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = adj[v] & !seen;
                seen |= fresh;
                frontier |= fresh;
            }
        }
        components
    }

    /// True iff the non-isolated part is a single cycle on at least three nodes.
    pub fn is_simple_cycle(&self) -> bool {
        let active = self.non_isolated_nodes();
        active.len() >= 3
            && active.iter().all(|&i| self.degree(i) == 2)
            && self.component_count_of_non_isolated() == 1
    }

    /// Cycle detection by spanning-forest size: a forest on `k` non-isolated
    /// nodes in `c` components has exactly `k - c` edges.
    pub fn has_cycle(&self) -> bool {
        let active = self.non_isolated_nodes().len();
        self.edge_count() > active - self.component_count_of_non_isolated()
    }

    pub fn structural_facts(&self) -> Result<StructuralFacts> {
        check_enum_budget(self.edge_count())?;
        Ok(StructuralFacts {
            has_cycle: self.has_cycle(),
            every_edge_in_triangle: self.every_edge_in_triangle(),
            max_simple_cycle_len: self.longest_simple_cycle(),
        })
    }

    fn every_edge_in_triangle(&self) -> bool {
        let adj = self.adjacency();
        self.edges().iter().all(|&(i, j)| adj[i] & adj[j] != 0)
    }

    /// Exhaustive search. Each cycle is rooted at its smallest node so only
    /// larger nodes are explored below the root.
    fn longest_simple_cycle(&self) -> usize {
        fn extend(adj: &[u16], root: usize, at: usize, visited: u16, len: usize, best: &mut usize) {
            if len >= 3 && adj[at] & (1 << root) != 0 {
                *best = (*best).max(len);
            }
            let mut next = adj[at] & !visited & !((1u16 << (root + 1)) - 1);
            while next != 0 {
                let v = next.trailing_zeros() as usize;
                next &= next - 1;
                extend(adj, root, v, visited | (1 << v), len + 1, best);
            }
        }

        let adj = self.adjacency();
        let mut best = 0;
        for root in 0..self.n {
            extend(&adj, root, root, 1 << root, 1, &mut best);
        }
        best
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {:?})", self.n, self.edges())
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .iter()
            .map(|(i, j)| format!("{i}-{j}"))
            .collect();
        write!(f, "n={} [{}]", self.n, edges.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            n: self.n,
            edges: self.edges().into_iter().map(|(i, j)| [i, j]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(deserializer)?;
        let edges: Vec<Edge> = raw.edges.iter().map(|&[a, b]| (a, b)).collect();
        Graph::new(raw.n, &edges).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralFacts {
    pub has_cycle: bool,
    pub every_edge_in_triangle: bool,
    pub max_simple_cycle_len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeProfile(pub Vec<usize>);

impl DegreeProfile {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Componentwise `>=` with at least one strict inequality.
    pub fn dominates(&self, other: &DegreeProfile) -> Result<bool> {
        if self.0.len() != other.0.len() {
            return Err(Error::LengthMismatch(self.0.len(), other.0.len()));
        }
        let mut strict = false;
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return Ok(false);
            }
            strict |= a > b;
        }
        Ok(strict)
    }
}

pub fn dominates(d1: &DegreeProfile, d2: &DegreeProfile) -> Result<bool> {
    d1.dominates(d2)
}

pub(crate) fn check_enum_budget(edges: usize) -> Result<()> {
    if edges > MAX_ENUM_EDGES {
        return Err(Error::ResourceLimit {
            what: "edge count",
            actual: edges,
            limit: MAX_ENUM_EDGES,
        });
    }
    Ok(())
}

/// All spanning subnetworks of `g` (same node set, every edge subset), by
/// nondecreasing edge count.
pub fn enumerate_subnetworks(g: &Graph) -> Result<Subnetworks> {
    check_enum_budget(g.edge_count())?;
    Ok(Subnetworks {
        n: g.n,
        bits: g
            .edges()
            .iter()
            .map(|&(i, j)| 1u128 << edge_index(g.n, i, j))
            .collect(),
        size: 0,
        next: Some(0),
    })
}

/// Iterator returned by [`enumerate_subnetworks`]; walks local masks of each
/// popcount in increasing order (Gosper's hack).
pub struct Subnetworks {
    n: usize,
    bits: Vec<u128>,
    size: usize,
    next: Option<u32>,
}

impl Iterator for Subnetworks {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        let local = self.next?;
        let width = self.bits.len();
        let mut mask = 0u128;
        let mut rest = local;
        while rest != 0 {
            mask |= self.bits[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }

        let limit = 1u64 << width;
        let following = if local == 0 {
            None
        } else {
            let c = local & local.wrapping_neg();
            let r = local + c;
            let candidate = (((r ^ local) >> 2) / c) | r;
            (u64::from(candidate) < limit && r != 0).then_some(candidate)
        };
        self.next = following.or_else(|| {
            self.size += 1;
            (self.size <= width).then(|| ((1u64 << self.size) - 1) as u32)
        });
        Some(Graph { n: self.n, mask })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn bowtie() -> Graph {
        Graph::new(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]).unwrap()
    }

    #[test]
    fn make_graph_canonicalizes() {
        let a = triangle();
        let b = Graph::new(3, &[(2, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(a.edge_count(), 3);
        assert_eq!(a.mask(), b.mask());
        assert_eq!(a.edges(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn make_graph_rejects_bad_input() {
        assert!(matches!(Graph::new(2, &[(0, 0)]), Err(Error::SelfLoop(0))));
        assert!(matches!(
            Graph::new(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge((1, 0)))
        ));
        assert!(matches!(
            Graph::new(3, &[(0, 3)]),
            Err(Error::EndpointOutOfRange { edge: (0, 3), n: 3 })
        ));
        assert!(matches!(Graph::new(17, &[]), Err(Error::NodeCount(17))));
    }

    #[test]
    fn edge_index_round_trips() {
        for n in 2..=MAX_NODES {
            for idx in 0..pair_count(n) {
                let (i, j) = edge_at(n, idx);
                assert_eq!(edge_index(n, i, j), idx);
            }
        }
    }

    #[test]
    fn delete_link_cases() {
        let path = triangle().delete_link((0, 1)).unwrap();
        assert_eq!(path.edges(), vec![(0, 2), (1, 2)]);

        let single = Graph::new(2, &[(0, 1)]).unwrap();
        assert!(single.delete_link((1, 0)).unwrap().is_empty());

        assert!(matches!(
            triangle().delete_link((0, 3)),
            Err(Error::AbsentEdge((0, 3)))
        ));
    }

    #[test]
    fn dominance() {
        let d = |v: &[usize]| DegreeProfile(v.to_vec());
        assert!(dominates(&d(&[2, 2, 2]), &d(&[0, 0, 0])).unwrap());
        assert!(!dominates(&d(&[2, 2, 2]), &d(&[2, 2, 2])).unwrap());
        assert!(!dominates(&d(&[2, 2, 0]), &d(&[0, 2, 2])).unwrap());
        assert!(!dominates(&d(&[0, 2, 2]), &d(&[2, 2, 0])).unwrap());
        assert!(matches!(
            dominates(&d(&[1]), &d(&[1, 2])),
            Err(Error::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn subnetwork_counts() {
        let subs: Vec<Graph> = enumerate_subnetworks(&triangle()).unwrap().collect();
        assert_eq!(subs.len(), 8);
        let by_size: Vec<usize> = subs.iter().map(Graph::edge_count).collect();
        assert_eq!(by_size, vec![0, 1, 1, 1, 2, 2, 2, 3]);

        let empty = Graph::empty(4).unwrap();
        let subs: Vec<Graph> = enumerate_subnetworks(&empty).unwrap().collect();
        assert_eq!(subs, vec![empty]);

        assert_eq!(enumerate_subnetworks(&bowtie()).unwrap().count(), 64);

        let k7 = Graph::complete(7).unwrap();
        assert!(matches!(
            enumerate_subnetworks(&k7),
            Err(Error::ResourceLimit { actual: 21, .. })
        ));
    }

    #[test]
    fn simple_cycles() {
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert!(c5.is_simple_cycle());
        let tri_plus_isolated = Graph::new(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(tri_plus_isolated.is_simple_cycle());
        assert!(!bowtie().is_simple_cycle());
        let two_triangles =
            Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!two_triangles.is_simple_cycle());
        assert!(!Graph::empty(3).unwrap().is_simple_cycle());
    }

    #[test]
    fn structural_fact_examples() {
        let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(
            c4.structural_facts().unwrap(),
            StructuralFacts {
                has_cycle: true,
                every_edge_in_triangle: false,
                max_simple_cycle_len: 4
            }
        );
        let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            path.structural_facts().unwrap(),
            StructuralFacts {
                has_cycle: false,
                every_edge_in_triangle: false,
                max_simple_cycle_len: 0
            }
        );
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(k4.structural_facts().unwrap().max_simple_cycle_len, 4);
    }

    #[test]
    fn json_accepts_any_order_and_emits_canonical() {
        let g: Graph = serde_json::from_str(r#"{"n":3,"edges":[[1,0]]}"#).unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"n":3,"edges":[[0,1]]}"#
        );
        assert!(serde_json::from_str::<Graph>(r#"{"n":3,"edges":[[0,3]]}"#).is_err());
    }
}
