//! Bottom-up TC membership over every edge subset of a base graph.
//!
//! Masks are local: bit `e` stands for the `e`-th edge of the base graph in
//! canonical order. Every proper submask of `h` is numerically smaller than
//! `h`, so a single ascending sweep sees all dependencies first.
//!
//! Besides the TC flag, each mask carries its *frontier*: the TC submasks not
//! degree-dominated by any other TC submask. For a TC mask that is the mask
//! itself; otherwise it is the undominated part of the union of the
//! frontiers one edge down. The existential test for `h` only has to scan the
//! frontier of `h - ij`.

use crate::error::{Error, Result};
use crate::graph::{check_enum_budget, edge_index, Edge, Graph};

/// Eight-bit degree lanes for up to 16 nodes.
type Packed = u128;

const LANE_HIGH: Packed = 0x8080_8080_8080_8080_8080_8080_8080_8080;

#[inline]
fn lane(p: Packed, node: usize) -> usize {
    ((p >> (8 * node)) & 0xff) as usize
}

/// Componentwise `>=` with one strict lane. Lanes hold degrees below 16, so
/// setting the high bit before subtracting can never borrow across lanes.
#[inline]
fn packed_dominates(a: Packed, b: Packed) -> bool {
    a != b && (((a | LANE_HIGH) - b) & LANE_HIGH) == LANE_HIGH
}

/// Largest `(edge count, cc)` pair, compared lexicographically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
struct Best {
    edges: u8,
    cc: u8,
}

pub struct TcTable {
    base: Graph,
    m: usize,
    edges: Vec<Edge>,
    increments: Vec<Packed>,
    tc: Vec<bool>,
    cc: Vec<u8>,
    best: Vec<Best>,
    /// For TC masks: whether several maximum-size strict TC submasks disagreed on cc.
    cc_tie: Vec<bool>,
    offsets: Vec<u32>,
    frontier: Vec<u32>,
}

impl TcTable {
    pub fn build(base: &Graph, m: usize) -> Result<Self> {
        check_enum_budget(base.edge_count())?;
        Self::build_unchecked(base, m)
    }

    /// Same as [`TcTable::build`] with a 21-edge budget, which admits the
    /// complete graph on seven nodes for exhaustive enumeration.
    pub(crate) fn build_unchecked(base: &Graph, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidMultiple(m));
        }
        let width = base.edge_count();
        if width > 21 {
            return Err(Error::ResourceLimit {
                what: "edge count",
                actual: width,
                limit: 21,
            });
        }
        let edges = base.edges();
        let increments = edges
            .iter()
            .map(|&(i, j)| (1 as Packed) << (8 * i) | (1 as Packed) << (8 * j))
            .collect();
        let total = 1usize << width;
        let mut table = TcTable {
            base: base.clone(),
            m,
            edges,
            increments,
            tc: Vec::with_capacity(total),
            cc: Vec::with_capacity(total),
            best: Vec::with_capacity(total),
            cc_tie: Vec::with_capacity(total),
            offsets: Vec::with_capacity(total + 1),
            frontier: Vec::with_capacity(total),
        };
        table.offsets.push(0);
        let mut scratch = Vec::new();
        for h in 0..total as u32 {
            table.push_mask(h, &mut scratch);
        }
        Ok(table)
    }

    fn push_mask(&mut self, h: u32, scratch: &mut Vec<(u32, Packed)>) {
        if h == 0 {
            self.tc.push(true);
            self.cc.push(0);
            self.best.push(Best::default());
            self.cc_tie.push(false);
            self.frontier.push(0);
            self.offsets.push(self.frontier.len() as u32);
            return;
        }

        let size = h.count_ones() as usize;
        let degrees = self.packed(h);
        let is_tc = self.check_tc(h, size, degrees);

        let mut strict_best = Best::default();
        let mut rest = h;
        while rest != 0 {
            let e = rest.trailing_zeros();
            rest &= rest - 1;
            strict_best = strict_best.max(self.best[(h & !(1 << e)) as usize]);
        }

        if is_tc {
            let tie = self.cc_disagrees_at(h, strict_best);
            let cc = strict_best.cc + 1;
            self.tc.push(true);
            self.cc.push(cc);
            self.best.push(Best {
                edges: size as u8,
                cc,
            });
            self.cc_tie.push(tie);
            self.frontier.push(h);
        } else {
            scratch.clear();
            let mut rest = h;
            while rest != 0 {
                let e = rest.trailing_zeros();
                rest &= rest - 1;
                for &g in self.frontier_of(h & !(1 << e)) {
                    scratch.push((g, 0));
                }
            }
            scratch.sort_unstable_by_key(|&(g, _)| g);
            scratch.dedup_by_key(|&mut (g, _)| g);
            for entry in scratch.iter_mut() {
                entry.1 = self.packed(entry.0);
            }
            for &(g, dg) in scratch.iter() {
                if !scratch
                    .iter()
                    .any(|&(_, other)| packed_dominates(other, dg))
                {
                    self.frontier.push(g);
                }
            }
            self.tc.push(false);
            self.cc.push(0);
            self.best.push(strict_best);
            self.cc_tie.push(false);
        }
        self.offsets.push(self.frontier.len() as u32);
    }

    /// Every node `i` and incident `ij` must have a frontier element of
    /// `h - ij` that costs the graph at least `m` edges and `i` at least `m` links.
    fn check_tc(&self, h: u32, size: usize, degrees: Packed) -> bool {
        let m = self.m;
        let mut rest = h;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = h & !(1 << e);
            let (a, b) = self.edges[e];
            for node in [a, b] {
                let have = lane(degrees, node);
                if have < m {
                    return false;
                }
                let ok = self.frontier_of(without).iter().any(|&g| {
                    g.count_ones() as usize + m <= size && lane(self.packed(g), node) + m <= have
                });
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn cc_disagrees_at(&self, h: u32, strict_best: Best) -> bool {
        let mut rest = h;
        while rest != 0 {
            let e = rest.trailing_zeros();
            rest &= rest - 1;
            let b = self.best[(h & !(1 << e)) as usize];
            if b.edges == strict_best.edges && b.cc != strict_best.cc {
                return true;
            }
        }
        false
    }

    #[inline]
    fn packed(&self, local: u32) -> Packed {
        let mut sum = 0;
        let mut rest = local;
        while rest != 0 {
            sum += self.increments[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        sum
    }

    fn frontier_of(&self, local: u32) -> &[u32] {
        let lo = self.offsets[local as usize] as usize;
        let hi = self.offsets[local as usize + 1] as usize;
        &self.frontier[lo..hi]
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of masks covered, `2^|E(base)|`.
    pub fn len(&self) -> usize {
        self.tc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tc.is_empty()
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.edges.len()) - 1) as u32
    }

    pub fn local_mask(&self, g: &Graph) -> Result<u32> {
        if !g.is_subnetwork_of(&self.base) {
            return Err(Error::Schema(format!(
                "{g} is not a subnetwork of the table's base {}",
                self.base
            )));
        }
        let n = self.base.n();
        Ok(self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| g.mask() & (1u128 << edge_index(n, i, j)) != 0)
            .fold(0u32, |acc, (e, _)| acc | 1 << e))
    }

    pub fn graph_of(&self, local: u32) -> Graph {
        let n = self.base.n();
        let mut mask = 0u128;
        let mut rest = local;
        while rest != 0 {
            let (i, j) = self.edges[rest.trailing_zeros() as usize];
            mask |= 1u128 << edge_index(n, i, j);
            rest &= rest - 1;
        }
        Graph::from_mask(n, mask).expect("subset of a valid base")
    }

    pub fn is_tc_mask(&self, local: u32) -> bool {
        self.tc[local as usize]
    }

    /// Cognitive complexity of a TC mask.
    pub fn cc_mask(&self, local: u32) -> Option<usize> {
        self.is_tc_mask(local)
            .then(|| self.cc[local as usize] as usize)
    }

    pub(crate) fn cc_tie_mask(&self, local: u32) -> bool {
        self.cc_tie[local as usize]
    }

    /// TC submasks of `local` that no other TC submask degree-dominates.
    pub fn frontier_mask(&self, local: u32) -> &[u32] {
        self.frontier_of(local)
    }

    pub fn is_tc_subnetwork(&self, g: &Graph) -> Result<bool> {
        Ok(self.is_tc_mask(self.local_mask(g)?))
    }

    pub fn is_tc(&self) -> bool {
        self.is_tc_mask(self.full_mask())
    }

    /// The frontier element of `h - ij` certifying node `node`'s incentive to
    /// keep `ij`, if any.
    pub fn witness(&self, h: u32, edge: Edge, node: usize) -> Option<u32> {
        let e = self.edges.iter().position(|&x| x == edge)?;
        if h & (1 << e) == 0 {
            return None;
        }
        let size = h.count_ones() as usize;
        let have = lane(self.packed(h), node);
        let m = self.m;
        self.frontier_of(h & !(1 << e)).iter().copied().find(|&g| {
            g.count_ones() as usize + m <= size && lane(self.packed(g), node) + m <= have
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_dominance_matches_componentwise() {
        let pack = |v: &[u8]| {
            v.iter()
                .enumerate()
                .fold(0 as Packed, |acc, (i, &d)| acc | (d as Packed) << (8 * i))
        };
        assert!(packed_dominates(pack(&[2, 2, 2]), pack(&[0, 0, 0])));
        assert!(!packed_dominates(pack(&[2, 2, 2]), pack(&[2, 2, 2])));
        assert!(!packed_dominates(pack(&[2, 2, 0]), pack(&[0, 2, 2])));
        assert!(packed_dominates(pack(&[15, 0, 15]), pack(&[14, 0, 0])));
        assert!(!packed_dominates(pack(&[0; 16]), pack(&[15; 16])));
    }

    #[test]
    fn triangle_table() {
        let tri = Graph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let t = TcTable::build(&tri, 2).unwrap();
        assert_eq!(t.len(), 8);
        for mask in 0..8u32 {
            let expect = mask == 0 || mask == 7;
            assert_eq!(t.is_tc_mask(mask), expect, "mask {mask:03b}");
        }
        assert_eq!(t.cc_mask(7), Some(1));
        assert_eq!(t.cc_mask(0), Some(0));
    }

    #[test]
    fn single_edge_and_pentagon_m3() {
        let edge = Graph::new(2, &[(0, 1)]).unwrap();
        assert!(!TcTable::build(&edge, 2).unwrap().is_tc());
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert!(!TcTable::build(&c5, 3).unwrap().is_tc());
        assert!(TcTable::build(&c5, 2).unwrap().is_tc());
    }

    #[test]
    fn rejects_bad_multiple() {
        let tri = Graph::new(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            TcTable::build(&tri, 1),
            Err(Error::InvalidMultiple(1))
        ));
    }
}
