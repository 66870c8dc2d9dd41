//! Reference implementations used as test oracles. They work directly from
//! the recursive definitions on plain edge lists and share no code with the
//! library's analysis.

#![allow(dead_code)]

use std::collections::BTreeSet;

pub type Pair = (usize, usize);

/// TC membership for every subset of `edges`, by literal induction on link
/// count: for each link ij and endpoint i, some TC g' inside g - ij has at
/// most |g| - m links, gives i at most d_i(g) - m links, and is not
/// degree-dominated by any TC subnetwork of g - ij.
pub struct BruteTc {
    pub n: usize,
    pub edges: Vec<Pair>,
    pub m: usize,
    tc: Vec<bool>,
    degrees: Vec<Vec<usize>>,
}

fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let s = next?;
        next = if s == 0 { None } else { Some((s - 1) & mask) };
        Some(s)
    })
}

impl BruteTc {
    pub fn new(n: usize, edges: &[Pair], m: usize) -> Self {
        assert!(edges.len() <= 16, "oracle is exponential");
        let size = 1usize << edges.len();
        let degrees = (0..size)
            .map(|mask| {
                let mut d = vec![0; n];
                for (k, &(a, b)) in edges.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        d[a] += 1;
                        d[b] += 1;
                    }
                }
                d
            })
            .collect();
        let mut oracle = BruteTc {
            n,
            edges: edges.to_vec(),
            m,
            tc: vec![false; size],
            degrees,
        };
        let mut order: Vec<u32> = (0..size as u32).collect();
        order.sort_by_key(|h| h.count_ones());
        for h in order {
            oracle.tc[h as usize] = h == 0 || oracle.satisfies_definition(h);
        }
        oracle
    }

    /// Every graph on `n` nodes, as subsets of all pairs in lexicographic order.
    pub fn universe(n: usize, m: usize) -> Self {
        let pairs: Vec<Pair> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::new(n, &pairs, m)
    }

    pub fn full(&self) -> u32 {
        ((1u64 << self.edges.len()) - 1) as u32
    }

    pub fn is_tc(&self, mask: u32) -> bool {
        self.tc[mask as usize]
    }

    pub fn degree(&self, mask: u32, node: usize) -> usize {
        self.degrees[mask as usize][node]
    }

    pub fn edge_list(&self, mask: u32) -> Vec<Pair> {
        (0..self.edges.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| self.edges[k])
            .collect()
    }

    pub fn dominates(&self, a: u32, b: u32) -> bool {
        let (da, db) = (&self.degrees[a as usize], &self.degrees[b as usize]);
        da.iter().zip(db).all(|(x, y)| x >= y) && da != db
    }

    fn tc_submasks(&self, mask: u32) -> Vec<u32> {
        submasks(mask).filter(|&s| self.tc[s as usize]).collect()
    }

    /// TC subnetworks of `mask` not degree-dominated by another one.
    pub fn undominated(&self, mask: u32) -> Vec<u32> {
        let pool = self.tc_submasks(mask);
        let mut out: Vec<u32> = pool
            .iter()
            .copied()
            .filter(|&g| !pool.iter().any(|&o| self.dominates(o, g)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Whether `g` (a subset of `h - edge k`) deters `node` from cutting link k.
    pub fn deters(&self, h: u32, k: usize, node: usize, g: u32) -> bool {
        let rest = h & !(1 << k);
        let m = self.m;
        g & !rest == 0
            && self.tc[g as usize]
            && g.count_ones() as usize + m <= h.count_ones() as usize
            && self.degree(g, node) + m <= self.degree(h, node)
            && !self
                .tc_submasks(rest)
                .into_iter()
                .any(|o| self.dominates(o, g))
    }

    fn satisfies_definition(&self, h: u32) -> bool {
        (0..self.edges.len()).filter(|k| h >> k & 1 == 1).all(|k| {
            let rest = h & !(1 << k);
            let pool = self.tc_submasks(rest);
            let (a, b) = self.edges[k];
            [a, b].into_iter().all(|i| {
                pool.iter().any(|&g| {
                    g.count_ones() as usize + self.m <= h.count_ones() as usize
                        && self.degree(g, i) + self.m <= self.degree(h, i)
                        && !pool.iter().any(|&o| self.dominates(o, g))
                })
            })
        })
    }

    /// Every cc value obtainable by picking one of the largest strict TC
    /// subnetworks at each step. `None` when `h` is not TC.
    pub fn cc_values(&self, h: u32) -> Option<BTreeSet<usize>> {
        if !self.tc[h as usize] {
            return None;
        }
        if h == 0 {
            return Some(BTreeSet::from([0]));
        }
        let strict: Vec<u32> = self
            .tc_submasks(h)
            .into_iter()
            .filter(|&s| s != h)
            .collect();
        let top = strict
            .iter()
            .map(|s| s.count_ones())
            .max()
            .expect("empty is TC");
        let mut values = BTreeSet::new();
        for s in strict.into_iter().filter(|s| s.count_ones() == top) {
            values.extend(self.cc_values(s).expect("TC").into_iter().map(|v| v + 1));
        }
        Some(values)
    }
}

pub fn degrees(n: usize, edges: &[Pair]) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(a, b) in edges {
        d[a] += 1;
        d[b] += 1;
    }
    d
}

/// Components of the non-isolated part, by union-find.
fn components(n: usize, edges: &[Pair]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let d = degrees(n, edges);
    let roots: BTreeSet<usize> = (0..n)
        .filter(|&v| d[v] > 0)
        .map(|v| find(&mut parent, v))
        .collect();
    roots.len()
}

pub fn is_simple_cycle(n: usize, edges: &[Pair]) -> bool {
    !edges.is_empty()
        && degrees(n, edges).iter().all(|&d| d == 0 || d == 2)
        && components(n, edges) == 1
}

pub fn is_single_triangle(n: usize, edges: &[Pair]) -> bool {
    edges.len() == 3 && is_simple_cycle(n, edges)
}

/// Longest simple cycle, by DFS from each start node over larger-labeled nodes.
pub fn longest_cycle(n: usize, edges: &[Pair]) -> usize {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    fn walk(
        adj: &[Vec<bool>],
        start: usize,
        at: usize,
        seen: &mut Vec<bool>,
        len: usize,
        best: &mut usize,
    ) {
        for next in 0..adj.len() {
            if !adj[at][next] {
                continue;
            }
            if next == start && len >= 3 {
                *best = (*best).max(len);
            } else if next > start && !seen[next] {
                seen[next] = true;
                walk(adj, start, next, seen, len + 1, best);
                seen[next] = false;
            }
        }
    }
    let mut best = 0;
    for s in 0..n {
        let mut seen = vec![false; n];
        seen[s] = true;
        walk(&adj, s, s, &mut seen, 1, &mut best);
    }
    best
}

pub fn is_social_quilt(n: usize, edges: &[Pair]) -> bool {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let in_triangle = edges
        .iter()
        .all(|&(a, b)| (0..n).any(|c| adj[a][c] && adj[b][c]));
    in_triangle && longest_cycle(n, edges) <= 3
}

/// Hub 0 joined to `rings` disjoint rings of `size` nodes, where each ring
/// is a cycle through the hub.
pub fn ring_star(rings: usize, size: usize) -> (usize, Vec<Pair>) {
    let n = 1 + rings * (size - 1);
    let mut edges = Vec::new();
    for r in 0..rings {
        let first = 1 + r * (size - 1);
        let path: Vec<usize> = std::iter::once(0).chain(first..first + size - 1).collect();
        for w in path.windows(2) {
            edges.push((w[0].min(w[1]), w[0].max(w[1])));
        }
        edges.push((0, *path.last().unwrap()));
    }
    edges.sort_unstable();
    (n, edges)
}
