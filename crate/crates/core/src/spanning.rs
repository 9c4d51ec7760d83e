//! Spanning-forest strategies for the first step of the greedy heuristic.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::graph::{PairSigns, Sign, SignedEdge, SignedGraph};

/// Edge-cost functions for the Kruskal-based strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostFunction {
    /// 3 for positive-only, 1 for negative-only, 2 for parallel pairs.
    F1,
    /// 1 / 2 / 3.
    F2,
    /// 2 / 1 / 3.
    F3,
    /// Uniform integer in `[0, 1000]`.
    Random,
    /// `F1` when the graph has fewer negative than positive edges, else `F2`.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeStrategy {
    Bfs,
    Dfs,
    Kruskal(CostFunction),
}

impl TreeStrategy {
    pub const ALL: [TreeStrategy; 7] = [
        TreeStrategy::Bfs,
        TreeStrategy::Dfs,
        TreeStrategy::Kruskal(CostFunction::F1),
        TreeStrategy::Kruskal(CostFunction::F2),
        TreeStrategy::Kruskal(CostFunction::F3),
        TreeStrategy::Kruskal(CostFunction::Random),
        TreeStrategy::Kruskal(CostFunction::Adaptive),
    ];

    pub fn token(self) -> &'static str {
        match self {
            TreeStrategy::Bfs => "bfs",
            TreeStrategy::Dfs => "dfs",
            TreeStrategy::Kruskal(CostFunction::F1) => "f1",
            TreeStrategy::Kruskal(CostFunction::F2) => "f2",
            TreeStrategy::Kruskal(CostFunction::F3) => "f3",
            TreeStrategy::Kruskal(CostFunction::Random) => "random",
            TreeStrategy::Kruskal(CostFunction::Adaptive) => "adaptive",
        }
    }
}

impl fmt::Display for TreeStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for TreeStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TreeStrategy::ALL
            .into_iter()
            .find(|t| t.token() == s)
            .ok_or_else(|| {
                format!(
                    "unknown tree strategy `{s}` (expected bfs, dfs, f1, f2, f3, random, adaptive)"
                )
            })
    }
}

/// Cost of signed edge `e` of `g`. Only `Random` draws from `rng`.
pub fn edge_cost<R: Rng + ?Sized>(
    g: &SignedGraph,
    e: &SignedEdge,
    cost: CostFunction,
    rng: &mut R,
) -> u32 {
    let signs = g.pair(e.u, e.v).unwrap_or_else(|| PairSigns::of(e.sign));
    // (positive-only, negative-only, parallel)
    let table = |costs: [u32; 3]| {
        if signs.is_parallel() {
            costs[2]
        } else if signs.positive_only() {
            costs[0]
        } else {
            costs[1]
        }
    };
    match cost {
        CostFunction::F1 => table([3, 1, 2]),
        CostFunction::F2 => table([1, 2, 3]),
        CostFunction::F3 => table([2, 1, 3]),
        CostFunction::Random => rng.gen_range(0..=1000),
        CostFunction::Adaptive => {
            let resolved = adaptive_choice(g);
            edge_cost(g, e, resolved, rng)
        }
    }
}

fn adaptive_choice(g: &SignedGraph) -> CostFunction {
    // |E-| / |E+| < 1, with an empty E+ counting as an infinite ratio
    if g.num_negative() < g.num_positive() {
        CostFunction::F1
    } else {
        CostFunction::F2
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// True when the edge set of `g` has no cycle (a parallel pair is a 2-cycle).
pub fn is_forest(g: &SignedGraph) -> bool {
    let mut uf = UnionFind::new(g.n());
    g.edges().iter().all(|e| uf.union(e.u, e.v))
}

/// Spanning forest of `g` (one tree per component) built with `strategy`.
pub fn spanning_forest<R: Rng + ?Sized>(
    g: &SignedGraph,
    strategy: TreeStrategy,
    rng: &mut R,
) -> SignedGraph {
    let tree_edges = match strategy {
        TreeStrategy::Bfs => traversal_forest(g, false),
        TreeStrategy::Dfs => traversal_forest(g, true),
        TreeStrategy::Kruskal(cost) => kruskal(g, cost, rng),
    };
    SignedGraph::build(g.n(), tree_edges.into_iter().map(|e| (e.u, e.v, e.sign)))
        .expect("forest edges come from a valid graph")
}

fn kruskal<R: Rng + ?Sized>(g: &SignedGraph, cost: CostFunction, rng: &mut R) -> Vec<SignedEdge> {
    let cost = match cost {
        CostFunction::Adaptive => adaptive_choice(g),
        other => other,
    };
    let mut order: Vec<(u32, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(k, e)| (edge_cost(g, e, cost, rng), k))
        .collect();
    order.sort_unstable();
    let mut uf = UnionFind::new(g.n());
    let mut forest = Vec::with_capacity(g.n().saturating_sub(1));
    for (_, k) in order {
        let e = g.edges()[k];
        if uf.union(e.u, e.v) {
            forest.push(e);
        }
    }
    forest
}

/// BFS or DFS from the lowest unvisited vertex, neighbours in index order.
/// A parallel pair is entered through its positive edge.
fn traversal_forest(g: &SignedGraph, depth_first: bool) -> Vec<SignedEdge> {
    let n = g.n();
    let mut visited = vec![false; n];
    let mut forest = Vec::new();
    let tree_sign = |signs: PairSigns| {
        if signs.has_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    };
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        if depth_first {
            // (vertex, next neighbour slot)
            let mut stack = vec![(root, 0usize)];
            while let Some(top) = stack.last_mut() {
                let (u, slot) = *top;
                let nbrs = g.neighbors(u);
                if slot >= nbrs.len() {
                    stack.pop();
                    continue;
                }
                top.1 += 1;
                let (v, signs) = nbrs[slot];
                if !visited[v] {
                    visited[v] = true;
                    forest.push(SignedEdge::new(u, v, tree_sign(signs)));
                    stack.push((v, 0));
                }
            }
        } else {
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(v, signs) in g.neighbors(u) {
                    if !visited[v] {
                        visited[v] = true;
                        forest.push(SignedEdge::new(u, v, tree_sign(signs)));
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    forest
}
