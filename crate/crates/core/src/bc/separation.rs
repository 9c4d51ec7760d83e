//! Separation routines for odd negative cycle, clique and lifted odd hole
//! inequalities.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use crate::graph::{Sign, SignedGraph};

use super::cut::{most_violated, Cut, CutKind, VIOLATION_TOL};
use super::lifting::lift_odd_hole;

/// Cap on the cuts returned by one separation call.
pub const MAX_CUTS: usize = 100;

/// Undirected arcs `(u, v, odd, weight)` where `odd` flips the layer.
pub(crate) struct ParityGraph {
    adj: Vec<Vec<(usize, bool, f64)>>,
}

impl ParityGraph {
    pub(crate) fn new(n: usize) -> Self {
        ParityGraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub(crate) fn add(&mut self, u: usize, v: usize, odd: bool, w: f64) {
        self.adj[u].push((v, odd, w));
        self.adj[v].push((u, odd, w));
    }

    /// Signed edges outside parallel pairs, negative ones flipping parity.
    pub(crate) fn signed(g: &SignedGraph, weight: impl Fn(usize, usize) -> f64) -> Self {
        let mut pg = ParityGraph::new(g.n());
        for u in 0..g.n() {
            for &(v, signs) in g.neighbors(u) {
                if u < v {
                    if let Some(s) = signs.single() {
                        pg.add(u, v, s == Sign::Negative, weight(u, v));
                    }
                }
            }
        }
        pg
    }

    /// Shortest closed walk through `source` with an odd number of odd arcs,
    /// if one weighs at most `limit`. Returns `(weight, walk)` where the walk
    /// starts and ends at `source`.
    pub(crate) fn shortest_odd_walk(&self, source: usize, limit: f64) -> Option<(f64, Vec<usize>)> {
        let n = self.adj.len();
        let node = |v: usize, layer: usize| 2 * v + layer;
        let mut dist = vec![f64::INFINITY; 2 * n];
        let mut pred = vec![usize::MAX; 2 * n];
        let mut heap = BinaryHeap::new();
        dist[node(source, 0)] = 0.0;
        heap.push((Reverse(OrdF64(0.0)), node(source, 0)));
        let target = node(source, 1);
        while let Some((Reverse(OrdF64(d)), x)) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            if d > limit {
                return None;
            }
            if x == target {
                break;
            }
            let (u, layer) = (x / 2, x % 2);
            for &(v, odd, w) in &self.adj[u] {
                let y = node(v, layer ^ odd as usize);
                let nd = d + w;
                if nd < dist[y] {
                    dist[y] = nd;
                    pred[y] = x;
                    heap.push((Reverse(OrdF64(nd)), y));
                }
            }
        }
        if !dist[target].is_finite() || dist[target] > limit {
            return None;
        }
        let mut walk = vec![source];
        let mut x = target;
        while x != node(source, 0) {
            x = pred[x];
            walk.push(x / 2);
        }
        walk.reverse();
        Some((dist[target], walk))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Cuts a closed walk `w[0] .. w[k] = w[0]` with odd parity down to a simple
/// cycle with odd parity. `odd(u, v)` gives the parity of the step `u -> v`.
/// The cycle is returned without repeating its first vertex.
pub(crate) fn reduce_to_odd_cycle(
    mut walk: Vec<usize>,
    odd: impl Fn(usize, usize) -> bool,
) -> Vec<usize> {
    loop {
        let k = walk.len() - 1;
        let mut seen: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut repeat = None;
        for (j, &v) in walk.iter().enumerate().take(k) {
            if let Some(&i) = seen.get(&v) {
                repeat = Some((i, j));
                break;
            }
            seen.insert(v, j);
        }
        let Some((i, j)) = repeat else {
            walk.pop();
            return walk;
        };
        let parity = walk[i..=j].windows(2).filter(|s| odd(s[0], s[1])).count() % 2 == 1;
        walk = if parity {
            walk[i..=j].to_vec()
        } else {
            let mut rest = walk[..=i].to_vec();
            rest.extend_from_slice(&walk[j + 1..]);
            rest
        };
    }
}

/// Exact separation of `y(C) <= |C| - 1` over odd negative cycles.
pub fn separate_odd_negative_cycle(g: &SignedGraph, y: &[f64]) -> Vec<Cut> {
    let pg = ParityGraph::signed(g, |u, v| ((2.0 - y[u] - y[v]) / 2.0).max(0.0));
    let limit = 1.0 - VIOLATION_TOL;
    let negative = |u: usize, v: usize| g.pair(u, v).is_some_and(|s| s.has_negative());
    let mut seen = HashSet::new();
    let mut found = Vec::new();
    for v in 0..g.n() {
        let Some((_, walk)) = pg.shortest_odd_walk(v, limit) else {
            continue;
        };
        let cycle = canonical_cycle(reduce_to_odd_cycle(walk, negative));
        let cut = Cut::cycle(cycle);
        let viol = cut.violation(y);
        if viol >= VIOLATION_TOL && seen.insert(cut.key()) {
            found.push((viol, cut));
        }
    }
    most_violated(found, MAX_CUTS)
}

/// Rotates a cycle to start at its smallest vertex, heading to the smaller
/// of the two neighbours.
pub(crate) fn canonical_cycle(mut c: Vec<usize>) -> Vec<usize> {
    let k = c.len();
    let pos = (0..k).min_by_key(|&i| c[i]).unwrap_or(0);
    c.rotate_left(pos);
    if k > 2 && c[k - 1] < c[1] {
        c[1..].reverse();
    }
    c
}

/// Adjacency lists of the conflict graph, whose edges are the parallel pairs.
pub(crate) fn conflict_adjacency(g: &SignedGraph) -> Vec<Vec<usize>> {
    (0..g.n())
        .map(|u| {
            g.neighbors(u)
                .iter()
                .filter(|(_, s)| s.is_parallel())
                .map(|&(v, _)| v)
                .collect()
        })
        .collect()
}

fn adjacent(adj: &[Vec<usize>], u: usize, v: usize) -> bool {
    adj[u].binary_search(&v).is_ok()
}

/// Greedy clique growth in the conflict graph from every vertex with
/// positive value; reports `y(K) <= 1` when violated.
pub fn separate_clique(g: &SignedGraph, y: &[f64]) -> Vec<Cut> {
    let adj = conflict_adjacency(g);
    let mut order: Vec<usize> = (0..g.n()).filter(|&v| y[v] > VIOLATION_TOL).collect();
    order.sort_by(|&a, &b| y[b].total_cmp(&y[a]).then(a.cmp(&b)));
    let mut seen = HashSet::new();
    let mut found = Vec::new();
    for &seed in &order {
        let mut clique = vec![seed];
        let mut cands: Vec<usize> = adj[seed].clone();
        while !cands.is_empty() {
            let &best = cands
                .iter()
                .min_by(|&&a, &&b| y[b].total_cmp(&y[a]).then(a.cmp(&b)))
                .expect("non-empty");
            clique.push(best);
            cands.retain(|&c| c != best && adjacent(&adj, best, c));
        }
        let sum: f64 = clique.iter().map(|&v| y[v]).sum();
        if sum - 1.0 < VIOLATION_TOL {
            continue;
        }
        let kind = if clique.len() == 2 {
            CutKind::ParallelEdge
        } else {
            CutKind::Clique
        };
        let cut = Cut::uniform(&clique, 1, kind);
        if seen.insert(cut.key()) {
            found.push((sum - 1.0, cut));
        }
    }
    most_violated(found, MAX_CUTS)
}

/// Splits an odd cycle of the conflict graph along chords until it is an
/// odd hole (chordless).
fn shortcut_chords(adj: &[Vec<usize>], mut c: Vec<usize>) -> Vec<usize> {
    'outer: loop {
        let k = c.len();
        for a in 0..k {
            for b in a + 2..k {
                if a == 0 && b == k - 1 {
                    continue;
                }
                if adjacent(adj, c[a], c[b]) {
                    let inner = c[a..=b].to_vec();
                    c = if inner.len() % 2 == 1 {
                        inner
                    } else {
                        let mut outer = c[b..].to_vec();
                        outer.extend_from_slice(&c[..=a]);
                        outer
                    };
                    continue 'outer;
                }
            }
        }
        return c;
    }
}

/// Odd holes of length at least 5 in the conflict graph, lifted and reported
/// when violated.
pub fn separate_lifted_odd_hole(g: &SignedGraph, y: &[f64]) -> Vec<Cut> {
    let adj = conflict_adjacency(g);
    let mut pg = ParityGraph::new(g.n());
    for u in 0..g.n() {
        for &v in &adj[u] {
            if u < v {
                pg.add(u, v, true, (1.0 - y[u] - y[v]).max(0.0));
            }
        }
    }
    let limit = 1.0 - VIOLATION_TOL;
    let mut seen_holes = HashSet::new();
    let mut seen = HashSet::new();
    let mut found = Vec::new();
    for v in 0..g.n() {
        if adj[v].is_empty() {
            continue;
        }
        let Some((_, walk)) = pg.shortest_odd_walk(v, limit) else {
            continue;
        };
        let cycle = reduce_to_odd_cycle(walk, |_, _| true);
        let hole = canonical_cycle(shortcut_chords(&adj, cycle));
        if hole.len() < 5 || !seen_holes.insert(hole.clone()) {
            continue;
        }
        let cut = lift_odd_hole(&adj, &hole, y);
        let viol = cut.violation(y);
        if viol >= VIOLATION_TOL && seen.insert(cut.key()) {
            found.push((viol, cut));
        }
    }
    most_violated(found, MAX_CUTS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign::{Negative as N, Positive as P};

    fn tri() -> SignedGraph {
        SignedGraph::build(3, [(0, 1, N), (1, 2, P), (0, 2, P)]).unwrap()
    }

    #[test]
    fn odd_cycle_examples() {
        let cuts = separate_odd_negative_cycle(&tri(), &[0.9, 0.9, 0.9]);
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].coeffs, vec![(0, 1), (1, 1), (2, 1)]);
        assert_eq!(cuts[0].rhs, 2);
        assert!((cuts[0].violation(&[0.9; 3]) - 0.7).abs() < 1e-12);
        assert!(separate_odd_negative_cycle(&tri(), &[0.5; 3]).is_empty());
        assert!(separate_odd_negative_cycle(&tri(), &[1.0, 0.0, 1.0]).is_empty());
    }

    #[test]
    fn odd_cycle_ignores_parallel_pairs() {
        let g = SignedGraph::build(3, [(0, 1, N), (0, 1, P), (1, 2, P), (0, 2, P)]).unwrap();
        assert!(separate_odd_negative_cycle(&g, &[1.0; 3]).is_empty());
    }

    #[test]
    fn walk_reduction_keeps_odd_part() {
        // figure eight through 0: even loop 0-1-2-0 (all positive), odd loop 0-3-4-0
        let neg = |u: usize, v: usize| (u, v) == (3, 4) || (u, v) == (4, 3);
        let c = reduce_to_odd_cycle(vec![0, 1, 2, 0, 3, 4, 0], neg);
        assert_eq!(canonical_cycle(c), vec![0, 3, 4]);
    }

    #[test]
    fn clique_examples() {
        assert!(separate_clique(&tri(), &[0.9; 3]).is_empty());
        let par = SignedGraph::build(
            3,
            [
                (0, 1, P),
                (0, 1, N),
                (1, 2, P),
                (1, 2, N),
                (0, 2, P),
                (0, 2, N),
            ],
        )
        .unwrap();
        let cuts = separate_clique(&par, &[0.5; 3]);
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].kind, CutKind::Clique);
        assert!((cuts[0].violation(&[0.5; 3]) - 0.5).abs() < 1e-12);
        assert!(separate_clique(&par, &[0.0; 3]).is_empty());
    }

    fn parallel_cycle(k: usize) -> SignedGraph {
        SignedGraph::build(
            k,
            (0..k).flat_map(|i| [(i, (i + 1) % k, P), (i, (i + 1) % k, N)]),
        )
        .unwrap()
    }

    #[test]
    fn odd_hole_examples() {
        let hole = parallel_cycle(5);
        let cuts = separate_lifted_odd_hole(&hole, &[0.45; 5]);
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].rhs, 2);
        assert!((cuts[0].violation(&[0.45; 5]) - 0.25).abs() < 1e-9);
        assert!(separate_lifted_odd_hole(&parallel_cycle(6), &[0.5; 6]).is_empty());
        assert!(separate_lifted_odd_hole(&hole, &[1.0, 0.0, 1.0, 0.0, 0.0]).is_empty());
    }

    #[test]
    fn chords_shortcut_to_hole() {
        // 7-cycle in the conflict graph with chord 0-4 leaves the 5-hole 0,1,2,3,4
        let mut edges: Vec<(usize, usize, Sign)> = (0..7)
            .flat_map(|i| [(i, (i + 1) % 7, P), (i, (i + 1) % 7, N)])
            .collect();
        edges.extend([(0, 4, P), (0, 4, N)]);
        let g = SignedGraph::build(7, edges).unwrap();
        let adj = conflict_adjacency(&g);
        let hole = canonical_cycle(shortcut_chords(&adj, (0..7).collect()));
        assert_eq!(hole, vec![0, 1, 2, 3, 4]);
    }
}
