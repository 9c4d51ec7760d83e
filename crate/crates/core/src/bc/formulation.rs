//! Initial LP relaxation: clique rows over parallel pairs, a few short odd
//! negative cycles, and negative clique rows.

use std::collections::HashSet;

use crate::graph::SignedGraph;
use crate::lp::LinearProgram;

use super::cut::{Cut, CutKind};
use super::separation::{canonical_cycle, conflict_adjacency, reduce_to_odd_cycle, ParityGraph};

#[derive(Debug, Clone, Default)]
pub struct InitialFormulation {
    /// `y(K) <= 1` over a clique cover of the conflict graph; two-vertex
    /// cliques are plain parallel-pair rows.
    pub cliques: Vec<Cut>,
    /// Short odd negative cycles, at most `2n`.
    pub cycles: Vec<Cut>,
    /// `y(K) <= 2` over cliques of at least three vertices in the negative graph.
    pub neg_cliques: Vec<Cut>,
}

impl InitialFormulation {
    /// All rows, without duplicates, in the order cliques, cycles, negative cliques.
    pub fn cuts(&self) -> Vec<Cut> {
        let mut seen = HashSet::new();
        self.cliques
            .iter()
            .chain(&self.cycles)
            .chain(&self.neg_cliques)
            .filter(|c| seen.insert(c.key()))
            .cloned()
            .collect()
    }

    /// `max y(V)` over `[0,1]^n` with the formulation rows.
    pub fn linear_program(&self, n: usize) -> LinearProgram<f64> {
        let mut lp = LinearProgram::unit_box(vec![1.0; n]);
        for cut in self.cuts() {
            lp.add_row(cut.to_row());
        }
        lp
    }
}

/// Covers every edge of `adj` by maximal cliques, growing each uncovered
/// edge `(u, v)` with common neighbours in index order.
fn greedy_clique_cover(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut covered: HashSet<(usize, usize)> = HashSet::new();
    let mut cliques = Vec::new();
    for u in 0..adj.len() {
        for &v in adj[u].iter().filter(|&&v| v > u) {
            if covered.contains(&(u, v)) {
                continue;
            }
            let mut clique = vec![u, v];
            let mut cands: Vec<usize> = adj[u]
                .iter()
                .copied()
                .filter(|w| adj[v].binary_search(w).is_ok())
                .collect();
            while let Some(&w) = cands.first() {
                clique.push(w);
                cands.retain(|&x| x != w && adj[w].binary_search(&x).is_ok());
            }
            clique.sort_unstable();
            for (i, &a) in clique.iter().enumerate() {
                for &b in &clique[i + 1..] {
                    covered.insert((a, b));
                }
            }
            cliques.push(clique);
        }
    }
    cliques
}

pub fn initial_formulation(g: &SignedGraph) -> InitialFormulation {
    let n = g.n();
    let conflict = conflict_adjacency(g);
    let cliques = greedy_clique_cover(&conflict)
        .into_iter()
        .map(|k| {
            let kind = if k.len() == 2 {
                CutKind::ParallelEdge
            } else {
                CutKind::Clique
            };
            Cut::uniform(&k, 1, kind)
        })
        .collect();

    let pg = ParityGraph::signed(g, |_, _| 1.0);
    let negative = |u: usize, v: usize| g.pair(u, v).is_some_and(|s| s.has_negative());
    let mut seen = HashSet::new();
    let mut cycles = Vec::new();
    for v in 0..n {
        if cycles.len() >= 2 * n {
            break;
        }
        let Some((_, walk)) = pg.shortest_odd_walk(v, f64::INFINITY) else {
            continue;
        };
        let cut = Cut::cycle(canonical_cycle(reduce_to_odd_cycle(walk, negative)));
        if seen.insert(cut.key()) {
            cycles.push(cut);
        }
    }

    let neg_adj: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            g.neighbors(u)
                .iter()
                .filter(|(_, s)| s.has_negative())
                .map(|&(v, _)| v)
                .collect()
        })
        .collect();
    let mut seen = HashSet::new();
    let neg_cliques = greedy_clique_cover(&neg_adj)
        .into_iter()
        .filter(|k| k.len() >= 3 && seen.insert(k.clone()))
        .map(|k| Cut::uniform(&k, 2, CutKind::NegClique))
        .collect();

    InitialFormulation {
        cliques,
        cycles,
        neg_cliques,
    }
}
