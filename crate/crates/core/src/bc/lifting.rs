//! Sequential lifting of odd hole and odd negative cycle inequalities. Each
//! lifting coefficient comes from a small enumeration over the current support.

use crate::graph::{PairSigns, SignedGraph};

use super::cut::{Cut, CutKind};

/// Enumeration nodes allowed per lifting coefficient.
pub const LIFT_BUDGET: usize = 1 << 18;

/// Longest cycle whose inequality is lifted.
pub const MAX_LIFT_CYCLE: usize = 20;

/// Maximum of `sum w_i` over stable sets of the conflict graph restricted to
/// `verts`, or `None` when the budget runs out.
fn max_weight_stable(
    adj: &[Vec<usize>],
    verts: &[(usize, i64)],
    budget: &mut usize,
) -> Option<i64> {
    fn go(
        adj: &[Vec<usize>],
        verts: &[(usize, i64)],
        k: usize,
        chosen: &mut Vec<usize>,
        value: i64,
        best: &mut i64,
        budget: &mut usize,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let rest: i64 = verts[k..].iter().map(|&(_, w)| w).sum();
        if value + rest <= *best {
            return true;
        }
        if k == verts.len() {
            *best = value;
            return true;
        }
        let (v, w) = verts[k];
        if chosen.iter().all(|&c| adj[v].binary_search(&c).is_err()) {
            chosen.push(v);
            let ok = go(adj, verts, k + 1, chosen, value + w, best, budget);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        go(adj, verts, k + 1, chosen, value, best, budget)
    }
    let mut best = 0;
    go(adj, verts, 0, &mut Vec::new(), 0, &mut best, budget).then_some(best)
}

/// Lifts `y(hole) <= (|hole| - 1) / 2` on the conflict graph `adj`, taking
/// neighbours of the hole in decreasing `y` order.
pub fn lift_odd_hole(adj: &[Vec<usize>], hole: &[usize], y: &[f64]) -> Cut {
    let rhs = (hole.len() as i64 - 1) / 2;
    let mut terms: Vec<(usize, i64)> = hole.iter().map(|&v| (v, 1)).collect();
    let mut in_support = vec![false; adj.len()];
    for &v in hole {
        in_support[v] = true;
    }
    let mut cands: Vec<usize> = (0..adj.len())
        .filter(|&u| !in_support[u] && adj[u].iter().any(|&w| in_support[w]))
        .collect();
    cands.sort_by(|&a, &b| y[b].total_cmp(&y[a]).then(a.cmp(&b)));
    for u in cands {
        let rest: Vec<(usize, i64)> = terms
            .iter()
            .copied()
            .filter(|&(v, _)| adj[u].binary_search(&v).is_err())
            .collect();
        let mut budget = LIFT_BUDGET;
        let Some(z) = max_weight_stable(adj, &rest, &mut budget) else {
            continue;
        };
        if rhs - z > 0 {
            terms.push((u, rhs - z));
        }
    }
    terms.sort_unstable();
    Cut {
        coeffs: terms,
        rhs,
        kind: CutKind::LiftedOddHole,
        support_cycle: None,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Out,
    One,
    Two,
}

/// Largest current-cut LHS over balanced vertex sets that contain `terms[0]`
/// and lie within the support, or `None` on budget exhaustion.
fn max_balanced_lhs(g: &SignedGraph, terms: &[(usize, i64)], budget: &mut usize) -> Option<i64> {
    let k = terms.len();
    // pair relations inside the support, by position
    let rel: Vec<Vec<Option<PairSigns>>> = (0..k)
        .map(|a| (0..k).map(|b| g.pair(terms[a].0, terms[b].0)).collect())
        .collect();
    let suffix: Vec<i64> = {
        let mut s = vec![0; k + 1];
        for i in (0..k).rev() {
            s[i] = s[i + 1] + terms[i].1;
        }
        s
    };
    struct Search<'a> {
        rel: &'a [Vec<Option<PairSigns>>],
        terms: &'a [(usize, i64)],
        suffix: &'a [i64],
        slots: Vec<Slot>,
        best: i64,
    }
    impl Search<'_> {
        fn fits(&self, i: usize, s: Slot) -> bool {
            (0..i).all(|j| match (self.slots[j], self.rel[i][j]) {
                (Slot::Out, _) | (_, None) => true,
                (_, Some(p)) if p.is_parallel() => false,
                (t, Some(p)) if t == s => p.positive_only(),
                (_, Some(p)) => p.negative_only(),
            })
        }

        fn go(&mut self, i: usize, value: i64, budget: &mut usize) -> bool {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            if value + self.suffix[i] <= self.best {
                return true;
            }
            if i == self.terms.len() {
                self.best = value;
                return true;
            }
            for s in [Slot::One, Slot::Two] {
                if self.fits(i, s) {
                    self.slots[i] = s;
                    if !self.go(i + 1, value + self.terms[i].1, budget) {
                        return false;
                    }
                }
            }
            self.slots[i] = Slot::Out;
            self.go(i + 1, value, budget)
        }
    }
    let mut search = Search {
        rel: &rel,
        terms,
        suffix: &suffix,
        slots: vec![Slot::Out; k],
        best: -1,
    };
    // the new vertex sits in side one without loss of generality
    search.slots[0] = Slot::One;
    *budget = budget.checked_sub(1)?;
    search.go(1, 0, budget).then_some(search.best)
}

/// Lifts an odd negative cycle inequality with vertices adjacent to at least
/// two cycle vertices. Cycles longer than [`MAX_LIFT_CYCLE`] and cycles
/// without such neighbours come back unchanged.
pub fn lift_odd_negative_cycle(g: &SignedGraph, cut: &Cut) -> Cut {
    let Some(cycle) = cut.support_cycle.as_ref() else {
        return cut.clone();
    };
    if cycle.len() > MAX_LIFT_CYCLE {
        return cut.clone();
    }
    let mut on_cycle = vec![false; g.n()];
    for &v in cycle {
        on_cycle[v] = true;
    }
    let mut cands: Vec<(usize, usize)> = (0..g.n())
        .filter(|&u| !on_cycle[u])
        .map(|u| {
            (
                u,
                g.neighbors(u).iter().filter(|&&(w, _)| on_cycle[w]).count(),
            )
        })
        .filter(|&(_, c)| c >= 2)
        .collect();
    cands.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    // the lifted vertex goes first, followed by the support in cycle order
    let mut order: Vec<(usize, i64)> = cycle.iter().map(|&v| (v, 1)).collect();
    let mut lifted = false;
    for (u, _) in cands {
        let mut terms = Vec::with_capacity(order.len() + 1);
        terms.push((u, 0));
        terms.extend_from_slice(&order);
        let mut budget = LIFT_BUDGET;
        let Some(z) = max_balanced_lhs(g, &terms, &mut budget) else {
            continue;
        };
        let alpha = cut.rhs - z;
        if alpha > 0 {
            order.push((u, alpha));
            lifted = true;
        }
    }
    if !lifted {
        return cut.clone();
    }
    let mut coeffs = order;
    coeffs.sort_unstable();
    Cut {
        coeffs,
        rhs: cut.rhs,
        kind: CutKind::LiftedCycle,
        support_cycle: Some(cycle.clone()),
    }
}
