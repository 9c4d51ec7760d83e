//! Valid inequalities `coeffs · y <= rhs` and the pool that stores them.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::lp::{Relation, Row};

/// Minimum violation for a cut to be reported.
pub const VIOLATION_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CutKind {
    ParallelEdge,
    OddNegCycle,
    Clique,
    NegClique,
    LiftedOddHole,
    LiftedCycle,
}

impl CutKind {
    pub const ALL: [CutKind; 6] = [
        CutKind::ParallelEdge,
        CutKind::OddNegCycle,
        CutKind::Clique,
        CutKind::NegClique,
        CutKind::LiftedOddHole,
        CutKind::LiftedCycle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CutKind::ParallelEdge => "parallel_edge",
            CutKind::OddNegCycle => "odd_neg_cycle",
            CutKind::Clique => "clique",
            CutKind::NegClique => "neg_clique",
            CutKind::LiftedOddHole => "lifted_odd_hole",
            CutKind::LiftedCycle => "lifted_cycle",
        }
    }

    /// Kinds whose support cycle can drive cycle branching.
    pub fn has_cycle(self) -> bool {
        matches!(self, CutKind::OddNegCycle | CutKind::LiftedCycle)
    }
}

impl fmt::Display for CutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    /// Sorted by variable, positive integer coefficients.
    pub coeffs: Vec<(usize, i64)>,
    pub rhs: i64,
    pub kind: CutKind,
    /// The odd negative cycle underlying cycle cuts, in traversal order.
    pub support_cycle: Option<Vec<usize>>,
}

impl Cut {
    /// `y(set) <= rhs`.
    pub fn uniform(set: &[usize], rhs: i64, kind: CutKind) -> Self {
        let mut vars = set.to_vec();
        vars.sort_unstable();
        vars.dedup();
        Cut {
            coeffs: vars.into_iter().map(|v| (v, 1)).collect(),
            rhs,
            kind,
            support_cycle: None,
        }
    }

    /// The odd negative cycle inequality `y(C) <= |C| - 1`.
    pub fn cycle(cycle: Vec<usize>) -> Self {
        let mut cut = Cut::uniform(&cycle, cycle.len() as i64 - 1, CutKind::OddNegCycle);
        cut.support_cycle = Some(cycle);
        cut
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().map(|&(v, _)| v)
    }

    pub fn lhs(&self, y: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, a)| a as f64 * y[v]).sum()
    }

    pub fn violation(&self, y: &[f64]) -> f64 {
        self.lhs(y) - self.rhs as f64
    }

    /// Whether the incidence vector of `selected` satisfies the cut.
    pub fn holds_for(&self, selected: &[bool]) -> bool {
        let lhs: i64 = self
            .coeffs
            .iter()
            .filter(|&&(v, _)| selected[v])
            .map(|&(_, a)| a)
            .sum();
        lhs <= self.rhs
    }

    pub fn key(&self) -> (Vec<(usize, i64)>, i64) {
        (self.coeffs.clone(), self.rhs)
    }

    pub fn to_row(&self) -> Row<f64> {
        Row::new(
            self.coeffs.iter().map(|&(v, a)| (v, a as f64)).collect(),
            Relation::Le,
            self.rhs as f64,
        )
    }
}

/// Deduplicated store of cuts, evicting the oldest once full.
#[derive(Debug, Clone)]
pub struct CutPool {
    cuts: VecDeque<Cut>,
    keys: HashSet<(Vec<(usize, i64)>, i64)>,
    capacity: usize,
}

impl Default for CutPool {
    fn default() -> Self {
        CutPool::with_capacity(50_000)
    }
}

impl CutPool {
    pub fn with_capacity(capacity: usize) -> Self {
        CutPool {
            cuts: VecDeque::new(),
            keys: HashSet::new(),
            capacity,
        }
    }

    /// Inserts `cut` unless an equal one is stored. Returns whether it was new.
    pub fn insert(&mut self, cut: Cut) -> bool {
        if self.capacity == 0 || !self.keys.insert(cut.key()) {
            return false;
        }
        if self.cuts.len() == self.capacity {
            if let Some(old) = self.cuts.pop_front() {
                self.keys.remove(&old.key());
            }
        }
        self.cuts.push_back(cut);
        true
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cut> {
        self.cuts.iter()
    }
}

/// Keeps at most `limit` cuts, most violated first; ties keep input order.
pub(crate) fn most_violated(mut cuts: Vec<(f64, Cut)>, limit: usize) -> Vec<Cut> {
    cuts.sort_by(|a, b| b.0.total_cmp(&a.0));
    cuts.into_iter().take(limit).map(|(_, c)| c).collect()
}

/// Up to 100 pool cuts violated by `y`, most violated first.
pub fn scan_pool(pool: &CutPool, y: &[f64]) -> Vec<Cut> {
    scan_pool_limited(pool, y, 100)
}

pub fn scan_pool_limited(pool: &CutPool, y: &[f64], limit: usize) -> Vec<Cut> {
    let violated = pool
        .iter()
        .filter_map(|c| {
            let v = c.violation(y);
            (v >= VIOLATION_TOL).then(|| (v, c.clone()))
        })
        .collect();
    most_violated(violated, limit)
}
