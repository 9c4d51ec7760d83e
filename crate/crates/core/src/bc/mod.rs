//! Branch-and-cut for the maximum balanced subgraph problem.
//!
//! The relaxation maximizes `y(V)` over `[0,1]^n` subject to parallel-pair,
//! odd negative cycle, clique and negative clique rows. Nodes are explored
//! best bound first; each node runs a bounded number of separation rounds
//! before branching on a binding cycle inequality or on a single variable.

pub mod cut;
pub mod formulation;
pub mod lifting;
pub mod separation;

use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Bipartition, Side, SignedGraph};
use crate::grasp::fits;
use crate::lp::{LinearProgram, LpError, LpStatus, Relation, Row, Simplex};

pub use cut::{scan_pool, Cut, CutKind, CutPool, VIOLATION_TOL};
pub use formulation::{initial_formulation, InitialFormulation};
pub use lifting::{lift_odd_hole, lift_odd_negative_cycle, MAX_LIFT_CYCLE};
pub use separation::{separate_clique, separate_lifted_odd_hole, separate_odd_negative_cycle};

/// Distance from 0 or 1 under which an LP value counts as integral.
pub const INTEGRALITY_TOL: f64 = 1e-6;
/// Slack under which a row counts as binding.
pub const BINDING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branching {
    /// Three-way branching on a binding odd negative cycle inequality,
    /// falling back to 0-1 branching.
    Cycle,
    /// 0-1 branching on the most fractional variable.
    Standard,
}

impl Branching {
    pub fn token(self) -> &'static str {
        match self {
            Branching::Cycle => "cycle",
            Branching::Standard => "standard",
        }
    }
}

impl fmt::Display for Branching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Branching {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cycle" => Ok(Branching::Cycle),
            "standard" => Ok(Branching::Standard),
            _ => Err(format!(
                "unknown branching rule `{s}` (expected cycle or standard)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchRule {
    pub mode: Branching,
    /// Let lifted cycle cuts supply branching cycles too.
    pub lifted_cycles: bool,
}

impl Default for BranchRule {
    fn default() -> Self {
        BranchRule {
            mode: Branching::Cycle,
            lifted_cycles: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixing {
    Free,
    Zero,
    One,
}

/// Local row `y(vars) <= rhs`, valid only inside a subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchRow {
    pub vars: Vec<usize>,
    pub rhs: i64,
}

impl BranchRow {
    pub fn holds_for(&self, selected: &[bool]) -> bool {
        (self.vars.iter().filter(|&&v| selected[v]).count() as i64) <= self.rhs
    }

    fn to_row(&self) -> Row<f64> {
        Row::new(
            self.vars.iter().map(|&v| (v, 1.0)).collect(),
            Relation::Le,
            self.rhs as f64,
        )
    }
}

#[derive(Debug, Clone)]
pub struct SearchNode {
    pub fixings: Vec<Fixing>,
    pub extra_rows: Vec<BranchRow>,
    /// Cuts inherited from the parent on top of the initial formulation.
    pub cuts: Vec<Cut>,
    /// Upper bound on every integral completion of the node.
    pub bound: f64,
    pub depth: usize,
}

impl SearchNode {
    pub fn root(n: usize) -> Self {
        SearchNode {
            fixings: vec![Fixing::Free; n],
            extra_rows: Vec::new(),
            cuts: Vec::new(),
            bound: n as f64,
            depth: 0,
        }
    }

    /// Whether the 0-1 vector `selected` respects the fixings and branch rows.
    pub fn admits(&self, selected: &[bool]) -> bool {
        let fixed_ok = self.fixings.iter().zip(selected).all(|(f, &s)| match f {
            Fixing::Free => true,
            Fixing::Zero => !s,
            Fixing::One => s,
        });
        fixed_ok && self.extra_rows.iter().all(|r| r.holds_for(selected))
    }

    fn child(&self, bound: f64) -> SearchNode {
        SearchNode {
            fixings: self.fixings.clone(),
            extra_rows: self.extra_rows.clone(),
            cuts: self.cuts.clone(),
            bound,
            depth: self.depth + 1,
        }
    }

    fn linear_program(&self) -> LinearProgram<f64> {
        let n = self.fixings.len();
        let mut lo = vec![0.0; n];
        let mut hi = vec![1.0; n];
        for (j, f) in self.fixings.iter().enumerate() {
            match f {
                Fixing::Free => {}
                Fixing::Zero => hi[j] = 0.0,
                Fixing::One => lo[j] = 1.0,
            }
        }
        LinearProgram::new(vec![1.0; n], lo, hi)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BranchError {
    #[error("cannot branch on an integral solution")]
    Integral,
}

fn is_fractional(v: f64) -> bool {
    v > INTEGRALITY_TOL && v < 1.0 - INTEGRALITY_TOL
}

pub fn is_integral(y: &[f64]) -> bool {
    !y.iter().any(|&v| is_fractional(v))
}

/// Most fractional vertex among `verts`, ties by position.
fn most_fractional(y: &[f64], verts: impl Iterator<Item = usize>) -> Option<usize> {
    verts.filter(|&v| is_fractional(y[v])).min_by(|&a, &b| {
        (y[a] - 0.5)
            .abs()
            .total_cmp(&(y[b] - 0.5).abs())
            .then(a.cmp(&b))
    })
}

/// Children of `node` whose integral points cover the node's, given the
/// node's LP solution `y` with objective `bound` and the active cuts.
/// Children with contradictory fixings are left out.
pub fn branch(
    node: &SearchNode,
    active: &[Cut],
    y: &[f64],
    bound: f64,
    rule: BranchRule,
) -> Result<Vec<SearchNode>, BranchError> {
    let Some(fallback) = most_fractional(y, 0..y.len()) else {
        return Err(BranchError::Integral);
    };
    let chosen = match rule.mode {
        Branching::Standard => None,
        Branching::Cycle => active
            .iter()
            .filter(|c| {
                c.kind == CutKind::OddNegCycle
                    || (rule.lifted_cycles && c.kind == CutKind::LiftedCycle)
            })
            .filter(|c| (c.rhs as f64 - c.lhs(y)).abs() <= BINDING_TOL)
            .filter_map(|c| c.support_cycle.as_ref())
            .filter(|cyc| cyc.iter().any(|&v| is_fractional(y[v])))
            .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b))),
    };
    let Some(cycle) = chosen else {
        let mut zero = node.child(bound);
        zero.fixings[fallback] = Fixing::Zero;
        let mut one = node.child(bound);
        one.fixings[fallback] = Fixing::One;
        return Ok(vec![zero, one]);
    };
    let pivot = most_fractional(y, cycle.iter().copied()).expect("cycle has a fractional vertex");
    let rest: Vec<usize> = cycle.iter().copied().filter(|&v| v != pivot).collect();
    let mut rest_sorted = rest.clone();
    rest_sorted.sort_unstable();
    let rest_row = BranchRow {
        vars: rest_sorted,
        rhs: rest.len() as i64 - 1,
    };
    let rest_all_one = rest.iter().all(|&v| node.fixings[v] == Fixing::One);
    let rest_any_zero = rest.iter().any(|&v| node.fixings[v] == Fixing::Zero);

    let mut children = Vec::with_capacity(3);
    if !rest_any_zero {
        let mut c = node.child(bound);
        c.fixings[pivot] = Fixing::Zero;
        for &v in &rest {
            c.fixings[v] = Fixing::One;
        }
        children.push(c);
    }
    if !rest_all_one {
        for fix in [Fixing::One, Fixing::Zero] {
            let mut c = node.child(bound);
            c.fixings[pivot] = fix;
            c.extra_rows.push(rest_row.clone());
            children.push(c);
        }
    }
    Ok(children)
}

/// Greedy rounding: vertices by decreasing `y`, each joining side one if it
/// fits there, else side two if it fits there.
pub fn rounding_heuristic(g: &SignedGraph, y: &[f64]) -> Bipartition {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| y[b].total_cmp(&y[a]).then(a.cmp(&b)));
    let mut labels = vec![None; g.n()];
    for v in order {
        if fits(g, &labels, v, Side::One) {
            labels[v] = Some(Side::One);
        } else if fits(g, &labels, v, Side::Two) {
            labels[v] = Some(Side::Two);
        }
    }
    Bipartition::from_labels(&labels)
}

/// Balanced bipartition of the support of an integral `y`, if it is one.
fn decode(g: &SignedGraph, y: &[f64]) -> Option<Bipartition> {
    let verts: Vec<usize> = (0..g.n()).filter(|&v| y[v] > 0.5).collect();
    let sub = g.induced(&verts);
    let w = sub.graph.is_balanced()?;
    let (mut v1, mut v2) = (Vec::new(), Vec::new());
    for (k, &v) in sub.original.iter().enumerate() {
        if w.contains(k) {
            v2.push(v);
        } else {
            v1.push(v);
        }
    }
    Bipartition::new(v1, v2).ok()
}

#[derive(Debug, Clone)]
pub struct SolveParams {
    pub time_limit: Duration,
    pub max_cut_rounds: usize,
    pub max_cuts_per_round: usize,
    pub branching: BranchRule,
    /// Accepted for interface uniformity; the solver itself is deterministic.
    pub seed: u64,
    /// Record every row added to any LP in [`SolveResult::emitted_cuts`].
    pub collect_cuts: bool,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            time_limit: Duration::from_secs(3600),
            max_cut_rounds: 10,
            max_cuts_per_round: 100,
            branching: BranchRule::default(),
            seed: 0,
            collect_cuts: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    TimeLimit,
}

impl SolveStatus {
    pub fn token(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::TimeLimit => "time_limit",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    pub nodes: usize,
    /// Separated cuts by kind; initial formulation rows are not counted.
    pub cuts_by_kind: BTreeMap<CutKind, usize>,
    pub lp_solves: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub best: Bipartition,
    pub lower_bound: usize,
    pub upper_bound: f64,
    pub status: SolveStatus,
    pub stats: SolveStats,
    pub emitted_cuts: Vec<Cut>,
}

impl SolveResult {
    /// `100 (UB - LB) / LB`, or `None` when solved or when LB is zero.
    pub fn gap_pct(&self) -> Option<f64> {
        match self.status {
            SolveStatus::Optimal => None,
            SolveStatus::TimeLimit if self.lower_bound == 0 => None,
            SolveStatus::TimeLimit => {
                Some(100.0 * (self.upper_bound - self.lower_bound as f64) / self.lower_bound as f64)
            }
        }
    }
}

struct Open {
    bound: f64,
    id: usize,
    node: SearchNode,
}

impl PartialEq for Open {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for Open {}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Open {
    // largest bound first, then oldest
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then(other.id.cmp(&self.id))
    }
}

fn can_prune(bound: f64, best: usize) -> bool {
    (bound + INTEGRALITY_TOL).floor() <= best as f64
}

struct Solver<'a> {
    g: &'a SignedGraph,
    params: &'a SolveParams,
    base: Vec<Cut>,
    pool: CutPool,
    best: Bipartition,
    stats: SolveStats,
    emitted: Vec<Cut>,
    start: Instant,
}

enum NodeOutcome {
    Closed,
    Branched(Vec<SearchNode>),
    OutOfTime,
}

impl Solver<'_> {
    fn timed_out(&self) -> bool {
        self.start.elapsed() >= self.params.time_limit
    }

    fn offer(&mut self, p: Bipartition) {
        if p.len() > self.best.len() {
            debug_assert!(self.g.is_feasible(&p));
            self.best = p;
        }
    }

    fn separate(&mut self, y: &[f64]) -> Vec<Cut> {
        let limit = self.params.max_cuts_per_round;
        let mut cuts = scan_pool_limited(&self.pool, y, limit);
        if !cuts.is_empty() {
            return cuts;
        }
        for c in separate_odd_negative_cycle(self.g, y) {
            let lifted = lift_odd_negative_cycle(self.g, &c);
            cuts.push(lifted);
        }
        if cuts.len() < limit {
            cuts.extend(separate_clique(self.g, y));
        }
        if cuts.len() < limit {
            cuts.extend(separate_lifted_odd_hole(self.g, y));
        }
        cuts.truncate(limit);
        for c in &cuts {
            *self.stats.cuts_by_kind.entry(c.kind).or_default() += 1;
            self.pool.insert(c.clone());
        }
        cuts
    }

    fn process(&mut self, node: SearchNode) -> Result<NodeOutcome, LpError> {
        self.stats.nodes += 1;
        let mut active: Vec<Cut> = self.base.iter().chain(&node.cuts).cloned().collect();
        let mut lp = node.linear_program();
        for c in &active {
            lp.add_row(c.to_row());
        }
        for r in &node.extra_rows {
            lp.add_row(r.to_row());
        }
        let mut simplex = Simplex::new(&lp)?;
        let mut sol = simplex.solve()?;
        self.stats.lp_solves += 1;
        let mut rounds = 0;
        loop {
            if sol.status == LpStatus::Infeasible {
                return Ok(NodeOutcome::Closed);
            }
            let y = sol.values.clone();
            let z = sol.objective_value;
            if can_prune(z, self.best.len()) {
                return Ok(NodeOutcome::Closed);
            }
            let new_cuts = if is_integral(&y) {
                let cuts = separate_odd_negative_cycle(self.g, &y);
                if cuts.is_empty() {
                    if let Some(p) = decode(self.g, &y) {
                        self.offer(p);
                    }
                    return Ok(NodeOutcome::Closed);
                }
                for c in &cuts {
                    *self.stats.cuts_by_kind.entry(c.kind).or_default() += 1;
                    self.pool.insert(c.clone());
                }
                cuts
            } else {
                self.offer(rounding_heuristic(self.g, &y));
                if can_prune(z, self.best.len()) {
                    return Ok(NodeOutcome::Closed);
                }
                if self.timed_out() {
                    return Ok(NodeOutcome::OutOfTime);
                }
                let cuts = if rounds < self.params.max_cut_rounds {
                    self.separate(&y)
                } else {
                    Vec::new()
                };
                if cuts.is_empty() {
                    let inherited: Vec<Cut> = active[self.base.len()..]
                        .iter()
                        .filter(|c| c.rhs as f64 - c.lhs(&y) <= BINDING_TOL)
                        .cloned()
                        .collect();
                    let parent = SearchNode {
                        cuts: inherited,
                        ..node
                    };
                    let children = branch(&parent, &active, &y, z, self.params.branching)
                        .expect("fractional solution");
                    return Ok(NodeOutcome::Branched(children));
                }
                rounds += 1;
                cuts
            };
            if self.params.collect_cuts {
                self.emitted.extend(new_cuts.iter().cloned());
            }
            let rows: Vec<Row<f64>> = new_cuts.iter().map(Cut::to_row).collect();
            active.extend(new_cuts);
            sol = simplex.add_rows_and_resolve(&rows)?;
            self.stats.lp_solves += 1;
        }
    }
}

use cut::scan_pool_limited;

/// Solves the problem exactly, or until the time limit.
pub fn solve(g: &SignedGraph, params: &SolveParams) -> Result<SolveResult, LpError> {
    let start = Instant::now();
    let formulation = initial_formulation(g);
    let base = formulation.cuts();
    let mut solver = Solver {
        g,
        params,
        emitted: if params.collect_cuts {
            base.clone()
        } else {
            Vec::new()
        },
        base,
        pool: CutPool::default(),
        best: Bipartition::empty(),
        stats: SolveStats::default(),
        start,
    };
    let mut heap = BinaryHeap::new();
    let mut next_id = 0;
    heap.push(Open {
        bound: g.n() as f64,
        id: next_id,
        node: SearchNode::root(g.n()),
    });
    next_id += 1;
    let mut status = SolveStatus::Optimal;
    let mut open_bound = None;
    while let Some(Open { bound, node, .. }) = heap.pop() {
        if can_prune(bound, solver.best.len()) {
            continue;
        }
        if solver.timed_out() {
            status = SolveStatus::TimeLimit;
            open_bound = Some(bound);
            break;
        }
        match solver.process(node)? {
            NodeOutcome::Closed => {}
            NodeOutcome::OutOfTime => {
                status = SolveStatus::TimeLimit;
                open_bound = Some(bound);
                break;
            }
            NodeOutcome::Branched(children) => {
                for child in children {
                    heap.push(Open {
                        bound: child.bound,
                        id: next_id,
                        node: child,
                    });
                    next_id += 1;
                }
            }
        }
    }
    let lower_bound = solver.best.len();
    let upper_bound = match status {
        SolveStatus::Optimal => lower_bound as f64,
        SolveStatus::TimeLimit => {
            // the popped node is the largest open bound
            let b = open_bound.unwrap_or(lower_bound as f64);
            b.min(g.n() as f64).max(lower_bound as f64)
        }
    };
    solver.stats.wall_time = start.elapsed();
    Ok(SolveResult {
        best: solver.best,
        lower_bound,
        upper_bound,
        status,
        stats: solver.stats,
        emitted_cuts: solver.emitted,
    })
}
