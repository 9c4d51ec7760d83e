//! GRASP for the maximum balanced subgraph: randomized construction over
//! candidate sets followed by a remove/insert local search.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Bipartition, GraphError, Side, SignedGraph};

#[derive(Debug, Clone)]
pub struct GraspParams {
    pub max_iterations: usize,
    pub time_limit: Duration,
    pub seed: u64,
}

impl Default for GraspParams {
    fn default() -> Self {
        GraspParams {
            max_iterations: 100,
            time_limit: Duration::from_secs(300),
            seed: 0,
        }
    }
}

type Labels = Vec<Option<Side>>;

/// Whether vertex `i` (currently unselected) can join `side`.
pub(crate) fn fits(g: &SignedGraph, labels: &[Option<Side>], i: usize, side: Side) -> bool {
    g.neighbors(i).iter().all(|&(j, signs)| match labels[j] {
        None => true,
        Some(_) if signs.is_parallel() => false,
        Some(s) if s == side => signs.positive_only(),
        Some(_) => signs.negative_only(),
    })
}

fn candidate_list(g: &SignedGraph, labels: &[Option<Side>], side: Side) -> Vec<usize> {
    (0..g.n())
        .filter(|&i| labels[i].is_none() && fits(g, labels, i, side))
        .collect()
}

fn feasible_labels(g: &SignedGraph, p: &Bipartition) -> Result<Labels, GraphError> {
    if !g.is_feasible(p) {
        return Err(GraphError::InfeasibleBipartition);
    }
    Ok(p.labels(g.n()).expect("feasible bipartitions are in range"))
}

/// Vertices outside `p` that can be added to `side` keeping `p` feasible.
pub fn candidates(g: &SignedGraph, p: &Bipartition, side: Side) -> Result<Vec<usize>, GraphError> {
    let labels = feasible_labels(g, p)?;
    Ok(candidate_list(g, &labels, side))
}

/// Randomized construction from the empty solution until neither side has a candidate.
pub fn construct<R: Rng + ?Sized>(g: &SignedGraph, rng: &mut R) -> Bipartition {
    let mut labels: Labels = vec![None; g.n()];
    loop {
        let c1 = candidate_list(g, &labels, Side::One);
        let c2 = candidate_list(g, &labels, Side::Two);
        let open: Vec<(Side, &Vec<usize>)> = [(Side::One, &c1), (Side::Two, &c2)]
            .into_iter()
            .filter(|(_, c)| !c.is_empty())
            .collect();
        let Some(&(side, cands)) = open.choose(rng) else {
            break;
        };
        let &v = cands.choose(rng).expect("non-empty");
        labels[v] = Some(side);
    }
    Bipartition::from_labels(&labels)
}

fn size(labels: &[Option<Side>]) -> usize {
    labels.iter().filter(|l| l.is_some()).count()
}

/// Adds vertices in index order, trying `prefer` first, until none fits.
fn maximalize(g: &SignedGraph, labels: &mut [Option<Side>], prefer: Side) {
    for v in 0..g.n() {
        if labels[v].is_some() {
            continue;
        }
        if fits(g, labels, v, prefer) {
            labels[v] = Some(prefer);
        } else if fits(g, labels, v, prefer.other()) {
            labels[v] = Some(prefer.other());
        }
    }
}

/// Unselected vertices that fit at least one side, each with the side it
/// would join (`prefer` when both fit).
fn insertable(g: &SignedGraph, labels: &[Option<Side>], prefer: Side) -> Vec<(usize, Side)> {
    (0..g.n())
        .filter(|&v| labels[v].is_none())
        .filter_map(|v| {
            if fits(g, labels, v, prefer) {
                Some((v, prefer))
            } else if fits(g, labels, v, prefer.other()) {
                Some((v, prefer.other()))
            } else {
                None
            }
        })
        .collect()
}

/// Largest strictly improving neighbour of a maximal solution, scanning the
/// one-removal neighbourhood fully before the two-removal one.
fn best_neighbor(g: &SignedGraph, labels: &[Option<Side>]) -> Option<Labels> {
    let current = size(labels);
    let mut best: Option<(usize, Labels)> = None;
    let consider = |cand: Labels, best: &mut Option<(usize, Labels)>| {
        let s = size(&cand);
        if s > best.as_ref().map_or(current, |(b, _)| *b) {
            *best = Some((s, cand));
        }
    };

    for w in [Side::One, Side::Two] {
        for i in (0..g.n()).filter(|&i| labels[i] == Some(w)) {
            let mut base = labels.to_vec();
            base[i] = None;
            let ins = insertable(g, &base, w);
            // inserting never creates new candidates, so fewer than two means no gain
            if ins.len() < 2 {
                continue;
            }
            for &(j, side) in &ins {
                let mut cand = base.clone();
                cand[j] = Some(side);
                maximalize(g, &mut cand, w);
                consider(cand, &mut best);
            }
        }
    }
    if best.is_some() {
        return best.map(|(_, l)| l);
    }

    for w in [Side::One, Side::Two] {
        let members: Vec<usize> = (0..g.n()).filter(|&i| labels[i] == Some(w)).collect();
        for (a, &i1) in members.iter().enumerate() {
            for &i2 in &members[a + 1..] {
                let mut base = labels.to_vec();
                base[i1] = None;
                base[i2] = None;
                let ins = insertable(g, &base, w);
                if ins.len() < 3 {
                    continue;
                }
                for &(j1, s1) in &ins {
                    let mut first = base.clone();
                    first[j1] = Some(s1);
                    let rest = insertable(g, &first, w);
                    if rest.len() < 2 {
                        continue;
                    }
                    for &(j2, s2) in &rest {
                        let mut cand = first.clone();
                        cand[j2] = Some(s2);
                        maximalize(g, &mut cand, w);
                        consider(cand, &mut best);
                    }
                }
            }
        }
    }
    best.map(|(_, l)| l)
}

/// Local search from `p`: moves to the largest neighbour until none is larger.
/// The input is first extended to a maximal solution.
pub fn local_search(g: &SignedGraph, p: &Bipartition) -> Result<Bipartition, GraphError> {
    let mut labels = feasible_labels(g, p)?;
    maximalize(g, &mut labels, Side::One);
    while let Some(next) = best_neighbor(g, &labels) {
        labels = next;
    }
    Ok(Bipartition::from_labels(&labels))
}

/// True when `p` is maximal and neither neighbourhood holds a larger solution.
pub fn is_locally_optimal(g: &SignedGraph, p: &Bipartition) -> bool {
    let Ok(labels) = feasible_labels(g, p) else {
        return false;
    };
    let maximal = [Side::One, Side::Two]
        .into_iter()
        .all(|s| candidate_list(g, &labels, s).is_empty());
    maximal && best_neighbor(g, &labels).is_none()
}

pub fn grasp(g: &SignedGraph, params: &GraspParams) -> Bipartition {
    grasp_with_history(g, params).0
}

/// Like [`grasp`], also returning the best size after every iteration.
pub fn grasp_with_history(g: &SignedGraph, params: &GraspParams) -> (Bipartition, Vec<usize>) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut best = Bipartition::empty();
    let mut history = Vec::new();
    for it in 0..params.max_iterations.max(1) {
        if it > 0 && start.elapsed() >= params.time_limit {
            break;
        }
        let built = construct(g, &mut rng);
        let improved = local_search(g, &built).expect("constructed solutions are feasible");
        if improved.len() > best.len() || it == 0 {
            best = improved;
        }
        history.push(best.len());
        if best.len() == g.n() {
            break;
        }
    }
    (best, history)
}
