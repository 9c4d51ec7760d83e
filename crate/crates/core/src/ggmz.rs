//! Greedy heuristic: spanning forest, switching set, then a maximal stable
//! set of the negative part of the switched graph.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Bipartition, GraphError, SignedGraph, SwitchSet};
use crate::spanning::{is_forest, spanning_forest, TreeStrategy};

#[derive(Debug, Clone)]
pub struct StableSetParams {
    /// Stop after this many iterations without improving the best set.
    pub max_stall_iterations: usize,
    pub time_limit: Duration,
    pub seed: u64,
    /// Restricted candidate list width, as a fraction of the residual degree range.
    pub rcl_alpha: f64,
}

impl Default for StableSetParams {
    fn default() -> Self {
        StableSetParams {
            max_stall_iterations: 100,
            time_limit: Duration::from_secs(300),
            seed: 0,
            rcl_alpha: 0.3,
        }
    }
}

/// Switching set turning every edge of the forest `t` positive. Each tree is
/// rooted at its lowest vertex, which stays outside the set.
pub fn switch_set_from_forest(t: &SignedGraph) -> Result<SwitchSet, GraphError> {
    if !is_forest(t) {
        return Err(GraphError::NotAForest);
    }
    let n = t.n();
    let mut label: Vec<Option<bool>> = vec![None; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if label[root].is_some() {
            continue;
        }
        label[root] = Some(false);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let lu = label[u].unwrap();
            for &(v, signs) in t.neighbors(u) {
                if label[v].is_none() {
                    label[v] = Some(lu ^ signs.has_negative());
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(SwitchSet::from_mask(
        label.into_iter().map(|l| l == Some(true)).collect(),
    ))
}

/// True when `set` is stable in `h` (edge signs ignored) and no vertex can be added.
pub fn is_maximal_stable(h: &SignedGraph, set: &[usize]) -> bool {
    let mut inside = vec![false; h.n()];
    for &v in set {
        inside[v] = true;
    }
    for &v in set {
        if h.neighbors(v).iter().any(|&(w, _)| inside[w]) {
            return false;
        }
    }
    (0..h.n()).all(|v| inside[v] || h.neighbors(v).iter().any(|&(w, _)| inside[w]))
}

/// GRASP for a maximal stable set of `h`, treating every edge as unsigned.
pub fn stable_set_grasp(h: &SignedGraph, params: &StableSetParams) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    stable_set_grasp_with(h, params, &mut rng)
}

fn stable_set_grasp_with<R: Rng + ?Sized>(
    h: &SignedGraph,
    params: &StableSetParams,
    rng: &mut R,
) -> Vec<usize> {
    let start = Instant::now();
    let mut best: Vec<usize> = Vec::new();
    let mut stall = 0;
    let mut first = true;
    while first || (stall < params.max_stall_iterations && start.elapsed() < params.time_limit) {
        let mut set = construct_stable(h, params.rcl_alpha, rng);
        improve_by_exchange(h, &mut set);
        if first || set.len() > best.len() {
            best = set;
            stall = 0;
        } else {
            stall += 1;
        }
        first = false;
        if best.len() == h.n() {
            break;
        }
    }
    best.sort_unstable();
    best
}

fn construct_stable<R: Rng + ?Sized>(h: &SignedGraph, alpha: f64, rng: &mut R) -> Vec<usize> {
    let n = h.n();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    let mut remaining = n;
    let mut set = Vec::new();
    let mut rcl = Vec::with_capacity(n);
    while remaining > 0 {
        let (mut lo, mut hi) = (usize::MAX, 0);
        for v in (0..n).filter(|&v| alive[v]) {
            lo = lo.min(degree[v]);
            hi = hi.max(degree[v]);
        }
        let threshold = lo as f64 + alpha * (hi - lo) as f64;
        rcl.clear();
        rcl.extend((0..n).filter(|&v| alive[v] && degree[v] as f64 <= threshold));
        let &pick = rcl
            .choose(rng)
            .expect("the minimum-degree vertex is always in the list");
        set.push(pick);
        let mut removed = vec![pick];
        removed.extend(
            h.neighbors(pick)
                .iter()
                .map(|&(w, _)| w)
                .filter(|&w| alive[w]),
        );
        for &r in &removed {
            alive[r] = false;
            remaining -= 1;
        }
        for &r in &removed {
            for &(w, _) in h.neighbors(r) {
                if alive[w] {
                    degree[w] -= 1;
                }
            }
        }
    }
    set
}

/// (1,2)-exchange: drop one member, add two non-adjacent vertices whose only
/// conflict was that member. Repeats until no exchange applies.
fn improve_by_exchange(h: &SignedGraph, set: &mut Vec<usize>) {
    let n = h.n();
    let mut inside = vec![false; n];
    let mut tight = vec![0usize; n];
    for &v in set.iter() {
        inside[v] = true;
        for &(w, _) in h.neighbors(v) {
            tight[w] += 1;
        }
    }
    let insert = |v: usize, inside: &mut Vec<bool>, tight: &mut Vec<usize>| {
        inside[v] = true;
        for &(w, _) in h.neighbors(v) {
            tight[w] += 1;
        }
    };
    loop {
        let mut improved = false;
        for x in 0..n {
            if !inside[x] {
                continue;
            }
            let one_tight: Vec<usize> = h
                .neighbors(x)
                .iter()
                .map(|&(w, _)| w)
                .filter(|&w| !inside[w] && tight[w] == 1)
                .collect();
            let pair = one_tight.iter().enumerate().find_map(|(k, &a)| {
                one_tight[k + 1..]
                    .iter()
                    .find(|&&b| h.pair(a, b).is_none())
                    .map(|&b| (a, b))
            });
            if let Some((a, b)) = pair {
                inside[x] = false;
                for &(w, _) in h.neighbors(x) {
                    tight[w] -= 1;
                }
                insert(a, &mut inside, &mut tight);
                insert(b, &mut inside, &mut tight);
                for v in 0..n {
                    if !inside[v] && tight[v] == 0 {
                        insert(v, &mut inside, &mut tight);
                    }
                }
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    *set = (0..n).filter(|&v| inside[v]).collect();
}

/// Runs the greedy heuristic and splits the stable set by switching label.
pub fn ggmz(g: &SignedGraph, strategy: TreeStrategy, params: &StableSetParams) -> Bipartition {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let forest = spanning_forest(g, strategy, &mut rng);
    let w = switch_set_from_forest(&forest).expect("spanning_forest returns a forest");
    let conflicts = g.switch(&w).negative_part();
    let stable = stable_set_grasp_with(&conflicts, params, &mut rng);
    let (v2, v1): (Vec<usize>, Vec<usize>) = stable.into_iter().partition(|&v| w.contains(v));
    Bipartition::new(v1, v2).expect("partition of a set is disjoint")
}
