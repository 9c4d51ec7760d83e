//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use mbsp::instances::{generate, Composition, RandomSpec, DENSITIES, NEG_RATIOS, PARALLEL_FRACS};
use mbsp::lp::{LinearProgram, Relation};
use mbsp::{Sign, SignedGraph};
use rand::Rng;

/// The `i`-th instance of a suite cycling through sizes `lo..=hi`, both
/// groups, every composition and every density.
pub fn suite_spec(i: usize, lo: usize, hi: usize) -> RandomSpec {
    let sizes = hi - lo + 1;
    let n = lo + i % sizes;
    let group = (i / sizes) % 2;
    let comp = (i / (2 * sizes)) % 3;
    let density = DENSITIES[(i / (6 * sizes)) % 3];
    let composition = if group == 0 {
        Composition::NegRatio(NEG_RATIOS[comp])
    } else {
        Composition::ParallelFrac(PARALLEL_FRACS[comp])
    };
    RandomSpec {
        n,
        density,
        composition,
        seed: 1000 + i as u64,
    }
}

pub fn suite_graph(i: usize, lo: usize, hi: usize) -> SignedGraph {
    generate(&suite_spec(i, lo, hi)).expect("suite specs are valid")
}

/// Arbitrary signed graph: each pair independently absent, positive,
/// negative or parallel.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p_edge: f64, p_parallel: f64) -> SignedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !rng.gen_bool(p_edge) {
                continue;
            }
            if rng.gen_bool(p_parallel) {
                edges.push((u, v, Sign::Positive));
                edges.push((u, v, Sign::Negative));
            } else if rng.gen_bool(0.5) {
                edges.push((u, v, Sign::Negative));
            } else {
                edges.push((u, v, Sign::Positive));
            }
        }
    }
    SignedGraph::build(n, edges).expect("valid pairs")
}

pub fn mask_to_set(mask: u32, n: usize) -> Vec<bool> {
    (0..n).map(|v| mask >> v & 1 == 1).collect()
}

/// Every simple cycle avoiding parallel pairs with an odd number of
/// negative edges, as sorted vertex lists.
pub fn odd_negative_cycles(g: &SignedGraph) -> Vec<Vec<usize>> {
    fn dfs(
        g: &SignedGraph,
        start: usize,
        u: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        parity: bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        for &(v, signs) in g.neighbors(u) {
            let Some(s) = signs.single() else { continue };
            let p = parity ^ (s == Sign::Negative);
            if v == start && path.len() >= 3 {
                // each cycle is seen in both directions; keep one
                if p && path[1] < *path.last().unwrap() {
                    let mut c = path.clone();
                    c.sort_unstable();
                    out.push(c);
                }
                continue;
            }
            if v <= start || on_path[v] {
                continue;
            }
            on_path[v] = true;
            path.push(v);
            dfs(g, start, v, path, on_path, p, out);
            path.pop();
            on_path[v] = false;
        }
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; g.n()];
    for s in 0..g.n() {
        on_path[s] = true;
        dfs(g, s, s, &mut vec![s], &mut on_path, false, &mut out);
        on_path[s] = false;
    }
    out
}

/// Maximum of `c x` over the polytope, by enumerating basic solutions.
/// `None` when the polytope is empty.
pub fn lp_by_vertices(lp: &LinearProgram<f64>) -> Option<f64> {
    let n = lp.num_vars();
    // constraints a x (rel) b, bounds included
    let mut cons: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    for row in &lp.rows {
        let mut a = vec![0.0; n];
        for &(j, c) in &row.coeffs {
            a[j] += c;
        }
        cons.push((a, row.relation, row.rhs));
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cons.push((e.clone(), Relation::Ge, lp.lower[j]));
        cons.push((e, Relation::Le, lp.upper[j]));
    }
    let feasible = |x: &[f64]| {
        cons.iter().all(|(a, rel, b)| {
            let act: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
            match rel {
                Relation::Le => act <= b + 1e-9,
                Relation::Ge => act >= b - 1e-9,
                Relation::Eq => (act - b).abs() <= 1e-9,
            }
        })
    };
    let mut best: Option<f64> = None;
    let m = cons.len();
    let mut pick = Vec::with_capacity(n);
    fn combos(
        m: usize,
        k: usize,
        start: usize,
        pick: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if pick.len() == k {
            f(pick);
            return;
        }
        for i in start..m {
            pick.push(i);
            combos(m, k, i + 1, pick, f);
            pick.pop();
        }
    }
    combos(m, n, 0, &mut pick, &mut |idx: &[usize]| {
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| cons[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| cons[i].2).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let z: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(best.map_or(z, |b: f64| b.max(z)));
            }
        }
    });
    if n == 0 {
        return feasible(&[]).then_some(0.0);
    }
    best
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                        *x -= f * p;
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Random LP with integer data, `nvars` variables and `nrows` rows.
pub fn random_lp<R: Rng>(rng: &mut R, nvars: usize, nrows: usize) -> LinearProgram<f64> {
    let objective: Vec<f64> = (0..nvars).map(|_| rng.gen_range(-3..=3) as f64).collect();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for _ in 0..nvars {
        let lo = rng.gen_range(-2..=1) as f64;
        let hi = lo + rng.gen_range(0..=3) as f64;
        lower.push(lo);
        upper.push(hi);
    }
    let mut lp = LinearProgram::new(objective, lower, upper);
    for _ in 0..nrows {
        lp.add_row(random_row(rng, nvars));
    }
    lp
}

pub fn random_row<R: Rng>(rng: &mut R, nvars: usize) -> mbsp::lp::Row<f64> {
    let mut coeffs: Vec<(usize, f64)> = Vec::new();
    for j in 0..nvars {
        if rng.gen_bool(0.7) {
            coeffs.push((j, rng.gen_range(-3..=3) as f64));
        }
    }
    let relation = match rng.gen_range(0..6) {
        0 => Relation::Eq,
        1 | 2 => Relation::Ge,
        _ => Relation::Le,
    };
    mbsp::lp::Row::new(coeffs, relation, rng.gen_range(-3..=4) as f64)
}
