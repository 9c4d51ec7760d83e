//! Random instance generation, the `p mbsp` text format, and an exhaustive
//! oracle for small graphs.
//!
//! File format, one record per line:
//!
//! ```text
//! c optional comment
//! p mbsp <n> <m>
//! e <u> <v> <+|->
//! ```
//!
//! Vertices are 1-based with `u < v`; a parallel pair is two `e` lines.
//! [`write_graph`] emits edges sorted by `(u, v, sign)` with `+` first.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Bipartition, GraphError, Side, Sign, SignedGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Composition {
    /// No parallel pairs; `|E-| / |E+|` as given.
    NegRatio(f64),
    /// Fraction of pairs carrying both signs.
    ParallelFrac(f64),
}

impl Composition {
    pub fn group(&self) -> u8 {
        match self {
            Composition::NegRatio(_) => 1,
            Composition::ParallelFrac(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub density: f64,
    pub composition: Composition,
    pub seed: u64,
}

impl RandomSpec {
    /// Number of vertex pairs carrying at least one edge.
    pub fn pair_count(&self) -> usize {
        let all = self.n * self.n.saturating_sub(1) / 2;
        (self.density * all as f64).round() as usize
    }

    /// File stem naming the grid point and seed, e.g. `g2_n50_d0.25_p0.50_s1`.
    pub fn name(&self) -> String {
        let (tag, x) = match self.composition {
            Composition::NegRatio(r) => ("r", r),
            Composition::ParallelFrac(p) => ("p", p),
        };
        format!(
            "g{}_n{}_d{:.2}_{}{:.2}_s{}",
            self.composition.group(),
            self.n,
            self.density,
            tag,
            x,
            self.seed
        )
    }
}

/// Densities of the benchmark grid.
pub const DENSITIES: [f64; 3] = [0.25, 0.50, 0.75];
/// `|E-| / |E+|` values for group 1.
pub const NEG_RATIOS: [f64; 3] = [0.5, 1.0, 2.0];
/// Parallel fractions for group 2.
pub const PARALLEL_FRACS: [f64; 3] = [0.25, 0.50, 0.75];

/// The nine grid points of one group at size `n`, each with seeds `1..=seeds`.
pub fn grid(group: u8, n: usize, seeds: u64) -> Vec<RandomSpec> {
    let comps: Vec<Composition> = match group {
        1 => NEG_RATIOS
            .iter()
            .map(|&r| Composition::NegRatio(r))
            .collect(),
        _ => PARALLEL_FRACS
            .iter()
            .map(|&p| Composition::ParallelFrac(p))
            .collect(),
    };
    let mut specs = Vec::new();
    for &composition in &comps {
        for &density in &DENSITIES {
            for seed in 1..=seeds {
                specs.push(RandomSpec {
                    n,
                    density,
                    composition,
                    seed,
                });
            }
        }
    }
    specs
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("density must lie in (0, 1], got {0}")]
    Density(f64),
    #[error("the requested density yields no edges")]
    NoEdges,
    #[error("negative-to-positive ratio must be finite and non-negative, got {0}")]
    Ratio(f64),
    #[error("parallel fraction must lie in (0, 1], got {0}; use a negative ratio for graphs without parallel pairs")]
    ParallelFrac(f64),
}

/// Samples a graph for `spec`. Counts follow the rounding rules exactly:
/// `m = round(d n (n-1) / 2)` pairs, then `round(m r / (1 + r))` negative
/// pairs (group 1) or `round(m p)` parallel pairs with fair signs elsewhere
/// (group 2).
pub fn generate(spec: &RandomSpec) -> Result<SignedGraph, SpecError> {
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(SpecError::Density(spec.density));
    }
    match spec.composition {
        Composition::NegRatio(r) if !(r.is_finite() && r >= 0.0) => {
            return Err(SpecError::Ratio(r))
        }
        Composition::ParallelFrac(p) if !(p > 0.0 && p <= 1.0) => {
            return Err(SpecError::ParallelFrac(p))
        }
        _ => {}
    }
    let m = spec.pair_count();
    if m == 0 {
        return Err(SpecError::NoEdges);
    }
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut pairs: Vec<(usize, usize)> = sample(&mut rng, n * (n - 1) / 2, m)
        .into_iter()
        .map(|k| pair_from_index(n, k))
        .collect();
    pairs.sort_unstable();
    let mut edges = Vec::with_capacity(2 * m);
    match spec.composition {
        Composition::NegRatio(r) => {
            let neg = (m as f64 * r / (1.0 + r)).round() as usize;
            let mut negative = vec![false; m];
            for k in sample(&mut rng, m, neg) {
                negative[k] = true;
            }
            for (k, &(u, v)) in pairs.iter().enumerate() {
                edges.push((
                    u,
                    v,
                    if negative[k] {
                        Sign::Negative
                    } else {
                        Sign::Positive
                    },
                ));
            }
        }
        Composition::ParallelFrac(p) => {
            let par = (m as f64 * p).round() as usize;
            let mut parallel = vec![false; m];
            for k in sample(&mut rng, m, par) {
                parallel[k] = true;
            }
            for (k, &(u, v)) in pairs.iter().enumerate() {
                if parallel[k] {
                    edges.push((u, v, Sign::Positive));
                    edges.push((u, v, Sign::Negative));
                } else {
                    let s = if rng.gen_bool(0.5) {
                        Sign::Negative
                    } else {
                        Sign::Positive
                    };
                    edges.push((u, v, s));
                }
            }
        }
    }
    Ok(SignedGraph::build(n, edges).expect("sampled pairs are distinct and in range"))
}

/// The `k`-th pair `(u, v)`, `u < v`, in row-major order.
fn pair_from_index(n: usize, mut k: usize) -> (usize, usize) {
    let mut u = 0;
    while k >= n - 1 - u {
        k -= n - 1 - u;
        u += 1;
    }
    (u, u + 1 + k)
}

/// A balanced graph: a random hidden bipartition, `round(d n (n-1) / 2)`
/// random pairs, positive within sides and negative across.
pub fn generate_balanced(n: usize, density: f64, seed: u64) -> SignedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let all = n * n.saturating_sub(1) / 2;
    let m = ((density.clamp(0.0, 1.0) * all as f64).round() as usize).min(all);
    let edges: Vec<(usize, usize, Sign)> = sample(&mut rng, all, m)
        .into_iter()
        .map(|k| {
            let (u, v) = pair_from_index(n, k);
            (
                u,
                v,
                if side[u] == side[v] {
                    Sign::Positive
                } else {
                    Sign::Negative
                },
            )
        })
        .collect();
    SignedGraph::build(n, edges).expect("sampled pairs are distinct and in range")
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the text format.
pub fn parse_graph(text: &str) -> Result<SignedGraph, FormatError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(parse_err(line, "duplicate header"));
                }
                if tok.next() != Some("mbsp") {
                    return Err(parse_err(line, "expected `p mbsp <n> <m>`"));
                }
                let n = parse_count(tok.next(), line, "vertex count")?;
                let m = parse_count(tok.next(), line, "edge count")?;
                if tok.next().is_some() {
                    return Err(parse_err(line, "trailing tokens after header"));
                }
                header = Some((n, m, line));
            }
            "e" => {
                let Some((n, _, _)) = header else {
                    return Err(parse_err(line, "edge before header"));
                };
                let u = parse_count(tok.next(), line, "endpoint")?;
                let v = parse_count(tok.next(), line, "endpoint")?;
                let sign = match tok.next() {
                    Some("+") => Sign::Positive,
                    Some("-") => Sign::Negative,
                    Some(s) => return Err(parse_err(line, format!("bad sign `{s}`"))),
                    None => return Err(parse_err(line, "missing sign")),
                };
                if tok.next().is_some() {
                    return Err(parse_err(line, "trailing tokens after edge"));
                }
                if u == v {
                    return Err(FormatError::Graph {
                        line,
                        source: GraphError::Loop(u),
                    });
                }
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(parse_err(line, format!("vertex out of range 1..={n}")));
                }
                edges.push((u - 1, v - 1, sign));
                edge_lines.push(line);
            }
            other => return Err(parse_err(line, format!("unknown record `{other}`"))),
        }
    }
    let Some((n, m, hline)) = header else {
        return Err(parse_err(text.lines().count().max(1), "missing header"));
    };
    if edges.len() != m {
        return Err(parse_err(
            hline,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    let mut seen = std::collections::HashSet::new();
    for (k, &(u, v, s)) in edges.iter().enumerate() {
        if !seen.insert((u.min(v), u.max(v), s)) {
            return Err(parse_err(edge_lines[k], "duplicate edge"));
        }
    }
    SignedGraph::build(n, edges).map_err(|source| FormatError::Graph {
        line: hline,
        source,
    })
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize, FormatError> {
    let t = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    t.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{t}`")))
}

/// Canonical text for `g`.
pub fn format_graph(g: &SignedGraph) -> String {
    let edges = g.sorted_edges();
    let mut out = format!("p mbsp {} {}\n", g.n(), edges.len());
    for e in edges {
        writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.sign.symbol())
            .expect("writing to a String");
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<SignedGraph, FormatError> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn write_graph(g: &SignedGraph, path: impl AsRef<Path>) -> Result<(), FormatError> {
    fs::write(path, format_graph(g))?;
    Ok(())
}

/// Side labels making the vertices of `mask` a balanced set, if any.
fn balanced_labels(g: &SignedGraph, mask: u32) -> Option<Vec<Option<Side>>> {
    let n = g.n();
    let mut labels: Vec<Option<Side>> = vec![None; n];
    let mut stack = Vec::new();
    for root in (0..n).filter(|&v| mask >> v & 1 == 1) {
        if labels[root].is_some() {
            continue;
        }
        labels[root] = Some(Side::One);
        stack.push(root);
        while let Some(u) = stack.pop() {
            let lu = labels[u].expect("labelled before push");
            for &(v, signs) in g.neighbors(u) {
                if mask >> v & 1 == 0 {
                    continue;
                }
                let want = match signs.single() {
                    None => return None,
                    Some(Sign::Positive) => lu,
                    Some(Sign::Negative) => lu.other(),
                };
                match labels[v] {
                    None => {
                        labels[v] = Some(want);
                        stack.push(v);
                    }
                    Some(l) if l != want => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(labels)
}

/// Whether the vertex set `mask` induces a balanced subgraph.
pub fn is_balanced_set(g: &SignedGraph, mask: u32) -> bool {
    balanced_labels(g, mask).is_some()
}

/// Largest balanced vertex set by exhaustive search, largest sizes first.
///
/// # Panics
/// When `g` has more than 20 vertices.
pub fn brute_force(g: &SignedGraph) -> (usize, Bipartition) {
    let n = g.n();
    assert!(n <= 20, "brute force is limited to 20 vertices");
    for k in (0..=n).rev() {
        if k == 0 {
            break;
        }
        // Gosper's hack over k-subsets
        let mut mask: u32 = (1u32 << k) - 1;
        let limit: u32 = 1u32 << n;
        while mask < limit {
            if let Some(labels) = balanced_labels(g, mask) {
                return (k, Bipartition::from_labels(&labels));
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    (0, Bipartition::empty())
}

/// Bit masks of every balanced vertex set, the empty set included.
///
/// # Panics
/// When `g` has more than 20 vertices.
pub fn balanced_subsets(g: &SignedGraph) -> Vec<u32> {
    assert!(g.n() <= 20, "enumeration is limited to 20 vertices");
    (0..1u32 << g.n())
        .filter(|&m| is_balanced_set(g, m))
        .collect()
}
