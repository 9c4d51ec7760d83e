//! Signed graphs, switching, and balance detection.
//!
//! Vertices are dense indices `0..n`. A vertex pair may carry a positive
//! edge, a negative edge, or both (a *parallel* pair); loops are rejected.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A signed edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedEdge {
    pub u: usize,
    pub v: usize,
    pub sign: Sign,
}

impl SignedEdge {
    pub fn new(a: usize, b: usize, sign: Sign) -> Self {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        SignedEdge { u, v, sign }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Which signs are present on a vertex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PairSigns(u8);

impl PairSigns {
    const POS: u8 = 1;
    const NEG: u8 = 2;

    pub fn of(sign: Sign) -> Self {
        match sign {
            Sign::Positive => PairSigns(Self::POS),
            Sign::Negative => PairSigns(Self::NEG),
        }
    }

    pub fn with(self, sign: Sign) -> Self {
        PairSigns(self.0 | Self::of(sign).0)
    }

    pub fn has(self, sign: Sign) -> bool {
        self.0 & Self::of(sign).0 != 0
    }

    pub fn has_positive(self) -> bool {
        self.0 & Self::POS != 0
    }

    pub fn has_negative(self) -> bool {
        self.0 & Self::NEG != 0
    }

    pub fn is_parallel(self) -> bool {
        self.0 == Self::POS | Self::NEG
    }

    pub fn positive_only(self) -> bool {
        self.0 == Self::POS
    }

    pub fn negative_only(self) -> bool {
        self.0 == Self::NEG
    }

    /// Sign of a non-parallel pair.
    pub fn single(self) -> Option<Sign> {
        match self.0 {
            Self::POS => Some(Sign::Positive),
            Self::NEG => Some(Sign::Negative),
            _ => None,
        }
    }

    fn switched(self) -> Self {
        let mut out = 0;
        if self.has_positive() {
            out |= Self::NEG;
        }
        if self.has_negative() {
            out |= Self::POS;
        }
        PairSigns(out)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge on vertex {0}")]
    Loop(usize),
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("vertex {vertex} appears in both sides of the bipartition")]
    OverlappingSides { vertex: usize },
    #[error("edge set contains a cycle, expected a forest")]
    NotAForest,
    #[error("bipartition is not a feasible solution for this graph")]
    InfeasibleBipartition,
}

#[derive(Debug, Clone)]
pub struct SignedGraph {
    n: usize,
    edges: Vec<SignedEdge>,
    /// Sorted by neighbor index; one entry per adjacent pair.
    adj: Vec<Vec<(usize, PairSigns)>>,
}

impl PartialEq for SignedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for SignedGraph {}

impl SignedGraph {
    /// Builds a graph from `(u, v, sign)` triples. Repeated `(pair, sign)`
    /// entries collapse into one edge; the first occurrence fixes the order.
    pub fn build<I>(n: usize, edge_list: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        let mut adj: Vec<Vec<(usize, PairSigns)>> = vec![Vec::new(); n];
        let mut edges = Vec::new();
        for (a, b, sign) in edge_list {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange { u: a, v: b, n });
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            let e = SignedEdge::new(a, b, sign);
            let slot = adj[e.u].iter().position(|&(w, _)| w == e.v);
            match slot {
                Some(k) => {
                    let signs = adj[e.u][k].1;
                    if signs.has(sign) {
                        continue;
                    }
                    adj[e.u][k].1 = signs.with(sign);
                    let back = adj[e.v].iter().position(|&(w, _)| w == e.u).unwrap();
                    adj[e.v][back].1 = signs.with(sign);
                }
                None => {
                    adj[e.u].push((e.v, PairSigns::of(sign)));
                    adj[e.v].push((e.u, PairSigns::of(sign)));
                }
            }
            edges.push(e);
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(w, _)| w);
        }
        Ok(SignedGraph { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        SignedGraph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Signed edges in input order (a parallel pair contributes two).
    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    pub fn sorted_edges(&self) -> Vec<SignedEdge> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_positive(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.sign == Sign::Positive)
            .count()
    }

    pub fn num_negative(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.sign == Sign::Negative)
            .count()
    }

    /// Number of vertex pairs carrying both signs.
    pub fn num_parallel(&self) -> usize {
        self.parallel_pairs().len()
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, PairSigns)] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn pair(&self, u: usize, v: usize) -> Option<PairSigns> {
        let list = &self.adj[u];
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|k| list[k].1)
    }

    pub fn is_parallel(&self, u: usize, v: usize) -> bool {
        self.pair(u, v).is_some_and(|p| p.is_parallel())
    }

    /// Pairs `(u, v)`, `u < v`, present in both E+ and E-.
    pub fn parallel_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for &(v, signs) in &self.adj[u] {
                if u < v && signs.is_parallel() {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn has_parallel(&self) -> bool {
        self.adj
            .iter()
            .any(|list| list.iter().any(|&(_, s)| s.is_parallel()))
    }

    /// Flips the sign of every edge with exactly one endpoint in `w`.
    pub fn switch(&self, w: &SwitchSet) -> SignedGraph {
        let edges: Vec<SignedEdge> = self
            .edges
            .iter()
            .map(|e| {
                if w.contains(e.u) != w.contains(e.v) {
                    SignedEdge {
                        sign: e.sign.flipped(),
                        ..*e
                    }
                } else {
                    *e
                }
            })
            .collect();
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(u, list)| {
                list.iter()
                    .map(|&(v, s)| {
                        if w.contains(u) != w.contains(v) {
                            (v, s.switched())
                        } else {
                            (v, s)
                        }
                    })
                    .collect()
            })
            .collect();
        SignedGraph {
            n: self.n,
            edges,
            adj,
        }
    }

    /// Subgraph induced by `vertices`, relabelled densely in the order given.
    pub fn induced(&self, vertices: &[usize]) -> InducedSubgraph {
        let mut local = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            local[v] = k;
        }
        let edges = self.edges.iter().filter_map(|e| {
            let (a, b) = (local[e.u], local[e.v]);
            (a != usize::MAX && b != usize::MAX).then_some((a, b, e.sign))
        });
        let graph = SignedGraph::build(vertices.len(), edges)
            .expect("induced subgraph of a valid graph is valid");
        InducedSubgraph {
            graph,
            original: vertices.to_vec(),
        }
    }

    /// The unsigned-in-spirit graph of negative edges, one edge per pair.
    pub fn negative_part(&self) -> SignedGraph {
        let edges = self
            .edges
            .iter()
            .filter(|e| e.sign == Sign::Negative)
            .map(|e| (e.u, e.v, e.sign));
        SignedGraph::build(self.n, edges).expect("subgraph of a valid graph is valid")
    }

    /// Returns a switching set making every edge positive, or `None` when a
    /// parallel pair or an odd negative cycle exists. Linear time.
    pub fn is_balanced(&self) -> Option<SwitchSet> {
        if self.has_parallel() {
            return None;
        }
        let mut label: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if label[root].is_some() {
                continue;
            }
            label[root] = Some(false);
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                let lu = label[u].unwrap();
                for &(v, signs) in &self.adj[u] {
                    let expect = lu ^ signs.has_negative();
                    match label[v] {
                        None => {
                            label[v] = Some(expect);
                            queue.push_back(v);
                        }
                        Some(lv) if lv != expect => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(SwitchSet {
            members: label.into_iter().map(|l| l.unwrap_or(false)).collect(),
        })
    }

    /// Checks that `p` describes a balanced induced subgraph witnessed by its sides.
    pub fn is_feasible(&self, p: &Bipartition) -> bool {
        let side = match p.labels(self.n) {
            Some(side) => side,
            None => return false,
        };
        for u in 0..self.n {
            let Some(su) = side[u] else { continue };
            for &(v, signs) in &self.adj[u] {
                if v < u {
                    continue;
                }
                let Some(sv) = side[v] else { continue };
                let ok = if su == sv {
                    signs.positive_only()
                } else {
                    signs.negative_only()
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}

/// An induced subgraph together with the original identity of each vertex.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: SignedGraph,
    /// `original[k]` is the vertex of the parent graph that became `k`.
    pub original: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchSet {
    members: Vec<bool>,
}

impl SwitchSet {
    pub fn empty(n: usize) -> Self {
        SwitchSet {
            members: vec![false; n],
        }
    }

    pub fn from_members(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut w = Self::empty(n);
        for v in members {
            w.members[v] = true;
        }
        w
    }

    pub fn from_mask(members: Vec<bool>) -> Self {
        SwitchSet { members }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&v| self.members[v])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn complement(&self) -> SwitchSet {
        SwitchSet {
            members: self.members.iter().map(|&b| !b).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }
}

/// A feasible-solution candidate: two disjoint vertex sets, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Bipartition {
    v1: Vec<usize>,
    v2: Vec<usize>,
}

impl Bipartition {
    pub fn new(mut v1: Vec<usize>, mut v2: Vec<usize>) -> Result<Self, GraphError> {
        v1.sort_unstable();
        v1.dedup();
        v2.sort_unstable();
        v2.dedup();
        if let Some(&vertex) = v1.iter().find(|v| v2.binary_search(v).is_ok()) {
            return Err(GraphError::OverlappingSides { vertex });
        }
        Ok(Bipartition { v1, v2 })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_labels(labels: &[Option<Side>]) -> Self {
        let mut p = Bipartition::default();
        for (v, l) in labels.iter().enumerate() {
            match l {
                Some(Side::One) => p.v1.push(v),
                Some(Side::Two) => p.v2.push(v),
                None => {}
            }
        }
        p
    }

    /// Per-vertex side labels, or `None` if a member is out of range.
    pub fn labels(&self, n: usize) -> Option<Vec<Option<Side>>> {
        let mut side = vec![None; n];
        for &v in &self.v1 {
            *side.get_mut(v)? = Some(Side::One);
        }
        for &v in &self.v2 {
            *side.get_mut(v)? = Some(Side::Two);
        }
        Some(side)
    }

    pub fn v1(&self) -> &[usize] {
        &self.v1
    }

    pub fn v2(&self) -> &[usize] {
        &self.v2
    }

    pub fn len(&self) -> usize {
        self.v1.len() + self.v2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All selected vertices, sorted.
    pub fn vertices(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.v1.iter().chain(&self.v2).copied().collect();
        all.sort_unstable();
        all
    }
}
