//! Benchmark harness: runs methods over instances and summarizes the rows
//! per size, group and method.
//!
//! CSV columns, in order: `instance, group, n, m, m_neg, m_pos, m_par,
//! method, time_s, status, lb, ub, gap_pct, nodes`. Edge counts count edges,
//! so a parallel pair adds one to each of `m_neg` and `m_pos`; `m_par`
//! counts parallel pairs. `status` is `optimal`, `time_limit`, `heuristic`
//! or `error`.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::bc::{self, BranchRule, Branching, SolveParams, SolveStatus};
use crate::ggmz::{ggmz, StableSetParams};
use crate::graph::SignedGraph;
use crate::grasp::{grasp, GraspParams};
use crate::spanning::TreeStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ggmz(TreeStrategy),
    Grasp,
    Bc(Branching),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Ggmz(t) => write!(f, "ggmz-{}", t.token()),
            Method::Grasp => f.write_str("grasp"),
            Method::Bc(b) => write!(f, "bc-{}", b.token()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub time_limit: Duration,
    pub seed: u64,
    pub grasp_iterations: usize,
    pub workers: usize,
    /// Leave `time_s` blank so identical runs give identical files.
    pub record_time: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            methods: vec![Method::Bc(Branching::Cycle)],
            time_limit: Duration::from_secs(3600),
            seed: 0,
            grasp_iterations: 100,
            workers: 1,
            record_time: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub group: u8,
    pub n: usize,
    pub m: usize,
    pub m_neg: usize,
    pub m_pos: usize,
    pub m_par: usize,
    pub method: String,
    pub time_s: Option<f64>,
    pub status: String,
    pub lb: Option<usize>,
    pub ub: Option<f64>,
    pub gap_pct: Option<f64>,
    pub nodes: Option<usize>,
}

pub const CSV_HEADER: [&str; 14] = [
    "instance", "group", "n", "m", "m_neg", "m_pos", "m_par", "method", "time_s", "status", "lb",
    "ub", "gap_pct", "nodes",
];

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

impl BenchRow {
    pub fn record(&self) -> Vec<String> {
        vec![
            self.instance.clone(),
            self.group.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.m_neg.to_string(),
            self.m_pos.to_string(),
            self.m_par.to_string(),
            self.method.clone(),
            opt(self.time_s, |t| format!("{t:.3}")),
            self.status.clone(),
            opt(self.lb, |v| v.to_string()),
            opt(self.ub, |v| format!("{v:.4}")),
            opt(self.gap_pct, |v| format!("{v:.2}")),
            opt(self.nodes, |v| v.to_string()),
        ]
    }

    /// Inverse of [`BenchRow::record`] up to float formatting.
    pub fn from_record(rec: &[&str]) -> Option<BenchRow> {
        if rec.len() != CSV_HEADER.len() {
            return None;
        }
        fn maybe<T: std::str::FromStr>(s: &str) -> Option<Option<T>> {
            if s.is_empty() {
                Some(None)
            } else {
                s.parse().ok().map(Some)
            }
        }
        Some(BenchRow {
            instance: rec[0].to_string(),
            group: rec[1].parse().ok()?,
            n: rec[2].parse().ok()?,
            m: rec[3].parse().ok()?,
            m_neg: rec[4].parse().ok()?,
            m_pos: rec[5].parse().ok()?,
            m_par: rec[6].parse().ok()?,
            method: rec[7].to_string(),
            time_s: maybe(rec[8])?,
            status: rec[9].to_string(),
            lb: maybe(rec[10])?,
            ub: maybe(rec[11])?,
            gap_pct: maybe(rec[12])?,
            nodes: maybe(rec[13])?,
        })
    }
}

fn base_row(name: &str, g: &SignedGraph, method: Method) -> BenchRow {
    BenchRow {
        instance: name.to_string(),
        group: if g.has_parallel() { 2 } else { 1 },
        n: g.n(),
        m: g.num_edges(),
        m_neg: g.num_negative(),
        m_pos: g.num_positive(),
        m_par: g.num_parallel(),
        method: method.to_string(),
        time_s: None,
        status: String::new(),
        lb: None,
        ub: None,
        gap_pct: None,
        nodes: None,
    }
}

/// Runs one method on one instance.
pub fn run_method(name: &str, g: &SignedGraph, method: Method, cfg: &BenchConfig) -> BenchRow {
    let mut row = base_row(name, g, method);
    let start = Instant::now();
    match method {
        Method::Ggmz(tree) => {
            let params = StableSetParams {
                time_limit: cfg.time_limit,
                seed: cfg.seed,
                ..StableSetParams::default()
            };
            row.lb = Some(ggmz(g, tree, &params).len());
            row.status = "heuristic".into();
        }
        Method::Grasp => {
            let params = GraspParams {
                max_iterations: cfg.grasp_iterations,
                time_limit: cfg.time_limit,
                seed: cfg.seed,
            };
            row.lb = Some(grasp(g, &params).len());
            row.status = "heuristic".into();
        }
        Method::Bc(mode) => {
            let params = SolveParams {
                time_limit: cfg.time_limit,
                seed: cfg.seed,
                branching: BranchRule {
                    mode,
                    ..BranchRule::default()
                },
                ..SolveParams::default()
            };
            match bc::solve(g, &params) {
                Ok(r) => {
                    row.status = r.status.token().into();
                    row.lb = Some(r.lower_bound);
                    row.ub = Some(r.upper_bound);
                    row.gap_pct = match r.status {
                        SolveStatus::Optimal => None,
                        SolveStatus::TimeLimit => r.gap_pct(),
                    };
                    row.nodes = Some(r.stats.nodes);
                }
                Err(_) => row.status = "error".into(),
            }
        }
    }
    let elapsed = start.elapsed();
    if cfg.record_time {
        row.time_s = Some(elapsed.as_secs_f64());
    }
    row
}

/// Runs every configured method on every instance. Rows come back in
/// instance order, then method order, whatever the worker count.
pub fn run_bench(instances: &[(String, SignedGraph)], cfg: &BenchConfig) -> Vec<BenchRow> {
    let jobs: Vec<(usize, Method)> = (0..instances.len())
        .flat_map(|i| cfg.methods.iter().map(move |&m| (i, m)))
        .collect();
    let results: Mutex<Vec<Option<BenchRow>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let workers = cfg.workers.clamp(1, jobs.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, method)) = jobs.get(k) else {
                    break;
                };
                let (name, g) = &instances[i];
                let row = run_method(name, g, method, cfg);
                results
                    .lock()
                    .expect("no worker panics while holding the lock")[k] = Some(row);
            });
        }
    });
    results
        .into_inner()
        .expect("workers have finished")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

pub fn write_csv<W: io::Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> csv::Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let fields: Vec<&str> = rec.iter().collect();
        if let Some(row) = BenchRow::from_record(&fields) {
            rows.push(row);
        }
    }
    Ok(rows)
}

/// One summary cell group: a method on instances of one size and group.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub method: String,
    pub group: u8,
    pub n: usize,
    /// Rows that finished (`optimal` or `heuristic`).
    pub completed: usize,
    /// Mean time over completed rows that carry a time.
    pub mean_time: Option<f64>,
    pub unsolved: usize,
    /// Mean gap over `time_limit` rows that carry a gap.
    pub mean_gap: Option<f64>,
}

impl Aggregate {
    /// `"10.63(27)"`, or `"-"` when nothing completed.
    pub fn time_cell(&self) -> String {
        match (self.completed, self.mean_time) {
            (0, _) => "-".into(),
            (k, Some(t)) => format!("{t:.2}({k})"),
            (k, None) => format!("({k})"),
        }
    }

    pub fn gap_cell(&self) -> String {
        self.mean_gap
            .map_or_else(|| "-".into(), |g| format!("{g:.2}"))
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Summaries keyed by `(method, group, n)` in sorted order.
pub fn aggregate(rows: &[BenchRow]) -> Vec<Aggregate> {
    let mut cells: BTreeMap<(String, u8, usize), Vec<&BenchRow>> = BTreeMap::new();
    for r in rows {
        cells
            .entry((r.method.clone(), r.group, r.n))
            .or_default()
            .push(r);
    }
    cells
        .into_iter()
        .map(|((method, group, n), rs)| {
            let done: Vec<&&BenchRow> = rs
                .iter()
                .filter(|r| r.status == "optimal" || r.status == "heuristic")
                .collect();
            let times: Vec<f64> = done.iter().filter_map(|r| r.time_s).collect();
            let open: Vec<&&BenchRow> = rs.iter().filter(|r| r.status == "time_limit").collect();
            let gaps: Vec<f64> = open.iter().filter_map(|r| r.gap_pct).collect();
            Aggregate {
                method,
                group,
                n,
                completed: done.len(),
                mean_time: if times.len() == done.len() {
                    mean(&times)
                } else {
                    None
                },
                unsolved: open.len(),
                mean_gap: mean(&gaps),
            }
        })
        .collect()
}

pub fn format_aggregate(aggs: &[Aggregate]) -> String {
    let mut out = String::from("method,group,n,time,gap\n");
    for a in aggs {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            a.method,
            a.group,
            a.n,
            a.time_cell(),
            a.gap_cell()
        ));
    }
    out
}
