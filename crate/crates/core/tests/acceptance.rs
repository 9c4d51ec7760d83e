//! Acceptance checks, one line per criterion. Run with
//! `cargo test --release --test acceptance`.

mod common;

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{
    lp_by_vertices, mask_to_set, odd_negative_cycles, random_graph, random_lp, random_row,
    suite_graph,
};
use mbsp::bc::{
    self, branch, initial_formulation, solve, BranchRule, Branching, Cut, Fixing, SearchNode,
    SolveParams, SolveStatus,
};
use mbsp::ggmz::{ggmz, StableSetParams};
use mbsp::grasp::{grasp, GraspParams};
use mbsp::instances::{balanced_subsets, brute_force, generate, generate_balanced, grid};
use mbsp::lp::{self, LpStatus, Row};
use mbsp::spanning::TreeStrategy;
use mbsp::{Bipartition, Side, SignedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEPARATION_TOL: f64 = 1e-6;
const LP_VERTEX_TOL: f64 = 1e-6;
const LP_WARM_TOL: f64 = 1e-7;
const SCALE_LIMIT: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;

fn modes() -> [Branching; 2] {
    [Branching::Cycle, Branching::Standard]
}

fn bc_params(mode: Branching) -> SolveParams {
    SolveParams {
        branching: BranchRule {
            mode,
            lifted_cycles: true,
        },
        ..Default::default()
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ss_params(seed: u64) -> StableSetParams {
    StableSetParams {
        max_stall_iterations: 30,
        time_limit: Duration::from_secs(30),
        seed,
        ..Default::default()
    }
}

fn criterion_1() -> Outcome {
    for i in 0..200 {
        let g = suite_graph(i, 8, 14);
        let (opt, _) = brute_force(&g);
        for mode in modes() {
            let r = solve(&g, &bc_params(mode)).map_err(|e| format!("instance {i}: {e}"))?;
            ensure(
                r.status == SolveStatus::Optimal && r.lower_bound == opt && g.is_feasible(&r.best),
                || {
                    format!(
                        "instance {i} {mode}: solver {} vs brute force {opt}",
                        r.lower_bound
                    )
                },
            )?;
        }
    }
    Ok("200 instances, both branching modes agree with brute force".into())
}

fn criterion_2() -> Outcome {
    for k in 0..50u64 {
        let n = 10 + (k as usize) % 51;
        let density = [0.1, 0.3, 0.6, 0.9][k as usize % 4];
        let g = generate_balanced(n, density, 500 + k);
        for t in TreeStrategy::ALL {
            let p = ggmz(&g, t, &ss_params(k));
            ensure(p.len() == n && g.is_feasible(&p), || {
                format!("n={n} seed={} {t}: {}", 500 + k, p.len())
            })?;
        }
    }
    Ok("50 balanced instances, all 7 strategies return n".into())
}

/// Independent feasibility test: every edge inside the selection must agree
/// with the side assignment.
fn labels_feasible(g: &SignedGraph, labels: &[Option<Side>]) -> bool {
    g.edges().iter().all(|e| match (labels[e.u], labels[e.v]) {
        (Some(a), Some(b)) => (a == b) != e.sign.is_negative(),
        _ => true,
    })
}

fn complete(g: &SignedGraph, labels: &mut [Option<Side>], prefer: Side) {
    for v in 0..g.n() {
        if labels[v].is_some() {
            continue;
        }
        for s in [prefer, prefer.other()] {
            labels[v] = Some(s);
            if labels_feasible(g, labels) {
                break;
            }
            labels[v] = None;
        }
    }
}

fn options(g: &SignedGraph, labels: &[Option<Side>]) -> Vec<(usize, Side)> {
    let mut out = Vec::new();
    let mut trial = labels.to_vec();
    for v in (0..g.n()).filter(|&v| labels[v].is_none()) {
        for s in [Side::One, Side::Two] {
            trial[v] = Some(s);
            if labels_feasible(g, &trial) {
                out.push((v, s));
            }
        }
        trial[v] = None;
    }
    out
}

/// Re-scans both neighbourhoods: remove one (two) vertices from a side,
/// insert one (two) feasible vertices, complete greedily.
fn has_larger_neighbor(g: &SignedGraph, p: &Bipartition) -> bool {
    let labels = p.labels(g.n()).unwrap();
    let size = p.len();
    if !options(g, &labels).is_empty() {
        return true;
    }
    let count = |l: &[Option<Side>]| l.iter().filter(|x| x.is_some()).count();
    for w in [Side::One, Side::Two] {
        let members: Vec<usize> = (0..g.n()).filter(|&v| labels[v] == Some(w)).collect();
        for &i in &members {
            let mut base = labels.clone();
            base[i] = None;
            for (j, s) in options(g, &base) {
                let mut c = base.clone();
                c[j] = Some(s);
                complete(g, &mut c, w);
                if count(&c) > size {
                    return true;
                }
            }
        }
        for (a, &i1) in members.iter().enumerate() {
            for &i2 in &members[a + 1..] {
                let mut base = labels.clone();
                base[i1] = None;
                base[i2] = None;
                for (j1, s1) in options(g, &base) {
                    let mut first = base.clone();
                    first[j1] = Some(s1);
                    for (j2, s2) in options(g, &first) {
                        let mut c = first.clone();
                        c[j2] = Some(s2);
                        complete(g, &mut c, w);
                        if count(&c) > size {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut oracle = 0;
    for k in 0..500u64 {
        let g = if k % 2 == 0 {
            let n = rng.gen_range(1..=30);
            {
                let (pe, pp) = (rng.gen_range(0.05..0.95), rng.gen_range(0.0..0.6));
                random_graph(&mut rng, n, pe, pp)
            }
        } else {
            let spec = common::suite_spec(k as usize, 4, 30);
            generate(&spec).unwrap()
        };
        let opt = (g.n() <= 14).then(|| brute_force(&g).0);
        oracle += opt.is_some() as usize;
        let mut outputs: Vec<(String, Bipartition)> = TreeStrategy::ALL
            .iter()
            .map(|&t| (format!("ggmz-{t}"), ggmz(&g, t, &ss_params(k))))
            .collect();
        let gp = grasp(
            &g,
            &GraspParams {
                max_iterations: 20,
                seed: k,
                ..Default::default()
            },
        );
        ensure(!has_larger_neighbor(&g, &gp), || {
            format!("instance {k}: grasp output has a larger neighbour")
        })?;
        outputs.push(("grasp".into(), gp));
        for (name, p) in outputs {
            let labels = p
                .labels(g.n())
                .ok_or_else(|| format!("instance {k} {name}: vertex out of range"))?;
            ensure(labels_feasible(&g, &labels), || {
                format!("instance {k} {name}: infeasible")
            })?;
            if let Some(opt) = opt {
                ensure(p.len() <= opt, || {
                    format!("instance {k} {name}: {} above optimum {opt}", p.len())
                })?;
            }
        }
    }
    Ok(format!(
        "500 instances feasible, {oracle} checked against brute force, grasp locally optimal"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut violated = 0;
    for k in 0..50 {
        let n = rng.gen_range(5..=10);
        let g = {
            let (pe, pp) = (rng.gen_range(0.3..0.9), rng.gen_range(0.0..0.3));
            random_graph(&mut rng, n, pe, pp)
        };
        let cycles = odd_negative_cycles(&g);
        for _ in 0..20 {
            let y: Vec<f64> = (0..n)
                .map(|_| rng.gen_range(1..=15) as f64 / 16.0)
                .collect();
            let best = cycles
                .iter()
                .map(|c| c.iter().map(|&v| y[v]).sum::<f64>() - (c.len() as f64 - 1.0))
                .fold(f64::NEG_INFINITY, f64::max);
            let found = bc::separate_odd_negative_cycle(&g, &y);
            let top = found
                .iter()
                .map(|c| c.violation(&y))
                .fold(f64::NEG_INFINITY, f64::max);
            let expect = best > bc::VIOLATION_TOL;
            ensure(expect == !found.is_empty(), || {
                format!(
                    "instance {k}: oracle max {best}, separation found {}",
                    found.len()
                )
            })?;
            if expect {
                violated += 1;
                ensure((top - best).abs() <= SEPARATION_TOL, || {
                    format!("instance {k}: found {top}, oracle {best}")
                })?;
            }
            for c in &found {
                let mut verts: Vec<usize> = c.support().collect();
                verts.sort_unstable();
                ensure(cycles.contains(&verts), || {
                    format!("instance {k}: {verts:?} is not an odd negative cycle")
                })?;
            }
        }
    }
    Ok(format!(
        "1000 points, {violated} with a violated cycle, all maxima within {SEPARATION_TOL:e}"
    ))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for i in 0..100 {
        let g = suite_graph(i, 6, 12);
        let subsets: Vec<Vec<bool>> = balanced_subsets(&g)
            .into_iter()
            .map(|m| mask_to_set(m, g.n()))
            .collect();
        for mode in modes() {
            let params = SolveParams {
                collect_cuts: true,
                ..bc_params(mode)
            };
            let r = solve(&g, &params).map_err(|e| e.to_string())?;
            for cut in r
                .emitted_cuts
                .iter()
                .chain(initial_formulation(&g).cuts().iter())
            {
                checked += 1;
                ensure(subsets.iter().all(|s| cut.holds_for(s)), || {
                    format!("instance {i}: invalid {} {cut:?}", cut.kind)
                })?;
            }
        }
    }
    Ok(format!("{checked} cuts valid on every balanced subset"))
}

fn check_partition(
    g: &SignedGraph,
    parent: &SearchNode,
    children: &[SearchNode],
    ctx: &str,
) -> Result<(), String> {
    for mask in balanced_subsets(g) {
        let s = mask_to_set(mask, g.n());
        let inside = children.iter().filter(|c| c.admits(&s)).count();
        let expected = parent.admits(&s) as usize;
        ensure(inside == expected, || {
            format!("{ctx}: set {mask:#b} in {inside} children, parent {expected}")
        })?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = 0;
    let mut three_way = 0;
    // synthetic binding cycles with random fixings around them
    for k in 0..300 {
        let n = rng.gen_range(3..=8);
        let g = {
            let (pe, pp) = (rng.gen_range(0.4..1.0), rng.gen_range(0.0..0.3));
            random_graph(&mut rng, n, pe, pp)
        };
        let cycles = odd_negative_cycles(&g);
        if cycles.is_empty() {
            continue;
        }
        let cyc = cycles[rng.gen_range(0..cycles.len())].clone();
        let ones = rng.gen_range(0..=cyc.len() - 2);
        let mut y = vec![0.0; n];
        let mut node = SearchNode::root(n);
        let rest = (cyc.len() - ones) as f64;
        for (idx, &v) in cyc.iter().enumerate() {
            if idx < ones {
                y[v] = 1.0;
                if rng.gen_bool(0.5) {
                    node.fixings[v] = Fixing::One;
                }
            } else {
                y[v] = (rest - 1.0) / rest;
            }
        }
        for v in (0..n).filter(|v| !cyc.contains(v)) {
            y[v] = [0.0, 0.5, 1.0][rng.gen_range(0..3)];
            if y[v] != 0.5 && rng.gen_bool(0.5) {
                node.fixings[v] = if y[v] == 1.0 {
                    Fixing::One
                } else {
                    Fixing::Zero
                };
            }
        }
        let active = vec![Cut::cycle(cyc)];
        let children = branch(&node, &active, &y, n as f64, BranchRule::default())
            .map_err(|e| e.to_string())?;
        three_way += (children.len() == 3) as usize;
        check_partition(&g, &node, &children, &format!("synthetic {k}"))?;
        for grand in &children {
            // branch once more inside a child to cover inherited rows, with
            // y moved onto the child's fixings as its LP would
            let y2: Vec<f64> = y
                .iter()
                .zip(&grand.fixings)
                .map(|(&v, f)| match f {
                    Fixing::Free => v,
                    Fixing::Zero => 0.0,
                    Fixing::One => 1.0,
                })
                .collect();
            let children2 = branch(
                grand,
                &active,
                &y2,
                n as f64,
                BranchRule {
                    mode: Branching::Standard,
                    lifted_cycles: false,
                },
            );
            if let Ok(c2) = children2 {
                check_partition(&g, grand, &c2, &format!("synthetic {k} nested"))?;
            }
        }
        cases += 1;
    }
    // LP points from the initial formulation
    for i in 0..80 {
        let g = suite_graph(i, 5, 8);
        let form = initial_formulation(&g);
        let sol = lp::solve(&form.linear_program(g.n())).map_err(|e| e.to_string())?;
        if sol.status != LpStatus::Optimal || bc::is_integral(&sol.values) {
            continue;
        }
        let node = SearchNode::root(g.n());
        for mode in modes() {
            let rule = BranchRule {
                mode,
                lifted_cycles: true,
            };
            let children = branch(&node, &form.cuts(), &sol.values, sol.objective_value, rule)
                .map_err(|e| e.to_string())?;
            three_way += (children.len() == 3) as usize;
            check_partition(&g, &node, &children, &format!("lp {i} {mode}"))?;
            cases += 1;
        }
    }
    Ok(format!(
        "{cases} branchings ({three_way} three-way) partition the balanced sets"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_vertex: f64 = 0.0;
    let mut worst_warm: f64 = 0.0;
    for k in 0..100 {
        let nv = rng.gen_range(1..=6);
        let nr = rng.gen_range(0..=6);
        let lp_ = random_lp(&mut rng, nv, nr);
        let sol = lp::solve(&lp_).map_err(|e| format!("lp {k}: {e}"))?;
        match lp_by_vertices(&lp_) {
            None => ensure(sol.status == LpStatus::Infeasible, || {
                format!("lp {k}: expected infeasible")
            })?,
            Some(z) => {
                ensure(sol.status == LpStatus::Optimal, || {
                    format!("lp {k}: expected optimum {z}")
                })?;
                worst_vertex = worst_vertex.max((sol.objective_value - z).abs());
            }
        }
        let extra_count = rng.gen_range(1..=3);
        let extra: Vec<Row<f64>> = (0..extra_count).map(|_| random_row(&mut rng, nv)).collect();
        let warm = lp::add_rows_and_resolve(&lp_, &extra).map_err(|e| format!("lp {k}: {e}"))?;
        let mut full = lp_.clone();
        full.rows.extend(extra);
        let cold = lp::solve(&full).map_err(|e| format!("lp {k}: {e}"))?;
        ensure(warm.status == cold.status, || {
            format!("lp {k}: warm {:?} vs cold {:?}", warm.status, cold.status)
        })?;
        if cold.status == LpStatus::Optimal {
            worst_warm = worst_warm.max((warm.objective_value - cold.objective_value).abs());
        }
    }
    ensure(worst_vertex <= LP_VERTEX_TOL, || {
        format!("vertex gap {worst_vertex:e}")
    })?;
    ensure(worst_warm <= LP_WARM_TOL, || {
        format!("warm gap {worst_warm:e}")
    })?;
    Ok(format!(
        "100 LPs, max vertex gap {worst_vertex:.1e}, max warm gap {worst_warm:.1e}"
    ))
}

struct ScaleRun {
    optimal: Vec<[usize; 2]>,
    nodes: [Vec<usize>; 2],
    slowest: f64,
}

fn scale_suite() -> Result<ScaleRun, String> {
    let mut run = ScaleRun {
        optimal: Vec::new(),
        nodes: [Vec::new(), Vec::new()],
        slowest: 0.0,
    };
    for spec in grid(2, 50, 3) {
        let g = generate(&spec).map_err(|e| e.to_string())?;
        let mut opt = [0; 2];
        for (m, mode) in modes().into_iter().enumerate() {
            let params = SolveParams {
                time_limit: SCALE_LIMIT,
                ..bc_params(mode)
            };
            let t = Instant::now();
            let r = solve(&g, &params).map_err(|e| format!("{}: {e}", spec.name()))?;
            let secs = t.elapsed().as_secs_f64();
            run.slowest = run.slowest.max(secs);
            ensure(
                r.status == SolveStatus::Optimal && secs <= SCALE_LIMIT.as_secs_f64(),
                || {
                    format!(
                        "{} {mode}: {} after {secs:.1}s",
                        spec.name(),
                        r.status.token()
                    )
                },
            )?;
            opt[m] = r.lower_bound;
            run.nodes[m].push(r.stats.nodes);
        }
        run.optimal.push(opt);
    }
    Ok(run)
}

fn criterion_8(run: &Result<ScaleRun, String>) -> Outcome {
    let run = run.as_ref().map_err(Clone::clone)?;
    Ok(format!(
        "{} instances optimal in both modes, slowest {:.2}s",
        run.optimal.len(),
        run.slowest
    ))
}

fn criterion_9(run: &Result<ScaleRun, String>) -> Outcome {
    let run = run
        .as_ref()
        .map_err(|e| format!("scale suite failed: {e}"))?;
    ensure(run.optimal.iter().all(|o| o[0] == o[1]), || {
        "branching modes disagree on an optimum".into()
    })?;
    let mean = |v: &[usize]| v.iter().sum::<usize>() as f64 / v.len().max(1) as f64;
    Ok(format!(
        "optima agree; mean nodes cycle {:.1}, standard {:.1}",
        mean(&run.nodes[0]),
        mean(&run.nodes[1])
    ))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let inst = dir.path().join("inst");
    let bin = env!("CARGO_BIN_EXE_mbsp");
    let gen = Command::new(bin)
        .args([
            "generate", "--group", "2", "--n", "14", "--grid", "--count", "1", "--out",
        ])
        .arg(&inst)
        .env("MBSP_SEED", "5")
        .status()
        .map_err(|e| e.to_string())?;
    ensure(gen.success(), || "generate failed".into())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}.csv"));
        let status = Command::new(bin)
            .arg("bench")
            .arg(&inst)
            .args([
                "--method",
                "ggmz,grasp,bc",
                "--tree",
                "all",
                "--branching",
                "both",
                "--seed",
                "9",
                "--no-time",
                "--out",
            ])
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || "bench failed".into())?;
        outputs.push(fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "CSV outputs differ".into())?;
    Ok(format!(
        "two bench runs gave identical {}-byte CSVs",
        outputs[0].len()
    ))
}

fn report(id: usize, outcome: Outcome) -> bool {
    match outcome {
        Ok(msg) => {
            println!("criterion {id} PASS: {msg}");
            true
        }
        Err(msg) => {
            println!("criterion {id} FAIL: {msg}");
            false
        }
    }
}

fn main() {
    let mut ok = true;
    ok &= report(1, criterion_1());
    ok &= report(2, criterion_2());
    ok &= report(3, criterion_3());
    ok &= report(4, criterion_4());
    ok &= report(5, criterion_5());
    ok &= report(6, criterion_6());
    ok &= report(7, criterion_7());
    let scale = scale_suite();
    ok &= report(8, criterion_8(&scale));
    ok &= report(9, criterion_9(&scale));
    ok &= report(10, criterion_10());
    if !ok {
        std::process::exit(1);
    }
}
