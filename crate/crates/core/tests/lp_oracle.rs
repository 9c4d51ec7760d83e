mod common;

use common::{lp_by_vertices, random_lp, random_row};
use mbsp::lp::{self, LinearProgram, LpStatus, Relation, Row, Simplex};
use mbsp::Rational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check_against_vertices(lp: &LinearProgram<f64>) {
    let sol = lp::solve(lp).expect("small LPs stay within the iteration cap");
    match lp_by_vertices(lp) {
        None => assert_eq!(sol.status, LpStatus::Infeasible, "{lp:?}"),
        Some(z) => {
            assert_eq!(sol.status, LpStatus::Optimal, "{lp:?}");
            assert!(
                (sol.objective_value - z).abs() <= 1e-6,
                "simplex {} vs vertices {z}: {lp:?}",
                sol.objective_value
            );
            assert!(lp.max_violation(&sol.values) <= 1e-7);
        }
    }
}

#[test]
fn random_lps_match_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let nv = rng.gen_range(1..=6);
        let nr = rng.gen_range(0..=6);
        check_against_vertices(&random_lp(&mut rng, nv, nr));
    }
}

#[test]
fn warm_resolve_matches_cold() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let nv = rng.gen_range(1..=6);
        let nr = rng.gen_range(0..=4);
        let lp = random_lp(&mut rng, nv, nr);
        let k = rng.gen_range(1..=4);
        let extra: Vec<Row<f64>> = (0..k).map(|_| random_row(&mut rng, nv)).collect();
        let warm = lp::add_rows_and_resolve(&lp, &extra).unwrap();
        let mut full = lp.clone();
        full.rows.extend(extra.iter().cloned());
        let cold = lp::solve(&full).unwrap();
        assert_eq!(warm.status, cold.status);
        if cold.status == LpStatus::Optimal {
            assert!((warm.objective_value - cold.objective_value).abs() <= 1e-7);
            assert!(full.max_violation(&warm.values) <= 1e-7);
        }
    }
}

#[test]
fn repeated_warm_rounds_match_cold() {
    // packing rows added in several batches, as the cut loop does
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = 12;
        let mut s = Simplex::new(&LinearProgram::unit_box(vec![1.0; n])).unwrap();
        s.solve().unwrap();
        let mut all = LinearProgram::unit_box(vec![1.0; n]);
        for _ in 0..6 {
            let batch: Vec<Row<f64>> = (0..5)
                .map(|_| {
                    let k = rng.gen_range(2..=5);
                    let vars = rand::seq::index::sample(&mut rng, n, k).into_vec();
                    Row::new(
                        vars.iter().map(|&v| (v, 1.0)).collect(),
                        Relation::Le,
                        (k - 1) as f64,
                    )
                })
                .collect();
            let warm = s.add_rows_and_resolve(&batch).unwrap();
            all.rows.extend(batch);
            let cold = lp::solve(&all).unwrap();
            assert!((warm.objective_value - cold.objective_value).abs() <= 1e-7);
        }
    }
}

#[test]
fn exact_rational_agrees_with_f64() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..60 {
        let nv = rng.gen_range(1..=4);
        let nr = rng.gen_range(0..=4);
        let lp = random_lp(&mut rng, nv, nr);
        let to_q = |x: f64| Rational::from_integer((x as i64).into());
        let exact = LinearProgram {
            objective: lp.objective.iter().map(|&c| to_q(c)).collect(),
            rows: lp
                .rows
                .iter()
                .map(|r| {
                    Row::new(
                        r.coeffs.iter().map(|&(j, a)| (j, to_q(a))).collect(),
                        r.relation,
                        to_q(r.rhs),
                    )
                })
                .collect(),
            lower: lp.lower.iter().map(|&x| to_q(x)).collect(),
            upper: lp.upper.iter().map(|&x| to_q(x)).collect(),
        };
        let q = lp::solve(&exact).unwrap();
        let f = lp::solve(&lp).unwrap();
        assert_eq!(q.status, f.status);
        if q.status == LpStatus::Optimal {
            use num_traits::ToPrimitive;
            assert!((q.objective_value.to_f64().unwrap() - f.objective_value).abs() <= 1e-7);
            assert_eq!(
                exact.max_violation(&q.values),
                Rational::from_integer(0.into())
            );
        }
    }
}

#[test]
fn iteration_cap_is_an_error_not_infeasible() {
    // the error type is distinct from an infeasible status
    let e = lp::LpError::IterationLimit(10);
    assert!(e.to_string().contains("iteration"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solve_is_deterministic_and_feasible(seed in any::<u64>(), nv in 1usize..=6, nr in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = random_lp(&mut rng, nv, nr);
        let a = lp::solve(&lp).unwrap();
        let b = lp::solve(&lp).unwrap();
        prop_assert_eq!(&a, &b);
        if a.status == LpStatus::Optimal {
            prop_assert!(lp.max_violation(&a.values) <= 1e-7);
            prop_assert!((lp.objective_value(&a.values) - a.objective_value).abs() <= 1e-9);
        }
    }
}
