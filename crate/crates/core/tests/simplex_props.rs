mod common;

use common::rel_diff;
use lpduet::model::{
    build_model, constraint_residuals, to_big_m_form, to_equality_form, Constraint, LpModel, DEFAULT_FEASIBILITY_TOL,
};
use lpduet::oracle::{brute_force_optimum, enumerate_basic_solutions};
use lpduet::simplex::{init_tableau, solve_simplex, solve_simplex_inspected, SimplexOptions, Tableau};
use lpduet::Status;
use rand::seq::SliceRandom;
use rand::Rng;

fn random_instances(stream: u64, count: usize) -> Vec<LpModel> {
    let mut rng = common::rng(stream);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=6);
            common::random_feasible_bounded(&mut rng, n, m)
        })
        .collect()
}

#[test]
fn pivots_preserve_invariants() {
    let opts = SimplexOptions::default();
    for model in random_instances(20, 100) {
        let mut prev = init_tableau(&to_big_m_form(&model)).obj_value;
        let mut last: Option<Tableau> = None;
        let sol = solve_simplex_inspected(&model, &opts, |e, t| {
            assert!(e.objective >= prev, "objective fell from {prev} to {}", e.objective);
            prev = e.objective;
            assert!(
                t.basis_is_identity(1e-9),
                "basis lost identity at pivot {}",
                e.iteration
            );
            assert!(
                t.rhs.iter().all(|&v| v >= -1e-9),
                "negative rhs at pivot {}",
                e.iteration
            );
            last = Some(t.clone());
        })
        .unwrap();
        assert_eq!(sol.status, Status::Optimal, "{model:?}");

        let last = last.unwrap_or_else(|| init_tableau(&to_big_m_form(&model)));
        assert!(
            last.obj_row.iter().all(|z| !z.is_negative(opts.pivot_tol)),
            "not dual feasible"
        );
        assert!(
            last.artificial_level() <= 1e-6,
            "artificial left at {}",
            last.artificial_level()
        );
        let r = constraint_residuals(&model, &sol.x, DEFAULT_FEASIBILITY_TOL).unwrap();
        assert!(r.feasible, "{model:?} at {:?}", sol.x);
    }
}

#[test]
fn simplex_matches_oracle() {
    for model in random_instances(21, 100) {
        let sx = solve_simplex(&model, &SimplexOptions::default()).unwrap();
        let oracle = brute_force_optimum(&to_equality_form(&model)).unwrap();
        assert_eq!(sx.status, Status::Optimal);
        assert_eq!(oracle.status, Status::Optimal);
        assert!(
            rel_diff(sx.objective, oracle.objective) <= 1e-7,
            "simplex {} vs oracle {} on {model:?}",
            sx.objective,
            oracle.objective
        );
    }
}

#[test]
fn simplex_point_is_an_enumerated_vertex() {
    for model in random_instances(22, 30) {
        let sx = solve_simplex(&model, &SimplexOptions::default()).unwrap();
        let form = to_equality_form(&model);
        let found = enumerate_basic_solutions(&form)
            .unwrap()
            .filter(|b| b.feasible)
            .any(|b| rel_diff(b.objective, sx.objective) <= 1e-7);
        assert!(found, "{model:?}");
    }
}

#[test]
fn oracle_is_permutation_invariant_and_deterministic() {
    let mut rng = common::rng(23);
    for model in random_instances(24, 30) {
        let n = model.num_variables();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let permuted = build_model(
            model.sense(),
            perm.iter().map(|&j| model.variable_names()[j].clone()).collect(),
            perm.iter().map(|&j| model.objective()[j]).collect(),
            model
                .constraints()
                .iter()
                .map(|c| {
                    Constraint::new(
                        c.name.clone(),
                        perm.iter().map(|&j| c.coefficients[j]).collect(),
                        c.relation,
                        c.rhs,
                    )
                })
                .collect(),
        )
        .unwrap();
        let form = to_equality_form(&model);
        let a = brute_force_optimum(&form).unwrap();
        let b = brute_force_optimum(&to_equality_form(&permuted)).unwrap();
        assert!(rel_diff(a.objective, b.objective) <= 1e-9);

        let first: Vec<_> = enumerate_basic_solutions(&form).unwrap().collect();
        let second: Vec<_> = enumerate_basic_solutions(&form).unwrap().collect();
        assert_eq!(first, second);
    }
}

#[test]
fn detects_infeasibility() {
    let mut rng = common::rng(25);
    for _ in 0..20 {
        let model = common::random_infeasible(&mut rng);
        let sol = solve_simplex(&model, &SimplexOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Infeasible, "{model:?}");
        assert!(sol.x.is_empty());
    }
}

#[test]
fn detects_unboundedness() {
    let mut rng = common::rng(26);
    for _ in 0..10 {
        let model = common::random_unbounded(&mut rng);
        let sol = solve_simplex(&model, &SimplexOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Unbounded, "{model:?}");
    }
}

#[test]
fn bland_rule_gives_the_same_optimum() {
    let bland = SimplexOptions {
        anti_cycling: lpduet::simplex::PivotRule::Bland,
        ..SimplexOptions::default()
    };
    for model in random_instances(27, 50) {
        let a = solve_simplex(&model, &SimplexOptions::default()).unwrap();
        let b = solve_simplex(&model, &bland).unwrap();
        assert!(rel_diff(a.objective, b.objective) <= 1e-7);
    }
}
