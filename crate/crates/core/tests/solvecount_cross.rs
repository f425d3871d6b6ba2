use monosec::exactalg::{sturm_count, GroebnerBasis, MonomialOrder, UPoly};
use monosec::geometry::FlagMode;
use monosec::schubert::{FlagType, Necklace, Permutation, SchubertProblem};
use monosec::solvecount::{
    build_system, certify, eliminate_with, instance_seed, solve_instance, EliminationEngine, Solver, Status,
};

mod common;
use common::{q, refining_grid_count};

fn four_lines() -> SchubertProblem {
    SchubertProblem::new(
        FlagType::new(vec![2], 4).unwrap(),
        vec![(Permutation::new(vec![1, 3, 2, 4]).unwrap(), 4)],
    )
}

fn point_problem() -> SchubertProblem {
    SchubertProblem::new(FlagType::new(vec![1], 2).unwrap(), vec![(Permutation::new(vec![2, 1]).unwrap(), 1)])
}

fn fl235() -> SchubertProblem {
    SchubertProblem::new(
        FlagType::new(vec![2, 3], 5).unwrap(),
        vec![
            (Permutation::new(vec![1, 3, 2, 4, 5]).unwrap(), 4),
            (Permutation::new(vec![1, 2, 4, 3, 5]).unwrap(), 4),
        ],
    )
}

#[test]
fn point_problem_matches_grid() {
    let solver = Solver::new(point_problem(), "point").unwrap();
    let nk: Necklace = "1".parse().unwrap();
    for index in 0..10 {
        let cert = solver.certify_instance(&nk, FlagMode::Secant, instance_seed(1, &nk, index)).unwrap();
        assert_eq!(cert.status, Status::Accepted);
        assert_eq!(sturm_count(&cert.eliminant).unwrap(), refining_grid_count(&cert.eliminant));
    }
}

#[test]
fn four_lines_cross_validation() {
    let p = four_lines();
    let solver = Solver::new(p.clone(), "four").unwrap();
    let nk: Necklace = "2222".parse().unwrap();
    for index in 0..25 {
        let seed = instance_seed(3, &nk, index);
        let inst = solver.sample(&nk, FlagMode::Secant, seed).unwrap();
        let sys = build_system(&p, &inst).unwrap();
        let keep = sys.nvars - 1;

        let exact = eliminate_with(&sys, keep, EliminationEngine::Lex).unwrap();
        let modular = eliminate_with(&sys, keep, EliminationEngine::Modular).unwrap();
        assert_eq!(exact, modular);

        let order: Vec<usize> = (0..sys.nvars).filter(|&v| v != keep).chain([keep]).collect();
        let gb = GroebnerBasis::compute(&sys.equations, MonomialOrder::Lex, &order).unwrap();
        for f in &sys.equations {
            assert!(gb.normal_form(f).unwrap().is_zero());
        }

        let cert = certify(&exact, 2);
        if cert.status == Status::Accepted {
            assert_eq!(sturm_count(&exact).unwrap(), refining_grid_count(&exact));
            assert_eq!(refining_grid_count(&exact), 2);
        }
    }
}

#[test]
fn grid_oracle_sees_close_roots() {
    let p = &UPoly::linear_root(q(1, 1)) * &UPoly::linear_root(q(1001, 1000));
    assert_eq!(refining_grid_count(&p), 2);
}

#[test]
fn instances_are_deterministic() {
    let p = four_lines();
    let nk: Necklace = "2222".parse().unwrap();
    let a = solve_instance(&p, &nk, FlagMode::Osculating, 99, 4).unwrap();
    let b = solve_instance(&p, &nk, FlagMode::Osculating, 99, 4).unwrap();
    assert!(a.same_outcome(&b));
    assert_eq!(a.num_real, Some(2));
}

#[test]
fn one_monotone_flagship_instance() {
    let p = fl235();
    let nk: Necklace = "22223333".parse().unwrap();
    let r = solve_instance(&p, &nk, FlagMode::Secant, instance_seed(0, &nk, 0), 0).unwrap();
    assert_eq!(r.status, Status::Accepted);
    assert_eq!(r.num_real, Some(12));
    assert_eq!(r.eliminant_degree, Some(12));
}
