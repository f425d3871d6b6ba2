use monosec::exactalg::Rational;
use monosec::geometry::{
    build_chart, condition_polynomial, moment_row, sample_instance, secant_to_osculating_limit_check, ChartEntry,
    FlagMode, SamplingConfig,
};
use monosec::schubert::{enumerate_necklaces, FlagType, Permutation, SchubertProblem};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
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

fn params(a: usize, n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set((-30i64..=30, 1i64..=4), n - a)
        .prop_map(|s| s.into_iter().map(|(p, d)| q(p, d)).collect::<Vec<_>>())
        .prop_filter("distinct values", |v: &Vec<Rational>| {
            let mut w = v.clone();
            w.sort();
            w.dedup();
            w.len() == v.len()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn condition_polynomial_is_linear_in_each_row(
        (a, ts) in prop_oneof![Just(2usize), Just(3usize)].prop_flat_map(|a| (Just(a), params(a, 5))),
        c in (1i64..=9, 1i64..=5),
        row in 0usize..3,
    ) {
        let ft = FlagType::new(vec![2, 3], 5).unwrap();
        let chart = build_chart(&ft);
        let rows: Vec<Vec<Rational>> = ts.iter().map(|t| moment_row(t, 5)).collect();
        let f = condition_polynomial(&chart, a, &rows).unwrap();
        let c = q(c.0, c.1);
        let r = row % rows.len();
        let mut scaled = rows.clone();
        for v in scaled[r].iter_mut() {
            *v = &*v * &c;
        }
        prop_assert_eq!(condition_polynomial(&chart, a, &scaled).unwrap(), f.scale(&c));
        if rows.len() > 1 {
            let mut swapped = rows.clone();
            swapped.swap(0, rows.len() - 1);
            prop_assert_eq!(condition_polynomial(&chart, a, &swapped).unwrap(), -f.clone());
        }
    }
}

#[test]
fn degree_bound_on_chart_rows() {
    for (alpha, n) in [(vec![2, 3], 5), (vec![2], 4), (vec![1, 3], 5), (vec![2, 3], 6)] {
        let ft = FlagType::new(alpha.clone(), n).unwrap();
        let chart = build_chart(&ft);
        for &a in &alpha {
            let rows: Vec<Vec<Rational>> = (0..n - a).map(|k| moment_row(&q(k as i64 + 1, 1), n)).collect();
            let f = condition_polynomial(&chart, a, &rows).unwrap();
            let variable_rows = chart.entries()[..a]
                .iter()
                .filter(|row| row.iter().any(|e| matches!(e, ChartEntry::Var(_))))
                .count();
            assert!(f.total_degree().unwrap() as usize <= variable_rows, "{alpha:?}, a = {a}");
        }
    }
    // the two equation shapes of Fl(2,3;5)
    let chart = build_chart(&FlagType::new(vec![2, 3], 5).unwrap());
    let three: Vec<Vec<Rational>> = (1..=3).map(|t| moment_row(&q(t, 1), 5)).collect();
    let two: Vec<Vec<Rational>> = (1..=2).map(|t| moment_row(&q(t, 1), 5)).collect();
    assert!(condition_polynomial(&chart, 2, &three).unwrap().total_degree().unwrap() <= 2);
    assert!(condition_polynomial(&chart, 3, &two).unwrap().total_degree().unwrap() <= 3);
}

#[test]
fn secant_flags_degenerate_to_osculating_flags() {
    let points = [q(0, 1), q(1, 1), q(-1, 2)];
    for (alpha, n) in [(vec![2, 3], 5), (vec![2], 4)] {
        let ft = FlagType::new(alpha.clone(), n).unwrap();
        for &a in &alpha {
            for s in &points {
                assert!(secant_to_osculating_limit_check(a, &ft, s).unwrap(), "{alpha:?}, a = {a}, s = {s}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_groups_are_disjoint_and_increasing(seed in any::<u64>(), which in 0usize..8) {
        let p = fl235();
        let nk = enumerate_necklaces(&p).unwrap()[which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = sample_instance(&p, &nk, FlagMode::Secant, &mut rng, &SamplingConfig::default()).unwrap();
        let beads: Vec<usize> = inst.groups.iter().map(|g| g.descent).collect();
        prop_assert_eq!(&beads[..], nk.beads());
        let all: Vec<&Rational> = inst.groups.iter().flat_map(|g| g.params.iter()).collect();
        prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
        for g in &inst.groups {
            prop_assert_eq!(g.params.len(), 5 - g.descent);
        }
        let mut conditions: Vec<usize> = inst.groups.iter().map(|g| g.condition).collect();
        conditions.sort_unstable();
        prop_assert_eq!(conditions, (0..8).collect::<Vec<_>>());
    }
}

#[test]
fn osculating_instances_have_one_point_per_group() {
    let p = fl235();
    let nk = enumerate_necklaces(&p).unwrap()[0].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let inst = sample_instance(&p, &nk, FlagMode::Osculating, &mut rng, &SamplingConfig::default()).unwrap();
    assert!(inst.groups.iter().all(|g| g.params.len() == 1));
    let rows = inst.groups[0].rows(FlagMode::Osculating, 5).unwrap();
    assert_eq!(rows.len(), 3);
}
