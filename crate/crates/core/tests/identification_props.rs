mod common;

use common::*;
use proptest::prelude::*;
use voi::{
    bayes_split, equal_up_to_affine, expected_value, extract_subdivision, generate, ratio,
    reconstruct, reconstruct_value, satisfies_cardinal, satisfies_ordinal, value_of_experiment,
    DecisionProblem, EdgeCoverage,
};

fn is_affine(dp: &DecisionProblem) -> bool {
    dp.undominated_actions().len() == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_data_is_sound((dp, mu) in problem_and_prior()) {
        let data = generate(&dp, &mu, EdgeCoverage::SpanningTree).unwrap();
        prop_assert!(satisfies_ordinal(&dp, &data));
        prop_assert!(satisfies_cardinal(&dp, &data));
        for s in &data.ordinal {
            prop_assert_eq!(s.lhs.mean(), &mu);
            prop_assert_eq!(s.rhs.mean(), &mu);
        }
        for d in &data.cardinal {
            prop_assert_eq!(d.lhs.mean(), &mu);
            prop_assert!(d.zeta > ratio(0, 1));
        }
    }

    #[test]
    fn ordinal_data_identifies_the_subdivision(
        (dp, rival, mu) in (2usize..=4).prop_flat_map(|n| (problem(n, 2..=8), problem(n, 2..=8), interior_belief(n)))
    ) {
        let data = generate(&dp, &mu, EdgeCoverage::SpanningTree).unwrap();
        let sub = dp.subdivision().unwrap();
        prop_assert!(extract_subdivision(&data).unwrap().same_geometry(&sub));
        let same = rival.subdivision().unwrap().same_geometry(&sub);
        prop_assert_eq!(satisfies_ordinal(&rival, &data), same);
    }

    #[test]
    fn ordinal_data_cannot_fix_the_scale((dp, mu) in problem_and_prior(), k in 1i64..=9, d in 1i64..=9) {
        let psi = ratio(k, d);
        let data = generate(&dp, &mu, EdgeCoverage::SpanningTree).unwrap();
        let scaled = dp.scale(&psi).unwrap();
        prop_assert!(satisfies_ordinal(&scaled, &data));
        if !is_affine(&dp) && psi != ratio(1, 1) {
            let v = dp.value_function().unwrap();
            prop_assert!(equal_up_to_affine(&v, &scaled.value_function().unwrap()).is_none());
        }
    }

    #[test]
    fn full_data_recovers_the_value(
        (dp, mu, pis) in (2usize..=4).prop_flat_map(|n| (
            problem(n, 2..=8),
            interior_belief(n),
            prop::collection::vec(experiment(n), 5),
        ))
    ) {
        let data = generate(&dp, &mu, EdgeCoverage::SpanningTree).unwrap();
        let v = reconstruct_value(&data).unwrap();
        prop_assert!(equal_up_to_affine(&dp.value_function().unwrap(), &v).is_some());
        for pi in &pis {
            let f = bayes_split(&mu, pi).unwrap();
            let priced: voi::Rational = f.atoms().iter().map(|a| &a.prob * v.eval(&a.belief)).sum::<voi::Rational>() - v.eval(&mu);
            prop_assert_eq!(priced, value_of_experiment(&dp, &mu, pi).unwrap());
            prop_assert_eq!(expected_value(&dp, &f) - dp.value_at(&mu), value_of_experiment(&dp, &mu, pi).unwrap());
        }
    }

    #[test]
    fn redundant_edges_are_consistent((dp, mu) in problem_and_prior()) {
        let data = generate(&dp, &mu, EdgeCoverage::All).unwrap();
        let sub = dp.subdivision().unwrap();
        let r = reconstruct(&data).unwrap();
        prop_assert_eq!(r.tree_edges.len() + r.checked_edges.len(), sub.adjacency().len());
        prop_assert!(equal_up_to_affine(&dp.value_function().unwrap(), &r.value).is_some());
    }
}
