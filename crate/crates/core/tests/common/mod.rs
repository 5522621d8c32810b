//! Proptest strategies shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use voi::{ratio, Belief, DecisionProblem, Experiment, Game, Garbling, Rational};

pub fn rational(max_den: i64) -> impl Strategy<Value = Rational> {
    (-max_den..=max_den, 1..=max_den).prop_map(|(p, q)| ratio(p, q))
}

/// Normalizes positive integer weights into a belief.
pub fn weights_to_belief(w: &[i64]) -> Belief {
    let total: i64 = w.iter().sum();
    Belief::new(w.iter().map(|&x| ratio(x, total)).collect()).unwrap()
}

pub fn interior_belief(n: usize) -> impl Strategy<Value = Belief> {
    prop::collection::vec(1i64..=12, n).prop_map(|w| weights_to_belief(&w))
}

fn stochastic_rows(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(
        prop::collection::vec(0i64..=6, cols)
            .prop_filter("positive row", |r| r.iter().sum::<i64>() > 0),
        rows,
    )
    .prop_map(|rows| {
        rows.iter()
            .map(|r| {
                let t: i64 = r.iter().sum();
                r.iter().map(|&x| ratio(x, t)).collect()
            })
            .collect()
    })
}

pub fn experiment(n: usize) -> impl Strategy<Value = Experiment> {
    (1usize..=4).prop_flat_map(move |k| {
        stochastic_rows(n, k).prop_map(|m| Experiment::from_rows(m).unwrap())
    })
}

pub fn experiment_with_garbling(n: usize) -> impl Strategy<Value = (Experiment, Garbling)> {
    (1usize..=4, 1usize..=4).prop_flat_map(move |(k, k2)| {
        (stochastic_rows(n, k), stochastic_rows(k, k2))
            .prop_map(|(m, g)| (Experiment::from_rows(m).unwrap(), Garbling::new(g).unwrap()))
    })
}

pub fn problem_rows(
    n: usize,
    actions: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec(rational(20), n), actions)
}

/// Decision problems with distinct rows.
pub fn problem(
    n: usize,
    actions: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = DecisionProblem> {
    problem_rows(n, actions).prop_filter_map("duplicate rows", |rows| {
        DecisionProblem::from_rows(rows).ok()
    })
}

/// `(problem, interior prior)` over 2 to 4 states.
pub fn problem_and_prior() -> impl Strategy<Value = (DecisionProblem, Belief)> {
    (2usize..=4).prop_flat_map(|n| (problem(n, 2..=8), interior_belief(n)))
}

pub fn game(max_actions: usize) -> impl Strategy<Value = Game> {
    (2usize..=max_actions, 2usize..=max_actions).prop_flat_map(|(m1, m2)| {
        (
            prop::collection::vec(prop::collection::vec(-6i64..=6, m2), m1),
            prop::collection::vec(prop::collection::vec(-6i64..=6, m2), m1),
        )
            .prop_filter_map("duplicate actions", |(u1, u2)| {
                let conv = |m: Vec<Vec<i64>>| -> Vec<Vec<Rational>> {
                    m.into_iter()
                        .map(|r| r.into_iter().map(|x| ratio(x, 1)).collect())
                        .collect()
                };
                Game::from_matrices(conv(u1), conv(u2)).ok()
            })
    })
}
