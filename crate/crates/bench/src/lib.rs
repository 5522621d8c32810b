//! Fixed problem families shared by the benchmarks.

use voi::{int, ratio, Belief, DecisionProblem};

/// `k` actions over `n` states whose payoffs come from a small linear
/// congruential sequence, so every run benchmarks the same problems.
pub fn problem(n: usize, k: usize, seed: u64) -> DecisionProblem {
    let mut state = seed;
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) as i64
    };
    loop {
        let rows = (0..k)
            .map(|_| {
                (0..n)
                    .map(|_| ratio(next() % 41 - 20, next() % 20 + 1))
                    .collect()
            })
            .collect();
        if let Ok(dp) = DecisionProblem::from_rows(rows) {
            return dp;
        }
    }
}

pub fn uniform(n: usize) -> Belief {
    Belief::uniform(n)
}

/// Three actions over three states, each best where its state is most likely.
pub fn three_cells() -> DecisionProblem {
    DecisionProblem::from_rows(
        (0..3)
            .map(|i| (0..3).map(|j| int((i == j) as i64)).collect())
            .collect(),
    )
    .unwrap()
}
