//! Blackwell experiments, the Bayes map, and the value of information.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::decision::DecisionProblem;
use crate::error::{Error, Result};
use crate::geometry::{self, Belief};
use crate::rational::{self, Rational};

fn check_stochastic(rows: &[Vec<Rational>], what: &str) -> Result<usize> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || width == 0 {
        return Err(Error::InvalidExperiment(format!("{what} is empty")));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::InvalidExperiment(format!(
                "{what} row {i} is ragged"
            )));
        }
        if row.iter().any(Signed::is_negative) {
            return Err(Error::InvalidExperiment(format!(
                "{what} row {i} has a negative entry"
            )));
        }
        let total: Rational = row.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidExperiment(format!(
                "{what} row {i} sums to {total}, not 1"
            )));
        }
    }
    Ok(width)
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Row-stochastic likelihood matrix: row `θ` is `π(· | θ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Experiment {
    signal_labels: Vec<String>,
    likelihood: Vec<Vec<Rational>>,
}

impl Experiment {
    pub fn new(signal_labels: Vec<String>, likelihood: Vec<Vec<Rational>>) -> Result<Self> {
        let width = check_stochastic(&likelihood, "likelihood")?;
        if signal_labels.len() != width {
            return Err(Error::InvalidExperiment(format!(
                "{} signal labels for {width} signals",
                signal_labels.len()
            )));
        }
        Ok(Experiment {
            signal_labels,
            likelihood,
        })
    }

    pub fn from_rows(likelihood: Vec<Vec<Rational>>) -> Result<Self> {
        let width = likelihood.first().map_or(0, Vec::len);
        let labels = (1..=width).map(|i| format!("s{i}")).collect();
        Experiment::new(labels, likelihood)
    }

    /// Fully revealing experiment.
    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|k| Belief::vertex(n, k).into_coords()).collect();
        Experiment::from_rows(rows).expect("identity is stochastic")
    }

    /// One signal, sent in every state.
    pub fn uninformative(n: usize) -> Self {
        Experiment::from_rows(vec![vec![Rational::one()]; n]).expect("stochastic")
    }

    pub fn num_states(&self) -> usize {
        self.likelihood.len()
    }

    pub fn num_signals(&self) -> usize {
        self.signal_labels.len()
    }

    pub fn signal_labels(&self) -> &[String] {
        &self.signal_labels
    }

    pub fn likelihood(&self) -> &[Vec<Rational>] {
        &self.likelihood
    }

    /// Post-processes signals through `g`: the likelihood product `π · g`.
    pub fn garble(&self, g: &Garbling) -> Result<Experiment> {
        if self.num_signals() != g.matrix.len() {
            return Err(Error::ShapeMismatch(format!(
                "experiment has {} signals, garbling expects {}",
                self.num_signals(),
                g.matrix.len()
            )));
        }
        Experiment::from_rows(mat_mul(&self.likelihood, &g.matrix))
    }
}

/// Row-stochastic map from signals to signals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Garbling {
    matrix: Vec<Vec<Rational>>,
}

impl Garbling {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        check_stochastic(&matrix, "garbling")?;
        Ok(Garbling { matrix })
    }

    pub fn identity(k: usize) -> Self {
        Garbling {
            matrix: (0..k).map(|i| Belief::vertex(k, i).into_coords()).collect(),
        }
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Garbling) -> Result<Garbling> {
        if self.matrix[0].len() != next.matrix.len() {
            return Err(Error::ShapeMismatch("garbling composition".into()));
        }
        Garbling::new(mat_mul(&self.matrix, &next.matrix))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub belief: Belief,
    pub prob: Rational,
}

/// Finitely supported distribution over beliefs, kept in canonical form:
/// identical beliefs merged, atoms sorted by belief, all probabilities
/// positive. Two distributions are equal iff their canonical forms are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosteriorDistribution {
    atoms: Vec<Atom>,
    mean: Belief,
}

impl PosteriorDistribution {
    pub fn new(atoms: impl IntoIterator<Item = (Belief, Rational)>) -> Result<Self> {
        let mut merged: BTreeMap<Belief, Rational> = BTreeMap::new();
        let mut n = None;
        for (belief, prob) in atoms {
            if !prob.is_positive() {
                return Err(Error::InvalidDistribution(format!(
                    "probability {prob} is not positive"
                )));
            }
            match n {
                None => n = Some(belief.num_states()),
                Some(k) if k != belief.num_states() => {
                    return Err(Error::InvalidDistribution("mixed belief dimensions".into()))
                }
                _ => {}
            }
            *merged.entry(belief).or_insert_with(Rational::zero) += prob;
        }
        let total: Rational = merged.values().sum();
        if merged.is_empty() || !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let atoms: Vec<Atom> = merged
            .into_iter()
            .map(|(belief, prob)| Atom { belief, prob })
            .collect();
        let terms: Vec<(Rational, &[Rational])> = atoms
            .iter()
            .map(|a| (a.prob.clone(), a.belief.coords()))
            .collect();
        let mean = Belief::from_coords_unchecked(rational::combine(&terms));
        Ok(PosteriorDistribution { atoms, mean })
    }

    /// Point mass.
    pub fn degenerate(belief: Belief) -> Self {
        PosteriorDistribution {
            atoms: vec![Atom {
                belief: belief.clone(),
                prob: Rational::one(),
            }],
            mean: belief,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn mean(&self) -> &Belief {
        &self.mean
    }

    pub fn num_states(&self) -> usize {
        self.mean.num_states()
    }

    /// Probability of exactly `belief` (zero off the support).
    pub fn mass_at(&self, belief: &Belief) -> Rational {
        self.atoms
            .binary_search_by(|a| a.belief.cmp(belief))
            .map(|i| self.atoms[i].prob.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn index_of(&self, belief: &Belief) -> Option<usize> {
        self.atoms.binary_search_by(|a| a.belief.cmp(belief)).ok()
    }

    /// Replaces equally weighted atoms by one atom at their barycenter
    /// carrying their total probability: a mean-preserving contraction.
    pub fn collapse_to_barycenter(&self, indices: &[usize]) -> Result<Self> {
        let mut chosen: Vec<usize> = indices.to_vec();
        chosen.sort_unstable();
        chosen.dedup();
        if chosen.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&bad) = chosen.iter().find(|&&i| i >= self.atoms.len()) {
            return Err(Error::InvalidDistribution(format!("no atom {bad}")));
        }
        let w = &self.atoms[chosen[0]].prob;
        if chosen.iter().any(|&i| &self.atoms[i].prob != w) {
            return Err(Error::UnequalWeights);
        }
        let points: Vec<Belief> = chosen
            .iter()
            .map(|&i| self.atoms[i].belief.clone())
            .collect();
        let center = geometry::barycenter(&points)?;
        let total = w * rational::int(chosen.len() as i64);
        let rest = self
            .atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| chosen.binary_search(i).is_err())
            .map(|(_, a)| (a.belief.clone(), a.prob.clone()));
        PosteriorDistribution::new(rest.chain(std::iter::once((center, total))))
    }

    /// Splits atom `index` into `(x1, w1)` and `(x2, w2)`: a mean-preserving
    /// spread. Weights must be positive, sum to the atom's probability and
    /// average to the atom's belief.
    pub fn split_atom(
        &self,
        index: usize,
        (x1, w1): (&Belief, &Rational),
        (x2, w2): (&Belief, &Rational),
    ) -> Result<Self> {
        let atom = self
            .atoms
            .get(index)
            .ok_or_else(|| Error::InvalidDistribution(format!("no atom {index}")))?;
        if !w1.is_positive() || !w2.is_positive() || w1 + w2 != atom.prob {
            return Err(Error::MeanMismatch(
                "split weights must be positive and sum to the atom's probability".into(),
            ));
        }
        let split_mean = rational::combine(&[(w1.clone(), x1.coords()), (w2.clone(), x2.coords())]);
        let target: Vec<Rational> = atom
            .belief
            .coords()
            .iter()
            .map(|c| c * &atom.prob)
            .collect();
        if split_mean != target {
            return Err(Error::MeanMismatch(
                "split points do not average to the split atom".into(),
            ));
        }
        let rest = self
            .atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != index)
            .map(|(_, a)| (a.belief.clone(), a.prob.clone()));
        PosteriorDistribution::new(rest.chain([(x1.clone(), w1.clone()), (x2.clone(), w2.clone())]))
    }
}

fn require_interior(prior: &Belief) -> Result<()> {
    if prior.is_interior() {
        Ok(())
    } else {
        Err(Error::BoundaryPrior)
    }
}

/// The Bayes map `B(μ, π)`: one posterior per signal of positive
/// probability; signals inducing the same posterior are merged.
pub fn bayes_split(prior: &Belief, experiment: &Experiment) -> Result<PosteriorDistribution> {
    require_interior(prior)?;
    if experiment.num_states() != prior.num_states() {
        return Err(Error::ShapeMismatch(format!(
            "experiment over {} states, prior over {}",
            experiment.num_states(),
            prior.num_states()
        )));
    }
    let mut atoms = Vec::new();
    for s in 0..experiment.num_signals() {
        let joint: Vec<Rational> = prior
            .coords()
            .iter()
            .zip(&experiment.likelihood)
            .map(|(m, row)| m * &row[s])
            .collect();
        let p: Rational = joint.iter().sum();
        if p.is_zero() {
            continue;
        }
        let posterior = joint.iter().map(|j| j / &p).collect();
        atoms.push((Belief::from_coords_unchecked(posterior), p));
    }
    PosteriorDistribution::new(atoms)
}

/// Inverse of the Bayes map: one signal per atom with
/// `π(s | θ) = prob_s · x_s(θ) / μ(θ)`.
pub fn experiment_of(prior: &Belief, dist: &PosteriorDistribution) -> Result<Experiment> {
    require_interior(prior)?;
    if dist.mean() != prior {
        return Err(Error::MeanMismatch(format!(
            "distribution mean {} differs from prior {}",
            dist.mean(),
            prior
        )));
    }
    let rows = (0..prior.num_states())
        .map(|t| {
            dist.atoms()
                .iter()
                .map(|a| &a.prob * &a.belief.coords()[t] / &prior.coords()[t])
                .collect()
        })
        .collect();
    Experiment::from_rows(rows)
}

/// `E_F V(X)`.
pub fn expected_value(dp: &DecisionProblem, dist: &PosteriorDistribution) -> Rational {
    dist.atoms()
        .iter()
        .map(|a| &a.prob * dp.value_at(&a.belief))
        .sum()
}

/// `W(π)`, normalized so that no information is worth zero.
pub fn value_of_experiment(
    dp: &DecisionProblem,
    prior: &Belief,
    experiment: &Experiment,
) -> Result<Rational> {
    let dist = bayes_split(prior, experiment)?;
    Ok(expected_value(dp, &dist) - dp.value_at(prior))
}

/// `Greater` when `first` is strictly preferred.
pub fn rank(
    dp: &DecisionProblem,
    prior: &Belief,
    first: &Experiment,
    second: &Experiment,
) -> Result<Ordering> {
    let w1 = value_of_experiment(dp, prior, first)?;
    let w2 = value_of_experiment(dp, prior, second)?;
    Ok(w1.cmp(&w2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn b(coords: &[(i64, i64)]) -> Belief {
        Belief::new(coords.iter().map(|&(p, q)| ratio(p, q)).collect()).unwrap()
    }

    fn exp(rows: &[&[(i64, i64)]]) -> Experiment {
        Experiment::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| ratio(p, q)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn dist(atoms: &[(Belief, Rational)]) -> PosteriorDistribution {
        PosteriorDistribution::new(atoms.iter().cloned()).unwrap()
    }

    fn dp_a() -> DecisionProblem {
        DecisionProblem::from_rows(vec![
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![ratio(2, 5), ratio(2, 5)],
        ])
        .unwrap()
    }

    fn dp_b() -> DecisionProblem {
        DecisionProblem::from_rows(vec![vec![int(0), int(0)], vec![int(-1), int(1)]]).unwrap()
    }

    fn symmetric_noise() -> Garbling {
        Garbling::new(vec![
            vec![ratio(3, 4), ratio(1, 4)],
            vec![ratio(1, 4), ratio(3, 4)],
        ])
        .unwrap()
    }

    #[test]
    fn experiment_validation() {
        assert!(Experiment::from_rows(vec![vec![ratio(1, 2), ratio(1, 3)]]).is_err());
        assert!(Experiment::from_rows(vec![vec![int(2), int(-1)]]).is_err());
        assert!(Experiment::from_rows(vec![vec![int(1)], vec![int(1), int(0)]]).is_err());
    }

    #[test]
    fn bayes_split_examples() {
        let mu = Belief::uniform(2);
        assert_eq!(
            bayes_split(&mu, &Experiment::identity(2)).unwrap(),
            dist(&[
                (b(&[(1, 1), (0, 1)]), ratio(1, 2)),
                (b(&[(0, 1), (1, 1)]), ratio(1, 2))
            ])
        );
        let flat = exp(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]);
        assert_eq!(
            bayes_split(&mu, &flat).unwrap(),
            PosteriorDistribution::degenerate(mu.clone())
        );
        let mu = b(&[(2, 5), (3, 5)]);
        let noisy = exp(&[&[(3, 4), (1, 4)], &[(1, 4), (3, 4)]]);
        let f = bayes_split(&mu, &noisy).unwrap();
        assert_eq!(
            f,
            dist(&[
                (b(&[(2, 3), (1, 3)]), ratio(9, 20)),
                (b(&[(2, 11), (9, 11)]), ratio(11, 20))
            ])
        );
        assert_eq!(f.mean(), &mu);
    }

    #[test]
    fn bayes_split_drops_null_signals_and_rejects_boundary() {
        let e = exp(&[&[(1, 1), (0, 1), (0, 1)], &[(0, 1), (1, 1), (0, 1)]]);
        assert_eq!(
            bayes_split(&Belief::uniform(2), &e).unwrap().atoms().len(),
            2
        );
        assert_eq!(
            bayes_split(&Belief::vertex(2, 0), &e),
            Err(Error::BoundaryPrior)
        );
    }

    #[test]
    fn experiment_of_examples() {
        let mu = Belief::uniform(2);
        let full = bayes_split(&mu, &Experiment::identity(2)).unwrap();
        // Signals follow the sorted atoms, so (0,1) comes first.
        assert_eq!(
            experiment_of(&mu, &full).unwrap(),
            exp(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]])
        );
        assert_eq!(
            experiment_of(&mu, &PosteriorDistribution::degenerate(mu.clone())).unwrap(),
            Experiment::uninformative(2)
        );
        let mu = b(&[(2, 5), (3, 5)]);
        let f = dist(&[
            (b(&[(2, 3), (1, 3)]), ratio(9, 20)),
            (b(&[(2, 11), (9, 11)]), ratio(11, 20)),
        ]);
        assert_eq!(
            experiment_of(&mu, &f).unwrap(),
            exp(&[&[(1, 4), (3, 4)], &[(3, 4), (1, 4)]])
        );
        assert!(matches!(
            experiment_of(&Belief::uniform(2), &f),
            Err(Error::MeanMismatch(_))
        ));
    }

    #[test]
    fn garble_examples() {
        let pi = exp(&[&[(1, 3), (2, 3)], &[(1, 2), (1, 2)]]);
        assert_eq!(pi.garble(&Garbling::identity(2)).unwrap(), pi);
        let flatten = Garbling::new(vec![
            vec![ratio(1, 5), ratio(4, 5)],
            vec![ratio(1, 5), ratio(4, 5)],
        ])
        .unwrap();
        let g = pi.garble(&flatten).unwrap();
        assert_eq!(g.likelihood()[0], g.likelihood()[1]);
        assert_eq!(
            Experiment::identity(2).garble(&symmetric_noise()).unwrap(),
            exp(&[&[(3, 4), (1, 4)], &[(1, 4), (3, 4)]])
        );
        assert!(matches!(
            pi.garble(&Garbling::identity(3)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn expected_value_examples() {
        let mu = Belief::uniform(2);
        let full = bayes_split(&mu, &Experiment::identity(2)).unwrap();
        assert_eq!(expected_value(&dp_a(), &full), int(1));
        assert_eq!(
            expected_value(&dp_a(), &PosteriorDistribution::degenerate(mu)),
            ratio(1, 2)
        );
        let f = dist(&[
            (b(&[(1, 10), (9, 10)]), ratio(7, 13)),
            (b(&[(3, 4), (1, 4)]), ratio(6, 13)),
        ]);
        assert_eq!(expected_value(&dp_b(), &f), ratio(28, 65));
    }

    #[test]
    fn value_of_experiment_examples() {
        let mu = Belief::uniform(2);
        assert_eq!(
            value_of_experiment(&dp_a(), &mu, &Experiment::identity(2)).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            value_of_experiment(
                &dp_b(),
                &b(&[(1, 3), (2, 3)]),
                &Experiment::uninformative(2)
            )
            .unwrap(),
            int(0)
        );
        let noisy = Experiment::identity(2).garble(&symmetric_noise()).unwrap();
        assert_eq!(
            value_of_experiment(&dp_a(), &mu, &noisy).unwrap(),
            ratio(1, 4)
        );
    }

    #[test]
    fn rank_examples() {
        let mu = Belief::uniform(2);
        let full = Experiment::identity(2);
        let none = Experiment::uninformative(2);
        assert_eq!(rank(&dp_a(), &mu, &full, &none).unwrap(), Ordering::Greater);
        assert_eq!(rank(&dp_a(), &mu, &full, &full).unwrap(), Ordering::Equal);
        let garbled = full.garble(&symmetric_noise()).unwrap();
        assert_ne!(
            rank(&dp_a(), &mu, &garbled, &full).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn collapse_examples() {
        let z = b(&[(1, 5), (4, 5)]);
        let f = dist(&[
            (b(&[(1, 1), (0, 1)]), ratio(1, 4)),
            (b(&[(1, 2), (1, 2)]), ratio(1, 4)),
            (z.clone(), ratio(1, 2)),
        ]);
        let i = f.index_of(&b(&[(1, 1), (0, 1)])).unwrap();
        let j = f.index_of(&b(&[(1, 2), (1, 2)])).unwrap();
        let c = f.collapse_to_barycenter(&[i, j]).unwrap();
        assert_eq!(
            c,
            dist(&[
                (b(&[(3, 4), (1, 4)]), ratio(1, 2)),
                (z.clone(), ratio(1, 2))
            ])
        );
        assert_eq!(c.mean(), f.mean());
        assert_eq!(f.collapse_to_barycenter(&[i]).unwrap(), f);
        let k = f.index_of(&z).unwrap();
        assert_eq!(
            f.collapse_to_barycenter(&[i, k]),
            Err(Error::UnequalWeights)
        );
    }

    #[test]
    fn split_examples() {
        let mu = Belief::uniform(2);
        let f = PosteriorDistribution::degenerate(mu.clone());
        let half = ratio(1, 2);
        let full = f
            .split_atom(
                0,
                (&Belief::vertex(2, 0), &half),
                (&Belief::vertex(2, 1), &half),
            )
            .unwrap();
        assert_eq!(full, bayes_split(&mu, &Experiment::identity(2)).unwrap());
        assert_eq!(f.split_atom(0, (&mu, &half), (&mu, &half)).unwrap(), f);
        let spread = f
            .split_atom(
                0,
                (&b(&[(3, 4), (1, 4)]), &half),
                (&b(&[(1, 4), (3, 4)]), &half),
            )
            .unwrap();
        assert_eq!(expected_value(&dp_a(), &spread), ratio(3, 4));
        assert!(expected_value(&dp_a(), &spread) > expected_value(&dp_a(), &f));
        assert!(matches!(
            f.split_atom(0, (&b(&[(3, 4), (1, 4)]), &half), (&mu, &half)),
            Err(Error::MeanMismatch(_))
        ));
    }

    #[test]
    fn distribution_validation() {
        assert!(PosteriorDistribution::new(vec![(Belief::uniform(2), ratio(1, 2))]).is_err());
        assert!(PosteriorDistribution::new(vec![
            (Belief::uniform(2), int(2)),
            (Belief::vertex(2, 0), int(-1))
        ])
        .is_err());
        let merged = PosteriorDistribution::new(vec![
            (Belief::uniform(2), ratio(1, 2)),
            (Belief::uniform(2), ratio(1, 2)),
        ])
        .unwrap();
        assert_eq!(
            merged,
            PosteriorDistribution::degenerate(Belief::uniform(2))
        );
    }

    #[test]
    fn garbling_composition_associates() {
        let g1 = symmetric_noise();
        let g2 = Garbling::new(vec![
            vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)],
            vec![int(0), ratio(1, 2), ratio(1, 2)],
        ])
        .unwrap();
        let pi = exp(&[&[(1, 5), (4, 5)], &[(2, 3), (1, 3)]]);
        assert_eq!(
            pi.garble(&g1).unwrap().garble(&g2).unwrap(),
            pi.garble(&g1.then(&g2).unwrap()).unwrap()
        );
    }
}
