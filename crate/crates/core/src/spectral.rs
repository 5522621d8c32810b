//! Prior-free encodings of subdivisions and transport of decision problems
//! between priors.
//!
//! A belief `x` seen from prior `μ` corresponds to the likelihood-ratio ray
//! `x(θ)/μ(θ)`. Cells described by rays no longer depend on the prior, and a
//! problem can be moved to any other prior without changing the value of any
//! experiment.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::decision::DecisionProblem;
use crate::decision::Subdivision;
use crate::error::{Error, Result};
use crate::geometry::{Belief, Polytope};
use crate::identification::{Comparison, IdentificationData, StatementTag};
use crate::information::{experiment_of, rank, Experiment};
use crate::rational::{self, Rational};

fn require_interior(prior: &Belief) -> Result<()> {
    if prior.is_interior() {
        Ok(())
    } else {
        Err(Error::BoundaryPrior)
    }
}

/// `x(θ)/μ(θ)`, scaled so its largest coordinate is one.
pub fn ray_of(x: &Belief, prior: &Belief) -> Result<Vec<Rational>> {
    require_interior(prior)?;
    let raw: Vec<Rational> = x
        .coords()
        .iter()
        .zip(prior.coords())
        .map(|(a, m)| a / m)
        .collect();
    let top = rational::max_abs(&raw);
    Ok(raw.into_iter().map(|r| r / &top).collect())
}

/// The belief on ray `ℓ` under prior `μ'`: `μ'(θ)ℓ(θ) / Σ μ'ℓ`.
pub fn belief_on_ray(ray: &[Rational], prior: &Belief) -> Result<Belief> {
    require_interior(prior)?;
    if ray.len() != prior.num_states() {
        return Err(Error::ShapeMismatch(format!(
            "ray of length {} for {} states",
            ray.len(),
            prior.num_states()
        )));
    }
    let weighted: Vec<Rational> = ray.iter().zip(prior.coords()).map(|(l, m)| l * m).collect();
    let total: Rational = weighted.iter().sum();
    if total.is_zero() {
        return Err(Error::InvalidBelief("zero ray".into()));
    }
    Belief::new(weighted.into_iter().map(|w| w / &total).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralElement {
    pub cell: usize,
    /// One ray per extreme point of the cell, sorted.
    pub rays: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSubdivision {
    pub num_states: usize,
    pub elements: Vec<SpectralElement>,
}

pub fn spectral_of(sub: &Subdivision, prior: &Belief) -> Result<SpectralSubdivision> {
    require_interior(prior)?;
    let elements = sub
        .cells()
        .iter()
        .enumerate()
        .map(|(cell, c)| {
            let mut rays = c
                .geometry
                .vertices()
                .iter()
                .map(|v| ray_of(v, prior))
                .collect::<Result<Vec<_>>>()?;
            rays.sort();
            Ok(SpectralElement { cell, rays })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralSubdivision {
        num_states: sub.num_states(),
        elements,
    })
}

/// Cell geometries of the spectral subdivision seen from `prior`, one
/// polytope per element.
pub fn realize(spec: &SpectralSubdivision, prior: &Belief) -> Result<Vec<Polytope>> {
    require_interior(prior)?;
    spec.elements
        .iter()
        .map(|e| {
            let points = e
                .rays
                .iter()
                .map(|r| belief_on_ray(r, prior))
                .collect::<Result<Vec<_>>>()?;
            Polytope::hull(spec.num_states, &points)
        })
        .collect()
}

/// Moves `dp` from prior `from` to prior `to` by reweighting each state's
/// payoffs by `from(θ)/to(θ)`. Every experiment is worth the same in the
/// transported problem at `to` as in `dp` at `from`.
pub fn transport_problem(
    dp: &DecisionProblem,
    from: &Belief,
    to: &Belief,
) -> Result<DecisionProblem> {
    require_interior(from)?;
    require_interior(to)?;
    if from.num_states() != dp.num_states() || to.num_states() != dp.num_states() {
        return Err(Error::ShapeMismatch(
            "prior length differs from state count".into(),
        ));
    }
    let factors: Vec<Rational> = from
        .coords()
        .iter()
        .zip(to.coords())
        .map(|(a, b)| a / b)
        .collect();
    let utility = dp
        .utility()
        .iter()
        .map(|row| row.iter().zip(&factors).map(|(u, f)| u * f).collect())
        .collect();
    DecisionProblem::new(
        dp.state_labels().to_vec(),
        dp.action_labels().to_vec(),
        utility,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preference {
    /// `lhs ≻ rhs`
    Strict,
    /// `lhs ∼ rhs`
    Indifferent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedExperiment {
    pub lhs: Experiment,
    pub rhs: Experiment,
    pub relation: Preference,
    pub tag: StatementTag,
}

/// The experiments inducing each side of every ordinal statement.
pub fn ranked_experiments_of(data: &IdentificationData) -> Result<Vec<RankedExperiment>> {
    data.ordinal
        .iter()
        .map(|s| {
            Ok(RankedExperiment {
                lhs: experiment_of(&data.prior, &s.lhs)?,
                rhs: experiment_of(&data.prior, &s.rhs)?,
                relation: match s.relation {
                    Comparison::Eq => Preference::Indifferent,
                    Comparison::Gt => Preference::Strict,
                },
                tag: s.tag,
            })
        })
        .collect()
}

/// A utility difference restated over experiments:
/// `W(lhs) = W(rhs) + price`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PricedExperiment {
    pub lhs: Experiment,
    pub rhs: Experiment,
    pub price: Rational,
    pub edge: (usize, usize),
}

pub fn priced_experiments_of(data: &IdentificationData) -> Result<Vec<PricedExperiment>> {
    data.cardinal
        .iter()
        .map(|d| {
            Ok(PricedExperiment {
                lhs: experiment_of(&data.prior, &d.lhs)?,
                rhs: experiment_of(&data.prior, &d.rhs)?,
                price: d.zeta.clone(),
                edge: d.edge,
            })
        })
        .collect()
}

pub fn satisfies_ranked(
    dp: &DecisionProblem,
    prior: &Belief,
    collection: &[RankedExperiment],
) -> Result<bool> {
    require_interior(prior)?;
    for r in collection {
        let want = match r.relation {
            Preference::Strict => Ordering::Greater,
            Preference::Indifferent => Ordering::Equal,
        };
        if rank(dp, prior, &r.lhs, &r.rhs)? != want {
            return Ok(false);
        }
    }
    Ok(true)
}
