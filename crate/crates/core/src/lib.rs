//! Exact value-of-information toolkit: decision problems over a finite state
//! space, Blackwell experiments, and recovery of a decision maker's value
//! function from comparisons of posterior distributions.
//!
//! All arithmetic is over arbitrary-precision rationals.

pub mod decision;
pub mod error;
pub mod game;
pub mod geometry;
pub mod identification;
pub mod information;
mod linalg;
pub mod lp;
pub mod rational;
pub mod spectral;

pub use decision::{
    Adjacency, AffineFn, Cell, DecisionProblem, PiecewiseAffineFn, StateTransfer, Subdivision,
};
pub use error::{Error, Result};
pub use game::{
    elimination_rounds, gen_br_comparisons, rationalizable, satisfies_comparisons,
    BestResponseComparison, ComparisonTag, Game, Intersection, Player, SubdivisionPair,
};
pub use geometry::{Belief, Halfspace, Polytope, MAX_STATES};
pub use identification::{
    equal_up_to_affine, extract_subdivision, gen_affineness_equalities,
    gen_nonaffineness_inequalities, gen_ordinal, gen_utility_differences, generate, reconstruct,
    reconstruct_value, satisfies_cardinal, satisfies_ordinal, utility_difference_through_prior,
    Comparison, EdgeCoverage, IdentificationData, OrderedExpectation, Reconstruction, StatementTag,
    UtilityDifference,
};
pub use information::{
    bayes_split, expected_value, experiment_of, rank, value_of_experiment, Atom, Experiment,
    Garbling, PosteriorDistribution,
};
pub use rational::{int, parse_rational, ratio, Rational};
pub use spectral::{
    priced_experiments_of, ranked_experiments_of, realize, satisfies_ranked, spectral_of,
    transport_problem, Preference, PricedExperiment, RankedExperiment, SpectralElement,
    SpectralSubdivision,
};
