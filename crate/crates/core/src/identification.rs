//! Identifying a value function from ordered expectations and utility
//! differences.
//!
//! The ordinal part pins down the subdivision: one equality per cell (the
//! value is affine there) and one strict inequality per adjacent pair (it is
//! not affine across their shared facet). The cardinal part fixes the kink
//! size on the edges of a spanning tree, which determines the value function
//! up to an affine term.

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};

use crate::decision::{AffineFn, Cell, DecisionProblem, PiecewiseAffineFn, Subdivision};
use crate::error::{Error, Result};
use crate::geometry::{self, Belief, Polytope};
use crate::information::{expected_value, PosteriorDistribution};
use crate::rational::{self, Rational};

/// How many halvings a step size may undergo before giving up.
const MAX_HALVINGS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    /// `E_lhs V = E_rhs V`
    Eq,
    /// `E_lhs V > E_rhs V`
    Gt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatementTag {
    CellAffine(usize),
    PairNonAffine(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedExpectation {
    pub lhs: PosteriorDistribution,
    pub rhs: PosteriorDistribution,
    pub relation: Comparison,
    pub tag: StatementTag,
}

impl OrderedExpectation {
    pub fn holds(&self, dp: &DecisionProblem) -> bool {
        let l = expected_value(dp, &self.lhs);
        let r = expected_value(dp, &self.rhs);
        match self.relation {
            Comparison::Eq => l == r,
            Comparison::Gt => l > r,
        }
    }
}

/// `E_lhs V = E_rhs V + zeta`, attached to the adjacency edge `edge`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityDifference {
    pub lhs: PosteriorDistribution,
    pub rhs: PosteriorDistribution,
    pub zeta: Rational,
    pub edge: (usize, usize),
}

impl UtilityDifference {
    pub fn holds(&self, dp: &DecisionProblem) -> bool {
        expected_value(dp, &self.lhs) - expected_value(dp, &self.rhs) == self.zeta
    }

    /// Probability of `lhs` minus probability of `rhs` at each belief in
    /// either support, skipping beliefs where the two cancel.
    pub fn net_masses(&self) -> Vec<(Belief, Rational)> {
        let mut out: Vec<(Belief, Rational)> = Vec::new();
        for a in self.lhs.atoms() {
            let net = &a.prob - self.rhs.mass_at(&a.belief);
            if !net.is_zero() {
                out.push((a.belief.clone(), net));
            }
        }
        for a in self.rhs.atoms() {
            if self.lhs.index_of(&a.belief).is_none() {
                out.push((a.belief.clone(), -a.prob.clone()));
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentificationData {
    pub prior: Belief,
    pub ordinal: Vec<OrderedExpectation>,
    pub cardinal: Vec<UtilityDifference>,
    pub root_cell: usize,
}

/// Which adjacency edges receive a utility difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeCoverage {
    /// Breadth-first spanning tree from the root.
    #[default]
    SpanningTree,
    /// Every adjacent pair; the extra edges serve as consistency checks.
    All,
}

fn require_interior(prior: &Belief) -> Result<()> {
    if prior.is_interior() {
        Ok(())
    } else {
        Err(Error::BoundaryPrior)
    }
}

/// `from + t · (to − from)`, if that is still a belief.
fn along(from: &Belief, to: &Belief, t: &Rational) -> Option<Belief> {
    let coords = from
        .coords()
        .iter()
        .zip(to.coords())
        .map(|(a, b)| a + t * (b - a))
        .collect();
    Belief::new(coords).ok()
}

/// Mixing weight `λ` and residual `z` with `λ·anchor + (1−λ)·z = prior`.
/// Returns `λ = 1` and no residual when the anchor already is the prior.
/// Otherwise `λ` starts at 1/2 and is halved until `z` is interior and
/// avoids `avoid`.
fn residual(
    prior: &Belief,
    anchor: &Belief,
    avoid: &[Belief],
) -> Result<(Rational, Option<Belief>)> {
    if prior == anchor {
        return Ok((Rational::one(), None));
    }
    let mut lambda = rational::half();
    for _ in 0..MAX_HALVINGS {
        let rest = Rational::one() - &lambda;
        let coords = prior
            .coords()
            .iter()
            .zip(anchor.coords())
            .map(|(m, b)| (m - &lambda * b) / &rest)
            .collect();
        if let Ok(z) = Belief::new(coords) {
            if z.is_interior() && !avoid.contains(&z) {
                return Ok((lambda, Some(z)));
            }
        }
        lambda /= rational::int(2);
    }
    Err(Error::NoFeasibleLambda)
}

fn with_residual(
    weighted: Vec<(Belief, Rational)>,
    lambda: &Rational,
    z: &Option<Belief>,
) -> Result<PosteriorDistribution> {
    let mut atoms: Vec<(Belief, Rational)> =
        weighted.into_iter().map(|(x, w)| (x, w * lambda)).collect();
    if let Some(z) = z {
        atoms.push((z.clone(), Rational::one() - lambda));
    }
    PosteriorDistribution::new(atoms)
}

/// One equality per cell: spreading mass over the cell's extreme points is
/// worth exactly as much as putting it on their barycenter iff `V` is affine
/// on the cell.
pub fn gen_affineness_equalities(
    sub: &Subdivision,
    prior: &Belief,
) -> Result<Vec<OrderedExpectation>> {
    require_interior(prior)?;
    sub.cells()
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            let extremes = cell.geometry.vertices();
            let center = geometry::barycenter(extremes)?;
            // Keep λ < 1 even when the barycenter is the prior, so that the
            // collapsed side always differs from the spread side.
            let (lambda, z) = if &center == prior {
                (rational::half(), Some(prior.clone()))
            } else {
                residual(prior, &center, extremes)?
            };
            let k = rational::int(extremes.len() as i64);
            let spread = with_residual(
                extremes
                    .iter()
                    .map(|x| (x.clone(), Rational::one() / &k))
                    .collect(),
                &lambda,
                &z,
            )?;
            let indices: Vec<usize> = extremes
                .iter()
                .map(|x| spread.index_of(x).expect("extreme point in support"))
                .collect();
            let collapsed = spread.collapse_to_barycenter(&indices)?;
            Ok(OrderedExpectation {
                lhs: spread,
                rhs: collapsed,
                relation: Comparison::Eq,
                tag: StatementTag::CellAffine(i),
            })
        })
        .collect()
}

/// One strict inequality per adjacent pair: splitting a point of the shared
/// facet into a point of each cell raises the expected value iff `V` kinks
/// there.
pub fn gen_nonaffineness_inequalities(
    sub: &Subdivision,
    prior: &Belief,
) -> Result<Vec<OrderedExpectation>> {
    require_interior(prior)?;
    sub.adjacency()
        .iter()
        .map(|e| {
            let (i, j) = e.cells;
            let (ci, cj) = (&sub.cells()[i].geometry, &sub.cells()[j].geometry);
            let x0 = geometry::interior_point(&e.shared)?;
            let toward_i = geometry::interior_point(ci)?;
            let (x1, x2) = symmetric_split(&x0, &toward_i, ci, cj)?;
            let (lambda, z) = residual(prior, &x0, &[x1.clone(), x2.clone()])?;
            let base = with_residual(vec![(x0.clone(), Rational::one())], &lambda, &z)?;
            let idx = base.index_of(&x0).expect("facet point in support");
            let w = &lambda * rational::half();
            let spread = base.split_atom(idx, (&x1, &w), (&x2, &w))?;
            Ok(OrderedExpectation {
                lhs: spread,
                rhs: base,
                relation: Comparison::Gt,
                tag: StatementTag::PairNonAffine(i, j),
            })
        })
        .collect()
}

/// Points `center ± t·(toward − center)` lying in the interiors of `near`
/// and `far` respectively, halving `t` from 1 as needed.
fn symmetric_split(
    center: &Belief,
    toward: &Belief,
    near: &Polytope,
    far: &Polytope,
) -> Result<(Belief, Belief)> {
    let mut t = Rational::one();
    for _ in 0..MAX_HALVINGS {
        if let (Some(x1), Some(x2)) = (
            along(center, toward, &t),
            along(center, toward, &-t.clone()),
        ) {
            if near.contains_interior(&x1) && far.contains_interior(&x2) {
                return Ok((x1, x2));
            }
        }
        t /= rational::int(2);
    }
    Err(Error::InvalidConstruction(
        "no symmetric split of the facet point fits both cells".into(),
    ))
}

/// Both ordinal families for the subdivision of `dp`.
pub fn gen_ordinal(sub: &Subdivision, prior: &Belief) -> Result<Vec<OrderedExpectation>> {
    let mut out = gen_affineness_equalities(sub, prior)?;
    out.extend(gen_nonaffineness_inequalities(sub, prior)?);
    Ok(out)
}

/// True iff `dp`'s value function satisfies every ordinal statement.
pub fn satisfies_ordinal(dp: &DecisionProblem, data: &IdentificationData) -> bool {
    data.ordinal.iter().all(|s| s.holds(dp))
}

/// True iff every utility difference holds with exactly the recorded `ζ`.
pub fn satisfies_cardinal(dp: &DecisionProblem, data: &IdentificationData) -> bool {
    data.cardinal.iter().all(|d| d.holds(dp))
}

/// Utility difference across `edge = (i, j)` built from explicit points:
/// `x_i` and `x_hat` in the interior of cell `i`, `x_j` in the interior of
/// cell `j`, all collinear with the prior, which must lie strictly between
/// `x_hat` and `x_j`. The two sides are the binary distributions with mean
/// equal to the prior on `{x_i, x_j}` and `{x_hat, x_j}`.
pub fn utility_difference_through_prior(
    dp: &DecisionProblem,
    sub: &Subdivision,
    prior: &Belief,
    edge: (usize, usize),
    x_i: &Belief,
    x_hat: &Belief,
    x_j: &Belief,
) -> Result<UtilityDifference> {
    require_interior(prior)?;
    let (i, j) = edge;
    if sub.edge(i, j).is_none() {
        return Err(Error::InvalidConstruction(format!(
            "cells {i} and {j} are not adjacent"
        )));
    }
    let ci = &sub.cells()[i].geometry;
    let cj = &sub.cells()[j].geometry;
    if !ci.contains_interior(x_i) || !ci.contains_interior(x_hat) || !cj.contains_interior(x_j) {
        return Err(Error::InvalidConstruction(
            "construction points must be interior to their cells".into(),
        ));
    }
    let p = weight_on(x_j, x_i, prior)?;
    let q = weight_on(x_j, x_hat, prior)?;
    let lhs = PosteriorDistribution::new([
        (x_j.clone(), p.clone()),
        (x_i.clone(), Rational::one() - &p),
    ])?;
    let rhs = PosteriorDistribution::new([
        (x_j.clone(), q.clone()),
        (x_hat.clone(), Rational::one() - &q),
    ])?;
    let zeta = expected_value(dp, &lhs) - expected_value(dp, &rhs);
    Ok(UtilityDifference {
        lhs,
        rhs,
        zeta,
        edge,
    })
}

/// The weight `w ∈ (0, 1)` with `w·a + (1−w)·b = target`.
fn weight_on(a: &Belief, b: &Belief, target: &Belief) -> Result<Rational> {
    let t = (0..a.num_states())
        .find(|&t| a.coords()[t] != b.coords()[t])
        .ok_or_else(|| Error::InvalidConstruction("coincident construction points".into()))?;
    let w = (&target.coords()[t] - &b.coords()[t]) / (&a.coords()[t] - &b.coords()[t]);
    if !w.is_positive() || w >= Rational::one() || along(b, a, &w).as_ref() != Some(target) {
        return Err(Error::InvalidConstruction(
            "prior is not strictly inside the construction segment".into(),
        ));
    }
    Ok(w)
}

/// Default construction across `edge = (i, j)`. Around a facet point `f`,
/// place `x_j = f + t·d` in cell `j` and `x̂ = f − t·d`, `x_i = f − 2t·d` in
/// cell `i`; the binary distributions `{x_i: 1/3, x_j: 2/3}` and
/// `{x̂: 1/2, x_j: 1/2}` both have mean `f`, and a shared residual atom
/// moves their mean to the prior.
fn default_difference(
    dp: &DecisionProblem,
    sub: &Subdivision,
    prior: &Belief,
    edge: (usize, usize),
) -> Result<UtilityDifference> {
    let (i, j) = edge;
    let adj = sub
        .edge(i, j)
        .ok_or_else(|| Error::InvalidConstruction(format!("cells {i} and {j} are not adjacent")))?;
    let ci = &sub.cells()[i].geometry;
    let cj = &sub.cells()[j].geometry;
    let f = geometry::interior_point(&adj.shared)?;
    let toward_j = geometry::interior_point(cj)?;
    let mut t = Rational::one();
    for _ in 0..MAX_HALVINGS {
        let points = (
            along(&f, &toward_j, &t),
            along(&f, &toward_j, &-t.clone()),
            along(&f, &toward_j, &(-&t * rational::int(2))),
        );
        if let (Some(x_j), Some(x_hat), Some(x_i)) = points {
            if !(cj.contains_interior(&x_j)
                && ci.contains_interior(&x_hat)
                && ci.contains_interior(&x_i))
            {
                t /= rational::int(2);
                continue;
            }
            let (lambda, z) = residual(prior, &f, &[])?;
            let third = rational::ratio(1, 3);
            let lhs = with_residual(
                vec![
                    (x_i, third.clone()),
                    (x_j.clone(), Rational::one() - &third),
                ],
                &lambda,
                &z,
            )?;
            let rhs = with_residual(
                vec![(x_hat, rational::half()), (x_j, rational::half())],
                &lambda,
                &z,
            )?;
            let zeta = expected_value(dp, &lhs) - expected_value(dp, &rhs);
            return Ok(UtilityDifference {
                lhs,
                rhs,
                zeta,
                edge,
            });
        }
        t /= rational::int(2);
    }
    Err(Error::InvalidConstruction(format!(
        "no construction points fit cells {i} and {j}"
    )))
}

/// Utility differences on the root's breadth-first spanning tree (and on
/// every other edge for [`EdgeCoverage::All`]). Tree edges are oriented
/// `(parent, child)`. The root is cell 0.
pub fn gen_utility_differences(
    dp: &DecisionProblem,
    sub: &Subdivision,
    prior: &Belief,
    coverage: EdgeCoverage,
) -> Result<Vec<UtilityDifference>> {
    require_interior(prior)?;
    let (_, tree) = sub.bfs_tree(0);
    let mut edges = tree.clone();
    if coverage == EdgeCoverage::All {
        for e in sub.adjacency() {
            let (a, b) = e.cells;
            if !tree.contains(&(a, b)) && !tree.contains(&(b, a)) {
                edges.push((a, b));
            }
        }
    }
    edges
        .into_iter()
        .map(|edge| default_difference(dp, sub, prior, edge))
        .collect()
}

/// Ordinal and cardinal data for `dp` at `prior`.
pub fn generate(
    dp: &DecisionProblem,
    prior: &Belief,
    coverage: EdgeCoverage,
) -> Result<IdentificationData> {
    require_interior(prior)?;
    let sub = dp.subdivision()?;
    Ok(IdentificationData {
        prior: prior.clone(),
        ordinal: gen_ordinal(&sub, prior)?,
        cardinal: gen_utility_differences(dp, &sub, prior, coverage)?,
        root_cell: 0,
    })
}

/// Rebuilds the subdivision from the ordinal data: each cell's extreme points
/// are the atoms its equality statement collapses.
pub fn extract_subdivision(data: &IdentificationData) -> Result<Subdivision> {
    let n = data.prior.num_states();
    let mut extremes: Vec<Option<Vec<Belief>>> = Vec::new();
    for s in &data.ordinal {
        if let StatementTag::CellAffine(i) = s.tag {
            if s.relation != Comparison::Eq {
                return Err(Error::MalformedData(format!(
                    "cell {i} statement is not an equality"
                )));
            }
            if extremes.len() <= i {
                extremes.resize(i + 1, None);
            }
            if extremes[i].is_some() {
                return Err(Error::MalformedData(format!("cell {i} listed twice")));
            }
            let removed: Vec<Belief> = s
                .lhs
                .atoms()
                .iter()
                .filter(|a| s.rhs.index_of(&a.belief).is_none())
                .map(|a| a.belief.clone())
                .collect();
            extremes[i] = Some(removed);
        }
    }
    if extremes.is_empty() {
        return Err(Error::MalformedData("no cell statements".into()));
    }
    let cells = extremes
        .into_iter()
        .enumerate()
        .map(|(i, pts)| {
            let pts = pts.ok_or_else(|| Error::MalformedData(format!("cell {i} missing")))?;
            let geometry = Polytope::hull(n, &pts)
                .map_err(|e| Error::MalformedData(format!("cell {i}: {e}")))?;
            if !geometry.is_full_dimensional() {
                return Err(Error::MalformedData(format!(
                    "cell {i} is not full-dimensional"
                )));
            }
            Ok(Cell {
                action: i,
                geometry,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sub = Subdivision::from_cells(n, cells).map_err(|e| Error::MalformedData(e.to_string()))?;
    let mut pairs: Vec<(usize, usize)> = data
        .ordinal
        .iter()
        .filter_map(|s| match s.tag {
            StatementTag::PairNonAffine(i, j) => Some((i.min(j), i.max(j))),
            StatementTag::CellAffine(_) => None,
        })
        .collect();
    pairs.sort_unstable();
    let edges: Vec<(usize, usize)> = sub.adjacency().iter().map(|e| e.cells).collect();
    if pairs != edges {
        return Err(Error::MalformedData(
            "pair statements do not match the cells' adjacency".into(),
        ));
    }
    Ok(sub)
}

/// Outcome of [`reconstruct`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub value: PiecewiseAffineFn,
    /// `(known, solved)` pairs in solving order.
    pub tree_edges: Vec<(usize, usize)>,
    /// Edges of redundant data that were verified against the result.
    pub checked_edges: Vec<(usize, usize)>,
}

/// Recovers `V` up to an affine term: zero on the root cell, then one kink
/// size per tree edge, solved from that edge's utility difference.
pub fn reconstruct(data: &IdentificationData) -> Result<Reconstruction> {
    let sub = extract_subdivision(data)?;
    let m = sub.cells().len();
    let n = sub.num_states();
    if data.root_cell >= m {
        return Err(Error::MalformedData(format!(
            "root cell {} out of range",
            data.root_cell
        )));
    }
    for d in &data.cardinal {
        let (a, b) = d.edge;
        if a >= m || b >= m || sub.edge(a, b).is_none() {
            return Err(Error::MalformedData(format!(
                "edge ({a}, {b}) is not an adjacency"
            )));
        }
        if d.lhs.mean() != d.rhs.mean() {
            return Err(Error::MalformedData(format!(
                "utility difference on ({a}, {b}) compares distributions with different means"
            )));
        }
    }

    let mut pieces: Vec<Option<AffineFn>> = vec![None; m];
    pieces[data.root_cell] = Some(AffineFn::zero(n));
    let mut used = vec![false; data.cardinal.len()];
    let mut tree_edges = Vec::new();
    let mut queue = VecDeque::from([data.root_cell]);
    while let Some(k) = queue.pop_front() {
        // Lowest neighbor first, then data order.
        let mut candidates: Vec<(usize, usize)> = data
            .cardinal
            .iter()
            .enumerate()
            .filter(|(idx, _)| !used[*idx])
            .filter_map(|(idx, d)| {
                let (a, b) = d.edge;
                let u = if a == k {
                    b
                } else if b == k {
                    a
                } else {
                    return None;
                };
                pieces[u].is_none().then_some((u, idx))
            })
            .collect();
        candidates.sort_unstable();
        for (u, idx) in candidates {
            if pieces[u].is_some() {
                continue;
            }
            used[idx] = true;
            let d = &data.cardinal[idx];
            let h = sub.edge(k, u).expect("checked").facet_toward(u);
            let (ck, cu) = (&sub.cells()[k].geometry, &sub.cells()[u].geometry);
            let mut denom = Rational::zero();
            for (x, net) in d.net_masses() {
                if cu.contains(&x) {
                    denom += net * h.slack(&x);
                } else if !ck.contains(&x) {
                    return Err(Error::MalformedData(format!(
                        "utility difference on ({k}, {u}) moves mass outside both cells"
                    )));
                }
            }
            if denom.is_zero() {
                return Err(Error::SingularSolve(format!(
                    "utility difference on ({k}, {u}) does not load on the kink"
                )));
            }
            let psi = &d.zeta / denom;
            if !psi.is_positive() {
                return Err(Error::InconsistentData(format!(
                    "kink between cells {k} and {u} would be {psi}, not positive"
                )));
            }
            let known = pieces[k].clone().expect("known cell");
            pieces[u] = Some(known.add(&AffineFn::from_halfspace(&h).scale(&psi)));
            tree_edges.push((k, u));
            queue.push_back(u);
        }
    }
    let pieces = pieces
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| Error::MalformedData(format!("no data reaches cell {i}"))))
        .collect::<Result<Vec<_>>>()?;
    let value = PiecewiseAffineFn::new(sub, pieces)?;

    let mut checked_edges = Vec::new();
    for (idx, d) in data.cardinal.iter().enumerate() {
        if used[idx] {
            continue;
        }
        let implied: Rational = d
            .net_masses()
            .iter()
            .map(|(x, net)| net * value.eval(x))
            .sum();
        if implied != d.zeta {
            return Err(Error::InconsistentData(format!(
                "utility difference on ({}, {}) records {} but the reconstruction implies {implied}",
                d.edge.0, d.edge.1, d.zeta
            )));
        }
        checked_edges.push(d.edge);
    }
    Ok(Reconstruction {
        value,
        tree_edges,
        checked_edges,
    })
}

pub fn reconstruct_value(data: &IdentificationData) -> Result<PiecewiseAffineFn> {
    reconstruct(data).map(|r| r.value)
}

/// The affine `φ` with `v2 = v1 + φ`, if any.
pub fn equal_up_to_affine(v1: &PiecewiseAffineFn, v2: &PiecewiseAffineFn) -> Option<AffineFn> {
    let matching = v1.subdivision().match_cells(v2.subdivision())?;
    let phi = v2.pieces()[matching[0]].sub(&v1.pieces()[0]);
    matching
        .iter()
        .enumerate()
        .all(|(i, &j)| v2.pieces()[j].sub(&v1.pieces()[i]) == phi)
        .then_some(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn b(coords: &[(i64, i64)]) -> Belief {
        Belief::new(coords.iter().map(|&(p, q)| ratio(p, q)).collect()).unwrap()
    }

    /// Belief over two states from its second coordinate.
    fn b2(p: i64, q: i64) -> Belief {
        Belief::new(vec![int(1) - ratio(p, q), ratio(p, q)]).unwrap()
    }

    fn dist(atoms: &[(Belief, Rational)]) -> PosteriorDistribution {
        PosteriorDistribution::new(atoms.iter().cloned()).unwrap()
    }

    fn rows(r: &[&[i64]]) -> DecisionProblem {
        DecisionProblem::from_rows(
            r.iter()
                .map(|x| x.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap()
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
        rows(&[&[0, 0], &[-1, 1]])
    }

    fn three_cells() -> DecisionProblem {
        rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
    }

    fn data_for(dp: &DecisionProblem, prior: &Belief) -> IdentificationData {
        generate(dp, prior, EdgeCoverage::SpanningTree).unwrap()
    }

    #[test]
    fn affineness_equality_on_dp_a() {
        let sub = dp_a().subdivision().unwrap();
        let eqs = gen_affineness_equalities(&sub, &Belief::uniform(2)).unwrap();
        assert_eq!(eqs.len(), 2);
        let c0 = &eqs[0];
        assert_eq!(c0.tag, StatementTag::CellAffine(0));
        assert_eq!(
            c0.lhs,
            dist(&[
                (b(&[(1, 1), (0, 1)]), ratio(1, 4)),
                (b(&[(1, 2), (1, 2)]), ratio(1, 4)),
                (b(&[(1, 4), (3, 4)]), ratio(1, 2))
            ])
        );
        assert_eq!(
            c0.rhs,
            dist(&[
                (b(&[(3, 4), (1, 4)]), ratio(1, 2)),
                (b(&[(1, 4), (3, 4)]), ratio(1, 2))
            ])
        );
        assert!(eqs.iter().all(|s| s.holds(&dp_a())));
    }

    #[test]
    fn affineness_equality_halves_lambda() {
        // Cell 0 has extremes (1,0), (1/2,1/2) and barycenter (3/4,1/4).
        let sub = dp_a().subdivision().unwrap();
        let prior = b2(1, 20);
        let eqs = gen_affineness_equalities(&sub, &prior).unwrap();
        for s in &eqs {
            assert_eq!(s.lhs.mean(), &prior);
            assert_eq!(s.rhs.mean(), &prior);
        }
        // z(θ2) = (1/20 − λ/4)/(1 − λ) is negative for λ = 1/2 and 1/4.
        let z_mass: Rational = eqs[0]
            .lhs
            .atoms()
            .iter()
            .filter(|a| !sub.cells()[0].geometry.vertices().contains(&a.belief))
            .map(|a| a.prob.clone())
            .sum();
        assert_eq!(z_mass, ratio(7, 8));
    }

    #[test]
    fn single_cell_has_one_equality_and_no_differences() {
        let dp = rows(&[&[1, 2]]);
        let data = data_for(&dp, &b2(1, 3));
        assert_eq!(data.ordinal.len(), 1);
        assert!(data.cardinal.is_empty());
        assert!(satisfies_ordinal(&rows(&[&[5, -3]]), &data));
        let v = reconstruct_value(&data).unwrap();
        assert!(v.pieces()[0].is_zero());
    }

    #[test]
    fn nonaffineness_inequality_on_dp_a() {
        let sub = dp_a().subdivision().unwrap();
        let gts = gen_nonaffineness_inequalities(&sub, &Belief::uniform(2)).unwrap();
        assert_eq!(gts.len(), 1);
        let s = &gts[0];
        assert_eq!(s.tag, StatementTag::PairNonAffine(0, 1));
        assert_eq!(s.rhs, PosteriorDistribution::degenerate(Belief::uniform(2)));
        assert_eq!(
            s.lhs,
            dist(&[
                (b(&[(3, 4), (1, 4)]), ratio(1, 2)),
                (b(&[(1, 4), (3, 4)]), ratio(1, 2))
            ])
        );
        assert_eq!(expected_value(&dp_a(), &s.lhs), ratio(3, 4));
        assert!(s.holds(&dp_a()));
        assert!(!s.holds(&rows(&[&[0, 0]])));
    }

    #[test]
    fn three_cell_problem_has_three_pair_statements() {
        let data = data_for(&three_cells(), &b(&[(1, 5), (1, 2), (3, 10)]));
        let pairs = data
            .ordinal
            .iter()
            .filter(|s| matches!(s.tag, StatementTag::PairNonAffine(..)))
            .count();
        assert_eq!(pairs, 3);
        let sub = extract_subdivision(&data).unwrap();
        assert!(sub.same_geometry(&three_cells().subdivision().unwrap()));
        let edges: Vec<_> = sub.adjacency().iter().map(|e| e.cells).collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn ordinal_verification() {
        let data = data_for(&dp_a(), &Belief::uniform(2));
        assert!(satisfies_ordinal(&dp_a(), &data));
        assert!(satisfies_ordinal(&dp_a().scale(&int(7)).unwrap(), &data));
        // DP-B kinks at the same belief, so its value differs from DP-A's by
        // an affine term and it satisfies the same statements.
        assert!(satisfies_ordinal(&dp_b(), &data));
        let shifted =
            DecisionProblem::from_rows(vec![vec![int(1), int(0)], vec![int(0), int(3)]]).unwrap();
        assert!(!satisfies_ordinal(&shifted, &data));
        assert!(!satisfies_ordinal(&rows(&[&[1, 1]]), &data));
    }

    #[test]
    fn extract_roundtrips() {
        let data = data_for(&dp_a(), &b2(2, 7));
        let sub = extract_subdivision(&data).unwrap();
        assert!(sub.same_geometry(&dp_a().subdivision().unwrap()));
        let one = data_for(&rows(&[&[3, 1]]), &b2(1, 2));
        let sub = extract_subdivision(&one).unwrap();
        assert_eq!(sub.cells().len(), 1);
        assert_eq!(sub.cells()[0].geometry.vertices().len(), 2);
    }

    #[test]
    fn extract_rejects_missing_pairs() {
        let mut data = data_for(&dp_a(), &Belief::uniform(2));
        data.ordinal
            .retain(|s| matches!(s.tag, StatementTag::CellAffine(_)));
        assert!(matches!(
            extract_subdivision(&data),
            Err(Error::MalformedData(_))
        ));
    }

    #[test]
    fn worked_instance_through_explicit_points() {
        let dp = dp_b();
        let sub = dp.subdivision().unwrap();
        let prior = b2(3, 5);
        let d = utility_difference_through_prior(
            &dp,
            &sub,
            &prior,
            (0, 1),
            &b2(1, 4),
            &b2(2, 5),
            &b2(9, 10),
        )
        .unwrap();
        assert_eq!(d.lhs.mass_at(&b2(9, 10)), ratio(7, 13));
        assert_eq!(d.rhs.mass_at(&b2(9, 10)), ratio(2, 5));
        assert_eq!(d.zeta, ratio(36, 325));
        let data = IdentificationData {
            prior: prior.clone(),
            ordinal: gen_ordinal(&sub, &prior).unwrap(),
            cardinal: vec![d],
            root_cell: 0,
        };
        let v = reconstruct_value(&data).unwrap();
        assert!(v.pieces()[0].is_zero());
        assert_eq!(v.pieces()[1], AffineFn::new(vec![int(-1), int(1)]));
        assert_eq!(
            equal_up_to_affine(&dp.value_function().unwrap(), &v),
            Some(AffineFn::zero(2))
        );
    }

    #[test]
    fn explicit_points_are_validated() {
        let dp = dp_b();
        let sub = dp.subdivision().unwrap();
        // Prior outside the segment between x̂ and x_j.
        assert!(utility_difference_through_prior(
            &dp,
            &sub,
            &b2(1, 3),
            (0, 1),
            &b2(1, 4),
            &b2(2, 5),
            &b2(9, 10)
        )
        .is_err());
        // x̂ on the wrong side of the facet.
        assert!(utility_difference_through_prior(
            &dp,
            &sub,
            &b2(3, 5),
            (0, 1),
            &b2(1, 4),
            &b2(11, 20),
            &b2(9, 10)
        )
        .is_err());
    }

    #[test]
    fn default_construction_on_dp_b() {
        let data = data_for(&dp_b(), &b2(3, 5));
        assert_eq!(data.cardinal.len(), 1);
        let d = &data.cardinal[0];
        assert_eq!(d.edge, (0, 1));
        assert_eq!(d.lhs.mass_at(&b2(5, 8)), ratio(1, 3));
        assert_eq!(d.lhs.mass_at(&b2(1, 4)), ratio(1, 6));
        assert_eq!(d.rhs.mass_at(&b2(5, 8)), ratio(1, 4));
        assert_eq!(d.rhs.mass_at(&b2(3, 8)), ratio(1, 4));
        assert_eq!(d.lhs.mass_at(&b2(7, 10)), ratio(1, 2));
        assert_eq!(d.zeta, ratio(1, 48));
        let v = reconstruct_value(&data).unwrap();
        assert_eq!(v.pieces()[1], AffineFn::new(vec![int(-1), int(1)]));
    }

    #[test]
    fn default_construction_on_dp_a() {
        let data = data_for(&dp_a(), &Belief::uniform(2));
        assert_eq!(data.cardinal.len(), 1);
        assert_eq!(data.cardinal[0].zeta, ratio(1, 24));
        let v = reconstruct_value(&data).unwrap();
        assert!(equal_up_to_affine(&dp_a().value_function().unwrap(), &v).is_some());
    }

    #[test]
    fn scaled_data_reconstructs_the_scaled_value() {
        let scaled = dp_b().scale(&int(3)).unwrap();
        let v = reconstruct_value(&data_for(&scaled, &b2(3, 5))).unwrap();
        assert_eq!(v.pieces()[1], AffineFn::new(vec![int(-3), int(3)]));
        assert!(equal_up_to_affine(&dp_b().value_function().unwrap(), &v).is_none());
        assert!(equal_up_to_affine(&scaled.value_function().unwrap(), &v).is_some());
    }

    #[test]
    fn redundant_edges_are_checked() {
        let dp = three_cells();
        let prior = b(&[(1, 3), (1, 3), (1, 3)]);
        let mut data = generate(&dp, &prior, EdgeCoverage::All).unwrap();
        assert_eq!(data.cardinal.len(), 3);
        let r = reconstruct(&data).unwrap();
        assert_eq!(r.tree_edges, vec![(0, 1), (0, 2)]);
        assert_eq!(r.checked_edges, vec![(1, 2)]);
        assert!(equal_up_to_affine(&dp.value_function().unwrap(), &r.value).is_some());
        data.cardinal[2].zeta += ratio(1, 1000);
        assert!(matches!(
            reconstruct(&data),
            Err(Error::InconsistentData(_))
        ));
    }

    #[test]
    fn nonpositive_kink_is_inconsistent() {
        let mut data = data_for(&dp_b(), &b2(3, 5));
        data.cardinal[0].zeta = -data.cardinal[0].zeta.clone();
        assert!(matches!(
            reconstruct(&data),
            Err(Error::InconsistentData(_))
        ));
    }

    #[test]
    fn unreached_cell_is_malformed() {
        let mut data = data_for(&dp_b(), &b2(3, 5));
        data.cardinal.clear();
        assert!(matches!(reconstruct(&data), Err(Error::MalformedData(_))));
    }

    #[test]
    fn equal_up_to_affine_examples() {
        let v = dp_b().value_function().unwrap();
        let plus = |phi: AffineFn| {
            PiecewiseAffineFn::new(
                v.subdivision().clone(),
                v.pieces().iter().map(|p| p.add(&phi)).collect(),
            )
            .unwrap()
        };
        let five = AffineFn::constant(2, int(5));
        assert_eq!(equal_up_to_affine(&v, &plus(five.clone())), Some(five));
        let slope = AffineFn::new(vec![int(3), int(0)]);
        assert_eq!(equal_up_to_affine(&v, &plus(slope.clone())), Some(slope));
        let doubled = dp_b().scale(&int(2)).unwrap().value_function().unwrap();
        assert_eq!(equal_up_to_affine(&v, &doubled), None);
    }

    #[test]
    fn boundary_prior_is_rejected() {
        assert_eq!(
            generate(&dp_b(), &Belief::vertex(2, 0), EdgeCoverage::SpanningTree),
            Err(Error::BoundaryPrior)
        );
    }
}
