//! Exact polytopes inside the probability simplex.
//!
//! A polytope is an H-representation (a list of [`Halfspace`]s implicitly
//! intersected with the simplex) together with its cached vertex list. Vertex
//! enumeration is brute force over subsets of tight constraints, which is
//! exact and fast enough for the small state spaces used here (at most
//! [`MAX_STATES`] states).

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{self, Rational};

/// Largest state count accepted by [`vertices_of`].
pub const MAX_STATES: usize = 6;

/// A point of the probability simplex: nonnegative, summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Belief(Vec<Rational>);

impl Belief {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidBelief("no coordinates".into()));
        }
        if coords.iter().any(Signed::is_negative) {
            return Err(Error::InvalidBelief("negative coordinate".into()));
        }
        let total: Rational = coords.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidBelief(format!(
                "coordinates sum to {total}, not 1"
            )));
        }
        Ok(Belief(coords))
    }

    pub fn uniform(n: usize) -> Self {
        let w = Rational::one() / rational::int(n as i64);
        Belief(vec![w; n])
    }

    /// The degenerate belief concentrated on state `k`.
    pub fn vertex(n: usize, k: usize) -> Self {
        let mut coords = vec![Rational::zero(); n];
        coords[k] = Rational::one();
        Belief(coords)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn num_states(&self) -> usize {
        self.0.len()
    }

    /// All coordinates strictly positive.
    pub fn is_interior(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }

    pub fn dot(&self, weights: &[Rational]) -> Rational {
        rational::dot(&self.0, weights)
    }

    /// Used for combinations that preserve the simplex by construction.
    pub(crate) fn from_coords_unchecked(coords: Vec<Rational>) -> Self {
        debug_assert!(Belief::new(coords.clone()).is_ok());
        Belief(coords)
    }
}

impl std::fmt::Display for Belief {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.0.iter().join(", "))
    }
}

/// `{x : normal · x ≥ offset}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfspace {
    normal: Vec<Rational>,
    offset: Rational,
}

impl Halfspace {
    /// Rejects normals that are constant across coordinates: on the simplex
    /// those describe the empty set or the whole simplex.
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Result<Self> {
        if normal.iter().all_equal() {
            return Err(Error::DegenerateHalfspace);
        }
        Ok(Halfspace { normal, offset })
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn num_states(&self) -> usize {
        self.normal.len()
    }

    /// `normal · x − offset`; nonnegative exactly on the halfspace.
    pub fn slack(&self, x: &Belief) -> Rational {
        x.dot(&self.normal) - &self.offset
    }

    pub fn contains(&self, x: &Belief) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn negated(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.iter().map(|v| -v).collect(),
            offset: -self.offset.clone(),
        }
    }

    /// The same set on the simplex in normal form: last normal coordinate
    /// zero (adding `t·1` to the normal and `t` to the offset does not change
    /// the set because coordinates sum to one), then scaled so the largest
    /// absolute normal entry is one.
    pub fn canonical(&self) -> Halfspace {
        let shift = self.normal.last().cloned().unwrap_or_else(Rational::zero);
        let normal: Vec<Rational> = self.normal.iter().map(|v| v - &shift).collect();
        let offset = &self.offset - &shift;
        let scale = rational::max_abs(&normal);
        Halfspace {
            normal: normal.iter().map(|v| v / &scale).collect(),
            offset: offset / scale,
        }
    }

    fn simplex_face(n: usize, k: usize) -> Halfspace {
        let mut normal = vec![Rational::zero(); n];
        normal[k] = Rational::one();
        Halfspace {
            normal,
            offset: Rational::zero(),
        }
    }
}

impl std::fmt::Display for Halfspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}) · x ≥ {}",
            self.normal.iter().join(", "),
            self.offset
        )
    }
}

/// A polytope within the simplex, with its vertices enumerated eagerly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    num_states: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Belief>,
}

impl Polytope {
    pub fn new(num_states: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if let Some(h) = halfspaces.iter().find(|h| h.num_states() != num_states) {
            return Err(Error::ShapeMismatch(format!(
                "halfspace over {} states in a {num_states}-state polytope",
                h.num_states()
            )));
        }
        let vertices = vertices_of(num_states, &halfspaces)?;
        Ok(Polytope {
            num_states,
            halfspaces,
            vertices,
        })
    }

    /// The whole simplex.
    pub fn simplex(num_states: usize) -> Result<Self> {
        Polytope::new(num_states, Vec::new())
    }

    /// H-representation of the convex hull of full-dimensional point sets.
    /// Fails if the points do not span the simplex's affine hull or are not
    /// in convex position.
    pub fn hull(num_states: usize, points: &[Belief]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if dimension(points)? + 1 != num_states {
            return Err(Error::InvalidConstruction(
                "hull points are not full-dimensional".into(),
            ));
        }
        let mut facets: Vec<Halfspace> = Vec::new();
        for subset in points.iter().combinations(num_states - 1) {
            let Some(h) = hyperplane_through(num_states, &subset) else {
                continue;
            };
            let slacks: Vec<Rational> = points.iter().map(|p| h.slack(p)).collect();
            let h = if slacks.iter().all(|s| !s.is_negative()) {
                h
            } else if slacks.iter().all(|s| !s.is_positive()) {
                h.negated()
            } else {
                continue;
            };
            let h = h.canonical();
            if !facets.contains(&h) {
                facets.push(h);
            }
        }
        let poly = Polytope::new(num_states, facets)?;
        let mut expected: Vec<Belief> = points.to_vec();
        expected.sort();
        expected.dedup();
        if poly.vertices != expected {
            return Err(Error::InvalidConstruction(
                "hull points are not in convex position".into(),
            ));
        }
        Ok(poly)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Extreme points in lexicographic order.
    pub fn vertices(&self) -> &[Belief] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension, `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        dimension(&self.vertices).ok()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == Some(self.num_states - 1)
    }

    pub fn contains(&self, x: &Belief) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Membership in the topological interior (relative to the simplex's
    /// affine hull). Only meaningful for full-dimensional polytopes.
    pub fn contains_interior(&self, x: &Belief) -> bool {
        x.is_interior() && self.halfspaces.iter().all(|h| h.slack(x).is_positive())
    }

    /// Same vertex set; halfspace lists may differ.
    pub fn same_geometry(&self, other: &Polytope) -> bool {
        self.vertices == other.vertices
    }
}

/// All extreme points of `{x ∈ Δ : h·x ≥ c for every h}`, deduplicated and in
/// lexicographic order; empty iff the set is empty.
pub fn vertices_of(num_states: usize, halfspaces: &[Halfspace]) -> Result<Vec<Belief>> {
    let n = num_states;
    if n > MAX_STATES {
        return Err(Error::DimensionTooLarge {
            got: n,
            max: MAX_STATES,
        });
    }
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut constraints: Vec<Halfspace> = Vec::new();
    for h in halfspaces
        .iter()
        .cloned()
        .chain((0..n).map(|k| Halfspace::simplex_face(n, k)))
    {
        let c = h.canonical();
        if !constraints.contains(&c) {
            constraints.push(c);
        }
    }
    let ones = vec![Rational::one(); n];
    let mut found = BTreeSet::new();
    for active in constraints.iter().combinations(n - 1) {
        let mut a: Vec<Vec<Rational>> = active.iter().map(|h| h.normal.clone()).collect();
        let mut b: Vec<Rational> = active.iter().map(|h| h.offset.clone()).collect();
        a.push(ones.clone());
        b.push(Rational::one());
        let Some(x) = linalg::solve(&a, &b) else {
            continue;
        };
        if x.iter().any(Signed::is_negative) {
            continue;
        }
        let x = Belief(x);
        if halfspaces.iter().all(|h| h.contains(&x)) {
            found.insert(x);
        }
    }
    Ok(found.into_iter().collect())
}

/// Affine dimension of a point set.
pub fn dimension(points: &[Belief]) -> Result<usize> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.0.iter().zip(&first.0).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        return Ok(0);
    }
    Ok(linalg::rank(diffs))
}

/// Unweighted average.
pub fn barycenter(points: &[Belief]) -> Result<Belief> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let w = Rational::one() / rational::int(points.len() as i64);
    let terms: Vec<(Rational, &[Rational])> =
        points.iter().map(|p| (w.clone(), p.coords())).collect();
    Ok(Belief(rational::combine(&terms)))
}

/// Vertex barycenter: a deterministic relative-interior point.
pub fn interior_point(poly: &Polytope) -> Result<Belief> {
    if poly.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    barycenter(&poly.vertices)
}

/// Shared facet of two full-dimensional polytopes, when their intersection
/// has codimension one. The returned halfspace is in canonical form, holds on
/// `p2` and is tight exactly on the facet's hyperplane.
pub fn facet_between(p1: &Polytope, p2: &Polytope) -> Option<(Polytope, Halfspace)> {
    let n = p1.num_states;
    if n < 2 || p2.num_states != n {
        return None;
    }
    let combined: Vec<Halfspace> = p1
        .halfspaces
        .iter()
        .chain(&p2.halfspaces)
        .cloned()
        .collect();
    let shared = Polytope::new(n, combined).ok()?;
    if shared.dimension()? != n - 2 {
        return None;
    }
    let support: Vec<&Belief> = shared.vertices.iter().collect();
    let h = hyperplane_through(n, &support)?;
    let probe = interior_point(p2).ok()?;
    let s = h.slack(&probe);
    let h = if s.is_positive() {
        h
    } else if s.is_negative() {
        h.negated()
    } else {
        return None;
    };
    Some((shared, h.canonical()))
}

/// The unique hyperplane (within the simplex's affine hull) through points
/// spanning an (n−2)-dimensional affine subspace.
fn hyperplane_through(n: usize, points: &[&Belief]) -> Option<Halfspace> {
    // Unknowns (a_1 .. a_{n-1}, c) with a_n fixed at zero.
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut row: Vec<Rational> = p.0[..n - 1].to_vec();
            row.push(-Rational::one());
            row
        })
        .collect();
    let ns = linalg::nullspace(&rows, n);
    if ns.len() != 1 {
        return None;
    }
    let v = &ns[0];
    let mut normal = v[..n - 1].to_vec();
    normal.push(Rational::zero());
    Halfspace::new(normal, v[n - 1].clone()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn b(coords: &[(i64, i64)]) -> Belief {
        Belief::new(coords.iter().map(|&(p, q)| ratio(p, q)).collect()).unwrap()
    }

    fn hs(normal: &[i64], offset: Rational) -> Halfspace {
        Halfspace::new(normal.iter().map(|&x| int(x)).collect(), offset).unwrap()
    }

    #[test]
    fn belief_validation() {
        assert!(Belief::new(vec![ratio(1, 2), ratio(1, 2)]).is_ok());
        assert!(Belief::new(vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(Belief::new(vec![int(2), int(-1)]).is_err());
        assert!(Belief::new(vec![]).is_err());
        assert!(!Belief::vertex(3, 1).is_interior());
        assert!(Belief::uniform(3).is_interior());
    }

    #[test]
    fn degenerate_halfspace_rejected() {
        assert_eq!(
            Halfspace::new(vec![int(2), int(2)], int(1)),
            Err(Error::DegenerateHalfspace)
        );
    }

    #[test]
    fn vertices_of_interval() {
        let v = vertices_of(2, &[hs(&[1, 0], ratio(1, 2))]).unwrap();
        assert_eq!(v, vec![b(&[(1, 2), (1, 2)]), b(&[(1, 1), (0, 1)])]);
    }

    #[test]
    fn vertices_of_whole_simplex() {
        let v = vertices_of(2, &[]).unwrap();
        assert_eq!(v, vec![b(&[(0, 1), (1, 1)]), b(&[(1, 1), (0, 1)])]);
    }

    #[test]
    fn vertices_of_maximal_first_coordinate_region() {
        let v = vertices_of(3, &[hs(&[1, -1, 0], int(0)), hs(&[1, 0, -1], int(0))]).unwrap();
        let mut expected = vec![
            b(&[(1, 1), (0, 1), (0, 1)]),
            b(&[(1, 2), (1, 2), (0, 1)]),
            b(&[(1, 2), (0, 1), (1, 2)]),
            b(&[(1, 3), (1, 3), (1, 3)]),
        ];
        expected.sort();
        assert_eq!(v, expected);
    }

    #[test]
    fn vertices_of_infeasible_is_empty() {
        let v = vertices_of(2, &[hs(&[1, 0], int(2))]).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn vertices_of_rejects_large_dimension() {
        assert_eq!(
            vertices_of(7, &[]),
            Err(Error::DimensionTooLarge { got: 7, max: 6 })
        );
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(
            dimension(&[b(&[(1, 1), (0, 1)]), b(&[(0, 1), (1, 1)])]).unwrap(),
            1
        );
        assert_eq!(dimension(&[b(&[(1, 2), (1, 2)])]).unwrap(), 0);
        let corners: Vec<Belief> = (0..3).map(|k| Belief::vertex(3, k)).collect();
        assert_eq!(dimension(&corners).unwrap(), 2);
        assert_eq!(dimension(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn barycenter_examples() {
        assert_eq!(
            barycenter(&[b(&[(1, 1), (0, 1)]), b(&[(0, 1), (1, 1)])]).unwrap(),
            b(&[(1, 2), (1, 2)])
        );
        assert_eq!(
            barycenter(&[b(&[(1, 2), (1, 2)]), b(&[(1, 1), (0, 1)])]).unwrap(),
            b(&[(3, 4), (1, 4)])
        );
        let pts = [
            b(&[(1, 1), (0, 1), (0, 1)]),
            b(&[(1, 2), (1, 2), (0, 1)]),
            b(&[(1, 2), (0, 1), (1, 2)]),
            b(&[(1, 3), (1, 3), (1, 3)]),
        ];
        assert_eq!(barycenter(&pts).unwrap(), b(&[(7, 12), (5, 24), (5, 24)]));
        assert_eq!(barycenter(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn interior_point_examples() {
        let interval = Polytope::new(2, vec![hs(&[1, 0], ratio(1, 2))]).unwrap();
        assert_eq!(interior_point(&interval).unwrap(), b(&[(3, 4), (1, 4)]));

        let point = Polytope::new(
            2,
            vec![hs(&[1, 0], ratio(1, 2)), hs(&[-1, 0], ratio(-1, 2))],
        )
        .unwrap();
        assert_eq!(interior_point(&point).unwrap(), b(&[(1, 2), (1, 2)]));

        let region =
            Polytope::new(3, vec![hs(&[1, -1, 0], int(0)), hs(&[1, 0, -1], int(0))]).unwrap();
        let x = interior_point(&region).unwrap();
        assert_eq!(x, b(&[(7, 12), (5, 24), (5, 24)]));
        assert!(region.contains_interior(&x));

        let empty = Polytope::new(2, vec![hs(&[1, 0], int(2))]).unwrap();
        assert_eq!(interior_point(&empty), Err(Error::EmptyPolytope));
    }

    #[test]
    fn facet_between_adjacent_intervals() {
        let c1 = Polytope::new(2, vec![hs(&[1, 0], ratio(1, 2))]).unwrap();
        let c2 = Polytope::new(2, vec![hs(&[-1, 0], ratio(-1, 2))]).unwrap();
        let (shared, h) = facet_between(&c1, &c2).unwrap();
        assert_eq!(shared.vertices(), &[b(&[(1, 2), (1, 2)])]);
        assert_eq!(h, hs(&[-1, 0], ratio(-1, 2)));
        let (_, h_rev) = facet_between(&c2, &c1).unwrap();
        assert_eq!(h_rev, h.negated());
    }

    #[test]
    fn facet_between_requires_codimension_one() {
        // Cells of the 3-state simplex meeting only at the corner e_1.
        let near = Polytope::new(
            3,
            vec![hs(&[1, 0, 0], ratio(1, 2)), hs(&[0, 1, -1], int(0))],
        )
        .unwrap();
        let far = Polytope::new(
            3,
            vec![hs(&[1, 0, 0], ratio(1, 2)), hs(&[0, -1, 1], int(0))],
        )
        .unwrap();
        assert!(facet_between(&near, &far).is_some());
        let a = Polytope::new(3, vec![hs(&[0, 1, 0], ratio(1, 2))]).unwrap();
        let c = Polytope::new(3, vec![hs(&[0, 0, 1], ratio(1, 2))]).unwrap();
        // Only the vertex (0, 1/2, 1/2) is shared.
        assert!(facet_between(&a, &c).is_none());
        let left = Polytope::new(2, vec![hs(&[1, 0], ratio(3, 4))]).unwrap();
        let right = Polytope::new(2, vec![hs(&[-1, 0], ratio(-1, 4))]).unwrap();
        assert!(facet_between(&left, &right).is_none());
    }

    #[test]
    fn hull_recovers_h_representation() {
        let region =
            Polytope::new(3, vec![hs(&[1, -1, 0], int(0)), hs(&[1, 0, -1], int(0))]).unwrap();
        let hull = Polytope::hull(3, region.vertices()).unwrap();
        assert!(hull.same_geometry(&region));
        let mut with_inner = region.vertices().to_vec();
        with_inner.push(interior_point(&region).unwrap());
        assert!(Polytope::hull(3, &with_inner).is_err());
    }

    #[test]
    fn canonical_form_preserves_set() {
        let h = hs(&[3, 5, 1], int(2));
        let c = h.canonical();
        assert_eq!(c.normal().last().unwrap(), &int(0));
        assert_eq!(rational::max_abs(c.normal()), int(1));
        for x in [
            Belief::uniform(3),
            Belief::vertex(3, 0),
            b(&[(1, 5), (3, 5), (1, 5)]),
        ] {
            assert_eq!(h.contains(&x), c.contains(&x));
            assert_eq!(h.slack(&x).is_zero(), c.slack(&x).is_zero());
        }
    }
}
