//! Finite decision problems, their value functions, and the subdivision of
//! the belief simplex into optimality cells.

use std::collections::VecDeque;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{self, Belief, Halfspace, Polytope};
use crate::lp::{Constraint, LinearProgram, LpOutcome, Relation};
use crate::rational::Rational;

/// States `Θ`, actions `A` and the utility matrix `u(a, θ)` (one row per
/// action).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionProblem {
    state_labels: Vec<String>,
    action_labels: Vec<String>,
    utility: Vec<Vec<Rational>>,
}

impl DecisionProblem {
    pub fn new(
        state_labels: Vec<String>,
        action_labels: Vec<String>,
        utility: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let n = state_labels.len();
        if n < 2 {
            return Err(Error::InvalidProblem("at least two states required".into()));
        }
        if utility.is_empty() {
            return Err(Error::InvalidProblem("at least one action required".into()));
        }
        if action_labels.len() != utility.len() {
            return Err(Error::InvalidProblem(format!(
                "{} action labels for {} utility rows",
                action_labels.len(),
                utility.len()
            )));
        }
        if let Some((a, row)) = utility.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidProblem(format!(
                "utility row {a} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (a, b) in (0..utility.len()).tuple_combinations() {
            if utility[a] == utility[b] {
                return Err(Error::InvalidProblem(format!(
                    "duplicate action: {} and {} have identical payoffs",
                    action_labels[a], action_labels[b]
                )));
            }
        }
        Ok(DecisionProblem {
            state_labels,
            action_labels,
            utility,
        })
    }

    /// Problem with generated labels `θ1..`, `a1..`.
    pub fn from_rows(utility: Vec<Vec<Rational>>) -> Result<Self> {
        let n = utility.first().map_or(0, Vec::len);
        let states = (1..=n).map(|i| format!("θ{i}")).collect();
        let actions = (1..=utility.len()).map(|i| format!("a{i}")).collect();
        DecisionProblem::new(states, actions, utility)
    }

    pub fn num_states(&self) -> usize {
        self.state_labels.len()
    }

    pub fn num_actions(&self) -> usize {
        self.utility.len()
    }

    pub fn state_labels(&self) -> &[String] {
        &self.state_labels
    }

    pub fn action_labels(&self) -> &[String] {
        &self.action_labels
    }

    pub fn utility(&self) -> &[Vec<Rational>] {
        &self.utility
    }

    /// Expected utility `E_x u(a, θ)`.
    pub fn payoff(&self, action: usize, x: &Belief) -> Rational {
        x.dot(&self.utility[action])
    }

    /// `V(x) = max_a E_x u(a, θ)`.
    pub fn value_at(&self, x: &Belief) -> Rational {
        (0..self.num_actions())
            .map(|a| self.payoff(a, x))
            .max()
            .expect("at least one action")
    }

    /// Full argmax set at `x`; ties are reported, never broken.
    pub fn optimal_actions(&self, x: &Belief) -> Vec<usize> {
        argmax_rows(&self.utility, x)
    }

    /// Actions strictly optimal at some belief, decided by an exact LP.
    pub fn undominated_actions(&self) -> Vec<usize> {
        undominated_rows(&self.utility)
    }

    /// Entrywise multiplication of the utility matrix by `factor > 0`.
    pub fn scale(&self, factor: &Rational) -> Result<DecisionProblem> {
        if !factor.is_positive() {
            return Err(Error::NonpositiveScale);
        }
        Ok(DecisionProblem {
            utility: self
                .utility
                .iter()
                .map(|row| row.iter().map(|u| u * factor).collect())
                .collect(),
            ..self.clone()
        })
    }

    /// Adds the state-dependent payoff `transfer(θ)` to every action.
    pub fn with_transfer(&self, transfer: &AffineFn) -> Result<DecisionProblem> {
        if transfer.coeffs.len() != self.num_states() {
            return Err(Error::ShapeMismatch("transfer length".into()));
        }
        Ok(DecisionProblem {
            utility: self
                .utility
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&transfer.coeffs)
                        .map(|(u, g)| u + g)
                        .collect()
                })
                .collect(),
            ..self.clone()
        })
    }

    /// The same problem with rows listed in `order`.
    pub fn permute_actions(&self, order: &[usize]) -> Result<DecisionProblem> {
        if order.len() != self.num_actions() || !order.iter().all_unique() {
            return Err(Error::InvalidProblem("not a permutation".into()));
        }
        DecisionProblem::new(
            self.state_labels.clone(),
            order
                .iter()
                .map(|&i| self.action_labels[i].clone())
                .collect(),
            order.iter().map(|&i| self.utility[i].clone()).collect(),
        )
    }

    /// One cell per undominated action, in action-index order.
    pub fn subdivision(&self) -> Result<Subdivision> {
        let n = self.num_states();
        let undominated = self.undominated_actions();
        let mut cells = Vec::with_capacity(undominated.len());
        for &a in &undominated {
            let halfspaces = undominated
                .iter()
                .filter(|&&b| b != a)
                .map(|&b| {
                    let normal = self.utility[a]
                        .iter()
                        .zip(&self.utility[b])
                        .map(|(x, y)| x - y)
                        .collect();
                    Halfspace::new(normal, Rational::zero()).map(|h| h.canonical())
                })
                .collect::<Result<Vec<_>>>()?;
            cells.push(Cell {
                action: a,
                geometry: Polytope::new(n, halfspaces)?,
            });
        }
        Subdivision::from_cells(n, cells)
    }

    pub fn value_function(&self) -> Result<PiecewiseAffineFn> {
        let subdivision = self.subdivision()?;
        let pieces = subdivision
            .cells()
            .iter()
            .map(|c| AffineFn::new(self.utility[c.action].clone()))
            .collect();
        PiecewiseAffineFn::new(subdivision, pieces)
    }

    /// Witness that `other` equals this problem up to relabeling the
    /// undominated actions and adding an action-independent payoff `γ(θ)`.
    pub fn state_transfer_to(&self, other: &DecisionProblem) -> Result<Option<StateTransfer>> {
        if self.num_states() != other.num_states() {
            return Ok(None);
        }
        let mine = self.subdivision()?;
        let theirs = other.subdivision()?;
        let Some(matching) = mine.match_cells(&theirs) else {
            return Ok(None);
        };
        let relabeling: Vec<(usize, usize)> = matching
            .iter()
            .enumerate()
            .map(|(i, &j)| (mine.cells[i].action, theirs.cells[j].action))
            .collect();
        let diff = |(a, b): (usize, usize)| -> Vec<Rational> {
            other.utility[b]
                .iter()
                .zip(&self.utility[a])
                .map(|(x, y)| x - y)
                .collect()
        };
        let gamma = diff(relabeling[0]);
        if relabeling.iter().any(|&pair| diff(pair) != gamma) {
            return Ok(None);
        }
        Ok(Some(StateTransfer {
            relabeling,
            transfer: AffineFn::new(gamma),
        }))
    }
}

/// `(action in self, action in other)` pairs plus the transfer `γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateTransfer {
    pub relabeling: Vec<(usize, usize)>,
    pub transfer: AffineFn,
}

pub(crate) fn argmax_rows(rows: &[Vec<Rational>], x: &Belief) -> Vec<usize> {
    let payoffs: Vec<Rational> = rows.iter().map(|r| x.dot(r)).collect();
    let best = payoffs.iter().max().expect("nonempty").clone();
    payoffs
        .iter()
        .enumerate()
        .filter(|(_, p)| **p == best)
        .map(|(i, _)| i)
        .collect()
}

/// Rows strictly optimal at some point of the simplex. Works for any number
/// of columns, including one.
pub(crate) fn undominated_rows(rows: &[Vec<Rational>]) -> Vec<usize> {
    (0..rows.len())
        .filter(|&a| strictly_optimal_somewhere(rows, a))
        .collect()
}

/// `max t` s.t. `(u_b − u_a)·x + t ≤ 0` for every rival `b`, `Σx = 1`, `x ≥ 0`;
/// the row is undominated iff the optimal margin `t` is positive. The free
/// variable `t` is split as `t⁺ − t⁻`.
fn strictly_optimal_somewhere(rows: &[Vec<Rational>], a: usize) -> bool {
    if rows.len() == 1 {
        return true;
    }
    let n = rows[a].len();
    let mut objective = vec![Rational::zero(); n];
    objective.push(Rational::one());
    objective.push(-Rational::one());
    let mut constraints: Vec<Constraint> = rows
        .iter()
        .enumerate()
        .filter(|(b, _)| *b != a)
        .map(|(_, rb)| {
            let mut coeffs: Vec<Rational> = rb.iter().zip(&rows[a]).map(|(x, y)| x - y).collect();
            coeffs.push(Rational::one());
            coeffs.push(-Rational::one());
            Constraint {
                coeffs,
                relation: Relation::Le,
                rhs: Rational::zero(),
            }
        })
        .collect();
    let mut simplex = vec![Rational::one(); n];
    simplex.push(Rational::zero());
    simplex.push(Rational::zero());
    constraints.push(Constraint {
        coeffs: simplex,
        relation: Relation::Eq,
        rhs: Rational::one(),
    });
    match (LinearProgram {
        objective,
        constraints,
    })
    .solve()
    {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        // The margin is bounded by the payoff range and the simplex is
        // nonempty, so neither case can arise.
        LpOutcome::Unbounded | LpOutcome::Infeasible => unreachable!("bounded feasible LP"),
    }
}

/// Linear function on the simplex, `x ↦ Σ_θ coeffs_θ · x_θ`. Constants are
/// absorbed because coordinates sum to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineFn {
    pub coeffs: Vec<Rational>,
}

impl AffineFn {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        AffineFn { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        AffineFn::new(vec![Rational::zero(); n])
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        AffineFn::new(vec![c; n])
    }

    /// `x ↦ normal·x − offset`, the slack function of `h`.
    pub fn from_halfspace(h: &Halfspace) -> Self {
        AffineFn::new(h.normal().iter().map(|a| a - h.offset()).collect())
    }

    pub fn eval(&self, x: &Belief) -> Rational {
        x.dot(&self.coeffs)
    }

    pub fn add(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, factor: &Rational) -> AffineFn {
        AffineFn::new(self.coeffs.iter().map(|a| a * factor).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Optimality region of one undominated action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// Index of the action in its problem. Subdivisions recovered from data
    /// carry no actions and use the cell's own index here.
    pub action: usize,
    pub geometry: Polytope,
}

/// Two cells sharing a codimension-one facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    /// `(i, j)` with `i < j`.
    pub cells: (usize, usize),
    pub shared: Polytope,
    /// Tight on the shared facet, nonnegative on cell `j`.
    pub facet: Halfspace,
}

impl Adjacency {
    /// The facet halfspace oriented to be nonnegative on `toward`.
    pub fn facet_toward(&self, toward: usize) -> Halfspace {
        if toward == self.cells.1 {
            self.facet.clone()
        } else {
            self.facet.negated()
        }
    }

    pub fn other(&self, cell: usize) -> Option<usize> {
        match self.cells {
            (a, b) if a == cell => Some(b),
            (a, b) if b == cell => Some(a),
            _ => None,
        }
    }
}

/// Cells covering the simplex with pairwise disjoint interiors, plus their
/// facet adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    num_states: usize,
    cells: Vec<Cell>,
    adjacency: Vec<Adjacency>,
}

impl Subdivision {
    /// Computes adjacency and checks that it is connected.
    pub fn from_cells(num_states: usize, cells: Vec<Cell>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut adjacency = Vec::new();
        for (i, j) in (0..cells.len()).tuple_combinations() {
            let (ci, cj) = (&cells[i].geometry, &cells[j].geometry);
            // A shared facet has at least n−1 vertices, all common to both
            // cells; skip the exact intersection otherwise.
            let common = ci
                .vertices()
                .iter()
                .filter(|v| cj.vertices().binary_search(v).is_ok())
                .count();
            if common + 1 < num_states {
                continue;
            }
            if let Some((shared, facet)) = geometry::facet_between(ci, cj) {
                adjacency.push(Adjacency {
                    cells: (i, j),
                    shared,
                    facet,
                });
            }
        }
        let sub = Subdivision {
            num_states,
            cells,
            adjacency,
        };
        if sub.bfs_order(0).len() != sub.cells.len() {
            return Err(Error::Disconnected);
        }
        Ok(sub)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn adjacency(&self) -> &[Adjacency] {
        &self.adjacency
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&Adjacency> {
        let key = (a.min(b), a.max(b));
        self.adjacency.iter().find(|e| e.cells == key)
    }

    pub fn neighbors(&self, cell: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .adjacency
            .iter()
            .filter_map(|e| e.other(cell))
            .collect();
        out.sort_unstable();
        out
    }

    /// Cells reachable from `root` in breadth-first order, lowest index first.
    pub fn bfs_order(&self, root: usize) -> Vec<usize> {
        self.bfs_tree(root).0
    }

    /// Breadth-first visiting order plus `(parent, child)` tree edges.
    pub fn bfs_tree(&self, root: usize) -> (Vec<usize>, Vec<(usize, usize)>) {
        let mut seen = vec![false; self.cells.len()];
        let mut order = Vec::new();
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(c) = queue.pop_front() {
            order.push(c);
            for nb in self.neighbors(c) {
                if !seen[nb] {
                    seen[nb] = true;
                    edges.push((c, nb));
                    queue.push_back(nb);
                }
            }
        }
        (order, edges)
    }

    /// Indices of cells containing `x`.
    pub fn cells_containing(&self, x: &Belief) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].geometry.contains(x))
            .collect()
    }

    /// For each of our cells, the index of the geometrically equal cell in
    /// `other`; `None` unless the two are the same up to relabeling.
    pub fn match_cells(&self, other: &Subdivision) -> Option<Vec<usize>> {
        if self.num_states != other.num_states || self.cells.len() != other.cells.len() {
            return None;
        }
        let mut used = vec![false; other.cells.len()];
        let mut matching = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let j = (0..other.cells.len())
                .find(|&j| !used[j] && other.cells[j].geometry.same_geometry(&c.geometry))?;
            used[j] = true;
            matching.push(j);
        }
        Some(matching)
    }

    /// Same cells, compared by vertex sets and ignoring order and actions.
    pub fn same_geometry(&self, other: &Subdivision) -> bool {
        self.match_cells(other).is_some()
    }
}

/// Convex piecewise-affine function: one affine piece per cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseAffineFn {
    subdivision: Subdivision,
    pieces: Vec<AffineFn>,
}

impl PiecewiseAffineFn {
    /// Checks continuity across shared facets and that each cell's piece is
    /// the maximum of all pieces on that cell.
    pub fn new(subdivision: Subdivision, pieces: Vec<AffineFn>) -> Result<Self> {
        if pieces.len() != subdivision.cells.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} pieces for {} cells",
                pieces.len(),
                subdivision.cells.len()
            )));
        }
        for e in &subdivision.adjacency {
            let (i, j) = e.cells;
            if e.shared
                .vertices()
                .iter()
                .any(|v| pieces[i].eval(v) != pieces[j].eval(v))
            {
                return Err(Error::InconsistentData(format!(
                    "pieces of cells {i} and {j} disagree on their shared facet"
                )));
            }
        }
        for (i, cell) in subdivision.cells.iter().enumerate() {
            for v in cell.geometry.vertices() {
                let own = pieces[i].eval(v);
                if pieces.iter().any(|p| p.eval(v) > own) {
                    return Err(Error::InconsistentData(format!(
                        "piece of cell {i} is not maximal on its cell"
                    )));
                }
            }
        }
        Ok(PiecewiseAffineFn {
            subdivision,
            pieces,
        })
    }

    pub fn subdivision(&self) -> &Subdivision {
        &self.subdivision
    }

    pub fn pieces(&self) -> &[AffineFn] {
        &self.pieces
    }

    /// Maximum over pieces, which equals the cell's own piece on every cell.
    pub fn eval(&self, x: &Belief) -> Rational {
        self.pieces
            .iter()
            .map(|p| p.eval(x))
            .max()
            .expect("at least one piece")
    }
}
