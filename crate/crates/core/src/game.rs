//! Two-player normal-form games seen as a pair of decision problems, one per
//! player, with the opponent's actions as states.

use itertools::Itertools;

use crate::decision::{argmax_rows, undominated_rows, DecisionProblem, Subdivision};
use crate::error::{Error, Result};
use crate::geometry::{self, Belief};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

/// Payoffs `u1[a1][a2]` and `u2[a1][a2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    actions1: Vec<String>,
    actions2: Vec<String>,
    u1: Vec<Vec<Rational>>,
    u2: Vec<Vec<Rational>>,
}

fn transpose(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

impl Game {
    /// Each player needs at least two actions, since the opponent's actions
    /// are the states of that player's decision problem.
    pub fn new(
        actions1: Vec<String>,
        actions2: Vec<String>,
        u1: Vec<Vec<Rational>>,
        u2: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let (m1, m2) = (actions1.len(), actions2.len());
        if m1 < 2 || m2 < 2 {
            return Err(Error::InvalidGame(
                "each player needs at least two actions".into(),
            ));
        }
        for (name, u) in [("u1", &u1), ("u2", &u2)] {
            if u.len() != m1 || u.iter().any(|r| r.len() != m2) {
                return Err(Error::InvalidGame(format!("{name} must be {m1}×{m2}")));
            }
        }
        if let Some((a, b)) = (0..m1).tuple_combinations().find(|&(a, b)| u1[a] == u1[b]) {
            return Err(Error::InvalidGame(format!(
                "duplicate action for player 1: {} and {}",
                actions1[a], actions1[b]
            )));
        }
        let cols = transpose(&u2);
        if let Some((a, b)) = (0..m2)
            .tuple_combinations()
            .find(|&(a, b)| cols[a] == cols[b])
        {
            return Err(Error::InvalidGame(format!(
                "duplicate action for player 2: {} and {}",
                actions2[a], actions2[b]
            )));
        }
        Ok(Game {
            actions1,
            actions2,
            u1,
            u2,
        })
    }

    /// Game with labels `r1..` for player 1 and `c1..` for player 2.
    pub fn from_matrices(u1: Vec<Vec<Rational>>, u2: Vec<Vec<Rational>>) -> Result<Self> {
        let m1 = u1.len();
        let m2 = u1.first().map_or(0, Vec::len);
        Game::new(
            (1..=m1).map(|i| format!("r{i}")).collect(),
            (1..=m2).map(|i| format!("c{i}")).collect(),
            u1,
            u2,
        )
    }

    pub fn actions(&self, player: Player) -> &[String] {
        match player {
            Player::One => &self.actions1,
            Player::Two => &self.actions2,
        }
    }

    pub fn u1(&self) -> &[Vec<Rational>] {
        &self.u1
    }

    pub fn u2(&self) -> &[Vec<Rational>] {
        &self.u2
    }

    /// The player's payoff rows: one per own action, one column per opponent
    /// action.
    fn rows(&self, player: Player) -> Vec<Vec<Rational>> {
        match player {
            Player::One => self.u1.clone(),
            Player::Two => transpose(&self.u2),
        }
    }

    /// The opponent plays the role of nature.
    pub fn as_decision_problem(&self, player: Player) -> DecisionProblem {
        DecisionProblem::new(
            self.actions(player.opponent()).to_vec(),
            self.actions(player).to_vec(),
            self.rows(player),
        )
        .expect("validated game")
    }

    /// Exact argmax against the opponent's mixed strategy `sigma`.
    pub fn best_response(&self, player: Player, sigma: &Belief) -> Result<Vec<usize>> {
        let n = self.actions(player.opponent()).len();
        if sigma.num_states() != n {
            return Err(Error::ShapeMismatch(format!(
                "strategy over {} actions, opponent has {n}",
                sigma.num_states()
            )));
        }
        Ok(argmax_rows(&self.rows(player), sigma))
    }

    pub fn br_subdivision_pair(&self) -> Result<SubdivisionPair> {
        Ok(SubdivisionPair {
            player1: self.as_decision_problem(Player::One).subdivision()?,
            player2: self.as_decision_problem(Player::Two).subdivision()?,
        })
    }
}

/// Player 1's subdivision of player 2's mixed strategies, and vice versa.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionPair {
    pub player1: Subdivision,
    pub player2: Subdivision,
}

impl SubdivisionPair {
    pub fn get(&self, player: Player) -> &Subdivision {
        match player {
            Player::One => &self.player1,
            Player::Two => &self.player2,
        }
    }

    pub fn same_geometry(&self, other: &SubdivisionPair) -> bool {
        self.player1.same_geometry(&other.player1) && self.player2.same_geometry(&other.player2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Intersection {
    /// Some action is a best response to every listed strategy.
    Nonempty,
    /// No action is a best response to both listed strategies.
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComparisonTag {
    Cell(usize),
    Pair(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestResponseComparison {
    pub player: Player,
    /// Opponent mixed strategies.
    pub strategies: Vec<Belief>,
    pub relation: Intersection,
    pub tag: ComparisonTag,
}

impl BestResponseComparison {
    pub fn holds(&self, game: &Game) -> Result<bool> {
        let mut common: Option<Vec<usize>> = None;
        for s in &self.strategies {
            let br = game.best_response(self.player, s)?;
            common = Some(match common {
                None => br,
                Some(c) => c.into_iter().filter(|a| br.contains(a)).collect(),
            });
        }
        let nonempty = common.is_some_and(|c| !c.is_empty());
        Ok(nonempty == (self.relation == Intersection::Nonempty))
    }
}

/// Per player and cell, a common best response to the cell's vertices and
/// an interior point; per pair of cells, none common to their interior
/// points.
pub fn gen_br_comparisons(game: &Game) -> Result<Vec<BestResponseComparison>> {
    let pair = game.br_subdivision_pair()?;
    let mut out = Vec::new();
    for player in [Player::One, Player::Two] {
        let sub = pair.get(player);
        let interiors = sub
            .cells()
            .iter()
            .map(|c| geometry::interior_point(&c.geometry))
            .collect::<Result<Vec<_>>>()?;
        for (i, c) in sub.cells().iter().enumerate() {
            let mut strategies = c.geometry.vertices().to_vec();
            strategies.push(interiors[i].clone());
            out.push(BestResponseComparison {
                player,
                strategies,
                relation: Intersection::Nonempty,
                tag: ComparisonTag::Cell(i),
            });
        }
        for (i, j) in (0..sub.cells().len()).tuple_combinations() {
            out.push(BestResponseComparison {
                player,
                strategies: vec![interiors[i].clone(), interiors[j].clone()],
                relation: Intersection::Empty,
                tag: ComparisonTag::Pair(i, j),
            });
        }
    }
    Ok(out)
}

pub fn satisfies_comparisons(game: &Game, collection: &[BestResponseComparison]) -> Result<bool> {
    for c in collection {
        if !c.holds(game)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rows that are a best response to some belief over the surviving columns.
/// Rows identical on those columns are judged together and survive or fall
/// as a group.
fn survivors(rows: &[Vec<Rational>], own: &[usize], opponent: &[usize]) -> Vec<usize> {
    let restricted: Vec<Vec<Rational>> = own
        .iter()
        .map(|&a| opponent.iter().map(|&b| rows[a][b].clone()).collect())
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (k, row) in restricted.iter().enumerate() {
        match classes.iter_mut().find(|c| restricted[c[0]] == *row) {
            Some(c) => c.push(k),
            None => classes.push(vec![k]),
        }
    }
    let reps: Vec<Vec<Rational>> = classes.iter().map(|c| restricted[c[0]].clone()).collect();
    let mut kept: Vec<usize> = undominated_rows(&reps)
        .into_iter()
        .flat_map(|c| classes[c].iter().map(|&k| own[k]))
        .collect();
    kept.sort_unstable();
    kept
}

/// Surviving action sets after each round of simultaneous elimination of
/// never-best responses, starting with the full sets and ending at the
/// fixpoint.
pub fn elimination_rounds(game: &Game) -> Vec<(Vec<usize>, Vec<usize>)> {
    let rows1 = game.rows(Player::One);
    let rows2 = game.rows(Player::Two);
    let mut s1: Vec<usize> = (0..rows1.len()).collect();
    let mut s2: Vec<usize> = (0..rows2.len()).collect();
    let mut rounds = vec![(s1.clone(), s2.clone())];
    loop {
        let n1 = survivors(&rows1, &s1, &s2);
        let n2 = survivors(&rows2, &s2, &s1);
        if n1 == s1 && n2 == s2 {
            return rounds;
        }
        s1 = n1;
        s2 = n2;
        rounds.push((s1.clone(), s2.clone()));
    }
}

/// Rationalizable actions of player 1 and player 2.
pub fn rationalizable(game: &Game) -> (Vec<usize>, Vec<usize>) {
    elimination_rounds(game)
        .pop()
        .expect("at least the initial round")
}
