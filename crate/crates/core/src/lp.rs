//! Two-phase dense tableau simplex over exact rationals.
//!
//! Bland's rule (lowest-index entering and leaving variable) is used
//! throughout, so the method terminates on degenerate programs without any
//! tolerance.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective · y` subject to the constraints and `y ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&prow) {
                *x -= &f * p;
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    fn value(&self, obj: &[Rational]) -> Rational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .map(|(&b, v)| &obj[b] * v)
            .sum()
    }

    fn maximize(&mut self, obj: &[Rational], allowed: &[bool]) -> Phase {
        let ncols = obj.len();
        loop {
            let entering = (0..ncols).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = obj[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() {
                        reduced -= &obj[b] * &self.rows[i][j];
                    }
                }
                reduced.is_positive()
            });
            let Some(c) = entering else {
                return Phase::Optimal;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((r, _)) => self.pivot(r, c),
                None => return Phase::Unbounded,
            }
        }
    }
}

impl LinearProgram {
    pub fn solve(&self) -> LpOutcome {
        let nv = self.objective.len();
        let m = self.constraints.len();

        // Normalize to nonnegative right-hand sides.
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = self
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|x| -x).collect(), rel, -c.rhs.clone())
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();

        let n_slack = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Eq)
            .count();
        let n_art = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Le)
            .count();
        let ncols = nv + n_slack + n_art;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut a) = (nv, nv + n_slack);
        for (coeffs, rel, b) in normalized {
            let mut row = coeffs;
            row.resize(ncols, Rational::zero());
            match rel {
                Relation::Le => {
                    row[s] = Rational::from_integer(1.into());
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = Rational::from_integer((-1).into());
                    s += 1;
                    row[a] = Rational::from_integer(1.into());
                    basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = Rational::from_integer(1.into());
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        let mut t = Tableau { rows, rhs, basis };
        let is_art = |j: usize| j >= nv + n_slack;

        if n_art > 0 {
            let phase1: Vec<Rational> = (0..ncols)
                .map(|j| {
                    if is_art(j) {
                        Rational::from_integer((-1).into())
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let all = vec![true; ncols];
            t.maximize(&phase1, &all);
            if t.value(&phase1).is_negative() {
                return LpOutcome::Infeasible;
            }
            // Drive zero-level artificials out of the basis; drop redundant rows.
            let mut i = 0;
            while i < t.rows.len() {
                if is_art(t.basis[i]) {
                    match (0..nv + n_slack).find(|&j| !t.rows[i][j].is_zero()) {
                        Some(j) => t.pivot(i, j),
                        None => {
                            t.rows.remove(i);
                            t.rhs.remove(i);
                            t.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }

        let mut obj = self.objective.clone();
        obj.resize(ncols, Rational::zero());
        let allowed: Vec<bool> = (0..ncols).map(|j| !is_art(j)).collect();
        match t.maximize(&obj, &allowed) {
            Phase::Unbounded => LpOutcome::Unbounded,
            Phase::Optimal => {
                let mut point = vec![Rational::zero(); nv];
                for (i, &b) in t.basis.iter().enumerate() {
                    if b < nv {
                        point[b] = t.rhs[i].clone();
                    }
                }
                LpOutcome::Optimal {
                    value: t.value(&obj),
                    point,
                }
            }
        }
    }
}
