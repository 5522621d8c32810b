//! JSON documents read and written by the command line. Every rational is a
//! `"p/q"` or integer string.

use serde::{Deserialize, Serialize};
use voi::{
    AffineFn, Belief, BestResponseComparison, Comparison, ComparisonTag, DecisionProblem,
    Experiment, Game, Halfspace, IdentificationData, Intersection, OrderedExpectation, Player,
    PosteriorDistribution, Preference, PricedExperiment, RankedExperiment, Rational, StatementTag,
    Subdivision, UtilityDifference,
};

use crate::CliError;

pub fn rational(text: &str) -> Result<Rational, CliError> {
    Ok(voi::parse_rational(text)?)
}

pub fn rationals(texts: &[String]) -> Result<Vec<Rational>, CliError> {
    texts.iter().map(|t| rational(t)).collect()
}

pub fn matrix(rows: &[Vec<String>]) -> Result<Vec<Vec<Rational>>, CliError> {
    rows.iter().map(|r| rationals(r)).collect()
}

pub fn belief(texts: &[String]) -> Result<Belief, CliError> {
    Ok(Belief::new(rationals(texts)?)?)
}

pub fn show(r: &Rational) -> String {
    r.to_string()
}

pub fn show_all(rs: &[Rational]) -> Vec<String> {
    rs.iter().map(show).collect()
}

pub fn show_matrix(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| show_all(r)).collect()
}

pub fn show_belief(b: &Belief) -> Vec<String> {
    show_all(b.coords())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub utility: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<Vec<String>>,
}

impl ProblemFile {
    pub fn problem(&self) -> Result<DecisionProblem, CliError> {
        Ok(DecisionProblem::new(
            self.states.clone(),
            self.actions.clone(),
            matrix(&self.utility)?,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDto {
    pub belief: Vec<String>,
    pub prob: String,
}

pub fn distribution_dto(f: &PosteriorDistribution) -> Vec<AtomDto> {
    f.atoms()
        .iter()
        .map(|a| AtomDto {
            belief: show_belief(&a.belief),
            prob: show(&a.prob),
        })
        .collect()
}

pub fn distribution(atoms: &[AtomDto]) -> Result<PosteriorDistribution, CliError> {
    let parsed = atoms
        .iter()
        .map(|a| Ok((belief(&a.belief)?, rational(&a.prob)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(PosteriorDistribution::new(parsed)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagDto {
    CellAffine(usize),
    PairNonAffine(usize, usize),
}

impl From<StatementTag> for TagDto {
    fn from(t: StatementTag) -> Self {
        match t {
            StatementTag::CellAffine(i) => TagDto::CellAffine(i),
            StatementTag::PairNonAffine(i, j) => TagDto::PairNonAffine(i, j),
        }
    }
}

impl From<TagDto> for StatementTag {
    fn from(t: TagDto) -> Self {
        match t {
            TagDto::CellAffine(i) => StatementTag::CellAffine(i),
            TagDto::PairNonAffine(i, j) => StatementTag::PairNonAffine(i, j),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationDto {
    #[serde(rename = "EQ")]
    Eq,
    #[serde(rename = "GT")]
    Gt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderedDto {
    pub relation: RelationDto,
    pub tag: TagDto,
    pub lhs: Vec<AtomDto>,
    pub rhs: Vec<AtomDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CardinalDto {
    pub edge: [usize; 2],
    pub zeta: String,
    pub lhs: Vec<AtomDto>,
    pub rhs: Vec<AtomDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signals: Option<Vec<String>>,
    pub likelihood: Vec<Vec<String>>,
}

impl ExperimentFile {
    pub fn from_experiment(e: &Experiment) -> Self {
        ExperimentFile {
            signals: Some(e.signal_labels().to_vec()),
            likelihood: show_matrix(e.likelihood()),
        }
    }

    pub fn experiment(&self) -> Result<Experiment, CliError> {
        let rows = matrix(&self.likelihood)?;
        Ok(match &self.signals {
            Some(labels) => Experiment::new(labels.clone(), rows)?,
            None => Experiment::from_rows(rows)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PreferenceDto {
    #[serde(rename = "PREFERRED")]
    Preferred,
    #[serde(rename = "INDIFFERENT")]
    Indifferent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankedDto {
    pub relation: PreferenceDto,
    pub tag: TagDto,
    pub lhs: ExperimentFile,
    pub rhs: ExperimentFile,
}

impl RankedDto {
    pub fn from_ranked(r: &RankedExperiment) -> Self {
        RankedDto {
            relation: match r.relation {
                Preference::Strict => PreferenceDto::Preferred,
                Preference::Indifferent => PreferenceDto::Indifferent,
            },
            tag: r.tag.into(),
            lhs: ExperimentFile::from_experiment(&r.lhs),
            rhs: ExperimentFile::from_experiment(&r.rhs),
        }
    }

    pub fn ranked(&self) -> Result<RankedExperiment, CliError> {
        Ok(RankedExperiment {
            lhs: self.lhs.experiment()?,
            rhs: self.rhs.experiment()?,
            relation: match self.relation {
                PreferenceDto::Preferred => Preference::Strict,
                PreferenceDto::Indifferent => Preference::Indifferent,
            },
            tag: self.tag.into(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PricedDto {
    pub edge: [usize; 2],
    pub price: String,
    pub lhs: ExperimentFile,
    pub rhs: ExperimentFile,
}

impl PricedDto {
    pub fn from_priced(p: &PricedExperiment) -> Self {
        PricedDto {
            edge: [p.edge.0, p.edge.1],
            price: show(&p.price),
            lhs: ExperimentFile::from_experiment(&p.lhs),
            rhs: ExperimentFile::from_experiment(&p.rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataFile {
    pub prior: Vec<String>,
    pub root_cell: usize,
    pub ordinal: Vec<OrderedDto>,
    pub cardinal: Vec<CardinalDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranked_experiments: Option<Vec<RankedDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priced_experiments: Option<Vec<PricedDto>>,
}

impl DataFile {
    pub fn from_data(data: &IdentificationData) -> Self {
        DataFile {
            prior: show_belief(&data.prior),
            root_cell: data.root_cell,
            ordinal: data
                .ordinal
                .iter()
                .map(|s| OrderedDto {
                    relation: match s.relation {
                        Comparison::Eq => RelationDto::Eq,
                        Comparison::Gt => RelationDto::Gt,
                    },
                    tag: s.tag.into(),
                    lhs: distribution_dto(&s.lhs),
                    rhs: distribution_dto(&s.rhs),
                })
                .collect(),
            cardinal: data
                .cardinal
                .iter()
                .map(|d| CardinalDto {
                    edge: [d.edge.0, d.edge.1],
                    zeta: show(&d.zeta),
                    lhs: distribution_dto(&d.lhs),
                    rhs: distribution_dto(&d.rhs),
                })
                .collect(),
            ranked_experiments: None,
            priced_experiments: None,
        }
    }

    pub fn data(&self) -> Result<IdentificationData, CliError> {
        let ordinal = self
            .ordinal
            .iter()
            .map(|s| {
                Ok(OrderedExpectation {
                    lhs: distribution(&s.lhs)?,
                    rhs: distribution(&s.rhs)?,
                    relation: match s.relation {
                        RelationDto::Eq => Comparison::Eq,
                        RelationDto::Gt => Comparison::Gt,
                    },
                    tag: s.tag.into(),
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let cardinal = self
            .cardinal
            .iter()
            .map(|d| {
                Ok(UtilityDifference {
                    lhs: distribution(&d.lhs)?,
                    rhs: distribution(&d.rhs)?,
                    zeta: rational(&d.zeta)?,
                    edge: (d.edge[0], d.edge[1]),
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(IdentificationData {
            prior: belief(&self.prior)?,
            ordinal,
            cardinal,
            root_cell: self.root_cell,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceDto {
    pub normal: Vec<String>,
    pub offset: String,
}

impl From<&Halfspace> for HalfspaceDto {
    fn from(h: &Halfspace) -> Self {
        HalfspaceDto {
            normal: show_all(h.normal()),
            offset: show(h.offset()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDto {
    pub index: usize,
    pub action: String,
    pub vertices: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyDto {
    pub cells: [usize; 2],
    /// Nonnegative on the second cell, tight on the shared facet.
    pub facet: HalfspaceDto,
    pub vertices: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionDto {
    pub states: Vec<String>,
    pub cells: Vec<CellDto>,
    pub adjacency: Vec<AdjacencyDto>,
}

impl SubdivisionDto {
    pub fn new(states: &[String], actions: &[String], sub: &Subdivision) -> Self {
        SubdivisionDto {
            states: states.to_vec(),
            cells: sub
                .cells()
                .iter()
                .enumerate()
                .map(|(index, c)| CellDto {
                    index,
                    action: actions[c.action].clone(),
                    vertices: c.geometry.vertices().iter().map(show_belief).collect(),
                })
                .collect(),
            adjacency: sub
                .adjacency()
                .iter()
                .map(|e| AdjacencyDto {
                    cells: [e.cells.0, e.cells.1],
                    facet: (&e.facet).into(),
                    vertices: e.shared.vertices().iter().map(show_belief).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDto {
    pub cell: usize,
    /// `V(x) = Σ_θ coefficients[θ] · x(θ)` on the cell.
    pub coefficients: Vec<String>,
    pub vertices: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionDto {
    pub root_cell: usize,
    pub pieces: Vec<PieceDto>,
    pub tree_edges: Vec<[usize; 2]>,
    pub checked_edges: Vec<[usize; 2]>,
    pub consistent: bool,
}

pub fn piece_dto(cell: usize, f: &AffineFn, vertices: &[Belief]) -> PieceDto {
    PieceDto {
        cell,
        coefficients: show_all(&f.coeffs),
        vertices: vertices.iter().map(show_belief).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedEntryDto {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankDto {
    pub prior: Vec<String>,
    /// Best first.
    pub experiments: Vec<RankedEntryDto>,
    /// Names grouped by equal value, best group first.
    pub groups: Vec<Vec<String>>,
    /// Group values joined by `>`, e.g. `"1/2 > 0"`.
    pub order: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions1: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions2: Option<Vec<String>>,
    pub u1: Vec<Vec<String>>,
    pub u2: Vec<Vec<String>>,
}

impl GameFile {
    pub fn game(&self) -> Result<Game, CliError> {
        let u1 = matrix(&self.u1)?;
        let u2 = matrix(&self.u2)?;
        Ok(match (&self.actions1, &self.actions2) {
            (None, None) => Game::from_matrices(u1, u2)?,
            _ => {
                let m1 = u1.len();
                let m2 = u1.first().map_or(0, Vec::len);
                let a1 = self
                    .actions1
                    .clone()
                    .unwrap_or_else(|| (1..=m1).map(|i| format!("r{i}")).collect());
                let a2 = self
                    .actions2
                    .clone()
                    .unwrap_or_else(|| (1..=m2).map(|i| format!("c{i}")).collect());
                Game::new(a1, a2, u1, u2)?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonTagDto {
    Cell(usize),
    Pair(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntersectionDto {
    #[serde(rename = "NONEMPTY")]
    Nonempty,
    #[serde(rename = "EMPTY")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonDto {
    pub player: u8,
    pub relation: IntersectionDto,
    pub tag: ComparisonTagDto,
    pub strategies: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonsFile {
    pub comparisons: Vec<ComparisonDto>,
}

impl ComparisonsFile {
    pub fn from_comparisons(cs: &[BestResponseComparison]) -> Self {
        ComparisonsFile {
            comparisons: cs
                .iter()
                .map(|c| ComparisonDto {
                    player: match c.player {
                        Player::One => 1,
                        Player::Two => 2,
                    },
                    relation: match c.relation {
                        Intersection::Nonempty => IntersectionDto::Nonempty,
                        Intersection::Empty => IntersectionDto::Empty,
                    },
                    tag: match c.tag {
                        ComparisonTag::Cell(i) => ComparisonTagDto::Cell(i),
                        ComparisonTag::Pair(i, j) => ComparisonTagDto::Pair(i, j),
                    },
                    strategies: c.strategies.iter().map(show_belief).collect(),
                })
                .collect(),
        }
    }

    pub fn comparisons(&self) -> Result<Vec<BestResponseComparison>, CliError> {
        self.comparisons
            .iter()
            .map(|c| {
                Ok(BestResponseComparison {
                    player: match c.player {
                        1 => Player::One,
                        2 => Player::Two,
                        p => {
                            return Err(CliError::Input(format!(
                                "player {p}: only players 1 and 2 exist"
                            )))
                        }
                    },
                    strategies: c
                        .strategies
                        .iter()
                        .map(|s| belief(s))
                        .collect::<Result<_, _>>()?,
                    relation: match c.relation {
                        IntersectionDto::Nonempty => Intersection::Nonempty,
                        IntersectionDto::Empty => Intersection::Empty,
                    },
                    tag: match c.tag {
                        ComparisonTagDto::Cell(i) => ComparisonTag::Cell(i),
                        ComparisonTagDto::Pair(i, j) => ComparisonTag::Pair(i, j),
                    },
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionPairDto {
    pub player1: SubdivisionDto,
    pub player2: SubdivisionDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalizableDto {
    pub player1: Vec<String>,
    pub player2: Vec<String>,
    /// Surviving action names after each elimination round, starting from
    /// the full sets.
    pub rounds: Vec<[Vec<String>; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDto {
    pub satisfied: bool,
}
