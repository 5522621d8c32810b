//! The `voi` command line: subdivisions, identification data,
//! reconstruction, experiment ranking, ternary plots and games.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 when identification data
//! contradict themselves.

pub mod format;
pub mod svg;

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;
use voi::{Belief, DecisionProblem, EdgeCoverage, Player, StatementTag};

use crate::format::*;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Inconsistent(_) => 3,
        }
    }
}

impl From<voi::Error> for CliError {
    fn from(e: voi::Error) -> Self {
        match e {
            voi::Error::InconsistentData(msg) => CliError::Inconsistent(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "voi", version, about = "Exact value-of-information toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Interior prior as comma-separated rationals, e.g. "2/5,3/5".
    /// Overrides the prior in the problem file; the default is uniform.
    #[arg(long, global = true)]
    pub prior: Option<String>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimality cells, their vertices and adjacency.
    Subdivide { problem: PathBuf },
    /// Ordinal and cardinal identification data for a problem.
    Identify {
        problem: PathBuf,
        /// Also emit the data restated as ranked and priced experiments.
        #[arg(long)]
        experiments: bool,
        /// Emit a utility difference for every adjacent pair, not only a
        /// spanning tree.
        #[arg(long)]
        all_edges: bool,
    },
    /// Recover the value function, up to an affine term, from a data file
    /// (`-` reads standard input).
    Reconstruct { data: PathBuf },
    /// Order experiments by their exact value.
    Rank {
        problem: PathBuf,
        #[arg(required = true)]
        experiments: Vec<PathBuf>,
    },
    /// SVG ternary plot of a three-state problem.
    Plot {
        problem: PathBuf,
        /// `affine-equality:CELL` or `non-affine:CELL,CELL`.
        #[arg(long)]
        overlay: Option<String>,
    },
    /// Two-player normal-form games.
    #[command(subcommand)]
    Game(GameCommand),
}

#[derive(Debug, Subcommand)]
pub enum GameCommand {
    /// Best-response subdivisions of both players.
    Br { game: PathBuf },
    /// Best-response comparisons identifying the subdivision pair.
    Identify { game: PathBuf },
    /// Actions surviving iterated elimination of never-best responses.
    Rationalizable { game: PathBuf },
    /// Check a game against a comparisons file.
    Verify { game: PathBuf, comparisons: PathBuf },
}

fn read_text(path: &Path, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut text = String::new();
    if path == Path::new("-") {
        stdin
            .read_to_string(&mut text)
            .map_err(|e| CliError::Input(format!("reading standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn read_json<T: DeserializeOwned>(path: &Path, stdin: &mut dyn Read) -> Result<T, CliError> {
    let text = read_text(path, stdin)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn parse_prior(text: &str) -> Result<Belief, CliError> {
    let parts: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    belief(&parts)
}

/// `--prior`, else the file's prior, else uniform; it must be interior.
fn resolve_prior(
    global: &GlobalOpts,
    file: &ProblemFile,
    dp: &DecisionProblem,
) -> Result<Belief, CliError> {
    let prior = match (&global.prior, &file.prior) {
        (Some(text), _) => parse_prior(text)?,
        (None, Some(p)) => belief(p)?,
        (None, None) => Belief::uniform(dp.num_states()),
    };
    if prior.num_states() != dp.num_states() {
        return Err(CliError::Input(format!(
            "prior has {} coordinates for {} states",
            prior.num_states(),
            dp.num_states()
        )));
    }
    if !prior.is_interior() {
        return Err(voi::Error::BoundaryPrior.into());
    }
    Ok(prior)
}

/// Runs one command and returns what it prints.
pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<String, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Subdivide { problem } => {
            let file: ProblemFile = read_json(problem, stdin)?;
            let dp = file.problem()?;
            let sub = dp.subdivision()?;
            Ok(to_json(&SubdivisionDto::new(
                dp.state_labels(),
                dp.action_labels(),
                &sub,
            )))
        }
        Command::Identify {
            problem,
            experiments,
            all_edges,
        } => {
            let file: ProblemFile = read_json(problem, stdin)?;
            let dp = file.problem()?;
            let prior = resolve_prior(g, &file, &dp)?;
            let coverage = if *all_edges {
                EdgeCoverage::All
            } else {
                EdgeCoverage::SpanningTree
            };
            let data = voi::generate(&dp, &prior, coverage)?;
            let mut out = DataFile::from_data(&data);
            if *experiments {
                out.ranked_experiments = Some(
                    voi::ranked_experiments_of(&data)?
                        .iter()
                        .map(RankedDto::from_ranked)
                        .collect(),
                );
                out.priced_experiments = Some(
                    voi::priced_experiments_of(&data)?
                        .iter()
                        .map(PricedDto::from_priced)
                        .collect(),
                );
            }
            Ok(to_json(&out))
        }
        Command::Reconstruct { data } => {
            let file: DataFile = read_json(data, stdin)?;
            let data = file.data()?;
            let r = voi::reconstruct(&data)?;
            let sub = r.value.subdivision();
            let pieces = r
                .value
                .pieces()
                .iter()
                .enumerate()
                .map(|(i, p)| piece_dto(i, p, sub.cells()[i].geometry.vertices()))
                .collect();
            Ok(to_json(&ReconstructionDto {
                root_cell: data.root_cell,
                pieces,
                tree_edges: r.tree_edges.iter().map(|&(a, b)| [a, b]).collect(),
                checked_edges: r.checked_edges.iter().map(|&(a, b)| [a, b]).collect(),
                consistent: true,
            }))
        }
        Command::Rank {
            problem,
            experiments,
        } => {
            let file: ProblemFile = read_json(problem, stdin)?;
            let dp = file.problem()?;
            let prior = resolve_prior(g, &file, &dp)?;
            let mut entries = Vec::new();
            for path in experiments {
                let e: ExperimentFile = read_json(path, stdin)?;
                let w = voi::value_of_experiment(&dp, &prior, &e.experiment()?)?;
                entries.push((path.display().to_string(), w));
            }
            // Stable sort keeps the command-line order within ties.
            entries.sort_by(|a, b| b.1.cmp(&a.1));
            let mut groups: Vec<(voi::Rational, Vec<String>)> = Vec::new();
            for (name, w) in &entries {
                match groups.last_mut() {
                    Some((v, names)) if v == w => names.push(name.clone()),
                    _ => groups.push((w.clone(), vec![name.clone()])),
                }
            }
            Ok(to_json(&RankDto {
                prior: show_belief(&prior),
                experiments: entries
                    .iter()
                    .map(|(name, w)| RankedEntryDto {
                        name: name.clone(),
                        value: show(w),
                    })
                    .collect(),
                order: groups
                    .iter()
                    .map(|(v, _)| show(v))
                    .collect::<Vec<_>>()
                    .join(" > "),
                groups: groups.into_iter().map(|(_, names)| names).collect(),
            }))
        }
        Command::Plot { problem, overlay } => {
            let file: ProblemFile = read_json(problem, stdin)?;
            let dp = file.problem()?;
            if dp.num_states() != 3 {
                return Err(CliError::Input(format!(
                    "plot needs exactly 3 states, got {}",
                    dp.num_states()
                )));
            }
            let prior = resolve_prior(g, &file, &dp)?;
            let sub = dp.subdivision()?;
            let ov = overlay
                .as_deref()
                .map(|text| build_overlay(text, &sub, &prior))
                .transpose()?;
            Ok(svg::render(
                dp.state_labels(),
                dp.action_labels(),
                &sub,
                Some(&prior),
                ov.as_ref(),
            ))
        }
        Command::Game(cmd) => execute_game(cmd, stdin),
    }
}

fn parse_cells(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Input(format!("bad cell index {s:?} in overlay")))
        })
        .collect()
}

fn build_overlay(
    text: &str,
    sub: &voi::Subdivision,
    prior: &Belief,
) -> Result<svg::Overlay, CliError> {
    let (kind, arg) = text
        .split_once(':')
        .ok_or_else(|| CliError::Input(format!("overlay {text:?}: expected KIND:CELLS")))?;
    let cells = parse_cells(arg)?;
    let statements = voi::gen_ordinal(sub, prior)?;
    let wanted = match (kind, cells.as_slice()) {
        ("affine-equality", &[i]) => StatementTag::CellAffine(i),
        ("non-affine", &[i, j]) => StatementTag::PairNonAffine(i.min(j), i.max(j)),
        _ => {
            return Err(CliError::Input(format!(
                "overlay {text:?}: use affine-equality:CELL or non-affine:CELL,CELL"
            )))
        }
    };
    let s = statements.iter().find(|s| s.tag == wanted).ok_or_else(|| {
        CliError::Input(format!("overlay {text:?}: no such cell or adjacent pair"))
    })?;
    let mut ov = svg::Overlay {
        title: text.to_string(),
        ..Default::default()
    };
    // Atoms on both sides are residual mass; the rest is what moves.
    for a in s.lhs.atoms() {
        let kind = if s.rhs.index_of(&a.belief).is_some() {
            svg::Marker::Residual
        } else {
            svg::Marker::Support
        };
        ov.markers.push((kind, a.belief.clone()));
    }
    let targets: Vec<Belief> = s
        .rhs
        .atoms()
        .iter()
        .filter(|a| s.lhs.index_of(&a.belief).is_none())
        .map(|a| a.belief.clone())
        .collect();
    for t in &targets {
        ov.markers.push((svg::Marker::Target, t.clone()));
        for (kind, x) in ov.markers.clone() {
            if kind == svg::Marker::Support {
                ov.segments.push((t.clone(), x));
            }
        }
    }
    Ok(ov)
}

fn execute_game(cmd: &GameCommand, stdin: &mut dyn Read) -> Result<String, CliError> {
    match cmd {
        GameCommand::Br { game } => {
            let file: GameFile = read_json(game, stdin)?;
            let g = file.game()?;
            let pair = g.br_subdivision_pair()?;
            let dto =
                |p: Player| SubdivisionDto::new(g.actions(p.opponent()), g.actions(p), pair.get(p));
            Ok(to_json(&SubdivisionPairDto {
                player1: dto(Player::One),
                player2: dto(Player::Two),
            }))
        }
        GameCommand::Identify { game } => {
            let file: GameFile = read_json(game, stdin)?;
            let g = file.game()?;
            Ok(to_json(&ComparisonsFile::from_comparisons(
                &voi::gen_br_comparisons(&g)?,
            )))
        }
        GameCommand::Rationalizable { game } => {
            let file: GameFile = read_json(game, stdin)?;
            let g = file.game()?;
            let names = |p: Player, idx: &[usize]| -> Vec<String> {
                idx.iter().map(|&i| g.actions(p)[i].clone()).collect()
            };
            let rounds = voi::elimination_rounds(&g);
            let (s1, s2) = rounds.last().expect("initial round").clone();
            Ok(to_json(&RationalizableDto {
                player1: names(Player::One, &s1),
                player2: names(Player::Two, &s2),
                rounds: rounds
                    .iter()
                    .map(|(a, b)| [names(Player::One, a), names(Player::Two, b)])
                    .collect(),
            }))
        }
        GameCommand::Verify { game, comparisons } => {
            let file: GameFile = read_json(game, stdin)?;
            let g = file.game()?;
            let cs: ComparisonsFile = read_json(comparisons, stdin)?;
            Ok(to_json(&VerifyDto {
                satisfied: voi::satisfies_comparisons(&g, &cs.comparisons()?)?,
            }))
        }
    }
}

/// Parses arguments, runs the command, writes output, and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result =
        execute(&cli, &mut std::io::stdin().lock()).and_then(|text| match &cli.global.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
