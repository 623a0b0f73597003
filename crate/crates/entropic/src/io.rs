//! JSON input formats: measures, random variables, stochastic maps, families,
//! constraint sets, involutions and samples.

use std::fs;
use std::path::Path;

use entropic_core::empirical_sanov::{ConstraintSet, Direction};
use entropic_core::fisher::{Bernoulli, ExponentialFamily, ParametricFamily, TableFamily};
use entropic_core::fluctuation::Involution;
use entropic_core::{OutcomeSpace, ProbMeasure, RandomVar, Space, StochasticMap};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

/// Reads and parses a JSON file, keeping the parser's line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// `["H", "T"]`, `{"outcomes": [...]}` or `{"product": [<space>, <space>]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Labels(Vec<String>),
    Outcomes { outcomes: Vec<String> },
    Product { product: Vec<SpaceSpec> },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<Space, CliError> {
        match self {
            SpaceSpec::Labels(l) | SpaceSpec::Outcomes { outcomes: l } => Ok(OutcomeSpace::new(l.clone())?),
            SpaceSpec::Product { product } => {
                if product.len() != 2 {
                    return Err(CliError::Usage("a product space has exactly two factors".into()));
                }
                Ok(OutcomeSpace::product(&product[0].build()?, &product[1].build()?))
            }
        }
    }
}

fn space_or_indexed(
    outcomes: &Option<Vec<String>>,
    product: &Option<Vec<SpaceSpec>>,
    n: usize,
) -> Result<Space, CliError> {
    match (outcomes, product) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either outcomes or product, not both".into())),
        (Some(l), None) => Ok(OutcomeSpace::new(l.clone())?),
        (None, Some(p)) => SpaceSpec::Product { product: p.clone() }.build(),
        (None, None) if n == 0 => Err(entropic_core::Error::EmptySpace.into()),
        (None, None) => Ok(OutcomeSpace::indexed(n)),
    }
}

/// `{"outcomes": [...], "weights": [...]}`; without outcomes the space is
/// indexed `0..L`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    #[serde(default)]
    pub outcomes: Option<Vec<String>>,
    #[serde(default)]
    pub product: Option<Vec<SpaceSpec>>,
    pub weights: Vec<f64>,
}

impl MeasureFile {
    pub fn build(&self) -> Result<ProbMeasure, CliError> {
        let space = space_or_indexed(&self.outcomes, &self.product, self.weights.len())?;
        Ok(ProbMeasure::new(space, self.weights.clone())?)
    }
}

pub fn load_measure(path: &Path) -> Result<ProbMeasure, CliError> {
    read_json::<MeasureFile>(path)?.build()
}

/// `{"values": [...]}` (optionally with outcomes) or a bare array.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RvFile {
    Bare(Vec<f64>),
    Full {
        #[serde(default)]
        outcomes: Option<Vec<String>>,
        values: Vec<f64>,
    },
}

impl RvFile {
    /// Random variable on `space`; labels, when given, must match it.
    pub fn build_on(&self, space: &Space) -> Result<RandomVar, CliError> {
        let values = match self {
            RvFile::Bare(v) => v.clone(),
            RvFile::Full { outcomes, values } => {
                if let Some(l) = outcomes {
                    if l.as_slice() != space.labels() {
                        return Err(entropic_core::Error::SpaceMismatch.into());
                    }
                }
                values.clone()
            }
        };
        Ok(RandomVar::new(space.clone(), values)?)
    }

    pub fn values(&self) -> &[f64] {
        match self {
            RvFile::Bare(v) | RvFile::Full { values: v, .. } => v,
        }
    }
}

pub fn load_rv(path: &Path, space: &Space) -> Result<RandomVar, CliError> {
    read_json::<RvFile>(path)?.build_on(space)
}

/// `{"from": [...], "to": [...], "rows": [[...], ...]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub from: Vec<String>,
    pub to: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl MapFile {
    pub fn build(&self) -> Result<StochasticMap, CliError> {
        let from = OutcomeSpace::new(self.from.clone())?;
        let to = OutcomeSpace::new(self.to.clone())?;
        Ok(StochasticMap::new(from, to, self.rows.clone())?)
    }
}

/// Parametric family descriptions, tagged by `kind`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilyFile {
    Bernoulli {
        interval: [f64; 2],
    },
    Exponential {
        rv: Vec<f64>,
        interval: [f64; 2],
        #[serde(default)]
        base: Option<Vec<f64>>,
        #[serde(default)]
        outcomes: Option<Vec<String>>,
    },
    Table {
        thetas: Vec<f64>,
        measures: Vec<Vec<f64>>,
        #[serde(default)]
        outcomes: Option<Vec<String>>,
    },
}

pub type Family = Box<dyn ParametricFamily + Send + Sync>;

impl FamilyFile {
    pub fn build(&self) -> Result<Family, CliError> {
        Ok(match self {
            FamilyFile::Bernoulli { interval: [a, b] } => Box::new(Bernoulli::new(*a, *b)?),
            FamilyFile::Exponential {
                rv,
                interval: [a, b],
                base,
                outcomes,
            } => {
                let space = space_or_indexed(outcomes, &None, rv.len())?;
                let x = RandomVar::new(space.clone(), rv.clone())?;
                match base {
                    Some(w) => {
                        let base = ProbMeasure::new(space, w.clone())?;
                        Box::new(ExponentialFamily::with_base(&base, &x, *a, *b)?)
                    }
                    None => Box::new(ExponentialFamily::new(&x, *a, *b)?),
                }
            }
            FamilyFile::Table {
                thetas,
                measures,
                outcomes,
            } => {
                let n = measures.first().map_or(0, Vec::len);
                let space = space_or_indexed(outcomes, &None, n)?;
                Box::new(TableFamily::new(space, thetas.clone(), measures.clone())?)
            }
        })
    }
}

pub fn load_family(path: &Path) -> Result<Family, CliError> {
    read_json::<FamilyFile>(path)?.build()
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum DirectionSpec {
    AtLeast,
    AtMost,
}

fn default_closed() -> bool {
    true
}

/// Sets of empirical measures, tagged by `kind`. Halfspaces read
/// `∫X dQ ≥ threshold` (or `≤`); balls use the variational distance.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ConstraintFile {
    Whole,
    Ball {
        center: Vec<f64>,
        radius: f64,
        #[serde(default = "default_closed")]
        closed: bool,
    },
    Halfspace {
        x: Vec<f64>,
        threshold: f64,
        direction: DirectionSpec,
        #[serde(default = "default_closed")]
        closed: bool,
    },
}

impl ConstraintFile {
    pub fn build_on(&self, space: &Space) -> Result<ConstraintSet, CliError> {
        Ok(match self {
            ConstraintFile::Whole => ConstraintSet::whole(),
            ConstraintFile::Ball { center, radius, closed } => {
                ConstraintSet::ball(ProbMeasure::new(space.clone(), center.clone())?, *radius, *closed)
            }
            ConstraintFile::Halfspace {
                x,
                threshold,
                direction,
                closed,
            } => {
                let dir = match direction {
                    DirectionSpec::AtLeast => Direction::AtLeast,
                    DirectionSpec::AtMost => Direction::AtMost,
                };
                ConstraintSet::halfspace(RandomVar::new(space.clone(), x.clone())?, *threshold, dir, *closed)
            }
        })
    }
}

/// `{"perm": [...]}` or a bare permutation array.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum InvolutionFile {
    Bare(Vec<usize>),
    Full { perm: Vec<usize> },
}

impl InvolutionFile {
    pub fn build(&self) -> Result<Involution, CliError> {
        let perm = match self {
            InvolutionFile::Bare(p) | InvolutionFile::Full { perm: p } => p.clone(),
        };
        Ok(Involution::new(perm)?)
    }
}

/// One observation, by index or by outcome label.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Observation {
    Index(usize),
    Label(String),
}

/// `{"sample": [...]}` or a bare array of observations.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SampleFile {
    Bare(Vec<Observation>),
    Full { sample: Vec<Observation> },
}

impl SampleFile {
    /// Outcome indices on `space`; labels are resolved before indices are
    /// range-checked.
    pub fn indices(&self, space: &Space) -> Result<Vec<usize>, CliError> {
        let obs = match self {
            SampleFile::Bare(s) | SampleFile::Full { sample: s } => s,
        };
        obs.iter()
            .enumerate()
            .map(|(pos, o)| match o {
                Observation::Index(i) if *i < space.len() => Ok(*i),
                Observation::Index(i) => Err(CliError::Usage(format!(
                    "sample entry {pos}: index {i} outside a space of {} outcomes",
                    space.len()
                ))),
                Observation::Label(l) => space
                    .index_of(l)
                    .ok_or_else(|| CliError::Usage(format!("sample entry {pos}: unknown outcome {l:?}"))),
            })
            .collect()
    }
}
