use thiserror::Error;

use crate::geometry::TileId;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed scenario: {0}")]
    Parse(String),
    #[error("invalid scenario at `{path}`: {message}")]
    Validation { path: String, message: String },
}

impl ScenarioError {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Validation { path: path.into(), message: message.into() }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PropagationError {
    #[error("ray struck the back face of tile {0}")]
    BackFaceHit(TileId),
}

#[derive(Debug, Error, PartialEq)]
pub enum CompileError {
    #[error("evaluation budget {budget} is smaller than the population size {population}")]
    BudgetTooSmall { budget: u64, population: usize },
    #[error("switch configuration has {got} bits, tile model expects {expected}")]
    ModelMismatch { expected: usize, got: usize },
    #[error("invalid bit string: {0}")]
    BadBits(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum RouteError {
    #[error("no compliant air path for objective {0}")]
    NoPath(String),
    #[error("objective {0} is not routable")]
    NotRoutable(String),
    #[error("unknown device {0:?}")]
    UnknownDevice(String),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

#[derive(Debug, Error, PartialEq)]
pub enum TilenetError {
    #[error("object has no tiles")]
    EmptyObject,
    #[error("tile {0} is unreachable from the representative")]
    Partition(TileId),
}
