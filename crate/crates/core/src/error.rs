use thiserror::Error;

use crate::partitions::{Corner, Partition};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be positive and weakly decreasing")]
    InvalidPartition(Vec<usize>),
    #[error("{corner:?} is not a valid corner of {partition}")]
    InvalidCorner { partition: Partition, corner: Corner },
    #[error("no oscillating tableaux of shape {shape} and length {length}")]
    EmptyTableauSet { shape: Partition, length: usize },
    #[error("length {length} exceeds the brute-force bound {bound}")]
    BoundExceeded { length: usize, bound: usize },
    #[error("walk configuration: {0}")]
    InvalidConfig(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("{what} requires N >= {min}, got N = {n}")]
    Degenerate { what: &'static str, min: usize, n: usize },
    #[error("points must be strictly increasing, got {0} >= {1}")]
    Order(usize, usize),
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("grid has {0} points, at least 5 are needed")]
    GridTooCoarse(usize),
    #[error("{0} samples given, at least {1} are needed")]
    TooFewSamples(usize, usize),
    #[error("exact arithmetic is unavailable for {0}")]
    ExactUnavailable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
