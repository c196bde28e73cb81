use thiserror::Error;

use crate::design::Design;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("trip {trip} is a core trip; the choice model only applies to latent trips")]
    CoreTripChoice { trip: u64 },

    #[error("destination {destination} unreachable from {origin}")]
    Unreachable { origin: usize, destination: usize },

    #[error("trip set is not a subset of the instance trips (unknown trip id {0})")]
    UnknownTrip(u64),

    #[error("benders iteration cap of {rounds} rounds exceeded (best objective {best_objective}, gap {gap})")]
    IterationCap {
        rounds: usize,
        best_objective: f64,
        gap: f64,
        best: Option<Box<Design>>,
    },

    #[error("enumeration cap exceeded: {count} candidate arcs (limit {limit})")]
    EnumerationCap { count: usize, limit: usize },

    #[error("cycle enumeration exceeded {0} cycles; use a smaller expansion step")]
    CycleCap(usize),

    #[error("the adoption upper bound is undefined for theta = 0")]
    ThetaZero,

    #[error("unknown expansion rule `{0}`")]
    UnknownRule(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),
}
