use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("skill identifier must not be empty")]
    EmptySkill,

    #[error("candidate identifier must not be empty")]
    EmptyCandidateId,

    #[error("candidate {id}: cost for skill {skill} must be a positive finite number, got {cost}")]
    InvalidCost { id: String, skill: String, cost: f64 },

    #[error("candidate {0} has no skills")]
    EmptyCostProfile(String),

    #[error("project {0} has no requirements")]
    EmptyRequirements(String),

    #[error("duplicate team member {0}")]
    DuplicateMember(String),

    #[error("team is empty")]
    EmptyTeam,

    #[error("team covers none of the project requirements")]
    NoCoverage,

    #[error("team cost is zero, cost difference is undefined")]
    ZeroTeamCost,

    #[error("score vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("invalid score value {0}: expected a non-negative number or +inf")]
    InvalidScore(f64),

    #[error("pareto front of an empty population")]
    EmptyPopulation,

    #[error("no candidate in the pool holds any requirement of project {0}")]
    InfeasibleProject(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{path}:{line}: {message}")]
    Load {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{0}: file contains no records")]
    EmptyFile(PathBuf),

    #[error("unsupported file extension for {0} (expected .csv or .json)")]
    UnsupportedFormat(PathBuf),

    #[error("candidate {0} has differing per-skill costs and cannot be written as a flat-cost record")]
    NonUniformCost(String),

    #[error("unknown token {token:?} for {what}")]
    UnknownToken { what: &'static str, token: String },

    #[error("report has no rows")]
    EmptyReport,

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
