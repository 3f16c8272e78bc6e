//! Fairness-aware team assembly.
//!
//! Given a pool of candidates (each with per-skill costs and a binary
//! protected attribute) and a project's required skills, select a team that
//! covers every requirement while keeping five objectives low: total cost,
//! workload unevenness, expertise unevenness, representation parity and the
//! cost difference between the two attribute classes.
//!
//! - [`model`]: candidates, projects, teams, coverage.
//! - [`objectives`]: the five objective functions.
//! - [`pareto`]: dominance and non-dominated filtering.
//! - [`assembly`]: the two-round Pareto assembler and greedy baselines.
//! - [`data`]: pool/project files and synthetic generators.
//! - [`bench`]: corpus runs, aggregate reports and outcome logs.

pub mod assembly;
pub mod bench;
pub mod data;
pub mod error;
pub mod model;
pub mod objectives;
pub mod pareto;

pub use error::{Error, Result};
pub use model::{
    coverage, AttributeClass, Candidate, CandidateId, Objective, ObjectiveVector, Project, SkillId,
    Team,
};
