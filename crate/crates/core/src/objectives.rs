//! The five team objectives: cost, workload unevenness, expertise unevenness,
//! representation parity and cost difference between attribute classes.
//!
//! Summation order is fixed (members by id, requirements by skill id) so the
//! same inputs always give bit-identical results. Team cost is accumulated as
//! the sum of the two per-class costs, which makes
//! `cost_attribute(ClassZero) + cost_attribute(ClassOne) == team_cost` exact.

use crate::error::{Error, Result};
use crate::model::{coverage, AttributeClass, CandidateId, ObjectiveVector, Project, Team};

/// Matched-requirement cost carried by one team member.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberLoad {
    pub candidate: CandidateId,
    pub load: f64,
}

pub fn member_loads(team: &Team<'_>, project: &Project) -> Vec<MemberLoad> {
    team.members()
        .iter()
        .map(|m| MemberLoad {
            candidate: m.id().clone(),
            load: matched_cost(m, project),
        })
        .collect()
}

fn matched_cost(candidate: &crate::model::Candidate, project: &Project) -> f64 {
    project
        .requirements()
        .iter()
        .filter_map(|s| candidate.cost(s))
        .sum()
}

/// Total matched cost of the members in `class`.
pub fn cost_attribute(team: &Team<'_>, project: &Project, class: AttributeClass) -> f64 {
    team.members()
        .iter()
        .filter(|m| m.attribute() == class)
        .map(|m| matched_cost(m, project))
        .sum()
}

pub fn team_cost(team: &Team<'_>, project: &Project) -> f64 {
    cost_attribute(team, project, AttributeClass::ClassZero)
        + cost_attribute(team, project, AttributeClass::ClassOne)
}

/// Population standard deviation of the members' matched costs.
pub fn workload_unevenness(team: &Team<'_>, project: &Project) -> Result<f64> {
    if team.is_empty() {
        return Err(Error::EmptyTeam);
    }
    let loads: Vec<f64> = member_loads(team, project).into_iter().map(|l| l.load).collect();
    Ok(population_std(&loads, team_cost(team, project)))
}

/// Population standard deviation of the per-requirement cost totals.
/// Requirements nobody covers count as zero.
pub fn expertise_unevenness(team: &Team<'_>, project: &Project) -> Result<f64> {
    if project.is_empty() {
        return Err(Error::EmptyRequirements(project.id().to_string()));
    }
    let totals: Vec<f64> = project
        .requirements()
        .iter()
        .map(|s| team.members().iter().filter_map(|m| m.cost(s)).sum())
        .collect();
    Ok(population_std(&totals, team_cost(team, project)))
}

/// `|#ClassZero - #ClassOne| / |T|`.
pub fn representation_parity(team: &Team<'_>) -> Result<f64> {
    if team.is_empty() {
        return Err(Error::EmptyTeam);
    }
    let zeros = team
        .members()
        .iter()
        .filter(|m| m.attribute() == AttributeClass::ClassZero)
        .count();
    let ones = team.len() - zeros;
    Ok(zeros.abs_diff(ones) as f64 / team.len() as f64)
}

/// `|CA(ClassZero) - CA(ClassOne)| / Cost`.
pub fn cost_difference(team: &Team<'_>, project: &Project) -> Result<f64> {
    let zero = cost_attribute(team, project, AttributeClass::ClassZero);
    let one = cost_attribute(team, project, AttributeClass::ClassOne);
    let total = zero + one;
    if total <= 0.0 {
        return Err(Error::ZeroTeamCost);
    }
    Ok((zero - one).abs() / total)
}

pub fn objective_vector(team: &Team<'_>, project: &Project) -> Result<ObjectiveVector> {
    if team.is_empty() {
        return Err(Error::EmptyTeam);
    }
    if coverage(team, project) == 0 {
        return Err(Error::NoCoverage);
    }
    Ok(ObjectiveVector {
        cost: team_cost(team, project),
        workload: workload_unevenness(team, project)?,
        expertise: expertise_unevenness(team, project)?,
        representation: representation_parity(team)?,
        cost_difference: cost_difference(team, project)?,
    })
}

// The mean is total / n, with total supplied by the caller so it matches the
// team cost bit for bit.
fn population_std(values: &[f64], total: f64) -> f64 {
    let n = values.len() as f64;
    let mean = total / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    var.sqrt()
}
