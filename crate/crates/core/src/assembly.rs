//! Team assemblers.
//!
//! The multi-objective assembler runs two Pareto rounds: candidates holding
//! at least one requirement are filtered by their per-requirement costs, `N`
//! random teams of size `M` are drawn from the survivors, full-coverage teams
//! are scored on the five objectives, and a second Pareto round keeps the
//! non-dominated teams. One team is then picked according to a
//! [`SelectionConfig`].
//!
//! Two greedy baselines are provided for comparison: [`assemble_incremental`]
//! (cost-effectiveness set cover) and [`assemble_fair_allocation`] (the same
//! loop restricted to the currently underrepresented class).

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{
    coverage, AttributeClass, Candidate, Objective, ObjectiveVector, Project, SkillId, Team,
};
use crate::objectives::objective_vector;
use crate::pareto::{non_dominated, ScoreVector};

/// Smallest team the multi-objective assembler will form.
pub const MIN_TEAM_SIZE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionConfig {
    Random,
    TopCost,
    TopWorkload,
    TopExpertise,
    TopRepresentation,
    TopCostDifference,
    TopSum,
}

impl SelectionConfig {
    pub const ALL: [SelectionConfig; 7] = [
        SelectionConfig::Random,
        SelectionConfig::TopCost,
        SelectionConfig::TopWorkload,
        SelectionConfig::TopExpertise,
        SelectionConfig::TopRepresentation,
        SelectionConfig::TopCostDifference,
        SelectionConfig::TopSum,
    ];

    /// The single objective a `Top*` configuration minimizes.
    pub fn objective(self) -> Option<Objective> {
        match self {
            SelectionConfig::TopCost => Some(Objective::Cost),
            SelectionConfig::TopWorkload => Some(Objective::Workload),
            SelectionConfig::TopExpertise => Some(Objective::Expertise),
            SelectionConfig::TopRepresentation => Some(Objective::Representation),
            SelectionConfig::TopCostDifference => Some(Objective::CostDifference),
            SelectionConfig::Random | SelectionConfig::TopSum => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            SelectionConfig::Random => "random",
            SelectionConfig::TopCost => "top-cost",
            SelectionConfig::TopWorkload => "top-workload",
            SelectionConfig::TopExpertise => "top-expertise",
            SelectionConfig::TopRepresentation => "top-representation",
            SelectionConfig::TopCostDifference => "top-costdiff",
            SelectionConfig::TopSum => "top-sum",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SelectionConfig::Random => "Random",
            SelectionConfig::TopCost => "Top-Cost",
            SelectionConfig::TopWorkload => "Top-Workload",
            SelectionConfig::TopExpertise => "Top-Expertise",
            SelectionConfig::TopRepresentation => "Top-Representation",
            SelectionConfig::TopCostDifference => "Top-Cost Difference",
            SelectionConfig::TopSum => "Top-Sum",
        }
    }
}

impl FromStr for SelectionConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.token() == s)
            .ok_or_else(|| Error::UnknownToken {
                what: "selection config",
                token: s.to_string(),
            })
    }
}

impl fmt::Display for SelectionConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssemblyParams {
    pub team_size: usize,
    pub num_random_teams: usize,
    pub seed: u64,
    pub selection: SelectionConfig,
}

impl AssemblyParams {
    pub fn validate(&self, pool_size: usize) -> Result<()> {
        if self.team_size < MIN_TEAM_SIZE {
            return Err(Error::InvalidParams(format!(
                "team size must be at least {MIN_TEAM_SIZE}, got {}",
                self.team_size
            )));
        }
        if self.team_size >= pool_size {
            return Err(Error::InvalidParams(format!(
                "team size {} must be smaller than the pool ({pool_size})",
                self.team_size
            )));
        }
        if self.num_random_teams == 0 {
            return Err(Error::InvalidParams(
                "number of random teams must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    MultiObjective(SelectionConfig),
    Incremental,
    FairAllocation,
}

impl Method {
    /// Every method/configuration pair the benchmark knows about.
    pub fn all() -> Vec<Method> {
        let mut v = vec![Method::Incremental, Method::FairAllocation];
        v.extend(SelectionConfig::ALL.map(Method::MultiObjective));
        v
    }

    pub fn method_token(self) -> &'static str {
        match self {
            Method::MultiObjective(_) => "multi",
            Method::Incremental => "incremental",
            Method::FairAllocation => "fair-alloc",
        }
    }

    pub fn config(self) -> Option<SelectionConfig> {
        match self {
            Method::MultiObjective(c) => Some(c),
            _ => None,
        }
    }

    pub fn label(self) -> String {
        match self {
            Method::MultiObjective(c) => format!("Multi-Objective {}", c.label()),
            Method::Incremental => "Incremental".into(),
            Method::FairAllocation => "Fair Allocation".into(),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::MultiObjective(c) => write!(f, "multi/{c}"),
            other => f.write_str(other.method_token()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    /// Nobody in the pool holds any requirement.
    NoMatchingCandidate,
    /// None of the sampled teams covered every requirement.
    NoFullCoverageTeam,
    /// The greedy loop ran out of candidates adding coverage.
    CoverageUnreachable,
}

impl Failure {
    pub fn token(self) -> &'static str {
        match self {
            Failure::NoMatchingCandidate => "no-matching-candidate",
            Failure::NoFullCoverageTeam => "no-full-coverage-team",
            Failure::CoverageUnreachable => "coverage-unreachable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Formation<'a> {
    Formed {
        team: Team<'a>,
        objectives: ObjectiveVector,
    },
    Failed(Failure),
}

impl<'a> Formation<'a> {
    pub fn team(&self) -> Option<&Team<'a>> {
        match self {
            Formation::Formed { team, .. } => Some(team),
            Formation::Failed(_) => None,
        }
    }

    pub fn objectives(&self) -> Option<&ObjectiveVector> {
        match self {
            Formation::Formed { objectives, .. } => Some(objectives),
            Formation::Failed(_) => None,
        }
    }

    pub fn is_formed(&self) -> bool {
        matches!(self, Formation::Formed { .. })
    }

    fn formed(team: Team<'a>, project: &Project) -> Result<Self> {
        let objectives = objective_vector(&team, project)?;
        Ok(Formation::Formed { team, objectives })
    }
}

/// Population sizes seen by the two Pareto rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ParetoRounds {
    pub pareto_candidates: usize,
    pub teams_sampled: usize,
    pub full_coverage_teams: usize,
    pub pareto_teams: usize,
    /// Fewer Pareto candidates than the team size: a single all-candidates
    /// team was sampled instead.
    pub sampling_fallback: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub pool_size: usize,
    pub filtered_candidates: usize,
    /// Present for the multi-objective assembler once filtering succeeded.
    pub rounds: Option<ParetoRounds>,
}

impl Diagnostics {
    /// `1 - |pareto candidates| / |filtered candidates|`.
    pub fn candidate_reduction(&self) -> Option<f64> {
        let rounds = self.rounds?;
        reduction(rounds.pareto_candidates, self.filtered_candidates)
    }

    /// `1 - |pareto teams| / |full-coverage teams|`.
    pub fn team_reduction(&self) -> Option<f64> {
        let rounds = self.rounds?;
        reduction(rounds.pareto_teams, rounds.full_coverage_teams)
    }
}

fn reduction(kept: usize, input: usize) -> Option<f64> {
    (input > 0).then(|| 1.0 - kept as f64 / input as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssemblyOutcome<'a> {
    pub method: Method,
    pub formation: Formation<'a>,
    pub diagnostics: Diagnostics,
}

/// Candidates holding at least one requirement, in pool order.
pub fn filter_candidates<'a>(pool: &'a [Candidate], project: &Project) -> Result<Vec<&'a Candidate>> {
    let filtered: Vec<&Candidate> = pool
        .iter()
        .filter(|c| project.requirements().iter().any(|s| c.has_skill(s)))
        .collect();
    if filtered.is_empty() {
        return Err(Error::InfeasibleProject(project.id().to_string()));
    }
    Ok(filtered)
}

/// Per-requirement cost in sorted requirement order; `+inf` where the
/// requirement is not held.
pub fn candidate_scores(candidate: &Candidate, project: &Project) -> ScoreVector {
    let values = project
        .requirements()
        .iter()
        .map(|s| candidate.cost(s).unwrap_or(f64::INFINITY))
        .collect();
    ScoreVector::new(values).expect("stored costs are positive and finite")
}

/// Non-dominated subset of the filtered pool under [`candidate_scores`].
pub fn pareto_candidates<'a>(pool: &'a [Candidate], project: &Project) -> Result<Vec<&'a Candidate>> {
    let filtered = filter_candidates(pool, project)?;
    candidate_front(&filtered, project)
}

fn candidate_front<'a>(filtered: &[&'a Candidate], project: &Project) -> Result<Vec<&'a Candidate>> {
    let scores: Vec<ScoreVector> = filtered
        .iter()
        .map(|c| candidate_scores(c, project))
        .collect();
    Ok(non_dominated(&scores)?
        .into_iter()
        .map(|i| filtered[i])
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomTeams<'a> {
    pub teams: Vec<Team<'a>>,
    /// Set when there were fewer candidates than the team size.
    pub fallback: bool,
}

/// Draws `n` teams of `m` distinct members, each uniformly without
/// replacement. Identical teams may be drawn more than once. With fewer than
/// `m` candidates the result is one team holding all of them.
pub fn form_random_teams<'a, R: Rng + ?Sized>(
    candidates: &[&'a Candidate],
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<RandomTeams<'a>> {
    if m == 0 {
        return Err(Error::InvalidParams("team size must be positive".into()));
    }
    if candidates.len() < m {
        let team = Team::new(candidates.iter().copied())?;
        return Ok(RandomTeams {
            teams: vec![team],
            fallback: true,
        });
    }
    let teams = (0..n)
        .map(|_| {
            let picks = index::sample(rng, candidates.len(), m);
            Team::new(picks.into_iter().map(|i| candidates[i]))
        })
        .collect::<Result<_>>()?;
    Ok(RandomTeams {
        teams,
        fallback: false,
    })
}

/// Generator for one project's draws. The stream depends only on the global
/// seed and the project id, so projects can run in any order or in parallel.
pub fn project_rng(seed: u64, project_id: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(project_id.as_bytes()));
    rng
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Sum of the five objectives after min-max normalization over `vectors`.
/// An objective that is constant across `vectors` contributes zero.
pub fn top_sum_scores(vectors: &[ObjectiveVector]) -> Vec<f64> {
    let arrays: Vec<[f64; 5]> = vectors.iter().map(ObjectiveVector::to_array).collect();
    let mut lo = [f64::INFINITY; 5];
    let mut hi = [f64::NEG_INFINITY; 5];
    for a in &arrays {
        for k in 0..5 {
            lo[k] = lo[k].min(a[k]);
            hi[k] = hi[k].max(a[k]);
        }
    }
    arrays
        .iter()
        .map(|a| {
            (0..5)
                .map(|k| {
                    let span = hi[k] - lo[k];
                    if span > 0.0 {
                        (a[k] - lo[k]) / span
                    } else {
                        0.0
                    }
                })
                .sum()
        })
        .collect()
}

/// Index of the team `config` picks from a Pareto front.
pub fn select_from_front<R: Rng + ?Sized>(
    front: &[(Team<'_>, ObjectiveVector)],
    config: SelectionConfig,
    rng: &mut R,
) -> usize {
    assert!(!front.is_empty(), "selection from an empty front");
    if config == SelectionConfig::Random {
        return rng.random_range(0..front.len());
    }
    let vectors: Vec<ObjectiveVector> = front.iter().map(|(_, v)| *v).collect();
    let sums = top_sum_scores(&vectors);
    let key = |i: usize| config.objective().map_or(sums[i], |o| vectors[i].get(o));
    (0..front.len())
        .min_by(|&a, &b| {
            key(a)
                .total_cmp(&key(b))
                .then_with(|| sums[a].total_cmp(&sums[b]))
                .then_with(|| front[a].0.cmp_ids(&front[b].0))
        })
        .expect("non-empty front")
}

/// Two-round Pareto assembly followed by the configured final pick.
pub fn assemble_multi_objective<'a>(
    pool: &'a [Candidate],
    project: &Project,
    params: &AssemblyParams,
) -> Result<AssemblyOutcome<'a>> {
    params.validate(pool.len())?;
    let method = Method::MultiObjective(params.selection);
    let mut diagnostics = Diagnostics {
        pool_size: pool.len(),
        ..Diagnostics::default()
    };
    let failed = |diagnostics, failure| AssemblyOutcome {
        method,
        formation: Formation::Failed(failure),
        diagnostics,
    };

    let filtered = match filter_candidates(pool, project) {
        Ok(f) => f,
        Err(Error::InfeasibleProject(_)) => {
            return Ok(failed(diagnostics, Failure::NoMatchingCandidate))
        }
        Err(e) => return Err(e),
    };
    diagnostics.filtered_candidates = filtered.len();

    let candidates = candidate_front(&filtered, project)?;
    let mut rng = project_rng(params.seed, project.id());
    let sampled = form_random_teams(
        &candidates,
        params.num_random_teams,
        params.team_size,
        &mut rng,
    )?;

    let mut rounds = ParetoRounds {
        pareto_candidates: candidates.len(),
        teams_sampled: sampled.teams.len(),
        sampling_fallback: sampled.fallback,
        ..ParetoRounds::default()
    };

    let scored: Vec<(Team<'a>, ObjectiveVector)> = sampled
        .teams
        .into_iter()
        .filter(|t| coverage(t, project) == project.len())
        .map(|t| objective_vector(&t, project).map(|v| (t, v)))
        .collect::<Result<_>>()?;
    rounds.full_coverage_teams = scored.len();

    if scored.is_empty() {
        diagnostics.rounds = Some(rounds);
        return Ok(failed(diagnostics, Failure::NoFullCoverageTeam));
    }

    let team_scores: Vec<ScoreVector> = scored
        .iter()
        .map(|(_, v)| ScoreVector::new(v.to_array().to_vec()))
        .collect::<Result<_>>()?;
    let keep = non_dominated(&team_scores)?;
    rounds.pareto_teams = keep.len();
    diagnostics.rounds = Some(rounds);

    let mut slots: Vec<Option<(Team<'a>, ObjectiveVector)>> = scored.into_iter().map(Some).collect();
    let front: Vec<(Team<'a>, ObjectiveVector)> =
        keep.iter().map(|&i| slots[i].take().expect("distinct indices")).collect();
    let pick = select_from_front(&front, params.selection, &mut rng);
    let (team, objectives) = front.into_iter().nth(pick).expect("pick within front");

    Ok(AssemblyOutcome {
        method,
        formation: Formation::Formed { team, objectives },
        diagnostics,
    })
}

/// Greedy set cover: repeatedly add the candidate with the lowest
/// matched-cost per newly covered requirement until every requirement is met.
pub fn assemble_incremental<'a>(pool: &'a [Candidate], project: &Project) -> Result<AssemblyOutcome<'a>> {
    greedy(pool, project, false)
}

/// Greedy set cover that draws each pick from the class currently
/// underrepresented in the partial team, falling back to the other class
/// when the preferred one cannot add coverage.
pub fn assemble_fair_allocation<'a>(
    pool: &'a [Candidate],
    project: &Project,
) -> Result<AssemblyOutcome<'a>> {
    greedy(pool, project, true)
}

/// Runs `method` on one project. `params` supplies team size, sample count
/// and seed for the multi-objective path; its selection field is replaced by
/// the method's configuration.
pub fn assemble<'a>(
    pool: &'a [Candidate],
    project: &Project,
    method: Method,
    params: Option<&AssemblyParams>,
) -> Result<AssemblyOutcome<'a>> {
    match method {
        Method::Incremental => assemble_incremental(pool, project),
        Method::FairAllocation => assemble_fair_allocation(pool, project),
        Method::MultiObjective(selection) => {
            let params = params.ok_or_else(|| {
                Error::InvalidParams(
                    "multi-objective assembly needs a team size and a number of random teams"
                        .into(),
                )
            })?;
            assemble_multi_objective(
                pool,
                project,
                &AssemblyParams {
                    selection,
                    ..*params
                },
            )
        }
    }
}

struct Step<'a> {
    candidate: &'a Candidate,
    added_cost: f64,
    ratio: f64,
}

fn greedy<'a>(pool: &'a [Candidate], project: &Project, fair: bool) -> Result<AssemblyOutcome<'a>> {
    let method = if fair {
        Method::FairAllocation
    } else {
        Method::Incremental
    };
    let mut diagnostics = Diagnostics {
        pool_size: pool.len(),
        ..Diagnostics::default()
    };
    let filtered = match filter_candidates(pool, project) {
        Ok(f) => f,
        Err(Error::InfeasibleProject(_)) => {
            return Ok(AssemblyOutcome {
                method,
                formation: Formation::Failed(Failure::NoMatchingCandidate),
                diagnostics,
            })
        }
        Err(e) => return Err(e),
    };
    diagnostics.filtered_candidates = filtered.len();

    let mut covered: BTreeSet<&SkillId> = BTreeSet::new();
    let mut members: Vec<&'a Candidate> = Vec::new();
    let mut class_cost = [0.0f64; 2];
    let mut class_count = [0usize; 2];

    while covered.len() < project.len() {
        let best_in = |class: Option<AttributeClass>| {
            filtered
                .iter()
                .filter(|c| class.is_none_or(|k| c.attribute() == k))
                .filter(|c| !members.iter().any(|m| m.id() == c.id()))
                .filter_map(|c| {
                    let new = project
                        .requirements()
                        .iter()
                        .filter(|s| c.has_skill(s) && !covered.contains(s))
                        .count();
                    if new == 0 {
                        return None;
                    }
                    let added_cost: f64 = project.requirements().iter().filter_map(|s| c.cost(s)).sum();
                    Some(Step {
                        candidate: c,
                        added_cost,
                        ratio: added_cost / new as f64,
                    })
                })
                .min_by(|a, b| {
                    a.ratio
                        .total_cmp(&b.ratio)
                        .then_with(|| a.added_cost.total_cmp(&b.added_cost))
                        .then_with(|| a.candidate.id().cmp(b.candidate.id()))
                })
        };

        let step = if fair {
            let preferred = underrepresented(class_count, class_cost);
            best_in(Some(preferred)).or_else(|| best_in(Some(preferred.other())))
        } else {
            best_in(None)
        };

        let Some(step) = step else {
            return Ok(AssemblyOutcome {
                method,
                formation: Formation::Failed(Failure::CoverageUnreachable),
                diagnostics,
            });
        };
        let class = step.candidate.attribute() as usize;
        class_count[class] += 1;
        class_cost[class] += step.added_cost;
        covered.extend(
            project
                .requirements()
                .iter()
                .filter(|s| step.candidate.has_skill(s)),
        );
        members.push(step.candidate);
    }

    let team = Team::new(members)?;
    Ok(AssemblyOutcome {
        method,
        formation: Formation::formed(team, project)?,
        diagnostics,
    })
}

/// Class with fewer members; on a tie, the one with lower accumulated cost;
/// then `ClassZero`.
fn underrepresented(count: [usize; 2], cost: [f64; 2]) -> AttributeClass {
    use AttributeClass::*;
    match count[0].cmp(&count[1]) {
        Ordering::Less => ClassZero,
        Ordering::Greater => ClassOne,
        Ordering::Equal if cost[1] < cost[0] => ClassOne,
        Ordering::Equal => ClassZero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::objectives::team_cost;
    use crate::pareto::dominates;
    use AttributeClass::*;

    fn params(m: usize, n: usize, selection: SelectionConfig) -> AssemblyParams {
        AssemblyParams {
            team_size: m,
            num_random_teams: n,
            seed: 11,
            selection,
        }
    }

    #[test]
    fn filter_keeps_worked_example_and_drops_outsiders() {
        let (mut pool, project) = worked_example();
        pool.push(candidate("zz", ClassZero, &[("cooking", 1.0)]));
        let kept = filter_candidates(&pool, &project).unwrap();
        let ids: Vec<_> = kept.iter().map(|c| c.id().as_str()).collect();
        assert_eq!(ids, ["member1", "member2", "member3"]);

        let p = project_with(&["cooking"]);
        assert_eq!(filter_candidates(&pool, &p).unwrap().len(), 1);
        assert!(matches!(
            filter_candidates(&pool, &project_with(&["none"])),
            Err(Error::InfeasibleProject(_))
        ));
    }

    fn project_with(reqs: &[&str]) -> Project {
        project("q", reqs)
    }

    #[test]
    fn candidate_scores_use_inf_for_missing() {
        let (pool, project) = worked_example();
        let s = candidate_scores(&pool[1], &project);
        assert_eq!(s.values(), &[0.100, f64::INFINITY, f64::INFINITY, 0.022]);

        let all = candidate("u", ClassZero, &[("a", 0.3), ("b", 0.3)]);
        assert_eq!(candidate_scores(&all, &project_with(&["a", "b"])).values(), &[0.3, 0.3]);
    }

    #[test]
    fn cheaper_identical_skills_dominates() {
        let p = project_with(&["a", "b"]);
        let cheap = candidate("c1", ClassZero, &[("a", 0.2), ("b", 0.2)]);
        let dear = candidate("c2", ClassOne, &[("a", 0.5), ("b", 0.5)]);
        assert!(dominates(&candidate_scores(&cheap, &p), &candidate_scores(&dear, &p)).unwrap());

        let pool = vec![cheap, dear];
        let front = pareto_candidates(&pool, &p).unwrap();
        assert_eq!(front.len(), 1);
        assert_eq!(front[0].id().as_str(), "c1");
    }

    #[test]
    fn disjoint_skills_both_survive() {
        let p = project_with(&["a", "b"]);
        let pool = vec![
            candidate("c1", ClassZero, &[("a", 0.2)]),
            candidate("c2", ClassOne, &[("b", 0.9)]),
        ];
        assert_eq!(pareto_candidates(&pool, &p).unwrap().len(), 2);
    }

    #[test]
    fn forced_sample_and_fallback() {
        let (pool, _) = worked_example();
        let refs: Vec<&Candidate> = pool.iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = form_random_teams(&refs, 1, 3, &mut rng).unwrap();
        assert_eq!(out.teams.len(), 1);
        assert_eq!(out.teams[0].len(), 3);
        assert!(!out.fallback);

        let out = form_random_teams(&refs, 5, 4, &mut rng).unwrap();
        assert!(out.fallback);
        assert_eq!(out.teams.len(), 1);
        assert_eq!(out.teams[0].len(), 3);
    }

    #[test]
    fn sampling_is_deterministic_under_seed() {
        let pool: Vec<Candidate> = (0..10)
            .map(|i| candidate(&format!("c{i}"), ClassZero, &[("a", 1.0)]))
            .collect();
        let refs: Vec<&Candidate> = pool.iter().collect();
        let a = form_random_teams(&refs, 50, 3, &mut project_rng(5, "p1")).unwrap();
        let b = form_random_teams(&refs, 50, 3, &mut project_rng(5, "p1")).unwrap();
        assert_eq!(a, b);
        let c = form_random_teams(&refs, 50, 3, &mut project_rng(5, "p2")).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_is_uniform_over_subsets() {
        // 6 choose 3 = 20 subsets, each expected with frequency 1/20.
        let pool: Vec<Candidate> = (0..6)
            .map(|i| candidate(&format!("c{i}"), ClassZero, &[("a", 1.0)]))
            .collect();
        let refs: Vec<&Candidate> = pool.iter().collect();
        let out = form_random_teams(&refs, 10_000, 3, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let mut counts = std::collections::BTreeMap::new();
        for t in &out.teams {
            let key: Vec<String> = t.ids().map(|i| i.to_string()).collect();
            *counts.entry(key).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 20);
        for (team, &n) in &counts {
            let freq = n as f64 / 10_000.0;
            assert!((freq - 0.05).abs() <= 0.01, "{team:?} drawn with frequency {freq}");
        }
    }

    #[test]
    fn params_validation() {
        assert!(params(2, 10, SelectionConfig::TopSum).validate(10).is_err());
        assert!(params(4, 0, SelectionConfig::TopSum).validate(10).is_err());
        assert!(params(4, 10, SelectionConfig::TopSum).validate(4).is_err());
        assert!(params(3, 1, SelectionConfig::TopSum).validate(4).is_ok());
    }

    #[test]
    fn single_feasible_team_is_selected() {
        let (mut pool, project) = worked_example();
        // an outsider so that M < |pool|
        pool.push(candidate("outsider", ClassZero, &[("cooking", 1.0)]));
        for config in SelectionConfig::ALL {
            let out = assemble_multi_objective(&pool, &project, &params(3, 4, config)).unwrap();
            let team = out.formation.team().expect("formed");
            assert_eq!(coverage(team, &project), project.len());
            let ids: Vec<_> = team.ids().map(|i| i.as_str()).collect();
            assert_eq!(ids, ["member1", "member2", "member3"]);
            let rounds = out.diagnostics.rounds.unwrap();
            assert_eq!(out.diagnostics.filtered_candidates, 3);
            assert_eq!(rounds.pareto_candidates, 3);
            assert_eq!(rounds.full_coverage_teams, 4);
            assert_eq!(rounds.pareto_teams, 4);
            assert_eq!(out.diagnostics.candidate_reduction(), Some(0.0));
            assert_eq!(out.diagnostics.team_reduction(), Some(0.0));
        }
    }

    #[test]
    fn dominating_team_wins_every_config() {
        // Two disjoint feasible trios. The g-trio is no worse on any
        // objective and strictly better on at least one.
        let pool = vec![
            candidate("g1", ClassZero, &[("a", 0.1)]),
            candidate("g2", ClassOne, &[("b", 0.1)]),
            candidate("g3", ClassZero, &[("c", 0.1)]),
            candidate("h1", ClassOne, &[("a", 0.2), ("x", 1.0)]),
            candidate("h2", ClassOne, &[("b", 0.3), ("x", 1.0)]),
            candidate("h3", ClassOne, &[("c", 0.9), ("x", 1.0)]),
        ];
        let p = project_with(&["a", "b", "c"]);
        // Cheap trio dominates the pricier one per candidate, so round one
        // already keeps only g1..g3.
        let front = pareto_candidates(&pool, &p).unwrap();
        assert_eq!(front.len(), 3);
        for config in SelectionConfig::ALL {
            let out = assemble_multi_objective(&pool, &p, &params(3, 20, config)).unwrap();
            let ids: Vec<_> = out.formation.team().unwrap().ids().map(|i| i.as_str()).collect();
            assert_eq!(ids, ["g1", "g2", "g3"], "{config}");
        }
    }

    #[test]
    fn top_cost_matches_rescan_of_samples() {
        let pool = synthetic_pool(20, 8, 3);
        let p = project_with(&["s0", "s1", "s2"]);
        let prm = params(4, 500, SelectionConfig::TopCost);
        let out = assemble_multi_objective(&pool, &p, &prm).unwrap();

        // Re-draw the same samples with the same stream and rescan them.
        let candidates = pareto_candidates(&pool, &p).unwrap();
        let mut rng = project_rng(prm.seed, p.id());
        let teams = form_random_teams(&candidates, 500, 4, &mut rng).unwrap().teams;
        let best = teams
            .iter()
            .filter(|t| coverage(t, &p) == p.len())
            .map(|t| team_cost(t, &p))
            .fold(f64::INFINITY, f64::min);
        if let Some(v) = out.formation.objectives() {
            assert_eq!(v.cost, best);
        } else {
            assert!(best.is_infinite());
        }
    }

    fn synthetic_pool(n: usize, skills: usize, seed: u64) -> Vec<Candidate> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let k = rng.random_range(1..=3);
                let chosen = index::sample(&mut rng, skills, k);
                let cost = rng.random_range(0.1..5.0);
                let class = if rng.random_bool(0.5) { ClassZero } else { ClassOne };
                Candidate::with_flat_cost(
                    crate::model::CandidateId::new(format!("c{i:02}")).unwrap(),
                    class,
                    cost,
                    chosen.into_iter().map(|j| skill(&format!("s{j}"))),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn top_sum_normalization() {
        let v = |c, w| ObjectiveVector {
            cost: c,
            workload: w,
            expertise: 0.5,
            representation: 0.0,
            cost_difference: 1.0,
        };
        let scores = top_sum_scores(&[v(10.0, 0.0), v(20.0, 1.0), v(30.0, 0.5)]);
        assert_eq!(scores, vec![0.0, 1.5, 1.5]);
    }

    #[test]
    fn incremental_single_candidate_covers_all() {
        let pool = vec![
            candidate("solo", ClassOne, &[("a", 0.4), ("b", 0.4), ("c", 0.4)]),
            candidate("other", ClassZero, &[("z", 0.1)]),
        ];
        let p = project_with(&["a", "b", "c"]);
        let out = assemble_incremental(&pool, &p).unwrap();
        let team = out.formation.team().unwrap();
        assert_eq!(team.len(), 1);
        assert!((out.formation.objectives().unwrap().cost - 1.2).abs() < 1e-12);
        assert!(out.diagnostics.rounds.is_none());
    }

    #[test]
    fn incremental_prefers_cost_effectiveness() {
        // x: two requirements for 1.0 total (ratio 0.5); y: one for 0.9.
        let pool = vec![
            candidate("x", ClassZero, &[("a", 0.5), ("b", 0.5)]),
            candidate("y", ClassOne, &[("c", 0.9)]),
            candidate("y2", ClassOne, &[("a", 0.9)]),
        ];
        let p = project_with(&["a", "b", "c"]);
        let out = assemble_incremental(&pool, &p).unwrap();
        let ids: Vec<_> = out.formation.team().unwrap().ids().map(|i| i.as_str()).collect();
        assert_eq!(ids, ["x", "y"]);
    }

    #[test]
    fn greedy_failure_when_unreachable() {
        let pool = vec![candidate("x", ClassZero, &[("a", 0.5)])];
        let p = project_with(&["a", "b"]);
        let out = assemble_incremental(&pool, &p).unwrap();
        assert_eq!(out.formation, Formation::Failed(Failure::CoverageUnreachable));
        let out = assemble_fair_allocation(&pool, &project_with(&["q"])).unwrap();
        assert_eq!(out.formation, Formation::Failed(Failure::NoMatchingCandidate));
    }

    #[test]
    fn fair_allocation_alternates_classes() {
        // Incremental would take the two cheap ClassOne candidates.
        let pool = vec![
            candidate("o1", ClassOne, &[("a", 0.1)]),
            candidate("o2", ClassOne, &[("b", 0.1)]),
            candidate("z1", ClassZero, &[("a", 0.5)]),
            candidate("z2", ClassZero, &[("b", 0.5)]),
        ];
        let p = project_with(&["a", "b"]);
        let fair = assemble_fair_allocation(&pool, &p).unwrap();
        let team = fair.formation.team().unwrap();
        let classes: Vec<_> = team.members().iter().map(|m| m.attribute()).collect();
        // first pick from ClassZero (z1: ratio 0.5), then ClassOne (o2 covers b)
        let ids: Vec<_> = team.ids().map(|i| i.as_str()).collect();
        assert_eq!(ids, ["o2", "z1"]);
        assert!(classes.contains(&ClassZero) && classes.contains(&ClassOne));
        assert_eq!(fair.formation.objectives().unwrap().representation, 0.0);

        let inc = assemble_incremental(&pool, &p).unwrap();
        assert_eq!(inc.formation.objectives().unwrap().representation, 1.0);
    }

    #[test]
    fn fair_allocation_single_class_matches_incremental() {
        let pool: Vec<Candidate> = synthetic_pool(25, 8, 9)
            .into_iter()
            .map(|c| c.with_attribute(ClassOne))
            .collect();
        for reqs in [&["s0", "s1"][..], &["s2", "s3", "s4"], &["s5", "s6", "s7", "s1"]] {
            let p = project_with(reqs);
            let a = assemble_incremental(&pool, &p).unwrap();
            let b = assemble_fair_allocation(&pool, &p).unwrap();
            assert_eq!(a.formation, b.formation);
        }
    }

    #[test]
    fn underrepresented_rule() {
        assert_eq!(underrepresented([0, 0], [0.0, 0.0]), ClassZero);
        assert_eq!(underrepresented([1, 0], [0.3, 0.0]), ClassOne);
        assert_eq!(underrepresented([1, 2], [0.3, 0.1]), ClassZero);
        assert_eq!(underrepresented([1, 1], [0.3, 0.1]), ClassOne);
        assert_eq!(underrepresented([1, 1], [0.1, 0.3]), ClassZero);
    }

    #[test]
    fn multi_objective_is_deterministic() {
        let pool = synthetic_pool(30, 6, 4);
        let p = project_with(&["s0", "s1", "s2"]);
        for config in SelectionConfig::ALL {
            let prm = params(4, 200, config);
            let a = assemble_multi_objective(&pool, &p, &prm).unwrap();
            let b = assemble_multi_objective(&pool, &p, &prm).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn config_tokens_round_trip() {
        for c in SelectionConfig::ALL {
            assert_eq!(c.token().parse::<SelectionConfig>().unwrap(), c);
        }
        assert!("top-nothing".parse::<SelectionConfig>().is_err());
    }
}
