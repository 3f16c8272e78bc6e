//! Domain types shared by the objective functions, the assemblers and the
//! data loaders.
//!
//! Everything here is immutable once constructed. Candidates own their cost
//! profile; teams borrow candidates from a pool and keep them sorted by id,
//! which is the tie-breaking order used throughout the crate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One skill token in the skill universe. Equality is exact token equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SkillId(String);

impl SkillId {
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        if token.is_empty() {
            return Err(Error::EmptySkill);
        }
        Ok(Self(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for SkillId {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Self::new(value)
    }
}

impl From<SkillId> for String {
    fn from(value: SkillId) -> Self {
        value.0
    }
}

impl fmt::Display for SkillId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Value of the binary protected attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttributeClass {
    ClassZero,
    ClassOne,
}

impl AttributeClass {
    pub const ALL: [AttributeClass; 2] = [AttributeClass::ClassZero, AttributeClass::ClassOne];

    pub fn other(self) -> Self {
        match self {
            AttributeClass::ClassZero => AttributeClass::ClassOne,
            AttributeClass::ClassOne => AttributeClass::ClassZero,
        }
    }

    /// File token, `0` or `1`.
    pub fn token(self) -> &'static str {
        match self {
            AttributeClass::ClassZero => "0",
            AttributeClass::ClassOne => "1",
        }
    }
}

impl FromStr for AttributeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(AttributeClass::ClassZero),
            "1" => Ok(AttributeClass::ClassOne),
            other => Err(Error::UnknownToken {
                what: "attribute class",
                token: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for AttributeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(String);

impl CandidateId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::EmptyCandidateId);
        }
        Ok(Self(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A member of the candidate pool.
///
/// The cost profile is sparse: a skill is possessed iff it is a key, and every
/// stored cost is strictly positive and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    id: CandidateId,
    attribute: AttributeClass,
    cost_profile: BTreeMap<SkillId, f64>,
}

impl Candidate {
    pub fn new(
        id: CandidateId,
        attribute: AttributeClass,
        cost_profile: BTreeMap<SkillId, f64>,
    ) -> Result<Self> {
        if cost_profile.is_empty() {
            return Err(Error::EmptyCostProfile(id.0));
        }
        for (skill, &cost) in &cost_profile {
            if !(cost.is_finite() && cost > 0.0) {
                return Err(Error::InvalidCost {
                    id: id.0,
                    skill: skill.0.clone(),
                    cost,
                });
            }
        }
        Ok(Self {
            id,
            attribute,
            cost_profile,
        })
    }

    /// Candidate whose declared cost applies to every listed skill.
    pub fn with_flat_cost<I>(
        id: CandidateId,
        attribute: AttributeClass,
        cost: f64,
        skills: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = SkillId>,
    {
        let profile = skills.into_iter().map(|s| (s, cost)).collect();
        Self::new(id, attribute, profile)
    }

    pub fn id(&self) -> &CandidateId {
        &self.id
    }

    pub fn attribute(&self) -> AttributeClass {
        self.attribute
    }

    pub fn cost_profile(&self) -> &BTreeMap<SkillId, f64> {
        &self.cost_profile
    }

    /// Cost of `skill`, or `None` when the skill is not possessed.
    pub fn cost(&self, skill: &SkillId) -> Option<f64> {
        self.cost_profile.get(skill).copied()
    }

    pub fn has_skill(&self, skill: &SkillId) -> bool {
        self.cost_profile.contains_key(skill)
    }

    /// Copy of this candidate with a different attribute class.
    pub fn with_attribute(&self, attribute: AttributeClass) -> Self {
        Self {
            attribute,
            ..self.clone()
        }
    }

    /// Copy of this candidate with every cost multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let profile = self
            .cost_profile
            .iter()
            .map(|(s, c)| (s.clone(), c * factor))
            .collect();
        Self::new(self.id.clone(), self.attribute, profile)
    }

    /// The declared cost when every skill carries the same cost.
    pub fn flat_cost(&self) -> Option<f64> {
        let mut costs = self.cost_profile.values();
        let first = *costs.next()?;
        costs.all(|&c| c == first).then_some(first)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Project {
    id: String,
    requirements: BTreeSet<SkillId>,
}

impl Project {
    pub fn new<I>(id: impl Into<String>, requirements: I) -> Result<Self>
    where
        I: IntoIterator<Item = SkillId>,
    {
        let id = id.into();
        let requirements: BTreeSet<SkillId> = requirements.into_iter().collect();
        if requirements.is_empty() {
            return Err(Error::EmptyRequirements(id));
        }
        Ok(Self { id, requirements })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Requirements in sorted order.
    pub fn requirements(&self) -> &BTreeSet<SkillId> {
        &self.requirements
    }

    pub fn len(&self) -> usize {
        self.requirements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requirements.is_empty()
    }

    /// Number of requirements `candidate` possesses.
    pub fn matched_by(&self, candidate: &Candidate) -> usize {
        self.requirements
            .iter()
            .filter(|s| candidate.has_skill(s))
            .count()
    }
}

/// A set of candidates borrowed from a pool, iterated in candidate-id order.
#[derive(Debug, Clone, PartialEq)]
pub struct Team<'a> {
    members: Vec<&'a Candidate>,
}

impl<'a> Team<'a> {
    pub fn new<I>(members: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Candidate>,
    {
        let mut members: Vec<&'a Candidate> = members.into_iter().collect();
        members.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = members.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateMember(w[0].id.0.clone()));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[&'a Candidate] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &'a CandidateId> + '_ {
        self.members.iter().map(|m| &m.id)
    }

    pub fn contains(&self, id: &CandidateId) -> bool {
        self.members
            .binary_search_by(|m| m.id.cmp(id))
            .is_ok()
    }

    /// Lexicographic comparison of the sorted member-id lists.
    pub fn cmp_ids(&self, other: &Team<'_>) -> std::cmp::Ordering {
        self.ids().cmp(other.ids())
    }

    /// Team extended by one more member.
    pub fn with_member(&self, candidate: &'a Candidate) -> Result<Self> {
        Self::new(self.members.iter().copied().chain(std::iter::once(candidate)))
    }
}

/// Number of requirements of `project` possessed by at least one member.
pub fn coverage(team: &Team<'_>, project: &Project) -> usize {
    project
        .requirements
        .iter()
        .filter(|s| team.members.iter().any(|m| m.has_skill(s)))
        .count()
}

/// The five minimized objectives of a formed team.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub cost: f64,
    pub workload: f64,
    pub expertise: f64,
    pub representation: f64,
    pub cost_difference: f64,
}

impl ObjectiveVector {
    pub fn get(&self, objective: Objective) -> f64 {
        match objective {
            Objective::Cost => self.cost,
            Objective::Workload => self.workload,
            Objective::Expertise => self.expertise,
            Objective::Representation => self.representation,
            Objective::CostDifference => self.cost_difference,
        }
    }

    pub fn to_array(&self) -> [f64; 5] {
        Objective::ALL.map(|o| self.get(o))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Cost,
    Workload,
    Expertise,
    Representation,
    CostDifference,
}

impl Objective {
    pub const ALL: [Objective; 5] = [
        Objective::Cost,
        Objective::Workload,
        Objective::Expertise,
        Objective::Representation,
        Objective::CostDifference,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Objective::Cost => "Cost",
            Objective::Workload => "Workload",
            Objective::Expertise => "Expertise",
            Objective::Representation => "Representation",
            Objective::CostDifference => "CostDiff",
        }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn coverage_of_worked_example() {
        let (pool, project) = worked_example();
        let team = Team::new(&pool).unwrap();
        assert_eq!(coverage(&team, &project), 4);

        let first = Team::new(&pool[..1]).unwrap();
        assert_eq!(coverage(&first, &project), 1);
    }

    #[test]
    fn coverage_zero_for_disjoint_skills() {
        let pool = [candidate("a", AttributeClass::ClassZero, &[("x", 1.0)])];
        let team = Team::new(&pool).unwrap();
        assert_eq!(coverage(&team, &project("p", &["y", "z"])), 0);
    }

    #[test]
    fn rejects_non_positive_costs() {
        let id = CandidateId::new("a").unwrap();
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            let profile = [(skill("x"), bad)].into_iter().collect();
            assert!(matches!(
                Candidate::new(id.clone(), AttributeClass::ClassZero, profile),
                Err(Error::InvalidCost { .. })
            ));
        }
        assert!(matches!(
            Candidate::new(id, AttributeClass::ClassZero, BTreeMap::new()),
            Err(Error::EmptyCostProfile(_))
        ));
    }

    #[test]
    fn empty_tokens_rejected() {
        assert!(SkillId::new("").is_err());
        assert!(CandidateId::new("").is_err());
        assert!(Project::new("p", std::iter::empty()).is_err());
    }

    #[test]
    fn project_deduplicates_requirements() {
        let p = project("p", &["java", "java", "sql"]);
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn team_sorted_and_rejects_duplicates() {
        let (pool, _) = worked_example();
        let team = Team::new([&pool[2], &pool[0], &pool[1]]).unwrap();
        let ids: Vec<_> = team.ids().map(|i| i.as_str()).collect();
        assert_eq!(ids, ["member1", "member2", "member3"]);
        assert!(team.contains(pool[1].id()));
        assert!(matches!(
            Team::new([&pool[0], &pool[0]]),
            Err(Error::DuplicateMember(_))
        ));
    }

    #[test]
    fn attribute_tokens() {
        assert_eq!("0".parse::<AttributeClass>().unwrap(), AttributeClass::ClassZero);
        assert_eq!("1".parse::<AttributeClass>().unwrap(), AttributeClass::ClassOne);
        assert!("2".parse::<AttributeClass>().is_err());
        assert_eq!(AttributeClass::ClassZero.other(), AttributeClass::ClassOne);
    }

    #[test]
    fn flat_cost_detection() {
        let a = candidate("a", AttributeClass::ClassOne, &[("x", 0.5), ("y", 0.5)]);
        assert_eq!(a.flat_cost(), Some(0.5));
        let b = candidate("b", AttributeClass::ClassOne, &[("x", 0.5), ("y", 0.6)]);
        assert_eq!(b.flat_cost(), None);
    }

    proptest::proptest! {
        #[test]
        fn coverage_is_monotone(
            skills in proptest::collection::vec(proptest::collection::btree_set(0u8..12, 1..5), 1..8),
            reqs in proptest::collection::btree_set(0u8..12, 1..6),
        ) {
            let pool: Vec<Candidate> = skills
                .iter()
                .enumerate()
                .map(|(i, set)| {
                    Candidate::with_flat_cost(
                        CandidateId::new(format!("c{i:02}")).unwrap(),
                        AttributeClass::ClassZero,
                        1.0,
                        set.iter().map(|s| skill(&format!("s{s}"))),
                    )
                    .unwrap()
                })
                .collect();
            let project = Project::new("p", reqs.iter().map(|s| skill(&format!("s{s}")))).unwrap();
            let mut prev = 0;
            for k in 1..=pool.len() {
                let team = Team::new(&pool[..k]).unwrap();
                let c = coverage(&team, &project);
                proptest::prop_assert!(c >= prev && c <= project.len());
                let full = project.requirements().iter().all(|s| pool[..k].iter().any(|m| m.has_skill(s)));
                proptest::prop_assert_eq!(c == project.len(), full);
                prev = c;
            }
        }
    }
}
