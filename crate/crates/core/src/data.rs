//! Candidate pool and project files, plus synthetic pools and projects.
//!
//! Files are either comma-separated with a header row (`.csv`) or a JSON
//! array of records (`.json`):
//!
//! ```text
//! id,cost,attribute,skills        id,skills
//! u7,0.05,1,java;sql              p1,java;sql
//! ```
//!
//! In JSON the `skills` field is a list of tokens and `attribute` may be
//! given as `0`/`1` or `"0"`/`"1"`. A candidate's declared cost applies to
//! every skill they list.

use std::collections::{BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AttributeClass, Candidate, CandidateId, Project, SkillId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("csv") => Ok(FileFormat::Csv),
            Some("json") => Ok(FileFormat::Json),
            _ => Err(Error::UnsupportedFormat(path.to_path_buf())),
        }
    }
}

#[derive(Debug, Deserialize, Serialize)]
struct PoolCsvRecord {
    id: String,
    cost: f64,
    attribute: String,
    skills: String,
}

#[derive(Debug, Deserialize, Serialize)]
struct ProjectCsvRecord {
    id: String,
    skills: String,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum AttributeToken {
    Number(u64),
    Text(String),
}

#[derive(Debug, Deserialize, Serialize)]
struct PoolJsonRecord {
    id: String,
    cost: f64,
    attribute: AttributeToken,
    skills: Vec<String>,
}

#[derive(Debug, Deserialize, Serialize)]
struct ProjectJsonRecord {
    id: String,
    skills: Vec<String>,
}

/// Pool record before validation; `line` is the file line for CSV and the
/// 1-based record index for JSON.
struct RawCandidate {
    line: u64,
    id: String,
    cost: f64,
    attribute: String,
    skills: Vec<String>,
}

struct RawProject {
    line: u64,
    id: String,
    skills: Vec<String>,
}

fn split_skills(field: &str) -> Vec<String> {
    field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn load_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Load {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    load_error(path, line, err.to_string())
}

fn read_csv<T, R, F, O>(path: &Path, reader: R, mut convert: F) -> Result<Vec<O>>
where
    T: for<'de> Deserialize<'de>,
    R: Read,
    F: FnMut(u64, T) -> O,
{
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let row: T = record
            .deserialize(Some(&headers))
            .map_err(|e| load_error(path, line, e.to_string()))?;
        out.push(convert(line, row));
    }
    Ok(out)
}

fn read_raw_pool(path: &Path) -> Result<Vec<RawCandidate>> {
    let format = FileFormat::from_path(path)?;
    let reader = BufReader::new(open(path)?);
    match format {
        FileFormat::Csv => read_csv(path, reader, |line, r: PoolCsvRecord| RawCandidate {
            line,
            id: r.id,
            cost: r.cost,
            attribute: r.attribute,
            skills: split_skills(&r.skills),
        }),
        FileFormat::Json => {
            let records: Vec<PoolJsonRecord> =
                serde_json::from_reader(reader).map_err(|e| load_error(path, e.line() as u64, e.to_string()))?;
            Ok(records
                .into_iter()
                .zip(1..)
                .map(|(r, line)| RawCandidate {
                    line,
                    id: r.id,
                    cost: r.cost,
                    attribute: match r.attribute {
                        AttributeToken::Number(n) => n.to_string(),
                        AttributeToken::Text(t) => t,
                    },
                    skills: r.skills.iter().flat_map(|s| split_skills(s)).collect(),
                })
                .collect())
        }
    }
}

fn read_raw_projects(path: &Path) -> Result<Vec<RawProject>> {
    let format = FileFormat::from_path(path)?;
    let reader = BufReader::new(open(path)?);
    match format {
        FileFormat::Csv => read_csv(path, reader, |line, r: ProjectCsvRecord| RawProject {
            line,
            id: r.id,
            skills: split_skills(&r.skills),
        }),
        FileFormat::Json => {
            let records: Vec<ProjectJsonRecord> =
                serde_json::from_reader(reader).map_err(|e| load_error(path, e.line() as u64, e.to_string()))?;
            Ok(records
                .into_iter()
                .zip(1..)
                .map(|(r, line)| RawProject {
                    line,
                    id: r.id,
                    skills: r.skills.iter().flat_map(|s| split_skills(s)).collect(),
                })
                .collect())
        }
    }
}

fn skill_ids(path: &Path, line: u64, tokens: Vec<String>) -> Result<Vec<SkillId>> {
    tokens
        .into_iter()
        .map(|t| SkillId::new(t).map_err(|e| load_error(path, line, e.to_string())))
        .collect()
}

/// Loads a candidate pool. With `attribute_proportion = Some(p)` the file's
/// attribute column is ignored and exactly `round(p * n)` candidates, chosen
/// by a shuffle seeded with `seed`, are assigned `ClassZero`.
pub fn load_pool(
    path: impl AsRef<Path>,
    attribute_proportion: Option<f64>,
    seed: u64,
) -> Result<Vec<Candidate>> {
    let path = path.as_ref();
    let raw = read_raw_pool(path)?;
    if raw.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    let mut seen = HashSet::new();
    let mut pool = Vec::with_capacity(raw.len());
    for r in raw {
        if !seen.insert(r.id.clone()) {
            return Err(load_error(path, r.line, format!("duplicate candidate id {:?}", r.id)));
        }
        if !(r.cost.is_finite() && r.cost > 0.0) {
            return Err(load_error(path, r.line, format!("cost must be positive, got {}", r.cost)));
        }
        if r.skills.is_empty() {
            return Err(load_error(path, r.line, "skill list is empty"));
        }
        let attribute: AttributeClass = r
            .attribute
            .parse()
            .map_err(|e: Error| load_error(path, r.line, e.to_string()))?;
        let id = CandidateId::new(r.id).map_err(|e| load_error(path, r.line, e.to_string()))?;
        let skills = skill_ids(path, r.line, r.skills)?;
        let candidate = Candidate::with_flat_cost(id, attribute, r.cost, skills)
            .map_err(|e| load_error(path, r.line, e.to_string()))?;
        pool.push(candidate);
    }
    match attribute_proportion {
        Some(p) => reassign_attributes(&pool, p, seed),
        None => Ok(pool),
    }
}

/// Copy of `pool` where exactly `round(p * n)` candidates, picked by a
/// seeded shuffle, are `ClassZero` and the rest `ClassOne`.
pub fn reassign_attributes(pool: &[Candidate], proportion: f64, seed: u64) -> Result<Vec<Candidate>> {
    check_proportion(proportion)?;
    let zeros = (proportion * pool.len() as f64).round() as usize;
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut classes = vec![AttributeClass::ClassOne; pool.len()];
    for &i in &order[..zeros] {
        classes[i] = AttributeClass::ClassZero;
    }
    Ok(pool
        .iter()
        .zip(classes)
        .map(|(c, class)| c.with_attribute(class))
        .collect())
}

fn check_proportion(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "attribute proportion must lie strictly between 0 and 1, got {p}"
        )))
    }
}

/// Loads projects in file order, collapsing repeated skills within a record.
pub fn load_projects(path: impl AsRef<Path>) -> Result<Vec<Project>> {
    let path = path.as_ref();
    let raw = read_raw_projects(path)?;
    if raw.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    let mut seen = HashSet::new();
    raw.into_iter()
        .map(|r| {
            if !seen.insert(r.id.clone()) {
                return Err(load_error(path, r.line, format!("duplicate project id {:?}", r.id)));
            }
            if r.skills.is_empty() {
                return Err(load_error(path, r.line, "requirement list is empty"));
            }
            let skills = skill_ids(path, r.line, r.skills)?;
            Project::new(r.id, skills).map_err(|e| load_error(path, r.line, e.to_string()))
        })
        .collect()
}

fn file_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    |source| Error::File {
        path: path.to_path_buf(),
        source,
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(file_error(path))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(file_error(path))?))
}

fn joined_skills<'a>(skills: impl Iterator<Item = &'a SkillId>) -> String {
    skills.map(SkillId::as_str).collect::<Vec<_>>().join(";")
}

/// Writes a pool in the format implied by the extension. Every candidate
/// must carry a single flat cost.
pub fn write_pool(path: impl AsRef<Path>, pool: &[Candidate]) -> Result<()> {
    let path = path.as_ref();
    match FileFormat::from_path(path)? {
        FileFormat::Csv => write_pool_csv(create(path)?, pool),
        FileFormat::Json => {
            let records = pool
                .iter()
                .map(|c| {
                    Ok(PoolJsonRecord {
                        id: c.id().to_string(),
                        cost: flat_cost(c)?,
                        attribute: AttributeToken::Text(c.attribute().token().into()),
                        skills: c.cost_profile().keys().map(|s| s.to_string()).collect(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut w = create(path)?;
            serde_json::to_writer_pretty(&mut w, &records)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn flat_cost(c: &Candidate) -> Result<f64> {
    c.flat_cost()
        .ok_or_else(|| Error::NonUniformCost(c.id().to_string()))
}

pub fn write_pool_csv<W: Write>(writer: W, pool: &[Candidate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for c in pool {
        w.serialize(PoolCsvRecord {
            id: c.id().to_string(),
            cost: flat_cost(c)?,
            attribute: c.attribute().token().into(),
            skills: joined_skills(c.cost_profile().keys()),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_projects(path: impl AsRef<Path>, projects: &[Project]) -> Result<()> {
    let path = path.as_ref();
    match FileFormat::from_path(path)? {
        FileFormat::Csv => write_projects_csv(create(path)?, projects),
        FileFormat::Json => {
            let records: Vec<ProjectJsonRecord> = projects
                .iter()
                .map(|p| ProjectJsonRecord {
                    id: p.id().to_string(),
                    skills: p.requirements().iter().map(|s| s.to_string()).collect(),
                })
                .collect();
            let mut w = create(path)?;
            serde_json::to_writer_pretty(&mut w, &records)?;
            w.flush()?;
            Ok(())
        }
    }
}

pub fn write_projects_csv<W: Write>(writer: W, projects: &[Project]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for p in projects {
        w.serialize(ProjectCsvRecord {
            id: p.id().to_string(),
            skills: joined_skills(p.requirements().iter()),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Parameters for a synthetic candidate pool. Skill counts are uniform over
/// `skills_per_candidate`, costs log-uniform over `cost_range`.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisSpec {
    pub pool_size: usize,
    pub skill_universe: usize,
    pub skills_per_candidate: (usize, usize),
    pub cost_range: (f64, f64),
    pub attribute_proportion: f64,
    pub seed: u64,
}

impl SynthesisSpec {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.skills_per_candidate;
        let invalid = |m: String| Err(Error::InvalidParams(m));
        if self.pool_size == 0 {
            return invalid("pool size must be positive".into());
        }
        if lo == 0 || lo > hi {
            return invalid(format!("bad skills-per-candidate range {lo}..={hi}"));
        }
        if self.skill_universe < hi {
            return invalid(format!(
                "skill universe ({}) is smaller than the maximum skills per candidate ({hi})",
                self.skill_universe
            ));
        }
        let (clo, chi) = self.cost_range;
        if !(clo > 0.0 && clo <= chi && chi.is_finite()) {
            return invalid(format!("bad cost range [{clo}, {chi}]"));
        }
        check_proportion(self.attribute_proportion)
    }
}

/// Token for skill `index` in a universe of `universe` skills, zero-padded so
/// tokens sort numerically.
pub fn skill_token(index: usize, universe: usize) -> String {
    let width = universe.saturating_sub(1).to_string().len();
    format!("skill-{index:0width$}")
}

pub fn synthesize_pool(spec: &SynthesisSpec) -> Result<Vec<Candidate>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (lo, hi) = spec.skills_per_candidate;
    let (ln_lo, ln_hi) = (spec.cost_range.0.ln(), spec.cost_range.1.ln());
    let width = spec.pool_size.saturating_sub(1).to_string().len();
    let pool = (0..spec.pool_size)
        .map(|i| {
            let k = rng.random_range(lo..=hi);
            let skills = index::sample(&mut rng, spec.skill_universe, k)
                .into_iter()
                .map(|j| SkillId::new(skill_token(j, spec.skill_universe)))
                .collect::<Result<Vec<_>>>()?;
            let cost = if ln_hi > ln_lo {
                rng.random_range(ln_lo..ln_hi).exp()
            } else {
                spec.cost_range.0
            };
            Candidate::with_flat_cost(
                CandidateId::new(format!("u{i:0width$}"))?,
                AttributeClass::ClassOne,
                cost,
                skills,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    reassign_attributes(&pool, spec.attribute_proportion, spec.seed ^ 0x5eed_a77b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectSynthesisSpec {
    pub count: usize,
    pub skill_universe: usize,
    /// Inclusive range of requirement counts, drawn uniformly.
    pub requirements: (usize, usize),
    pub seed: u64,
}

pub fn synthesize_projects(spec: &ProjectSynthesisSpec) -> Result<Vec<Project>> {
    let (lo, hi) = spec.requirements;
    if spec.count == 0 || lo == 0 || lo > hi || spec.skill_universe < hi {
        return Err(Error::InvalidParams(format!(
            "bad project synthesis parameters: {} projects, {lo}..={hi} requirements over {} skills",
            spec.count, spec.skill_universe
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let width = spec.count.saturating_sub(1).to_string().len();
    (0..spec.count)
        .map(|i| {
            let k = rng.random_range(lo..=hi);
            let reqs = index::sample(&mut rng, spec.skill_universe, k)
                .into_iter()
                .map(|j| SkillId::new(skill_token(j, spec.skill_universe)))
                .collect::<Result<BTreeSet<_>>>()?;
            Project::new(format!("p{i:0width$}"), reqs)
        })
        .collect()
}

/// Path next to `base` with `suffix` appended to its file name.
pub fn sibling_path(base: &Path, suffix: &str) -> PathBuf {
    let mut name = base.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    base.with_file_name(name)
}
