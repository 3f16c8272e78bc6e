//! Corpus benchmark: run every method on every project, aggregate the five
//! objectives as mean (std) over formed teams, and render the result.
//!
//! Projects are processed in parallel, each with its own generator stream,
//! and results are reduced in project order, so the report does not depend
//! on the worker count.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::{assemble, AssemblyParams, Diagnostics, Failure, Formation, Method, SelectionConfig};
use crate::error::{Error, Result};
use crate::model::{Candidate, Objective, ObjectiveVector, Project};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    /// Required when any multi-objective method is requested.
    pub team_size: Option<usize>,
    pub num_random_teams: Option<usize>,
    pub seed: u64,
    pub jobs: usize,
}

impl BenchConfig {
    fn assembly_params(&self, pool_size: usize) -> Result<Option<AssemblyParams>> {
        if !self.methods.iter().any(|m| m.config().is_some()) {
            return Ok(None);
        }
        let (Some(team_size), Some(num_random_teams)) = (self.team_size, self.num_random_teams) else {
            return Err(Error::InvalidParams(
                "multi-objective methods need --team-size and --num-teams".into(),
            ));
        };
        let params = AssemblyParams {
            team_size,
            num_random_teams,
            seed: self.seed,
            selection: SelectionConfig::TopSum,
        };
        params.validate(pool_size)?;
        Ok(Some(params))
    }
}

/// One (project, method) result, detached from the pool.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    pub project: String,
    pub method: Method,
    pub members: Vec<String>,
    pub objectives: Option<ObjectiveVector>,
    pub failure: Option<Failure>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    /// Mean and population standard deviation; `None` for no samples.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(Self {
            mean,
            std: var.sqrt(),
        })
    }

    /// `mean (std)` with three decimals.
    pub fn cell(&self) -> String {
        format!("{:.3} ({:.3})", self.mean, self.std)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub method: Method,
    /// Per objective, in [`Objective::ALL`] order; `None` when no team formed.
    pub objectives: Option<[Summary; 5]>,
    pub formed: usize,
    pub projects: usize,
    pub candidate_reduction: Option<f64>,
    pub team_reduction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub rows: Vec<ReportRow>,
}

impl RunReport {
    pub fn row(&self, method: Method) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.method == method)
    }

    pub fn mean(&self, method: Method, objective: Objective) -> Option<f64> {
        let idx = Objective::ALL.iter().position(|&o| o == objective)?;
        Some(self.row(method)?.objectives?[idx].mean)
    }

    pub fn any_formed(&self) -> bool {
        self.rows.iter().any(|r| r.formed > 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRun {
    pub report: RunReport,
    pub outcomes: Vec<OutcomeRecord>,
}

pub fn run_benchmark(pool: &[Candidate], projects: &[Project], config: &BenchConfig) -> Result<BenchRun> {
    if config.methods.is_empty() {
        return Err(Error::InvalidParams("no methods selected".into()));
    }
    if projects.is_empty() {
        return Err(Error::InvalidParams("no projects to benchmark".into()));
    }
    let params = config.assembly_params(pool.len())?;
    let workers = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(e.to_string()))?;

    let per_project: Vec<Vec<OutcomeRecord>> = workers.install(|| {
        projects
            .par_iter()
            .map(|project| {
                config
                    .methods
                    .iter()
                    .map(|&method| {
                        let outcome = assemble(pool, project, method, params.as_ref())?;
                        let (members, objectives, failure) = match &outcome.formation {
                            Formation::Formed { team, objectives } => {
                                (team.ids().map(|i| i.to_string()).collect(), Some(*objectives), None)
                            }
                            Formation::Failed(f) => (Vec::new(), None, Some(*f)),
                        };
                        Ok(OutcomeRecord {
                            project: project.id().to_string(),
                            method,
                            members,
                            objectives,
                            failure,
                            diagnostics: outcome.diagnostics,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let outcomes: Vec<OutcomeRecord> = per_project.into_iter().flatten().collect();
    let report = aggregate(&outcomes, &config.methods, projects.len());
    Ok(BenchRun { report, outcomes })
}

/// Builds report rows from the per-project log, one row per method in the
/// given order.
pub fn aggregate(outcomes: &[OutcomeRecord], methods: &[Method], projects: usize) -> RunReport {
    let rows = methods
        .iter()
        .map(|&method| {
            let mine: Vec<&OutcomeRecord> = outcomes.iter().filter(|o| o.method == method).collect();
            let vectors: Vec<[f64; 5]> = mine
                .iter()
                .filter_map(|o| o.objectives.map(|v| v.to_array()))
                .collect();
            let objectives = (!vectors.is_empty()).then(|| {
                std::array::from_fn(|k| {
                    let column: Vec<f64> = vectors.iter().map(|v| v[k]).collect();
                    Summary::of(&column).expect("non-empty column")
                })
            });
            let mean_of = |f: fn(&Diagnostics) -> Option<f64>| {
                let values: Vec<f64> = mine.iter().filter_map(|o| f(&o.diagnostics)).collect();
                Summary::of(&values).map(|s| s.mean)
            };
            ReportRow {
                method,
                objectives,
                formed: vectors.len(),
                projects,
                candidate_reduction: mean_of(Diagnostics::candidate_reduction),
                team_reduction: mean_of(Diagnostics::team_reduction),
            }
        })
        .collect();
    RunReport { rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Table,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "table" => Ok(ReportFormat::Table),
            other => Err(Error::UnknownToken {
                what: "report format",
                token: other.to_string(),
            }),
        }
    }
}

const OBJECTIVE_HEADERS: [&str; 5] = ["cost", "workload", "expertise", "representation", "cost_difference"];

fn fraction(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"))
}

pub fn emit_report(report: &RunReport, format: ReportFormat) -> Result<String> {
    if report.rows.is_empty() {
        return Err(Error::EmptyReport);
    }
    match format {
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Table => Ok(emit_table(report)),
    }
}

fn emit_csv(report: &RunReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["method", "config"];
    header.extend(OBJECTIVE_HEADERS);
    header.extend(["teams", "projects", "candidate_reduction", "team_reduction"]);
    w.write_record(&header)?;
    for row in &report.rows {
        let mut record = vec![
            row.method.method_token().to_string(),
            row.method.config().map(|c| c.token().to_string()).unwrap_or_default(),
        ];
        for k in 0..5 {
            record.push(row.objectives.map_or_else(|| "-".into(), |s| s[k].cell()));
        }
        record.push(row.formed.to_string());
        record.push(row.projects.to_string());
        record.push(fraction(row.candidate_reduction));
        record.push(fraction(row.team_reduction));
        w.write_record(&record)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Aligned text table. The best (lowest) mean in each objective column is
/// marked with `*`.
fn emit_table(report: &RunReport) -> String {
    let best: Vec<Option<f64>> = (0..5)
        .map(|k| {
            report
                .rows
                .iter()
                .filter_map(|r| r.objectives.map(|s| s[k].mean))
                .min_by(f64::total_cmp)
        })
        .collect();

    let mut header = vec!["Algorithm".to_string()];
    header.extend(Objective::ALL.map(|o| o.label().to_string()));
    header.extend(["Teams", "Cand. red.", "Team red."].map(String::from));

    let mut lines = vec![header];
    for row in &report.rows {
        let mut cells = vec![row.method.label()];
        for k in 0..5 {
            cells.push(match row.objectives {
                Some(s) => {
                    let mark = if Some(s[k].mean) == best[k] { "*" } else { "" };
                    format!("{}{mark}", s[k].cell())
                }
                None => "-".into(),
            });
        }
        cells.push(format!("{}/{}", row.formed, row.projects));
        cells.push(fraction(row.candidate_reduction));
        cells.push(fraction(row.team_reduction));
        lines.push(cells);
    }

    let widths: Vec<usize> = (0..lines[0].len())
        .map(|c| lines.iter().map(|l| l[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, line) in lines.iter().enumerate() {
        let cells: Vec<String> = line
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (cell, &w))| if c == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        if i == 0 {
            let total = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            writeln!(out, "{}", "-".repeat(total)).unwrap();
        }
    }
    out
}

#[derive(Serialize)]
struct LogRecord<'a> {
    project: &'a str,
    method: &'static str,
    config: &'static str,
    formed: bool,
    failure: &'static str,
    members: String,
    cost: Option<f64>,
    workload: Option<f64>,
    expertise: Option<f64>,
    representation: Option<f64>,
    cost_difference: Option<f64>,
    pool_size: usize,
    filtered_candidates: usize,
    pareto_candidates: Option<usize>,
    teams_sampled: Option<usize>,
    full_coverage_teams: Option<usize>,
    pareto_teams: Option<usize>,
    sampling_fallback: Option<bool>,
    candidate_reduction: Option<f64>,
    team_reduction: Option<f64>,
}

/// Writes the raw per-project outcomes as CSV. Objective values are written
/// at full precision so the report can be recomputed from the log.
pub fn write_outcome_log<W: Write>(writer: W, outcomes: &[OutcomeRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for o in outcomes {
        let obj = |f: fn(&ObjectiveVector) -> f64| o.objectives.as_ref().map(f);
        let rounds = o.diagnostics.rounds;
        w.serialize(LogRecord {
            project: &o.project,
            method: o.method.method_token(),
            config: o.method.config().map_or("", SelectionConfig::token),
            formed: o.objectives.is_some(),
            failure: o.failure.map_or("", Failure::token),
            members: o.members.join(";"),
            cost: obj(|v| v.cost),
            workload: obj(|v| v.workload),
            expertise: obj(|v| v.expertise),
            representation: obj(|v| v.representation),
            cost_difference: obj(|v| v.cost_difference),
            pool_size: o.diagnostics.pool_size,
            filtered_candidates: o.diagnostics.filtered_candidates,
            pareto_candidates: rounds.map(|r| r.pareto_candidates),
            teams_sampled: rounds.map(|r| r.teams_sampled),
            full_coverage_teams: rounds.map(|r| r.full_coverage_teams),
            pareto_teams: rounds.map(|r| r.pareto_teams),
            sampling_fallback: rounds.map(|r| r.sampling_fallback),
            candidate_reduction: o.diagnostics.candidate_reduction(),
            team_reduction: o.diagnostics.team_reduction(),
        })?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;

    fn row(method: Method, cost: f64) -> ReportRow {
        let s = Summary { mean: cost, std: 0.0 };
        ReportRow {
            method,
            objectives: Some([s; 5]),
            formed: 1,
            projects: 1,
            candidate_reduction: None,
            team_reduction: None,
        }
    }

    #[test]
    fn cell_format() {
        let s = Summary {
            mean: 23.3114,
            std: 15.5482,
        };
        assert_eq!(s.cell(), "23.311 (15.548)");
        assert_eq!(Summary::of(&[0.25]).unwrap().cell(), "0.250 (0.000)");
    }

    #[test]
    fn population_std() {
        let s = Summary::of(&[1.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.std), (2.0, 1.0));
        assert!(Summary::of(&[]).is_none());
    }

    #[test]
    fn empty_report_and_unknown_format() {
        assert!(matches!(
            emit_report(&RunReport { rows: vec![] }, ReportFormat::Csv),
            Err(Error::EmptyReport)
        ));
        assert!("xml".parse::<ReportFormat>().is_err());
    }

    #[test]
    fn table_marks_best() {
        let report = RunReport {
            rows: vec![row(Method::Incremental, 2.0), row(Method::FairAllocation, 1.0)],
        };
        let text = emit_report(&report, ReportFormat::Table).unwrap();
        let fair = text.lines().find(|l| l.starts_with("Fair Allocation")).unwrap();
        assert!(fair.contains("1.000 (0.000)*"));
        let inc = text.lines().find(|l| l.starts_with("Incremental")).unwrap();
        assert!(!inc.contains('*'));
    }

    #[test]
    fn csv_report_shape() {
        let report = RunReport {
            rows: vec![row(Method::MultiObjective(SelectionConfig::TopCost), 0.5)],
        };
        let text = emit_report(&report, ReportFormat::Csv).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "method,config,cost,workload,expertise,representation,cost_difference,teams,projects,candidate_reduction,team_reduction"
        );
        assert_eq!(
            lines.next().unwrap(),
            "multi,top-cost,0.500 (0.000),0.500 (0.000),0.500 (0.000),0.500 (0.000),0.500 (0.000),1,1,-,-"
        );
    }

    #[test]
    fn single_project_has_zero_std() {
        let (mut pool, project) = worked_example();
        pool.push(candidate("x", crate::model::AttributeClass::ClassOne, &[("zz", 1.0)]));
        let config = BenchConfig {
            methods: vec![Method::Incremental],
            team_size: None,
            num_random_teams: None,
            seed: 1,
            jobs: 1,
        };
        let run = run_benchmark(&pool, &[project], &config).unwrap();
        let r = &run.report.rows[0];
        assert_eq!(r.formed, 1);
        assert!(r.objectives.unwrap().iter().all(|s| s.std == 0.0));
    }

    #[test]
    fn multi_needs_sampling_params() {
        let (pool, project) = worked_example();
        let config = BenchConfig {
            methods: vec![Method::MultiObjective(SelectionConfig::Random)],
            team_size: None,
            num_random_teams: Some(10),
            seed: 1,
            jobs: 1,
        };
        assert!(matches!(
            run_benchmark(&pool, &[project], &config),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn infeasible_projects_are_failures_not_errors() {
        let (pool, _) = worked_example();
        let config = BenchConfig {
            methods: Method::all(),
            team_size: Some(3),
            num_random_teams: Some(5),
            seed: 1,
            jobs: 2,
        };
        let p = project("nobody", &["underwater-welding"]);
        let mut pool = pool;
        pool.push(candidate("x", crate::model::AttributeClass::ClassOne, &[("zz", 1.0)]));
        let run = run_benchmark(&pool, &[p], &config).unwrap();
        assert!(!run.report.any_formed());
        assert!(run.outcomes.iter().all(|o| o.failure == Some(Failure::NoMatchingCandidate)));
    }
}
