//! `fairteam`: assemble one team, benchmark a project corpus, or synthesize
//! input files.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 no project feasible.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fairteam_core::assembly::{assemble, AssemblyParams, Formation, Method, SelectionConfig};
use fairteam_core::bench::{emit_report, run_benchmark, write_outcome_log, BenchConfig, ReportFormat};
use fairteam_core::data::{
    load_pool, load_projects, sibling_path, synthesize_pool, synthesize_projects, write_pool,
    write_projects, ProjectSynthesisSpec, SynthesisSpec,
};
use fairteam_core::{Candidate, Error, Objective, Project};

#[derive(Parser)]
#[command(name = "fairteam", version, about = "Fairness-aware multi-objective team assembly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble a team for one project and print it with its objectives.
    Assemble(AssembleArgs),
    /// Run methods over every project and report mean (std) per objective.
    Bench(BenchArgs),
    /// Generate a synthetic pool and project corpus.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Multi,
    Incremental,
    FairAlloc,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConfigArg {
    Random,
    TopCost,
    TopWorkload,
    TopExpertise,
    TopRepresentation,
    #[value(name = "top-costdiff")]
    TopCostDiff,
    TopSum,
}

impl From<ConfigArg> for SelectionConfig {
    fn from(c: ConfigArg) -> Self {
        match c {
            ConfigArg::Random => SelectionConfig::Random,
            ConfigArg::TopCost => SelectionConfig::TopCost,
            ConfigArg::TopWorkload => SelectionConfig::TopWorkload,
            ConfigArg::TopExpertise => SelectionConfig::TopExpertise,
            ConfigArg::TopRepresentation => SelectionConfig::TopRepresentation,
            ConfigArg::TopCostDiff => SelectionConfig::TopCostDifference,
            ConfigArg::TopSum => SelectionConfig::TopSum,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Table,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Table => ReportFormat::Table,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Candidate pool file (.csv or .json).
    #[arg(long)]
    pool: PathBuf,
    /// Project file (.csv or .json).
    #[arg(long)]
    projects: PathBuf,
    /// Reassign attributes so this fraction of the pool is class 0.
    #[arg(long)]
    attr_proportion: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Team size M for the multi-objective method.
    #[arg(long)]
    team_size: Option<usize>,
    /// Number of random teams N for the multi-objective method.
    #[arg(long)]
    num_teams: Option<usize>,
}

#[derive(Args)]
struct AssembleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Project id; defaults to the first project in the file.
    #[arg(long)]
    project: Option<String>,
    #[arg(long, value_enum, default_value = "multi")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "top-sum")]
    config: ConfigArg,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Methods to run (repeat or comma-separate); all by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    method: Vec<MethodArg>,
    /// Multi-objective configurations; all seven by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    config: Vec<ConfigArg>,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-project outcome log; defaults to `<out>.outcomes.csv`, or
    /// `outcomes.csv` when writing the report to stdout.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct SynthArgs {
    /// Directory receiving pool.csv and projects.csv.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1211)]
    pool_size: usize,
    /// Size of the skill universe.
    #[arg(long, default_value_t = 175)]
    skills: usize,
    #[arg(long, default_value_t = 1)]
    skills_min: usize,
    #[arg(long, default_value_t = 8)]
    skills_max: usize,
    #[arg(long, default_value_t = 1.0)]
    cost_lo: f64,
    #[arg(long, default_value_t = 100.0)]
    cost_hi: f64,
    #[arg(long, default_value_t = 0.5)]
    attr_proportion: f64,
    /// Number of projects.
    #[arg(long = "num-projects", default_value_t = 600)]
    projects: usize,
    #[arg(long, default_value_t = 2)]
    req_min: usize,
    #[arg(long, default_value_t = 6)]
    req_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Usage(anyhow::Error),
    Data(anyhow::Error),
    Infeasible(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::UnknownToken { .. } | Error::UnsupportedFormat(_) => {
                Failure::Usage(e.into())
            }
            _ => Failure::Data(e.into()),
        }
    }
}

fn data_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Data(e.into())
}

fn load_inputs(input: &InputArgs) -> Result<(Vec<Candidate>, Vec<Project>), Failure> {
    let pool = load_pool(&input.pool, input.attr_proportion, input.seed)?;
    let projects = load_projects(&input.projects)?;
    Ok((pool, projects))
}

fn sampling_params(input: &InputArgs) -> Option<AssemblyParams> {
    Some(AssemblyParams {
        team_size: input.team_size?,
        num_random_teams: input.num_teams?,
        seed: input.seed,
        selection: SelectionConfig::TopSum,
    })
}

fn to_method(m: MethodArg, config: SelectionConfig) -> Method {
    match m {
        MethodArg::Multi => Method::MultiObjective(config),
        MethodArg::Incremental => Method::Incremental,
        MethodArg::FairAlloc => Method::FairAllocation,
    }
}

fn run_assemble(args: AssembleArgs) -> Result<(), Failure> {
    let (pool, projects) = load_inputs(&args.input)?;
    let project = match &args.project {
        Some(id) => projects
            .iter()
            .find(|p| p.id() == id)
            .ok_or_else(|| Failure::Usage(anyhow!("project {id:?} not found")))?,
        None => &projects[0],
    };
    let method = to_method(args.method, args.config.into());
    let params = sampling_params(&args.input);
    let outcome = assemble(&pool, project, method, params.as_ref())?;

    let mut out = io::stdout().lock();
    let (team, objectives) = match &outcome.formation {
        Formation::Formed { team, objectives } => (team, objectives),
        Formation::Failed(f) => {
            return Err(Failure::Infeasible(format!(
                "{method} could not form a team for project {}: {}",
                project.id(),
                f.token()
            )))
        }
    };
    let members: Vec<String> = team
        .members()
        .iter()
        .map(|m| format!("{}({})", m.id(), m.attribute()))
        .collect();
    match args.format {
        FormatArg::Table => {
            writeln!(out, "project   {}", project.id()).map_err(data_err)?;
            writeln!(out, "method    {}", method.label()).map_err(data_err)?;
            writeln!(out, "team      {}", members.join(" ")).map_err(data_err)?;
            for o in Objective::ALL {
                writeln!(out, "{:<15} {:.6}", o.label(), objectives.get(o)).map_err(data_err)?;
            }
            let d = outcome.diagnostics;
            writeln!(
                out,
                "candidates {} -> {} filtered",
                d.pool_size, d.filtered_candidates
            )
            .map_err(data_err)?;
            if let Some(r) = d.rounds {
                writeln!(
                    out,
                    "pareto candidates {}, sampled teams {}, full coverage {}, pareto teams {}{}",
                    r.pareto_candidates,
                    r.teams_sampled,
                    r.full_coverage_teams,
                    r.pareto_teams,
                    if r.sampling_fallback { " (fallback)" } else { "" }
                )
                .map_err(data_err)?;
            }
        }
        FormatArg::Csv => {
            writeln!(out, "project,method,config,members,cost,workload,expertise,representation,cost_difference")
                .map_err(data_err)?;
            let v = objectives.to_array();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                project.id(),
                method.method_token(),
                method.config().map_or("", SelectionConfig::token),
                team.ids().map(|i| i.as_str()).collect::<Vec<_>>().join(";"),
                v[0],
                v[1],
                v[2],
                v[3],
                v[4]
            )
            .map_err(data_err)?;
        }
    }
    Ok(())
}

fn run_bench(args: BenchArgs) -> Result<(), Failure> {
    let (pool, projects) = load_inputs(&args.input)?;
    let method_args = if args.method.is_empty() {
        vec![MethodArg::Incremental, MethodArg::FairAlloc, MethodArg::Multi]
    } else {
        args.method.clone()
    };
    let configs: Vec<SelectionConfig> = if args.config.is_empty() {
        SelectionConfig::ALL.to_vec()
    } else {
        args.config.iter().map(|&c| c.into()).collect()
    };
    let mut methods = Vec::new();
    for m in method_args {
        match m {
            MethodArg::Multi => methods.extend(configs.iter().map(|&c| Method::MultiObjective(c))),
            other => methods.push(to_method(other, SelectionConfig::TopSum)),
        }
    }
    methods.dedup();

    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let config = BenchConfig {
        methods,
        team_size: args.input.team_size,
        num_random_teams: args.input.num_teams,
        seed: args.input.seed,
        jobs,
    };
    let run = run_benchmark(&pool, &projects, &config)?;
    let text = emit_report(&run.report, args.format.into())?;

    let log_path = match (&args.log, &args.out) {
        (Some(log), _) => log.clone(),
        (None, Some(out)) => sibling_path(out, ".outcomes.csv"),
        (None, None) => PathBuf::from("outcomes.csv"),
    };
    write_file(&log_path, |w| write_outcome_log(w, &run.outcomes).map_err(Into::into))?;
    match &args.out {
        Some(path) => fs::write(path, &text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Data)?,
        None => io::stdout().write_all(text.as_bytes()).map_err(data_err)?,
    }

    if !run.report.any_formed() {
        return Err(Failure::Infeasible("no project was feasible for any method".into()));
    }
    Ok(())
}

fn write_file(path: &Path, f: impl FnOnce(&mut io::BufWriter<fs::File>) -> anyhow::Result<()>) -> Result<(), Failure> {
    let file = fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))
        .map_err(Failure::Data)?;
    let mut w = io::BufWriter::new(file);
    f(&mut w).map_err(Failure::Data)?;
    w.flush().map_err(data_err)
}

fn run_synth(args: SynthArgs) -> Result<(), Failure> {
    let pool = synthesize_pool(&SynthesisSpec {
        pool_size: args.pool_size,
        skill_universe: args.skills,
        skills_per_candidate: (args.skills_min, args.skills_max),
        cost_range: (args.cost_lo, args.cost_hi),
        attribute_proportion: args.attr_proportion,
        seed: args.seed,
    })?;
    let projects = synthesize_projects(&ProjectSynthesisSpec {
        count: args.projects,
        skill_universe: args.skills,
        requirements: (args.req_min, args.req_max),
        seed: args.seed.wrapping_add(1),
    })?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))
        .map_err(Failure::Data)?;
    write_pool(args.out.join("pool.csv"), &pool)?;
    write_projects(args.out.join("projects.csv"), &projects)?;
    eprintln!(
        "wrote {} candidates and {} projects to {}",
        pool.len(),
        projects.len(),
        args.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Assemble(a) => run_assemble(a),
        Command::Bench(b) => run_bench(b),
        Command::Synth(s) => run_synth(s),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("usage error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("data error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}
