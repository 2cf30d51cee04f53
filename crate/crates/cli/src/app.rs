//! Argument parsing and subcommand execution.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use rectpack::containers::parse_eps;
use rectpack::format::{instance_to_string, packing_to_string, parse_instance, parse_layout, parse_packing};
use rectpack::{validate_packing, Eps, Instance};

use crate::bench::{parse_bench_spec, run_bench};
use crate::error::CliError;
use crate::gen::{generate, GenKind, GenSpec, Mix};
use crate::render::{render_svg, RenderStyle};
use crate::solve::{solve, SolveOptions, Solver};

#[derive(Debug, Parser)]
#[command(name = "rectpack", version, about = "Rectangle packing solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance and write the packing as JSON.
    Solve(SolveArgs),
    /// Check a packing against an instance.
    Validate(ValidateArgs),
    /// Draw a packing as SVG.
    Render(RenderArgs),
    /// Run a benchmark spec and write CSV.
    Bench(BenchArgs),
    /// Write a random instance.
    Gen(GenArgs),
}

fn eps_arg(s: &str) -> Result<Eps, String> {
    parse_eps(s)
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Defaults to lc (knapsack), best (strip) or lpack-ptas (lpack).
    #[arg(long)]
    pub solver: Option<Solver>,
    #[arg(long, value_parser = eps_arg, default_value = "1/4")]
    pub eps: Eps,
    /// Allow 90° rotations (knapsack instances).
    #[arg(long)]
    pub rotations: bool,
    /// Container layout for the `layout` solver.
    #[arg(long)]
    pub layout: Option<PathBuf>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub packing: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub packing: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub scale: u64,
    #[arg(long)]
    pub no_labels: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Seed for generated instances that carry none.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for one SVG per successful row.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKindArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub side: u64,
    #[arg(long, value_enum, default_value = "uniform")]
    pub mix: MixArg,
    #[arg(long, default_value_t = 10)]
    pub max_profit: u64,
    #[arg(long)]
    pub rotations: bool,
    #[arg(long)]
    pub cardinality: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum GenKindArg {
    Knapsack,
    Strip,
    Lpack,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum MixArg {
    Uniform,
    Small,
    Long,
    Mixed,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::at(path, e))
}

/// Runs one command; the returned code is the process exit status.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve(a) => {
            let mut instance = load_instance(&a.instance)?;
            if a.rotations {
                match &mut instance {
                    Instance::Knapsack(k) => k.rotations = true,
                    _ => return Err(CliError::Usage("--rotations applies to knapsack instances".into())),
                }
            }
            let layout = match &a.layout {
                Some(p) => Some(parse_layout(&read(p)?).map_err(|e| CliError::at(p, e))?),
                None => None,
            };
            let solver = a.solver.unwrap_or_else(|| Solver::default_for(&instance));
            let options = SolveOptions {
                eps: a.eps,
                layout,
                budget: a.budget,
            };
            let solved = solve(&instance, solver, &options)?;
            emit(a.out.as_deref(), &packing_to_string(&solved.packing))?;
            if let Some(svg) = &a.svg {
                write(svg, &render_svg(&instance, &solved.packing, &RenderStyle::default())?)?;
            }
            eprintln!(
                "solver={} {}={} guarantee={} budget_exhausted={}",
                solver,
                solved.objective.name(),
                solved.objective.value(),
                solved.guarantee,
                solved.budget_exhausted
            );
            Ok(if solved.budget_exhausted { 3 } else { 0 })
        }
        Command::Validate(a) => {
            let instance = load_instance(&a.instance)?;
            let packing = parse_packing(&read(&a.packing)?).map_err(|e| CliError::at(&a.packing, e))?;
            let report = validate_packing(&instance, &packing)?;
            if report.is_feasible() {
                println!("feasible: {} items, profit {}", packing.len(), packing.profit(&instance.items()));
                Ok(0)
            } else {
                for v in &report.violations {
                    println!("{v:?}");
                }
                Ok(2)
            }
        }
        Command::Render(a) => {
            let instance = load_instance(&a.instance)?;
            let packing = parse_packing(&read(&a.packing)?).map_err(|e| CliError::at(&a.packing, e))?;
            let style = RenderStyle {
                scale: a.scale,
                labels: !a.no_labels,
            };
            emit(a.svg.as_deref(), &render_svg(&instance, &packing, &style)?)?;
            Ok(0)
        }
        Command::Bench(a) => {
            let spec = parse_bench_spec(&read(&a.spec)?).map_err(|e| CliError::at(&a.spec, e))?;
            let base = a.spec.parent().unwrap_or(Path::new("."));
            let report = run_bench(&spec, base, a.seed)?;
            emit(a.out.as_deref(), &report.csv)?;
            if let Some(dir) = &a.svg {
                std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.clone(),
                    source,
                })?;
                for (name, svg) in &report.svgs {
                    write(&dir.join(name), svg)?;
                }
            }
            Ok(0)
        }
        Command::Gen(a) => {
            let spec = GenSpec {
                kind: match a.kind {
                    GenKindArg::Knapsack => GenKind::Knapsack,
                    GenKindArg::Strip => GenKind::Strip,
                    GenKindArg::Lpack => GenKind::Lpack,
                },
                n: a.n,
                side: a.side,
                mix: match a.mix {
                    MixArg::Uniform => Mix::Uniform,
                    MixArg::Small => Mix::Small,
                    MixArg::Long => Mix::Long,
                    MixArg::Mixed => Mix::Mixed,
                },
                max_profit: a.max_profit,
                rotations: a.rotations,
                cardinality: a.cardinality,
                seed: None,
            };
            emit(a.out.as_deref(), &instance_to_string(&generate(&spec, a.seed)?))?;
            Ok(0)
        }
    }
}
