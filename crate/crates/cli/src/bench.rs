//! Benchmark harness: instances × solvers → CSV, rows in spec order.
//!
//! A run spec is JSON:
//!
//! ```json
//! {
//!   "instances": [{ "path": "a.json" }, { "name": "g", "gen": { "kind": "strip", "n": 8, "side": 10 } }],
//!   "solvers": ["nfdh", "best"],
//!   "eps": "1/4",
//!   "budget": 2000,
//!   "oracle": true,
//!   "deterministic": true
//! }
//! ```
//!
//! Paths are relative to the spec file. With `deterministic` (the default)
//! the time column holds `-` so reruns are byte-identical.

use std::path::Path;
use std::time::Instant;

use num_rational::Ratio;
use serde::Deserialize;

use rectpack::containers::parse_eps;
use rectpack::format::parse_instance;
use rectpack::knap2d::{brute_force_2dgk, OracleLimits};
use rectpack::lpack::lpack_exact;
use rectpack::strip::brute_force_strip;
use rectpack::{Error, Instance};

use crate::error::CliError;
use crate::gen::{generate, GenSpec};
use crate::render::{render_svg, RenderStyle};
use crate::solve::{solve, Objective, SolveOptions, Solver};

pub const CSV_VERSION: &str = "# rectpack-bench v1";

pub const COLUMNS: [&str; 13] = [
    "instance",
    "kind",
    "solver",
    "objective",
    "value",
    "lower",
    "upper",
    "oracle",
    "ratio",
    "time_ms",
    "guarantee",
    "budget_exhausted",
    "status",
];

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchInstance {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub gen: Option<GenSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    #[serde(default)]
    pub instances: Vec<BenchInstance>,
    #[serde(default)]
    pub solvers: Vec<String>,
    #[serde(default)]
    pub eps: Option<String>,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default = "yes")]
    pub deterministic: bool,
}

/// Parses and checks a run spec: solver names, `eps`, and that each instance
/// has exactly one of `path` and `gen`.
pub fn parse_bench_spec(text: &str) -> Result<BenchSpec, Error> {
    let spec: BenchSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    for s in &spec.solvers {
        s.parse::<Solver>().map_err(Error::Invalid)?;
    }
    if let Some(e) = &spec.eps {
        parse_eps(e).map_err(Error::Invalid)?;
    }
    for (i, inst) in spec.instances.iter().enumerate() {
        if inst.path.is_some() == inst.gen.is_some() {
            return Err(Error::Invalid(format!("instance {i} needs exactly one of path and gen")));
        }
    }
    Ok(spec)
}

/// CSV text plus one SVG per successful row, named `<row>-<instance>-<solver>.svg`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BenchReport {
    pub csv: String,
    pub svgs: Vec<(String, String)>,
}

fn label(inst: &BenchInstance, index: usize) -> String {
    inst.name
        .clone()
        .or_else(|| inst.path.clone())
        .unwrap_or_else(|| format!("gen{index}"))
}

fn load(inst: &BenchInstance, base: &Path, seed: u64) -> Result<Instance, CliError> {
    match (&inst.path, &inst.gen) {
        (Some(p), _) => {
            let path = base.join(p);
            let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            parse_instance(&text).map_err(|e| CliError::at(&path, e))
        }
        (None, Some(g)) => generate(g, seed),
        (None, None) => Err(CliError::Usage("instance without path or gen".into())),
    }
}

fn kind(instance: &Instance) -> &'static str {
    match instance {
        Instance::Knapsack(_) => "knapsack",
        Instance::Strip(_) => "strip",
        Instance::L(_) => "lpack",
    }
}

/// Exact optimum when an oracle applies at this size.
fn oracle_value(instance: &Instance) -> Option<u64> {
    match instance {
        Instance::Knapsack(k) => {
            let limits = OracleLimits::default();
            if k.items.len() > limits.max_items || k.side > limits.max_side {
                return None;
            }
            brute_force_2dgk(k).ok().map(|s| s.profit)
        }
        Instance::Strip(s) => {
            if s.items.len() > 6 || s.width > 12 {
                return None;
            }
            brute_force_strip(s).ok().map(|p| p.height)
        }
        Instance::L(l) => lpack_exact(l).ok().map(|s| s.profit),
    }
}

fn ratio(value: u64, oracle: Option<u64>) -> String {
    match oracle {
        Some(o) if o > 0 => Ratio::new(value, o).to_string(),
        _ => "-".into(),
    }
}

fn file_stem(text: &str) -> String {
    text.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

pub fn run_bench(spec: &BenchSpec, base: &Path, seed: u64) -> Result<BenchReport, CliError> {
    let solvers: Vec<Solver> = spec
        .solvers
        .iter()
        .map(|s| s.parse().map_err(CliError::Usage))
        .collect::<Result<_, _>>()?;
    let eps = match &spec.eps {
        Some(e) => parse_eps(e).map_err(CliError::Usage)?,
        None => SolveOptions::default().eps,
    };
    let options = SolveOptions {
        eps,
        layout: None,
        budget: spec.budget,
    };
    let mut report = BenchReport::default();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).map_err(csv_error)?;
    let mut row = 0usize;
    for (index, inst) in spec.instances.iter().enumerate() {
        let name = label(inst, index);
        let loaded = load(inst, base, seed);
        let oracle = match (&loaded, spec.oracle) {
            (Ok(i), true) => oracle_value(i),
            _ => None,
        };
        for &solver in &solvers {
            row += 1;
            let instance = match &loaded {
                Ok(i) => i,
                Err(e) => {
                    let mut rec = vec![name.clone(), "-".into(), solver.name().into()];
                    rec.extend(std::iter::repeat_n(String::new(), 9));
                    rec.push(format!("error: {e}"));
                    w.write_record(&rec).map_err(csv_error)?;
                    continue;
                }
            };
            let start = Instant::now();
            let result = solve(instance, solver, &options);
            let time = if spec.deterministic {
                "-".to_string()
            } else {
                format!("{:.3}", start.elapsed().as_secs_f64() * 1000.0)
            };
            let rec = match result {
                Ok(s) => {
                    let value = s.objective.value();
                    let (lower, upper) = match (s.objective, instance) {
                        (Objective::Height(h), Instance::Strip(st)) => (st.lower_bound(), h),
                        _ => (value, instance.items().iter().map(|i| i.profit).sum()),
                    };
                    if let Ok(svg) = render_svg(instance, &s.packing, &RenderStyle::default()) {
                        let file = format!("{row:04}-{}-{}.svg", file_stem(&name), solver.name());
                        report.svgs.push((file, svg));
                    }
                    vec![
                        name.clone(),
                        kind(instance).into(),
                        solver.name().into(),
                        s.objective.name().into(),
                        value.to_string(),
                        lower.to_string(),
                        upper.to_string(),
                        oracle.map(|o| o.to_string()).unwrap_or_default(),
                        ratio(value, oracle),
                        time,
                        s.guarantee.to_string(),
                        s.budget_exhausted.to_string(),
                        "ok".into(),
                    ]
                }
                Err(e) => {
                    let mut rec = vec![name.clone(), kind(instance).into(), solver.name().into()];
                    rec.extend(std::iter::repeat_n(String::new(), 4));
                    rec.push(oracle.map(|o| o.to_string()).unwrap_or_default());
                    rec.push("-".into());
                    rec.push(time);
                    rec.extend([String::new(), String::new()]);
                    rec.push(format!("error: {e}"));
                    rec
                }
            };
            w.write_record(&rec).map_err(csv_error)?;
        }
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?)
        .expect("csv output is utf-8");
    report.csv = format!("{CSV_VERSION}\n{body}");
    Ok(report)
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Usage(format!("csv: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_spec_is_header_only() {
        let spec = parse_bench_spec("{}").unwrap();
        let r = run_bench(&spec, Path::new("."), 0).unwrap();
        assert_eq!(r.csv, format!("{CSV_VERSION}\n{}\n", COLUMNS.join(",")));
        assert!(r.svgs.is_empty());
    }

    #[test]
    fn spec_errors() {
        assert!(matches!(parse_bench_spec("{\n  \"solvers\": 3}"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_bench_spec(r#"{"solvers":["nope"]}"#).is_err());
        assert!(parse_bench_spec(r#"{"instances":[{}]}"#).is_err());
        assert!(parse_bench_spec(r#"{"eps":"3/2"}"#).is_err());
    }

    #[test]
    fn ratio_is_exact() {
        assert_eq!(ratio(4, Some(6)), "2/3");
        assert_eq!(ratio(6, Some(6)), "1");
        assert_eq!(ratio(1, None), "-");
    }

    #[test]
    fn failures_do_not_stop_the_run() {
        let spec = parse_bench_spec(
            r#"{"instances":[{"path":"missing.json"},{"gen":{"kind":"strip","n":4,"side":8}}],"solvers":["nfdh"]}"#,
        )
        .unwrap();
        let r = run_bench(&spec, Path::new("/nonexistent"), 1).unwrap();
        let lines: Vec<&str> = r.csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[2].contains("error"));
        assert!(lines[3].ends_with(",ok"));
    }
}
