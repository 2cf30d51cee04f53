//! Solver selection and dispatch.

use std::fmt;
use std::str::FromStr;

use rectpack::containers::{solve_for_layout, Layout};
use rectpack::knap2d::{
    brute_force_2dgk_with, solve_2dgk_cardinality_with, solve_2dgk_lc, CardinalityOptions, OracleLimits,
    DEFAULT_LAYOUT_BUDGET,
};
use rectpack::lpack::{lpack_exact, lpack_ptas};
use rectpack::nfdh::{ffdh_strip, nfdh_strip, StripPacking};
use rectpack::oracle::DEFAULT_NODES;
use rectpack::steinberg::{steinberg_pack, steinberg_strip, SteinbergProblem};
use rectpack::strip::{brute_force_strip_with, solve_strip_best, solve_strip_container, LayoutProbe, StripOptions};
use rectpack::{validate_packing, Eps, Error, Instance, Packing};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Solver {
    Nfdh,
    Ffdh,
    Steinberg,
    /// Strip portfolio.
    Best,
    /// Fixed layout from `--layout`.
    Layout,
    Lc,
    Cardinality,
    LpackExact,
    LpackPtas,
    /// Exhaustive search.
    Oracle,
}

impl Solver {
    pub const ALL: [Solver; 10] = [
        Solver::Nfdh,
        Solver::Ffdh,
        Solver::Steinberg,
        Solver::Best,
        Solver::Layout,
        Solver::Lc,
        Solver::Cardinality,
        Solver::LpackExact,
        Solver::LpackPtas,
        Solver::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Solver::Nfdh => "nfdh",
            Solver::Ffdh => "ffdh",
            Solver::Steinberg => "steinberg",
            Solver::Best => "best",
            Solver::Layout => "layout",
            Solver::Lc => "lc",
            Solver::Cardinality => "cardinality",
            Solver::LpackExact => "lpack-exact",
            Solver::LpackPtas => "lpack-ptas",
            Solver::Oracle => "oracle",
        }
    }

    pub fn default_for(instance: &Instance) -> Solver {
        match instance {
            Instance::Knapsack(_) => Solver::Lc,
            Instance::Strip(_) => Solver::Best,
            Instance::L(_) => Solver::LpackPtas,
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Solver::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Solver::ALL.iter().map(|v| v.name()).collect();
                format!("unknown solver {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Profit(u64),
    Height(u64),
}

impl Objective {
    pub fn value(self) -> u64 {
        match self {
            Objective::Profit(v) | Objective::Height(v) => v,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::Profit(_) => "profit",
            Objective::Height(_) => "height",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub eps: Eps,
    pub layout: Option<Layout>,
    /// Layout budget, probe budget or search nodes depending on the solver.
    pub budget: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            eps: Eps::new(1, 4),
            layout: None,
            budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved {
    pub packing: Packing,
    pub objective: Objective,
    pub guarantee: bool,
    pub budget_exhausted: bool,
}

fn mismatch(solver: Solver, instance: &Instance) -> CliError {
    let kind = match instance {
        Instance::Knapsack(_) => "knapsack",
        Instance::Strip(_) => "strip",
        Instance::L(_) => "lpack",
    };
    CliError::Usage(format!("solver {solver} does not apply to {kind} instances"))
}

fn strip(p: StripPacking) -> Solved {
    Solved {
        objective: Objective::Height(p.height),
        packing: p.packing,
        guarantee: true,
        budget_exhausted: false,
    }
}

fn profit(packing: Packing, instance: &Instance, guarantee: bool, budget_exhausted: bool) -> Solved {
    Solved {
        objective: Objective::Profit(packing.profit(&instance.items())),
        packing,
        guarantee,
        budget_exhausted,
    }
}

fn layout_of(options: &SolveOptions) -> Result<&Layout, CliError> {
    options
        .layout
        .as_ref()
        .ok_or_else(|| CliError::Usage("this solver needs --layout".into()))
}

/// Runs `solver` and checks the packing before returning it.
pub fn solve(instance: &Instance, solver: Solver, options: &SolveOptions) -> Result<Solved, CliError> {
    let eps = options.eps;
    let solved = match (instance, solver) {
        (Instance::Strip(s), Solver::Nfdh) => strip(nfdh_strip(&s.items, s.width)?),
        (Instance::Strip(s), Solver::Ffdh) => strip(ffdh_strip(&s.items, s.width)?),
        (Instance::Strip(s), Solver::Steinberg) => strip(steinberg_strip(&s.items, s.width)?),
        (Instance::Strip(s), Solver::Best) => {
            let opts = StripOptions {
                probe: options.budget.map(|budget| LayoutProbe {
                    budget,
                    eps,
                    ..Default::default()
                }),
                ..Default::default()
            };
            let r = solve_strip_best(s, &opts)?;
            Solved {
                budget_exhausted: r.probe_exhausted,
                ..strip(r.result)
            }
        }
        (Instance::Strip(s), Solver::Layout) => match solve_strip_container(s, layout_of(options)?, eps)? {
            Some(p) => strip(p),
            None => return Err(Error::Infeasible("the layout cannot hold every item".into()).into()),
        },
        (Instance::Strip(s), Solver::Oracle) => {
            strip(brute_force_strip_with(s, options.budget.unwrap_or(DEFAULT_NODES))?)
        }
        (Instance::Knapsack(k), Solver::Steinberg) => {
            let p = SteinbergProblem::new(k.side, k.side, k.items.clone())?;
            profit(steinberg_pack(&p)?.packing, instance, true, false)
        }
        (Instance::Knapsack(k), Solver::Layout) => {
            let s = solve_for_layout(k, layout_of(options)?, eps)?;
            profit(s.packing, instance, s.guarantee, false)
        }
        (Instance::Knapsack(k), Solver::Lc) => {
            let s = solve_2dgk_lc(k, eps, options.budget.unwrap_or(DEFAULT_LAYOUT_BUDGET))?;
            profit(s.packing, instance, s.guarantee, s.budget_exhausted)
        }
        (Instance::Knapsack(k), Solver::Cardinality) => {
            let opts = CardinalityOptions {
                layout_budget: options.budget.unwrap_or(DEFAULT_LAYOUT_BUDGET),
                ..Default::default()
            };
            let s = solve_2dgk_cardinality_with(k, eps, opts)?;
            profit(s.packing, instance, s.guarantee, s.budget_exhausted)
        }
        (Instance::Knapsack(k), Solver::Oracle) => {
            let limits = OracleLimits {
                nodes: options.budget.unwrap_or(DEFAULT_NODES),
                ..Default::default()
            };
            profit(brute_force_2dgk_with(k, limits)?.packing, instance, true, false)
        }
        (Instance::L(l), Solver::LpackExact | Solver::Oracle) => profit(lpack_exact(l)?.packing, instance, true, false),
        (Instance::L(l), Solver::LpackPtas) => profit(lpack_ptas(l, eps)?.packing, instance, true, false),
        _ => return Err(mismatch(solver, instance)),
    };
    let report = validate_packing(instance, &solved.packing)?;
    if !report.is_feasible() {
        return Err(CliError::Infeasible(format!("{:?}", report.violations)));
    }
    Ok(solved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rectpack::{Item, KnapsackInstance, StripInstance};

    #[test]
    fn names_round_trip() {
        for s in Solver::ALL {
            assert_eq!(s.name().parse::<Solver>().unwrap(), s);
        }
        assert!("magic".parse::<Solver>().is_err());
    }

    #[test]
    fn strip_and_knapsack_dispatch() {
        let items = vec![Item::new(0, 10, 1, 1), Item::new(1, 10, 1, 1)];
        let s: Instance = StripInstance::new(10, items.clone()).unwrap().into();
        let out = solve(&s, Solver::Best, &SolveOptions::default()).unwrap();
        assert_eq!(out.objective, Objective::Height(2));
        let k: Instance = KnapsackInstance::new(10, items).unwrap().into();
        let out = solve(&k, Solver::Lc, &SolveOptions::default()).unwrap();
        assert_eq!(out.objective, Objective::Profit(2));
        assert!(matches!(solve(&k, Solver::Nfdh, &SolveOptions::default()), Err(CliError::Usage(_))));
    }

    #[test]
    fn missing_layout_is_usage_error() {
        let k: Instance = KnapsackInstance::new(10, vec![Item::new(0, 1, 1, 1)]).unwrap().into();
        assert!(matches!(solve(&k, Solver::Layout, &SolveOptions::default()), Err(CliError::Usage(_))));
    }

    #[test]
    fn steinberg_box_refusal_exits_two() {
        let k: Instance = KnapsackInstance::new(10, vec![Item::new(0, 10, 10, 1)]).unwrap().into();
        let err = solve(&k, Solver::Steinberg, &SolveOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
