use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use super::{select_algorithm, Algorithm, Mode};
use crate::algebraic::{decide_hamiltonicity, Decision};
use crate::branching::solve_branching;
use crate::cycle_cover::solve_enumcc;
use crate::error::{Error, Result};
use crate::graph::{Weight, WeightedDigraph};
use crate::mim::{solve_mim_with, MimOptions};
use crate::oracle::{brute_force, held_karp, TourSolution};

/// Which solver to run; `Auto` defers to the mode's policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverChoice {
    Auto,
    HeldKarp,
    Brute,
    Enumcc,
    Branch,
    Mim,
    Algebraic,
}

impl SolverChoice {
    pub const ALL: [SolverChoice; 7] = [
        SolverChoice::Auto,
        SolverChoice::HeldKarp,
        SolverChoice::Brute,
        SolverChoice::Enumcc,
        SolverChoice::Branch,
        SolverChoice::Mim,
        SolverChoice::Algebraic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverChoice::Auto => "auto",
            SolverChoice::HeldKarp => "held-karp",
            SolverChoice::Brute => "brute",
            SolverChoice::Enumcc => "enumcc",
            SolverChoice::Branch => "branch",
            SolverChoice::Mim => "mim",
            SolverChoice::Algebraic => "algebraic",
        }
    }
}

impl fmt::Display for SolverChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverChoice::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::PreconditionViolated(format!("unknown algorithm `{s}`")))
    }
}

/// Whether the caller wants an optimal tour or only a yes/no answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Optimize,
    Decide,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: u64,
    pub memory_cap: Option<usize>,
    pub trials: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 0, memory_cap: None, trials: 1 }
    }
}

/// Outcome of one solver run, serialized as the CLI's JSON report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    /// `optimal` / `infeasible` when optimizing, `yes` / `no` when deciding.
    pub status: String,
    pub weight: Option<Weight>,
    /// 1-based vertex ids.
    pub tour: Option<Vec<usize>>,
    pub algorithm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch_nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dict_entries: Option<usize>,
    pub elapsed_ms: f64,
}

impl Report {
    /// True for `optimal` and `yes`.
    pub fn is_positive(&self) -> bool {
        matches!(self.status.as_str(), "optimal" | "yes")
    }
}

fn status(task: Task, positive: bool) -> &'static str {
    match (task, positive) {
        (Task::Optimize, true) => "optimal",
        (Task::Optimize, false) => "infeasible",
        (Task::Decide, true) => "yes",
        (Task::Decide, false) => "no",
    }
}

pub fn run_solver(
    g: &WeightedDigraph,
    choice: SolverChoice,
    mode: Mode,
    task: Task,
    options: &RunOptions,
) -> Result<Report> {
    let (algorithm, label) = match choice {
        SolverChoice::Auto => {
            let picked = select_algorithm(g, mode);
            (picked, picked.name())
        }
        SolverChoice::HeldKarp => (Algorithm::HeldKarpFallback, "held-karp"),
        SolverChoice::Brute => (Algorithm::HeldKarpFallback, "brute"),
        SolverChoice::Enumcc => (Algorithm::Enumcc, "enumcc"),
        SolverChoice::Branch => (Algorithm::BranchPlus, "branch+"),
        SolverChoice::Mim => (Algorithm::Mim, "mim"),
        SolverChoice::Algebraic => (Algorithm::Algebraic, "algebraic"),
    };
    if algorithm == Algorithm::Algebraic && task == Task::Optimize {
        log::info!("the algebraic test answers yes/no only; no tour is reported");
    }
    if choice == SolverChoice::Auto && algorithm == Algorithm::Algebraic {
        log::info!("running the brute-force sieve; it is exponential in n at every density");
    }

    let start = Instant::now();
    let mut branch_nodes = None;
    let mut dict_entries = None;
    let solution = match (choice, algorithm) {
        (SolverChoice::Brute, _) => brute_force(g)?,
        (_, Algorithm::HeldKarpFallback) => held_karp(g)?,
        (_, Algorithm::Enumcc) => solve_enumcc(g)?,
        (_, Algorithm::BranchPlus) => {
            let (solution, stats) = solve_branching(g)?;
            branch_nodes = Some(stats.branch_nodes);
            solution
        }
        (_, Algorithm::Mim) => {
            let mim_options = MimOptions { memory_cap: options.memory_cap };
            let (solution, stats) = solve_mim_with(g, &mim_options)?;
            dict_entries = Some(stats.dict_entries);
            solution
        }
        (_, Algorithm::Algebraic) => {
            let decision = decide_hamiltonicity(g, options.trials, options.seed)?;
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            return Ok(Report {
                status: status(Task::Decide, decision == Decision::Yes).into(),
                weight: None,
                tour: None,
                algorithm: label.into(),
                branch_nodes: None,
                dict_entries: None,
                elapsed_ms,
            });
        }
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let (weight, tour) = match &solution {
        TourSolution::Optimal { weight, tour } => {
            (Some(*weight), Some(tour.iter().map(|v| v + 1).collect()))
        }
        TourSolution::Infeasible => (None, None),
    };
    Ok(Report {
        status: status(task, solution.is_feasible()).into(),
        weight,
        tour,
        algorithm: label.into(),
        branch_nodes,
        dict_entries,
        elapsed_ms,
    })
}
