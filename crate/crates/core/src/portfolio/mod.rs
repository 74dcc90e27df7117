//! Solver selection by average outdegree, the runtime-base crossover
//! calculator, a uniform runner producing reports, and the bench harness.

mod bench;
mod run;

use std::fmt;
use std::str::FromStr;

pub use bench::{generate_instance, run_bench, BenchAlgo, BenchConfig, BenchRow, InstanceClass, BENCH_HEADER};
pub use run::{run_solver, Report, RunOptions, SolverChoice, Task};

use crate::branching::Constants;
use crate::cycle_cover::mu;
use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::mim::tau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    AtspPolyspace,
    AtspExpspace,
    HamPolyspace,
    HamExpspace,
}

impl Mode {
    pub const ALL: [Mode; 4] = [
        Mode::AtspPolyspace,
        Mode::AtspExpspace,
        Mode::HamPolyspace,
        Mode::HamExpspace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::AtspPolyspace => "atsp-polyspace",
            Mode::AtspExpspace => "atsp-expspace",
            Mode::HamPolyspace => "ham-polyspace",
            Mode::HamExpspace => "ham-expspace",
        }
    }

    pub fn is_decision(self) -> bool {
        matches!(self, Mode::HamPolyspace | Mode::HamExpspace)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::PreconditionViolated(format!("unknown mode `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    BranchPlus,
    Enumcc,
    Mim,
    Algebraic,
    HeldKarpFallback,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::BranchPlus => "branch+",
            Algorithm::Enumcc => "enumcc",
            Algorithm::Mim => "mim",
            Algorithm::Algebraic => "algebraic",
            Algorithm::HeldKarpFallback => "held-karp-fallback",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A step function of the average outdegree `d`: `low` below `lower`,
/// `middle` on `[lower, upper]`, `high` above `upper`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PortfolioPolicy {
    pub mode: Mode,
    pub lower: f64,
    pub upper: f64,
    pub low: Algorithm,
    pub middle: Algorithm,
    pub high: Algorithm,
}

impl PortfolioPolicy {
    pub fn for_mode(mode: Mode) -> Self {
        use Algorithm::*;
        let (lower, upper, middle, high) = match mode {
            Mode::AtspPolyspace => (2.746, 8.627, Enumcc, HeldKarpFallback),
            Mode::AtspExpspace => (2.398, 3.999, Mim, HeldKarpFallback),
            Mode::HamPolyspace => (2.746, 3.203, Enumcc, Algebraic),
            Mode::HamExpspace => (2.398, 3.734, Mim, Algebraic),
        };
        PortfolioPolicy { mode, lower, upper, low: BranchPlus, middle, high }
    }

    pub fn select(&self, d: f64) -> Algorithm {
        if d < self.lower {
            self.low
        } else if d <= self.upper {
            self.middle
        } else {
            self.high
        }
    }

    /// `(breakpoint, algorithm from there on)` pairs.
    pub fn thresholds(&self) -> Vec<(f64, Algorithm)> {
        vec![(self.lower, self.middle), (self.upper, self.high)]
    }
}

pub fn average_outdegree(g: &WeightedDigraph) -> f64 {
    g.edge_count() as f64 / g.vertex_count() as f64
}

pub fn select_algorithm(g: &WeightedDigraph, mode: Mode) -> Algorithm {
    PortfolioPolicy::for_mode(mode).select(average_outdegree(g))
}

/// Per-vertex base `b` of an `O*(b^n)` running-time bound, as a function
/// of the average outdegree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Curve {
    BranchPlus,
    Enumcc,
    Mim,
    Bjorklund,
    GurevichShelah,
    CyganPilipczuk,
}

impl Curve {
    pub fn name(self) -> &'static str {
        match self {
            Curve::BranchPlus => "branch+",
            Curve::Enumcc => "enumcc",
            Curve::Mim => "mim",
            Curve::Bjorklund => "bjorklund",
            Curve::GurevichShelah => "gurevich-shelah",
            Curve::CyganPilipczuk => "cygan-pilipczuk",
        }
    }

    pub fn base(self, d: f64) -> f64 {
        match self {
            Curve::BranchPlus => (Constants::new().alpha * (d - 1.0)).exp2(),
            Curve::Enumcc => mu(d).expect("curves are evaluated at d >= 1"),
            Curve::Mim => tau(d).expect("curves are evaluated at d >= 1").sqrt(),
            Curve::Bjorklund => 2.0 - (-d).exp2(),
            Curve::GurevichShelah => 4.0,
            Curve::CyganPilipczuk => (1.0 - cygan_pilipczuk_epsilon(2.0 * d)).exp2(),
        }
    }
}

/// `1 / (2^(2d+1) * 20d * e^(e^(20d)))`; zero in double precision for
/// every `d >= 1`.
pub fn cygan_pilipczuk_epsilon(d: f64) -> f64 {
    let tower = (20.0 * d).exp().exp();
    1.0 / ((2.0 * d + 1.0).exp2() * 20.0 * d * tower)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossover {
    pub faster_below: Curve,
    pub faster_above: Curve,
    pub at: f64,
    pub configured: f64,
}

/// Largest `d` in the bracket where `faster_below` still wins, found by
/// bisection on the sign of the base difference.
fn bisect(faster_below: Curve, faster_above: Curve, mut lo: f64, mut hi: f64) -> f64 {
    let gap = |d: f64| faster_below.base(d) - faster_above.base(d);
    debug_assert!(gap(lo) < 0.0 && gap(hi) >= 0.0);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn compute_crossovers() -> Vec<Crossover> {
    use Curve::*;
    [
        (BranchPlus, Enumcc, 2.0, 4.0, 2.746),
        (Enumcc, GurevichShelah, 8.0, 9.0, 8.627),
        (BranchPlus, Mim, 2.0, 3.0, 2.398),
        (Mim, CyganPilipczuk, 3.0, 5.0, 3.999),
        (Enumcc, Bjorklund, 3.0, 4.0, 3.203),
        (Mim, Bjorklund, 3.0, 5.0, 3.734),
    ]
    .into_iter()
    .map(|(below, above, lo, hi, configured)| Crossover {
        faster_below: below,
        faster_above: above,
        at: bisect(below, above, lo, hi),
        configured,
    })
    .collect()
}
