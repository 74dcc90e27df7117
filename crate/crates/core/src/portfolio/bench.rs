use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::branching::solve_branching;
use crate::cycle_cover::{bregman_bound, solve_enumcc_with_stats};
use crate::error::{Error, Result};
use crate::generators::{gen_22, gen_planted, gen_random, gen_totdeg3, DEFAULT_WEIGHTS};
use crate::graph::WeightedDigraph;
use crate::mim::{family_size_bound, solve_mim_with, MimOptions};
use crate::oracle::{held_karp, TourSolution};

pub const BENCH_HEADER: &str = "instance,algo,n,m,d,weight,metric,elapsed_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InstanceClass {
    Random,
    TwoTwo,
    TotDeg3,
    Planted,
}

impl InstanceClass {
    pub const ALL: [InstanceClass; 4] = [
        InstanceClass::Random,
        InstanceClass::TwoTwo,
        InstanceClass::TotDeg3,
        InstanceClass::Planted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceClass::Random => "random",
            InstanceClass::TwoTwo => "22",
            InstanceClass::TotDeg3 => "totdeg3",
            InstanceClass::Planted => "planted",
        }
    }
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstanceClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InstanceClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::PreconditionViolated(format!("unknown instance class `{s}`")))
    }
}

/// Draws an instance of the class with about `d * n` arcs. The (2,2) and
/// total-degree-3 classes fix their own density; the latter also rounds
/// `n` up to an even count of at least 4.
pub fn generate_instance(class: InstanceClass, n: usize, d: f64, seed: u64) -> Result<WeightedDigraph> {
    let target = ((d * n as f64).round() as usize).min(n * n.saturating_sub(1));
    match class {
        InstanceClass::Random => gen_random(n, target, DEFAULT_WEIGHTS, seed),
        InstanceClass::TwoTwo => gen_22(n, seed),
        InstanceClass::TotDeg3 => gen_totdeg3((n + n % 2).max(4), seed),
        InstanceClass::Planted => gen_planted(n, target.saturating_sub(n), seed),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchAlgo {
    HeldKarp,
    Branch,
    Enumcc,
    Mim,
}

impl BenchAlgo {
    pub const ALL: [BenchAlgo; 4] = [BenchAlgo::HeldKarp, BenchAlgo::Branch, BenchAlgo::Enumcc, BenchAlgo::Mim];

    pub fn name(self) -> &'static str {
        match self {
            BenchAlgo::HeldKarp => "held-karp",
            BenchAlgo::Branch => "branch+",
            BenchAlgo::Enumcc => "enumcc",
            BenchAlgo::Mim => "mim",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub classes: Vec<InstanceClass>,
    pub sizes: Vec<usize>,
    pub degrees: Vec<f64>,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<BenchAlgo>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            classes: InstanceClass::ALL.to_vec(),
            sizes: vec![6, 8, 10],
            degrees: vec![2.0, 3.0],
            seeds: vec![0, 1],
            algorithms: BenchAlgo::ALL.to_vec(),
        }
    }
}

/// One CSV row. `metric` is the measured-to-bound ratio of the solver's
/// search effort: branch nodes for branch+, cycle covers for enumcc and
/// the largest path family for mim. Held-Karp has none.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub d: f64,
    pub weight: Option<i64>,
    pub metric: Option<f64>,
    pub elapsed_ms: f64,
}

fn bench_one(g: &WeightedDigraph, algo: BenchAlgo) -> Result<(TourSolution, Option<f64>)> {
    Ok(match algo {
        BenchAlgo::HeldKarp => (held_karp(g)?, None),
        BenchAlgo::Branch => {
            let (solution, stats) = solve_branching(g)?;
            (solution, Some(stats.branch_nodes as f64 / stats.bound))
        }
        BenchAlgo::Enumcc => {
            let (solution, stats) = solve_enumcc_with_stats(g)?;
            (solution, Some(stats.covers as f64 / bregman_bound(g).max(1.0)))
        }
        BenchAlgo::Mim => {
            let (solution, stats) = solve_mim_with(g, &MimOptions::default())?;
            let ratio = if stats.path_length >= 2 && stats.budget + 1 >= stats.path_length {
                let bound = family_size_bound(stats.vertices, stats.path_length, stats.budget)?;
                Some(stats.max_family as f64 / bound)
            } else {
                None
            };
            (solution, ratio)
        }
    })
}

/// Runs every algorithm on every generated instance, in a fixed order,
/// and streams the rows as CSV to `out`.
pub fn run_bench<W: Write>(config: &BenchConfig, out: W) -> Result<Vec<BenchRow>> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let mut rows = Vec::new();
    let io = |e: csv::Error| Error::PreconditionViolated(format!("writing CSV: {e}"));
    writer
        .write_record(BENCH_HEADER.split(','))
        .map_err(io)?;
    for &class in &config.classes {
        for &n in &config.sizes {
            for &d in &config.degrees {
                for &seed in &config.seeds {
                    let g = generate_instance(class, n, d, seed)?;
                    let instance = format!("{class}-n{n}-d{d}-s{seed}");
                    for &algo in &config.algorithms {
                        let start = Instant::now();
                        let (solution, metric) = bench_one(&g, algo)?;
                        let row = BenchRow {
                            instance: instance.clone(),
                            algo: algo.name().into(),
                            n: g.vertex_count(),
                            m: g.edge_count(),
                            d: g.edge_count() as f64 / g.vertex_count() as f64,
                            weight: solution.weight(),
                            metric,
                            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                        };
                        writer.serialize(&row).map_err(io)?;
                        rows.push(row);
                    }
                }
            }
        }
    }
    writer
        .flush()
        .map_err(|e| Error::PreconditionViolated(format!("writing CSV: {e}")))?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_agrees_and_respects_bounds() {
        let config = BenchConfig {
            sizes: vec![5, 6],
            seeds: vec![3],
            ..BenchConfig::default()
        };
        let mut buf = Vec::new();
        let rows = run_bench(&config, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("instance,algo,n,m,d,weight,metric,elapsed_ms\n"));
        assert_eq!(text.lines().count(), rows.len() + 1);
        for chunk in rows.chunks(BenchAlgo::ALL.len()) {
            assert!(chunk.iter().all(|r| r.weight == chunk[0].weight), "{chunk:?}");
            let branch = chunk.iter().find(|r| r.algo == "branch+").unwrap();
            let n = branch.n as f64;
            assert!(branch.metric.unwrap() <= n * n);
            let cc = chunk.iter().find(|r| r.algo == "enumcc").unwrap();
            assert!(cc.metric.unwrap() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn class_names_round_trip() {
        for class in InstanceClass::ALL {
            assert_eq!(class.name().parse::<InstanceClass>().unwrap(), class);
        }
        assert_eq!(generate_instance(InstanceClass::TotDeg3, 5, 2.0, 0).unwrap().vertex_count(), 6);
    }
}
