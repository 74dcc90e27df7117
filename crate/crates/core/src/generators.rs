//! Seeded instance generators. Every generator is a pure function of its
//! parameters and seed.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Weight, WeightedDigraph};
use crate::reductions::orient_22_to_totdeg3;

pub const DEFAULT_WEIGHTS: RangeInclusive<Weight> = 1..=100;

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` distinct arcs chosen uniformly, weights uniform in `weights`.
pub fn gen_random(
    n: usize,
    m: usize,
    weights: RangeInclusive<Weight>,
    seed: u64,
) -> Result<WeightedDigraph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let max = n * (n - 1);
    if m > max {
        return Err(Error::TooDense { m, max });
    }
    let mut rng = rng_for(seed);
    // slot s encodes tail s / (n - 1) and the (s % (n - 1))-th other vertex
    let mut slots = index::sample(&mut rng, max, m).into_vec();
    slots.sort_unstable();
    let arcs: Vec<_> = slots
        .into_iter()
        .map(|s| {
            let tail = s / (n - 1);
            let offset = s % (n - 1);
            let head = if offset >= tail { offset + 1 } else { offset };
            (tail, head, rng.random_range(weights.clone()))
        })
        .collect();
    WeightedDigraph::new(n, arcs)
}

/// Union of two random permutation digraphs with self-loops and repeated
/// arcs dropped, so every in- and outdegree is at most 2.
pub fn gen_22(n: usize, seed: u64) -> Result<WeightedDigraph> {
    gen_22_weighted(n, DEFAULT_WEIGHTS, seed)
}

pub fn gen_22_weighted(
    n: usize,
    weights: RangeInclusive<Weight>,
    seed: u64,
) -> Result<WeightedDigraph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = rng_for(seed);
    let mut arcs = BTreeSet::new();
    for _ in 0..2 {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        arcs.extend((0..n).filter(|&v| perm[v] != v).map(|v| (v, perm[v])));
    }
    let arcs: Vec<_> = arcs
        .into_iter()
        .map(|(u, v)| (u, v, rng.random_range(weights.clone())))
        .collect();
    WeightedDigraph::new(n, arcs)
}

/// A random Hamiltonian cycle plus `extra_m` further random arcs.
pub fn gen_planted(n: usize, extra_m: usize, seed: u64) -> Result<WeightedDigraph> {
    gen_planted_weighted(n, extra_m, DEFAULT_WEIGHTS, seed)
}

pub fn gen_planted_weighted(
    n: usize,
    extra_m: usize,
    weights: RangeInclusive<Weight>,
    seed: u64,
) -> Result<WeightedDigraph> {
    if n < 2 {
        return Err(Error::PreconditionViolated("a planted tour needs 2 vertices".into()));
    }
    let max = n * (n - 1) - n;
    if extra_m > max {
        return Err(Error::TooDense { m: extra_m, max });
    }
    let mut rng = rng_for(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let cycle: BTreeSet<(usize, usize)> =
        (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    let others: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && !cycle.contains(&(u, v)))
        .collect();
    let mut chosen = index::sample(&mut rng, others.len(), extra_m).into_vec();
    chosen.sort_unstable();
    let mut arcs: BTreeSet<(usize, usize)> = cycle;
    arcs.extend(chosen.into_iter().map(|i| others[i]));
    let arcs: Vec<_> = arcs
        .into_iter()
        .map(|(u, v)| (u, v, rng.random_range(weights.clone())))
        .collect();
    WeightedDigraph::new(n, arcs)
}

/// Total-degree-3 digraph on `n` vertices: the oriented split of a random
/// (2,2)-graph on `n / 2` vertices.
pub fn gen_totdeg3(n: usize, seed: u64) -> Result<WeightedDigraph> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::OddN(n));
    }
    orient_22_to_totdeg3(&gen_22(n / 2, seed)?)
}
