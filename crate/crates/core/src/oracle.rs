//! Reference solvers: Held-Karp dynamic programming, permutation brute force
//! and exhaustive Hamiltonian-cycle enumeration.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{Weight, WeightedDigraph};

pub const HELD_KARP_CAP: usize = 24;
pub const BRUTE_FORCE_CAP: usize = 10;
pub const ENUMERATION_CAP: usize = 10;

/// Outcome of an exact ATSP solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TourSolution {
    /// `tour` starts at vertex 0 and lists every vertex once.
    Optimal { weight: Weight, tour: Vec<usize> },
    Infeasible,
}

impl TourSolution {
    /// Builds an optimal solution, rotating the tour to start at vertex 0.
    pub fn optimal(weight: Weight, mut tour: Vec<usize>) -> Self {
        if let Some(pos) = tour.iter().position(|&v| v == 0) {
            tour.rotate_left(pos);
        }
        TourSolution::Optimal { weight, tour }
    }

    pub fn weight(&self) -> Option<Weight> {
        match self {
            TourSolution::Optimal { weight, .. } => Some(*weight),
            TourSolution::Infeasible => None,
        }
    }

    pub fn tour(&self) -> Option<&[usize]> {
        match self {
            TourSolution::Optimal { tour, .. } => Some(tour),
            TourSolution::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, TourSolution::Optimal { .. })
    }

    /// The better of two solutions; ties keep `self`.
    pub fn min(self, other: TourSolution) -> TourSolution {
        match (self.weight(), other.weight()) {
            (_, None) => self,
            (None, Some(_)) => other,
            (Some(a), Some(b)) => {
                if b < a {
                    other
                } else {
                    self
                }
            }
        }
    }
}

fn require_two_vertices(g: &WeightedDigraph) -> Result<()> {
    if g.vertex_count() < 2 {
        return Err(Error::PreconditionViolated(
            "a tour needs at least 2 vertices".into(),
        ));
    }
    Ok(())
}

pub fn held_karp(g: &WeightedDigraph) -> Result<TourSolution> {
    held_karp_with_cap(g, HELD_KARP_CAP)
}

/// Bellman / Held-Karp over subsets of `1..n`, anchored at vertex 0.
pub fn held_karp_with_cap(g: &WeightedDigraph, cap: usize) -> Result<TourSolution> {
    require_two_vertices(g)?;
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    const UNREACHED: Weight = Weight::MAX;
    let k = n - 1;
    let full = (1usize << k) - 1;
    let bit = |v: usize| 1usize << (v - 1);
    // dp[set * k + (j - 1)]: cheapest 0 -> ... -> j visiting exactly `set`
    let mut dp = vec![UNREACHED; (full + 1) * k];
    for &(j, w) in g.out_neighbors(0) {
        if w == UNREACHED {
            return Err(Error::WeightOverflow);
        }
        dp[bit(j) * k + j - 1] = w;
    }
    for set in 1..=full {
        for j in 1..n {
            if set & bit(j) == 0 {
                continue;
            }
            let here = dp[set * k + j - 1];
            if here == UNREACHED {
                continue;
            }
            for &(next, w) in g.out_neighbors(j) {
                if next == 0 || set & bit(next) != 0 {
                    continue;
                }
                let cand = here
                    .checked_add(w)
                    .filter(|&c| c != UNREACHED)
                    .ok_or(Error::WeightOverflow)?;
                let slot = &mut dp[(set | bit(next)) * k + next - 1];
                if cand < *slot {
                    *slot = cand;
                }
            }
        }
    }
    let mut best: Option<(Weight, usize)> = None;
    for &(j, w) in g.in_neighbors(0) {
        let path = dp[full * k + j - 1];
        if path == UNREACHED {
            continue;
        }
        let total = path.checked_add(w).ok_or(Error::WeightOverflow)?;
        if best.is_none_or(|(b, _)| total < b) {
            best = Some((total, j));
        }
    }
    let Some((weight, last)) = best else {
        return Ok(TourSolution::Infeasible);
    };

    let mut tour = vec![last];
    let mut set = full;
    let mut cur = last;
    while set != bit(cur) {
        let value = dp[set * k + cur - 1];
        let rest = set & !bit(cur);
        let prev = g
            .in_neighbors(cur)
            .iter()
            .find(|&&(p, w)| {
                p != 0
                    && rest & bit(p) != 0
                    && dp[rest * k + p - 1] != UNREACHED
                    && dp[rest * k + p - 1].checked_add(w) == Some(value)
            })
            .map(|&(p, _)| p)
            .expect("table entry has a predecessor");
        tour.push(prev);
        set = rest;
        cur = prev;
    }
    tour.push(0);
    tour.reverse();
    Ok(TourSolution::optimal(weight, tour))
}

/// Tries every ordering of `1..n` after vertex 0.
pub fn brute_force(g: &WeightedDigraph) -> Result<TourSolution> {
    require_two_vertices(g)?;
    let n = g.vertex_count();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge { n, cap: BRUTE_FORCE_CAP });
    }
    let mut best = TourSolution::Infeasible;
    for rest in (1..n).permutations(n - 1) {
        let mut tour = Vec::with_capacity(n);
        tour.push(0);
        tour.extend(rest);
        if !g.is_hamiltonian_cycle(&tour) {
            continue;
        }
        let weight = g.tour_weight(&tour)?;
        best = best.min(TourSolution::Optimal { weight, tour });
    }
    Ok(best)
}

pub fn enumerate_hamiltonian_cycles(g: &WeightedDigraph) -> Result<Vec<Vec<usize>>> {
    enumerate_hamiltonian_cycles_with_cap(g, ENUMERATION_CAP)
}

/// All directed Hamiltonian cycles, each listed once starting at vertex 0.
pub fn enumerate_hamiltonian_cycles_with_cap(
    g: &WeightedDigraph,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let mut cycles = Vec::new();
    if n < 2 {
        return Ok(cycles);
    }
    let mut path = vec![0];
    let mut visited = vec![false; n];
    visited[0] = true;
    extend_cycles(g, &mut path, &mut visited, &mut cycles);
    Ok(cycles)
}

fn extend_cycles(
    g: &WeightedDigraph,
    path: &mut Vec<usize>,
    visited: &mut [bool],
    cycles: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().expect("path starts at 0");
    if path.len() == g.vertex_count() {
        if g.has_arc(last, 0) {
            cycles.push(path.clone());
        }
        return;
    }
    for &(next, _) in g.out_neighbors(last) {
        if !visited[next] {
            visited[next] = true;
            path.push(next);
            extend_cycles(g, path, visited, cycles);
            path.pop();
            visited[next] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        for solve in [held_karp, brute_force] {
            assert_eq!(solve(&c3()).unwrap(), TourSolution::optimal(6, vec![0, 1, 2]));
            assert_eq!(solve(&b3()).unwrap().weight(), Some(3));
            let one_way = WeightedDigraph::unit(2, [(0, 1)]).unwrap();
            assert_eq!(solve(&one_way).unwrap(), TourSolution::Infeasible);
        }
    }

    #[test]
    fn caps() {
        let g = complete(11);
        assert_eq!(brute_force(&g), Err(Error::TooLarge { n: 11, cap: 10 }));
        assert!(enumerate_hamiltonian_cycles(&g).is_err());
        assert_eq!(
            held_karp_with_cap(&complete(5), 4),
            Err(Error::TooLarge { n: 5, cap: 4 })
        );
    }

    #[test]
    fn cycle_counts() {
        assert_eq!(enumerate_hamiltonian_cycles(&c3()).unwrap().len(), 1);
        assert_eq!(enumerate_hamiltonian_cycles(&b3()).unwrap().len(), 2);
        assert_eq!(enumerate_hamiltonian_cycles(&complete(4)).unwrap().len(), 6);
        assert_eq!(enumerate_hamiltonian_cycles(&complete(5)).unwrap().len(), 24);
    }

    #[test]
    fn overflow_is_reported() {
        let g = WeightedDigraph::new(2, [(0, 1, Weight::MAX), (1, 0, 1)]).unwrap();
        assert_eq!(held_karp(&g), Err(Error::WeightOverflow));
        assert_eq!(brute_force(&g), Err(Error::WeightOverflow));
    }

    fn arb_digraph() -> impl Strategy<Value = WeightedDigraph> {
        (2usize..8).prop_flat_map(|n| {
            proptest::collection::btree_map((0..n, 0..n), -20i64..40, 0..(n * n)).prop_map(
                move |arcs| {
                    let arcs = arcs.into_iter().filter(|((u, v), _)| u != v);
                    WeightedDigraph::new(n, arcs.map(|((u, v), w)| (u, v, w))).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn held_karp_matches_brute_force(g in arb_digraph()) {
            let dp = held_karp(&g).unwrap();
            let bf = brute_force(&g).unwrap();
            prop_assert_eq!(dp.weight(), bf.weight());
            if let Some(tour) = dp.tour() {
                prop_assert_eq!(g.tour_weight(tour).unwrap(), dp.weight().unwrap());
                prop_assert_eq!(tour[0], 0);
            }
            let cycles = enumerate_hamiltonian_cycles(&g).unwrap();
            prop_assert_eq!(cycles.is_empty(), !dp.is_feasible());
            let best = cycles.iter().map(|c| g.tour_weight(c).unwrap()).min();
            prop_assert_eq!(best, dp.weight());
        }
    }
}
