//! Cycle-cover enumeration and the solver built on it.
//!
//! A cycle cover is a successor function `succ` with `(v, succ[v])` an arc
//! for every `v` and `succ` a permutation; equivalently a perfect matching
//! between out-copies and in-copies of the vertices.

use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::oracle::TourSolution;

/// Lexicographic stream of all cycle covers of a digraph.
///
/// Before each tentative assignment the remaining vertices are checked for
/// a perfect matching into the unused heads, so no branch is a dead end
/// and the delay between items is polynomial.
pub struct CycleCovers<'a> {
    g: &'a WeightedDigraph,
    succ: Vec<Option<usize>>,
    head_used: Vec<bool>,
    /// Next candidate index into the out-list, per assigned level.
    cursor: Vec<usize>,
    done: bool,
}

pub fn enumerate_cycle_covers(g: &WeightedDigraph) -> CycleCovers<'_> {
    let n = g.vertex_count();
    let mut covers = CycleCovers {
        g,
        succ: vec![None; n],
        head_used: vec![false; n],
        cursor: vec![0],
        done: false,
    };
    covers.done = !covers.completable(0);
    covers
}

impl CycleCovers<'_> {
    /// True if vertices `from..n` can be matched into unused heads.
    fn completable(&self, from: usize) -> bool {
        let n = self.g.vertex_count();
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for row in from..n {
            let mut seen = vec![false; n];
            if !self.augment(row, &mut owner, &mut seen) {
                return false;
            }
        }
        true
    }

    fn augment(&self, row: usize, owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &(head, _) in self.g.out_neighbors(row) {
            if self.head_used[head] || seen[head] {
                continue;
            }
            seen[head] = true;
            let free = match owner[head] {
                None => true,
                Some(other) => self.augment(other, owner, seen),
            };
            if free {
                owner[head] = Some(row);
                return true;
            }
        }
        false
    }
}

impl Iterator for CycleCovers<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let n = self.g.vertex_count();
        while let Some(level) = self.cursor.len().checked_sub(1) {
            if let Some(prev) = self.succ[level].take() {
                self.head_used[prev] = false;
            }
            let outs = self.g.out_neighbors(level);
            let mut chosen = None;
            for (i, &(head, _)) in outs.iter().enumerate().skip(self.cursor[level]) {
                if self.head_used[head] {
                    continue;
                }
                self.head_used[head] = true;
                if self.completable(level + 1) {
                    chosen = Some((i, head));
                    break;
                }
                self.head_used[head] = false;
            }
            match chosen {
                Some((i, head)) => {
                    self.succ[level] = Some(head);
                    self.cursor[level] = i + 1;
                    if level + 1 == n {
                        return Some(self.succ.iter().map(|s| s.expect("assigned")).collect());
                    }
                    self.cursor.push(0);
                }
                None => {
                    self.cursor.pop();
                }
            }
        }
        self.done = true;
        None
    }
}

/// Tour order if `succ` is a single cycle through all vertices.
pub fn cover_as_tour(succ: &[usize]) -> Option<Vec<usize>> {
    let n = succ.len();
    let mut tour = Vec::with_capacity(n);
    let mut v = 0;
    for _ in 0..n {
        tour.push(v);
        v = succ[v];
        if v == 0 {
            break;
        }
    }
    (tour.len() == n && v == 0).then_some(tour)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumccStats {
    pub covers: u64,
    pub hamiltonian: u64,
}

pub fn solve_enumcc(g: &WeightedDigraph) -> Result<TourSolution> {
    solve_enumcc_with_stats(g).map(|(solution, _)| solution)
}

/// Minimum-weight Hamiltonian cover over the full cover stream.
pub fn solve_enumcc_with_stats(g: &WeightedDigraph) -> Result<(TourSolution, EnumccStats)> {
    if g.vertex_count() < 2 {
        return Err(Error::PreconditionViolated("a tour needs at least 2 vertices".into()));
    }
    let mut stats = EnumccStats::default();
    let mut best = TourSolution::Infeasible;
    for succ in enumerate_cycle_covers(g) {
        stats.covers += 1;
        let Some(tour) = cover_as_tour(&succ) else { continue };
        stats.hamiltonian += 1;
        let weight = g.tour_weight(&tour)?;
        best = best.min(TourSolution::optimal(weight, tour));
    }
    Ok((best, stats))
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `(k!)^(1/k)`, with `0` for `k = 0`.
pub fn factorial_root(k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        (ln_factorial(k) / k as f64).exp()
    }
}

/// Interpolated per-vertex base of the cycle-cover count bound at average
/// outdegree `d`.
pub fn mu(d: f64) -> Result<f64> {
    if d.is_nan() || d < 1.0 {
        return Err(Error::Domain(d));
    }
    let lo = d.floor();
    let hi = d.ceil();
    if lo == hi {
        return Ok(factorial_root(lo as usize));
    }
    let exponent = (lo + 1.0 - d) / lo * ln_factorial(lo as usize)
        + (d - lo) / hi * ln_factorial(hi as usize);
    Ok(exponent.exp())
}

/// Product of `(outdeg!)^(1/outdeg)` over all vertices: an upper bound on
/// the number of cycle covers.
pub fn bregman_bound(g: &WeightedDigraph) -> f64 {
    (0..g.vertex_count())
        .map(|v| factorial_root(g.outdeg(v)))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::oracle::held_karp;
    use proptest::prelude::*;

    fn ryser_permanent(g: &WeightedDigraph) -> u64 {
        let n = g.vertex_count();
        let mut total: i128 = 0;
        for cols in 1u32..(1 << n) {
            let mut prod: i128 = 1;
            for row in 0..n {
                let hits = g
                    .out_neighbors(row)
                    .iter()
                    .filter(|&&(h, _)| cols & (1 << h) != 0)
                    .count();
                prod *= hits as i128;
            }
            let sign = if (n - cols.count_ones() as usize).is_multiple_of(2) { 1 } else { -1 };
            total += sign * prod;
        }
        total as u64
    }

    #[test]
    fn cover_counts() {
        assert_eq!(enumerate_cycle_covers(&c3()).collect::<Vec<_>>(), vec![vec![1, 2, 0]]);
        assert_eq!(
            enumerate_cycle_covers(&b3()).collect::<Vec<_>>(),
            vec![vec![1, 2, 0], vec![2, 0, 1]]
        );
        assert_eq!(enumerate_cycle_covers(&complete(4)).count(), 9);
        let sink = WeightedDigraph::unit(3, [(0, 1), (1, 2), (2, 1)]).unwrap();
        assert_eq!(enumerate_cycle_covers(&sink).count(), 0);
    }

    #[test]
    fn solver_examples() {
        assert_eq!(solve_enumcc(&c3()).unwrap().weight(), Some(6));
        assert_eq!(solve_enumcc(&b3()).unwrap().weight(), Some(3));
        let (_, stats) = solve_enumcc_with_stats(&complete(4)).unwrap();
        assert_eq!(stats, EnumccStats { covers: 9, hamiltonian: 6 });
    }

    #[test]
    fn mu_values() {
        assert!((mu(2.0).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((mu(3.0).unwrap() - 6f64.cbrt()).abs() < 1e-12);
        let expected = 2f64.powf(0.25) * 6f64.powf(1.0 / 6.0);
        assert!((mu(2.5).unwrap() - expected).abs() < 1e-12);
        assert!((mu(2.5).unwrap() - 1.603_058_5).abs() < 1e-6);
        assert_eq!(mu(1.0).unwrap(), 1.0);
        assert!(matches!(mu(0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn mu_is_monotone_and_capped() {
        let mut prev = 0.0;
        for step in 0..=19_000 {
            let d = 1.0 + step as f64 * 1e-3;
            let value = mu(d).unwrap();
            assert!(value + 1e-12 >= prev, "mu drops at {d}");
            assert!(value <= factorial_root(d.ceil() as usize) + 1e-12);
            prev = value;
        }
    }

    #[test]
    fn factorial_roots_are_log_concave_in_pairs() {
        for d1 in 1..=20usize {
            for d2 in d1 + 1..=20 {
                let lhs = factorial_root(d1) * factorial_root(d2);
                let rhs = factorial_root(d1 + 1) * factorial_root(d2 - 1);
                assert!(lhs <= rhs * (1.0 + 1e-12), "fails at ({d1}, {d2})");
            }
        }
    }

    #[test]
    fn bregman_examples() {
        assert!((bregman_bound(&b3()) - 2f64.powf(1.5)).abs() < 1e-12);
        assert!((bregman_bound(&complete(4)) - 6f64.powf(4.0 / 3.0)).abs() < 1e-9);
        assert_eq!(bregman_bound(&c3()), 1.0);
    }

    fn arb_digraph() -> impl Strategy<Value = WeightedDigraph> {
        (2usize..8).prop_flat_map(|n| {
            proptest::collection::btree_map((0..n, 0..n), 0i64..30, 0..(n * n)).prop_map(
                move |arcs| {
                    let arcs = arcs.into_iter().filter(|((u, v), _)| u != v);
                    WeightedDigraph::new(n, arcs.map(|((u, v), w)| (u, v, w))).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn stream_matches_permanent(g in arb_digraph()) {
            let covers: Vec<Vec<usize>> = enumerate_cycle_covers(&g).collect();
            prop_assert_eq!(covers.len() as u64, ryser_permanent(&g));
            prop_assert!(covers.len() as f64 <= bregman_bound(&g) * (1.0 + 1e-9));
            prop_assert!(covers.windows(2).all(|w| w[0] < w[1]));
            for succ in &covers {
                let mut heads = succ.clone();
                heads.sort_unstable();
                prop_assert_eq!(heads, (0..g.vertex_count()).collect::<Vec<_>>());
                prop_assert!(succ.iter().enumerate().all(|(v, &h)| g.has_arc(v, h)));
            }
        }

        #[test]
        fn solver_matches_held_karp(g in arb_digraph()) {
            let got = solve_enumcc(&g).unwrap();
            prop_assert_eq!(got.weight(), held_karp(&g).unwrap().weight());
            if let (Some(tour), Some(w)) = (got.tour(), got.weight()) {
                prop_assert_eq!(g.tour_weight(tour).unwrap(), w);
            }
        }
    }
}
