//! Meet-in-the-middle ATSP solver over light paths.
//!
//! Every Hamiltonian cycle on an even number of vertices splits into two
//! halves of `n/2` arcs whose inner vertices have total outdegree at most
//! `m/2`. The solver enumerates such halves from every start vertex and
//! joins complementary pairs through a dictionary keyed by vertex sets.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Weight, WeightedDigraph};
use crate::oracle::TourSolution;

/// A simple path `v0 .. vl` with its weight and the summed outdegree of
/// `v1 .. v(l-1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LightPath {
    pub vertices: Vec<usize>,
    pub weight: Weight,
    pub inner_outdeg_sum: usize,
}

impl LightPath {
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() <= 1
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("paths are non-empty")
    }

    pub fn is_light(&self, length: usize, budget: usize) -> bool {
        self.len() == length && self.inner_outdeg_sum <= budget
    }
}

/// All `(length, budget)`-light simple paths leaving `origin`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFamily {
    pub origin: usize,
    pub length: usize,
    pub budget: usize,
    pub paths: Vec<LightPath>,
}

/// Depth-first path generation that only extends a prefix while padding
/// it with outdegree-1 vertices could still stay within budget.
pub fn generate_paths(
    g: &WeightedDigraph,
    origin: usize,
    length: usize,
    budget: usize,
) -> Result<PathFamily> {
    if length == 0 || budget == 0 {
        return Err(Error::PreconditionViolated(
            "path length and budget must be positive".into(),
        ));
    }
    if origin >= g.vertex_count() {
        return Err(Error::VertexOutOfRange { vertex: origin, n: g.vertex_count() });
    }
    let mut walker = PathWalker {
        g,
        on_path: vec![false; g.vertex_count()],
        path: vec![origin],
        paths: Vec::new(),
    };
    walker.on_path[origin] = true;
    walker.extend(length, budget, 0, 0)?;
    Ok(PathFamily { origin, length, budget, paths: walker.paths })
}

struct PathWalker<'g> {
    g: &'g WeightedDigraph,
    on_path: Vec<bool>,
    path: Vec<usize>,
    paths: Vec<LightPath>,
}

impl PathWalker<'_> {
    fn extend(&mut self, left: usize, budget: usize, weight: Weight, inner: usize) -> Result<()> {
        let last = *self.path.last().expect("path holds the origin");
        for &(next, w) in self.g.out_neighbors(last) {
            if self.on_path[next] {
                continue;
            }
            let weight = weight.checked_add(w).ok_or(Error::WeightOverflow)?;
            let deg = self.g.outdeg(next);
            if left == 1 {
                let mut vertices = self.path.clone();
                vertices.push(next);
                self.paths.push(LightPath { vertices, weight, inner_outdeg_sum: inner });
            } else if deg + (left - 2) <= budget {
                self.on_path[next] = true;
                self.path.push(next);
                self.extend(left - 1, budget - deg, weight, inner + deg)?;
                self.path.pop();
                self.on_path[next] = false;
            }
        }
        Ok(())
    }
}

/// `floor(d)^(floor(d) + 1 - d) * (floor(d) + 1)^(d - floor(d))`.
pub fn tau(d: f64) -> Result<f64> {
    if d.is_nan() || d < 1.0 {
        return Err(Error::Domain(d));
    }
    let lo = d.floor();
    Ok(lo.powf(lo + 1.0 - d) * (lo + 1.0).powf(d - lo))
}

/// Upper bound `n * tau(budget / (length - 1))^(length - 1)` on the size of
/// a light-path family; needs `length >= 2` and `budget >= length - 1`.
pub fn family_size_bound(n: usize, length: usize, budget: usize) -> Result<f64> {
    if length < 2 {
        return Err(Error::PreconditionViolated("bound needs length >= 2".into()));
    }
    let steps = (length - 1) as f64;
    Ok(n as f64 * tau(budget as f64 / steps)?.powf(steps))
}

/// Splits a Hamiltonian cycle on an even number of vertices into two
/// `(n/2, floor(m/2))`-light paths, the second continuing where the first
/// ends.
pub fn split_hamiltonian(g: &WeightedDigraph, tour: &[usize]) -> Result<(LightPath, LightPath)> {
    let n = g.vertex_count();
    if !g.is_hamiltonian_cycle(tour) {
        return Err(Error::PreconditionViolated("not a Hamiltonian cycle".into()));
    }
    if !n.is_multiple_of(2) {
        return Err(Error::PreconditionViolated("vertex count must be even".into()));
    }
    let k = n / 2;
    let deg: Vec<i64> = tour.iter().map(|&v| g.outdeg(v) as i64).collect();
    let window = |i: usize| -> i64 { (0..k).map(|t| deg[(i + t) % n]).sum() };
    let diff = |i: usize| window(i) - window(i + k);
    let j = (0..k)
        .find(|&j| diff(j) * diff(j + 1) <= 0)
        .expect("differences change sign within half a turn");
    let start = if diff(j) > 0 { j + k } else { j };

    let half = |from: usize| -> Result<LightPath> {
        let vertices: Vec<usize> = (0..=k).map(|t| tour[(from + t) % n]).collect();
        let weight = vertices.windows(2).try_fold(0 as Weight, |acc, w| {
            acc.checked_add(g.weight(w[0], w[1]).expect("tour arc"))
                .ok_or(Error::WeightOverflow)
        })?;
        let inner_outdeg_sum = vertices[1..k].iter().map(|&v| g.outdeg(v)).sum();
        Ok(LightPath { vertices, weight, inner_outdeg_sum })
    };
    Ok((half(start)?, half(start + k)?))
}

/// Canonical bitset of a vertex subset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<u64>);

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet(vec![0; n.div_ceil(64)])
    }

    pub fn from_vertices(n: usize, vertices: &[usize]) -> Self {
        let mut set = Self::new(n);
        for &v in vertices {
            set.insert(v);
        }
        set
    }

    pub fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    /// All of `0..n` not in `self`.
    pub fn complement(&self, n: usize) -> Self {
        let mut out = Self::new(n);
        for v in (0..n).filter(|&v| !self.contains(v)) {
            out.insert(v);
        }
        out
    }
}

/// First halves keyed by their vertex set, keeping the lightest per set.
#[derive(Clone, Debug, Default)]
pub struct HalfTourDictionary {
    entries: BTreeMap<VertexSet, (Weight, usize)>,
}

impl HalfTourDictionary {
    pub fn insert(&mut self, key: VertexSet, weight: Weight, index: usize) {
        self.entries
            .entry(key)
            .and_modify(|slot| {
                if weight < slot.0 {
                    *slot = (weight, index);
                }
            })
            .or_insert((weight, index));
    }

    pub fn get(&self, key: &VertexSet) -> Option<(Weight, usize)> {
        self.entries.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct MimOptions {
    /// Abort once a dictionary holds more entries than this.
    pub memory_cap: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MimStats {
    /// Vertex count after the odd-n split.
    pub vertices: usize,
    pub path_length: usize,
    pub budget: usize,
    /// Light paths generated over all start vertices.
    pub family_paths: usize,
    /// Largest single family.
    pub max_family: usize,
    /// Largest dictionary built for one endpoint pair.
    pub dict_entries: usize,
}

pub fn solve_mim(g: &WeightedDigraph) -> Result<TourSolution> {
    solve_mim_with(g, &MimOptions::default()).map(|(solution, _)| solution)
}

/// Splits vertex 0 into an in-copy (vertex 0) and an out-copy (vertex `n`)
/// joined by a zero-weight arc.
fn split_vertex_zero(g: &WeightedDigraph) -> Result<WeightedDigraph> {
    let n = g.vertex_count();
    let arcs = g
        .edges()
        .map(|(t, h, w)| if t == 0 { (n, h, w) } else { (t, h, w) })
        .chain(std::iter::once((0, n, 0)));
    WeightedDigraph::new(n + 1, arcs)
}

pub fn solve_mim_with(g: &WeightedDigraph, options: &MimOptions) -> Result<(TourSolution, MimStats)> {
    let original_n = g.vertex_count();
    if original_n < 3 {
        return Err(Error::PreconditionViolated("needs at least 3 vertices".into()));
    }
    let split;
    let work = if original_n % 2 == 1 {
        split = split_vertex_zero(g)?;
        &split
    } else {
        g
    };
    let n = work.vertex_count();
    let length = n / 2;
    let budget = work.edge_count() / 2;
    let mut stats = MimStats { vertices: n, path_length: length, budget, ..MimStats::default() };
    if budget == 0 {
        return Ok((TourSolution::Infeasible, stats));
    }

    // by_end[start][end] lists the paths of start's family ending at end
    let mut by_end: Vec<Vec<Vec<LightPath>>> = Vec::with_capacity(n);
    for origin in 0..n {
        let family = generate_paths(work, origin, length, budget)?;
        stats.family_paths += family.paths.len();
        stats.max_family = stats.max_family.max(family.paths.len());
        let mut buckets = vec![Vec::new(); n];
        for path in family.paths {
            buckets[path.last()].push(path);
        }
        by_end.push(buckets);
    }

    let mut best: Option<(Weight, Vec<usize>)> = None;
    for (u1, ends) in by_end.iter().enumerate() {
        for u2 in (0..n).filter(|&u| u != u1) {
            let firsts = &ends[u2];
            let seconds = &by_end[u2][u1];
            if firsts.is_empty() || seconds.is_empty() {
                continue;
            }
            let mut dict = HalfTourDictionary::default();
            for (i, p) in firsts.iter().enumerate() {
                dict.insert(VertexSet::from_vertices(n, &p.vertices), p.weight, i);
                if let Some(cap) = options.memory_cap {
                    if dict.len() > cap {
                        return Err(Error::MemoryBudgetExceeded { cap });
                    }
                }
            }
            stats.dict_entries = stats.dict_entries.max(dict.len());
            for p in seconds {
                let mut wanted = VertexSet::from_vertices(n, &p.vertices).complement(n);
                wanted.insert(u1);
                wanted.insert(u2);
                let Some((w1, i)) = dict.get(&wanted) else { continue };
                let total = w1.checked_add(p.weight).ok_or(Error::WeightOverflow)?;
                if best.as_ref().is_none_or(|(b, _)| total < *b) {
                    let mut tour = firsts[i].vertices.clone();
                    tour.extend_from_slice(&p.vertices[1..length]);
                    best = Some((total, tour));
                }
            }
        }
    }

    let solution = match best {
        None => TourSolution::Infeasible,
        Some((weight, tour)) => {
            let tour = tour.into_iter().filter(|&v| v < original_n).collect();
            TourSolution::optimal(weight, tour)
        }
    };
    Ok((solution, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::oracle::held_karp;
    use proptest::prelude::*;

    fn vertex_lists(family: &PathFamily) -> Vec<Vec<usize>> {
        let mut lists: Vec<_> = family.paths.iter().map(|p| p.vertices.clone()).collect();
        lists.sort();
        lists
    }

    #[test]
    fn family_examples() {
        let family = generate_paths(&square(), 0, 2, 4).unwrap();
        assert_eq!(vertex_lists(&family), vec![vec![0, 1, 2], vec![0, 3, 2]]);
        let family = generate_paths(&c3(), 0, 2, 1).unwrap();
        assert_eq!(vertex_lists(&family), vec![vec![0, 1, 2]]);
        let family = generate_paths(&complete(4), 2, 1, 1).unwrap();
        assert_eq!(vertex_lists(&family), vec![vec![2, 0], vec![2, 1], vec![2, 3]]);
        assert!(generate_paths(&c3(), 0, 0, 1).is_err());
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(3.0).unwrap(), 3.0);
        assert!((tau(2.5).unwrap() - 6f64.sqrt()).abs() < 1e-12);
        assert!((tau(3.734).unwrap() - 3.705_324_8).abs() < 1e-6);
        assert!(matches!(tau(0.9), Err(Error::Domain(_))));
        for step in 0..2000 {
            let d = 1.0 + step as f64 * 0.01;
            assert!(tau(d).unwrap() <= d + 1e-12);
        }
    }

    #[test]
    fn solver_examples() {
        assert_eq!(solve_mim(&square()).unwrap().weight(), Some(4));
        assert_eq!(solve_mim(&c3()).unwrap(), TourSolution::optimal(6, vec![0, 1, 2]));
        assert_eq!(solve_mim(&b3()).unwrap().weight(), Some(3));
        assert!(solve_mim(&WeightedDigraph::unit(2, [(0, 1), (1, 0)]).unwrap()).is_err());
    }

    #[test]
    fn memory_cap_aborts() {
        let opts = MimOptions { memory_cap: Some(0) };
        assert_eq!(
            solve_mim_with(&complete(6), &opts).unwrap_err(),
            Error::MemoryBudgetExceeded { cap: 0 }
        );
    }

    #[test]
    fn split_examples() {
        let (a, b) = split_hamiltonian(&square(), &[0, 1, 2, 3]).unwrap();
        assert_eq!((a.vertices.clone(), b.vertices.clone()), (vec![0, 1, 2], vec![2, 3, 0]));
        assert!(a.is_light(2, 4) && b.is_light(2, 4));
        assert!(split_hamiltonian(&c3(), &[0, 1, 2]).is_err());
        assert!(split_hamiltonian(&square(), &[0, 2, 1, 3]).is_err());
    }

    #[test]
    fn uneven_degrees_pick_a_balanced_split() {
        // 0->1->2->3->0 plus extra arcs out of 0 and 1
        let g = WeightedDigraph::unit(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3), (1, 0)])
            .unwrap();
        let (a, b) = split_hamiltonian(&g, &[0, 1, 2, 3]).unwrap();
        let budget = g.edge_count() / 2;
        assert!(a.is_light(2, budget) && b.is_light(2, budget));
        assert_eq!(a.last(), b.first());
        assert_eq!(b.last(), a.first());
    }

    fn arb_digraph() -> impl Strategy<Value = WeightedDigraph> {
        (3usize..9).prop_flat_map(|n| {
            proptest::collection::btree_map((0..n, 0..n), 0i64..30, 0..(n * n)).prop_map(
                move |arcs| {
                    let arcs = arcs.into_iter().filter(|((u, v), _)| u != v);
                    WeightedDigraph::new(n, arcs.map(|((u, v), w)| (u, v, w))).unwrap()
                },
            )
        })
    }

    fn all_simple_paths(g: &WeightedDigraph, path: &mut Vec<usize>, length: usize, out: &mut Vec<Vec<usize>>) {
        if path.len() == length + 1 {
            out.push(path.clone());
            return;
        }
        let last = *path.last().unwrap();
        for &(next, _) in g.out_neighbors(last) {
            if !path.contains(&next) {
                path.push(next);
                all_simple_paths(g, path, length, out);
                path.pop();
            }
        }
    }

    proptest! {
        #[test]
        fn families_are_exact(g in arb_digraph(), v_pick in 0usize..16, l_pick in 0usize..16, d_pick in 0usize..64) {
            let n = g.vertex_count();
            let v = v_pick % n;
            let length = 1 + l_pick % (n - 1);
            let budget = 1 + d_pick % (g.edge_count().max(1));
            let family = generate_paths(&g, v, length, budget).unwrap();
            let mut expected = Vec::new();
            all_simple_paths(&g, &mut vec![v], length, &mut expected);
            expected.retain(|p| p[1..length].iter().map(|&x| g.outdeg(x)).sum::<usize>() <= budget);
            expected.sort();
            prop_assert_eq!(vertex_lists(&family), expected);
            if length >= 2 && budget + 1 >= length {
                let bound = family_size_bound(n, length, budget).unwrap();
                prop_assert!(family.paths.len() as f64 <= bound * (1.0 + 1e-9));
            }
        }

        #[test]
        fn products_respect_tau(values in proptest::collection::vec(1u32..12, 1..=10)) {
            let k = values.len() as f64;
            let mean = values.iter().map(|&a| a as f64).sum::<f64>() / k;
            let product: f64 = values.iter().map(|&a| a as f64).product();
            prop_assert!(product <= tau(mean).unwrap().powf(k) * (1.0 + 1e-9));
        }

        #[test]
        fn solver_matches_held_karp(g in arb_digraph()) {
            let got = solve_mim(&g).unwrap();
            prop_assert_eq!(got.weight(), held_karp(&g).unwrap().weight());
            if let Some(tour) = got.tour() {
                prop_assert_eq!(g.tour_weight(tour).unwrap(), got.weight().unwrap());
            }
        }
    }
}
