//! Instance transformations with witness lifting:
//! ATSP to bipartite forced-matching TSP, that to plain undirected TSP, and
//! the two directions between total-degree-3 digraphs and (2,2)-graphs.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{contract_forced_edge, Arc, Contraction, Weight, WeightedDigraph};

/// Undirected bipartite graph on out-copies `0..n` and in-copies `n..2n`
/// with a forced perfect matching `v^in - v^out` of weight 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfmInstance {
    n: usize,
    /// `(out-node, in-node, weight)`; the matching edges come first.
    edges: Vec<(usize, usize, Weight)>,
}

impl BfmInstance {
    pub fn original_vertex_count(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        2 * self.n
    }

    pub fn out_node(&self, v: usize) -> usize {
        v
    }

    pub fn in_node(&self, v: usize) -> usize {
        self.n + v
    }

    pub fn edges(&self) -> &[(usize, usize, Weight)] {
        &self.edges
    }

    /// The forced matching, as `(out-node, in-node)` pairs.
    pub fn matching(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges[..self.n].iter().map(|&(a, b, _)| (a, b))
    }

    /// Edges outside the forced matching.
    pub fn free_edges(&self) -> &[(usize, usize, Weight)] {
        &self.edges[self.n..]
    }

    pub fn is_forced(&self, a: usize, b: usize) -> bool {
        let (lo, hi) = (a.min(b), a.max(b));
        lo < self.n && hi == lo + self.n
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| a == node || b == node)
            .count()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<Weight> {
        let (lo, hi) = (a.min(b), a.max(b));
        self.edges
            .iter()
            .find(|&&(x, y, _)| x == lo && y == hi)
            .map(|&(_, _, w)| w)
    }

    /// Turns a Hamiltonian cycle of the bipartite graph that contains the
    /// forced matching into a tour of the original digraph.
    pub fn lift_cycle(&self, cycle: &[usize]) -> Result<Vec<usize>> {
        let len = cycle.len();
        if len != 2 * self.n {
            return Err(Error::DimensionMismatch { expected: 2 * self.n, got: len });
        }
        let start = cycle
            .iter()
            .position(|&x| x >= self.n)
            .expect("cycle contains in-nodes");
        let forward = cycle[(start + 1) % len] == cycle[start] - self.n;
        let step = |i: usize| {
            if forward {
                cycle[(start + i) % len]
            } else {
                cycle[(start + len - i) % len]
            }
        };
        let mut tour = Vec::with_capacity(self.n);
        for i in (0..len).step_by(2) {
            let (inn, out) = (step(i), step(i + 1));
            if inn < self.n || out + self.n != inn {
                return Err(Error::PreconditionViolated(
                    "cycle does not contain the forced matching".into(),
                ));
            }
            tour.push(out);
        }
        let zero = tour.iter().position(|&v| v == 0).expect("tour covers vertex 0");
        tour.rotate_left(zero);
        Ok(tour)
    }
}

impl fmt::Display for BfmInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p bfm {} {}", self.node_count(), self.edges.len())?;
        for &(a, b, w) in &self.edges {
            let tag = if self.is_forced(a, b) { 'f' } else { 'e' };
            writeln!(f, "{tag} {} {} {w}", a + 1, b + 1)?;
        }
        Ok(())
    }
}

/// Bipartite form: one out-copy and one in-copy per vertex, arc
/// `(u, v)` becomes `u^out - v^in`, and each `v^in - v^out` is forced.
pub fn atsp_to_bfm(g: &WeightedDigraph) -> BfmInstance {
    let n = g.vertex_count();
    let mut edges: Vec<_> = (0..n).map(|v| (v, n + v, 0)).collect();
    edges.extend(g.edges().map(|(u, v, w)| (u, n + v, w)));
    BfmInstance { n, edges }
}

/// Undirected graph on `3n` nodes: out-copies `0..n`, in-copies `n..2n`
/// and middle nodes `2n..3n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TspInstance {
    n: usize,
    edges: Vec<(usize, usize, Weight)>,
}

impl TspInstance {
    pub fn node_count(&self) -> usize {
        3 * self.n
    }

    pub fn mid_node(&self, v: usize) -> usize {
        2 * self.n + v
    }

    pub fn edges(&self) -> &[(usize, usize, Weight)] {
        &self.edges
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| a == node || b == node)
            .count()
    }

    /// Maps a Hamiltonian cycle of the undirected graph to a tour of the
    /// original digraph.
    pub fn lift_cycle(&self, cycle: &[usize]) -> Result<Vec<usize>> {
        if cycle.len() != 3 * self.n {
            return Err(Error::DimensionMismatch { expected: 3 * self.n, got: cycle.len() });
        }
        let bipartite: Vec<usize> = cycle.iter().copied().filter(|&x| x < 2 * self.n).collect();
        let shell = BfmInstance { n: self.n, edges: Vec::new() };
        shell.lift_cycle(&bipartite)
    }
}

impl fmt::Display for TspInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p tsp {} {}", self.node_count(), self.edges.len())?;
        for &(a, b, w) in &self.edges {
            writeln!(f, "e {} {} {w}", a + 1, b + 1)?;
        }
        Ok(())
    }
}

/// Undirected form: every forced edge `v^in - v^out` is subdivided by
/// a middle node, so any Hamiltonian cycle must use it.
pub fn bfm_to_tsp(b: &BfmInstance) -> TspInstance {
    let n = b.n;
    let mut edges = Vec::with_capacity(b.edges.len() + n);
    for v in 0..n {
        edges.push((n + v, 2 * n + v, 0));
        edges.push((2 * n + v, v, 0));
    }
    edges.extend_from_slice(b.free_edges());
    TspInstance { n, edges }
}

/// A (2,2)-graph obtained by contracting every forced arc of a
/// total-degree-3 digraph, plus what is needed to undo it.
#[derive(Clone, Debug)]
pub struct Reduced22 {
    pub graph: WeightedDigraph,
    /// Total weight of the contracted arcs.
    pub forced_weight: Weight,
    pub steps: Vec<Contraction>,
}

impl Reduced22 {
    /// Lifts a tour of `graph` to a tour of the original digraph.
    pub fn lift_tour(&self, tour: &[usize]) -> Vec<usize> {
        self.steps
            .iter()
            .rev()
            .fold(tour.to_vec(), |t, step| step.lift_tour(&t))
    }
}

/// Contracts arcs leaving outdegree-1 vertices or entering indegree-1
/// vertices until none is left or two vertices remain.
pub fn totdeg3_to_22(g: &WeightedDigraph) -> Result<Reduced22> {
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.indeg(v) + g.outdeg(v) > 3) {
        return Err(Error::PreconditionViolated(format!(
            "vertex {v} has total degree above 3"
        )));
    }
    let mut graph = g.clone();
    let mut forced_weight: Weight = 0;
    let mut steps = Vec::new();
    loop {
        let n = graph.vertex_count();
        let degrees_ok = (0..n).all(|v| {
            (1..=2).contains(&graph.outdeg(v)) && (1..=2).contains(&graph.indeg(v))
        });
        if !degrees_ok {
            return Err(Error::Infeasible);
        }
        if n <= 2 {
            break;
        }
        let forced = (0..n)
            .find(|&v| graph.outdeg(v) == 1)
            .map(|v| Arc::new(v, graph.out_neighbors(v)[0].0))
            .or_else(|| {
                (0..n)
                    .find(|&v| graph.indeg(v) == 1)
                    .map(|v| Arc::new(graph.in_neighbors(v)[0].0, v))
            });
        let Some(arc) = forced else { break };
        let (next, step) = contract_forced_edge(&graph, arc)?;
        forced_weight = forced_weight
            .checked_add(step.forced_weight)
            .ok_or(Error::WeightOverflow)?;
        steps.push(step);
        graph = next;
    }
    Ok(Reduced22 { graph, forced_weight, steps })
}

/// Splits each vertex `v` into `v^in = 2v` and `v^out = 2v + 1` joined by a
/// zero-weight arc; arc `(u, v)` becomes `(u^out, v^in)`.
pub fn orient_22_to_totdeg3(g: &WeightedDigraph) -> Result<WeightedDigraph> {
    let n = g.vertex_count();
    if let Some(v) = (0..n).find(|&v| g.outdeg(v) > 2 || g.indeg(v) > 2) {
        return Err(Error::PreconditionViolated(format!(
            "vertex {v} has in- or outdegree above 2"
        )));
    }
    let arcs = (0..n)
        .map(|v| (2 * v, 2 * v + 1, 0))
        .chain(g.edges().map(|(u, v, w)| (2 * u + 1, 2 * v, w)));
    WeightedDigraph::new(2 * n, arcs)
}

/// Maps a tour of the oriented graph back to the (2,2)-graph it came from.
pub fn lift_oriented_tour(tour: &[usize]) -> Vec<usize> {
    tour.iter().filter(|&&x| x % 2 == 0).map(|&x| x / 2).collect()
}
